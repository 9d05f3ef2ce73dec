/*
 * Copyright 2026 the dieselnet authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "dieselnet/fit.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace dieselnet {

namespace {

ChannelData collect_channels(const SignalLog& log, const RegressorSpec& spec) {
    ChannelData data;
    for (const InputTerm& term : spec.inputs) {
        if (term.lags > 0 && data.find(term.channel) == data.end()) {
            data[term.channel] = log.channel(term.channel);
        }
    }
    return data;
}

Normalization collect_norm(const SignalLog& log, const RegressorSpec& spec) {
    Normalization norm;
    norm[spec.output] = compute_stats(log.channel(spec.output));
    for (const InputTerm& term : spec.inputs) {
        if (term.lags > 0 && norm.find(term.channel) == norm.end()) {
            norm[term.channel] = compute_stats(log.channel(term.channel));
        }
    }
    return norm;
}

}  // namespace

FitResult fit_oe_model(const SignalLog& log, const RegressorSpec& spec, int n_hidden,
                       const FitConfig& cfg) {
    spec.validate();
    if (log.empty()) {
        throw ValidationError("fit_oe_model: empty log");
    }

    const ChannelData channels = collect_channels(log, spec);
    const Normalization norm = collect_norm(log, spec);
    const std::vector<double> measured = log.channel(spec.output);
    const ChannelStats out_stats = norm.at(spec.output);

    const int start = spec.min_start();
    const int n_all = static_cast<int>(log.size());
    const int n_res = n_all - start;
    const int n_params = n_hidden * (spec.total_inputs() + 1) + n_hidden + 1;
    if (n_res <= n_params) {
        std::ostringstream msg;
        msg << "fit_oe_model('" << spec.output << "'): ill-posed, " << n_res
            << " residuals for " << n_params << " parameters";
        throw ValidationError(msg.str());
    }

    // Measured values seed the initial output history (OE bootstrapping).
    const std::vector<double> init(measured.begin(), measured.begin() + start);

    Eigen::VectorXd target_norm(n_res);
    for (int k = 0; k < n_res; ++k) {
        target_norm(k) = out_stats.normalize(measured[static_cast<std::size_t>(k + start)]);
    }

    auto make_submodel = [&](const Eigen::VectorXd& theta) {
        return SubModel{Mlp(spec.total_inputs(), n_hidden, theta), spec, norm};
    };

    const ResidualOracle residual = [&](const Eigen::VectorXd& theta) -> Eigen::VectorXd {
        const SubModel m = make_submodel(theta);
        const std::vector<double> sim = simulate_submodel(m, channels, init);
        Eigen::VectorXd r(n_res);
        for (int k = 0; k < n_res; ++k) {
            r(k) = target_norm(k) - out_stats.normalize(sim[static_cast<std::size_t>(k + start)]);
        }
        return r;
    };
    const JacobianOracle jacobian = [&](const Eigen::VectorXd& theta) -> Eigen::MatrixXd {
        const SubModel m = make_submodel(theta);
        const OeSensitivities sens = oe_sensitivities(m, channels, init);
        return -sens.d_theta.bottomRows(n_res);
    };

    const int n_starts = std::max(1, cfg.n_starts);
    std::optional<FitResult> best;
    int attempt = 0;
    int completed = 0;
    while (completed < n_starts && attempt <= cfg.max_restarts + n_starts - 1) {
        Rng rng(cfg.seed + static_cast<std::uint64_t>(attempt) * 0x9e37ULL);
        const Mlp initial = Mlp::random(spec.total_inputs(), n_hidden, rng);
        ++attempt;
        try {
            const LmResult lm = lm_train(residual, jacobian, initial.params(), cfg.lm);
            if (!best || lm.sse < best->sse) {
                best = FitResult{make_submodel(lm.theta), lm.sse, n_res, attempt - 1};
            }
            ++completed;
        } catch (const NumericalFault&) {
            // divergence burns one of the restart allowance
        }
    }
    if (!best) {
        std::ostringstream msg;
        msg << "fit_oe_model('" << spec.output << "'): diverged after " << attempt
            << " attempts";
        throw NumericalFault(msg.str());
    }
    return *best;
}

double fpe(double sse, int n_samples, int n_params) {
    if (sse < 0.0) throw ValidationError("fpe: sse must be >= 0");
    if (n_params < 1) throw ValidationError("fpe: p must be >= 1");
    if (n_samples <= n_params) {
        std::ostringstream msg;
        msg << "fpe: need N > p, got N=" << n_samples << " p=" << n_params;
        throw ValidationError(msg.str());
    }
    const double n = static_cast<double>(n_samples);
    const double p = static_cast<double>(n_params);
    return (sse / n) * (n + p) / (n - p);
}

SelectResult select_structure(const SignalLog& log,
                              const std::vector<RegressorSpec>& order_grid,
                              const SelectConfig& cfg) {
    if (order_grid.empty()) {
        throw ValidationError("select_structure: empty order grid");
    }
    if (cfg.node_grid.empty()) {
        throw ValidationError("select_structure: empty node grid");
    }

    FpeReport report;
    std::optional<SubModel> best_model;

    auto run_candidate = [&](const RegressorSpec& spec, int n_hidden, int phase) {
        FpeCandidate cand;
        cand.spec = spec;
        cand.n_hidden = n_hidden;
        cand.phase = phase;
        try {
            const FitResult fit = fit_oe_model(log, spec, n_hidden, cfg.fit);
            cand.sse = fit.sse;
            cand.n_samples = fit.n_residuals;
            cand.n_params = fit.model.net.param_count();
            cand.fpe = fpe(cand.sse, cand.n_samples, cand.n_params);
            report.candidates.push_back(cand);
            return std::optional<std::pair<FpeCandidate, SubModel>>({cand, fit.model});
        } catch (const std::exception&) {
            cand.failed = true;
            cand.fpe = std::numeric_limits<double>::infinity();
            report.candidates.push_back(cand);
            return std::optional<std::pair<FpeCandidate, SubModel>>();
        }
    };

    // Phase 1: order sweep at the fixed large node count.
    std::optional<RegressorSpec> best_order;
    double best_fpe = std::numeric_limits<double>::infinity();
    for (const RegressorSpec& spec : order_grid) {
        const auto out = run_candidate(spec, cfg.phase1_hidden, 1);
        if (out && out->first.fpe < best_fpe) {
            best_fpe = out->first.fpe;
            best_order = spec;
        }
    }
    if (!best_order) {
        throw NumericalFault("select_structure: every order candidate diverged");
    }

    // Phase 2: node sweep at the selected order.
    best_fpe = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (int nodes : cfg.node_grid) {
        const auto out = run_candidate(*best_order, nodes, 2);
        if (out && out->first.fpe < best_fpe) {
            best_fpe = out->first.fpe;
            best_model = out->second;
            best_index = report.candidates.size() - 1;
        }
    }
    if (!best_model) {
        throw NumericalFault("select_structure: every node candidate diverged");
    }

    report.candidates[best_index].selected = true;
    report.best = report.candidates[best_index];
    return SelectResult{std::move(report), std::move(*best_model)};
}

void save_fpe_report(const FpeReport& report, const std::string& path,
                     const std::string& digest) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("save_fpe_report: cannot open '" + path + "'");
    }
    out.precision(std::numeric_limits<double>::max_digits10);
    if (!digest.empty()) {
        out << "# config_digest " << digest << '\n';
    }
    out << "order_spec,n_hidden,sse,p,N,fpe,selected\n";
    for (const FpeCandidate& c : report.candidates) {
        out << c.spec.to_string() << ',' << c.n_hidden << ',' << c.sse << ','
            << c.n_params << ',' << c.n_samples << ',' << c.fpe << ','
            << (c.selected ? 1 : 0) << '\n';
    }
}

}  // namespace dieselnet
