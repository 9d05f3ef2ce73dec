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

#include "dieselnet/submodel.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace dieselnet {

ChannelStats compute_stats(const std::vector<double>& values) {
    if (values.empty()) {
        throw ValidationError("compute_stats: empty channel");
    }
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    ChannelStats stats;
    stats.mean = mean;
    // Constant channels get unit scale so normalization stays invertible.
    stats.scale = var > 1e-24 ? std::sqrt(var) : 1.0;
    return stats;
}

void SubModel::validate() const {
    spec.validate();
    if (net.n_in() != spec.total_inputs()) {
        std::ostringstream msg;
        msg << "SubModel '" << spec.output << "': network has " << net.n_in()
            << " inputs, regressor spec defines " << spec.total_inputs();
        throw ValidationError(msg.str());
    }
    if (norm.find(spec.output) == norm.end()) {
        throw ValidationError("SubModel '" + spec.output + "': missing output stats");
    }
    for (const InputTerm& term : spec.inputs) {
        if (term.channel == spec.output) {
            throw ValidationError("SubModel '" + spec.output +
                                  "': output lags must use output_lags, not an input term");
        }
        if (term.lags > 0 && norm.find(term.channel) == norm.end()) {
            throw ValidationError("SubModel '" + spec.output + "': missing stats for '" +
                                  term.channel + "'");
        }
    }
    for (const auto& [name, stats] : norm) {
        if (!(stats.scale > 0.0)) {
            throw ValidationError("SubModel: non-positive scale for '" + name + "'");
        }
    }
}

const ChannelStats& SubModel::stats(const std::string& channel) const {
    const auto it = norm.find(channel);
    if (it == norm.end()) {
        throw ValidationError("SubModel: no stats for channel '" + channel + "'");
    }
    return it->second;
}

int SubModel::regressor_index(const std::string& channel, int delay, int lag_offset) const {
    const int want = delay + lag_offset;
    if (channel == spec.output) {
        if (want < 1 || want > spec.output_lags) {
            throw ValidationError("SubModel: no output lag at delay " + std::to_string(want));
        }
        return want - 1;
    }
    int base = spec.output_lags;
    for (const InputTerm& term : spec.inputs) {
        if (term.channel == channel && want >= term.delay && want < term.delay + term.lags) {
            return base + (want - term.delay);
        }
        base += term.lags;
    }
    throw ValidationError("SubModel: no regressor for '" + channel + "' at delay " +
                          std::to_string(want));
}

namespace {

struct SimContext {
    const SubModel& m;
    const ChannelData& channels;
    std::size_t n = 0;
    std::vector<const std::vector<double>*> exo;  // per input term
    std::vector<ChannelStats> exo_stats;
    ChannelStats out_stats;

    SimContext(const SubModel& model, const ChannelData& data)
        : m(model), channels(data), out_stats(model.stats(model.spec.output)) {
        m.validate();
        for (const InputTerm& term : m.spec.inputs) {
            const auto it = channels.find(term.channel);
            if (it == channels.end()) {
                throw ValidationError("simulate_submodel: missing channel '" + term.channel +
                                      "'");
            }
            if (n == 0) {
                n = it->second.size();
            } else if (it->second.size() != n) {
                throw ValidationError("simulate_submodel: channel length mismatch for '" +
                                      term.channel + "'");
            }
            exo.push_back(&it->second);
            exo_stats.push_back(m.stats(term.channel));
        }
        if (exo.empty()) {
            throw ValidationError("simulate_submodel: spec has no exogenous inputs");
        }
        if (static_cast<int>(n) <= m.spec.min_start()) {
            throw ValidationError("simulate_submodel: data shorter than the regressor span");
        }
    }

    // Regressor at time k, output lags read from ynorm.
    Eigen::VectorXd regressor(const std::vector<double>& ynorm, std::size_t k) const {
        Eigen::VectorXd x(m.spec.total_inputs());
        int pos = 0;
        for (int i = 1; i <= m.spec.output_lags; ++i) {
            x(pos++) = ynorm[k - static_cast<std::size_t>(i)];
        }
        for (std::size_t t = 0; t < exo.size(); ++t) {
            const InputTerm& term = m.spec.inputs[t];
            for (int i = 0; i < term.lags; ++i) {
                const std::size_t idx = k - static_cast<std::size_t>(term.delay + i);
                x(pos++) = exo_stats[t].normalize((*exo[t])[idx]);
            }
        }
        return x;
    }

    // Simulation starts after the whole provided history, never earlier than
    // the regressor span.
    int start_index(const std::vector<double>& init_output) const {
        const int span = m.spec.min_start();
        if (static_cast<int>(init_output.size()) < span) {
            std::ostringstream msg;
            msg << "simulate_submodel: initial output history has " << init_output.size()
                << " samples, regressor span needs " << span;
            throw ValidationError(msg.str());
        }
        if (init_output.size() >= n) {
            throw ValidationError("simulate_submodel: init history covers the whole log");
        }
        return static_cast<int>(init_output.size());
    }

    std::vector<double> seed_output(const std::vector<double>& init_output) const {
        std::vector<double> ynorm(n, 0.0);
        for (std::size_t k = 0; k < init_output.size(); ++k) {
            ynorm[k] = out_stats.normalize(init_output[k]);
        }
        return ynorm;
    }
};

}  // namespace

std::vector<double> simulate_submodel(const SubModel& m, const ChannelData& channels,
                                      const std::vector<double>& init_output) {
    const SimContext ctx(m, channels);
    const auto start = static_cast<std::size_t>(ctx.start_index(init_output));
    std::vector<double> ynorm = ctx.seed_output(init_output);
    for (std::size_t k = start; k < ctx.n; ++k) {
        ynorm[k] = m.net.forward(ctx.regressor(ynorm, k));
    }
    std::vector<double> out(ctx.n);
    for (std::size_t k = 0; k < ctx.n; ++k) {
        out[k] = ctx.out_stats.denormalize(ynorm[k]);
    }
    return out;
}

OeSensitivities oe_sensitivities(const SubModel& m, const ChannelData& channels,
                                 const std::vector<double>& init_output) {
    const SimContext ctx(m, channels);
    const auto start = static_cast<std::size_t>(ctx.start_index(init_output));
    std::vector<double> ynorm = ctx.seed_output(init_output);

    const int p = m.net.param_count();
    OeSensitivities res;
    res.d_theta = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ctx.n), p);

    for (std::size_t k = start; k < ctx.n; ++k) {
        const Eigen::VectorXd x = ctx.regressor(ynorm, k);
        const Mlp::Eval ev = m.net.evaluate(x);
        ynorm[k] = ev.value;
        auto row = res.d_theta.row(static_cast<Eigen::Index>(k));
        row = ev.d_weights.transpose();
        // Chain through the model's own delayed outputs.
        for (int i = 1; i <= m.spec.output_lags; ++i) {
            row += ev.d_input(i - 1) *
                   res.d_theta.row(static_cast<Eigen::Index>(k - static_cast<std::size_t>(i)));
        }
    }
    res.output_norm = std::move(ynorm);
    return res;
}

void save_submodel(const SubModel& m, const std::string& path, const std::string& digest) {
    m.validate();
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("save_submodel: cannot open '" + path + "'");
    }
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "dieselnet-submodel 1\n";
    if (!digest.empty()) {
        out << "digest " << digest << '\n';
    }
    out << "output " << m.spec.output << '\n';
    out << "spec " << m.spec.to_string() << '\n';
    out << "norm " << m.norm.size() << '\n';
    for (const auto& [name, stats] : m.norm) {
        out << name << ' ' << stats.mean << ' ' << stats.scale << '\n';
    }
    m.net.save(out);
    if (!out) {
        throw ValidationError("save_submodel: write to '" + path + "' failed");
    }
}

SubModel load_submodel(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("load_submodel: cannot open '" + path + "'");
    }
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "dieselnet-submodel" || version != 1) {
        throw ValidationError("load_submodel: bad header in '" + path + "'");
    }
    std::string key, output, encoded;
    if (!(in >> key)) {
        throw ValidationError("load_submodel: truncated file");
    }
    if (key == "digest") {
        std::string ignored;
        in >> ignored >> key;
    }
    if (key != "output" || !(in >> output)) {
        throw ValidationError("load_submodel: missing output line");
    }
    if (!(in >> key >> encoded) || key != "spec") {
        throw ValidationError("load_submodel: missing spec line");
    }
    std::size_t n_norm = 0;
    if (!(in >> key >> n_norm) || key != "norm") {
        throw ValidationError("load_submodel: missing norm line");
    }
    Normalization norm;
    for (std::size_t i = 0; i < n_norm; ++i) {
        std::string name;
        ChannelStats stats;
        if (!(in >> name >> stats.mean >> stats.scale)) {
            throw ValidationError("load_submodel: truncated norm table");
        }
        norm[name] = stats;
    }
    SubModel m{Mlp::load(in), RegressorSpec::from_string(output, encoded), std::move(norm)};
    m.validate();
    return m;
}

}  // namespace dieselnet
