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

#include "dieselnet/neurocontrol.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace dieselnet {

void ControllerTrainConfig::validate() const {
    if (epochs < 0) throw ValidationError("ControllerTrainConfig: epochs must be >= 0");
    if (n_hidden < 1) throw ValidationError("ControllerTrainConfig: n_hidden must be >= 1");
    if (!(delta > 0.0)) throw ValidationError("ControllerTrainConfig: delta must be > 0");
}

namespace {

// Regressor of one sub-model at step k against raw loop histories.
Eigen::VectorXd loop_regressor(const SubModel& m, const LoopHistory& hist, long k) {
    Eigen::VectorXd x(m.spec.total_inputs());
    int pos = 0;
    const std::vector<double>* own = nullptr;
    auto source = [&](const std::string& channel) -> const std::vector<double>& {
        if (channel == "T") return hist.T;
        if (channel == "R") return hist.R;
        if (channel == "P") return hist.P;
        if (channel == "mdot") return hist.mdot;
        if (channel == "Op") return hist.Op;
        throw ValidationError("loop_regressor: unknown channel '" + channel + "'");
    };
    own = &source(m.spec.output);
    const ChannelStats& out_stats = m.stats(m.spec.output);
    for (int i = 1; i <= m.spec.output_lags; ++i) {
        const long idx = k - i;
        if (idx < 0 || idx >= static_cast<long>(own->size())) {
            throw ValidationError("loop_regressor: insufficient history");
        }
        x(pos++) = out_stats.normalize((*own)[static_cast<std::size_t>(idx)]);
    }
    for (const InputTerm& term : m.spec.inputs) {
        const std::vector<double>& src = source(term.channel);
        const ChannelStats& stats = m.stats(term.channel);
        for (int i = 0; i < term.lags; ++i) {
            const long idx = k - (term.delay + i);
            if (idx < 0 || idx >= static_cast<long>(src.size())) {
                throw ValidationError("loop_regressor: insufficient history");
            }
            x(pos++) = stats.normalize(src[static_cast<std::size_t>(idx)]);
        }
    }
    return x;
}

// Smallest delay of a T term; the sample lag between a control move and its
// effect on the sub-model output.
int control_delay(const SubModel& m) {
    int d = -1;
    for (const InputTerm& term : m.spec.inputs) {
        if (term.channel == "T" && term.lags > 0) {
            d = d < 0 ? term.delay : std::min(d, term.delay);
        }
    }
    if (d < 0) {
        throw ValidationError("control sensitivities: sub-model '" + m.spec.output +
                              "' has no pump-position input");
    }
    return d;
}

ControllerInput controller_input_at(const LoopHistory& hist, long k, int d) {
    if (!hist.profile) {
        throw ValidationError("LoopHistory: profile not set");
    }
    if (k < 2 || static_cast<std::size_t>(k) > hist.R.size() ||
        static_cast<std::size_t>(k + d - 2) >= hist.Op.size()) {
        throw ValidationError("controller input: insufficient history at k=" +
                              std::to_string(k));
    }
    ControllerInput in;
    in.r_ref_next = hist.profile->r_at(k);
    in.r_current = hist.R[static_cast<std::size_t>(k - 1)];
    in.r_previous = hist.R[static_cast<std::size_t>(k - 2)];
    in.op_ref_ahead = hist.profile->op_at(k + d - 1);
    in.op_ahead = hist.Op[static_cast<std::size_t>(k + d - 2)];
    return in;
}

}  // namespace

SensitivityPair sensitivity_psi(const EngineModel& model, const Controller& ctrl,
                                const LoopHistory& hist, int k) {
    if (!hist.profile) throw ValidationError("sensitivity_psi: profile not set");
    const int d = model.delay;
    if (k < 3 || static_cast<std::size_t>(k) >= hist.R.size() ||
        static_cast<std::size_t>(k + d - 1) >= hist.Op.size() ||
        static_cast<std::size_t>(k) > hist.T.size()) {
        throw ValidationError("sensitivity_psi: insufficient history at k=" +
                              std::to_string(k));
    }
    if (control_delay(model.speed) != 1 || control_delay(model.opacity) != d) {
        throw ValidationError("sensitivity_psi: model structure incompatible with the "
                              "one-step speed / d-step opacity pairing");
    }

    // dU/dW of the move T(k-1), evaluated at the inputs that produced it.
    const ControllerInput z = controller_input_at(hist, k - 1, d);
    const Eigen::VectorXd du_dw = ctrl.weight_jacobian(z);

    // Speed error at k, caused by T(k-1) through the speed network.
    const Eigen::VectorXd x_speed = loop_regressor(model.speed, hist, k);
    const double dR_dT = normalized_output_partial(model.speed, x_speed, "T", 1);
    const ChannelStats& r_stats = model.speed.stats("R");

    // Opacity error at k+d-1, caused by T(k-1) through the direct pump input
    // of the opacity network.
    const Eigen::VectorXd x_op = loop_regressor(model.opacity, hist, k + d - 1);
    const double dOp_dT = normalized_output_partial(model.opacity, x_op, "T", d);
    const ChannelStats& op_stats = model.opacity.stats("Op");

    SensitivityPair pair;
    pair.psi_y = -dR_dT * du_dw;
    pair.psi_z = -dOp_dT * du_dw;
    pair.e_y = r_stats.normalize(hist.profile->r_at(k)) -
               r_stats.normalize(hist.R[static_cast<std::size_t>(k)]);
    pair.e_z = op_stats.normalize(hist.profile->op_at(k + d - 1)) -
               op_stats.normalize(hist.Op[static_cast<std::size_t>(k + d - 1)]);
    return pair;
}

namespace {

struct SettledPoint {
    double pump;
    double R, P, mdot, Op;
};

SettledPoint settle_model(const EngineModel& model, double pump, int steps) {
    const int start = model.min_history();
    const EngineInit init = EngineInit::constant(
        model.speed.stats("R").mean, model.pressure.stats("P").mean,
        model.airflow.stats("mdot").mean, model.opacity.stats("Op").mean, start);
    const std::vector<double> constant_pump(static_cast<std::size_t>(steps), pump);
    const EngineTrajectories traj = simulate_engine_model(model, constant_pump, init);
    SettledPoint p;
    p.pump = pump;
    p.R = traj.R.back();
    p.P = traj.P.back();
    p.mdot = traj.mdot.back();
    p.Op = traj.Op.back();
    return p;
}

struct EpochOutcome {
    RunResult run;
    double J = 0.0;
};

/**
 * One pass of the closed loop against the model. With a trainer attached the
 * recursive Gauss-Newton update runs on every aligned error pair; without
 * one the pass only evaluates the criterion. The opacity history runs d-1
 * samples ahead of the other channels (the model lookahead), which is what
 * makes the e_y(k) / e_z(k+d-1) pair of one control move available together.
 */
struct ModelLoop {
    const EngineModel& model;
    const ReferenceProfile& profile;
    SettledPoint origin;
    int start;
    long n;

    ModelLoop(const EngineModel& m, const ReferenceProfile& pr)
        : model(m), profile(pr) {
        profile.validate();
        const double t0 = pump_for_speed(model, profile.r_ref.front());
        origin = settle_model(model, t0, 1500);
        start = std::max(model.min_history(), 3);
        n = static_cast<long>(profile.size());
        if (n <= start + 2) {
            throw ValidationError("train/run: profile shorter than the loop history");
        }
    }

    struct Trainer {
        RlsState state;
        CriterionWeights weights;
    };

    EpochOutcome run(Controller& ctrl, Trainer* trainer) const {
        const int d = model.delay;
        LoopHistory hist;
        hist.profile = &profile;
        hist.T.assign(static_cast<std::size_t>(start), origin.pump);
        hist.R.assign(static_cast<std::size_t>(start), origin.R);
        hist.P.assign(static_cast<std::size_t>(start), origin.P);
        hist.mdot.assign(static_cast<std::size_t>(start), origin.mdot);
        // Opacity lookahead: seeded through start+d-2 so the controller's
        // opacity input exists from the first controlled sample.
        hist.Op.assign(static_cast<std::size_t>(start + d - 1), origin.Op);

        CriterionWeights jw = trainer ? trainer->weights : CriterionWeights{1.0, 0.0};
        double J = 0.0;

        for (long k = start; k < n; ++k) {
            // Control move T(k) from information strictly before k.
            const ControllerInput z = controller_input_at(hist, k, d);
            hist.T.push_back(ctrl.forward(z));

            // Advance the model to k; the opacity estimate advances to k+d-1.
            hist.R.push_back(model.speed.stats("R").denormalize(
                model.speed.net.forward(loop_regressor(model.speed, hist, k))));
            hist.P.push_back(model.pressure.stats("P").denormalize(
                model.pressure.net.forward(loop_regressor(model.pressure, hist, k))));
            hist.mdot.push_back(model.airflow.stats("mdot").denormalize(
                model.airflow.net.forward(loop_regressor(model.airflow, hist, k))));
            hist.Op.push_back(model.opacity.stats("Op").denormalize(
                model.opacity.net.forward(loop_regressor(model.opacity, hist, k + d - 1))));

            if (!std::isfinite(hist.R.back()) || !std::isfinite(hist.Op.back())) {
                throw NumericalFault("closed loop: model diverged at sample " +
                                     std::to_string(k));
            }

            // The first loop iteration pairs with the init pump value, which
            // the controller did not produce; updates begin one sample later.
            if (k > start) {
                const SensitivityPair pair = sensitivity_psi(model, ctrl, hist, static_cast<int>(k));
                J += 0.5 * (jw.eta_y * pair.e_y * pair.e_y +
                            jw.eta_z * pair.e_z * pair.e_z);
                if (trainer) {
                    trainer->state = rls_update_multi(trainer->state, pair, trainer->weights);
                    ctrl.set_weights(trainer->state.W);
                }
            }
        }

        EpochOutcome out;
        out.J = J;
        out.run.profile = profile;
        out.run.start = start;
        out.run.U = hist.T;
        out.run.R = hist.R;
        out.run.P = hist.P;
        out.run.mdot = hist.mdot;
        out.run.Op = std::vector<double>(hist.Op.begin(), hist.Op.begin() + n);
        out.run.metrics = compute_metrics(out.run.R, out.run.Op, profile, start);
        return out;
    }
};

}  // namespace

double settled_model_speed(const EngineModel& model, double pump, int steps) {
    return settle_model(model, pump, steps).R;
}

double pump_for_speed(const EngineModel& model, double rpm, double lo, double hi,
                      int iters) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        (settled_model_speed(model, mid) < rpm ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double settled_model_opacity(const EngineModel& model, double rpm) {
    return settle_model(model, pump_for_speed(model, rpm), 1500).Op;
}

RunResult run_closed_loop(const EngineModel& model, const Controller& ctrl,
                          const ReferenceProfile& profile) {
    const ModelLoop loop(model, profile);
    Controller frozen = ctrl;
    return loop.run(frozen, nullptr).run;
}

ControllerTrainResult train_controller(const EngineModel& model,
                                       const ReferenceProfile& profile,
                                       const CriterionWeights& weights,
                                       const ControllerTrainConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    return train_controller(model, profile, weights, cfg,
                            Controller::random(model, cfg.n_hidden, rng));
}

ControllerTrainResult train_controller(const EngineModel& model,
                                       const ReferenceProfile& profile,
                                       const CriterionWeights& weights,
                                       const ControllerTrainConfig& cfg,
                                       Controller initial) {
    cfg.validate();
    weights.validate();

    ControllerTrainResult result{std::move(initial), {}};
    if (cfg.epochs == 0) {
        return result;
    }

    const ModelLoop loop(model, profile);
    Controller working = result.controller;
    Eigen::VectorXd best_w = working.weights();
    double best_j = std::numeric_limits<double>::infinity();

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        ModelLoop::Trainer trainer{RlsState::initial(working.weights(), cfg.delta), weights};
        try {
            loop.run(working, &trainer);
        } catch (const NumericalFault& fault) {
            std::ostringstream msg;
            msg << "train_controller: diverged in epoch " << epoch << " (" << fault.what()
                << ")";
            throw NumericalFault(msg.str());
        }
        working.set_weights(trainer.state.W);

        // Frozen-weight evaluation pass scores the epoch.
        Controller frozen = working;
        const EpochOutcome eval = loop.run(frozen, nullptr);
        if (!std::isfinite(eval.J)) {
            std::ostringstream msg;
            msg << "train_controller: non-finite criterion after epoch " << epoch;
            throw NumericalFault(msg.str());
        }

        EpochMetrics em;
        em.epoch = epoch;
        em.J = eval.J;
        em.rmse_speed = eval.run.metrics.rmse_speed;
        em.max_opacity = eval.run.metrics.max_opacity;
        em.eta_op = weights.eta_z;
        result.metrics.push_back(em);

        if (eval.J < best_j) {
            best_j = eval.J;
            best_w = working.weights();
        }
    }

    result.controller.set_weights(best_w);
    return result;
}

void save_training_metrics(const std::vector<EpochMetrics>& metrics,
                           const std::string& path, const std::string& digest) {
    std::ofstream out(path);
    if (!out) throw ValidationError("save_training_metrics: cannot open '" + path + "'");
    out.precision(std::numeric_limits<double>::max_digits10);
    if (!digest.empty()) out << "# config_digest " << digest << '\n';
    out << "epoch,J,rmse_speed,max_opacity,eta_op\n";
    for (const EpochMetrics& m : metrics) {
        out << m.epoch << ',' << m.J << ',' << m.rmse_speed << ',' << m.max_opacity << ','
            << m.eta_op << '\n';
    }
}

}  // namespace dieselnet
