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

#pragma once

#include <string>

#include "dieselnet/engine_model.hpp"
#include "dieselnet/mlp.hpp"

namespace dieselnet {

/// The five controller inputs, engineering units. Following the model
/// equations, U(k) is computed from information available strictly before
/// sample k; the opacity pair looks d-1 samples ahead of the speed pair.
struct ControllerInput {
    double r_ref_next;   ///< R_ref at the sample the control acts on
    double r_current;    ///< latest speed
    double r_previous;   ///< speed one sample earlier
    double op_ref_ahead; ///< Op_ref, d samples ahead
    double op_ahead;     ///< opacity estimate, d-1 samples ahead
};

/**
 * Neural speed controller: a 5-input MLP whose raw output passes through a
 * smooth actuator saturation onto (0,100)% so dU/dW stays defined
 * everywhere. Inputs are normalized with the engine model's R and Op
 * statistics.
 */
class Controller {
public:
    Controller(Mlp net, ChannelStats r_stats, ChannelStats op_stats, int delay);

    /// Seeded small-weight controller sharing the model's normalization.
    static Controller random(const EngineModel& model, int n_hidden, Rng& rng);

    const Mlp& net() const { return net_; }
    int delay() const { return delay_; }
    int param_count() const { return net_.param_count(); }
    const Eigen::VectorXd& weights() const { return net_.params(); }
    void set_weights(const Eigen::VectorXd& w) { net_.set_params(w); }
    const ChannelStats& r_stats() const { return r_stats_; }
    const ChannelStats& op_stats() const { return op_stats_; }

    Eigen::VectorXd normalized_input(const ControllerInput& in) const;

    /// Pump position in percent, strictly inside (0,100).
    double forward(const ControllerInput& in) const;

    /// dU/dW through the saturation; length param_count().
    Eigen::VectorXd weight_jacobian(const ControllerInput& in) const;

    struct Eval {
        double u;
        Eigen::VectorXd d_weights;
    };
    Eval evaluate(const ControllerInput& in) const;

    void save(const std::string& path, const std::string& digest = "") const;
    static Controller load(const std::string& path);

private:
    Mlp net_;
    ChannelStats r_stats_;
    ChannelStats op_stats_;
    int delay_;
};

}  // namespace dieselnet
