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

#include <cstdint>
#include <string>
#include <vector>

#include "dieselnet/closed_loop.hpp"
#include "dieselnet/rls.hpp"

namespace dieselnet {

/**
 * Rolling closed-loop histories (engineering units). T and the three fast
 * channels run together; the opacity estimate runs d-1 samples ahead of the
 * speed channel so that the error pair of one control move is available in
 * the same step.
 */
struct LoopHistory {
    std::vector<double> T;
    std::vector<double> R;
    std::vector<double> P;
    std::vector<double> mdot;
    std::vector<double> Op;
    const ReferenceProfile* profile = nullptr;
};

/**
 * Error sensitivities of the control move T(k-1): the speed error it causes
 * at sample k and the opacity error at sample k+d-1, with
 * Psi = -(d yhat/d T(k-1)) * dU/dW. dU/dW depends on the controller structure
 * only; the model partials come from the speed and opacity networks. Errors
 * are normalized with the model's channel statistics.
 */
SensitivityPair sensitivity_psi(const EngineModel& model, const Controller& ctrl,
                                const LoopHistory& hist, int k);

struct ControllerTrainConfig {
    int epochs = 40;
    int n_hidden = 6;
    double delta = 1000.0;   ///< P_0 = delta I, reset each epoch
    std::uint64_t seed = 99;

    void validate() const;
};

struct EpochMetrics {
    int epoch = 0;
    double J = 0.0;            ///< evaluation criterion, normalized units
    double rmse_speed = 0.0;   ///< rpm
    double max_opacity = 0.0;  ///< %
    double eta_op = 0.0;
};

struct ControllerTrainResult {
    Controller controller;
    std::vector<EpochMetrics> metrics;
};

/**
 * Specialized training against the engine model: every epoch resets the
 * model state and the covariance P_0 = delta I, steps the closed loop, and
 * applies the two-output recursive Gauss-Newton update per aligned error
 * pair. Returns the end-of-epoch controller with the smallest evaluation
 * criterion.
 */
ControllerTrainResult train_controller(const EngineModel& model,
                                       const ReferenceProfile& profile,
                                       const CriterionWeights& weights,
                                       const ControllerTrainConfig& cfg);

/// Same, continuing from a caller-supplied controller.
ControllerTrainResult train_controller(const EngineModel& model,
                                       const ReferenceProfile& profile,
                                       const CriterionWeights& weights,
                                       const ControllerTrainConfig& cfg,
                                       Controller initial);

/// epoch,J,rmse_speed,max_opacity,eta_op rows.
void save_training_metrics(const std::vector<EpochMetrics>& metrics,
                           const std::string& path, const std::string& digest = "");

/// Settled model speed under constant pump position.
double settled_model_speed(const EngineModel& model, double pump, int steps = 1500);

/// Bisection for the pump position whose settled model speed matches rpm.
double pump_for_speed(const EngineModel& model, double rpm, double lo = 1.0,
                      double hi = 99.0, int iters = 60);

/// Settled opacity of the model at a given speed level (steady-map Op_ref).
double settled_model_opacity(const EngineModel& model, double rpm);

}  // namespace dieselnet
