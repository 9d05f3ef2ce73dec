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
#include <vector>

#include "dieselnet/signal_log.hpp"
#include "dieselnet/submodel.hpp"

namespace dieselnet {

/**
 * The interconnected simulation model: speed from the pump position alone,
 * pressure from speed, airflow from pressure and speed, opacity from its own
 * past plus the delayed pump position, speed and airflow estimates. The
 * composite's single input is T.
 */
struct EngineModel {
    SubModel speed;     ///< output R
    SubModel pressure;  ///< output P
    SubModel airflow;   ///< output mdot
    SubModel opacity;   ///< output Op
    int delay = 4;      ///< d, the opacity transport delay in samples

    /// Chain order used throughout: R, P, mdot, Op.
    const SubModel& submodel(const std::string& output) const;

    /// Samples of history every channel needs before simulation can start.
    int min_history() const;
};

/// Validates wiring (outputs named R/P/mdot/Op, inputs only T or upstream
/// outputs, delay matching the opacity spec) and returns the composite.
EngineModel assemble_engine_model(SubModel speed, SubModel pressure, SubModel airflow,
                                  SubModel opacity);

/// Initial channel histories in engineering units, each at least
/// EngineModel::min_history() long.
struct EngineInit {
    std::vector<double> R;
    std::vector<double> P;
    std::vector<double> mdot;
    std::vector<double> Op;

    static EngineInit from_log(const SignalLog& log, int length);
    static EngineInit constant(double R, double P, double mdot, double Op, int length);
};

struct EngineTrajectories {
    std::vector<double> R;
    std::vector<double> P;
    std::vector<double> mdot;
    std::vector<double> Op;
};

/// Free-run simulation of the composite under a pump-position sequence.
EngineTrajectories simulate_engine_model(const EngineModel& model,
                                         const std::vector<double>& pump,
                                         const EngineInit& init);

/// Directory of four sub-model files plus a manifest naming the wiring and d.
void save_engine_model(const EngineModel& model, const std::string& dir,
                       const std::string& digest = "");
EngineModel load_engine_model(const std::string& dir);

/// d(normalized submodel output)/d(raw channel value at the given delay),
/// evaluated at a regressor vector. The raw-unit partial used by the
/// controller sensitivities.
double normalized_output_partial(const SubModel& m, const Eigen::VectorXd& regressor,
                                 const std::string& channel, int delay);

}  // namespace dieselnet
