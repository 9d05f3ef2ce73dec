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

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "dieselnet/common.hpp"

namespace dieselnet {

struct LmConfig {
    double lambda0 = 1e-2;       ///< initial damping
    double lambda_up = 10.0;     ///< multiplier on rejected step, > 1
    double lambda_down = 0.1;    ///< multiplier on accepted step, in (0,1)
    double lambda_max = 1e12;    ///< bail out once damping exceeds this
    int max_iterations = 500;
    double tolerance = 1e-9;     ///< relative SSE decrease over an accepted step
    std::uint64_t seed = 1;      ///< weight initialization seed for callers

    void validate() const;
};

struct LmIteration {
    int iteration;
    double sse;
    double lambda;
    bool accepted;
};

struct LmResult {
    Eigen::VectorXd theta;
    double sse;
    std::vector<LmIteration> history;
    bool converged;  ///< tolerance reached (as opposed to iteration/damping cap)
};

using ResidualOracle = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianOracle = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/**
 * Batch Levenberg-Marquardt over an arbitrary residual oracle.
 *
 * Each step solves (J^T J + lambda I) dtheta = -J^T r and is accepted only if
 * it lowers r^T r, so the accepted-step SSE sequence is non-increasing.
 */
LmResult lm_train(const ResidualOracle& residual,
                  const JacobianOracle& jacobian,
                  const Eigen::VectorXd& theta0,
                  const LmConfig& cfg = {});

}  // namespace dieselnet
