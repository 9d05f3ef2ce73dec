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

#include "dieselnet/levenberg.hpp"

#include <sstream>

namespace dieselnet {

void LmConfig::validate() const {
    if (lambda0 <= 0.0) throw ValidationError("LmConfig: lambda0 must be > 0");
    if (lambda_up <= 1.0) throw ValidationError("LmConfig: lambda_up must be > 1");
    if (lambda_down <= 0.0 || lambda_down >= 1.0) {
        throw ValidationError("LmConfig: lambda_down must be in (0,1)");
    }
    if (tolerance <= 0.0) throw ValidationError("LmConfig: tolerance must be > 0");
    if (max_iterations < 0) throw ValidationError("LmConfig: max_iterations must be >= 0");
}

LmResult lm_train(const ResidualOracle& residual,
                  const JacobianOracle& jacobian,
                  const Eigen::VectorXd& theta0,
                  const LmConfig& cfg) {
    cfg.validate();

    Eigen::VectorXd theta = theta0;
    Eigen::VectorXd r = residual(theta);
    if (!r.allFinite()) {
        throw NumericalFault("lm_train: non-finite residual at initial parameters");
    }
    double sse = r.squaredNorm();

    LmResult result;
    result.converged = false;
    result.history.push_back({0, sse, cfg.lambda0, true});

    double lambda = cfg.lambda0;
    const Eigen::Index p = theta.size();

    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        const Eigen::MatrixXd J = jacobian(theta);
        if (J.rows() != r.size() || J.cols() != p) {
            std::ostringstream msg;
            msg << "lm_train: Jacobian shape (" << J.rows() << "x" << J.cols()
                << ") inconsistent with residual " << r.size() << " and parameters " << p;
            throw ValidationError(msg.str());
        }
        if (!J.allFinite()) {
            throw NumericalFault("lm_train: non-finite Jacobian");
        }

        const Eigen::MatrixXd jtj = J.transpose() * J;
        const Eigen::VectorXd jtr = J.transpose() * r;

        bool accepted = false;
        while (lambda <= cfg.lambda_max) {
            Eigen::MatrixXd aug = jtj;
            aug.diagonal().array() += lambda;
            const Eigen::LDLT<Eigen::MatrixXd> solver(aug);
            if (solver.info() != Eigen::Success) {
                throw NumericalFault("lm_train: augmented normal equations not solvable");
            }
            const Eigen::VectorXd step = solver.solve(-jtr);

            const Eigen::VectorXd candidate = theta + step;
            const Eigen::VectorXd r_new = residual(candidate);
            const double sse_new = r_new.allFinite()
                                       ? r_new.squaredNorm()
                                       : std::numeric_limits<double>::infinity();

            if (sse_new < sse) {
                const double rel_decrease = (sse - sse_new) / std::max(sse, 1e-300);
                theta = candidate;
                r = r_new;
                sse = sse_new;
                lambda *= cfg.lambda_down;
                accepted = true;
                result.history.push_back({iter, sse, lambda, true});
                if (rel_decrease < cfg.tolerance) {
                    result.converged = true;
                }
                break;
            }
            lambda *= cfg.lambda_up;
            result.history.push_back({iter, sse_new, lambda, false});
        }

        if (!accepted || result.converged) {
            break;  // damping cap reached or converged
        }
    }

    result.theta = theta;
    result.sse = sse;
    return result;
}

}  // namespace dieselnet
