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

#include "dieselnet/common.hpp"

namespace dieselnet {

/// Weights of the two-output training criterion. eta_y stays 1 for the
/// engine case; eta_z is the opacity weighting factor.
struct CriterionWeights {
    double eta_y = 1.0;
    double eta_z = 0.0;

    void validate() const {
        if (!(eta_y > 0.0)) throw ValidationError("CriterionWeights: eta_y must be > 0");
        if (eta_z < 0.0) throw ValidationError("CriterionWeights: eta_z must be >= 0");
    }
};

/// Error sensitivities of one aligned step: Psi_* = d e_*/dW and the errors
/// themselves (normalized units).
struct SensitivityPair {
    Eigen::VectorXd psi_y;
    Eigen::VectorXd psi_z;
    double e_y = 0.0;
    double e_z = 0.0;
};

/**
 * Recursive Gauss-Newton state: weight vector W and the covariance-like
 * matrix P_t that realizes the inverse of the accumulated outer-product
 * Hessian approximation through the matrix inversion lemma.
 */
struct RlsState {
    Eigen::VectorXd W;
    Eigen::MatrixXd P;
    double delta = 1000.0;

    static RlsState initial(const Eigen::VectorXd& w0, double delta = 1000.0);

    /// Restore P to delta * I (new epoch), keeping W.
    void reset_covariance();
};

/// Single-output update: rank-one inversion-lemma step on P, then
/// W -= P e_y Psi_y. P is re-symmetrized after the lemma step.
RlsState rls_update_single(const RlsState& s, double e_y, const Eigen::VectorXd& psi_y);

/// Two-output update: the inversion lemma applied twice (Psi_y then Psi_z),
/// then W -= P (eta_y e_y Psi_y + eta_z e_z Psi_z). The weighting factors
/// enter the gradient term only, never the P recursion.
RlsState rls_update_multi(const RlsState& s, const SensitivityPair& pair,
                          const CriterionWeights& w);

}  // namespace dieselnet
