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

#include "dieselnet/rls.hpp"

namespace dieselnet {

namespace {

void check_state(const RlsState& s) {
    if (s.P.rows() != s.P.cols() || s.P.rows() != s.W.size()) {
        throw ValidationError("RlsState: P must be n x n with n = |W|");
    }
}

void check_vector(const RlsState& s, const Eigen::VectorXd& psi, const char* name) {
    if (psi.size() != s.W.size()) {
        throw ValidationError(std::string("rls update: ") + name + " has wrong length");
    }
    if (!psi.allFinite()) {
        throw NumericalFault(std::string("rls update: non-finite ") + name);
    }
}

/// P - (P psi psi' P) / (1 + psi' P psi), re-symmetrized.
Eigen::MatrixXd lemma_step(const Eigen::MatrixXd& P, const Eigen::VectorXd& psi) {
    const Eigen::VectorXd Ppsi = P * psi;
    const double denom = 1.0 + psi.dot(Ppsi);
    Eigen::MatrixXd next = P - (Ppsi * Ppsi.transpose()) / denom;
    next = ((next + next.transpose()) / 2.0).eval();
    return next;
}

}  // namespace

RlsState RlsState::initial(const Eigen::VectorXd& w0, double delta) {
    if (!(delta > 0.0)) throw ValidationError("RlsState: delta must be > 0");
    RlsState s;
    s.W = w0;
    s.delta = delta;
    s.P = delta * Eigen::MatrixXd::Identity(w0.size(), w0.size());
    return s;
}

void RlsState::reset_covariance() {
    P = delta * Eigen::MatrixXd::Identity(W.size(), W.size());
}

RlsState rls_update_single(const RlsState& s, double e_y, const Eigen::VectorXd& psi_y) {
    check_state(s);
    check_vector(s, psi_y, "psi_y");
    if (!std::isfinite(e_y)) throw NumericalFault("rls_update_single: non-finite e_y");

    RlsState next = s;
    next.P = lemma_step(s.P, psi_y);
    const Eigen::VectorXd gradient = e_y * psi_y;
    next.W = s.W - next.P * gradient;
    if (!next.W.allFinite()) throw NumericalFault("rls_update_single: update diverged");
    return next;
}

RlsState rls_update_multi(const RlsState& s, const SensitivityPair& pair,
                          const CriterionWeights& w) {
    check_state(s);
    w.validate();
    check_vector(s, pair.psi_y, "psi_y");
    check_vector(s, pair.psi_z, "psi_z");
    if (!std::isfinite(pair.e_y) || !std::isfinite(pair.e_z)) {
        throw NumericalFault("rls_update_multi: non-finite error");
    }

    RlsState next = s;
    const Eigen::MatrixXd M = lemma_step(s.P, pair.psi_y);
    next.P = lemma_step(M, pair.psi_z);
    const Eigen::VectorXd gradient =
        w.eta_y * pair.e_y * pair.psi_y + w.eta_z * pair.e_z * pair.psi_z;
    next.W = s.W - next.P * gradient;
    if (!next.W.allFinite()) throw NumericalFault("rls_update_multi: update diverged");
    return next;
}

}  // namespace dieselnet
