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
#include <cstddef>
#include <iosfwd>

#include "dieselnet/common.hpp"

namespace dieselnet {

/**
 * One-hidden-layer perceptron with sigmoidal hidden units and a linear
 * output unit. Scalar output only; every network in this project is MISO.
 *
 * Parameter vector layout (size n_hidden*(n_in+1) + n_hidden + 1):
 *   [hidden weights row-major (n_hidden x n_in) | hidden biases |
 *    output weights | output bias]
 */
class Mlp {
public:
    Mlp(int n_in, int n_hidden);
    Mlp(int n_in, int n_hidden, const Eigen::VectorXd& theta);

    int n_in() const { return n_in_; }
    int n_hidden() const { return n_hidden_; }
    int param_count() const { return static_cast<int>(theta_.size()); }

    const Eigen::VectorXd& params() const { return theta_; }
    void set_params(const Eigen::VectorXd& theta);

    /// Weights drawn uniformly from [-0.5, 0.5]; small enough to keep the
    /// sigmoids in their active region.
    static Mlp random(int n_in, int n_hidden, Rng& rng);

    double forward(const Eigen::VectorXd& x) const;

    /// d(output)/d(x_i), analytic.
    Eigen::VectorXd input_jacobian(const Eigen::VectorXd& x) const;

    /// d(output)/d(theta_j), analytic, same ordering as params().
    Eigen::VectorXd weight_jacobian(const Eigen::VectorXd& x) const;

    /// Forward value together with both Jacobians; one hidden-layer pass.
    struct Eval {
        double value;
        Eigen::VectorXd d_input;
        Eigen::VectorXd d_weights;
    };
    Eval evaluate(const Eigen::VectorXd& x) const;

    // Parameter views into theta_.
    Eigen::Map<const Eigen::MatrixXd> hidden_weights() const;
    Eigen::Map<const Eigen::VectorXd> hidden_biases() const;
    Eigen::Map<const Eigen::VectorXd> output_weights() const;
    double output_bias() const { return theta_(theta_.size() - 1); }

    void save(std::ostream& out) const;
    static Mlp load(std::istream& in);

private:
    void check_input(const Eigen::VectorXd& x) const;

    int n_in_;
    int n_hidden_;
    Eigen::VectorXd theta_;
};

}  // namespace dieselnet
