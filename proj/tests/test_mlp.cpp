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

#include <doctest.h>

#include <sstream>

#include "dieselnet/mlp.hpp"
#include "oracles.hpp"

using dieselnet::Mlp;
using dieselnet::Rng;

namespace {

// Direct re-statement of the forward formula, independent of Mlp internals.
double forward_by_hand(int n_in, int n_hidden, const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& x) {
    double acc = theta(theta.size() - 1);
    for (int j = 0; j < n_hidden; ++j) {
        double pre = theta(n_in * n_hidden + j);  // hidden bias
        for (int i = 0; i < n_in; ++i) {
            pre += theta(j * n_in + i) * x(i);
        }
        acc += theta(n_hidden * (n_in + 1) + j) / (1.0 + std::exp(-pre));
    }
    return acc;
}

}  // namespace

TEST_CASE("parameter count follows the one-hidden-layer layout") {
    CHECK(Mlp(3, 5).param_count() == 5 * 4 + 6);
    CHECK(Mlp(1, 1).param_count() == 1 * 2 + 2);
    CHECK_THROWS_AS(Mlp(0, 3), dieselnet::ValidationError);
}

TEST_CASE("zero network returns the output bias") {
    const Mlp net(4, 3);
    CHECK(net.forward(Eigen::VectorXd::Zero(4)) == 0.0);
    CHECK(net.forward(Eigen::VectorXd::Constant(4, 2.5)) == 0.0);
}

TEST_CASE("sigma(0) identity case") {
    // n_in=1, n_hidden=1: hidden weight 0, hidden bias 0, output weight 2,
    // output bias 1 -> 2*sigma(0)+1 = 2.
    Eigen::VectorXd theta(4);
    theta << 0.0, 0.0, 2.0, 1.0;
    const Mlp net(1, 1, theta);
    Eigen::VectorXd x(1);
    x << 5.0;
    CHECK(net.forward(x) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("forward matches an independent re-implementation") {
    Rng rng(314);
    for (int trial = 0; trial < 20; ++trial) {
        const int n_in = 1 + static_cast<int>(rng.uniform_index(5));
        const int n_hidden = 1 + static_cast<int>(rng.uniform_index(6));
        const Mlp net = Mlp::random(n_in, n_hidden, rng);
        Eigen::VectorXd x(n_in);
        for (int i = 0; i < n_in; ++i) x(i) = rng.uniform(-2.0, 2.0);
        CHECK(net.forward(x) ==
              doctest::Approx(forward_by_hand(n_in, n_hidden, net.params(), x))
                  .epsilon(1e-12));
    }
}

TEST_CASE("input shape is checked") {
    const Mlp net(3, 2);
    CHECK_THROWS_AS(net.forward(Eigen::VectorXd::Zero(2)), dieselnet::ValidationError);
    CHECK_THROWS_AS(net.input_jacobian(Eigen::VectorXd::Zero(4)),
                    dieselnet::ValidationError);
}

TEST_CASE("non-finite weights are rejected") {
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(4);
    theta(1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Mlp(1, 1, theta), dieselnet::ValidationError);
}

TEST_CASE("input jacobian: zero output weights give a zero gradient") {
    Rng rng(7);
    Mlp net = Mlp::random(3, 4, rng);
    Eigen::VectorXd theta = net.params();
    theta.segment(4 * 4, 4).setZero();  // output weights
    net.set_params(theta);
    Eigen::VectorXd x(3);
    x << 0.3, -0.7, 1.1;
    CHECK(net.input_jacobian(x).norm() == 0.0);
}

TEST_CASE("input jacobian: near-linear regime matches (1/4) w_out^T W_h") {
    // Tiny hidden weights keep every sigmoid at sigma'(0) = 1/4.
    const double eps = 1e-6;
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(2 * 3 + 2 + 2 + 1);
    theta(0) = eps;
    theta(1) = 2 * eps;
    theta(2) = -eps;
    theta(3) = 3 * eps;
    theta(4) = eps;
    theta(5) = -2 * eps;
    theta(2 * 3 + 2 + 0) = 1.5;  // output weights
    theta(2 * 3 + 2 + 1) = -0.5;
    const Mlp net(3, 2, theta);

    Eigen::VectorXd x(3);
    x << 0.2, 0.4, -0.1;
    const Eigen::VectorXd jac = net.input_jacobian(x);
    for (int i = 0; i < 3; ++i) {
        const double expected = 0.25 * (1.5 * theta(i) - 0.5 * theta(3 + i));
        CHECK(jac(i) == doctest::Approx(expected).epsilon(1e-5));
    }
}

TEST_CASE("weight jacobian trivia: output bias and output weights") {
    Rng rng(21);
    const Mlp net = Mlp::random(4, 3, rng);
    Eigen::VectorXd x(4);
    for (int i = 0; i < 4; ++i) x(i) = rng.uniform(-1.0, 1.0);

    const Eigen::VectorXd jac = net.weight_jacobian(x);
    CHECK(jac(net.param_count() - 1) == 1.0);

    // d out / d v_j equals the hidden activation.
    const auto w = net.hidden_weights();
    const auto b = net.hidden_biases();
    for (int j = 0; j < 3; ++j) {
        const double h = dieselnet::sigmoid(w.col(j).dot(x) + b(j));
        CHECK(jac(3 * (4 + 1) + j) == doctest::Approx(h).epsilon(1e-14));
    }
}

TEST_CASE("both jacobians agree with central finite differences on 100 seeded nets") {
    Rng rng(9001);
    for (int trial = 0; trial < 100; ++trial) {
        const int n_in = 1 + static_cast<int>(rng.uniform_index(6));
        const int n_hidden = 1 + static_cast<int>(rng.uniform_index(8));
        const Mlp net = Mlp::random(n_in, n_hidden, rng);
        Eigen::VectorXd x(n_in);
        for (int i = 0; i < n_in; ++i) x(i) = rng.uniform(-2.0, 2.0);

        const Eigen::VectorXd fd_input = oracles::finite_difference(
            [&](const Eigen::VectorXd& xx) { return net.forward(xx); }, x);
        CHECK(oracles::max_relative_error(net.input_jacobian(x), fd_input) < 1e-5);

        const Eigen::VectorXd fd_weights = oracles::finite_difference(
            [&](const Eigen::VectorXd& th) {
                return Mlp(n_in, n_hidden, th).forward(x);
            },
            net.params());
        CHECK(oracles::max_relative_error(net.weight_jacobian(x), fd_weights) < 1e-5);
    }
}

TEST_CASE("save/load round trip is exact") {
    Rng rng(55);
    const Mlp net = Mlp::random(3, 5, rng);
    std::stringstream buffer;
    net.save(buffer);
    const Mlp restored = Mlp::load(buffer);
    CHECK(restored.n_in() == 3);
    CHECK(restored.n_hidden() == 5);
    CHECK((restored.params() - net.params()).norm() == 0.0);
}

TEST_CASE("random initialization is deterministic per seed") {
    Rng a(77), b(77), c(78);
    const Mlp na = Mlp::random(4, 4, a);
    const Mlp nb = Mlp::random(4, 4, b);
    const Mlp nc = Mlp::random(4, 4, c);
    CHECK((na.params() - nb.params()).norm() == 0.0);
    CHECK((na.params() - nc.params()).norm() != 0.0);
    CHECK(na.params().cwiseAbs().maxCoeff() <= 0.5);
}
