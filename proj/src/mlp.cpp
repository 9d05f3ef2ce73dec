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

#include "dieselnet/mlp.hpp"

#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace dieselnet {

namespace {

int expected_param_count(int n_in, int n_hidden) {
    return n_hidden * (n_in + 1) + n_hidden + 1;
}

void check_finite(const Eigen::VectorXd& theta) {
    if (!theta.allFinite()) {
        throw ValidationError("Mlp: non-finite weight vector");
    }
}

}  // namespace

Mlp::Mlp(int n_in, int n_hidden) : n_in_(n_in), n_hidden_(n_hidden) {
    if (n_in < 1 || n_hidden < 1) {
        throw ValidationError("Mlp: n_in and n_hidden must be >= 1");
    }
    theta_ = Eigen::VectorXd::Zero(expected_param_count(n_in, n_hidden));
}

Mlp::Mlp(int n_in, int n_hidden, const Eigen::VectorXd& theta) : Mlp(n_in, n_hidden) {
    set_params(theta);
}

void Mlp::set_params(const Eigen::VectorXd& theta) {
    if (theta.size() != expected_param_count(n_in_, n_hidden_)) {
        std::ostringstream msg;
        msg << "Mlp: parameter vector has size " << theta.size() << ", expected "
            << expected_param_count(n_in_, n_hidden_);
        throw ValidationError(msg.str());
    }
    check_finite(theta);
    theta_ = theta;
}

Mlp Mlp::random(int n_in, int n_hidden, Rng& rng) {
    Mlp net(n_in, n_hidden);
    for (Eigen::Index i = 0; i < net.theta_.size(); ++i) {
        net.theta_(i) = rng.uniform(-0.5, 0.5);
    }
    return net;
}

Eigen::Map<const Eigen::MatrixXd> Mlp::hidden_weights() const {
    // Row-major storage mapped as (n_in x n_hidden) column-major, i.e. column j
    // holds the input weights of hidden unit j.
    return {theta_.data(), n_in_, n_hidden_};
}

Eigen::Map<const Eigen::VectorXd> Mlp::hidden_biases() const {
    return {theta_.data() + n_in_ * n_hidden_, n_hidden_};
}

Eigen::Map<const Eigen::VectorXd> Mlp::output_weights() const {
    return {theta_.data() + n_hidden_ * (n_in_ + 1), n_hidden_};
}

void Mlp::check_input(const Eigen::VectorXd& x) const {
    if (x.size() != n_in_) {
        std::ostringstream msg;
        msg << "Mlp: input has size " << x.size() << ", expected " << n_in_;
        throw ValidationError(msg.str());
    }
    if (!x.allFinite()) {
        throw ValidationError("Mlp: non-finite input");
    }
}

double Mlp::forward(const Eigen::VectorXd& x) const {
    check_input(x);
    const Eigen::VectorXd pre = hidden_weights().transpose() * x + hidden_biases();
    double acc = output_bias();
    const auto v = output_weights();
    for (int j = 0; j < n_hidden_; ++j) {
        acc += v(j) * sigmoid(pre(j));
    }
    return acc;
}

Mlp::Eval Mlp::evaluate(const Eigen::VectorXd& x) const {
    check_input(x);
    const auto w = hidden_weights();
    const auto v = output_weights();
    const Eigen::VectorXd pre = w.transpose() * x + hidden_biases();

    Eigen::VectorXd h(n_hidden_), hd(n_hidden_);
    for (int j = 0; j < n_hidden_; ++j) {
        h(j) = sigmoid(pre(j));
        hd(j) = sigmoid_deriv_from_value(h(j));
    }

    Eval ev;
    ev.value = v.dot(h) + output_bias();

    const Eigen::VectorXd back = v.cwiseProduct(hd);  // v_j * sigma'_j
    ev.d_input = w * back;

    ev.d_weights.resize(param_count());
    for (int j = 0; j < n_hidden_; ++j) {
        ev.d_weights.segment(j * n_in_, n_in_) = back(j) * x;
    }
    ev.d_weights.segment(n_in_ * n_hidden_, n_hidden_) = back;
    ev.d_weights.segment(n_hidden_ * (n_in_ + 1), n_hidden_) = h;
    ev.d_weights(param_count() - 1) = 1.0;
    return ev;
}

Eigen::VectorXd Mlp::input_jacobian(const Eigen::VectorXd& x) const {
    return evaluate(x).d_input;
}

Eigen::VectorXd Mlp::weight_jacobian(const Eigen::VectorXd& x) const {
    return evaluate(x).d_weights;
}

void Mlp::save(std::ostream& out) const {
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "mlp " << n_in_ << ' ' << n_hidden_ << '\n';
    for (Eigen::Index i = 0; i < theta_.size(); ++i) {
        out << theta_(i) << '\n';
    }
}

Mlp Mlp::load(std::istream& in) {
    std::string tag;
    int n_in = 0, n_hidden = 0;
    if (!(in >> tag >> n_in >> n_hidden) || tag != "mlp") {
        throw ValidationError("Mlp: bad header in model stream");
    }
    Mlp net(n_in, n_hidden);
    Eigen::VectorXd theta(net.param_count());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        if (!(in >> theta(i))) {
            throw ValidationError("Mlp: truncated weight list in model stream");
        }
    }
    net.set_params(theta);
    return net;
}

}  // namespace dieselnet
