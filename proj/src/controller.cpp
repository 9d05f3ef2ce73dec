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

#include "dieselnet/controller.hpp"

#include <fstream>
#include <limits>

namespace dieselnet {

Controller::Controller(Mlp net, ChannelStats r_stats, ChannelStats op_stats, int delay)
    : net_(std::move(net)), r_stats_(r_stats), op_stats_(op_stats), delay_(delay) {
    if (net_.n_in() != 5) {
        throw ValidationError("Controller: network must have exactly 5 inputs");
    }
    if (delay_ < 1) {
        throw ValidationError("Controller: delay must be >= 1");
    }
}

Controller Controller::random(const EngineModel& model, int n_hidden, Rng& rng) {
    return Controller(Mlp::random(5, n_hidden, rng), model.speed.stats("R"),
                      model.opacity.stats("Op"), model.delay);
}

Eigen::VectorXd Controller::normalized_input(const ControllerInput& in) const {
    Eigen::VectorXd z(5);
    z(0) = r_stats_.normalize(in.r_ref_next);
    z(1) = r_stats_.normalize(in.r_current);
    z(2) = r_stats_.normalize(in.r_previous);
    z(3) = op_stats_.normalize(in.op_ref_ahead);
    z(4) = op_stats_.normalize(in.op_ahead);
    return z;
}

double Controller::forward(const ControllerInput& in) const {
    return 100.0 * sigmoid(net_.forward(normalized_input(in)));
}

Controller::Eval Controller::evaluate(const ControllerInput& in) const {
    const Mlp::Eval ev = net_.evaluate(normalized_input(in));
    const double s = sigmoid(ev.value);
    Eval out;
    out.u = 100.0 * s;
    out.d_weights = 100.0 * sigmoid_deriv_from_value(s) * ev.d_weights;
    return out;
}

Eigen::VectorXd Controller::weight_jacobian(const ControllerInput& in) const {
    return evaluate(in).d_weights;
}

void Controller::save(const std::string& path, const std::string& digest) const {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("Controller::save: cannot open '" + path + "'");
    }
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "dieselnet-controller 1\n";
    if (!digest.empty()) {
        out << "digest " << digest << '\n';
    }
    out << "delay " << delay_ << '\n';
    out << "saturation sigmoid 0 100\n";
    out << "inputs R_ref(k) R(k-1) R(k-2) Op_ref(k+d-1) Op(k+d-2)\n";
    out << "norm R " << r_stats_.mean << ' ' << r_stats_.scale << '\n';
    out << "norm Op " << op_stats_.mean << ' ' << op_stats_.scale << '\n';
    net_.save(out);
}

Controller Controller::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("Controller::load: cannot open '" + path + "'");
    }
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "dieselnet-controller" || version != 1) {
        throw ValidationError("Controller::load: bad header in '" + path + "'");
    }
    std::string key;
    if (!(in >> key)) {
        throw ValidationError("Controller::load: truncated file");
    }
    if (key == "digest") {
        std::string ignored;
        in >> ignored >> key;
    }
    int delay = 0;
    if (key != "delay" || !(in >> delay)) {
        throw ValidationError("Controller::load: missing delay line");
    }
    std::string kind;
    double lo = 0.0, hi = 0.0;
    if (!(in >> key >> kind >> lo >> hi) || key != "saturation" || kind != "sigmoid") {
        throw ValidationError("Controller::load: unsupported saturation spec");
    }
    std::string line;
    std::getline(in, line);  // rest of saturation line
    std::getline(in, line);  // inputs line, informational
    ChannelStats r_stats, op_stats;
    std::string name;
    if (!(in >> key >> name >> r_stats.mean >> r_stats.scale) || key != "norm" || name != "R") {
        throw ValidationError("Controller::load: missing R norm line");
    }
    if (!(in >> key >> name >> op_stats.mean >> op_stats.scale) || key != "norm" ||
        name != "Op") {
        throw ValidationError("Controller::load: missing Op norm line");
    }
    return Controller(Mlp::load(in), r_stats, op_stats, delay);
}

}  // namespace dieselnet
