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

#include "dieselnet/engine_model.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace dieselnet {

namespace fs = std::filesystem;

namespace {

void check_wiring(const SubModel& m, const std::string& expected_output,
                  const std::set<std::string>& allowed_inputs) {
    m.validate();
    if (m.spec.output != expected_output) {
        throw ValidationError("assemble_engine_model: expected output '" + expected_output +
                              "', got '" + m.spec.output + "'");
    }
    for (const InputTerm& term : m.spec.inputs) {
        if (term.lags > 0 && allowed_inputs.find(term.channel) == allowed_inputs.end()) {
            throw ValidationError("assemble_engine_model: '" + expected_output +
                                  "' may not read channel '" + term.channel + "'");
        }
    }
}

}  // namespace

const SubModel& EngineModel::submodel(const std::string& output) const {
    if (output == "R") return speed;
    if (output == "P") return pressure;
    if (output == "mdot") return airflow;
    if (output == "Op") return opacity;
    throw ValidationError("EngineModel: unknown submodel '" + output + "'");
}

int EngineModel::min_history() const {
    return std::max({speed.spec.min_start(), pressure.spec.min_start(),
                     airflow.spec.min_start(), opacity.spec.min_start()});
}

EngineModel assemble_engine_model(SubModel speed, SubModel pressure, SubModel airflow,
                                  SubModel opacity) {
    check_wiring(speed, "R", {"T"});
    check_wiring(pressure, "P", {"T", "R"});
    check_wiring(airflow, "mdot", {"T", "R", "P"});
    check_wiring(opacity, "Op", {"T", "R", "P", "mdot"});

    EngineModel model{std::move(speed), std::move(pressure), std::move(airflow),
                      std::move(opacity), 0};
    model.delay = model.opacity.spec.max_delay();
    return model;
}

EngineInit EngineInit::from_log(const SignalLog& log, int length) {
    if (static_cast<int>(log.size()) < length) {
        throw ValidationError("EngineInit: log shorter than requested history");
    }
    EngineInit init;
    for (int k = 0; k < length; ++k) {
        const SignalRecord& rec = log[static_cast<std::size_t>(k)];
        init.R.push_back(rec.R);
        init.P.push_back(rec.P);
        init.mdot.push_back(rec.mdot);
        init.Op.push_back(rec.Op);
    }
    return init;
}

EngineInit EngineInit::constant(double R, double P, double mdot, double Op, int length) {
    EngineInit init;
    init.R.assign(static_cast<std::size_t>(length), R);
    init.P.assign(static_cast<std::size_t>(length), P);
    init.mdot.assign(static_cast<std::size_t>(length), mdot);
    init.Op.assign(static_cast<std::size_t>(length), Op);
    return init;
}

namespace {

// Regressor for one sub-model at step k, built from raw composite histories.
Eigen::VectorXd composite_regressor(const SubModel& m,
                                    const std::vector<double>& own,
                                    const std::vector<double>& pump,
                                    const EngineTrajectories& traj,
                                    std::size_t k) {
    Eigen::VectorXd x(m.spec.total_inputs());
    int pos = 0;
    const ChannelStats& out_stats = m.stats(m.spec.output);
    for (int i = 1; i <= m.spec.output_lags; ++i) {
        x(pos++) = out_stats.normalize(own[k - static_cast<std::size_t>(i)]);
    }
    for (const InputTerm& term : m.spec.inputs) {
        const ChannelStats& stats = m.stats(term.channel);
        const std::vector<double>* src = nullptr;
        if (term.channel == "T") src = &pump;
        else if (term.channel == "R") src = &traj.R;
        else if (term.channel == "P") src = &traj.P;
        else if (term.channel == "mdot") src = &traj.mdot;
        else if (term.channel == "Op") src = &traj.Op;
        else throw ValidationError("EngineModel: unknown channel '" + term.channel + "'");
        for (int i = 0; i < term.lags; ++i) {
            x(pos++) = stats.normalize((*src)[k - static_cast<std::size_t>(term.delay + i)]);
        }
    }
    return x;
}

}  // namespace

EngineTrajectories simulate_engine_model(const EngineModel& model,
                                         const std::vector<double>& pump,
                                         const EngineInit& init) {
    const int start = model.min_history();
    const std::size_t n = pump.size();
    if (static_cast<int>(n) <= start) {
        throw ValidationError("simulate_engine_model: pump sequence shorter than history");
    }
    if (static_cast<int>(init.R.size()) < start || static_cast<int>(init.P.size()) < start ||
        static_cast<int>(init.mdot.size()) < start ||
        static_cast<int>(init.Op.size()) < start) {
        std::ostringstream msg;
        msg << "simulate_engine_model: init histories must cover " << start << " samples";
        throw ValidationError(msg.str());
    }

    EngineTrajectories traj;
    traj.R.resize(n);
    traj.P.resize(n);
    traj.mdot.resize(n);
    traj.Op.resize(n);
    for (int k = 0; k < start; ++k) {
        const auto i = static_cast<std::size_t>(k);
        traj.R[i] = init.R[i];
        traj.P[i] = init.P[i];
        traj.mdot[i] = init.mdot[i];
        traj.Op[i] = init.Op[i];
    }

    for (std::size_t k = static_cast<std::size_t>(start); k < n; ++k) {
        // Chain order per the wiring: R then P then mdot then Op.
        traj.R[k] = model.speed.stats("R").denormalize(
            model.speed.net.forward(composite_regressor(model.speed, traj.R, pump, traj, k)));
        traj.P[k] = model.pressure.stats("P").denormalize(model.pressure.net.forward(
            composite_regressor(model.pressure, traj.P, pump, traj, k)));
        traj.mdot[k] = model.airflow.stats("mdot").denormalize(model.airflow.net.forward(
            composite_regressor(model.airflow, traj.mdot, pump, traj, k)));
        traj.Op[k] = model.opacity.stats("Op").denormalize(model.opacity.net.forward(
            composite_regressor(model.opacity, traj.Op, pump, traj, k)));

        if (!std::isfinite(traj.R[k]) || !std::isfinite(traj.P[k]) ||
            !std::isfinite(traj.mdot[k]) || !std::isfinite(traj.Op[k])) {
            std::ostringstream msg;
            msg << "simulate_engine_model: non-finite trajectory at sample " << k;
            throw NumericalFault(msg.str());
        }
    }
    return traj;
}

void save_engine_model(const EngineModel& model, const std::string& dir,
                       const std::string& digest) {
    fs::create_directories(dir);
    const fs::path base(dir);
    save_submodel(model.speed, (base / "speed.net").string(), digest);
    save_submodel(model.pressure, (base / "pressure.net").string(), digest);
    save_submodel(model.airflow, (base / "airflow.net").string(), digest);
    save_submodel(model.opacity, (base / "opacity.net").string(), digest);

    std::ofstream out(base / "manifest.txt");
    if (!out) {
        throw ValidationError("save_engine_model: cannot write manifest in '" + dir + "'");
    }
    out << "dieselnet-engine-model 1\n";
    out << "delay " << model.delay << '\n';
    out << "submodel R speed.net\n";
    out << "submodel P pressure.net\n";
    out << "submodel mdot airflow.net\n";
    out << "submodel Op opacity.net\n";
    if (!digest.empty()) {
        out << "digest " << digest << '\n';
    }
}

EngineModel load_engine_model(const std::string& dir) {
    const fs::path base(dir);
    std::ifstream in(base / "manifest.txt");
    if (!in) {
        throw ValidationError("load_engine_model: missing manifest in '" + dir + "'");
    }
    std::string tag;
    int version = 0;
    if (!(in >> tag >> version) || tag != "dieselnet-engine-model" || version != 1) {
        throw ValidationError("load_engine_model: bad manifest header");
    }

    int delay = -1;
    std::map<std::string, std::string> files;
    std::string key;
    while (in >> key) {
        if (key == "delay") {
            in >> delay;
        } else if (key == "submodel") {
            std::string output, file;
            in >> output >> file;
            files[output] = file;
        } else if (key == "digest") {
            std::string ignored;
            in >> ignored;
        } else {
            throw ValidationError("load_engine_model: unknown manifest key '" + key + "'");
        }
    }
    for (const char* output : {"R", "P", "mdot", "Op"}) {
        if (files.find(output) == files.end()) {
            throw ValidationError(std::string("load_engine_model: manifest missing submodel ") +
                                  output);
        }
    }

    EngineModel model = assemble_engine_model(
        load_submodel((base / files["R"]).string()),
        load_submodel((base / files["P"]).string()),
        load_submodel((base / files["mdot"]).string()),
        load_submodel((base / files["Op"]).string()));
    if (delay >= 0 && delay != model.delay) {
        throw ValidationError("load_engine_model: manifest delay disagrees with opacity spec");
    }
    return model;
}

double normalized_output_partial(const SubModel& m, const Eigen::VectorXd& regressor,
                                 const std::string& channel, int delay) {
    const int idx = m.regressor_index(channel, delay);
    const Eigen::VectorXd grad = m.net.input_jacobian(regressor);
    return grad(idx) / m.stats(channel).scale;
}

}  // namespace dieselnet
