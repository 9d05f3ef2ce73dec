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

#include "dieselnet/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace dieselnet {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config: bad numeric value '" + value + "' for " + key);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
        throw ValidationError("config: expected integer for " + key);
    }
    return i;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
    try {
        return std::stoull(value);
    } catch (const std::exception&) {
        throw ValidationError("config: bad seed '" + value + "' for " + key);
    }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(parse_double(key, trim(item)));
    }
    if (out.empty()) throw ValidationError("config: empty list for " + key);
    return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    for (double v : parse_double_list(key, value)) {
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// "0:1200,15:2000,..." -> profile steps
std::vector<ProfileStep> parse_steps(const std::string& key, const std::string& value) {
    std::vector<ProfileStep> steps;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ValidationError("config: bad step '" + item + "' for " + key);
        }
        ProfileStep s;
        s.time = parse_double(key, trim(item.substr(0, colon)));
        s.rpm = parse_double(key, trim(item.substr(colon + 1)));
        steps.push_back(s);
    }
    if (steps.empty()) throw ValidationError("config: empty step list for " + key);
    return steps;
}

struct KeyEntry {
    const char* name;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(std::numeric_limits<double>::max_digits10);
    out << v;
    return out.str();
}

std::string fmt_list(const std::vector<double>& v) {
    std::ostringstream out;
    out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << v[i];
    }
    return out.str();
}

std::string fmt_list(const std::vector<int>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        out << v[i];
    }
    return out.str();
}

std::string fmt_steps(const std::vector<ProfileStep>& steps) {
    std::ostringstream out;
    out.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (i) out << ',';
        out << steps[i].time << ':' << steps[i].rpm;
    }
    return out.str();
}

#define NUM_KEY(name, field)                                                        \
    KeyEntry {                                                                      \
        name, [](RunConfig& c, const std::string& v) { c.field = parse_double(name, v); }, \
            [](const RunConfig& c) { return fmt(c.field); }                         \
    }
#define INT_KEY(name, field)                                                        \
    KeyEntry {                                                                      \
        name, [](RunConfig& c, const std::string& v) { c.field = parse_int(name, v); },    \
            [](const RunConfig& c) { return std::to_string(c.field); }              \
    }
#define SEED_KEY(name, field)                                                       \
    KeyEntry {                                                                      \
        name, [](RunConfig& c, const std::string& v) { c.field = parse_seed(name, v); },   \
            [](const RunConfig& c) { return std::to_string(c.field); }              \
    }

const std::vector<std::pair<std::string, std::vector<KeyEntry>>>& schema() {
    static const std::vector<std::pair<std::string, std::vector<KeyEntry>>> s = {
        {"plant",
         {
             NUM_KEY("ts", plant.ts),
             NUM_KEY("fuel_gain", plant.fuel_gain),
             NUM_KEY("boost_tau", plant.boost_tau),
             NUM_KEY("p_ambient", plant.p_ambient),
             NUM_KEY("p_speed_gain", plant.p_speed_gain),
             NUM_KEY("air_gain", plant.air_gain),
             NUM_KEY("phi_stoich", plant.phi_stoich),
             NUM_KEY("rich_slope", plant.rich_slope),
             NUM_KEY("rich_ratio", plant.rich_ratio),
             NUM_KEY("torque_gain", plant.torque_gain),
             NUM_KEY("friction", plant.friction),
             NUM_KEY("drag", plant.drag),
             NUM_KEY("smoke_slope", plant.smoke_slope),
             NUM_KEY("smoke_ratio", plant.smoke_ratio),
             NUM_KEY("opacity_tau", plant.opacity_tau),
             NUM_KEY("sigma_R", plant.sigma_R),
             NUM_KEY("sigma_P", plant.sigma_P),
             NUM_KEY("sigma_Op", plant.sigma_Op),
             NUM_KEY("sigma_mdot", plant.sigma_mdot),
             SEED_KEY("noise_seed", plant.noise_seed),
         }},
        {"excitation",
         {
             KeyEntry{"kind",
                      [](RunConfig& c, const std::string& v) {
                          c.excitation.kind = excitation_kind_from_string(v);
                          if (v == "prbs") c.excitation.amplitude_modulated = false;
                          if (v == "am-prbs") c.excitation.amplitude_modulated = true;
                      },
                      [](const RunConfig& c) {
                          if (c.excitation.kind == ExcitationKind::kStaircase)
                              return std::string("staircase");
                          return std::string(c.excitation.amplitude_modulated ? "am-prbs"
                                                                              : "prbs");
                      }},
             NUM_KEY("lo", excitation.lo),
             NUM_KEY("hi", excitation.hi),
             INT_KEY("n_levels", excitation.n_levels),
             INT_KEY("hold_min", excitation.hold_min),
             INT_KEY("hold_max", excitation.hold_max),
             INT_KEY("duration", excitation_duration),
             SEED_KEY("seed", excitation_seed),
             INT_KEY("validation_duration", validation_duration),
             SEED_KEY("validation_seed", validation_seed),
         }},
        {"identify",
         {
             INT_KEY("speed_hidden", speed_hidden),
             INT_KEY("pressure_hidden", pressure_hidden),
             INT_KEY("airflow_hidden", airflow_hidden),
             INT_KEY("opacity_hidden", opacity_hidden),
             NUM_KEY("train_split", train_split),
         }},
        {"lm",
         {
             NUM_KEY("lambda0", fit.lm.lambda0),
             NUM_KEY("lambda_up", fit.lm.lambda_up),
             NUM_KEY("lambda_down", fit.lm.lambda_down),
             INT_KEY("max_iterations", fit.lm.max_iterations),
             NUM_KEY("tolerance", fit.lm.tolerance),
             INT_KEY("restarts", fit.max_restarts),
             SEED_KEY("seed", fit.seed),
         }},
        {"select",
         {
             INT_KEY("phase1_hidden", select_phase1_hidden),
             INT_KEY("max_order", select_max_order),
             KeyEntry{"nodes",
                      [](RunConfig& c, const std::string& v) {
                          c.select_node_grid = parse_int_list("nodes", v);
                      },
                      [](const RunConfig& c) { return fmt_list(c.select_node_grid); }},
         }},
        {"controller",
         {
             INT_KEY("epochs", controller.epochs),
             INT_KEY("hidden", controller.n_hidden),
             NUM_KEY("delta", controller.delta),
             SEED_KEY("seed", controller.seed),
             KeyEntry{"eta_list",
                      [](RunConfig& c, const std::string& v) {
                          c.eta_list = parse_double_list("eta_list", v);
                      },
                      [](const RunConfig& c) { return fmt_list(c.eta_list); }},
         }},
        {"profile",
         {
             KeyEntry{"steps",
                      [](RunConfig& c, const std::string& v) {
                          c.profile_steps = parse_steps("steps", v);
                      },
                      [](const RunConfig& c) { return fmt_steps(c.profile_steps); }},
             NUM_KEY("duration", profile_duration),
             KeyEntry{"op_ref_mode",
                      [](RunConfig& c, const std::string& v) {
                          if (v == "ceiling") c.op_ref_mode = OpRefMode::kCeiling;
                          else if (v == "steady-map") c.op_ref_mode = OpRefMode::kSteadyMap;
                          else throw ValidationError("config: bad op_ref_mode '" + v + "'");
                      },
                      [](const RunConfig& c) {
                          return std::string(c.op_ref_mode == OpRefMode::kCeiling
                                                 ? "ceiling"
                                                 : "steady-map");
                      }},
             NUM_KEY("ceiling", op_ceiling),
         }},
    };
    return s;
}

#undef NUM_KEY
#undef INT_KEY
#undef SEED_KEY

const KeyEntry& find_entry(const std::string& section, const std::string& key) {
    for (const auto& [name, entries] : schema()) {
        if (name != section) continue;
        for (const KeyEntry& e : entries) {
            if (key == e.name) return e;
        }
        throw ValidationError("config: unknown key '" + key + "' in section [" + section +
                              "]");
    }
    throw ValidationError("config: unknown section [" + section + "]");
}

}  // namespace

void RunConfig::set(const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos) {
        throw ValidationError("config: expected section.key, got '" + dotted_key + "'");
    }
    find_entry(dotted_key.substr(0, dot), dotted_key.substr(dot + 1)).set(*this, value);
}

std::string RunConfig::serialize() const {
    std::ostringstream out;
    for (const auto& [section, entries] : schema()) {
        out << '[' << section << "]\n";
        for (const KeyEntry& e : entries) {
            out << e.name << " = " << e.get(*this) << '\n';
        }
        out << '\n';
    }
    return out.str();
}

std::string RunConfig::digest() const { return to_hex(fnv1a(serialize())); }

void RunConfig::validate() const {
    plant.validate();
    excitation.validate();
    fit.lm.validate();
    controller.validate();
    if (excitation_duration < 100) {
        throw ValidationError("config: excitation.duration must be >= 100");
    }
    if (train_split <= 0.0 || train_split >= 1.0) {
        throw ValidationError("config: identify.train_split must be in (0,1)");
    }
    if (select_max_order < 1) {
        throw ValidationError("config: select.max_order must be >= 1");
    }
    for (double eta : eta_list) {
        if (eta < 0.0) throw ValidationError("config: controller.eta_list entries must be >= 0");
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ValidationError("config: malformed section at line " +
                                      std::to_string(line_no));
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config: expected key = value at line " +
                                  std::to_string(line_no));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ValidationError("config: key '" + key + "' before any section");
        }
        find_entry(section, key).set(config, value);
    }
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("load_config: cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void save_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("save_config: cannot open '" + path + "'");
    out << config.serialize();
}

}  // namespace dieselnet
