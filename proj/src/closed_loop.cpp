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

#include "dieselnet/closed_loop.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

namespace dieselnet {

void ReferenceProfile::validate() const {
    if (ts <= 0.0) throw ValidationError("ReferenceProfile: ts must be > 0");
    if (r_ref.empty()) throw ValidationError("ReferenceProfile: empty reference");
    if (r_ref.size() != op_ref.size()) {
        throw ValidationError("ReferenceProfile: reference sequences differ in length");
    }
    for (double op : op_ref) {
        if (op < 0.0 || op > 100.0) {
            throw ValidationError("ReferenceProfile: Op_ref must lie in [0,100]");
        }
    }
}

double ReferenceProfile::r_at(long k) const {
    const long last = static_cast<long>(r_ref.size()) - 1;
    return r_ref[static_cast<std::size_t>(std::clamp(k, 0L, last))];
}

double ReferenceProfile::op_at(long k) const {
    const long last = static_cast<long>(op_ref.size()) - 1;
    return op_ref[static_cast<std::size_t>(std::clamp(k, 0L, last))];
}

ReferenceProfile build_profile(const std::vector<ProfileStep>& steps, OpRefMode mode,
                               double ts, double duration_s, double ceiling,
                               const std::function<double(double)>& steady_map) {
    if (steps.empty()) throw ValidationError("build_profile: no steps");
    if (steps.front().time != 0.0) {
        throw ValidationError("build_profile: first step must start at t = 0");
    }
    if (ts <= 0.0 || duration_s <= 0.0) {
        throw ValidationError("build_profile: ts and duration must be > 0");
    }
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (steps[i].time <= steps[i - 1].time) {
            throw ValidationError("build_profile: step times must be increasing");
        }
    }
    for (const ProfileStep& s : steps) {
        if (s.rpm < 0.0 || s.rpm > 6000.0) {
            throw ValidationError("build_profile: rpm level outside the plant envelope");
        }
    }
    if (mode == OpRefMode::kSteadyMap && !steady_map) {
        throw ValidationError("build_profile: steady-map mode needs a steady map");
    }

    const auto n = static_cast<std::size_t>(std::llround(duration_s / ts));
    if (n == 0) throw ValidationError("build_profile: zero-length profile");

    ReferenceProfile profile;
    profile.ts = ts;
    profile.r_ref.resize(n);
    profile.op_ref.resize(n);
    std::size_t level = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * ts;
        while (level + 1 < steps.size() && steps[level + 1].time <= t) ++level;
        profile.r_ref[k] = steps[level].rpm;
        profile.op_ref[k] = mode == OpRefMode::kCeiling
                                ? ceiling
                                : std::clamp(steady_map(steps[level].rpm), 0.0, 100.0);
    }
    profile.validate();
    return profile;
}

ReferenceProfile default_experiment_profile() {
    return build_profile({{0.0, 1200.0}, {15.0, 2000.0}, {30.0, 2800.0}, {45.0, 1600.0}},
                         OpRefMode::kCeiling, 0.1, 60.0, 15.0);
}

RunMetrics compute_metrics(const std::vector<double>& speed,
                           const std::vector<double>& opacity,
                           const ReferenceProfile& profile, int start,
                           double transient_window_s) {
    profile.validate();
    const std::size_t n = profile.size();
    if (speed.size() != n || opacity.size() != n) {
        throw ValidationError("compute_metrics: trajectory/profile length mismatch");
    }
    if (start < 0 || static_cast<std::size_t>(start) >= n) {
        throw ValidationError("compute_metrics: bad start index");
    }

    RunMetrics m;
    double sq = 0.0;
    long count = 0;
    m.max_opacity = -std::numeric_limits<double>::infinity();
    for (std::size_t k = static_cast<std::size_t>(start); k < n; ++k) {
        const double e = profile.r_ref[k] - speed[k];
        sq += e * e;
        ++count;
        m.max_opacity = std::max(m.max_opacity, opacity[k]);
        m.opacity_excess += std::max(0.0, opacity[k] - profile.op_ref[k]) * profile.ts;
    }
    m.rmse_speed = std::sqrt(sq / static_cast<double>(count));

    // Pooled RMSE over +-window samples around every reference step.
    const long window = std::lround(transient_window_s / profile.ts);
    double tsq = 0.0;
    long tcount = 0;
    for (std::size_t k = static_cast<std::size_t>(start) + 1; k < n; ++k) {
        if (profile.r_ref[k] == profile.r_ref[k - 1]) continue;
        const long lo = std::max<long>(start, static_cast<long>(k) - window);
        const long hi = std::min<long>(static_cast<long>(n) - 1, static_cast<long>(k) + window);
        for (long j = lo; j <= hi; ++j) {
            const double e = profile.r_ref[static_cast<std::size_t>(j)] -
                             speed[static_cast<std::size_t>(j)];
            tsq += e * e;
            ++tcount;
        }
    }
    m.rmse_transient = tcount > 0 ? std::sqrt(tsq / static_cast<double>(tcount)) : 0.0;
    return m;
}

RunResult run_closed_loop(const PlantParams& plant_params, const Controller& ctrl,
                          const ReferenceProfile& profile) {
    profile.validate();
    const int d = ctrl.delay();
    const int start = std::max(4, d);
    const auto n = static_cast<long>(profile.size());
    if (n <= start + 1) {
        throw ValidationError("run_closed_loop: profile too short");
    }

    // Settle at the pump position whose steady speed matches the first level,
    // found by bisection on the noise-free plant.
    const double target = profile.r_ref.front();
    double lo = 1.0, hi = 99.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (settle_plant(plant_params, mid).R < target ? lo : hi) = mid;
    }
    const double t0 = 0.5 * (lo + hi);
    const PlantState settled = settle_plant(plant_params, t0);

    DieselPlant plant(plant_params);
    plant.reset(settled);

    RunResult res;
    res.profile = profile;
    res.start = start;
    res.U.resize(static_cast<std::size_t>(n));
    res.R.resize(static_cast<std::size_t>(n));
    res.P.resize(static_cast<std::size_t>(n));
    res.mdot.resize(static_cast<std::size_t>(n));
    res.Op.resize(static_cast<std::size_t>(n));

    auto record = [&](long k, const SignalRecord& rec) {
        const auto i = static_cast<std::size_t>(k);
        res.U[i] = rec.T;
        res.R[i] = rec.R;
        res.P[i] = rec.P;
        res.mdot[i] = rec.mdot;
        res.Op[i] = rec.Op;
    };

    for (long k = 0; k < start; ++k) {
        record(k, plant.step(t0));
    }
    for (long k = start; k < n; ++k) {
        ControllerInput in;
        in.r_ref_next = profile.r_at(k);
        in.r_current = res.R[static_cast<std::size_t>(k - 1)];
        in.r_previous = res.R[static_cast<std::size_t>(k - 2)];
        in.op_ref_ahead = profile.op_at(k + d - 1);
        // No lookahead against a physical plant: latest measurement instead.
        in.op_ahead = res.Op[static_cast<std::size_t>(k - 1)];
        const double u = ctrl.forward(in);
        record(k, plant.step(u));
    }

    res.metrics = compute_metrics(res.R, res.Op, profile, start);
    return res;
}

void save_run_csv(const RunResult& result, const std::string& path,
                  std::optional<double> eta_op, const std::string& digest) {
    std::ofstream out(path);
    if (!out) throw ValidationError("save_run_csv: cannot open '" + path + "'");
    out.precision(std::numeric_limits<double>::max_digits10);
    if (!digest.empty()) out << "# config_digest " << digest << '\n';
    if (eta_op) out << "# eta_op " << *eta_op << '\n';
    out << "# start " << result.start << '\n';
    out << "k,t,U,R_ref,R,P,mdot,Op_ref,Op\n";
    for (std::size_t k = 0; k < result.profile.size(); ++k) {
        out << k << ',' << static_cast<double>(k) * result.profile.ts << ',' << result.U[k]
            << ',' << result.profile.r_ref[k] << ',' << result.R[k] << ',' << result.P[k]
            << ',' << result.mdot[k] << ',' << result.profile.op_ref[k] << ','
            << result.Op[k] << '\n';
    }
}

LoadedRun load_run_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("load_run_csv: cannot open '" + path + "'");

    LoadedRun loaded;
    RunResult& res = loaded.result;
    res.start = 0;

    std::string line;
    std::vector<double> times;
    bool have_header = false;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream cm(line.substr(1));
            std::string key;
            cm >> key;
            if (key == "eta_op") {
                double v = 0.0;
                cm >> v;
                loaded.eta_op = v;
            } else if (key == "start") {
                cm >> res.start;
            }
            continue;
        }
        if (!have_header) {
            if (line != "k,t,U,R_ref,R,P,mdot,Op_ref,Op") {
                throw ValidationError("load_run_csv: unexpected header at line " +
                                      std::to_string(line_no));
            }
            have_header = true;
            continue;
        }
        std::istringstream cells(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(cells, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ValidationError("load_run_csv: non-numeric cell at line " +
                                      std::to_string(line_no));
            }
        }
        if (row.size() != 9) {
            throw ValidationError("load_run_csv: expected 9 columns at line " +
                                  std::to_string(line_no));
        }
        times.push_back(row[1]);
        res.U.push_back(row[2]);
        res.profile.r_ref.push_back(row[3]);
        res.R.push_back(row[4]);
        res.P.push_back(row[5]);
        res.mdot.push_back(row[6]);
        res.profile.op_ref.push_back(row[7]);
        res.Op.push_back(row[8]);
    }
    if (res.R.size() < 2) {
        throw ValidationError("load_run_csv: '" + path + "' has too few rows");
    }
    res.profile.ts = times[1] - times[0];
    res.metrics = compute_metrics(res.R, res.Op, res.profile, res.start);
    return loaded;
}

void save_metrics_json(const RunMetrics& metrics, const std::string& path,
                       std::optional<double> eta_op, const std::string& digest,
                       const std::string& config_echo) {
    nlohmann::json doc;
    doc["rmse_speed"] = metrics.rmse_speed;
    doc["rmse_transient"] = metrics.rmse_transient;
    doc["max_opacity"] = metrics.max_opacity;
    doc["opacity_excess"] = metrics.opacity_excess;
    if (eta_op) doc["eta_op"] = *eta_op;
    if (!digest.empty()) doc["config_digest"] = digest;
    if (!config_echo.empty()) doc["config"] = config_echo;

    std::ofstream out(path);
    if (!out) throw ValidationError("save_metrics_json: cannot open '" + path + "'");
    out << doc.dump(2) << '\n';
}

}  // namespace dieselnet
