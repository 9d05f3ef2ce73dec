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

#include "dieselnet/plant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dieselnet {

namespace {
// Airflow floor for the fuel-air ratio; keeps phi finite at standstill.
constexpr double kAirflowFloor = 1e-6;
}  // namespace

void PlantParams::validate() const {
    if (ts <= 0.0) throw ValidationError("PlantParams: ts must be > 0");
    if (boost_tau <= 0.0 || opacity_tau <= 0.0) {
        throw ValidationError("PlantParams: time constants must be > 0");
    }
    if (fuel_gain <= 0.0 || air_gain <= 0.0 || torque_gain <= 0.0) {
        throw ValidationError("PlantParams: gains must be > 0");
    }
    if (sigma_R < 0.0 || sigma_P < 0.0 || sigma_Op < 0.0 || sigma_mdot < 0.0) {
        throw ValidationError("PlantParams: noise sigmas must be >= 0");
    }
}

DieselPlant::DieselPlant(const PlantParams& params)
    : params_(params), noise_(params.noise_seed) {
    params_.validate();
}

void DieselPlant::reset(const PlantState& state) {
    state_ = state;
    noise_ = Rng(params_.noise_seed);
    k_ = 0;
}

SignalRecord DieselPlant::observe(double T_k) const {
    const double T = std::clamp(T_k, 0.0, 100.0);
    SignalRecord rec;
    rec.k = k_;
    rec.t = static_cast<double>(k_) * params_.ts;
    rec.T = T;
    rec.R = state_.R;
    rec.P = state_.P;
    rec.mdot = params_.air_gain * state_.P * state_.R / 60.0;
    rec.mdot_f = params_.fuel_gain * T * (0.5 + state_.R / 2000.0);
    rec.Op = state_.Op;
    return rec;
}

SignalRecord DieselPlant::step(double T_k) {
    const double T = std::clamp(T_k, 0.0, 100.0);

    const double mdot_f = params_.fuel_gain * T * (0.5 + state_.R / 2000.0);
    const double mdot = params_.air_gain * state_.P * state_.R / 60.0;
    const double phi = mdot_f / std::max(mdot, kAirflowFloor);
    const double eta_c =
        1.0 / (1.0 + std::exp(params_.rich_slope * (phi - params_.rich_ratio * params_.phi_stoich)));
    const double smoke =
        100.0 / (1.0 + std::exp(-params_.smoke_slope * (phi - params_.smoke_ratio * params_.phi_stoich)));

    SignalRecord rec;
    rec.k = k_;
    rec.t = static_cast<double>(k_) * params_.ts;
    rec.T = T;
    rec.R = state_.R + params_.sigma_R * noise_.gaussian();
    rec.P = state_.P + params_.sigma_P * noise_.gaussian();
    rec.mdot = mdot + params_.sigma_mdot * noise_.gaussian();
    rec.mdot_f = mdot_f;
    rec.Op = state_.Op + params_.sigma_Op * noise_.gaussian();

    const double ts = params_.ts;
    const double next_R =
        state_.R + ts * (params_.torque_gain * mdot_f * eta_c - params_.friction * state_.R -
                         params_.drag * state_.R * state_.R);
    const double next_P =
        state_.P + (ts / params_.boost_tau) *
                       (params_.p_ambient + params_.p_speed_gain * state_.R - state_.P);
    const double next_Op =
        state_.Op + (ts / params_.opacity_tau) * (state_.smoke[2] - state_.Op);

    if (!std::isfinite(next_R) || !std::isfinite(next_P) || !std::isfinite(next_Op)) {
        std::ostringstream msg;
        msg << "DieselPlant: non-finite state at sample " << k_;
        throw NumericalFault(msg.str());
    }

    state_.R = next_R;
    state_.P = next_P;
    state_.Op = next_Op;
    state_.smoke[2] = state_.smoke[1];
    state_.smoke[1] = state_.smoke[0];
    state_.smoke[0] = smoke;
    ++k_;
    return rec;
}

SignalLog simulate_plant(const PlantParams& params, const std::vector<double>& pump,
                         const PlantState& initial) {
    if (pump.empty()) {
        throw ValidationError("simulate_plant: empty control sequence");
    }
    DieselPlant plant(params);
    plant.reset(initial);
    SignalLog log(params.ts);
    for (double T : pump) {
        log.append(plant.step(T));
    }
    return log;
}

PlantState settle_plant(const PlantParams& params, double T, int max_steps,
                        PlantState start) {
    PlantParams quiet = params;
    quiet.sigma_R = quiet.sigma_P = quiet.sigma_Op = quiet.sigma_mdot = 0.0;
    DieselPlant plant(quiet);
    plant.reset(start);
    for (int i = 0; i < max_steps; ++i) {
        plant.step(T);
    }
    return plant.state();
}

}  // namespace dieselnet
