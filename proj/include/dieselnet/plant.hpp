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

#include <array>
#include <cstdint>
#include <vector>

#include "dieselnet/signal_log.hpp"

namespace dieselnet {

/**
 * Deterministic synthetic turbocharged diesel plant. Difference equations,
 * per sample of Ts seconds (state stays noise-free, Gaussian noise is added
 * to emitted measurements only):
 *
 *   mdot_f(k) = fuel_gain * T(k) * (0.5 + R(k)/2000)
 *   P(k+1)    = P(k) + (Ts/boost_tau) * (p_ambient + p_speed_gain*R(k) - P(k))
 *   mdot(k)   = air_gain * P(k) * R(k) / 60
 *   phi(k)    = mdot_f(k) / mdot(k)
 *   eta_c(k)  = 1 / (1 + exp(rich_slope * (phi(k) - rich_ratio*phi_s)))
 *   R(k+1)    = R(k) + Ts*(torque_gain*mdot_f(k)*eta_c(k)
 *                          - friction*R(k) - drag*R(k)^2)
 *   s(k)      = 100 / (1 + exp(-smoke_slope * (phi(k) - smoke_ratio*phi_s)))
 *   Op(k+1)   = Op(k) + (Ts/opacity_tau) * (s(k-3) - Op(k))
 *
 * The three-sample smoke buffer plus the one-step state update give the
 * opacity a pure transport delay of exactly 4 samples from T at Ts = 0.1 s.
 */
struct PlantParams {
    double ts = 0.1;            ///< s
    double fuel_gain = 0.004;   ///< g/s per % at 1000 rpm equivalent
    double boost_tau = 0.8;     ///< s
    double p_ambient = 100.0;   ///< kPa
    double p_speed_gain = 0.04; ///< kPa per rpm
    double air_gain = 0.0012;   ///< g/s per (kPa*rpm/60)
    double phi_stoich = 1.0 / 14.6;
    double rich_slope = 20.0;
    double rich_ratio = 1.5;
    double torque_gain = 1400.0;  ///< rpm/s per g/s of burned fuel
    double friction = 0.12;       ///< 1/s
    double drag = 2.0e-5;         ///< 1/(rpm*s)
    double smoke_slope = 60.0;
    double smoke_ratio = 1.1;
    double opacity_tau = 0.5;     ///< s

    double sigma_R = 5.0;     ///< rpm, measurement noise
    double sigma_P = 0.5;     ///< kPa
    double sigma_Op = 0.5;    ///< %
    double sigma_mdot = 0.02; ///< g/s
    std::uint64_t noise_seed = 42;

    void validate() const;
};

struct PlantState {
    double R = 800.0;   ///< rpm
    double P = 132.0;   ///< kPa, boost equilibrium for 800 rpm
    double Op = 10.0;   ///< %
    std::array<double, 3> smoke;  ///< s(k-1), s(k-2), s(k-3)

    PlantState() { smoke.fill(10.0); }
};

class DieselPlant {
public:
    explicit DieselPlant(const PlantParams& params = {});

    const PlantParams& params() const { return params_; }
    const PlantState& state() const { return state_; }

    void reset(const PlantState& state);

    /// Advance one sample under pump position T_k (clamped to [0,100]) and
    /// emit the noisy measurement record for the pre-update instant k.
    SignalRecord step(double T_k);

    /// Noise-free channel values at the current state for a hypothetical T.
    SignalRecord observe(double T_k) const;

private:
    PlantParams params_;
    PlantState state_;
    Rng noise_;
    long k_ = 0;
};

/// Fold DieselPlant::step over a control sequence.
SignalLog simulate_plant(const PlantParams& params, const std::vector<double>& pump,
                         const PlantState& initial);

/// Run the noise-free plant at constant T until R and Op settle; used to
/// construct operating points. Returns the settled state.
PlantState settle_plant(const PlantParams& params, double T, int max_steps = 20000,
                        PlantState start = {});

}  // namespace dieselnet
