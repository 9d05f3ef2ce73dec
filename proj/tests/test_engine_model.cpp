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

#include <filesystem>

#include "dieselnet/engine_model.hpp"
#include "dieselnet/pipeline.hpp"

using dieselnet::assemble_engine_model;
using dieselnet::EngineInit;
using dieselnet::EngineModel;
using dieselnet::Mlp;
using dieselnet::Normalization;
using dieselnet::RegressorSpec;
using dieselnet::Rng;
using dieselnet::simulate_engine_model;
using dieselnet::SubModel;

namespace {

Normalization engine_norm() {
    Normalization norm;
    norm["T"] = {50.0, 15.0};
    norm["R"] = {1800.0, 700.0};
    norm["P"] = {170.0, 30.0};
    norm["mdot"] = {5.0, 2.0};
    norm["Op"] = {25.0, 15.0};
    return norm;
}

SubModel make(const RegressorSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    return SubModel{Mlp::random(spec.total_inputs(), 3, rng), spec, engine_norm()};
}

EngineModel random_engine(std::uint64_t seed) {
    return assemble_engine_model(make(dieselnet::default_speed_spec(), seed),
                                 make(dieselnet::default_pressure_spec(), seed + 1),
                                 make(dieselnet::default_airflow_spec(), seed + 2),
                                 make(dieselnet::default_opacity_spec(), seed + 3));
}

std::vector<double> wavy_pump(std::size_t n) {
    std::vector<double> pump(n);
    for (std::size_t k = 0; k < n; ++k) {
        pump[k] = 55.0 + 18.0 * std::sin(0.03 * static_cast<double>(k));
    }
    return pump;
}

}  // namespace

TEST_CASE("identity wiring assembles; the delay comes from the opacity spec") {
    const EngineModel model = random_engine(1);
    CHECK(model.delay == 4);
    CHECK(model.min_history() == 4);
}

TEST_CASE("swapped channels are rejected") {
    CHECK_THROWS_AS(
        assemble_engine_model(make(dieselnet::default_pressure_spec(), 2),
                              make(dieselnet::default_speed_spec(), 3),
                              make(dieselnet::default_airflow_spec(), 4),
                              make(dieselnet::default_opacity_spec(), 5)),
        dieselnet::ValidationError);

    // A speed model reading pressure violates the chain.
    RegressorSpec bad;
    bad.output = "R";
    bad.output_lags = 1;
    bad.inputs = {{"P", 1, 1}};
    CHECK_THROWS_AS(
        assemble_engine_model(make(bad, 6), make(dieselnet::default_pressure_spec(), 7),
                              make(dieselnet::default_airflow_spec(), 8),
                              make(dieselnet::default_opacity_spec(), 9)),
        dieselnet::ValidationError);
}

TEST_CASE("composite simulation equals manual chained sub-model simulation") {
    const EngineModel model = random_engine(11);
    const std::vector<double> pump = wavy_pump(300);
    const EngineInit init = EngineInit::constant(1800.0, 170.0, 5.0, 25.0, 4);
    const auto traj = simulate_engine_model(model, pump, init);

    // Manual chain: each stage simulated to completion before the next.
    const std::vector<double> initR(init.R.begin(), init.R.begin() + 4);
    const auto rhat = simulate_submodel(model.speed, {{"T", pump}}, initR);
    const auto phat = simulate_submodel(model.pressure, {{"R", rhat}}, init.P);
    const auto mhat =
        simulate_submodel(model.airflow, {{"P", phat}, {"R", rhat}}, init.mdot);
    const auto ophat = simulate_submodel(
        model.opacity, {{"T", pump}, {"R", rhat}, {"mdot", mhat}}, init.Op);

    double worst = 0.0;
    for (std::size_t k = 0; k < pump.size(); ++k) {
        worst = std::max(worst, std::abs(traj.R[k] - rhat[k]));
        worst = std::max(worst, std::abs(traj.P[k] - phat[k]));
        worst = std::max(worst, std::abs(traj.mdot[k] - mhat[k]));
        worst = std::max(worst, std::abs(traj.Op[k] - ophat[k]));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("identical calls give identical trajectories") {
    const EngineModel model = random_engine(21);
    const std::vector<double> pump = wavy_pump(200);
    const EngineInit init = EngineInit::constant(1800.0, 170.0, 5.0, 25.0, 4);
    const auto a = simulate_engine_model(model, pump, init);
    const auto b = simulate_engine_model(model, pump, init);
    for (std::size_t k = 0; k < pump.size(); ++k) {
        CHECK(a.R[k] == b.R[k]);
        CHECK(a.Op[k] == b.Op[k]);
    }
}

TEST_CASE("insufficient init history is rejected") {
    const EngineModel model = random_engine(31);
    const EngineInit init = EngineInit::constant(1800.0, 170.0, 5.0, 25.0, 2);
    CHECK_THROWS_AS(simulate_engine_model(model, wavy_pump(100), init),
                    dieselnet::ValidationError);
}

TEST_CASE("model directory save/load round trip") {
    const EngineModel model = random_engine(41);
    const auto dir =
        (std::filesystem::temp_directory_path() / "dieselnet_model_dir").string();
    save_engine_model(model, dir, "1234");
    const EngineModel restored = dieselnet::load_engine_model(dir);
    CHECK(restored.delay == model.delay);
    CHECK((restored.speed.net.params() - model.speed.net.params()).norm() == 0.0);
    CHECK((restored.opacity.net.params() - model.opacity.net.params()).norm() == 0.0);
    CHECK(restored.opacity.spec.to_string() == model.opacity.spec.to_string());

    const std::vector<double> pump = wavy_pump(50);
    const EngineInit init = EngineInit::constant(1800.0, 170.0, 5.0, 25.0, 4);
    const auto a = simulate_engine_model(model, pump, init);
    const auto b = simulate_engine_model(restored, pump, init);
    for (std::size_t k = 0; k < pump.size(); ++k) {
        CHECK(a.Op[k] == b.Op[k]);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("normalized output partial matches the network input jacobian") {
    const EngineModel model = random_engine(51);
    Eigen::VectorXd x(3);
    x << 0.1, -0.2, 0.4;
    const double partial = normalized_output_partial(model.speed, x, "T", 1);
    const Eigen::VectorXd grad = model.speed.net.input_jacobian(x);
    CHECK(partial == doctest::Approx(grad(2) / 15.0).epsilon(1e-14));
}
