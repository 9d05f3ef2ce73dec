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

#include <string>
#include <vector>

#include "dieselnet/closed_loop.hpp"
#include "dieselnet/excitation.hpp"
#include "dieselnet/fit.hpp"
#include "dieselnet/neurocontrol.hpp"
#include "dieselnet/plant.hpp"

namespace dieselnet {

/**
 * Everything one experiment needs, resolved. Parsed from a plain-text
 * key-value document with [section] headers; unknown sections or keys are
 * rejected. Command-line flags override file values through set().
 */
struct RunConfig {
    PlantParams plant;

    ExcitationConfig excitation;
    int excitation_duration = 2000;
    std::uint64_t excitation_seed = 123;
    int validation_duration = 1000;
    std::uint64_t validation_seed = 456;

    // identify
    int speed_hidden = 8;
    int pressure_hidden = 4;
    int airflow_hidden = 6;
    int opacity_hidden = 12;
    double train_split = 0.7;

    FitConfig fit;

    // select
    int select_phase1_hidden = 10;
    int select_max_order = 4;
    std::vector<int> select_node_grid = {2, 4, 6, 8, 10, 12};

    ControllerTrainConfig controller;
    std::vector<double> eta_list = {0.0, 0.2, 0.8};

    // profile
    std::vector<ProfileStep> profile_steps = {
        {0.0, 1200.0}, {15.0, 2000.0}, {30.0, 2800.0}, {45.0, 1600.0}};
    double profile_duration = 60.0;
    OpRefMode op_ref_mode = OpRefMode::kCeiling;
    double op_ceiling = 15.0;

    /// Set one "section.key" to a textual value (same syntax as the file).
    void set(const std::string& dotted_key, const std::string& value);

    /// Canonical resolved document: every key in schema order.
    std::string serialize() const;

    /// FNV-1a digest of serialize(), hex; stamped into every output file.
    std::string digest() const;

    void validate() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);
void save_config(const RunConfig& config, const std::string& path);

}  // namespace dieselnet
