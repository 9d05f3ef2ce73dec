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

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "dieselnet/mlp.hpp"
#include "dieselnet/regressor.hpp"

namespace dieselnet {

/// Affine per-channel scaling to zero mean, unit variance.
struct ChannelStats {
    double mean = 0.0;
    double scale = 1.0;

    double normalize(double v) const { return (v - mean) / scale; }
    double denormalize(double v) const { return mean + scale * v; }
};

using Normalization = std::map<std::string, ChannelStats>;

ChannelStats compute_stats(const std::vector<double>& values);

/// Channel name -> raw samples; the exogenous data a sub-model simulates over.
using ChannelData = std::map<std::string, std::vector<double>>;

/**
 * One MISO Output-Error neural sub-model: network, lag structure and the
 * normalization constants it was trained with. All regressors are normalized
 * before entering the network; the network output is the normalized output
 * channel.
 */
struct SubModel {
    Mlp net;
    RegressorSpec spec;
    Normalization norm;

    void validate() const;

    const ChannelStats& stats(const std::string& channel) const;

    /// Position of channel(k - delay - lag_offset) inside the regressor
    /// vector; used to pull single input partials out of the network Jacobian.
    int regressor_index(const std::string& channel, int delay, int lag_offset = 0) const;
};

/**
 * Simulation (OE) run: past the init window the output lags read the model's
 * own previous outputs, never measured data. init_output (engineering units)
 * seeds the first init_output.size() samples and must cover at least the
 * regressor span spec.min_start().
 *
 * Returns the full-length simulated output; the init window is a copy of
 * init_output.
 */
std::vector<double> simulate_submodel(const SubModel& m, const ChannelData& channels,
                                      const std::vector<double>& init_output);

/**
 * Forward OE sensitivity recursion. Row k holds d yhat_norm(k)/d theta; rows
 * before min_start() are zero. Also returns the simulated normalized output.
 */
struct OeSensitivities {
    Eigen::MatrixXd d_theta;            ///< (N x p)
    std::vector<double> output_norm;    ///< normalized simulation
};
OeSensitivities oe_sensitivities(const SubModel& m, const ChannelData& channels,
                                 const std::vector<double>& init_output);

void save_submodel(const SubModel& m, const std::string& path,
                   const std::string& digest = "");
SubModel load_submodel(const std::string& path);

}  // namespace dieselnet
