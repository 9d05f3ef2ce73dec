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

#include <optional>
#include <string>
#include <vector>

#include "dieselnet/levenberg.hpp"
#include "dieselnet/signal_log.hpp"
#include "dieselnet/submodel.hpp"

namespace dieselnet {

struct FitConfig {
    LmConfig lm;
    int max_restarts = 5;  ///< random re-initializations after divergence
    int n_starts = 1;      ///< independent inits per fit; best SSE wins
    std::uint64_t seed = 7;
};

struct FitResult {
    SubModel model;
    double sse = 0.0;   ///< sum of squared normalized residuals
    int n_residuals = 0;
    int restarts_used = 0;
};

/**
 * Output-Error training of one sub-model on a log: the residual is the
 * normalized difference between the measured output channel and the model's
 * own simulation, and the Jacobian comes from the forward sensitivity
 * recursion. Normalization constants are computed from this log and stored
 * in the returned model.
 */
FitResult fit_oe_model(const SignalLog& log, const RegressorSpec& spec, int n_hidden,
                       const FitConfig& cfg = {});

/// Akaike's final prediction error, (sse/N) * (N+p)/(N-p). Requires N > p >= 1.
double fpe(double sse, int n_samples, int n_params);

struct FpeCandidate {
    RegressorSpec spec;
    int n_hidden = 0;
    double sse = 0.0;
    int n_params = 0;
    int n_samples = 0;
    double fpe = 0.0;
    bool failed = false;
    bool selected = false;
    int phase = 1;
};

struct FpeReport {
    std::vector<FpeCandidate> candidates;
    std::optional<FpeCandidate> best;
};

struct SelectConfig {
    FitConfig fit;
    int phase1_hidden = 10;          ///< node count "chosen large enough"
    std::vector<int> node_grid = {2, 4, 6, 8, 10, 12};
};

/**
 * Two-phase structure search: phase 1 trains every order candidate at a
 * fixed large node count and keeps the order with minimal FPE; phase 2
 * re-trains that order over the node grid and keeps the minimal-FPE node
 * count. Returns the final trained model together with the full report.
 */
struct SelectResult {
    FpeReport report;
    SubModel model;
};
SelectResult select_structure(const SignalLog& log,
                              const std::vector<RegressorSpec>& order_grid,
                              const SelectConfig& cfg);

/// order_spec,n_hidden,sse,p,N,fpe,selected rows, one per trained candidate.
void save_fpe_report(const FpeReport& report, const std::string& path,
                     const std::string& digest = "");

}  // namespace dieselnet
