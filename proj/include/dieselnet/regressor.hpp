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

#include "dieselnet/common.hpp"

namespace dieselnet {

/// One exogenous regressor group: channel(k-delay), ..., channel(k-delay-lags+1).
struct InputTerm {
    std::string channel;
    int lags = 1;
    int delay = 1;
};

/**
 * Lag structure of one MISO sub-model. The regressor vector for output y at
 * time k is
 *
 *   [ y(k-1) ... y(k-output_lags),
 *     u1(k-d1) ... u1(k-d1-n1+1), u2(k-d2) ... ]
 *
 * in declaration order. In simulation mode the y lags read the model's own
 * past outputs.
 */
struct RegressorSpec {
    std::string output;
    int output_lags = 1;
    std::vector<InputTerm> inputs;

    void validate() const;

    int total_inputs() const;

    /// First sample index at which the full regressor exists.
    int min_start() const;

    /// Largest input delay; d of the opacity model.
    int max_delay() const;

    /// Compact one-cell encoding, e.g. "y:1|T:1d4|R:1d4|mdot:1d4".
    std::string to_string() const;
    static RegressorSpec from_string(const std::string& output,
                                     const std::string& encoded);
};

}  // namespace dieselnet
