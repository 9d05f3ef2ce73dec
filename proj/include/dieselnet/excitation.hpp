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

#include <cstdint>
#include <string>
#include <vector>

#include "dieselnet/common.hpp"

namespace dieselnet {

enum class ExcitationKind {
    kStaircase,  ///< shuffled tour over n_levels distinct levels
    kPrbs,       ///< pseudo-random binary switching between lo and hi
};

struct ExcitationConfig {
    ExcitationKind kind = ExcitationKind::kPrbs;
    double lo = 35.0;   ///< % pump position
    double hi = 75.0;   ///< %
    int n_levels = 8;   ///< staircase only
    int hold_min = 5;   ///< prbs: minimum samples per level
    int hold_max = 20;  ///< prbs: maximum samples per level
    /// prbs only: draw each segment's level uniformly from [lo,hi] instead of
    /// toggling between the two endpoints (amplitude-modulated PRBS).
    bool amplitude_modulated = true;

    void validate() const;
};

ExcitationKind excitation_kind_from_string(const std::string& name);

/// Persistently exciting pump-position sequence within [0,100]%.
std::vector<double> generate_excitation(const ExcitationConfig& cfg, int duration,
                                        std::uint64_t seed);

}  // namespace dieselnet
