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

#include "dieselnet/excitation.hpp"

#include <algorithm>

namespace dieselnet {

void ExcitationConfig::validate() const {
    if (lo < 0.0 || hi > 100.0 || lo >= hi) {
        throw ValidationError("ExcitationConfig: need 0 <= lo < hi <= 100");
    }
    if (n_levels < 2) throw ValidationError("ExcitationConfig: n_levels must be >= 2");
    if (hold_min < 1 || hold_max < hold_min) {
        throw ValidationError("ExcitationConfig: need 1 <= hold_min <= hold_max");
    }
}

ExcitationKind excitation_kind_from_string(const std::string& name) {
    if (name == "staircase") return ExcitationKind::kStaircase;
    if (name == "prbs" || name == "am-prbs") return ExcitationKind::kPrbs;
    throw ValidationError("unknown excitation kind '" + name + "'");
}

std::vector<double> generate_excitation(const ExcitationConfig& cfg, int duration,
                                        std::uint64_t seed) {
    cfg.validate();
    if (duration < 100) {
        throw ValidationError("generate_excitation: duration must be >= 100 samples");
    }

    Rng rng(seed);
    std::vector<double> pump;
    pump.reserve(static_cast<std::size_t>(duration));

    if (cfg.kind == ExcitationKind::kStaircase) {
        // Evenly spaced levels visited in a seeded shuffled order; each level
        // held for an equal share of the duration.
        std::vector<double> levels(static_cast<std::size_t>(cfg.n_levels));
        for (int i = 0; i < cfg.n_levels; ++i) {
            levels[static_cast<std::size_t>(i)] =
                cfg.lo + (cfg.hi - cfg.lo) * static_cast<double>(i) /
                             static_cast<double>(cfg.n_levels - 1);
        }
        for (std::size_t i = levels.size(); i > 1; --i) {
            std::swap(levels[i - 1], levels[rng.uniform_index(i)]);
        }
        const int hold = duration / cfg.n_levels;
        for (int i = 0; i < duration; ++i) {
            const int idx = std::min(i / std::max(hold, 1), cfg.n_levels - 1);
            pump.push_back(levels[static_cast<std::size_t>(idx)]);
        }
    } else {
        while (static_cast<int>(pump.size()) < duration) {
            const int hold =
                cfg.hold_min +
                static_cast<int>(rng.uniform_index(
                    static_cast<std::uint64_t>(cfg.hold_max - cfg.hold_min + 1)));
            const double level = cfg.amplitude_modulated
                                     ? rng.uniform(cfg.lo, cfg.hi)
                                     : (rng.next_u64() & 1 ? cfg.hi : cfg.lo);
            for (int i = 0; i < hold && static_cast<int>(pump.size()) < duration; ++i) {
                pump.push_back(level);
            }
        }
    }
    return pump;
}

}  // namespace dieselnet
