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

#include "dieselnet/regressor.hpp"

#include <algorithm>
#include <sstream>

namespace dieselnet {

void RegressorSpec::validate() const {
    if (output.empty()) throw ValidationError("RegressorSpec: missing output channel");
    if (output_lags < 0) throw ValidationError("RegressorSpec: output_lags must be >= 0");
    int total = output_lags;
    for (const InputTerm& term : inputs) {
        if (term.channel.empty()) {
            throw ValidationError("RegressorSpec: input term without channel");
        }
        if (term.lags < 0 || term.delay < 0) {
            throw ValidationError("RegressorSpec: lags and delay must be >= 0");
        }
        total += term.lags;
    }
    if (total < 1) throw ValidationError("RegressorSpec: needs at least one regressor");
}

int RegressorSpec::total_inputs() const {
    int total = output_lags;
    for (const InputTerm& term : inputs) total += term.lags;
    return total;
}

int RegressorSpec::min_start() const {
    int start = output_lags;
    for (const InputTerm& term : inputs) {
        if (term.lags > 0) start = std::max(start, term.delay + term.lags - 1);
    }
    return start;
}

int RegressorSpec::max_delay() const {
    int d = 0;
    for (const InputTerm& term : inputs) {
        if (term.lags > 0) d = std::max(d, term.delay);
    }
    return d;
}

std::string RegressorSpec::to_string() const {
    std::ostringstream out;
    out << "y:" << output_lags;
    for (const InputTerm& term : inputs) {
        out << '|' << term.channel << ':' << term.lags << 'd' << term.delay;
    }
    return out.str();
}

RegressorSpec RegressorSpec::from_string(const std::string& output,
                                         const std::string& encoded) {
    RegressorSpec spec;
    spec.output = output;
    std::istringstream in(encoded);
    std::string part;
    bool first = true;
    while (std::getline(in, part, '|')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) {
            throw ValidationError("RegressorSpec: bad term '" + part + "'");
        }
        const std::string name = part.substr(0, colon);
        const std::string rest = part.substr(colon + 1);
        if (first) {
            if (name != "y") {
                throw ValidationError("RegressorSpec: encoding must start with y:<lags>");
            }
            spec.output_lags = std::stoi(rest);
            first = false;
            continue;
        }
        InputTerm term;
        term.channel = name;
        const auto dpos = rest.find('d');
        if (dpos == std::string::npos) {
            term.lags = std::stoi(rest);
            term.delay = 1;
        } else {
            term.lags = std::stoi(rest.substr(0, dpos));
            term.delay = std::stoi(rest.substr(dpos + 1));
        }
        spec.inputs.push_back(term);
    }
    spec.validate();
    return spec;
}

}  // namespace dieselnet
