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

/// One sample of every engine signal. T is the injection pump position (%),
/// R speed (rpm), P intake manifold pressure (kPa), mdot inlet airflow (g/s),
/// mdot_f fuel flow (g/s), Op exhaust opacity (%).
struct SignalRecord {
    long k = 0;
    double t = 0.0;
    double T = 0.0;
    double R = 0.0;
    double P = 0.0;
    double mdot = 0.0;
    double mdot_f = 0.0;
    double Op = 0.0;
};

/// Uniformly sampled multichannel time series.
class SignalLog {
public:
    SignalLog() = default;
    explicit SignalLog(double ts) : ts_(ts) {}

    double ts() const { return ts_; }
    void set_ts(double ts) { ts_ = ts; }

    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    const SignalRecord& operator[](std::size_t i) const { return records_[i]; }
    const std::vector<SignalRecord>& records() const { return records_; }

    void append(const SignalRecord& rec);

    /// Extract one channel by name: one of k, t, T, R, P, mdot, mdot_f, Op.
    std::vector<double> channel(const std::string& name) const;
    static bool is_channel(const std::string& name);

    /// Contiguous sub-log [begin, end).
    SignalLog slice(std::size_t begin, std::size_t end) const;

private:
    double ts_ = 0.1;
    std::vector<SignalRecord> records_;
};

/// CSV with header k,t,T,R,P,mdot,mdot_f,Op; '#' comment lines allowed before
/// the header. Values written with 17 significant digits so a round trip is
/// exact.
void save_log(const SignalLog& log, const std::string& path,
              const std::string& digest = "");
SignalLog load_log(const std::string& path);

}  // namespace dieselnet
