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

#include "dieselnet/signal_log.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace dieselnet {

namespace {

const char* kHeader = "k,t,T,R,P,mdot,mdot_f,Op";

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

double parse_cell(const std::string& cell, int line_no, const char* column) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        while (pos < cell.size() && (cell[pos] == ' ' || cell[pos] == '\r')) ++pos;
        if (pos != cell.size()) {
            throw std::invalid_argument("trailing garbage");
        }
        return v;
    } catch (const std::exception&) {
        std::ostringstream msg;
        msg << "load_log: non-numeric cell '" << cell << "' in column " << column
            << " at line " << line_no;
        throw ValidationError(msg.str());
    }
}

}  // namespace

void SignalLog::append(const SignalRecord& rec) {
    if (!records_.empty() && rec.k <= records_.back().k) {
        throw ValidationError("SignalLog: sample index must be strictly increasing");
    }
    records_.push_back(rec);
}

bool SignalLog::is_channel(const std::string& name) {
    return name == "k" || name == "t" || name == "T" || name == "R" || name == "P" ||
           name == "mdot" || name == "mdot_f" || name == "Op";
}

std::vector<double> SignalLog::channel(const std::string& name) const {
    std::vector<double> out;
    out.reserve(records_.size());
    for (const SignalRecord& r : records_) {
        if (name == "k") out.push_back(static_cast<double>(r.k));
        else if (name == "t") out.push_back(r.t);
        else if (name == "T") out.push_back(r.T);
        else if (name == "R") out.push_back(r.R);
        else if (name == "P") out.push_back(r.P);
        else if (name == "mdot") out.push_back(r.mdot);
        else if (name == "mdot_f") out.push_back(r.mdot_f);
        else if (name == "Op") out.push_back(r.Op);
        else throw ValidationError("SignalLog: unknown channel '" + name + "'");
    }
    return out;
}

SignalLog SignalLog::slice(std::size_t begin, std::size_t end) const {
    if (begin > end || end > records_.size()) {
        throw ValidationError("SignalLog: bad slice range");
    }
    SignalLog out(ts_);
    for (std::size_t i = begin; i < end; ++i) {
        out.records_.push_back(records_[i]);
    }
    return out;
}

void save_log(const SignalLog& log, const std::string& path, const std::string& digest) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("save_log: cannot open '" + path + "' for writing");
    }
    out.precision(std::numeric_limits<double>::max_digits10);
    if (!digest.empty()) {
        out << "# config_digest " << digest << '\n';
    }
    out << kHeader << '\n';
    for (const SignalRecord& r : log.records()) {
        out << r.k << ',' << r.t << ',' << r.T << ',' << r.R << ',' << r.P << ','
            << r.mdot << ',' << r.mdot_f << ',' << r.Op << '\n';
    }
    if (!out) {
        throw ValidationError("save_log: write to '" + path + "' failed");
    }
}

SignalLog load_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("load_log: cannot open '" + path + "'");
    }

    std::string line;
    int line_no = 0;
    // Skip comments, find the header.
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line != kHeader) {
            std::ostringstream msg;
            msg << "load_log: expected header '" << kHeader << "' at line " << line_no
                << ", got '" << line << "'";
            throw ValidationError(msg.str());
        }
        have_header = true;
        break;
    }
    if (!have_header) {
        throw ValidationError("load_log: missing header in '" + path + "'");
    }

    SignalLog log;
    double t0 = 0.0, t1 = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 8) {
            std::ostringstream msg;
            msg << "load_log: expected 8 columns at line " << line_no << ", got "
                << cells.size();
            throw ValidationError(msg.str());
        }
        SignalRecord rec;
        rec.k = static_cast<long>(parse_cell(cells[0], line_no, "k"));
        rec.t = parse_cell(cells[1], line_no, "t");
        rec.T = parse_cell(cells[2], line_no, "T");
        rec.R = parse_cell(cells[3], line_no, "R");
        rec.P = parse_cell(cells[4], line_no, "P");
        rec.mdot = parse_cell(cells[5], line_no, "mdot");
        rec.mdot_f = parse_cell(cells[6], line_no, "mdot_f");
        rec.Op = parse_cell(cells[7], line_no, "Op");
        log.append(rec);

        const std::size_t n = log.size();
        if (n == 2) {
            t0 = log[0].t;
            t1 = log[1].t;
            if (t1 <= t0) {
                std::ostringstream msg;
                msg << "load_log: non-increasing time at line " << line_no;
                throw ValidationError(msg.str());
            }
        } else if (n > 2) {
            const double expected = t1 + (t1 - t0) * static_cast<double>(n - 2);
            if (std::abs(rec.t - expected) > 1e-6 * std::max(1.0, std::abs(expected))) {
                std::ostringstream msg;
                msg << "load_log: non-uniform sampling at line " << line_no << " (t="
                    << rec.t << ", expected " << expected << ")";
                throw ValidationError(msg.str());
            }
        }
    }
    if (log.empty()) {
        throw ValidationError("load_log: '" + path + "' has no data rows");
    }
    log.set_ts(log.size() >= 2 ? t1 - t0 : 0.1);
    return log;
}

}  // namespace dieselnet
