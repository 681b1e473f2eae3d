// Copyright 2026 The gqsearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Experiment report rows and their CSV / JSON emitters.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gqs/error.hpp"
#include "gqs/search.hpp"

namespace gqs::harness {

/// One experiment outcome. Field order is the CSV column order.
struct ReportRow {
    std::string experiment;
    std::string algorithm; ///< "general" or "boosted"
    std::string family;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double alpha = 0.0;
    double b = 0.0;
    double theta_min = 0.0;
    int m = 0;
    long long r = 1;
    double b_prime = 0.0;
    double lambda1 = 0.0;
    double lambda1_prime = 0.0;
    long long peak_q = 0;
    double peak_probability = 0.0;
    long long oracle_queries_at_peak = 0;
    long long ds_applications_at_peak = 0;
    long long q_m = 0;
    double predicted_peak_probability = 0.0;
    long long general_q_m = 0;
    double naive_b_r = std::numeric_limits<double>::quiet_NaN();
};

inline const std::vector<std::string> &report_columns() {
    static const std::vector<std::string> cols{
        "experiment", "algorithm", "family", "seed", "N", "alpha", "B", "theta_min",
        "m", "r", "B_prime", "lambda1", "lambda1_prime", "peak_q", "peak_probability",
        "oracle_queries_at_peak", "ds_applications_at_peak", "q_m",
        "predicted_peak_probability", "general_q_m", "naive_B_r"};
    return cols;
}

namespace detail {

[[nodiscard]] inline std::string num(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    return gqs::detail::fmt12(x);
}

/// The double that "%.12g" text denotes; JSON then prints it shortest-exact.
[[nodiscard]] inline nlohmann::json json_num(double x) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return std::strtod(gqs::detail::fmt12(x).c_str(), nullptr);
}

} // namespace detail

inline void write_csv(std::ostream &os, const std::vector<ReportRow> &rows) {
    const auto &cols = report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        os << (i ? "," : "") << cols[i];
    }
    os << '\n';
    using detail::num;
    for (const ReportRow &r : rows) {
        os << r.experiment << ',' << r.algorithm << ',' << r.family << ',' << r.seed
           << ',' << r.n << ',' << num(r.alpha) << ',' << num(r.b) << ','
           << num(r.theta_min) << ',' << r.m << ',' << r.r << ',' << num(r.b_prime)
           << ',' << num(r.lambda1) << ',' << num(r.lambda1_prime) << ',' << r.peak_q
           << ',' << num(r.peak_probability) << ',' << r.oracle_queries_at_peak << ','
           << r.ds_applications_at_peak << ',' << r.q_m << ','
           << num(r.predicted_peak_probability) << ',' << r.general_q_m << ','
           << num(r.naive_b_r) << '\n';
    }
}

inline void write_json(std::ostream &os, const std::vector<ReportRow> &rows) {
    using detail::json_num;
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const ReportRow &r : rows) {
        nlohmann::ordered_json o;
        o["experiment"] = r.experiment;
        o["algorithm"] = r.algorithm;
        o["family"] = r.family;
        o["seed"] = r.seed;
        o["N"] = r.n;
        o["alpha"] = json_num(r.alpha);
        o["B"] = json_num(r.b);
        o["theta_min"] = json_num(r.theta_min);
        o["m"] = r.m;
        o["r"] = r.r;
        o["B_prime"] = json_num(r.b_prime);
        o["lambda1"] = json_num(r.lambda1);
        o["lambda1_prime"] = json_num(r.lambda1_prime);
        o["peak_q"] = r.peak_q;
        o["peak_probability"] = json_num(r.peak_probability);
        o["oracle_queries_at_peak"] = r.oracle_queries_at_peak;
        o["ds_applications_at_peak"] = r.ds_applications_at_peak;
        o["q_m"] = r.q_m;
        o["predicted_peak_probability"] = json_num(r.predicted_peak_probability);
        o["general_q_m"] = r.general_q_m;
        o["naive_B_r"] = json_num(r.naive_b_r);
        doc.push_back(std::move(o));
    }
    os << doc.dump(2) << '\n';
}

inline void emit_report(const std::vector<ReportRow> &rows, const std::string &format,
                        std::ostream &os) {
    if (format == "csv") {
        write_csv(os, rows);
    } else if (format == "json") {
        write_json(os, rows);
    } else {
        throw ConfigError("unknown report format '" + format + "'");
    }
}

/// Truncates and rewrites `path`.
inline void emit_report(const std::vector<ReportRow> &rows, const std::string &format,
                        const std::string &path) {
    std::ostringstream buffer;
    emit_report(rows, format, buffer);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open report file '" + path + "' for writing");
    }
    out << buffer.str();
    out.flush();
    if (!out) {
        throw Error("write failed for report file '" + path + "'");
    }
}

/// Parses a CSV written by write_csv back into rows.
[[nodiscard]] inline std::vector<ReportRow> read_csv(std::istream &is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw ValidationError("report CSV: missing header");
    }
    std::vector<ReportRow> rows;
    while (std::getline(is, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        if (f.size() != report_columns().size()) {
            throw ValidationError("report CSV: wrong field count");
        }
        const auto d = [&](std::size_t i) { return std::strtod(f[i].c_str(), nullptr); };
        const auto ll = [&](std::size_t i) { return std::strtoll(f[i].c_str(), nullptr, 10); };
        ReportRow r;
        r.experiment = f[0];
        r.algorithm = f[1];
        r.family = f[2];
        r.seed = std::strtoull(f[3].c_str(), nullptr, 10);
        r.n = static_cast<std::size_t>(ll(4));
        r.alpha = d(5);
        r.b = d(6);
        r.theta_min = d(7);
        r.m = static_cast<int>(ll(8));
        r.r = ll(9);
        r.b_prime = d(10);
        r.lambda1 = d(11);
        r.lambda1_prime = d(12);
        r.peak_q = ll(13);
        r.peak_probability = d(14);
        r.oracle_queries_at_peak = ll(15);
        r.ds_applications_at_peak = ll(16);
        r.q_m = ll(17);
        r.predicted_peak_probability = d(18);
        r.general_q_m = ll(19);
        r.naive_b_r = d(20);
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace gqs::harness
