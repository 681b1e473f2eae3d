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
 * The five canonical experiments, driven by an ExperimentConfig.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "gqs/error.hpp"
#include "gqs/harness/config.hpp"
#include "gqs/harness/report.hpp"
#include "gqs/pea.hpp"
#include "gqs/search.hpp"
#include "gqs/spectra.hpp"

namespace gqs::harness {

/// Beyond this the joint spectral-frame state stops being desk scale.
inline constexpr std::size_t kMaxJointDimension = std::size_t{1} << 18;

struct ExperimentOutput {
    std::vector<ReportRow> rows;
    std::vector<RunReport> traces; ///< one per row, same order
};

namespace detail {

inline void check_size(const ExperimentConfig &c) {
    if (c.family == "scaling" || c.family == "file") {
        return;
    }
    if (c.n < 2 || c.n > kDenseCap) {
        throw SizeError("instance size N = " + std::to_string(c.n) +
                        " outside [2, " + std::to_string(kDenseCap) + "]");
    }
}

[[nodiscard]] inline GeneratorOptions options(const ExperimentConfig &c, double alpha) {
    GeneratorOptions o;
    o.alpha = alpha;
    o.target_index = c.target_index;
    return o;
}

[[nodiscard]] inline SearchInstance build_family(const ExperimentConfig &c,
                                                 const std::string &family,
                                                 double alpha, double target_b) {
    const GeneratorOptions opts = options(c, alpha);
    if (family == "grover") {
        return make_instance(grover_spectrum(c.n, uniform_state(c.n)), c.target_index);
    }
    if (family == "symmetric") {
        return make_instance(
            symmetric_spectrum(c.n, c.seed, c.theta_min, c.theta_max, opts),
            c.target_index);
    }
    if (family == "resonant") {
        const int m = c.m > 0 ? c.m : c.resonance_m;
        return make_instance(resonant_spectrum(c.n, m, c.epsilon, c.seed, opts),
                             c.target_index);
    }
    if (family == "scaling") {
        return make_instance(scaling_family(c.log2n, c.seed, c.target_index),
                             c.target_index);
    }
    if (family == "tuned") {
        return make_instance(tuned_spectrum(c.n, c.seed, target_b, c.spread, opts),
                             c.target_index);
    }
    if (family == "file") {
        if (c.spectrum_path.empty()) {
            throw ConfigError("family 'file' needs instance.spectrum_path", 0,
                              "instance.spectrum_path");
        }
        std::ifstream in(c.spectrum_path);
        if (!in) {
            throw ConfigError("cannot open spectrum file '" + c.spectrum_path + "'", 0,
                              "instance.spectrum_path");
        }
        EigenSpectrum spec = read_spectrum(in);
        if (spec.dimension() > kDenseCap) {
            throw SizeError("spectrum file dimension exceeds the dense cap");
        }
        return make_instance(std::move(spec), c.target_index);
    }
    throw ConfigError("unknown instance family '" + family + "'", 0, "instance.family");
}

[[nodiscard]] inline long long auto_q_max(long long configured, long long q_m) {
    return configured > 0 ? configured : std::max<long long>(4, 2 * q_m);
}

[[nodiscard]] inline ReportRow describe(const ExperimentConfig &c, const std::string &id,
                                        const std::string &family,
                                        const SearchInstance &inst) {
    ReportRow row;
    row.experiment = id;
    row.family = family;
    row.seed = c.seed;
    row.n = inst.dimension();
    row.alpha = inst.alpha;
    row.b = inst.b_direct;
    row.theta_min = inst.spec().theta_min();
    row.lambda1 = inst.lambda1;
    row.general_q_m = predict_spectrum(inst).q_m;
    return row;
}

inline void fill_outcome(ReportRow &row, const RunReport &run) {
    row.peak_q = run.peak_q;
    row.peak_probability = run.peak_probability;
    row.oracle_queries_at_peak = run.at_peak().oracle_queries;
    row.ds_applications_at_peak = run.at_peak().ds_applications;
}

inline void general_row(const ExperimentConfig &c, const std::string &id,
                        const std::string &family, const SearchInstance &inst,
                        ExperimentOutput &out) {
    ReportRow row = describe(c, id, family, inst);
    const PredictedSpectrum pred = predict_spectrum(inst);
    row.algorithm = "general";
    row.m = 0;
    row.r = 1;
    row.b_prime = inst.b_direct;
    row.lambda1_prime = inst.lambda1;
    row.q_m = pred.q_m;
    row.predicted_peak_probability = 1.0 / (inst.b_direct * inst.b_direct);
    RunReport run = run_iterations(inst, auto_q_max(c.q_max, pred.q_m));
    fill_outcome(row, run);
    out.rows.push_back(std::move(row));
    out.traces.push_back(std::move(run));
}

inline void boosted_row(const ExperimentConfig &c, const std::string &id,
                        const std::string &family, const SearchInstance &inst, int m,
                        bool with_naive, ExperimentOutput &out) {
    if (m == 0) {
        m = default_ancilla_qubits(inst.b_direct);
    }
    check_ancilla_qubits(m);
    if ((inst.dimension() << m) > kMaxJointDimension) {
        throw SizeError("joint dimension N * 2^m exceeds " +
                        std::to_string(kMaxJointDimension));
    }
    ReportRow row = describe(c, id, family, inst);
    const BPrimeBreakdown bp = b_prime(inst, m);
    row.algorithm = "boosted";
    row.m = m;
    row.r = 1LL << m;
    row.b_prime = bp.b_prime;
    row.lambda1_prime = lambda1_prime(inst, m);
    const PredictedSpectrum pred = predict_spectrum(inst.alpha, bp.b_prime, row.lambda1_prime);
    row.q_m = pred.q_m;
    row.predicted_peak_probability = 1.0 / (bp.b_prime * bp.b_prime);
    if (with_naive) {
        try {
            row.naive_b_r = naive_power_b(inst, row.r);
        } catch (const DivergenceError &) {
            row.naive_b_r = std::numeric_limits<double>::infinity();
        }
    }
    RunReport run = boosted_search_run(inst, m, auto_q_max(c.q_max, pred.q_m));
    fill_outcome(row, run);
    out.rows.push_back(std::move(row));
    out.traces.push_back(std::move(run));
}

} // namespace detail

/// Builds the search instance a config describes (family, N, seed, ...).
[[nodiscard]] inline SearchInstance build_instance(const ExperimentConfig &c) {
    detail::check_size(c);
    return detail::build_family(c, c.family, c.alpha, c.target_b);
}

[[nodiscard]] inline ExperimentOutput run_experiment_traced(const ExperimentConfig &c) {
    detail::check_size(c);
    ExperimentOutput out;
    const std::string id = c.experiment_id();
    if (c.kind == "grover-baseline") {
        const SearchInstance inst = detail::build_family(c, "grover", c.alpha, c.target_b);
        detail::general_row(c, id, "grover", inst, out);
    } else if (c.kind == "general-search") {
        detail::general_row(c, id, c.family, build_instance(c), out);
    } else if (c.kind == "boosted-search") {
        detail::boosted_row(c, id, c.family, build_instance(c), c.m, false, out);
    } else if (c.kind == "divergence-demo") {
        const int m = c.m > 0 ? c.m : c.resonance_m;
        const SearchInstance inst = detail::build_family(c, "resonant", c.alpha, c.target_b);
        detail::boosted_row(c, id, "resonant", inst, m, true, out);
    } else if (c.kind == "b-sweep") {
        const double alpha = c.alpha > 0.0 ? c.alpha : 1.0 / 16.0;
        for (const double b : c.b_targets) {
            const SearchInstance inst = detail::build_family(c, "tuned", alpha, b);
            detail::boosted_row(c, id + "/B=" + gqs::detail::fmt12(b), "tuned", inst,
                                c.m, false, out);
        }
    } else {
        throw ConfigError("unknown experiment kind '" + c.kind + "'", 0, "experiment.kind");
    }
    return out;
}

[[nodiscard]] inline std::vector<ReportRow> run_experiment(const ExperimentConfig &c) {
    return run_experiment_traced(c).rows;
}

/// Concatenated per-iteration CSVs, each preceded by "# <experiment>".
inline void write_traces(const std::string &path, const ExperimentOutput &out) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw Error("cannot open trace file '" + path + "' for writing");
    }
    for (std::size_t k = 0; k < out.rows.size(); ++k) {
        os << "# " << out.rows[k].experiment << ' ' << out.rows[k].algorithm << '\n';
        write_run_csv(os, out.traces[k]);
    }
    if (!os) {
        throw Error("write failed for trace file '" + path + "'");
    }
}

} // namespace gqs::harness
