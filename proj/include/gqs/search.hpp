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
 * Generalized search S = Ds * It iterated on the source state.
 *
 * Simulation runs in the eigenbasis of Ds: there Ds is a diagonal phase
 * and It = 1 - 2|t><t| is a rank-one update along the target coordinates,
 * so one iteration costs O(N) regardless of how the eigenbasis looks.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "gqs/numerics.hpp"
#include "gqs/spectra.hpp"

namespace gqs {

/// Diagonal unitary with exp(i phi) at `index` and 1 elsewhere.
[[nodiscard]] inline UnitaryMatrix selective_phase(std::size_t dimension,
                                                   std::size_t index, double phi) {
    if (index >= dimension) {
        throw ValidationError("selective_phase: index out of range");
    }
    UnitaryMatrix::check_cap(dimension);
    const auto d = static_cast<Eigen::Index>(dimension);
    CMatrix m = CMatrix::Identity(d, d);
    m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) =
        std::polar(1.0, phi);
    return UnitaryMatrix::trusted(std::move(m));
}

/// S = Ds * It as a dense matrix (It acts first).
[[nodiscard]] inline UnitaryMatrix search_operator(const SearchInstance &inst) {
    const UnitaryMatrix ds = build_diffusion(inst.spec());
    const UnitaryMatrix it = selective_phase(inst.dimension(), inst.target_index, kPi);
    return ds * it;
}

/// Matrix-free S|psi> in the computational basis, O(N^2).
[[nodiscard]] inline StateVector apply_search_operator(const SearchInstance &inst,
                                                       const StateVector &psi) {
    if (psi.dimension() != inst.dimension()) {
        throw DimensionError("apply_search_operator: dimension mismatch");
    }
    const CMatrix &v = inst.spec().eigenbasis();
    CVector x = psi.amplitudes();
    x(static_cast<Eigen::Index>(inst.target_index)) *= -1.0;
    CVector c = v.adjoint() * x;
    for (Eigen::Index l = 0; l < c.size(); ++l) {
        c(l) *= std::polar(1.0, inst.spec().phase(static_cast<std::size_t>(l)));
    }
    return StateVector(v * c);
}

struct PredictedSpectrum {
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    double eta = 0.0;
    long long q_m = 0;
    double peak_overlap = 0.0;
};

/**
 * lambda_+- = +-(2 alpha / B) tan(eta)^(+-1), cot(2 eta) = Lambda_1 / (2 alpha B).
 * For Lambda_1 == 0 this is eta = pi/4 and lambda_+- = +-2 alpha / B.
 */
[[nodiscard]] inline PredictedSpectrum predict_spectrum(double alpha, double b,
                                                        double lambda1) {
    if (!(alpha > 0.0) || !(b > 0.0)) {
        throw ValidationError("predict_spectrum: need alpha > 0 and B > 0");
    }
    PredictedSpectrum out;
    const double base = 2.0 * alpha / b;
    if (lambda1 == 0.0) {
        out.eta = kPi / 4.0;
        out.lambda_plus = base;
        out.lambda_minus = -base;
    } else {
        out.eta = 0.5 * std::atan2(2.0 * alpha * b, lambda1);
        out.lambda_plus = base * std::tan(out.eta);
        out.lambda_minus = -base / std::tan(out.eta);
    }
    out.q_m = std::llround(kPi * b / (4.0 * alpha) - 0.5);
    out.peak_overlap = 1.0 / b;
    return out;
}

[[nodiscard]] inline PredictedSpectrum predict_spectrum(const SearchInstance &inst) {
    return predict_spectrum(inst.alpha, inst.b_direct, inst.lambda1);
}

struct RunRecord {
    long long q = 0;
    double target_probability = 0.0;
    double source_overlap = 0.0;
    long long oracle_queries = 0;
    long long ds_applications = 0;
};

/**
 * @brief Per-iteration trace of a search run.
 *
 * m == 0 marks a plain (unboosted) run; boosted runs carry m and r = 2^m.
 */
struct RunReport {
    std::vector<RunRecord> records;
    long long peak_q = 0;
    double peak_probability = 0.0;
    int m = 0;
    long long r = 1;

    [[nodiscard]] bool boosted() const noexcept { return m > 0; }

    [[nodiscard]] const RunRecord &at_peak() const {
        return records.at(static_cast<std::size_t>(peak_q));
    }

    /// Global maximum of target probability over q in [1, q_max]; the q = 0
    /// row when q_max = 0. Ties keep the earliest q.
    void locate_peak() {
        if (records.empty()) {
            throw ValidationError("RunReport: no records");
        }
        peak_q = records.front().q;
        peak_probability = records.front().target_probability;
        if (records.size() == 1) {
            return;
        }
        peak_q = records[1].q;
        peak_probability = records[1].target_probability;
        for (std::size_t i = 2; i < records.size(); ++i) {
            if (records[i].target_probability > peak_probability) {
                peak_q = records[i].q;
                peak_probability = records[i].target_probability;
            }
        }
    }
};

[[nodiscard]] inline RunReport run_iterations(const SearchInstance &inst,
                                              long long q_max) {
    if (q_max < 0) {
        throw ValidationError("run_iterations: q_max must be >= 0");
    }
    const EigenSpectrum &spec = inst.spec();
    const auto n = static_cast<Eigen::Index>(spec.dimension());
    const auto s = static_cast<Eigen::Index>(spec.source_index());
    const CVector &tau = inst.target_coords;
    CVector phase(n);
    for (Eigen::Index l = 0; l < n; ++l) {
        phase(l) = std::polar(1.0, spec.phase(static_cast<std::size_t>(l)));
    }
    CVector c = CVector::Zero(n);
    c(s) = 1.0;

    RunReport report;
    report.records.reserve(static_cast<std::size_t>(q_max) + 1);
    for (long long q = 0;; ++q) {
        const complex_t amp = tau.dot(c);
        report.records.push_back({q, std::norm(amp), std::abs(c(s)), q, q});
        if (q == q_max) {
            break;
        }
        c -= (2.0 * amp) * tau;
        c = c.cwiseProduct(phase);
    }
    report.locate_peak();
    return report;
}

struct RelevantPair {
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    /// 1 - (sum of the two squared source overlaps)
    double residual = 0.0;
    double overlap_plus = 0.0;  ///< |<lambda_+|s>|^2
    double overlap_minus = 0.0; ///< |<lambda_-|s>|^2
    double target_overlap_plus = 0.0;
    double target_overlap_minus = 0.0;
};

/// Diagonalizes the dense S and picks the two eigenvectors carrying most
/// of |s>.
[[nodiscard]] inline RelevantPair verify_relevant_pair(const SearchInstance &inst) {
    constexpr double kMinOverlap = 0.01;
    const EigenPairList pairs = unitary_eigensystem(search_operator(inst));
    const StateVector src = inst.spec().source_state();
    const StateVector tgt = basis_state(inst.dimension(), inst.target_index);
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        ranked.emplace_back(std::norm(pairs[k].vector.inner(src)), k);
    }
    std::partial_sort(ranked.begin(), ranked.begin() + 2, ranked.end(),
                      [](const auto &a, const auto &b) { return a.first > b.first; });
    if (ranked[1].first < kMinOverlap) {
        throw ValidationError("verify_relevant_pair: fewer than two eigenpairs "
                              "overlap the source above 0.01");
    }
    std::size_t hi = ranked[0].second;
    std::size_t lo = ranked[1].second;
    double ohi = ranked[0].first;
    double olo = ranked[1].first;
    if (pairs[hi].phase < pairs[lo].phase) {
        std::swap(hi, lo);
        std::swap(ohi, olo);
    }
    RelevantPair out;
    out.lambda_plus = pairs[hi].phase;
    out.lambda_minus = pairs[lo].phase;
    out.overlap_plus = ohi;
    out.overlap_minus = olo;
    out.residual = 1.0 - (ohi + olo);
    out.target_overlap_plus = std::abs(pairs[hi].vector.inner(tgt));
    out.target_overlap_minus = std::abs(pairs[lo].vector.inner(tgt));
    return out;
}

// ---------------------------------------------------------------------------
// CSV traces. 12 significant digits, header row, one row per iteration.
// ---------------------------------------------------------------------------

namespace detail {

[[nodiscard]] inline std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

} // namespace detail

/// Plain: q,p_target,s_overlap,oracle_queries,ds_applications
/// Boosted: q,p_target_joint,oracle_queries,ds_applications,m,r
inline void write_run_csv(std::ostream &os, const RunReport &report) {
    using detail::fmt12;
    if (report.boosted()) {
        os << "q,p_target_joint,oracle_queries,ds_applications,m,r\n";
        for (const RunRecord &r : report.records) {
            os << r.q << ',' << fmt12(r.target_probability) << ','
               << r.oracle_queries << ',' << r.ds_applications << ','
               << report.m << ',' << report.r << '\n';
        }
        return;
    }
    os << "q,p_target,s_overlap,oracle_queries,ds_applications\n";
    for (const RunRecord &r : report.records) {
        os << r.q << ',' << fmt12(r.target_probability) << ','
           << fmt12(r.source_overlap) << ',' << r.oracle_queries << ','
           << r.ds_applications << '\n';
    }
}

} // namespace gqs
