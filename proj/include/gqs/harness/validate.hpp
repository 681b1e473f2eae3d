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
 * Quick invariant suite behind `gqsearch validate`.
 */
#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gqs/harness/experiment.hpp"
#include "gqs/pea.hpp"
#include "gqs/search.hpp"
#include "gqs/spectra.hpp"

namespace gqs::harness {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

namespace detail {

[[nodiscard]] inline CheckResult check(const std::string &name, double value, double limit) {
    std::ostringstream os;
    os << "value " << gqs::detail::fmt12(value) << " limit " << gqs::detail::fmt12(limit);
    return {name, value <= limit, os.str()};
}

} // namespace detail

/// Runs every invariant; `seed` perturbs the random instances.
[[nodiscard]] inline std::vector<CheckResult> run_validation(std::uint64_t seed) {
    using detail::check;
    std::vector<CheckResult> out;
    const auto guarded = [&out](const std::string &name, const std::function<CheckResult()> &f) {
        try {
            out.push_back(f());
        } catch (const std::exception &e) {
            out.push_back({name, false, std::string("exception: ") + e.what()});
        }
    };

    guarded("haar-unitarity", [&] {
        return check("haar-unitarity", haar_random_unitary(32, seed).unitarity_error(), 1e-10);
    });
    guarded("qft-unitarity", [] {
        return check("qft-unitarity", qft(6).unitarity_error(), 1e-12);
    });

    guarded("grover-curve", [] {
        const SearchInstance inst = make_instance(grover_spectrum(64, uniform_state(64)), 0);
        const RunReport run = run_iterations(inst, 20);
        double err = 0.0;
        for (const RunRecord &r : run.records) {
            const double ref = std::pow(
                std::sin((2.0 * static_cast<double>(r.q) + 1.0) * std::asin(inst.alpha)), 2);
            err = std::max(err, std::abs(r.target_probability - ref));
        }
        return check("grover-curve", err, 1e-10);
    });

    guarded("b-factor-consistency", [&] {
        const SearchInstance inst =
            make_instance(symmetric_spectrum(32, seed, 1.0, 3.0, {}), 0);
        const double gap = std::abs(inst.b_factor - inst.b_direct);
        return check("b-factor-consistency", gap, inst.alpha * inst.alpha + 1e-9);
    });

    guarded("lambda1-vanishes", [&] {
        const SearchInstance inst =
            make_instance(symmetric_spectrum(32, seed, 1.0, 3.0, {}), 0);
        return check("lambda1-vanishes", std::abs(inst.lambda1), 1e-10);
    });

    guarded("pea-amplitude", [] {
        double err = 0.0;
        for (int m = 1; m <= 4; ++m) {
            for (int g = 0; g < 16; ++g) {
                const double theta = -kPi + (2.0 * kPi) * (g + 0.5) / 16.0;
                const EigenSpectrum one = EigenSpectrum::trusted(
                    {0.0, theta}, CMatrix::Identity(2, 2), 0);
                const JointState in = JointState::basis(m, 2, 0, 1);
                const JointState outp = pea_operator(one, m, in);
                err = std::max(err, std::abs(std::abs(outp.amplitude(0, 1)) -
                                             pea_amplitude(theta, m, 0)));
            }
        }
        return check("pea-amplitude", err, 1e-10);
    });

    guarded("b-prime-sigma2", [&] {
        const SearchInstance inst =
            make_instance(symmetric_spectrum(16, seed, 1.0, 3.0, {}), 0);
        double err = 0.0;
        double sigma1 = 0.0;
        for (int m = 1; m <= 4; ++m) {
            const BPrimeBreakdown bp = b_prime(inst, m);
            err = std::max(err, std::abs(bp.sigma2 - inst.b_direct * inst.b_direct /
                                                         std::ldexp(1.0, 2 * m)));
            sigma1 = std::max(sigma1, bp.sigma1);
        }
        return CheckResult{"b-prime-sigma2", err <= 1e-9 && sigma1 <= 1.0,
                           "sigma2 error " + gqs::detail::fmt12(err) + ", max sigma1 " +
                               gqs::detail::fmt12(sigma1)};
    });

    guarded("boosted-cost-ledger", [&] {
        const SearchInstance inst =
            make_instance(symmetric_spectrum(16, seed, 1.0, 3.0, {}), 0);
        const RunReport run = boosted_search_run(inst, 2, 6);
        long long bad = 0;
        for (const RunRecord &r : run.records) {
            bad += (r.oracle_queries != r.q) + (r.ds_applications != r.q * (3 * 4 - 2));
        }
        return check("boosted-cost-ledger", static_cast<double>(bad), 0.0);
    });

    guarded("spectrum-round-trip", [&] {
        const EigenSpectrum spec = symmetric_spectrum(8, seed, 1.0, 3.0, {});
        std::stringstream ss;
        write_spectrum(ss, spec);
        const EigenSpectrum back = read_spectrum(ss);
        double err = (back.eigenbasis() - spec.eigenbasis()).cwiseAbs().maxCoeff();
        for (std::size_t l = 0; l < spec.dimension(); ++l) {
            err = std::max(err, std::abs(back.phase(l) - spec.phase(l)));
        }
        return check("spectrum-round-trip", err, 0.0);
    });

    guarded("report-at-peak", [&] {
        ExperimentConfig c;
        c.kind = "boosted-search";
        c.family = "symmetric";
        c.n = 32;
        c.seed = seed;
        c.theta_min = 1.0;
        c.theta_max = 3.0;
        long long bad = 0;
        for (const ReportRow &r : run_experiment(c)) {
            bad += r.oracle_queries_at_peak != r.peak_q;
            bad += r.ds_applications_at_peak != r.peak_q * (3 * r.r - 2);
        }
        return check("report-at-peak", static_cast<double>(bad), 0.0);
    });

    return out;
}

} // namespace gqs::harness
