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


#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gqs/search.hpp"
#include "oracles.hpp"

namespace {

using gqs::CMatrix;
using gqs::CVector;
using gqs::complex_t;
using gqs::kPi;

gqs::SearchInstance grover(std::size_t n) {
    return gqs::make_instance(gqs::grover_spectrum(n, gqs::uniform_state(n)), 0);
}

/// Symmetric instance inside the theta_min >= 40 * (2 alpha / B) regime.
gqs::SearchInstance regime_instance(std::size_t n, std::uint64_t seed) {
    gqs::GeneratorOptions opts;
    opts.alpha = 0.02;
    return gqs::make_instance(gqs::symmetric_spectrum(n, seed, 2.0, 3.1, opts), 0);
}

TEST(SelectivePhase, Examples) {
    EXPECT_EQ((gqs::selective_phase(3, 1, 0.0).entries() - CMatrix::Identity(3, 3)).norm(), 0.0);
    const gqs::UnitaryMatrix z = gqs::selective_phase(2, 1, kPi);
    EXPECT_EQ(z(0, 0), complex_t(1.0));
    EXPECT_NEAR(std::abs(z(1, 1) - complex_t(-1.0)), 0.0, 1e-15);
    const gqs::UnitaryMatrix s = gqs::selective_phase(4, 0, kPi / 2.0);
    EXPECT_NEAR(std::abs(s(0, 0) - complex_t(0.0, 1.0)), 0.0, 1e-15);
    for (std::size_t k = 1; k < 4; ++k) {
        EXPECT_EQ(s(k, k), complex_t(1.0));
    }
    EXPECT_THROW((void)gqs::selective_phase(4, 4, 1.0), gqs::ValidationError);
}

TEST(SearchOperator, GroverOperator) {
    const gqs::SearchInstance inst = grover(16);
    const CVector s = gqs::uniform_state(16).amplitudes();
    CMatrix it = CMatrix::Identity(16, 16);
    it(0, 0) = -1.0;
    const CMatrix expected = (2.0 * s * s.adjoint() - CMatrix::Identity(16, 16)) * it;
    const gqs::UnitaryMatrix op = gqs::search_operator(inst);
    EXPECT_LE((op.entries() - expected).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(op.unitarity_error(), 1e-10);
}

TEST(SearchOperator, UnitaryOnRandomInstance) {
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::symmetric_spectrum(24, 4, 0.5, 3.0), 3);
    EXPECT_LE(gqs::search_operator(inst).unitarity_error(), 1e-10);
}

TEST(SearchOperator, OneGroverStepRaisesTargetProbability) {
    const gqs::SearchInstance inst = grover(4);
    const gqs::StateVector out =
        gqs::apply_unitary(gqs::search_operator(inst), gqs::uniform_state(4));
    EXPECT_GT(std::norm(out[0]), inst.alpha * inst.alpha);
    // Textbook value sin^2(3 arcsin(1/2)) = 1.
    EXPECT_NEAR(std::norm(out[0]), 1.0, 1e-12);
}

TEST(SearchOperator, MatrixFreeMatchesDense) {
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::symmetric_spectrum(20, 8, 0.5, 3.0), 2);
    const gqs::StateVector psi = gqs::random_state(20, 99);
    const CVector dense = gqs::search_operator(inst).entries() * psi.amplitudes();
    const gqs::StateVector fast = gqs::apply_search_operator(inst, psi);
    EXPECT_LE((fast.amplitudes() - dense).norm(), 1e-12);
    EXPECT_THROW((void)gqs::apply_search_operator(inst, gqs::random_state(4, 1)),
                 gqs::DimensionError);
}

TEST(PredictSpectrum, VanishingFirstMoment) {
    const gqs::PredictedSpectrum p = gqs::predict_spectrum(0.1, std::sqrt(2.0), 0.0);
    EXPECT_NEAR(p.lambda_plus, 0.1414213562373095, 1e-15);
    EXPECT_NEAR(p.lambda_minus, -0.1414213562373095, 1e-15);
    EXPECT_DOUBLE_EQ(p.eta, kPi / 4.0);
    EXPECT_NEAR(p.peak_overlap, 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(PredictSpectrum, NonzeroFirstMomentSatisfiesQuadratic) {
    const double alpha = 0.05;
    const double b = 3.0;
    const double l1 = 0.7;
    const gqs::PredictedSpectrum p = gqs::predict_spectrum(alpha, b, l1);
    EXPECT_NEAR(1.0 / std::tan(2.0 * p.eta), l1 / (2.0 * alpha * b), 1e-12);
    // Roots of B^2 x^2 + 2 Lambda_1 x - 4 alpha^2 = 0.
    EXPECT_NEAR(p.lambda_plus * p.lambda_minus, -4.0 * alpha * alpha / (b * b), 1e-14);
    EXPECT_NEAR(p.lambda_plus + p.lambda_minus, -2.0 * l1 / (b * b), 1e-14);
    EXPECT_THROW((void)gqs::predict_spectrum(0.0, 1.0, 0.0), gqs::ValidationError);
}

TEST(PredictSpectrum, GroverIterationCount) {
    const gqs::SearchInstance inst = grover(256);
    const gqs::PredictedSpectrum p = gqs::predict_spectrum(inst);
    EXPECT_EQ(p.q_m, 12);
    EXPECT_EQ(gqs::run_iterations(inst, 20).peak_q, 12);
}

TEST(PredictSpectrum, IterationCountAtBFour) {
    const gqs::PredictedSpectrum p = gqs::predict_spectrum(1.0 / 16.0, 4.0, 0.0);
    EXPECT_EQ(p.q_m, 50);
    gqs::GeneratorOptions opts;
    opts.alpha = 1.0 / 16.0;
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::tuned_spectrum(64, 2, 4.0, 0.1, opts), 0);
    const gqs::RunReport run = gqs::run_iterations(inst, 2 * p.q_m);
    EXPECT_LE(std::abs(run.peak_q - p.q_m), 2);
}

TEST(RunIterations, GroverN256) {
    const gqs::SearchInstance inst = grover(256);
    const gqs::RunReport run = gqs::run_iterations(inst, 20);
    EXPECT_GE(run.peak_probability, 0.99);
    EXPECT_TRUE(run.peak_q == 12 || run.peak_q == 13);
    for (const gqs::RunRecord &r : run.records) {
        const double ref =
            std::pow(std::sin((2.0 * static_cast<double>(r.q) + 1.0) * std::asin(inst.alpha)), 2);
        EXPECT_NEAR(r.target_probability, ref, 1e-10);
        EXPECT_EQ(r.oracle_queries, r.q);
    }
}

TEST(RunIterations, PeakLawInRegime) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const gqs::SearchInstance inst = regime_instance(64, seed);
        ASSERT_GE(inst.spec().theta_min(), 40.0 * 2.0 * inst.alpha / inst.b_direct);
        const gqs::PredictedSpectrum p = gqs::predict_spectrum(inst);
        const gqs::RunReport run = gqs::run_iterations(inst, 2 * p.q_m);
        EXPECT_LE(std::abs(run.peak_q - p.q_m), 2);
        const double expected = 1.0 / (inst.b_direct * inst.b_direct);
        EXPECT_LE(std::abs(run.peak_probability - expected), 0.25 * expected);
    }
}

TEST(RunIterations, ZeroIterations) {
    const gqs::SearchInstance inst = regime_instance(32, 3);
    const gqs::RunReport run = gqs::run_iterations(inst, 0);
    ASSERT_EQ(run.records.size(), 1u);
    EXPECT_NEAR(run.records[0].target_probability, inst.alpha * inst.alpha, 1e-15);
    EXPECT_EQ(run.peak_q, 0);
    EXPECT_THROW((void)gqs::run_iterations(inst, -1), gqs::ValidationError);
}

TEST(RunIterations, MatchesDenseIterationAndGlobalPhase) {
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::symmetric_spectrum(16, 12, 0.4, 3.0), 5);
    CMatrix it = CMatrix::Identity(16, 16);
    it(5, 5) = -1.0;
    const CMatrix s_op = oracle::diffusion(inst.spec()) * it;
    const CMatrix s_shift = std::polar(1.0, 0.9) * s_op;
    CVector psi = inst.spec().source_state().amplitudes();
    CVector phi = psi;
    const gqs::RunReport run = gqs::run_iterations(inst, 30);
    for (const gqs::RunRecord &r : run.records) {
        EXPECT_NEAR(r.target_probability, std::norm(psi(5)), 1e-12);
        EXPECT_NEAR(r.target_probability, std::norm(phi(5)), 1e-12);
        psi = s_op * psi;
        phi = s_shift * phi;
    }
}

TEST(RelevantPair, Grover) {
    const gqs::SearchInstance inst = grover(64);
    const gqs::RelevantPair pair = gqs::verify_relevant_pair(inst);
    const double expected = 2.0 * inst.alpha;
    EXPECT_NEAR(pair.lambda_plus, expected, 0.05 * expected);
    EXPECT_NEAR(pair.lambda_minus, -expected, 0.05 * expected);
}

TEST(RelevantPair, SymmetricRegime) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const gqs::SearchInstance inst = regime_instance(64, seed);
        const gqs::PredictedSpectrum p = gqs::predict_spectrum(inst);
        const gqs::RelevantPair pair = gqs::verify_relevant_pair(inst);
        const double scale = 2.0 * inst.alpha / inst.b_direct;
        EXPECT_LE(std::abs(pair.lambda_plus - p.lambda_plus), 0.05 * scale);
        EXPECT_LE(std::abs(pair.lambda_minus - p.lambda_minus), 0.05 * scale);
        EXPECT_LE(pair.residual, 0.02);
        EXPECT_GE(pair.residual, -1e-12);
        EXPECT_LE(std::abs(pair.lambda_plus + pair.lambda_minus), 0.1 * pair.lambda_plus);
        // |s> splits evenly over the two eigenvectors up to the leakage.
        EXPECT_LE(std::abs(pair.overlap_plus - 0.5), pair.residual + 1e-9);
        EXPECT_LE(std::abs(pair.overlap_minus - 0.5), pair.residual + 1e-9);
    }
}

TEST(RelevantPair, NonzeroFirstMomentMatchesPrediction) {
    // Unpaired phases, so Lambda_1 != 0.
    const std::size_t n = 64;
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(2.0, 3.1);
    std::exponential_distribution<double> ex(1.0);
    std::bernoulli_distribution sign(0.5);
    std::vector<double> phases{0.0};
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t l = 1; l < n; ++l) {
        phases.push_back(sign(rng) ? -u(rng) : u(rng));
        w.push_back(ex(rng));
        total += w.back();
    }
    const double alpha = 0.02;
    std::vector<double> row{alpha};
    for (double x : w) {
        row.push_back(std::sqrt(x / total * (1.0 - alpha * alpha)));
    }
    const gqs::SearchInstance inst = gqs::make_instance(
        gqs::EigenSpectrum(phases, gqs::detail::basis_with_target_row(n, 0, row, 4), 0), 0);
    ASSERT_GT(std::abs(inst.lambda1), 1e-3) << inst.lambda1;
    const gqs::PredictedSpectrum p = gqs::predict_spectrum(inst);
    const gqs::RelevantPair pair = gqs::verify_relevant_pair(inst);
    const double scale = 2.0 * inst.alpha / inst.b_direct;
    EXPECT_LE(std::abs(pair.lambda_plus - p.lambda_plus), 0.05 * scale);
    EXPECT_LE(std::abs(pair.lambda_minus - p.lambda_minus), 0.05 * scale);
}

TEST(RelevantPair, TooLittleOverlapThrows) {
    // alpha close to 1: |s> is almost |t>, so S nearly fixes |s> up to sign
    // and only one eigenvector carries it.
    gqs::GeneratorOptions opts;
    opts.alpha = 0.9999;
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::symmetric_spectrum(8, 1, 1.0, 2.0, opts), 0);
    EXPECT_THROW((void)gqs::verify_relevant_pair(inst), gqs::ValidationError);
}

TEST(RunCsv, Headers) {
    const gqs::RunReport run = gqs::run_iterations(grover(16), 2);
    std::ostringstream os;
    gqs::write_run_csv(os, run);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "q,p_target,s_overlap,oracle_queries,ds_applications");
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
    }
    EXPECT_EQ(rows, 3);
}

} // namespace
