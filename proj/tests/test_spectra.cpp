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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "gqs/spectra.hpp"
#include "oracles.hpp"

namespace {

using gqs::CMatrix;
using gqs::CVector;
using gqs::EigenSpectrum;
using gqs::kPi;

/// Haar eigenbasis with uniform random non-source phases; no symmetry.
EigenSpectrum random_spectrum(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.2, kPi - 0.2);
    std::bernoulli_distribution sign(0.5);
    std::vector<double> phases(n);
    phases[0] = 0.0;
    for (std::size_t l = 1; l < n; ++l) {
        phases[l] = sign(rng) ? u(rng) : -u(rng);
    }
    return EigenSpectrum(phases, gqs::haar_random_unitary(n, seed).entries(), 0);
}

/// Source plus one +-pi/2 pair of equal weight; alpha tiny.
gqs::SearchInstance quarter_turn_pair(double alpha) {
    gqs::GeneratorOptions opts;
    opts.alpha = alpha;
    return gqs::make_instance(
        gqs::detail::paired_spectrum(4, {kPi / 2.0}, {1.0}, kPi, opts, 5), 0);
}

TEST(EigenSpectrum, RejectsNonOrthonormal) {
    CMatrix v = CMatrix::Identity(3, 3);
    v(0, 1) = 0.1;
    try {
        EigenSpectrum({0.0, 1.0, 2.0}, v, 0);
        FAIL() << "expected ValidationError";
    } catch (const gqs::ValidationError &e) {
        EXPECT_NE(std::string(e.what()).find("(0, 1)"), std::string::npos);
    }
}

TEST(EigenSpectrum, RejectsBadPhases) {
    const CMatrix id = CMatrix::Identity(3, 3);
    EXPECT_THROW(EigenSpectrum({0.1, 1.0, 2.0}, id, 0), gqs::ValidationError);
    EXPECT_THROW(EigenSpectrum({0.0, 0.0, 2.0}, id, 0), gqs::ValidationError);
    EXPECT_THROW(EigenSpectrum({0.0, -kPi, 2.0}, id, 0), gqs::ValidationError);
    EXPECT_THROW(EigenSpectrum({0.0, 1.0, 4.0}, id, 0), gqs::ValidationError);
    EXPECT_NO_THROW(EigenSpectrum({0.0, kPi, 2.0}, id, 0));
    EXPECT_THROW(EigenSpectrum({0.0}, CMatrix::Identity(1, 1), 0), gqs::ValidationError);
}

TEST(SearchInstance, RejectsAlphaOutOfRange) {
    // Target orthogonal to the source.
    EXPECT_THROW((void)gqs::make_instance(
                     EigenSpectrum({0.0, 1.0}, CMatrix::Identity(2, 2), 0), 1),
                 gqs::ValidationError);
    // Target equal to the source.
    EXPECT_THROW((void)gqs::make_instance(
                     EigenSpectrum({0.0, 1.0}, CMatrix::Identity(2, 2), 0), 0),
                 gqs::ValidationError);
}

TEST(SearchInstance, CachedMomentsMatchRecomputation) {
    const gqs::SearchInstance inst = gqs::make_instance(random_spectrum(10, 3), 4);
    EXPECT_NEAR(inst.lambda1, oracle::moment(inst.spec(), 4, 1), 1e-12);
    EXPECT_NEAR(inst.lambda2, oracle::moment(inst.spec(), 4, 2), 1e-12);
    EXPECT_DOUBLE_EQ(inst.b_factor, std::sqrt(1.0 + inst.lambda2));
    EXPECT_NEAR(inst.alpha, std::sqrt(oracle::target_weight(inst.spec(), 0, 4)), 1e-14);
}

TEST(BuildDiffusion, GroverIsReflection) {
    const std::size_t n = 16;
    const EigenSpectrum spec = gqs::grover_spectrum(n, gqs::uniform_state(n));
    const CVector s = gqs::uniform_state(n).amplitudes();
    const CMatrix expected = 2.0 * s * s.adjoint() - CMatrix::Identity(16, 16);
    EXPECT_LE((gqs::build_diffusion(spec).entries() - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BuildDiffusion, EigenvectorsGainTheirPhase) {
    const EigenSpectrum spec = random_spectrum(12, 8);
    const CMatrix ds = gqs::build_diffusion(spec).entries();
    for (std::size_t l = 0; l < spec.dimension(); ++l) {
        const CVector v = spec.eigenvector(l).amplitudes();
        EXPECT_LE((ds * v - std::polar(1.0, spec.phase(l)) * v).norm(), 1e-12);
    }
    const CVector s = spec.source_state().amplitudes();
    EXPECT_LE((ds * s - s).norm(), 1e-10);
    EXPECT_LE((ds - oracle::diffusion(spec)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BuildDiffusion, EigensolverRoundTripSymmetricSeed3) {
    const EigenSpectrum spec = gqs::symmetric_spectrum(16, 3, 0.5, 3.0);
    std::vector<double> expected = spec.phases();
    std::vector<double> got;
    for (const auto &p : gqs::unitary_eigensystem(gqs::build_diffusion(spec))) {
        got.push_back(p.phase);
    }
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    for (std::size_t k = 0; k < got.size(); ++k) {
        EXPECT_LE(oracle::angle_gap(got[k], expected[k]), 1e-8);
    }
}

TEST(Moments, GroverVanish) {
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::grover_spectrum(32, gqs::uniform_state(32)), 5);
    EXPECT_NEAR(gqs::moments(inst, 1), 0.0, 1e-14);
    EXPECT_NEAR(gqs::moments(inst, 2), 0.0, 1e-14);
}

TEST(Moments, QuarterTurnPair) {
    // Lambda_2 = (1 - alpha^2) * cot^2(pi/4); the alpha -> 0 limit is 1.
    const double alpha = 1e-4;
    const gqs::SearchInstance inst = quarter_turn_pair(alpha);
    EXPECT_NEAR(gqs::moments(inst, 1), 0.0, 1e-14);
    EXPECT_NEAR(gqs::moments(inst, 2), 1.0 - alpha * alpha, 1e-14);
    EXPECT_NEAR(inst.b_factor, std::sqrt(2.0), 1e-8);
}

TEST(Moments, TermByTermSeed11) {
    const EigenSpectrum spec = random_spectrum(8, 11);
    const gqs::SearchInstance inst = gqs::make_instance(spec, 2);
    EXPECT_NEAR(gqs::moments(inst, 1), oracle::moment(spec, 2, 1), 1e-12);
    EXPECT_NEAR(gqs::moments(inst, 2), oracle::moment(spec, 2, 2), 1e-12);
    EXPECT_THROW((void)gqs::moments(inst, 3), gqs::ValidationError);
}

TEST(BFactorDirect, Grover) {
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::grover_spectrum(64, gqs::uniform_state(64)), 0);
    EXPECT_NEAR(gqs::b_factor_direct(inst), std::sqrt(1.0 - inst.alpha * inst.alpha), 1e-12);
}

TEST(BFactorDirect, QuarterTurnPair) {
    const double alpha = 1e-4;
    const gqs::SearchInstance inst = quarter_turn_pair(alpha);
    const double b = gqs::b_factor_direct(inst);
    EXPECT_NEAR(b * b, 2.0 * (1.0 - alpha * alpha), 1e-12);
}

TEST(BFactorDirect, TermByTermSeed11) {
    const EigenSpectrum spec = random_spectrum(8, 11);
    const gqs::SearchInstance inst = gqs::make_instance(spec, 2);
    EXPECT_NEAR(gqs::b_factor_direct(inst), oracle::power_b(spec, 2, 1), 1e-12);
}

TEST(BFactorDirect, BoundsAndAgreementWithMoment) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const gqs::SearchInstance inst = gqs::make_instance(random_spectrum(16, seed), 3);
        const double b = inst.b_direct;
        EXPECT_GE(b, std::sqrt(1.0 - inst.alpha * inst.alpha) - 1e-12);
        EXPECT_LE(b, 1.0 / std::sin(inst.spec().theta_min() / 2.0) + 1e-9);
        // 1 + Lambda_2 and B^2 differ by exactly alpha^2.
        EXPECT_NEAR(inst.b_factor * inst.b_factor - b * b, inst.alpha * inst.alpha, 1e-12);
    }
}

TEST(BFactorDirect, RelabelingInvariance) {
    const EigenSpectrum spec = random_spectrum(9, 4);
    std::vector<std::size_t> perm{0, 8, 7, 6, 5, 4, 3, 2, 1};
    const gqs::SearchInstance a = gqs::make_instance(spec, 1);
    const gqs::SearchInstance b = gqs::make_instance(spec.permuted(perm), 1);
    EXPECT_NEAR(a.lambda1, b.lambda1, 1e-13);
    EXPECT_NEAR(a.lambda2, b.lambda2, 1e-13);
    EXPECT_NEAR(a.b_direct, b.b_direct, 1e-13);
    std::vector<std::size_t> moved{3, 1, 2, 0, 4, 5, 6, 7, 8};
    const gqs::SearchInstance c = gqs::make_instance(spec.permuted(moved), 1);
    EXPECT_EQ(c.spec().source_index(), 3u);
    EXPECT_NEAR(a.b_direct, c.b_direct, 1e-13);
}

TEST(NaivePowerB, UnitPowerIsB) {
    const gqs::SearchInstance inst = gqs::make_instance(random_spectrum(8, 2), 0);
    EXPECT_EQ(gqs::naive_power_b(inst, 1), gqs::b_factor_direct(inst));
    EXPECT_THROW((void)gqs::naive_power_b(inst, 0), gqs::ValidationError);
}

TEST(NaivePowerB, NearResonanceBlowUp) {
    // One eigenvector of weight 0.1 at 2 pi / r + 1e-7. The blow-up is
    // sqrt(0.1) / sin(r * 1e-7 / 2), above 1e6 for r <= 6.
    for (const long long r : {2LL, 4LL}) {
        const double theta = gqs::wrap_phase(2.0 * kPi / static_cast<double>(r) + 1e-7);
        const double a = std::sqrt(0.1);
        const double alpha = 0.5;
        const double rest = std::sqrt(1.0 - 0.1 - alpha * alpha);
        const CMatrix v = gqs::detail::basis_with_target_row(3, 0, {alpha, a, rest}, 17);
        const gqs::SearchInstance inst =
            gqs::make_instance(EigenSpectrum({0.0, theta, 2.0}, v, 0), 0);
        EXPECT_GT(gqs::naive_power_b(inst, r), 1e6) << "r = " << r;
    }
}

TEST(NaivePowerB, ExactResonanceThrows) {
    const CMatrix v = gqs::detail::basis_with_target_row(
        3, 0, {0.5, std::sqrt(0.375), std::sqrt(0.375)}, 1);
    const gqs::SearchInstance inst =
        gqs::make_instance(EigenSpectrum({0.0, kPi / 2.0, 2.0}, v, 0), 0);
    try {
        (void)gqs::naive_power_b(inst, 4);
        FAIL() << "expected DivergenceError";
    } catch (const gqs::DivergenceError &e) {
        EXPECT_EQ(e.index(), 1u);
    }
}

TEST(NaivePowerB, SmallPhasesScaleAsOneOverR) {
    gqs::GeneratorOptions opts;
    opts.alpha = 0.05;
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::symmetric_spectrum(16, 6, 0.002, 0.01, opts), 0);
    const double b = oracle::power_b(inst.spec(), 0, 1);
    const double b8 = oracle::power_b(inst.spec(), 0, 8);
    EXPECT_NEAR(gqs::naive_power_b(inst, 8), b8, 1e-9 * b8);
    EXPECT_NEAR(gqs::naive_power_b(inst, 8) / (b / 8.0), 1.0, 0.02);
}

TEST(GroverSpectrum, TwoDimensional) {
    const EigenSpectrum spec = gqs::grover_spectrum(2, gqs::uniform_state(2));
    std::vector<double> p = spec.phases();
    std::sort(p.begin(), p.end());
    EXPECT_EQ(p[0], 0.0);
    EXPECT_EQ(p[1], kPi);
}

TEST(GroverSpectrum, MomentsVanishForAnySource) {
    for (std::size_t n : {3u, 8u, 31u}) {
        const EigenSpectrum spec = gqs::grover_spectrum(n, gqs::random_state(n, n));
        EXPECT_LE(spec.orthonormality_defect().magnitude, 1e-12);
        const gqs::SearchInstance inst = gqs::make_instance(spec, 1);
        EXPECT_NEAR(inst.lambda1, 0.0, 1e-14);
        EXPECT_NEAR(inst.lambda2, 0.0, 1e-14);
    }
}

TEST(GroverSpectrum, N256MatchesExplicitReflection) {
    const std::size_t n = 256;
    const EigenSpectrum spec = gqs::grover_spectrum(n, gqs::uniform_state(n));
    CMatrix expected = CMatrix::Constant(256, 256, 2.0 / 256.0);
    expected -= CMatrix::Identity(256, 256);
    EXPECT_LE((gqs::build_diffusion(spec).entries() - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SymmetricSpectrum, SinglePairFirstMoment) {
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::symmetric_spectrum(4, 9, 1.3, 1.3), 0);
    EXPECT_NEAR(inst.lambda1, 0.0, 1e-14);
}

TEST(SymmetricSpectrum, Seed5) {
    const EigenSpectrum spec = gqs::symmetric_spectrum(64, 5, 0.05, 3.0);
    EXPECT_LE(spec.orthonormality_defect().magnitude, 1e-10);
    const gqs::SearchInstance inst = gqs::make_instance(spec, 0);
    EXPECT_LE(std::abs(oracle::moment(spec, 0, 1)), 1e-10);
    EXPECT_NEAR(inst.alpha, 1.0 / 8.0, 1e-12);
    const gqs::SearchInstance again =
        gqs::make_instance(gqs::symmetric_spectrum(64, 5, 0.05, 3.0), 0);
    EXPECT_EQ(inst.b_direct, again.b_direct);
}

TEST(SymmetricSpectrum, HonoursOptions) {
    gqs::GeneratorOptions opts;
    opts.alpha = 0.03;
    opts.target_index = 17;
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::symmetric_spectrum(32, 2, 1.0, 2.0, opts), 17);
    EXPECT_NEAR(inst.alpha, 0.03, 1e-12);
    for (std::size_t l = 1; l < 32; ++l) {
        const double t = std::abs(inst.spec().phase(l));
        EXPECT_TRUE(t >= 1.0 && t <= 2.0) << t;
    }
}

TEST(SymmetricSpectrum, InvalidRange) {
    EXPECT_THROW((void)gqs::symmetric_spectrum(8, 1, 2.0, 1.0), gqs::ValidationError);
    EXPECT_THROW((void)gqs::symmetric_spectrum(8, 1, 0.0, 1.0), gqs::ValidationError);
    EXPECT_THROW((void)gqs::symmetric_spectrum(8, 1, 1.0, 4.0), gqs::ValidationError);
    EXPECT_THROW((void)gqs::symmetric_spectrum(7, 1, 1.0, 2.0), gqs::ValidationError);
}

TEST(ResonantSpectrum, NaivePowerDiverges) {
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::resonant_spectrum(64, 3, 1e-3, 1), 0);
    const double ratio = oracle::power_b(inst.spec(), 0, 8) / oracle::power_b(inst.spec(), 0, 1);
    EXPECT_GE(ratio, 100.0);
    EXPECT_NEAR(gqs::naive_power_b(inst, 8) / inst.b_direct, ratio, 1e-9 * ratio);
}

TEST(ResonantSpectrum, LargeEpsilonTames) {
    const gqs::SearchInstance inst =
        gqs::make_instance(gqs::resonant_spectrum(64, 3, 0.3, 1), 0);
    EXPECT_LT(oracle::power_b(inst.spec(), 0, 8) / oracle::power_b(inst.spec(), 0, 1), 5.0);
}

TEST(ResonantSpectrum, FirstMomentAndErrors) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const gqs::SearchInstance inst =
            gqs::make_instance(gqs::resonant_spectrum(32, 1 + static_cast<int>(seed), 1e-2, seed), 0);
        EXPECT_LE(std::abs(inst.lambda1), 1e-10);
    }
    EXPECT_THROW((void)gqs::resonant_spectrum(16, 3, 0.0, 1), gqs::ValidationError);
}

TEST(ScalingFamily, BGrowsAsSqrtLogN) {
    const gqs::SearchInstance small = gqs::make_instance(gqs::scaling_family(6, 1), 0);
    const gqs::SearchInstance large = gqs::make_instance(gqs::scaling_family(12, 1), 0);
    const double expected = std::sqrt(std::log(64.0) / std::log(4096.0));
    EXPECT_NEAR(small.b_direct / large.b_direct / expected, 1.0, 0.15);
    for (const auto *inst : {&small, &large}) {
        const double c = inst->b_direct / std::sqrt(std::log(static_cast<double>(inst->dimension())));
        EXPECT_NEAR(c / gqs::kScalingConstant, 1.0, 0.15);
        EXPECT_LE(std::abs(inst->lambda1), 1e-10);
    }
}

TEST(ScalingFamily, InvariantsAndDeterminism) {
    const EigenSpectrum spec = gqs::scaling_family(7, 3);
    EXPECT_LE(spec.orthonormality_defect().magnitude, 1e-10);
    EXPECT_NO_THROW(EigenSpectrum(spec.phases(), spec.eigenbasis(), spec.source_index()));
    const double b1 = gqs::make_instance(gqs::scaling_family(7, 3), 0).b_direct;
    const double b2 = gqs::make_instance(gqs::scaling_family(7, 3), 0).b_direct;
    EXPECT_EQ(b1, b2);
}

TEST(TunedSpectrum, HitsRequestedB) {
    gqs::GeneratorOptions opts;
    opts.alpha = 1.0 / 16.0;
    for (const double target : {2.0, 4.0, 8.0, 16.0}) {
        const gqs::SearchInstance inst =
            gqs::make_instance(gqs::tuned_spectrum(64, 3, target, 0.1, opts), 0);
        EXPECT_NEAR(inst.b_direct, target, 1e-9 * target);
        EXPECT_NEAR(inst.alpha, 1.0 / 16.0, 1e-12);
        EXPECT_LE(std::abs(inst.lambda1), 1e-10);
    }
}

TEST(SpectrumIo, ExactRoundTrip) {
    const EigenSpectrum spec = gqs::symmetric_spectrum(12, 4, 0.3, 2.9);
    std::stringstream ss;
    gqs::write_spectrum(ss, spec);
    const EigenSpectrum back = gqs::read_spectrum(ss);
    EXPECT_EQ(back.phases(), spec.phases());
    EXPECT_TRUE(back.eigenbasis() == spec.eigenbasis());
    EXPECT_EQ(back.source_index(), spec.source_index());
}

TEST(SpectrumIo, MalformedInput) {
    std::istringstream bad_header("spectrum\n");
    EXPECT_THROW((void)gqs::read_spectrum(bad_header), gqs::ValidationError);
    std::istringstream truncated("gqs-spectrum 1\nN 2 source_index 0\n0 1 0 0 0\n");
    EXPECT_THROW((void)gqs::read_spectrum(truncated), gqs::ValidationError);
    std::istringstream bad_number("gqs-spectrum 1\nN 2 source_index 0\n0 1 0 0 0\n1 0 0 x 0\n");
    EXPECT_THROW((void)gqs::read_spectrum(bad_number), gqs::ValidationError);
}

} // namespace
