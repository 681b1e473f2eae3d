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
 * Diffusion operators described by their eigenspectra, the cot-moments that
 * govern generalized search, and the instance families used in experiments.
 *
 * Every generator returns eigenvectors ordered as
 *   [source, spare, pair_0(+), pair_0(-), pair_1(+), pair_1(-), ...]
 * where the spare eigenvector has exactly zero overlap with the target and
 * the members of each +/- pair carry identical target weight. That layout
 * makes the first moment vanish identically.
 */
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gqs/numerics.hpp"

namespace gqs {

/**
 * @brief Eigenphases plus orthonormal eigenbasis of a diffusion operator.
 *
 * Column l of eigenbasis() is |l>, with Ds|l> = exp(i phases[l]) |l>.
 * The source eigenvector has phase exactly 0 and is non-degenerate.
 */
class EigenSpectrum {
  public:
    static constexpr double kOrthonormalityTolerance = 1e-10;

    /// Validating constructor; O(N^3) orthonormality check.
    EigenSpectrum(std::vector<double> phases, CMatrix eigenbasis,
                  std::size_t source_index)
        : EigenSpectrum(std::move(phases), std::move(eigenbasis), source_index,
                        Trusted{}) {
        check_orthonormal();
    }

    /// Skips the orthonormality check; for generators that build the basis
    /// from exact unitary factors.
    [[nodiscard]] static EigenSpectrum trusted(std::vector<double> phases,
                                               CMatrix eigenbasis,
                                               std::size_t source_index) {
        return EigenSpectrum(std::move(phases), std::move(eigenbasis),
                             source_index, Trusted{});
    }

    [[nodiscard]] std::size_t dimension() const noexcept {
        return phases_.size();
    }
    [[nodiscard]] const std::vector<double> &phases() const noexcept {
        return phases_;
    }
    [[nodiscard]] double phase(std::size_t l) const { return phases_.at(l); }
    [[nodiscard]] const CMatrix &eigenbasis() const noexcept { return basis_; }
    [[nodiscard]] std::size_t source_index() const noexcept { return source_; }
    [[nodiscard]] double theta_min() const noexcept { return theta_min_; }

    [[nodiscard]] StateVector eigenvector(std::size_t l) const {
        if (l >= dimension()) {
            throw ValidationError("eigenvector index out of range");
        }
        return StateVector::normalized(
            basis_.col(static_cast<Eigen::Index>(l)));
    }
    [[nodiscard]] StateVector source_state() const {
        return eigenvector(source_);
    }

    /// Largest |<a|b> - delta_ab| over the basis, with the offending pair.
    struct Defect {
        double magnitude;
        std::size_t a;
        std::size_t b;
    };
    [[nodiscard]] Defect orthonormality_defect() const {
        const CMatrix g = basis_.adjoint() * basis_;
        Defect worst{0.0, 0, 0};
        for (Eigen::Index c = 0; c < g.cols(); ++c) {
            for (Eigen::Index r = 0; r < g.rows(); ++r) {
                const double d =
                    std::abs(g(r, c) - (r == c ? complex_t(1.0) : complex_t(0.0)));
                if (d > worst.magnitude) {
                    worst = {d, static_cast<std::size_t>(std::min(r, c)),
                             static_cast<std::size_t>(std::max(r, c))};
                }
            }
        }
        return worst;
    }

    /// Same operator with eigenvectors reordered: new l = old perm[l].
    [[nodiscard]] EigenSpectrum permuted(const std::vector<std::size_t> &perm) const {
        if (perm.size() != dimension()) {
            throw DimensionError("permutation size mismatch");
        }
        std::vector<double> ph(dimension());
        CMatrix basis(basis_.rows(), basis_.cols());
        std::size_t new_source = dimension();
        for (std::size_t l = 0; l < perm.size(); ++l) {
            ph[l] = phases_.at(perm[l]);
            basis.col(static_cast<Eigen::Index>(l)) =
                basis_.col(static_cast<Eigen::Index>(perm[l]));
            if (perm[l] == source_) {
                new_source = l;
            }
        }
        return trusted(std::move(ph), std::move(basis), new_source);
    }

  private:
    struct Trusted {};

    EigenSpectrum(std::vector<double> phases, CMatrix eigenbasis,
                  std::size_t source_index, Trusted)
        : phases_(std::move(phases)), basis_(std::move(eigenbasis)),
          source_(source_index) {
        const std::size_t n = phases_.size();
        if (n < 2) {
            throw ValidationError("spectrum needs at least two eigenvectors");
        }
        if (static_cast<std::size_t>(basis_.rows()) != n ||
            static_cast<std::size_t>(basis_.cols()) != n) {
            throw DimensionError("eigenbasis must be N x N with N = #phases");
        }
        if (source_ >= n) {
            throw ValidationError("source_index out of range");
        }
        if (phases_[source_] != 0.0) {
            throw ValidationError("source eigenphase must be exactly 0");
        }
        theta_min_ = std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < n; ++l) {
            const double p = phases_[l];
            if (!(p > -kPi && p <= kPi)) {
                throw ValidationError("eigenphase " + std::to_string(l) +
                                      " outside (-pi, pi]");
            }
            if (l == source_) {
                continue;
            }
            if (p == 0.0) {
                throw ValidationError("degenerate source eigenvalue at " +
                                      std::to_string(l));
            }
            theta_min_ = std::min(theta_min_, std::abs(p));
        }
    }

    void check_orthonormal() const {
        const Defect d = orthonormality_defect();
        if (d.magnitude > kOrthonormalityTolerance) {
            throw ValidationError("eigenbasis not orthonormal at pair (" +
                                  std::to_string(d.a) + ", " +
                                  std::to_string(d.b) + "), defect " +
                                  std::to_string(d.magnitude));
        }
    }

    std::vector<double> phases_;
    CMatrix basis_;
    std::size_t source_ = 0;
    double theta_min_ = 0.0;
};

/**
 * @brief A spectrum paired with a computational-basis target |t>.
 *
 * b_factor is sqrt(1 + lambda2); b_direct is the exact sum of
 * |<l|t>|^2 / sin^2(theta_l / 2) and is the value used downstream.
 */
struct SearchInstance {
    std::shared_ptr<const EigenSpectrum> spectrum;
    std::size_t target_index = 0;
    double alpha = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double b_factor = 0.0;
    double b_direct = 0.0;
    /// |<l|t>|^2 for every eigenvector l (source included).
    std::vector<double> target_weights;
    /// Coordinates of |t> in the eigenbasis: conj(V(t, l)).
    CVector target_coords;

    [[nodiscard]] const EigenSpectrum &spec() const { return *spectrum; }
    [[nodiscard]] std::size_t dimension() const { return spectrum->dimension(); }
};

namespace detail {

/// sum_{l != s, w_l > 0} w_l * f(theta_l); shared by all moment sums.
template <class F>
[[nodiscard]] double weighted_sum(const EigenSpectrum &spec,
                                  const std::vector<double> &weights, F &&f) {
    double sum = 0.0;
    for (std::size_t l = 0; l < spec.dimension(); ++l) {
        if (l == spec.source_index() || weights[l] == 0.0) {
            continue;
        }
        sum += weights[l] * f(l, spec.phase(l));
    }
    return sum;
}

[[nodiscard]] inline double power_b_squared(const EigenSpectrum &spec,
                                            const std::vector<double> &weights,
                                            long long r) {
    const double rr = static_cast<double>(r);
    return weighted_sum(spec, weights, [&](std::size_t l, double theta) {
        if (r != 1 && std::abs(wrap_phase(rr * theta)) <= 1e-12) {
            throw DivergenceError("exact resonance r*theta = 0 mod 2pi", l);
        }
        const double s = std::sin(rr * theta / 2.0);
        return 1.0 / (s * s);
    });
}

[[nodiscard]] inline double cot_half(double theta) {
    return std::cos(theta / 2.0) / std::sin(theta / 2.0);
}

} // namespace detail

/// Lambda_p = sum_{l != s} |<l|t>|^2 cot^p(theta_l / 2), p in {1, 2}.
[[nodiscard]] inline double moments(const SearchInstance &inst, int p) {
    if (p != 1 && p != 2) {
        throw ValidationError("moments: p must be 1 or 2");
    }
    return detail::weighted_sum(inst.spec(), inst.target_weights,
                                [p](std::size_t, double theta) {
                                    const double c = detail::cot_half(theta);
                                    return p == 1 ? c : c * c;
                                });
}

/// B = sqrt(sum_{l != s} |<l|t>|^2 / sin^2(theta_l / 2)).
[[nodiscard]] inline double b_factor_direct(const SearchInstance &inst) {
    return std::sqrt(detail::power_b_squared(inst.spec(), inst.target_weights, 1));
}

/// B_r of the naive power Ds^r. Throws DivergenceError on exact resonance.
[[nodiscard]] inline double naive_power_b(const SearchInstance &inst, long long r) {
    if (r < 1) {
        throw ValidationError("naive_power_b: r must be positive");
    }
    return std::sqrt(detail::power_b_squared(inst.spec(), inst.target_weights, r));
}

[[nodiscard]] inline SearchInstance
make_instance(std::shared_ptr<const EigenSpectrum> spectrum,
              std::size_t target_index) {
    if (!spectrum) {
        throw ValidationError("make_instance: null spectrum");
    }
    const std::size_t n = spectrum->dimension();
    if (target_index >= n) {
        throw ValidationError("target index out of range");
    }
    SearchInstance inst;
    inst.spectrum = std::move(spectrum);
    inst.target_index = target_index;
    const auto t = static_cast<Eigen::Index>(target_index);
    inst.target_coords = inst.spec().eigenbasis().row(t).conjugate().transpose();
    inst.target_weights.resize(n);
    for (std::size_t l = 0; l < n; ++l) {
        inst.target_weights[l] =
            std::norm(inst.target_coords(static_cast<Eigen::Index>(l)));
    }
    inst.alpha = std::sqrt(inst.target_weights[inst.spec().source_index()]);
    if (!(inst.alpha > 0.0 && inst.alpha < 1.0)) {
        throw ValidationError("alpha = |<s|t>| must lie in (0, 1), got " +
                              std::to_string(inst.alpha));
    }
    inst.lambda1 = moments(inst, 1);
    inst.lambda2 = moments(inst, 2);
    inst.b_factor = std::sqrt(1.0 + inst.lambda2);
    inst.b_direct = b_factor_direct(inst);
    return inst;
}

[[nodiscard]] inline SearchInstance make_instance(EigenSpectrum spectrum,
                                                  std::size_t target_index) {
    return make_instance(
        std::make_shared<const EigenSpectrum>(std::move(spectrum)), target_index);
}

/// Ds = sum_l exp(i theta_l) |l><l| as a dense matrix.
[[nodiscard]] inline UnitaryMatrix build_diffusion(const EigenSpectrum &spec) {
    UnitaryMatrix::check_cap(spec.dimension());
    const CMatrix &v = spec.eigenbasis();
    CVector d(v.cols());
    for (Eigen::Index l = 0; l < v.cols(); ++l) {
        d(l) = std::polar(1.0, spec.phase(static_cast<std::size_t>(l)));
    }
    return UnitaryMatrix::trusted(v * d.asDiagonal() * v.adjoint());
}

// ---------------------------------------------------------------------------
// Instance families
// ---------------------------------------------------------------------------

/// Knobs shared by the target-aware generators.
struct GeneratorOptions {
    double alpha = 0.0;           ///< |<s|t>|; 0 selects 1/sqrt(N)
    std::size_t target_index = 0; ///< computational basis index of |t>
};

namespace detail {

/**
 * Orthonormal basis V whose row `target` has magnitudes `row`.
 *
 * V = R * H * D: H is the real reflection sending e_t to `row`, R is a
 * random unitary fixing e_t (Haar for small N, three reflections
 * otherwise), D carries random column phases. Row t of R*H equals row t of
 * H bit for bit, so zero entries of `row` stay exactly zero.
 */
[[nodiscard]] inline CMatrix basis_with_target_row(std::size_t n,
                                                   std::size_t target,
                                                   const std::vector<double> &row,
                                                   std::uint64_t seed) {
    constexpr std::size_t kHaarLimit = 512;
    const auto dn = static_cast<Eigen::Index>(n);
    const auto t = static_cast<Eigen::Index>(target);
    Eigen::VectorXd v(dn);
    for (Eigen::Index i = 0; i < dn; ++i) {
        v(i) = row[static_cast<std::size_t>(i)];
    }
    v /= v.norm();

    Eigen::VectorXd w = -v;
    w(t) += 1.0;
    const double ww = w.squaredNorm();
    CMatrix h = CMatrix::Identity(dn, dn);
    if (ww > 1e-30) {
        h -= ((2.0 / ww) * (w * w.transpose())).cast<complex_t>();
    }

    std::mt19937_64 rng(seed);
    const std::uint64_t mix_seed = rng();
    CMatrix out;
    if (n - 1 <= kHaarLimit) {
        const UnitaryMatrix haar = haar_random_unitary(n - 1, mix_seed);
        CMatrix r = CMatrix::Zero(dn, dn);
        r(t, t) = 1.0;
        for (Eigen::Index a = 0, ra = 0; a < dn; ++a) {
            if (a == t) {
                continue;
            }
            for (Eigen::Index b = 0, rb = 0; b < dn; ++b) {
                if (b == t) {
                    continue;
                }
                r(a, b) = haar.entries()(ra, rb);
                ++rb;
            }
            ++ra;
        }
        out = r * h;
    } else {
        out = std::move(h);
        for (int k = 0; k < 3; ++k) {
            CVector u = gaussian_matrix(n, 1, mix_seed + 1 + k).col(0);
            u(t) = 0.0;
            const double uu = u.squaredNorm();
            const Eigen::RowVectorXcd uh = u.adjoint() * out;
            out.noalias() -= (2.0 / uu) * (u * uh);
        }
    }
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (Eigen::Index c = 0; c < dn; ++c) {
        out.col(c) *= std::polar(1.0, angle(rng));
    }
    return out;
}

/// Assemble a paired spectrum: phases/weights of the pairs are given, the
/// spare eigenvector gets `spare_phase` and zero target weight.
[[nodiscard]] inline EigenSpectrum
paired_spectrum(std::size_t n, const std::vector<double> &pair_phases,
                const std::vector<double> &pair_weights, double spare_phase,
                const GeneratorOptions &opts, std::uint64_t basis_seed) {
    const double alpha =
        opts.alpha > 0.0 ? opts.alpha : 1.0 / std::sqrt(static_cast<double>(n));
    if (!(alpha < 1.0)) {
        throw ValidationError("alpha must lie in (0, 1)");
    }
    if (opts.target_index >= n) {
        throw ValidationError("target index out of range");
    }
    double total = 0.0;
    for (double w : pair_weights) {
        total += w;
    }
    std::vector<double> phases{0.0, spare_phase};
    std::vector<double> row{alpha, 0.0};
    const double scale = (1.0 - alpha * alpha) / total;
    for (std::size_t p = 0; p < pair_phases.size(); ++p) {
        const double amp = std::sqrt(0.5 * pair_weights[p] * scale);
        phases.push_back(pair_phases[p]);
        phases.push_back(wrap_phase(-pair_phases[p]));
        row.push_back(amp);
        row.push_back(amp);
    }
    return EigenSpectrum::trusted(
        std::move(phases),
        basis_with_target_row(n, opts.target_index, row, basis_seed), 0);
}

inline void require_even(std::size_t n, const char *who) {
    if (n < 4 || n % 2 != 0) {
        throw ValidationError(std::string(who) + ": N must be even and >= 4");
    }
}

} // namespace detail

/**
 * @brief Grover's diffusion: phase 0 on `source`, pi on its complement.
 */
[[nodiscard]] inline EigenSpectrum grover_spectrum(std::size_t n,
                                                   const StateVector &source) {
    if (source.dimension() != n) {
        throw DimensionError("grover_spectrum: source dimension mismatch");
    }
    const auto dn = static_cast<Eigen::Index>(n);
    const CVector &s = source.amplitudes();
    // Complex Householder reflection mapping e_0 to s * exp(i psi), with psi
    // chosen so that <e_0|s exp(i psi)> is real.
    const double mag0 = std::abs(s(0));
    const complex_t rot = mag0 > 0.0 ? std::conj(s(0)) / mag0 : complex_t(1.0);
    CVector w = -(s * rot);
    w(0) += 1.0;
    const double ww = w.squaredNorm();
    CMatrix v = CMatrix::Identity(dn, dn);
    if (ww > 1e-30) {
        v -= (2.0 / ww) * (w * w.adjoint());
    }
    v.col(0) = s;
    std::vector<double> phases(n, kPi);
    phases[0] = 0.0;
    return EigenSpectrum::trusted(std::move(phases), std::move(v), 0);
}

[[nodiscard]] inline StateVector uniform_state(std::size_t n) {
    return StateVector::normalized(CVector::Ones(static_cast<Eigen::Index>(n)));
}

/**
 * @brief Random spectrum with +/-theta pairs, theta uniform in
 * [theta_min, theta_max]; first moment vanishes by construction.
 */
[[nodiscard]] inline EigenSpectrum symmetric_spectrum(std::size_t n,
                                                      std::uint64_t seed,
                                                      double theta_min,
                                                      double theta_max,
                                                      const GeneratorOptions &opts = {}) {
    detail::require_even(n, "symmetric_spectrum");
    if (!(theta_min > 0.0 && theta_min <= theta_max && theta_max <= kPi)) {
        throw ValidationError(
            "symmetric_spectrum: need 0 < theta_min <= theta_max <= pi");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(theta_min, theta_max);
    std::exponential_distribution<double> weight(1.0);
    const std::size_t pairs = (n - 2) / 2;
    std::vector<double> ph(pairs);
    std::vector<double> wt(pairs);
    for (std::size_t p = 0; p < pairs; ++p) {
        ph[p] = theta_min == theta_max ? theta_min : phase(rng);
        wt[p] = weight(rng);
    }
    return detail::paired_spectrum(n, ph, wt, theta_max, opts, rng());
}

/**
 * @brief Adversarial family for naive powering at r = 2^m.
 *
 * Pair k sits at 2 pi n / 2^m + epsilon with n cycling through
 * 1 .. 2^(m-1); the n = 2^(m-1) resonance at pi is approached from below
 * (pi - epsilon). Every pair then has |sin(r theta / 2)| = sin(r eps / 2)
 * while the lower-n pairs keep B moderate. Pairs carry equal weight.
 */
[[nodiscard]] inline EigenSpectrum resonant_spectrum(std::size_t n, int m,
                                                     double epsilon,
                                                     std::uint64_t seed,
                                                     const GeneratorOptions &opts = {}) {
    detail::require_even(n, "resonant_spectrum");
    if (m < 1 || m > 20) {
        throw ValidationError("resonant_spectrum: m must be in [1, 20]");
    }
    const double r = std::ldexp(1.0, m);
    if (!(epsilon > 0.0)) {
        throw ValidationError("resonant_spectrum: epsilon must be > 0 (exact "
                              "resonance rejected)");
    }
    if (!(epsilon < kPi / r)) {
        throw ValidationError("resonant_spectrum: epsilon must be < pi / 2^m");
    }
    const long long half = 1LL << (m - 1);
    const std::size_t pairs = (n - 2) / 2;
    std::vector<double> ph(pairs);
    std::vector<double> wt(pairs, 1.0);
    for (std::size_t p = 0; p < pairs; ++p) {
        const long long k = 1 + static_cast<long long>(p) % half;
        ph[p] = k == half ? kPi - epsilon : 2.0 * kPi * static_cast<double>(k) / r + epsilon;
    }
    std::mt19937_64 rng(seed);
    return detail::paired_spectrum(n, ph, wt, ph.front(), opts, rng());
}

/**
 * @brief Large-B instance that is still resonant for r = 2^m: even pairs
 * form a bulk at bulk_phase (jittered by 10%) that sets B, odd pairs sit at
 * the resonances of resonant_spectrum. Pairs carry equal weight.
 */
[[nodiscard]] inline EigenSpectrum resonant_mixture_spectrum(std::size_t n, int m,
                                                             double epsilon,
                                                             double bulk_phase,
                                                             std::uint64_t seed,
                                                             const GeneratorOptions &opts = {}) {
    detail::require_even(n, "resonant_mixture_spectrum");
    if (n < 6) {
        throw ValidationError("resonant_mixture_spectrum: N must be >= 6");
    }
    if (m < 1 || m > 20) {
        throw ValidationError("resonant_mixture_spectrum: m must be in [1, 20]");
    }
    const double r = std::ldexp(1.0, m);
    if (!(epsilon > 0.0 && epsilon < kPi / r)) {
        throw ValidationError("resonant_mixture_spectrum: epsilon must be in (0, pi / 2^m)");
    }
    if (!(bulk_phase > 0.0 && bulk_phase * 1.1 <= kPi)) {
        throw ValidationError("resonant_mixture_spectrum: bulk phase out of range");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.9, 1.1);
    const long long half = 1LL << (m - 1);
    const std::size_t pairs = (n - 2) / 2;
    std::vector<double> ph(pairs);
    std::vector<double> wt(pairs, 1.0);
    for (std::size_t p = 0; p < pairs; ++p) {
        if (p % 2 == 0) {
            ph[p] = bulk_phase * jitter(rng);
        } else {
            const long long k = 1 + static_cast<long long>(p / 2) % half;
            ph[p] = k == half ? kPi - epsilon
                              : 2.0 * kPi * static_cast<double>(k) / r + epsilon;
        }
    }
    return detail::paired_spectrum(n, ph, wt, ph[1], opts, rng());
}

/// Documented constant c in B ~ c * sqrt(ln N) for scaling_family.
inline constexpr double kScalingConstant = 0.69;

/**
 * @brief Synthetic stand-in for a lattice search: pair phases follow a
 * two-dimensional density of states, theta_k = pi sqrt(k / P), with equal
 * weights and alpha = 1/sqrt(N). Then 1/theta_min = O(sqrt N) while
 * B = O(sqrt(ln N)). The seed only affects the eigenbasis.
 */
[[nodiscard]] inline EigenSpectrum scaling_family(int log2n, std::uint64_t seed,
                                                  std::size_t target_index = 0) {
    if (log2n < 6 || log2n > 12) {
        throw ValidationError("scaling_family: log2N must be in [6, 12]");
    }
    const std::size_t n = std::size_t{1} << log2n;
    const std::size_t pairs = (n - 2) / 2;
    std::vector<double> ph(pairs);
    std::vector<double> wt(pairs, 1.0);
    for (std::size_t k = 0; k < pairs; ++k) {
        ph[k] = kPi * std::sqrt(static_cast<double>(k + 1) /
                                static_cast<double>(pairs));
    }
    GeneratorOptions opts;
    opts.target_index = target_index;
    std::mt19937_64 rng(seed);
    return detail::paired_spectrum(n, ph, wt, kPi / 2.0, opts, rng());
}

/**
 * @brief Paired spectrum whose B hits `target_b`.
 *
 * Pair phases are kappa * u_k with u_k uniform in [1 - spread, 1 + spread];
 * kappa is found by bisection (B decreases monotonically in kappa).
 */
[[nodiscard]] inline EigenSpectrum tuned_spectrum(std::size_t n, std::uint64_t seed,
                                                  double target_b, double spread = 0.1,
                                                  const GeneratorOptions &opts = {}) {
    detail::require_even(n, "tuned_spectrum");
    if (!(spread >= 0.0 && spread < 1.0)) {
        throw ValidationError("tuned_spectrum: spread must be in [0, 1)");
    }
    const double alpha =
        opts.alpha > 0.0 ? opts.alpha : 1.0 / std::sqrt(static_cast<double>(n));
    if (!(target_b > 1.0)) {
        throw ValidationError("tuned_spectrum: target B must exceed 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(1.0 - spread, 1.0 + spread);
    std::exponential_distribution<double> weight(1.0);
    const std::size_t pairs = (n - 2) / 2;
    std::vector<double> base(pairs);
    std::vector<double> wt(pairs);
    double total = 0.0;
    for (std::size_t p = 0; p < pairs; ++p) {
        base[p] = jitter(rng);
        wt[p] = weight(rng);
        total += wt[p];
    }
    const auto phases_at = [&](double kappa) {
        std::vector<double> ph(pairs);
        for (std::size_t p = 0; p < pairs; ++p) {
            ph[p] = std::min(kappa * base[p], kPi);
        }
        return ph;
    };
    const auto b_at = [&](double kappa) {
        const std::vector<double> ph = phases_at(kappa);
        double b2 = 0.0;
        for (std::size_t p = 0; p < pairs; ++p) {
            const double s = std::sin(ph[p] / 2.0);
            b2 += (1.0 - alpha * alpha) * (wt[p] / total) / (s * s);
        }
        return std::sqrt(b2);
    };
    double lo = 1e-9;
    double hi = kPi / (1.0 - spread);
    if (b_at(hi) > target_b) {
        throw ValidationError("tuned_spectrum: target B too small to reach");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (b_at(mid) > target_b ? lo : hi) = mid;
    }
    const std::vector<double> ph = phases_at(0.5 * (lo + hi));
    const double spare = *std::max_element(ph.begin(), ph.end());
    return detail::paired_spectrum(n, ph, wt, spare, opts, rng());
}

// ---------------------------------------------------------------------------
// Text serialization
//
//   gqs-spectrum 1
//   N <n> source_index <k>
//   <phase> <re_0> <im_0> ... <re_{N-1}> <im_{N-1}>      (N lines)
//
// Line l holds eigenphase l and the N amplitudes of eigenvector l. All
// reals use 17 significant digits so a round trip is exact.
// ---------------------------------------------------------------------------

namespace detail {

inline void put_double(std::ostream &os, double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x,
                                   std::chars_format::general, 17);
    os.write(buf, res.ptr - buf);
}

[[nodiscard]] inline double parse_double(const std::string &token,
                                         std::size_t line) {
    double x = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), x);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw ValidationError("spectrum file line " + std::to_string(line) +
                              ": bad number '" + token + "'");
    }
    return x;
}

} // namespace detail

inline void write_spectrum(std::ostream &os, const EigenSpectrum &spec) {
    const std::size_t n = spec.dimension();
    os << "gqs-spectrum 1\n";
    os << "N " << n << " source_index " << spec.source_index() << "\n";
    const CMatrix &v = spec.eigenbasis();
    for (std::size_t l = 0; l < n; ++l) {
        detail::put_double(os, spec.phase(l));
        const auto c = static_cast<Eigen::Index>(l);
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            os << ' ';
            detail::put_double(os, v(i, c).real());
            os << ' ';
            detail::put_double(os, v(i, c).imag());
        }
        os << '\n';
    }
}

[[nodiscard]] inline EigenSpectrum read_spectrum(std::istream &is) {
    std::string line;
    if (!std::getline(is, line) || line != "gqs-spectrum 1") {
        throw ValidationError("spectrum file: missing 'gqs-spectrum 1' header");
    }
    std::size_t n = 0;
    std::size_t source = 0;
    {
        if (!std::getline(is, line)) {
            throw ValidationError("spectrum file: missing dimension line");
        }
        std::istringstream hs(line);
        std::string kn;
        std::string ks;
        if (!(hs >> kn >> n >> ks >> source) || kn != "N" || ks != "source_index") {
            throw ValidationError("spectrum file line 2: expected 'N <n> source_index <k>'");
        }
        if (n < 2 || n > kDenseCap) {
            throw ValidationError("spectrum file: N out of range");
        }
    }
    std::vector<double> phases(n);
    CMatrix v(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t l = 0; l < n; ++l) {
        const std::size_t lineno = l + 3;
        if (!std::getline(is, line)) {
            throw ValidationError("spectrum file: truncated at line " +
                                  std::to_string(lineno));
        }
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> toks;
        while (ls >> tok) {
            toks.push_back(tok);
        }
        if (toks.size() != 1 + 2 * n) {
            throw ValidationError("spectrum file line " + std::to_string(lineno) +
                                  ": expected " + std::to_string(1 + 2 * n) +
                                  " fields");
        }
        phases[l] = detail::parse_double(toks[0], lineno);
        for (std::size_t i = 0; i < n; ++i) {
            v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) =
                complex_t(detail::parse_double(toks[1 + 2 * i], lineno),
                          detail::parse_double(toks[2 + 2 * i], lineno));
        }
    }
    return EigenSpectrum(std::move(phases), std::move(v), source);
}

} // namespace gqs
