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
 * Phase estimation P = (F x 1)(c_j Ds^j)(W x 1), the conditional operator
 * C, the boosted diffusion D = P C P^dag, and the ancilla-controlled oracle.
 *
 * Joint layout: amplitude (j, i) lives at j * N + i, with j the ancilla
 * value and i the main-register index. Viewed as an N x 2^m column-major
 * matrix, column j is block j. Ancilla operators act on the right of that
 * matrix; main-register operators act on the left.
 *
 * All operators are applied matrix-free. Everything that acts on the main
 * register is diagonal in the eigenbasis of Ds, so the simulation changes
 * basis once (V^dag on the left), applies diagonal phases and ancilla
 * transforms, and changes back. Cost accounting follows the circuit, not
 * the shortcut: c_j Ds^j is charged 2^m - 1 applications (binary powers),
 * C is charged 2^m, and one D is charged 3 * 2^m - 2.
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gqs/numerics.hpp"
#include "gqs/search.hpp"
#include "gqs/spectra.hpp"

namespace gqs {

inline constexpr int kMaxAncillaQubits = 8;

inline void check_ancilla_qubits(int m) {
    if (m < 1 || m > kMaxAncillaQubits) {
        throw ValidationError("ancilla qubit count m must be in [1, 8], got " +
                              std::to_string(m));
    }
}

/// Oracle and Ds application counters.
struct CostLedger {
    long long oracle_queries = 0;
    long long ds_applications = 0;
};

/**
 * @brief Statevector on ancilla (2^m) x main (N), index j * N + i.
 */
class JointState {
  public:
    JointState(int m, std::size_t n, CVector amplitudes)
        : m_(m), n_(n), amps_(std::move(amplitudes)) {
        check_ancilla_qubits(m_);
        if (static_cast<std::size_t>(amps_.size()) != ancilla_dimension() * n_) {
            throw DimensionError("joint state size must be 2^m * N");
        }
        const double err = std::abs(amps_.norm() - 1.0);
        if (err > StateVector::kNormTolerance) {
            throw ValidationError("joint state not normalized");
        }
    }

    /// |ancilla> (x) |main>
    [[nodiscard]] static JointState product(int m, const StateVector &ancilla,
                                            const StateVector &main) {
        check_ancilla_qubits(m);
        if (ancilla.dimension() != (std::size_t{1} << m)) {
            throw DimensionError("ancilla state must have dimension 2^m");
        }
        const auto n = static_cast<Eigen::Index>(main.dimension());
        CVector a(static_cast<Eigen::Index>(ancilla.dimension()) * n);
        for (Eigen::Index j = 0; j < ancilla.amplitudes().size(); ++j) {
            a.segment(j * n, n) = ancilla.amplitudes()(j) * main.amplitudes();
        }
        return JointState(m, main.dimension(), std::move(a));
    }

    /// |j>|i>
    [[nodiscard]] static JointState basis(int m, std::size_t n, std::size_t j,
                                          std::size_t i) {
        check_ancilla_qubits(m);
        const std::size_t big = (std::size_t{1} << m) * n;
        if (j >= (std::size_t{1} << m) || i >= n) {
            throw ValidationError("joint basis index out of range");
        }
        CVector a = CVector::Zero(static_cast<Eigen::Index>(big));
        a(static_cast<Eigen::Index>(j * n + i)) = 1.0;
        return JointState(m, n, std::move(a));
    }

    [[nodiscard]] int ancilla_qubits() const noexcept { return m_; }
    [[nodiscard]] std::size_t ancilla_dimension() const noexcept {
        return std::size_t{1} << m_;
    }
    [[nodiscard]] std::size_t main_dimension() const noexcept { return n_; }
    [[nodiscard]] const CVector &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] complex_t amplitude(std::size_t j, std::size_t i) const {
        return amps_(static_cast<Eigen::Index>(j * n_ + i));
    }
    [[nodiscard]] complex_t inner(const JointState &other) const {
        if (other.amps_.size() != amps_.size()) {
            throw DimensionError("joint inner product size mismatch");
        }
        return amps_.dot(other.amps_);
    }

    /// Column j of the returned view is block j.
    [[nodiscard]] Eigen::Map<CMatrix> blocks() {
        return {amps_.data(), static_cast<Eigen::Index>(n_),
                static_cast<Eigen::Index>(ancilla_dimension())};
    }
    [[nodiscard]] Eigen::Map<const CMatrix> blocks() const {
        return {amps_.data(), static_cast<Eigen::Index>(n_),
                static_cast<Eigen::Index>(ancilla_dimension())};
    }

  private:
    int m_;
    std::size_t n_;
    CVector amps_;
};

/// Walsh-Hadamard H^{(x)m}: entry (k, j) = (-1)^{popcount(k & j)} / 2^{m/2}.
[[nodiscard]] inline UnitaryMatrix walsh_hadamard(int m) {
    check_ancilla_qubits(m);
    const Eigen::Index dim = Eigen::Index{1} << m;
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    CMatrix w(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            const int parity =
                std::popcount(static_cast<unsigned>(k & j)) & 1;
            w(k, j) = parity != 0 ? -norm : norm;
        }
    }
    return UnitaryMatrix::trusted(std::move(w));
}

/**
 * Fourier transform on the ancilla, F(k, j) = exp(-2 pi i k j / 2^m) / 2^{m/2}.
 *
 * The negative exponent sends sum_j exp(i j theta)|j> to a comb peaked at
 * k = theta 2^m / (2 pi), which is what the overlap |<k|theta>| assumes.
 * Twiddles are read from an exact (k j mod 2^m) table.
 */
[[nodiscard]] inline UnitaryMatrix qft(int m) {
    check_ancilla_qubits(m);
    const Eigen::Index dim = Eigen::Index{1} << m;
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    std::vector<complex_t> twiddle(static_cast<std::size_t>(dim));
    for (Eigen::Index n = 0; n < dim; ++n) {
        twiddle[static_cast<std::size_t>(n)] =
            std::polar(norm, -2.0 * kPi * static_cast<double>(n) /
                                 static_cast<double>(dim));
    }
    CMatrix f(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            f(k, j) = twiddle[static_cast<std::size_t>((k * j) & (dim - 1))];
        }
    }
    return UnitaryMatrix::trusted(std::move(f));
}

/**
 * |<k|theta>| = 2^-m |sin(pi k - 2^{m-1} theta) / sin((pi k - 2^{m-1} theta) / 2^m)|,
 * with the removable singularity evaluated as its limit 1.
 */
[[nodiscard]] inline double pea_amplitude(double theta, int m, long long k) {
    check_ancilla_qubits(m);
    const double dim = std::ldexp(1.0, m);
    const double x = kPi * static_cast<double>(k) - 0.5 * dim * theta;
    const double den = std::sin(x / dim);
    if (std::abs(den) < 1e-12) {
        return 1.0;
    }
    return std::abs(std::sin(x) / den) / dim;
}

/**
 * @brief The boosted diffusion D = P C P^dag over one spectrum.
 *
 * Holds precomputed phase tables; apply_* operate on the joint amplitudes
 * expressed in the Ds eigenbasis ("spectral frame"), to_spectral /
 * from_spectral convert. The public free functions below wrap these.
 */
class BoostedOperator {
  public:
    BoostedOperator(std::shared_ptr<const EigenSpectrum> spectrum, int m)
        : spec_(std::move(spectrum)), m_(m) {
        check_ancilla_qubits(m_);
        if (!spec_) {
            throw ValidationError("BoostedOperator: null spectrum");
        }
        const auto n = static_cast<Eigen::Index>(spec_->dimension());
        const Eigen::Index dim = Eigen::Index{1} << m_;
        walsh_ = walsh_hadamard(m_).entries();
        qft_t_ = qft(m_).entries().transpose();
        qft_adj_t_ = qft(m_).entries().conjugate();
        powers_.resize(n, dim);
        c_block0_.resize(n);
        for (Eigen::Index l = 0; l < n; ++l) {
            const double theta = spec_->phase(static_cast<std::size_t>(l));
            for (Eigen::Index j = 0; j < dim; ++j) {
                powers_(l, j) = std::polar(1.0, static_cast<double>(j) * theta);
            }
            c_block0_(l) = std::polar(1.0, static_cast<double>(dim) * theta);
        }
    }

    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] long long r() const noexcept { return 1LL << m_; }
    [[nodiscard]] long long cost_per_application() const noexcept {
        return 3 * r() - 2;
    }
    [[nodiscard]] const EigenSpectrum &spectrum() const noexcept { return *spec_; }

    // -- spectral-frame kernels; y is N x 2^m, column j = block j ----------

    void apply_walsh(CMatrix &y) const { y = y * walsh_; } // W symmetric
    void apply_qft(CMatrix &y) const { y = y * qft_t_; }
    void apply_qft_adjoint(CMatrix &y) const { y = y * qft_adj_t_; }

    void apply_controlled_powers(CMatrix &y, CostLedger *ledger) const {
        y.array() *= powers_.array();
        charge(ledger, r() - 1);
    }
    void apply_controlled_powers_adjoint(CMatrix &y, CostLedger *ledger) const {
        y.array() *= powers_.array().conjugate();
        charge(ledger, r() - 1);
    }
    void apply_c(CMatrix &y, CostLedger *ledger) const {
        y.col(0).array() *= c_block0_.array();
        y.rightCols(y.cols() - 1) *= -1.0;
        charge(ledger, r());
    }
    void apply_pea(CMatrix &y, CostLedger *ledger) const {
        apply_walsh(y);
        apply_controlled_powers(y, ledger);
        apply_qft(y);
    }
    void apply_pea_adjoint(CMatrix &y, CostLedger *ledger) const {
        apply_qft_adjoint(y);
        apply_controlled_powers_adjoint(y, ledger);
        apply_walsh(y);
    }
    /// D = P C P^dag: P^dag first.
    void apply_boosted(CMatrix &y, CostLedger *ledger) const {
        apply_pea_adjoint(y, ledger);
        apply_c(y, ledger);
        apply_pea(y, ledger);
    }

    [[nodiscard]] CMatrix to_spectral(const JointState &state) const {
        check_layout(state);
        return spec_->eigenbasis().adjoint() * state.blocks();
    }
    [[nodiscard]] CMatrix to_spectral(const StateVector &main) const {
        CMatrix y = CMatrix::Zero(static_cast<Eigen::Index>(spec_->dimension()),
                                  Eigen::Index{1} << m_);
        y.col(0) = spec_->eigenbasis().adjoint() * main.amplitudes();
        return y;
    }
    [[nodiscard]] JointState from_spectral(const CMatrix &y) const {
        CMatrix x = spec_->eigenbasis() * y;
        return JointState(m_, spec_->dimension(),
                          Eigen::Map<const CVector>(x.data(), x.size()));
    }

    void check_layout(const JointState &state) const {
        if (state.ancilla_qubits() != m_ ||
            state.main_dimension() != spec_->dimension()) {
            throw DimensionError("joint state layout does not match operator");
        }
    }

  private:
    static void charge(CostLedger *ledger, long long n) {
        if (ledger != nullptr) {
            ledger->ds_applications += n;
        }
    }

    std::shared_ptr<const EigenSpectrum> spec_;
    int m_;
    CMatrix walsh_;
    CMatrix qft_t_;
    CMatrix qft_adj_t_;
    CMatrix powers_;   ///< exp(i j theta_l)
    CVector c_block0_; ///< exp(i 2^m theta_l)
};

namespace detail {

template <class Kernel>
[[nodiscard]] JointState apply_in_frame(const EigenSpectrum &spec, int m,
                                        const JointState &state, Kernel &&kernel) {
    // Non-owning handle: the operator does not outlive this call.
    const BoostedOperator op(
        std::shared_ptr<const EigenSpectrum>(&spec, [](const EigenSpectrum *) {}), m);
    CMatrix y = op.to_spectral(state);
    kernel(op, y);
    return op.from_spectral(y);
}

} // namespace detail

/// Block j receives Ds^j. Charges 2^m - 1 Ds applications.
[[nodiscard]] inline JointState controlled_powers(const EigenSpectrum &spec, int m,
                                                  const JointState &state,
                                                  CostLedger *ledger = nullptr) {
    return detail::apply_in_frame(spec, m, state, [&](const auto &op, CMatrix &y) {
        op.apply_controlled_powers(y, ledger);
    });
}

/// P = (F x 1)(c_j Ds^j)(W x 1).
[[nodiscard]] inline JointState pea_operator(const EigenSpectrum &spec, int m,
                                             const JointState &state,
                                             CostLedger *ledger = nullptr) {
    return detail::apply_in_frame(spec, m, state, [&](const auto &op, CMatrix &y) {
        op.apply_pea(y, ledger);
    });
}

[[nodiscard]] inline JointState pea_adjoint(const EigenSpectrum &spec, int m,
                                            const JointState &state,
                                            CostLedger *ledger = nullptr) {
    return detail::apply_in_frame(spec, m, state, [&](const auto &op, CMatrix &y) {
        op.apply_pea_adjoint(y, ledger);
    });
}

/// Block 0 receives Ds^(2^m); every other block is negated.
[[nodiscard]] inline JointState c_operator(const EigenSpectrum &spec, int m,
                                           const JointState &state,
                                           CostLedger *ledger = nullptr) {
    return detail::apply_in_frame(spec, m, state, [&](const auto &op, CMatrix &y) {
        op.apply_c(y, ledger);
    });
}

/// D = P C P^dag with r = 2^m. Charges 3 * 2^m - 2 Ds applications.
[[nodiscard]] inline JointState boosted_diffusion(const EigenSpectrum &spec, int m,
                                                  const JointState &state,
                                                  CostLedger *ledger = nullptr) {
    return detail::apply_in_frame(spec, m, state, [&](const auto &op, CMatrix &y) {
        op.apply_boosted(y, ledger);
    });
}

/// I_{0,t}: negates the single amplitude at joint index 0 * N + target.
[[nodiscard]] inline JointState controlled_oracle(std::size_t n, std::size_t target_index,
                                                  int m, JointState state,
                                                  CostLedger *ledger = nullptr) {
    check_ancilla_qubits(m);
    if (state.ancilla_qubits() != m || state.main_dimension() != n) {
        throw DimensionError("controlled_oracle: layout mismatch");
    }
    if (target_index >= n) {
        throw ValidationError("controlled_oracle: target out of range");
    }
    CVector a = state.amplitudes();
    a(static_cast<Eigen::Index>(target_index)) = -a(static_cast<Eigen::Index>(target_index));
    if (ledger != nullptr) {
        ++ledger->oracle_queries;
    }
    return JointState(m, n, std::move(a));
}

// ---------------------------------------------------------------------------
// Effective B' of the boosted operator
// ---------------------------------------------------------------------------

struct BPrimeBreakdown {
    double sigma1 = 0.0; ///< bad branches, eigenphase pi
    double sigma2 = 0.0; ///< good branches, eigenphase 2^m theta_l
    double b_prime = 0.0;
};

/**
 * Sigma1 = sum_l |<l|t>|^2 (1 - |<0|theta_l>|^2) (the bad-branch weight of
 * <0,t|, source term included and exactly zero), Sigma2 = B^2 / 4^m from
 * the cancellation sin(2^{m-1} theta) = sin(r theta / 2) at r = 2^m.
 */
[[nodiscard]] inline BPrimeBreakdown b_prime(const SearchInstance &inst, int m) {
    check_ancilla_qubits(m);
    const EigenSpectrum &spec = inst.spec();
    BPrimeBreakdown out;
    for (std::size_t l = 0; l < spec.dimension(); ++l) {
        const double w = inst.target_weights[l];
        if (w == 0.0) {
            continue;
        }
        const double a = pea_amplitude(spec.phase(l), m, 0);
        out.sigma1 += w * (1.0 - a * a);
    }
    const double dim = std::ldexp(1.0, m);
    out.sigma2 = inst.b_direct * inst.b_direct / (dim * dim);
    out.b_prime = std::sqrt(out.sigma1 + out.sigma2);
    return out;
}

/**
 * First moment of D with respect to |t'> = |0>|t>. Bad branches sit at
 * pi (cot = 0); a good branch contributes
 * |<l|t>|^2 A_l^2 cot(2^m theta_l / 2) = |<l|t>|^2 sin(2^m theta_l) / (2 4^m sin^2(theta_l / 2)).
 */
[[nodiscard]] inline double lambda1_prime(const SearchInstance &inst, int m) {
    check_ancilla_qubits(m);
    const double dim = std::ldexp(1.0, m);
    return detail::weighted_sum(inst.spec(), inst.target_weights,
                                [dim](std::size_t, double theta) {
                                    const double s = std::sin(theta / 2.0);
                                    return std::sin(dim * theta) /
                                           (2.0 * dim * dim * s * s);
                                });
}

/// m = max(1, round(log2 B)), capped at the ancilla limit.
[[nodiscard]] inline int default_ancilla_qubits(double b) {
    const long long m = std::llround(std::log2(b));
    return static_cast<int>(std::clamp<long long>(m, 1, kMaxAncillaQubits));
}

/// Prediction for the boosted run: B' in place of B, same alpha.
[[nodiscard]] inline PredictedSpectrum predict_boosted(const SearchInstance &inst, int m) {
    return predict_spectrum(inst.alpha, b_prime(inst, m).b_prime,
                            lambda1_prime(inst, m));
}

/**
 * @brief Boosted search: start in |0>|s>, iterate D * I_{0,t}, read the
 * joint target probability |<0,t|psi>|^2 after every iteration.
 *
 * m = 0 selects default_ancilla_qubits(B).
 */
[[nodiscard]] inline RunReport boosted_search_run(const SearchInstance &inst, int m,
                                                  long long q_max) {
    if (q_max < 0) {
        throw ValidationError("boosted_search_run: q_max must be >= 0");
    }
    if (m == 0) {
        m = default_ancilla_qubits(inst.b_direct);
    }
    const BoostedOperator op(inst.spectrum, m);
    const auto n = static_cast<Eigen::Index>(inst.dimension());
    const auto s = static_cast<Eigen::Index>(inst.spec().source_index());
    const CVector &tau = inst.target_coords;

    CMatrix y = CMatrix::Zero(n, Eigen::Index{1} << m);
    y(s, 0) = 1.0;
    CostLedger ledger;
    RunReport report;
    report.m = m;
    report.r = op.r();
    report.records.reserve(static_cast<std::size_t>(q_max) + 1);
    for (long long q = 0;; ++q) {
        const complex_t amp = tau.dot(y.col(0));
        report.records.push_back({q, std::norm(amp), std::abs(y(s, 0)),
                                  ledger.oracle_queries, ledger.ds_applications});
        if (q == q_max) {
            break;
        }
        // I_{0,t} in the spectral frame: rank-one update of block 0.
        y.col(0) -= (2.0 * amp) * tau;
        ++ledger.oracle_queries;
        op.apply_boosted(y, &ledger);
    }
    report.locate_peak();
    return report;
}

} // namespace gqs
