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
 * Dense complex-vector and unitary-matrix kernel.
 *
 * Dense matrices are a validation tool: every type here refuses dimensions
 * above kDenseCap. Simulation paths elsewhere in the library are
 * matrix-free and only touch these types at small scale.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gqs/error.hpp"

namespace gqs {

using complex_t = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;

/// Largest dimension for which a dense matrix may be materialized.
inline constexpr std::size_t kDenseCap = 4096;

/// Maps any angle into (-pi, pi].
[[nodiscard]] inline double wrap_phase(double angle) {
    double out = std::remainder(angle, 2.0 * kPi);
    if (out <= -kPi) {
        out += 2.0 * kPi;
    }
    return out;
}

/// Phase of a unit-modulus number, in (-pi, pi].
[[nodiscard]] inline double phase_of(complex_t z) {
    double out = std::arg(z);
    return out <= -kPi ? kPi : out;
}

/**
 * @brief Normalized complex amplitude vector.
 *
 * Construction checks the norm; use StateVector::normalized for raw data.
 */
class StateVector {
  public:
    static constexpr double kNormTolerance = 1e-10;

    explicit StateVector(CVector amplitudes) : amps_(std::move(amplitudes)) {
        if (amps_.size() == 0) {
            throw DimensionError("state vector dimension must be positive");
        }
        const double err = std::abs(amps_.norm() - 1.0);
        if (err > kNormTolerance) {
            throw ValidationError("state vector not normalized: |norm-1| = " +
                                  std::to_string(err));
        }
    }

    [[nodiscard]] static StateVector normalized(CVector raw) {
        const double n = raw.norm();
        if (!(n > 0.0)) {
            throw ValidationError("cannot normalize a zero vector");
        }
        raw /= n;
        return StateVector(std::move(raw));
    }

    [[nodiscard]] std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(amps_.size());
    }
    [[nodiscard]] const CVector &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] complex_t operator[](std::size_t i) const {
        return amps_(static_cast<Eigen::Index>(i));
    }
    [[nodiscard]] double norm() const { return amps_.norm(); }

    /// <this|other>
    [[nodiscard]] complex_t inner(const StateVector &other) const {
        if (other.dimension() != dimension()) {
            throw DimensionError("inner product of mismatched dimensions");
        }
        return amps_.dot(other.amps_);
    }

  private:
    CVector amps_;
};

/**
 * @brief Dense square unitary, dimension at most kDenseCap.
 *
 * The checking constructor costs O(n^3); `trusted` skips the unitarity
 * test for products the caller knows to be unitary.
 */
class UnitaryMatrix {
  public:
    static constexpr double kUnitarityTolerance = 1e-10;

    explicit UnitaryMatrix(CMatrix entries) : m_(std::move(entries)) {
        check_shape();
        const double err = unitarity_error();
        if (err > kUnitarityTolerance) {
            throw ValidationError("matrix is not unitary: max|U^dag U - 1| = " +
                                  std::to_string(err));
        }
    }

    [[nodiscard]] static UnitaryMatrix trusted(CMatrix entries) {
        return UnitaryMatrix(std::move(entries), TrustedTag{});
    }

    [[nodiscard]] static UnitaryMatrix identity(std::size_t n) {
        check_cap(n);
        const auto d = static_cast<Eigen::Index>(n);
        return trusted(CMatrix::Identity(d, d));
    }

    [[nodiscard]] std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(m_.rows());
    }
    [[nodiscard]] const CMatrix &entries() const noexcept { return m_; }
    [[nodiscard]] complex_t operator()(std::size_t r, std::size_t c) const {
        return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    /// max-entry norm of U^dag U - 1
    [[nodiscard]] double unitarity_error() const {
        const CMatrix g = m_.adjoint() * m_;
        return (g - CMatrix::Identity(m_.rows(), m_.cols()))
            .cwiseAbs()
            .maxCoeff();
    }

    [[nodiscard]] UnitaryMatrix adjoint() const {
        return trusted(m_.adjoint());
    }

    /// Matrix product; both factors unitary so the result is too.
    [[nodiscard]] UnitaryMatrix operator*(const UnitaryMatrix &rhs) const {
        if (rhs.dimension() != dimension()) {
            throw DimensionError("unitary product of mismatched dimensions");
        }
        return trusted(m_ * rhs.m_);
    }

    static void check_cap(std::size_t n) {
        if (n > kDenseCap) {
            throw SizeError("dense dimension " + std::to_string(n) +
                            " exceeds cap " + std::to_string(kDenseCap));
        }
    }

  private:
    struct TrustedTag {};
    UnitaryMatrix(CMatrix entries, TrustedTag) : m_(std::move(entries)) {
        check_shape();
    }

    void check_shape() const {
        if (m_.rows() == 0 || m_.rows() != m_.cols()) {
            throw DimensionError("unitary must be square and non-empty");
        }
        check_cap(static_cast<std::size_t>(m_.rows()));
    }

    CMatrix m_;
};

struct EigenPair {
    double phase; ///< radians in (-pi, pi]
    StateVector vector;
};

using EigenPairList = std::vector<EigenPair>;

/// Kronecker product; `high` indexes the high-order (ancilla) factor.
[[nodiscard]] inline UnitaryMatrix tensor_product(const UnitaryMatrix &high,
                                                  const UnitaryMatrix &low) {
    const std::size_t na = high.dimension();
    const std::size_t nb = low.dimension();
    if (na > kDenseCap / nb) {
        throw SizeError("tensor product dimension " + std::to_string(na) +
                        "x" + std::to_string(nb) + " exceeds dense cap");
    }
    const auto a = static_cast<Eigen::Index>(na);
    const auto b = static_cast<Eigen::Index>(nb);
    CMatrix out(a * b, a * b);
    for (Eigen::Index r = 0; r < a; ++r) {
        for (Eigen::Index c = 0; c < a; ++c) {
            out.block(r * b, c * b, b, b) = high.entries()(r, c) * low.entries();
        }
    }
    return UnitaryMatrix::trusted(std::move(out));
}

[[nodiscard]] inline StateVector apply_unitary(const UnitaryMatrix &u,
                                               const StateVector &v) {
    if (u.dimension() != v.dimension()) {
        throw DimensionError("apply_unitary: matrix " +
                             std::to_string(u.dimension()) + " vs vector " +
                             std::to_string(v.dimension()));
    }
    CVector out = u.entries() * v.amplitudes();
    return StateVector(std::move(out));
}

[[nodiscard]] inline StateVector basis_state(std::size_t dimension,
                                             std::size_t index) {
    if (dimension == 0 || index >= dimension) {
        throw ValidationError("basis index " + std::to_string(index) +
                              " out of range for dimension " +
                              std::to_string(dimension));
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dimension));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return StateVector(std::move(v));
}

/// Seeded i.i.d. complex Gaussian matrix with unit variance per entry.
[[nodiscard]] inline CMatrix gaussian_matrix(std::size_t rows,
                                             std::size_t cols,
                                             std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    CMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
        for (Eigen::Index r = 0; r < g.rows(); ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(r, c) = complex_t(re, im);
        }
    }
    return g;
}

[[nodiscard]] inline StateVector random_state(std::size_t n,
                                              std::uint64_t seed) {
    return StateVector::normalized(gaussian_matrix(n, 1, seed).col(0));
}

/**
 * @brief Haar-distributed unitary: QR of a complex Gaussian matrix with the
 * phases of diag(R) folded back into Q.
 */
[[nodiscard]] inline UnitaryMatrix haar_random_unitary(std::size_t n,
                                                       std::uint64_t seed) {
    if (n == 0) {
        throw ValidationError("haar_random_unitary: n must be >= 1");
    }
    UnitaryMatrix::check_cap(n);
    const CMatrix g = gaussian_matrix(n, n, seed);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix &r = qr.matrixQR();
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
        const complex_t d = r(i, i);
        const double mag = std::abs(d);
        q.col(i) *= (mag > 0.0) ? d / mag : complex_t(1.0);
    }
    return UnitaryMatrix::trusted(std::move(q));
}

/**
 * @brief Complete eigensystem of a unitary.
 *
 * A unitary is normal, so its complex Schur form is diagonal and the Schur
 * vectors are an orthonormal eigenbasis even inside degenerate eigenspaces.
 */
[[nodiscard]] inline EigenPairList unitary_eigensystem(const UnitaryMatrix &u) {
    constexpr double kReconstructionTolerance = 1e-8;
    const CMatrix &a = u.entries();
    Eigen::ComplexSchur<CMatrix> schur(a, true);
    if (schur.info() != Eigen::Success) {
        throw ConvergenceError("complex Schur iteration did not converge",
                               std::numeric_limits<double>::infinity());
    }
    const CMatrix &t = schur.matrixT();
    const CMatrix &q = schur.matrixU();

    const Eigen::Index n = a.rows();
    CVector diag(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        diag(i) = t(i, i) / std::abs(t(i, i));
    }
    const CMatrix rebuilt = q * diag.asDiagonal() * q.adjoint();
    const double residual = (rebuilt - a).cwiseAbs().maxCoeff();
    if (!(residual <= kReconstructionTolerance)) {
        throw ConvergenceError("eigensystem reconstruction failed", residual);
    }

    EigenPairList out;
    out.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        out.push_back({phase_of(diag(i)), StateVector::normalized(q.col(i))});
    }
    return out;
}

} // namespace gqs
