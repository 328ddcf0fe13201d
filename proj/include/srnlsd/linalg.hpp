#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Dense>

namespace srnlsd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Every norm and inner product in this library carries the 1/p
// normalization: ||A||^2 = tr(AA')/p and <A, B> = tr(AB')/p. The
// conventional Frobenius norm is deliberately not exposed.

[[nodiscard]] double trace(const Matrix& a);

/// tr(AA')/p for a p x p matrix. Equals 1 for the identity of any size.
[[nodiscard]] double frobenius_norm_sq(const Matrix& a);

/// tr(A1 A2')/p. Throws DimensionError unless both are p x p.
[[nodiscard]] double inner_product(const Matrix& a1, const Matrix& a2);

/// Symmetry check with the tolerance |a_ij - a_ji| <= rel_tol * max(1, |a_ij|).
[[nodiscard]] bool is_symmetric(const Matrix& a, double rel_tol = 1e-10);

/// Pivot tolerance used when none is given: 1e-12 times the largest diagonal entry.
[[nodiscard]] double default_pivot_tolerance(const Matrix& a);

/**
 * Cholesky factor A = LL' of a symmetric positive-definite matrix.
 *
 * Factorization fails with NotPositiveDefinite as soon as a pivot
 * (the squared diagonal of L before the square root) is <= tol.
 */
class SpdFactor {
public:
    explicit SpdFactor(const Matrix& a, std::optional<double> tol = std::nullopt);

    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(lower_.rows()); }
    [[nodiscard]] const Matrix& lower() const noexcept { return lower_; }

    /// Squared diagonal of L, i.e. the pivots met during elimination.
    [[nodiscard]] Vector pivots() const;

    /// A^{-1} B.
    [[nodiscard]] Matrix solve(const Matrix& b) const;

    [[nodiscard]] Matrix inverse() const;

    /// L^{-1} G L^{-T}; for symmetric weights W = A^{-1},
    /// tr(G W G' W) equals the squared entry sum of this matrix.
    [[nodiscard]] Matrix whiten(const Matrix& g) const;

private:
    Matrix lower_;
};

/// Inverse of a symmetric positive-definite matrix via its Cholesky factor.
[[nodiscard]] Matrix spd_inverse(const Matrix& a, std::optional<double> tol = std::nullopt);

}  // namespace srnlsd
