#include "srnlsd/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "srnlsd/errors.hpp"

namespace srnlsd {

namespace {

void require_square(const Matrix& a, const char* who) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw DimensionError(std::string(who) + ": expected a nonempty square matrix, got " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

}  // namespace

double trace(const Matrix& a) {
    require_square(a, "trace");
    return a.trace();
}

double frobenius_norm_sq(const Matrix& a) {
    require_square(a, "frobenius_norm_sq");
    return a.squaredNorm() / static_cast<double>(a.rows());
}

double inner_product(const Matrix& a1, const Matrix& a2) {
    require_square(a1, "inner_product");
    require_square(a2, "inner_product");
    if (a1.rows() != a2.rows()) {
        throw DimensionError("inner_product: dimension mismatch " + std::to_string(a1.rows()) +
                             " vs " + std::to_string(a2.rows()));
    }
    // tr(A1 A2') is the elementwise product sum.
    return a1.cwiseProduct(a2).sum() / static_cast<double>(a1.rows());
}

bool is_symmetric(const Matrix& a, double rel_tol) {
    if (a.rows() != a.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            const double bound = rel_tol * std::max(1.0, std::abs(a(i, j)));
            if (!(std::abs(a(i, j) - a(j, i)) <= bound)) return false;
        }
    }
    return true;
}

double default_pivot_tolerance(const Matrix& a) {
    require_square(a, "default_pivot_tolerance");
    return 1e-12 * std::max(0.0, a.diagonal().maxCoeff());
}

SpdFactor::SpdFactor(const Matrix& a, std::optional<double> tol) {
    require_square(a, "SpdFactor");
    if (!is_symmetric(a)) {
        throw DimensionError("SpdFactor: matrix is not symmetric");
    }
    const double pivot_tol = tol.value_or(default_pivot_tolerance(a));
    const Eigen::Index n = a.rows();
    lower_ = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = a(j, j) - lower_.row(j).head(j).squaredNorm();
        if (!(pivot > pivot_tol)) {
            throw NotPositiveDefinite("matrix is not positive definite: pivot " + std::to_string(j) +
                                          " is " + std::to_string(pivot) + " (tolerance " +
                                          std::to_string(pivot_tol) + ")",
                                      static_cast<std::size_t>(j), pivot);
        }
        const double diag = std::sqrt(pivot);
        lower_(j, j) = diag;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            lower_(i, j) = (a(i, j) - lower_.row(i).head(j).dot(lower_.row(j).head(j))) / diag;
        }
    }
}

Vector SpdFactor::pivots() const { return lower_.diagonal().cwiseAbs2(); }

Matrix SpdFactor::solve(const Matrix& b) const {
    if (b.rows() != lower_.rows()) {
        throw DimensionError("SpdFactor::solve: right-hand side has " + std::to_string(b.rows()) +
                             " rows, expected " + std::to_string(lower_.rows()));
    }
    const auto l = lower_.triangularView<Eigen::Lower>();
    Matrix y = l.solve(b);
    return l.transpose().solve(y);
}

Matrix SpdFactor::inverse() const {
    Matrix inv = solve(Matrix::Identity(lower_.rows(), lower_.cols()));
    // Symmetrize away rounding asymmetry.
    return 0.5 * (inv + inv.transpose());
}

Matrix SpdFactor::whiten(const Matrix& g) const {
    if (g.rows() != lower_.rows() || g.cols() != lower_.cols()) {
        throw DimensionError("SpdFactor::whiten: dimension mismatch");
    }
    const auto l = lower_.triangularView<Eigen::Lower>();
    Matrix left = l.solve(g);  // L^{-1} G
    // (L^{-1} G) L^{-T} = (L^{-1} (L^{-1} G)')'
    Matrix right = l.solve(left.transpose());
    return right.transpose();
}

Matrix spd_inverse(const Matrix& a, std::optional<double> tol) { return SpdFactor(a, tol).inverse(); }

}  // namespace srnlsd
