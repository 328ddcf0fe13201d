#include "srnlsd/shrinkage.hpp"

#include <algorithm>
#include <string>

#include "srnlsd/errors.hpp"

namespace srnlsd {

ShrinkageCoefficients ShrinkageCoefficients::none(const Matrix& s) {
    ShrinkageCoefficients c;
    c.m = trace(s) / static_cast<double>(s.rows());
    c.d2 = frobenius_norm_sq(s - c.m * Matrix::Identity(s.rows(), s.cols()));
    c.rho1 = 0.0;
    c.rho2 = 1.0;
    return c;
}

ShrinkageCoefficients lw_scalars(const SeriesMatrix& xa, const LagCovariance& s) {
    if (s.lag != 0) {
        throw DimensionError("lw_scalars: expected the lag-0 covariance, got lag " + std::to_string(s.lag));
    }
    const Matrix& sm = s.matrix;
    const Eigen::Index p = sm.rows();
    if (p < 1 || sm.cols() != p || static_cast<Eigen::Index>(xa.rows()) != p) {
        throw DimensionError("lw_scalars: series has " + std::to_string(xa.rows()) +
                             " rows but covariance is " + std::to_string(sm.rows()) + "x" +
                             std::to_string(sm.cols()));
    }
    if (xa.cols() == 0) throw DimensionError("lw_scalars: empty series");

    ShrinkageCoefficients c;
    c.m = inner_product(sm, Matrix::Identity(p, p));
    c.d2 = frobenius_norm_sq(sm - c.m * Matrix::Identity(p, p));

    const Matrix& x = xa.values();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
        double obs = 0.0;
        for (Eigen::Index k = 0; k < p; ++k) {
            const double xk = x(k, i);
            for (Eigen::Index j = 0; j < p; ++j) {
                const double diff = x(j, i) * xk - sm(j, k);
                obs += diff * diff;
            }
        }
        sum += obs / static_cast<double>(p);
    }
    const double t = static_cast<double>(x.cols());
    c.b2bar = sum / (t * t);
    c.b2 = std::min(c.d2, c.b2bar);
    c.a2 = c.d2 - c.b2;

    if (c.d2 <= kDegenerateDispersion * c.m * c.m) {
        c.degenerate = true;
        c.rho1 = c.m;
        c.rho2 = 0.0;
    } else {
        c.rho1 = (c.b2 / c.d2) * c.m;
        c.rho2 = c.a2 / c.d2;
    }
    return c;
}

ShrunkCovariance shrink_covariance(const LagCovariance& s, const ShrinkageCoefficients& coeffs) {
    if (!(coeffs.m > 0.0)) {
        throw NonpositiveMean("shrinkage target scale m = " + std::to_string(coeffs.m) +
                              " is not positive; the covariance input is corrupted or constant");
    }
    const Eigen::Index p = s.matrix.rows();
    Matrix out;
    if (coeffs.degenerate) {
        out = coeffs.m * Matrix::Identity(p, p);
    } else {
        out = coeffs.rho2 * s.matrix;
        out.diagonal().array() += coeffs.rho1;
    }
    return ShrunkCovariance{std::move(out), coeffs, s.sample_size};
}

}  // namespace srnlsd
