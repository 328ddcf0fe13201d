#pragma once

#include <cstddef>

#include "srnlsd/linalg.hpp"
#include "srnlsd/moments.hpp"
#include "srnlsd/transforms.hpp"

namespace srnlsd {

/**
 * Sample scalars of the Ledoit-Wolf linear shrinkage toward m*I, all in the
 * 1/p-normalized norm:
 *
 *   m     = <S, I>
 *   d2    = ||S - m I||^2
 *   b2bar = (1/T^2) sum_i ||x_i x_i' - S||^2
 *   b2    = min(d2, b2bar)
 *   a2    = d2 - b2
 *   rho1  = (b2 / d2) m,   rho2 = a2 / d2
 *
 * When d2 is negligible against m^2 the ratios are 0/0; `degenerate` is set
 * and the weights become rho1 = m, rho2 = 0, so the shrunk matrix is m I.
 */
struct ShrinkageCoefficients {
    double m = 0.0;
    double d2 = 0.0;
    double b2bar = 0.0;
    double b2 = 0.0;
    double a2 = 0.0;
    double rho1 = 0.0;
    double rho2 = 1.0;
    bool degenerate = false;

    /// Weights that leave S untouched (rho1 = 0, rho2 = 1).
    [[nodiscard]] static ShrinkageCoefficients none(const Matrix& s);
};

struct ShrunkCovariance {
    Matrix matrix;
    ShrinkageCoefficients coefficients;
    std::size_t source_sample_size = 0;
};

/// d2 <= kDegenerateDispersion * m^2 selects the degenerate branch.
inline constexpr double kDegenerateDispersion = 1e-14;

/// `xa` must be the demeaned series that produced the lag-0 matrix `s`.
[[nodiscard]] ShrinkageCoefficients lw_scalars(const SeriesMatrix& xa, const LagCovariance& s);

/// rho1 I + rho2 S, or m I in the degenerate branch. Throws NonpositiveMean if m <= 0.
[[nodiscard]] ShrunkCovariance shrink_covariance(const LagCovariance& s, const ShrinkageCoefficients& coeffs);

}  // namespace srnlsd
