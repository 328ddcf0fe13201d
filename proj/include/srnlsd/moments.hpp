#pragma once

#include <cstddef>
#include <vector>

#include "srnlsd/linalg.hpp"
#include "srnlsd/transforms.hpp"

namespace srnlsd {

/**
 * How the sample-mean correction of the lag-h autocovariance is formed.
 *
 * AsWritten: (1/T) sum_{t=h+1..T} X_t X_{t-h}' - a a', where both mean factors
 *   are (1/T) sum_{t=1..T-h} X_t (the second range, re-indexed as X_{t-h} over
 *   t = h+1..T, covers the same observations as the first).
 * GrandMean: (1/T) sum_{t=h+1..T} (X_t - xbar)(X_{t-h} - xbar)' with the
 *   full-sample mean xbar.
 *
 * Both use the 1/T divisor at every lag and agree at lag 0.
 */
enum class MeanCorrection { AsWritten, GrandMean };

struct LagCovariance {
    std::size_t lag = 0;
    std::size_t sample_size = 0;
    Matrix matrix;

    [[nodiscard]] std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

/// Sample autocovariance at lag h. Throws LagTooLarge if h >= T.
[[nodiscard]] LagCovariance autocovariance(const SeriesMatrix& xa, std::size_t lag,
                                           MeanCorrection mode = MeanCorrection::AsWritten);

/// Autocovariances for lags 0..max_lag; element h equals autocovariance(xa, h).
[[nodiscard]] std::vector<LagCovariance> autocovariance_sequence(
    const SeriesMatrix& xa, std::size_t max_lag, MeanCorrection mode = MeanCorrection::AsWritten);

}  // namespace srnlsd
