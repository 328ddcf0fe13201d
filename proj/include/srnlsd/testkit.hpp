#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "srnlsd/moments.hpp"
#include "srnlsd/shrinkage.hpp"
#include "srnlsd/transforms.hpp"

namespace srnlsd {

enum class ShrinkageMode { LedoitWolf, None };

[[nodiscard]] std::string_view to_string(ShrinkageMode mode);
[[nodiscard]] std::string_view to_string(MeanCorrection mode);
/// Accepts "lw" / "none".
[[nodiscard]] ShrinkageMode parse_shrinkage_mode(std::string_view text);
/// Accepts "as-written" / "grand-mean".
[[nodiscard]] MeanCorrection parse_mean_correction(std::string_view text);

struct TestConfig {
    std::size_t max_lag = 1;
    TransformSpec transforms = TransformSpec::powers(2);
    ShrinkageMode shrinkage = ShrinkageMode::LedoitWolf;
    double alpha = 0.05;
    MeanCorrection mean_correction = MeanCorrection::AsWritten;

    /// Throws DomainError for max_lag == 0 or alpha outside (0, 1).
    void validate() const;
};

/// T * sum_h tr R^2(h) together with the individual traces tr R^2(h), h = 1..H.
struct PortmanteauStatistic {
    double statistic = 0.0;
    std::vector<double> per_lag_traces;
};

/**
 * Portmanteau statistic weighted by the inverse sample covariance:
 * T sum_{h=1..H} tr[G(h) G(0)^{-1} G(h)' G(0)^{-1}].
 *
 * `gammas` holds lags 0..H in order. Throws NotPositiveDefinite, with a
 * message recommending shrinkage, when G(0) cannot be factorized.
 */
[[nodiscard]] PortmanteauStatistic nlsd_statistic(std::span<const LagCovariance> gammas,
                                                  std::size_t sample_size);

/// Same statistic with the shrunk lag-0 matrix in place of G(0).
[[nodiscard]] PortmanteauStatistic srnlsd_statistic(std::span<const LagCovariance> gammas,
                                                    const ShrunkCovariance& shrunk0,
                                                    std::size_t sample_size);

/// Degrees of freedom p^2 H of the null chi-square limit.
[[nodiscard]] std::size_t portmanteau_dof(std::size_t dim, std::size_t max_lag);

struct TestReport {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    double critical_value = 0.0;
    bool reject = false;
    double rho1 = 0.0;
    double rho2 = 1.0;
    bool shrinkage_degenerate = false;
    std::vector<double> per_lag_traces;

    std::size_t n_series = 0;
    std::size_t n_transforms = 0;
    std::size_t sample_size = 0;
    TestConfig config;
    std::vector<std::string> warnings;
};

/// Ratio p/T above which a report carries a dimension warning.
inline constexpr double kDimensionWarningRatio = 0.1;

/**
 * Full pipeline on a raw N x T series: transforms, demeaning,
 * autocovariances, optional shrinkage, statistic and chi^2(p^2 H) decision.
 * Errors keep their type and gain a stage prefix in the message.
 */
[[nodiscard]] TestReport run_test(const SeriesMatrix& raw, const TestConfig& config);

/// JSON object with alphabetically ordered keys.
[[nodiscard]] nlohmann::json to_json(const TestReport& report);
[[nodiscard]] std::string tsv_header();
[[nodiscard]] std::string to_tsv(const TestReport& report);

}  // namespace srnlsd
