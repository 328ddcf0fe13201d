#include "srnlsd/testkit.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

#include "srnlsd/chi_square.hpp"
#include "srnlsd/errors.hpp"

namespace srnlsd {

std::string_view to_string(ShrinkageMode mode) {
    return mode == ShrinkageMode::LedoitWolf ? "lw" : "none";
}

std::string_view to_string(MeanCorrection mode) {
    return mode == MeanCorrection::AsWritten ? "as-written" : "grand-mean";
}

ShrinkageMode parse_shrinkage_mode(std::string_view text) {
    if (text == "lw") return ShrinkageMode::LedoitWolf;
    if (text == "none") return ShrinkageMode::None;
    throw ParseError("unknown shrinkage mode '" + std::string(text) + "' (expected lw or none)");
}

MeanCorrection parse_mean_correction(std::string_view text) {
    if (text == "as-written") return MeanCorrection::AsWritten;
    if (text == "grand-mean") return MeanCorrection::GrandMean;
    throw ParseError("unknown mean correction '" + std::string(text) +
                     "' (expected as-written or grand-mean)");
}

void TestConfig::validate() const {
    if (max_lag < 1) throw DomainError("the number of lags H must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

namespace {

void require_lag_sequence(std::span<const LagCovariance> gammas) {
    if (gammas.size() < 2) {
        throw DimensionError("portmanteau statistic needs lags 0..H with H >= 1");
    }
    const std::size_t p = gammas.front().dim();
    for (std::size_t h = 0; h < gammas.size(); ++h) {
        if (gammas[h].lag != h) {
            throw DimensionError("autocovariances must be ordered by lag starting at 0");
        }
        if (gammas[h].dim() != p || gammas[h].matrix.cols() != gammas[h].matrix.rows()) {
            throw DimensionError("autocovariances have inconsistent dimensions");
        }
    }
}

PortmanteauStatistic weighted_statistic(std::span<const LagCovariance> gammas, const SpdFactor& weight,
                                        std::size_t sample_size) {
    PortmanteauStatistic out;
    out.per_lag_traces.reserve(gammas.size() - 1);
    double sum = 0.0;
    for (std::size_t h = 1; h < gammas.size(); ++h) {
        // tr(G W G' W) with W = (LL')^{-1} is the squared entry sum of L^{-1} G L^{-T}.
        const double tr = weight.whiten(gammas[h].matrix).squaredNorm();
        out.per_lag_traces.push_back(tr);
        sum += tr;
    }
    out.statistic = static_cast<double>(sample_size) * sum;
    return out;
}

template <class F>
auto staged(std::string_view stage, F&& fn) {
    const std::string prefix = std::string(stage) + ": ";
    try {
        return fn();
    } catch (const NotPositiveDefinite& e) {
        throw NotPositiveDefinite(prefix + e.what(), e.pivot_index(), e.pivot());
    } catch (const DomainError& e) {
        throw DomainError(prefix + e.what());
    } catch (const LagTooLarge& e) {
        throw LagTooLarge(prefix + e.what());
    } catch (const DimensionError& e) {
        throw DimensionError(prefix + e.what());
    } catch (const NonpositiveMean& e) {
        throw NonpositiveMean(prefix + e.what());
    }
}

}  // namespace

PortmanteauStatistic nlsd_statistic(std::span<const LagCovariance> gammas, std::size_t sample_size) {
    require_lag_sequence(gammas);
    try {
        const SpdFactor weight(gammas.front().matrix);
        return weighted_statistic(gammas, weight, sample_size);
    } catch (const NotPositiveDefinite& e) {
        throw NotPositiveDefinite(std::string(e.what()) +
                                      "; the sample covariance of the transformed series is singular "
                                      "or ill-conditioned, use shrinkage (--shrinkage lw)",
                                  e.pivot_index(), e.pivot());
    }
}

PortmanteauStatistic srnlsd_statistic(std::span<const LagCovariance> gammas, const ShrunkCovariance& shrunk0,
                                      std::size_t sample_size) {
    require_lag_sequence(gammas);
    if (shrunk0.matrix.rows() != gammas.front().matrix.rows()) {
        throw DimensionError("shrunk covariance dimension does not match the autocovariances");
    }
    const SpdFactor weight(shrunk0.matrix);
    return weighted_statistic(gammas, weight, sample_size);
}

std::size_t portmanteau_dof(std::size_t dim, std::size_t max_lag) { return dim * dim * max_lag; }

TestReport run_test(const SeriesMatrix& raw, const TestConfig& config) {
    config.validate();
    TestReport report;
    report.config = config;
    report.n_series = raw.rows();
    report.n_transforms = config.transforms.size();
    report.sample_size = raw.cols();

    if (raw.rows() == 0 || raw.cols() == 0) {
        throw DimensionError("input: the series is empty");
    }
    if (raw.cols() <= config.max_lag) {
        throw LagTooLarge("input: T=" + std::to_string(raw.cols()) + " must exceed H=" +
                          std::to_string(config.max_lag));
    }

    const SeriesMatrix xa =
        staged("transforms", [&] { return demean(apply_transforms(raw, config.transforms)); });
    const std::size_t p = xa.rows();
    const std::size_t t = xa.cols();
    if (static_cast<double>(p) / static_cast<double>(t) > kDimensionWarningRatio) {
        std::ostringstream os;
        os << "dimension p=" << p << " is large relative to T=" << t << " (p/T=" << static_cast<double>(p) / t
           << " > " << kDimensionWarningRatio << "); the chi-square limit assumes p/T -> 0";
        report.warnings.push_back(os.str());
    }

    const auto gammas = staged("moments", [&] {
        return autocovariance_sequence(xa, config.max_lag, config.mean_correction);
    });

    PortmanteauStatistic stat;
    if (config.shrinkage == ShrinkageMode::LedoitWolf) {
        const auto shrunk = staged("shrinkage", [&] {
            return shrink_covariance(gammas.front(), lw_scalars(xa, gammas.front()));
        });
        report.rho1 = shrunk.coefficients.rho1;
        report.rho2 = shrunk.coefficients.rho2;
        report.shrinkage_degenerate = shrunk.coefficients.degenerate;
        if (shrunk.coefficients.degenerate) {
            report.warnings.push_back("sample covariance is a multiple of the identity; shrinkage weights fall back to m*I");
        }
        stat = staged("statistic", [&] { return srnlsd_statistic(gammas, shrunk, t); });
    } else {
        stat = staged("statistic", [&] { return nlsd_statistic(gammas, t); });
    }

    report.statistic = stat.statistic;
    report.per_lag_traces = std::move(stat.per_lag_traces);
    report.dof = portmanteau_dof(p, config.max_lag);
    const auto dof = static_cast<double>(report.dof);
    report.p_value = chi_square_sf(report.statistic, dof);
    report.critical_value = chi_square_quantile(1.0 - config.alpha, dof);
    report.reject = report.statistic > report.critical_value;
    return report;
}

nlohmann::json to_json(const TestReport& report) {
    nlohmann::json config = {
        {"alpha", report.config.alpha},
        {"lags", report.config.max_lag},
        {"mean_correction", to_string(report.config.mean_correction)},
        {"shrinkage", to_string(report.config.shrinkage)},
        {"transforms", report.config.transforms.to_string()},
    };
    return nlohmann::json{
        {"config", std::move(config)},
        {"critical_value", report.critical_value},
        {"dof", report.dof},
        {"n_series", report.n_series},
        {"n_transforms", report.n_transforms},
        {"p_value", report.p_value},
        {"per_lag_traces", report.per_lag_traces},
        {"reject", report.reject},
        {"rho1", report.rho1},
        {"rho2", report.rho2},
        {"sample_size", report.sample_size},
        {"shrinkage_degenerate", report.shrinkage_degenerate},
        {"statistic", report.statistic},
        {"warnings", report.warnings},
    };
}

std::string tsv_header() {
    return "statistic\tdof\tp_value\tcritical_value\treject\trho1\trho2\tT\tN\tK\tlags\tshrinkage\tper_lag_traces";
}

namespace {

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string to_tsv(const TestReport& report) {
    std::ostringstream os;
    os << shortest(report.statistic) << '\t' << report.dof << '\t' << shortest(report.p_value) << '\t'
       << shortest(report.critical_value) << '\t' << (report.reject ? 1 : 0) << '\t' << shortest(report.rho1)
       << '\t' << shortest(report.rho2) << '\t' << report.sample_size << '\t' << report.n_series << '\t'
       << report.n_transforms << '\t' << report.config.max_lag << '\t' << to_string(report.config.shrinkage)
       << '\t';
    for (std::size_t i = 0; i < report.per_lag_traces.size(); ++i) {
        if (i > 0) os << ',';
        os << shortest(report.per_lag_traces[i]);
    }
    return os.str();
}

}  // namespace srnlsd
