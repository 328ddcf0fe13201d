#include "srnlsd/moments.hpp"

#include <string>

#include "srnlsd/errors.hpp"

namespace srnlsd {

LagCovariance autocovariance(const SeriesMatrix& xa, std::size_t lag, MeanCorrection mode) {
    const std::size_t t_size = xa.cols();
    if (lag >= t_size) {
        throw LagTooLarge("lag " + std::to_string(lag) + " requires more than " + std::to_string(lag) +
                          " observations, got T=" + std::to_string(t_size));
    }
    const auto p = static_cast<Eigen::Index>(xa.rows());
    const auto h = static_cast<Eigen::Index>(lag);
    const auto span = static_cast<Eigen::Index>(t_size - lag);
    const double inv_t = 1.0 / static_cast<double>(t_size);

    Matrix centered_storage;
    const Matrix* data = &xa.values();
    if (mode == MeanCorrection::GrandMean) {
        centered_storage = xa.values();
        centered_storage.colwise() -= xa.values().rowwise().mean();
        data = &centered_storage;
    }
    const auto leading = data->rightCols(span);   // X_t,     t = h+1..T
    const auto trailing = data->leftCols(span);   // X_{t-h}, t = h+1..T

    Matrix gamma(p, p);
    if (h == 0) {
        gamma.setZero();
        gamma.selfadjointView<Eigen::Lower>().rankUpdate(leading, inv_t);
        gamma.triangularView<Eigen::StrictlyUpper>() = gamma.transpose();
    } else {
        gamma.noalias() = inv_t * (leading * trailing.transpose());
    }

    if (mode == MeanCorrection::AsWritten) {
        const Vector a = inv_t * trailing.rowwise().sum();
        gamma.noalias() -= a * a.transpose();
    }
    return LagCovariance{lag, t_size, std::move(gamma)};
}

std::vector<LagCovariance> autocovariance_sequence(const SeriesMatrix& xa, std::size_t max_lag,
                                                   MeanCorrection mode) {
    if (max_lag >= xa.cols()) {
        throw LagTooLarge("maximum lag " + std::to_string(max_lag) + " must be below T=" +
                          std::to_string(xa.cols()));
    }
    std::vector<LagCovariance> out;
    out.reserve(max_lag + 1);
    for (std::size_t h = 0; h <= max_lag; ++h) out.push_back(autocovariance(xa, h, mode));
    return out;
}

}  // namespace srnlsd
