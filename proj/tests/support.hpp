#pragma once

#include <algorithm>
#include <cmath>

#include "oracle.hpp"
#include "srnlsd/linalg.hpp"

namespace test_support {

inline srnlsd::Matrix to_eigen(const oracle::Mat& m) {
    srnlsd::Matrix out(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m[0].size()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[0].size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
    return out;
}

inline double max_abs_diff(const srnlsd::Matrix& a, const oracle::Mat& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b[0].size(); ++j)
            d = std::max(d, std::abs(a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - b[i][j]));
    return d;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace test_support
