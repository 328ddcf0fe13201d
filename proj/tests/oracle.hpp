#pragma once

// Naive reference implementations used only by tests. Everything here works
// on nested std::vector with explicit loops and shares no code with the
// library, so agreement between the two is meaningful.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, std::vector<double>(c, 0.0)); }

inline Mat identity(std::size_t p) {
    Mat m = zeros(p, p);
    for (std::size_t i = 0; i < p; ++i) m[i][i] = 1.0;
    return m;
}

inline Mat transpose(const Mat& a) {
    Mat t = zeros(a[0].size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
    return t;
}

inline Mat multiply(const Mat& a, const Mat& b) {
    Mat c = zeros(a.size(), b[0].size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b[0].size(); ++j)
            for (std::size_t k = 0; k < b.size(); ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline double trace(const Mat& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i][i];
    return s;
}

/// Laplace expansion along the first row.
inline double determinant(const Mat& a) {
    const std::size_t n = a.size();
    if (n == 1) return a[0][0];
    double det = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        Mat minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<double> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(a[i][j]);
            minor.push_back(row);
        }
        det += ((c % 2 == 0) ? 1.0 : -1.0) * a[0][c] * determinant(minor);
    }
    return det;
}

/// adj(A) / det(A) from cofactors.
inline Mat cofactor_inverse(const Mat& a) {
    const std::size_t n = a.size();
    if (n == 1) return {{1.0 / a[0][0]}};
    const double det = determinant(a);
    Mat inv = zeros(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            Mat minor;
            for (std::size_t i = 0; i < n; ++i) {
                if (i == r) continue;
                std::vector<double> row;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != c) row.push_back(a[i][j]);
                minor.push_back(row);
            }
            const double cof = (((r + c) % 2 == 0) ? 1.0 : -1.0) * determinant(minor);
            inv[c][r] = cof / det;
        }
    }
    return inv;
}

/// x[i][t]: variable i at time t (0-based).
inline Mat demean(const Mat& x) {
    Mat out = x;
    for (auto& row : out) {
        double mean = 0.0;
        for (double v : row) mean += v;
        mean /= static_cast<double>(row.size());
        for (double& v : row) v -= mean;
    }
    return out;
}

/// Lag-h autocovariance with the literal index ranges and 1/T divisors.
inline Mat autocovariance(const Mat& x, std::size_t h) {
    const std::size_t p = x.size();
    const std::size_t T = x[0].size();
    Mat g = zeros(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            double prod = 0.0;
            for (std::size_t t = h + 1; t <= T; ++t) prod += x[i][t - 1] * x[j][t - 1 - h];
            double mean_lead = 0.0;  // (1/T) sum_{t=1..T-h} X_t
            for (std::size_t t = 1; t <= T - h; ++t) mean_lead += x[i][t - 1];
            double mean_lag = 0.0;  // (1/T) sum_{t=h+1..T} X_{t-h}
            for (std::size_t t = h + 1; t <= T; ++t) mean_lag += x[j][t - 1 - h];
            g[i][j] = prod / T - (mean_lead / T) * (mean_lag / T);
        }
    return g;
}

/// Grand-mean variant: (1/T) sum_{t=h+1..T} (X_t - xbar)(X_{t-h} - xbar)'.
inline Mat autocovariance_grand_mean(const Mat& x, std::size_t h) {
    const Mat c = demean(x);
    const std::size_t p = x.size();
    const std::size_t T = x[0].size();
    Mat g = zeros(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            double s = 0.0;
            for (std::size_t t = h; t < T; ++t) s += c[i][t] * c[j][t - h];
            g[i][j] = s / T;
        }
    return g;
}

struct Scalars {
    double m, d2, b2bar, b2, a2, rho1, rho2;
};

inline double norm_sq(const Mat& a) {
    double s = 0.0;
    for (const auto& row : a)
        for (double v : row) s += v * v;
    return s / static_cast<double>(a.size());
}

inline Scalars lw_scalars(const Mat& x, const Mat& s) {
    const std::size_t p = s.size();
    const std::size_t T = x[0].size();
    Scalars out{};
    out.m = trace(s) / p;
    Mat dev = s;
    for (std::size_t i = 0; i < p; ++i) dev[i][i] -= out.m;
    out.d2 = norm_sq(dev);
    double sum = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        Mat outer = zeros(p, p);
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = 0; j < p; ++j) outer[i][j] = x[i][t] * x[j][t] - s[i][j];
        sum += norm_sq(outer);
    }
    out.b2bar = sum / (static_cast<double>(T) * T);
    out.b2 = out.d2 < out.b2bar ? out.d2 : out.b2bar;
    out.a2 = out.d2 - out.b2;
    out.rho1 = out.b2 / out.d2 * out.m;
    out.rho2 = out.a2 / out.d2;
    return out;
}

/// T * sum_h tr(G_h W G_h' W) with W the cofactor inverse of `weight`.
inline double statistic(const Mat& x, std::size_t H, const Mat& weight) {
    const Mat w = cofactor_inverse(weight);
    double sum = 0.0;
    for (std::size_t h = 1; h <= H; ++h) {
        const Mat g = autocovariance(x, h);
        sum += trace(multiply(multiply(multiply(g, w), transpose(g)), w));
    }
    return static_cast<double>(x[0].size()) * sum;
}

inline double nlsd(const Mat& x_demeaned, std::size_t H) {
    return statistic(x_demeaned, H, autocovariance(x_demeaned, 0));
}

inline double srnlsd(const Mat& x_demeaned, std::size_t H) {
    const Mat s = autocovariance(x_demeaned, 0);
    const Scalars c = lw_scalars(x_demeaned, s);
    Mat shrunk = s;
    for (auto& row : shrunk)
        for (double& v : row) v *= c.rho2;
    for (std::size_t i = 0; i < s.size(); ++i) shrunk[i][i] += c.rho1;
    return statistic(x_demeaned, H, shrunk);
}

/// Composite Simpson rule on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// chi^2(k) density.
inline double chi_square_pdf(double x, double k) {
    if (x <= 0.0) return 0.0;
    return std::exp((k / 2.0 - 1.0) * std::log(x) - x / 2.0 - (k / 2.0) * std::log(2.0) - std::lgamma(k / 2.0));
}

inline Mat random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Mat m = zeros(rows, cols);
    for (auto& row : m)
        for (double& v : row) v = n01(rng);
    return m;
}

}  // namespace oracle
