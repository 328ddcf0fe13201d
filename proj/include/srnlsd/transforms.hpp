#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "srnlsd/linalg.hpp"

namespace srnlsd {

/**
 * Column-per-observation series: rows are variables, columns are time.
 * Raw data are N x T; the augmented process is (N*K) x T.
 */
class SeriesMatrix {
public:
    SeriesMatrix() = default;

    /// Throws DomainError if any entry is NaN or infinite.
    explicit SeriesMatrix(Matrix values, bool demeaned = false);

    [[nodiscard]] std::size_t rows() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    [[nodiscard]] std::size_t cols() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    [[nodiscard]] const Matrix& values() const noexcept { return values_; }
    [[nodiscard]] bool demeaned() const noexcept { return demeaned_; }

private:
    Matrix values_;
    bool demeaned_ = false;
};

struct Transform {
    enum class Kind { Power, Abs, Log, SignedPower };

    Kind kind = Kind::Power;
    /// Integer power for Power; any positive real for SignedPower; unused otherwise.
    double exponent = 1.0;

    [[nodiscard]] static Transform power(int exponent);
    [[nodiscard]] static Transform abs() { return {Kind::Abs, 1.0}; }
    [[nodiscard]] static Transform log() { return {Kind::Log, 1.0}; }
    /// sign(x) |x|^e. Not one of the classical choices; offered for heavy-tailed data.
    [[nodiscard]] static Transform signed_power(double exponent);

    [[nodiscard]] bool is_identity() const noexcept { return kind == Kind::Power && exponent == 1.0; }
    [[nodiscard]] double apply(double x) const;

    friend bool operator==(const Transform&, const Transform&) = default;
};

/**
 * Ordered list a_1..a_K of scalar transforms. The first entry is always the
 * identity so that the augmented process keeps the linear dependence.
 */
class TransformSpec {
public:
    /// Throws DomainError if the list is empty or does not start with pow:1.
    explicit TransformSpec(std::vector<Transform> transforms);

    /// Powers 1..k, the canonical set for the simulation experiments.
    [[nodiscard]] static TransformSpec powers(int k);

    /// Parses "pow:1,pow:2,abs,log,spow:1.5" (comma-separated, case-insensitive).
    [[nodiscard]] static TransformSpec parse(std::string_view text);

    [[nodiscard]] std::size_t size() const noexcept { return transforms_.size(); }
    [[nodiscard]] const std::vector<Transform>& transforms() const noexcept { return transforms_; }
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const TransformSpec&, const TransformSpec&) = default;

private:
    std::vector<Transform> transforms_;
};

/// Stacks a_k(X) for k = 1..K into an (N*K) x T matrix; block k holds rows (k-1)N .. kN-1.
[[nodiscard]] SeriesMatrix apply_transforms(const SeriesMatrix& x, const TransformSpec& spec);

/// Subtracts each row's full-sample mean.
[[nodiscard]] SeriesMatrix demean(const SeriesMatrix& x);

}  // namespace srnlsd
