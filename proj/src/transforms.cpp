#include "srnlsd/transforms.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

#include "srnlsd/errors.hpp"

namespace srnlsd {

SeriesMatrix::SeriesMatrix(Matrix values, bool demeaned) : values_(std::move(values)), demeaned_(demeaned) {
    if (!values_.allFinite()) {
        throw DomainError("series contains NaN or infinite entries");
    }
}

Transform Transform::power(int exponent) {
    if (exponent < 1) {
        throw DomainError("power exponent must be a positive integer, got " + std::to_string(exponent));
    }
    return {Kind::Power, static_cast<double>(exponent)};
}

Transform Transform::signed_power(double exponent) {
    if (!(exponent > 0.0) || !std::isfinite(exponent)) {
        throw DomainError("signed power exponent must be positive and finite");
    }
    return {Kind::SignedPower, exponent};
}

double Transform::apply(double x) const {
    switch (kind) {
        case Kind::Power: {
            const int e = static_cast<int>(exponent);
            double out = x;
            for (int i = 1; i < e; ++i) out *= x;
            return out;
        }
        case Kind::Abs:
            return std::abs(x);
        case Kind::Log:
            if (!(x > 0.0)) {
                throw DomainError("log transform requires positive entries, got " + std::to_string(x));
            }
            return std::log(x);
        case Kind::SignedPower:
            return std::copysign(std::pow(std::abs(x), exponent), x);
    }
    return x;
}

TransformSpec::TransformSpec(std::vector<Transform> transforms) : transforms_(std::move(transforms)) {
    if (transforms_.empty()) {
        throw DomainError("transform set must contain at least one transform");
    }
    if (!transforms_.front().is_identity()) {
        throw DomainError("transform set must start with pow:1 (the series itself)");
    }
}

TransformSpec TransformSpec::powers(int k) {
    if (k < 1) throw DomainError("number of powers must be >= 1");
    std::vector<Transform> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int e = 1; e <= k; ++e) out.push_back(Transform::power(e));
    return TransformSpec(std::move(out));
}

namespace {

std::string lowered(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    return out;
}

double parse_number(const std::string& token, const std::string& arg) {
    double value = 0.0;
    const auto* first = arg.data();
    const auto* last = arg.data() + arg.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || arg.empty()) {
        throw ParseError("invalid exponent in transform '" + token + "'");
    }
    return value;
}

}  // namespace

TransformSpec TransformSpec::parse(std::string_view text) {
    const std::string norm = lowered(text);
    std::vector<Transform> out;
    std::size_t start = 0;
    while (start <= norm.size()) {
        const std::size_t comma = std::min(norm.find(',', start), norm.size());
        const std::string token = norm.substr(start, comma - start);
        start = comma + 1;
        if (token.empty()) throw ParseError("empty entry in transform list '" + std::string(text) + "'");

        const auto colon = token.find(':');
        const std::string name = token.substr(0, colon);
        const std::string arg = colon == std::string::npos ? std::string{} : token.substr(colon + 1);
        try {
            if (name == "pow") {
                const double e = parse_number(token, arg);
                if (e != std::floor(e) || e < 1.0 || e > 1000.0) {
                    throw ParseError("pow exponent must be a positive integer in '" + token + "'");
                }
                out.push_back(Transform::power(static_cast<int>(e)));
            } else if (name == "spow") {
                out.push_back(Transform::signed_power(parse_number(token, arg)));
            } else if (name == "abs" && arg.empty() && colon == std::string::npos) {
                out.push_back(Transform::abs());
            } else if (name == "log" && arg.empty() && colon == std::string::npos) {
                out.push_back(Transform::log());
            } else {
                throw ParseError("unknown transform '" + token + "' (expected pow:<n>, spow:<x>, abs, log)");
            }
        } catch (const DomainError& e) {
            throw ParseError(std::string(e.what()) + " in '" + token + "'");
        }
    }
    try {
        return TransformSpec(std::move(out));
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
}

std::string TransformSpec::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < transforms_.size(); ++i) {
        if (i > 0) os << ',';
        const auto& t = transforms_[i];
        switch (t.kind) {
            case Transform::Kind::Power: os << "pow:" << static_cast<int>(t.exponent); break;
            case Transform::Kind::Abs: os << "abs"; break;
            case Transform::Kind::Log: os << "log"; break;
            case Transform::Kind::SignedPower: os << "spow:" << t.exponent; break;
        }
    }
    return os.str();
}

SeriesMatrix apply_transforms(const SeriesMatrix& x, const TransformSpec& spec) {
    const Eigen::Index n = x.values().rows();
    const Eigen::Index t = x.values().cols();
    const auto& kinds = spec.transforms();
    Matrix out(n * static_cast<Eigen::Index>(kinds.size()), t);
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        auto block = out.middleRows(static_cast<Eigen::Index>(k) * n, n);
        if (kinds[k].is_identity()) {
            block = x.values();
            continue;
        }
        for (Eigen::Index col = 0; col < t; ++col) {
            for (Eigen::Index row = 0; row < n; ++row) {
                block(row, col) = kinds[k].apply(x.values()(row, col));
            }
        }
    }
    if (!out.allFinite()) {
        throw DomainError("transformed series overflowed to a non-finite value");
    }
    return SeriesMatrix(std::move(out), false);
}

SeriesMatrix demean(const SeriesMatrix& x) {
    Matrix centered = x.values();
    if (centered.cols() > 0) {
        const Vector means = centered.rowwise().mean();
        centered.colwise() -= means;
    }
    return SeriesMatrix(std::move(centered), true);
}

}  // namespace srnlsd
