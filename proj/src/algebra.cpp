#include "relprop/algebra.hpp"

#include <algorithm>
#include <cstdlib>

namespace relprop {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidNumeric: return "InvalidNumeric";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::InvalidWeights: return "InvalidWeights";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::EmptyDimensions: return "EmptyDimensions";
        case ErrorCode::UnknownAgent: return "UnknownAgent";
        case ErrorCode::UnknownEntity: return "UnknownEntity";
        case ErrorCode::UnknownStatement: return "UnknownStatement";
        case ErrorCode::NotAStatement: return "NotAStatement";
        case ErrorCode::NotComparable: return "NotComparable";
        case ErrorCode::NotEnoughMessages: return "NotEnoughMessages";
        case ErrorCode::InconsistentChain: return "InconsistentChain";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ExpectFailed: return "ExpectFailed";
    }
    return "Error";
}

Scalar and_combine(Scalar r1, Scalar r2, double alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha > 1.0)
        throw Error(ErrorCode::InvalidParameter, "alpha must lie in [0,1]");
    return clamp(alpha * std::min(r1.value(), r2.value()));
}

Scalar or_combine(Scalar r1, Scalar r2) {
    return std::max(r1, r2);
}

Scalar weighted_mean(const std::vector<std::pair<double, Scalar>>& pairs) {
    if (pairs.empty())
        throw Error(ErrorCode::EmptyInput, "weighted_mean of nothing");
    double sum = 0.0;
    double acc = 0.0;
    for (const auto& [w, v] : pairs) {
        if (!std::isfinite(w) || w < 0.0)
            throw Error(ErrorCode::InvalidWeights, "weights must be non-negative");
        sum += w;
        acc += w * v.value();
    }
    if (std::abs(sum - 1.0) > kTolerance)
        throw Error(ErrorCode::InvalidWeights, "weights must sum to 1");
    return clamp(acc);
}

Scalar average(const Dimensioned& rho) {
    if (rho.empty())
        throw Error(ErrorCode::EmptyDimensions, "average of an empty dimension map");
    double acc = 0.0;
    for (const auto& [dim, v] : rho) acc += v.value();
    return clamp(acc / static_cast<double>(rho.size()));
}

std::pair<double, double> dominance_weights(const Dimensioned& rho, const Dimensioned& rho2) {
    const double a = average(rho).value();
    const double b = average(rho2).value();
    if (a >= b) {
        const double d = 0.5 + 0.25 * (a - b);
        return {d, 1.0 - d};
    }
    const double d = 0.5 + 0.25 * (b - a);
    return {1.0 - d, d};
}

std::pair<Dimensioned, Dimensioned> align_dimensions(const Dimensioned& rho,
                                                     const Dimensioned& rho2,
                                                     Scalar dimension_default) {
    Dimensioned a = rho;
    Dimensioned b = rho2;
    for (const auto& [dim, v] : rho) b.emplace(dim, dimension_default);
    for (const auto& [dim, v] : rho2) a.emplace(dim, dimension_default);
    return {std::move(a), std::move(b)};
}

Dimensioned lift_elementwise(const ScalarBinaryOp& op, const Dimensioned& rho,
                             const Dimensioned& rho2, Scalar dimension_default) {
    auto [a, b] = align_dimensions(rho, rho2, dimension_default);
    Dimensioned out;
    for (const auto& [dim, v] : a) out.emplace(dim, op(v, b.at(dim)));
    return out;
}

}  // namespace relprop
