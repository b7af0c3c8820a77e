#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "relprop/errors.hpp"

namespace relprop {

// Absolute tolerance for all floating comparisons in the reliability algebra.
inline constexpr double kTolerance = 1e-9;

// A reliability value clamped to [-1, 1].
// 1 is maximal reliability, -1 is maximal uncertainty.
class Scalar {
public:
    Scalar() = default;

    Scalar(double x) {
        if (!std::isfinite(x))
            throw Error(ErrorCode::InvalidNumeric, "reliability must be finite");
        v_ = x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x);
    }

    double value() const { return v_; }

    friend bool operator==(Scalar a, Scalar b) { return a.v_ == b.v_; }
    friend bool operator<(Scalar a, Scalar b) { return a.v_ < b.v_; }

private:
    double v_ = 0.0;
};

// A reliability with named dimensions; dimension names are case-sensitive
// opaque tokens. The empty map is a legal "clean slate" value.
using Dimensioned = std::map<std::string, Scalar>;

inline Scalar clamp(double x) { return Scalar(x); }

Scalar and_combine(Scalar r1, Scalar r2, double alpha);
Scalar or_combine(Scalar r1, Scalar r2);

// pairs: (weight, value); weights must be non-negative and sum to 1.
Scalar weighted_mean(const std::vector<std::pair<double, Scalar>>& pairs);

// Arithmetic mean over all dimensions; undefined (errors) on an empty map.
Scalar average(const Dimensioned& rho);

// Returns (weight of first argument, weight of second argument); the more
// reliable side gets d = 1/2 + 1/4 * |av difference|, the other 1 - d.
std::pair<double, double> dominance_weights(const Dimensioned& rho, const Dimensioned& rho2);

// Extends both maps to the union of their dimension sets, filling gaps
// with the default value.
std::pair<Dimensioned, Dimensioned> align_dimensions(const Dimensioned& rho,
                                                     const Dimensioned& rho2,
                                                     Scalar dimension_default);

using ScalarBinaryOp = std::function<Scalar(Scalar, Scalar)>;

Dimensioned lift_elementwise(const ScalarBinaryOp& op, const Dimensioned& rho,
                             const Dimensioned& rho2, Scalar dimension_default);

}  // namespace relprop
