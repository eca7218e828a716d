#pragma once

#include <cmath>

namespace haggle {

inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438187;

/// Standard normal density.
inline double normalPdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

/// Standard normal CDF via erfc; accurate over the whole range.
inline double normalCdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

/// Upper tail P(Z >= x), computed through erfc directly so large positive x
/// does not cancel.
inline double normalTail(double x) { return 0.5 * std::erfc(x / kSqrt2); }

/// Inverse Mills ratio phi(a) / (1 - Phi(a)): the mean of a standard normal
/// truncated below at a. Tends to 0 as a -> -inf and to a as a -> +inf.
inline double inverseMills(double a) {
    if (std::isinf(a)) return a < 0 ? 0.0 : a;
    return normalPdf(a) / normalTail(a);
}

}  // namespace haggle
