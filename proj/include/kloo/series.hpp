#pragma once

// Truncated power series with exact rational coefficients.

#include <vector>

#include "kloo/arith.hpp"

namespace kloo::series {

using Coeffs = std::vector<Rational>;

/// Coefficients 0..order of a + b.
Coeffs add(const Coeffs& a, const Coeffs& b, int order);
Coeffs scale(const Coeffs& a, const Rational& factor);
Coeffs multiply(const Coeffs& a, const Coeffs& b, int order);

/// Power series of num / den up to t^order; den[0] must be nonzero.
Coeffs divide(const Coeffs& num, const Coeffs& den, int order);

/// Polynomial (1 - c t^k).
Coeffs one_minus(const Rational& c, int k);

/// Pads or truncates to exactly order + 1 coefficients.
Coeffs resize(Coeffs a, int order);

} // namespace kloo::series
