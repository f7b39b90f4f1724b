#include "kloo/series.hpp"

#include <stdexcept>

namespace kloo::series {

Coeffs resize(Coeffs a, int order)
{
    a.resize(static_cast<std::size_t>(order) + 1, Rational(0));
    return a;
}

Coeffs add(const Coeffs& a, const Coeffs& b, int order)
{
    Coeffs out = resize(a, order);
    for (std::size_t i = 0; i < out.size() && i < b.size(); ++i) out[i] += b[i];
    return out;
}

Coeffs scale(const Coeffs& a, const Rational& factor)
{
    Coeffs out(a);
    for (auto& c : out) c *= factor;
    return out;
}

Coeffs multiply(const Coeffs& a, const Coeffs& b, int order)
{
    Coeffs out(static_cast<std::size_t>(order) + 1, Rational(0));
    for (std::size_t i = 0; i < a.size() && i < out.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Coeffs divide(const Coeffs& num, const Coeffs& den, int order)
{
    if (den.empty() || den[0] == 0) throw std::domain_error("series::divide: denominator has no constant term");
    Coeffs out(static_cast<std::size_t>(order) + 1, Rational(0));
    for (std::size_t i = 0; i < out.size(); ++i) {
        Rational acc = i < num.size() ? num[i] : Rational(0);
        for (std::size_t j = 1; j <= i && j < den.size(); ++j) acc -= den[j] * out[i - j];
        out[i] = acc / den[0];
    }
    return out;
}

Coeffs one_minus(const Rational& c, int k)
{
    Coeffs out(static_cast<std::size_t>(k) + 1, Rational(0));
    out[0] = 1;
    out[static_cast<std::size_t>(k)] -= c;
    return out;
}

} // namespace kloo::series
