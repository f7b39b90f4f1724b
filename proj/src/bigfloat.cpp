#include "kloo/bigfloat.hpp"

#include <cstdio>
#include <memory>

namespace kloo {

std::string BigFloat::to_string(int digits) const
{
    char* raw = nullptr;
    if (mpfr_asprintf(&raw, "%.*Rf", digits, v_) < 0) return "nan";
    std::unique_ptr<char, decltype(&mpfr_free_str)> text(raw, &mpfr_free_str);
    return std::string(text.get());
}

BigFloat pow2(long exponent, mpfr_prec_t bits)
{
    BigFloat out(1, bits);
    mpfr_mul_2si(out.get(), out.get(), exponent, MPFR_RNDN);
    return out;
}

} // namespace kloo
