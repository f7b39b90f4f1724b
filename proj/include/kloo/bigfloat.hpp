#pragma once

// Thin RAII owner for an MPFR value. Every operation rounds to nearest at the
// precision of the destination; callers account for the rounding themselves.

#include <mpfr.h>

#include <string>
#include <utility>

#include "kloo/arith.hpp"

namespace kloo {

class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t bits = 128) { mpfr_init2(v_, bits), mpfr_set_zero(v_, 1); }
    BigFloat(long value, mpfr_prec_t bits) : BigFloat(bits) { mpfr_set_si(v_, value, MPFR_RNDN); }
    BigFloat(const BigInt& value, mpfr_prec_t bits) : BigFloat(bits)
    {
        mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
    }
    BigFloat(const BigFloat& other) : BigFloat(other.precision()) { mpfr_set(v_, other.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& other) noexcept : BigFloat(MPFR_PREC_MIN) { mpfr_swap(v_, other.v_); }
    BigFloat& operator=(const BigFloat& other)
    {
        if (this != &other) {
            mpfr_set_prec(v_, other.precision());
            mpfr_set(v_, other.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& other) noexcept
    {
        mpfr_swap(v_, other.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Nearest integer (ties away from zero).
    BigInt round() const
    {
        BigInt out;
        mpfr_get_z(out.get_mpz_t(), v_, MPFR_RNDNA);
        return out;
    }

    BigFloat& operator+=(const BigFloat& o) { return mpfr_add(v_, v_, o.v_, MPFR_RNDN), *this; }
    BigFloat& operator-=(const BigFloat& o) { return mpfr_sub(v_, v_, o.v_, MPFR_RNDN), *this; }
    BigFloat& operator*=(const BigFloat& o) { return mpfr_mul(v_, v_, o.v_, MPFR_RNDN), *this; }

    friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
    friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
    BigFloat operator-() const
    {
        BigFloat out(*this);
        mpfr_neg(out.v_, out.v_, MPFR_RNDN);
        return out;
    }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_); }

    BigFloat abs() const
    {
        BigFloat out(*this);
        mpfr_abs(out.v_, out.v_, MPFR_RNDN);
        return out;
    }

    /// Fixed-point decimal rendering with the given number of fractional digits.
    std::string to_string(int digits = 20) const;

private:
    mpfr_t v_;
};

/// 2^exponent at the given precision (exact).
BigFloat pow2(long exponent, mpfr_prec_t bits = 64);

} // namespace kloo
