#include "kloo/arith.hpp"

#include <sstream>

namespace kloo {

std::int64_t PrimePower::value() const
{
    std::int64_t v = 1;
    for (int i = 0; i < exponent; ++i) v *= p;
    return v;
}

std::vector<PrimePower> factorize(std::int64_t q)
{
    if (q < 1) throw std::invalid_argument("factorize: q must be positive");
    std::vector<PrimePower> out;
    for (std::int64_t p = 2; p * p <= q; ++p) {
        if (q % p != 0) continue;
        int e = 0;
        while (q % p == 0) {
            q /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (q > 1) out.push_back({q, 1});
    return out;
}

bool is_prime(std::int64_t n)
{
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::int64_t> primes_up_to(std::int64_t limit)
{
    std::vector<std::int64_t> out;
    if (limit < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::int64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

Modulus::Modulus(std::int64_t q) : q_(q)
{
    if (q < 2) throw std::invalid_argument("modulus must be >= 2, got " + std::to_string(q));
    factors_ = factorize(q);
}

std::string Modulus::to_string() const
{
    std::ostringstream os;
    os << q_ << " = ";
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) os << " * ";
        os << factors_[i].p;
        if (factors_[i].exponent > 1) os << '^' << factors_[i].exponent;
    }
    return os.str();
}

std::int64_t gcd(std::int64_t a, std::int64_t b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        const std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t mod_inverse(std::int64_t x, std::int64_t m)
{
    if (m < 1) throw std::invalid_argument("mod_inverse: modulus must be positive");
    if (m == 1) return 0;
    std::int64_t a = mod(x, m), b = m;
    std::int64_t s0 = 1, s1 = 0;
    while (b) {
        const std::int64_t k = a / b;
        std::int64_t t = a - k * b;
        a = b;
        b = t;
        t = s0 - k * s1;
        s0 = s1;
        s1 = t;
    }
    if (a != 1)
        throw NonUnitError("non-unit: " + std::to_string(x) + " is not invertible modulo " +
                           std::to_string(m));
    return mod(s0, m);
}

std::vector<std::int64_t> inverse_table(std::int64_t m)
{
    std::vector<std::int64_t> inv(static_cast<std::size_t>(m), 0);
    for (std::int64_t x = 1; x < m; ++x) {
        if (inv[x] != 0 || gcd(x, m) != 1) continue;
        const std::int64_t y = mod_inverse(x, m);
        inv[x] = y;
        inv[y] = x;
    }
    if (m == 1) inv.assign(1, 0);
    return inv;
}

BigInt euler_phi(const Modulus& q) { return BigInt(static_cast<long>(euler_phi_small(q))); }

std::int64_t euler_phi_small(const Modulus& q)
{
    std::int64_t phi = 1;
    for (const auto& f : q.factors()) phi *= f.value() / f.p * (f.p - 1);
    return phi;
}

int jacobi_p_over_3(std::int64_t p)
{
    if (mod(p, 3) == 0)
        throw std::invalid_argument("jacobi_p_over_3: p must not be divisible by 3");
    return mod(p, 3) == 1 ? 1 : -1;
}

int symbol_p_over_3(std::int64_t p) { return mod(p, 3) == 0 ? 0 : jacobi_p_over_3(p); }

BigInt binomial(long n, long k)
{
    if (n < 0 || k < 0 || k > n) return 0;
    BigInt out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return out;
}

BigInt pow(const BigInt& base, unsigned long exponent)
{
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

BigInt ipow(std::int64_t base, unsigned long exponent)
{
    return pow(BigInt(static_cast<long>(base)), exponent);
}

Rational rpow(const Rational& base, long exponent)
{
    if (exponent < 0) {
        if (base == 0) throw std::domain_error("rpow: zero to a negative power");
        return rpow(Rational(1) / base, -exponent);
    }
    Rational out(pow(base.get_num(), static_cast<unsigned long>(exponent)),
                 pow(base.get_den(), static_cast<unsigned long>(exponent)));
    out.canonicalize();
    return out;
}

BigInt floor_div(const BigInt& a, const BigInt& b)
{
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return out;
}

std::pair<std::int64_t, std::int64_t> crt_split_v(std::int64_t v, std::int64_t q1,
                                                  std::int64_t q2)
{
    if (q1 < 1 || q2 < 1) throw std::invalid_argument("crt_split_v: factors must be positive");
    if (gcd(q1, q2) != 1)
        throw std::invalid_argument("crt_split_v: factors " + std::to_string(q1) + " and " +
                                    std::to_string(q2) + " are not coprime");
    // v1 = v / q2^2 (mod q1), v2 = v / q1^2 (mod q2).
    auto part = [v](std::int64_t own, std::int64_t other) -> std::int64_t {
        if (own == 1) return 0;
        const std::int64_t inv = mod_inverse(other % own, own);
        return mod(mod(v, own) * (inv * inv % own), own);
    };
    return {part(q1, q2), part(q2, q1)};
}

std::vector<std::int64_t> crt_split_v(std::int64_t v, const Modulus& q)
{
    std::vector<std::int64_t> out;
    for (const auto& f : q.factors()) {
        const std::int64_t own = f.value();
        out.push_back(crt_split_v(v, own, q.value() / own).first);
    }
    return out;
}

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const Rational& x)
{
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational parse_rational(const std::string& text)
{
    Rational out;
    if (out.set_str(text, 10) != 0)
        throw std::invalid_argument("not a rational number: '" + text + "'");
    if (out.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    out.canonicalize();
    return out;
}

} // namespace kloo
