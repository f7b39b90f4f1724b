#pragma once

// Exact integer, rational and modular arithmetic shared by the rest of the
// library. Counts and moments are GMP integers throughout; residues and
// moduli are machine integers since every modulus handled here is desk-sized.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kloo {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Raised when an inverse is requested for a residue that is not a unit.
class NonUnitError : public std::domain_error {
public:
    explicit NonUnitError(const std::string& what) : std::domain_error(what) {}
};

/// A request the library refuses because it exceeds a configured size guard.
class GuardRefusal : public std::runtime_error {
public:
    explicit GuardRefusal(const std::string& what) : std::runtime_error(what) {}
};

struct PrimePower {
    std::int64_t p;
    int exponent;

    std::int64_t value() const;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// A modulus q >= 2 together with its factorization into increasing primes.
class Modulus {
public:
    explicit Modulus(std::int64_t q);

    std::int64_t value() const { return q_; }
    const std::vector<PrimePower>& factors() const { return factors_; }

    bool is_prime_power() const { return factors_.size() == 1; }
    bool is_prime() const { return is_prime_power() && factors_.front().exponent == 1; }

    /// Only meaningful for prime powers.
    std::int64_t prime() const { return factors_.front().p; }
    int exponent() const { return factors_.front().exponent; }

    std::string to_string() const;

private:
    std::int64_t q_;
    std::vector<PrimePower> factors_;
};

std::vector<PrimePower> factorize(std::int64_t q);
bool is_prime(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t limit);

/// Canonical representative of a modulo m in [0, m).
inline std::int64_t mod(std::int64_t a, std::int64_t m)
{
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b);

/// Inverse of x modulo m in [0, m); throws NonUnitError when gcd(x, m) != 1.
std::int64_t mod_inverse(std::int64_t x, std::int64_t m);

/// Inverses of every residue modulo m, 0 for non-units.
std::vector<std::int64_t> inverse_table(std::int64_t m);

BigInt euler_phi(const Modulus& q);
std::int64_t euler_phi_small(const Modulus& q);

/// (p/3) for a prime p not divisible by 3.
int jacobi_p_over_3(std::int64_t p);

/// (p/3) extended with the value 0 at p = 3.
int symbol_p_over_3(std::int64_t p);

/// C(n, k), zero outside 0 <= k <= n.
BigInt binomial(long n, long k);

BigInt pow(const BigInt& base, unsigned long exponent);
BigInt ipow(std::int64_t base, unsigned long exponent);
Rational rpow(const Rational& base, long exponent);

/// Floor division for BigInt (rounds toward negative infinity).
BigInt floor_div(const BigInt& a, const BigInt& b);

/// Splits v for the factorization q = q1*q2 with coprime factors.
///
/// The returned (v1 mod q1, v2 mod q2) satisfy v = v1*q2^2 + v2*q1^2 (mod q),
/// which is exactly the split making K(u,v;q) = K(u,v1;q1) K(u,v2;q2).
std::pair<std::int64_t, std::int64_t> crt_split_v(std::int64_t v, std::int64_t q1,
                                                  std::int64_t q2);

/// v_i for each prime-power factor so that K(u,v;q) = prod K(u,v_i;p_i^{m_i}).
std::vector<std::int64_t> crt_split_v(std::int64_t v, const Modulus& q);

std::string to_string(const BigInt& x);
/// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& x);
Rational parse_rational(const std::string& text);

} // namespace kloo
