#pragma once

// Direct high-precision evaluation of Kloosterman sums
//
//     K(u,v;q) = sum over units x mod q of exp(2 pi i (u x + v x^-1) / q)
//
// with term-wise error accounting. Error bounds are carried as doubles that
// over-estimate the accumulated MPFR rounding; values themselves are MPFR.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "kloo/arith.hpp"
#include "kloo/bigfloat.hpp"

namespace kloo {

constexpr int kDefaultPrecisionBits = 128;

class WeilViolation : public std::logic_error {
public:
    explicit WeilViolation(const std::string& what) : std::logic_error(what) {}
};

struct KloostermanValue {
    std::int64_t u = 0;
    std::int64_t v = 0;
    std::int64_t q = 0;
    BigFloat value;
    BigFloat imag;        // imaginary part of the complex sum, zero up to error_bound
    double error_bound = 0;
};

/// cos and sin of 2 pi k / q for k in [0, q), rounded at `bits`.
class RootTable {
public:
    RootTable(std::int64_t q, mpfr_prec_t bits);

    std::int64_t modulus() const { return q_; }
    mpfr_prec_t precision() const { return bits_; }
    const BigFloat& cos(std::int64_t k) const { return cos_[static_cast<std::size_t>(k)]; }
    const BigFloat& sin(std::int64_t k) const { return sin_[static_cast<std::size_t>(k)]; }
    /// Absolute error of any single table entry.
    double entry_error() const;

private:
    std::int64_t q_;
    mpfr_prec_t bits_;
    std::vector<BigFloat> cos_;
    std::vector<BigFloat> sin_;
};

/// Working precision used internally so that the accumulated error of a
/// phi-term sum stays below phi * 2^-(precision_bits - 8).
mpfr_prec_t working_precision(const Modulus& q, int precision_bits);

/// Precision needed when K values feed an n-th power moment modulo q.
int moment_precision(int n, const Modulus& q);

KloostermanValue kloosterman(std::int64_t u, std::int64_t v, const Modulus& q,
                             int precision_bits = kDefaultPrecisionBits);

/// K(u, v; q) for every u in [0, q), sharing one root table.
struct KloostermanRow {
    std::int64_t v = 0;
    std::int64_t q = 0;
    std::vector<BigFloat> values;
    double error_bound = 0;   // per entry
    mpfr_prec_t working_bits = 0;
};

KloostermanRow kloosterman_row(std::int64_t v, const Modulus& q,
                               int precision_bits = kDefaultPrecisionBits);

struct SymmetryCheck {
    bool symmetric = false;          // K(u,v) == K(v,u)
    bool scaling_checked = false;    // false when gcd(u, q) != 1
    bool scaling = false;            // K(u,v) == K(1,uv)
    bool passed() const { return symmetric && (!scaling_checked || scaling); }
};

SymmetryCheck check_symmetry_and_scaling(std::int64_t u, std::int64_t v, const Modulus& q,
                                         int precision_bits = kDefaultPrecisionBits);

struct CrtFactor {
    std::int64_t modulus = 0;   // p_i^{m_i}
    std::int64_t v = 0;         // v_i
    KloostermanValue value;
};

struct CrtResult {
    KloostermanValue whole;
    std::vector<CrtFactor> factors;
    BigFloat product;
    double residual = 0;     // |K(u,v;q) - prod K(u,v_i;p_i^{m_i})|
    double allowed = 0;      // accumulated error bound
    bool holds() const { return residual <= allowed; }
};

CrtResult kloosterman_crt(std::int64_t u, std::int64_t v, const Modulus& q,
                          int precision_bits = kDefaultPrecisionBits);

/// Frobenius angles theta_p(a) in [0, pi] with K(a) = -2 sqrt(p) cos theta_p(a),
/// where K(a) = K(1, a; p).
struct AngleTable {
    std::int64_t p = 0;
    std::vector<BigFloat> angles;   // index a - 1
    std::vector<BigFloat> sums;     // K(a), index a - 1
    double sum_error = 0;

    const BigFloat& angle(std::int64_t a) const { return angles.at(static_cast<std::size_t>(a - 1)); }
};

AngleTable frobenius_angles(std::int64_t p, int precision_bits = kDefaultPrecisionBits);

/// sum_{a=1}^{p-1} p^{n/2} U_n(2 cos theta_p(a)) with U_n the monic Chebyshev
/// polynomial of the second kind.
BigFloat t_moment_float(int n, const AngleTable& angles);

/// U_n(x) with U_0 = 1, U_1 = x, U_n = x U_{n-1} - U_{n-2}.
BigFloat monic_chebyshev_u(int n, const BigFloat& x);

} // namespace kloo
