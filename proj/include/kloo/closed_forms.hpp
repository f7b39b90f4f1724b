#pragma once

// Closed formulas for power moments of Kloosterman sums: the prime-modulus
// identities for n <= 6, the symmetric-power moments T_n and their bound,
// the explicit estimate A_n(p) +- B_n p^{(n+1)/2}, and the prime-power laws.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "kloo/arith.hpp"

namespace kloo {

struct SalieMoments {
    BigInt s2, s3, s4;
};

/// S_2, S_3, S_4 for a prime p > 3.
SalieMoments salie_moments(std::int64_t p);

/// a_p = 2p - 12u^2 if p = 3u^2 + 5v^2, 4x^2 - 2p if p = x^2 + 15y^2, else 0.
BigInt a_p(std::int64_t p);

/// S_5(p) for p > 5.
BigInt s5_closed(std::int64_t p);

/// Coefficients c_0..c_order of q * prod_{m>=1} ((1-q^m)(1-q^{2m})(1-q^{3m})(1-q^{6m}))^2,
/// the weight-4 level-6 eta-product newform.
std::vector<BigInt> eta_expansion(int order);

/// Coefficient of q^p in the eta-product expansion truncated at `order` >= p.
BigInt eta_coefficient(int p, int order);
BigInt eta_coefficient(int p);

/// S_6(p) for p > 6 with b_p taken from the eta-product expansion.
BigInt s6_closed(std::int64_t p);

/// T_0..T_n from S_1..S_n (S_values[k-1] = S_k) for the prime p.
std::vector<BigInt> convert_S_to_T(std::int64_t p, const std::vector<BigInt>& s_values);

/// S_1..S_n from T_0..T_n.
std::vector<BigInt> convert_T_to_S(std::int64_t p, const std::vector<BigInt>& t_values);

/// |1 + T_n| <= [(n-1)/2] p^{(n+1)/2}, checked in squared form. Requires n >= 1.
bool t_bound_check(int n, std::int64_t p, const BigInt& t_n);

struct EstimatePair {
    int n = 0;
    std::int64_t p = 0;
    Rational main_term;        // A_n(p)
    Rational bound_constant;   // B_n
    Rational exponent;         // error term is B_n p^exponent, exponent = (n+1)/2

    /// |s - A_n(p)| <= B_n p^{(n+1)/2}, compared exactly after squaring.
    bool contains(const BigInt& s) const;
};

/// A_n(p) and B_n for n >= 4 and an odd prime p.
EstimatePair estimate_pair(int n, std::int64_t p);

/// Prime-power closed forms, or nullopt outside their validity range:
///   odd n, odd p, p^{r-1} > n        -> 0
///   odd n, p = 2, r >= 2             -> 0
///   even n, odd p, p^{r-1} > n/2     -> C(n-1, n/2-1) (p-1)/p p^{(n/2+1) r}
///   even n, p = 2, 2^{r-2} > n       -> C(n-1, n/2-1) 2^{n/2-2} 2^{(n/2+1) r}
std::optional<BigInt> prime_power_closed(int n, std::int64_t p, int r);

/// S_n(p^2) for odd n and odd p with p^2 > n.
BigInt odd_n_p2_closed(int n, std::int64_t p);

/// S_n(p^2) for even n and p > max(2, sqrt(n/2)), including the correction
/// over the non-obvious singular classes.
BigInt even_n_p2_correction(int n, std::int64_t p);

struct IgusaConstants {
    BigInt Q;
    Rational C;
};

/// Q = (p^{n/2-2}+1)(p^{n/2-1}-1) and the pole constant C of the Poincare
/// series at t = p^{n/2-1}; for p = 2 the constant is C_n. Requires even n >= 6.
IgusaConstants igusa_constants(int n, std::int64_t p);

} // namespace kloo
