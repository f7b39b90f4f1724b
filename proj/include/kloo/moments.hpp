#pragma once

// Exact counting of the unit tuples behind the power moments
//
//     W_n(q) = #{(x_1..x_{n-1}) units : sum x_i + 1 = 0, sum 1/x_i + 1 = 0 (mod q)}
//     V_n(q) = #{(x_1..x_{n-1}) units : (sum x_i)(sum 1/x_i) = 1 (mod q)}
//
// and the moments S_n(q) = sum_u K(u,1;q)^n derived from them.
//
// The counting kernel is an (n-1)-fold convolution of the distribution of
// (x, 1/x) over the state space (Z/q)^2. Every intermediate distribution is
// invariant under (s, t) -> (l s, t / l) for units l, so the table is stored
// once per orbit of that action; the uncompressed table kernel is kept as a
// reference for cross-checking.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kloo/arith.hpp"
#include "kloo/kloosterman.hpp"

namespace kloo {

class PrecisionExhausted : public std::runtime_error {
public:
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

/// Largest modulus the counting kernel accepts; KLOO_MAX_Q overrides the default 2048.
std::int64_t max_dp_modulus();

/// Brute-force enumeration guard on phi(q)^(n-1).
constexpr std::int64_t kBruteForceLimit = 100'000'000;

/// The multiset {(x mod q, x^-1 mod q) : x unit}.
class PairDistribution {
public:
    explicit PairDistribution(const Modulus& q);

    const Modulus& modulus() const { return q_; }
    /// Number of units x with (x, 1/x) = (a, b): 0 or 1.
    int count(std::int64_t a, std::int64_t b) const;
    BigInt total_mass() const;
    const std::vector<std::int64_t>& units() const { return units_; }
    const std::vector<std::int64_t>& inverses() const { return inverses_; }

private:
    Modulus q_;
    std::vector<std::int64_t> units_;
    std::vector<std::int64_t> inverses_;   // indexed by residue, 0 for non-units
};

// `automatic` picks quadratic_roots for n = 4 at odd prime powers and the
// orbit kernel otherwise. quadratic_roots only counts W_4.
enum class DpKernel { automatic, orbit_compressed, full_table, quadratic_roots };

/// Largest modulus accepted by the n = 4 quadratic-roots kernel.
constexpr std::int64_t kQuadraticKernelLimit = 2'000'000'000;

/// W_k(q) and V_k(q) for every k in [2, n_max] from a single convolution pass.
struct TupleCounts {
    std::int64_t q = 0;
    int n_max = 0;
    std::vector<BigInt> w;   // w[k], k in [2, n_max]; lower entries unused
    std::vector<BigInt> v;   // v[k] counted as sum over s t = 1 of the state table

    const BigInt& W(int n) const { return w.at(static_cast<std::size_t>(n)); }
    const BigInt& V(int n) const { return v.at(static_cast<std::size_t>(n)); }
};

TupleCounts count_tuples(int n_max, const Modulus& q, DpKernel kernel = DpKernel::automatic);

/// W_n for a prime power q, via the convolution kernel.
BigInt count_W(int n, const Modulus& q, DpKernel kernel = DpKernel::automatic);

/// W_4 at an odd prime power: for each x the two remaining unit variables are
/// the roots of a quadratic, counted from the square roots of its discriminant.
BigInt count_W4_quadratic(const Modulus& q);

/// W_n by direct enumeration of unit tuples; refuses phi(q)^(n-1) > kBruteForceLimit.
BigInt count_W_bruteforce(int n, const Modulus& q);

/// V_n(q) = phi(q) W_n(q).
BigInt count_V(int n, const Modulus& q);

/// V_n by enumerating the zero set of (sum x_i)(sum 1/x_i) - 1 on the unit torus.
BigInt count_V_bruteforce(int n, const Modulus& q);

enum class Method { exact_count, direct_float, closed_form, oracle };
std::string to_string(Method m);

struct MomentRecord {
    int n = 0;
    std::int64_t q = 0;
    BigInt value;
    Method method = Method::exact_count;
};

/// S_n(q) from the counting identities, multiplicatively over the factors of q.
MomentRecord moment_exact(int n, const Modulus& q);

/// S_n(q) = sum_u K(u,1;q)^n summed in high precision and rounded. The
/// precision is raised until the rounding residual is below 0.25 and the
/// accumulated error bound cannot move the nearest integer.
MomentRecord moment_direct(int n, const Modulus& q, int precision_bits = kDefaultPrecisionBits);

/// moment_direct for every n in [1, n_max] sharing one evaluation of K(u,1;q).
std::vector<MomentRecord> moments_direct(int n_max, const Modulus& q,
                                         int precision_bits = kDefaultPrecisionBits);

/// Number of singular points of (sum x_i)(sum 1/x_i) - 1 on (F_p^*)^{n-1}:
/// (p-1) * sum C(n-2, i) over 0 <= i <= n-2 with 2i = n-2 or 2i = n-4 (mod p).
BigInt singular_census(int n, std::int64_t p);

/// The same census by enumeration; refuses (p-1)^(n-1) > 10^7.
BigInt singular_census_bruteforce(int n, std::int64_t p);

/// Whether V_n(p^r) = p^{n-2} V_n(p^{r-1}) holds exactly.
bool hensel_ratio_check(int n, std::int64_t p, int r);

/// #{x in (F_p^*)^{n-1} : (sum x_i)(sum 1/x_i) = 1}.
BigInt torus_zero_count_mod_p(int n, std::int64_t p);

} // namespace kloo
