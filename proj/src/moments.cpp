#include "kloo/moments.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>

namespace kloo {

namespace {

using u128 = unsigned __int128;

BigInt to_big(u128 x)
{
    BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(x >> 64)));
    BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(x)));
    return (hi << 64) + lo;
}

BigInt to_big(const BigInt& x) { return x; }

void require_n(int n, int lowest, const char* who)
{
    if (n < lowest)
        throw std::invalid_argument(std::string(who) + ": n must be >= " + std::to_string(lowest) +
                                    ", got " + std::to_string(n));
}

void require_dp_size(const Modulus& q)
{
    if (q.value() > max_dp_modulus())
        throw GuardRefusal("modulus " + std::to_string(q.value()) +
                           " exceeds the counting guard " + std::to_string(max_dp_modulus()) +
                           " (set KLOO_MAX_Q to raise it)");
}

void require_enumeration(std::int64_t base, int dims, std::int64_t limit, const char* who)
{
    const BigInt size = ipow(base, static_cast<unsigned long>(dims));
    if (size > BigInt(static_cast<long>(limit)))
        throw GuardRefusal(std::string(who) + ": " + size.get_str() + " tuples exceed the limit " +
                           std::to_string(limit));
}

void require_odd_prime(std::int64_t p, const char* who)
{
    if (p < 3 || !is_prime(p)) throw std::invalid_argument(std::string(who) + ": p must be an odd prime");
}

// Orbits of (s, t) -> (l s, t / l) on (Z/q)^2.
struct OrbitIndex {
    std::int64_t q = 0;
    std::vector<std::int32_t> id;            // s * q + t -> orbit
    std::vector<std::int64_t> rep_s, rep_t;
    std::vector<std::int64_t> size;

    explicit OrbitIndex(const PairDistribution& pairs) : q(pairs.modulus().value())
    {
        const auto& units = pairs.units();
        const auto& inv = pairs.inverses();
        id.assign(static_cast<std::size_t>(q * q), -1);
        for (std::int64_t s = 0; s < q; ++s) {
            for (std::int64_t t = 0; t < q; ++t) {
                if (id[s * q + t] >= 0) continue;
                const auto o = static_cast<std::int32_t>(rep_s.size());
                std::int64_t members = 0;
                for (const std::int64_t l : units) {
                    const std::int64_t idx = (l * s % q) * q + inv[l] * t % q;
                    if (id[idx] < 0) {
                        id[idx] = o;
                        ++members;
                    }
                }
                rep_s.push_back(s);
                rep_t.push_back(t);
                size.push_back(members);
            }
        }
    }

    std::int32_t of(std::int64_t s, std::int64_t t) const { return id[mod(s, q) * q + mod(t, q)]; }
    std::size_t count() const { return rep_s.size(); }
};

template <class Count>
TupleCounts run_orbit_kernel(int n_max, const PairDistribution& pairs)
{
    const OrbitIndex orbits(pairs);
    const std::int64_t q = orbits.q;
    const auto& units = pairs.units();
    const auto& inv = pairs.inverses();

    TupleCounts out;
    out.q = q;
    out.n_max = n_max;
    out.w.assign(static_cast<std::size_t>(n_max) + 1, 0);
    out.v.assign(static_cast<std::size_t>(n_max) + 1, 0);

    std::vector<std::size_t> on_hypersurface;
    for (std::size_t o = 0; o < orbits.count(); ++o)
        if (orbits.rep_s[o] * orbits.rep_t[o] % q == 1 % q) on_hypersurface.push_back(o);
    const auto target = static_cast<std::size_t>(orbits.of(-1, -1));

    std::vector<Count> cur(orbits.count(), Count(0));
    std::vector<Count> next(orbits.count(), Count(0));
    cur[static_cast<std::size_t>(orbits.of(1, 1))] = Count(1);

    for (int layer = 1; layer <= n_max - 1; ++layer) {
        out.w[layer + 1] = to_big(cur[target]);
        Count on_g(0);
        for (const auto o : on_hypersurface) on_g += cur[o] * Count(static_cast<unsigned long>(orbits.size[o]));
        out.v[layer + 1] = to_big(on_g);
        if (layer == n_max - 1) break;

        for (std::size_t o = 0; o < orbits.count(); ++o) {
            const std::int64_t s = orbits.rep_s[o], t = orbits.rep_t[o];
            Count acc(0);
            for (const std::int64_t x : units) {
                std::int64_t a = s - x, b = t - inv[x];
                if (a < 0) a += q;
                if (b < 0) b += q;
                acc += cur[static_cast<std::size_t>(orbits.id[a * q + b])];
            }
            next[o] = acc;
        }
        std::swap(cur, next);
    }
    return out;
}

template <class Count>
TupleCounts run_full_table_kernel(int n_max, const PairDistribution& pairs)
{
    const std::int64_t q = pairs.modulus().value();
    const auto& units = pairs.units();
    const auto& inv = pairs.inverses();

    TupleCounts out;
    out.q = q;
    out.n_max = n_max;
    out.w.assign(static_cast<std::size_t>(n_max) + 1, 0);
    out.v.assign(static_cast<std::size_t>(n_max) + 1, 0);

    const auto cells = static_cast<std::size_t>(q * q);
    std::vector<Count> cur(cells, Count(0));
    for (const std::int64_t x : units) cur[x * q + inv[x]] += Count(1);

    for (int layer = 1; layer <= n_max - 1; ++layer) {
        out.w[layer + 1] = to_big(cur[(q - 1) * q + (q - 1)]);
        Count on_g(0);
        for (std::int64_t s = 0; s < q; ++s)
            for (std::int64_t t = 0; t < q; ++t)
                if (s * t % q == 1 % q) on_g += cur[s * q + t];
        out.v[layer + 1] = to_big(on_g);
        if (layer == n_max - 1) break;

        std::vector<Count> next(cells, Count(0));
        for (std::int64_t s = 0; s < q; ++s) {
            for (std::int64_t t = 0; t < q; ++t) {
                const Count& c = cur[s * q + t];
                if (c == Count(0)) continue;
                for (const std::int64_t x : units) next[((s + x) % q) * q + (t + inv[x]) % q] += c;
            }
        }
        cur = std::move(next);
    }
    return out;
}

bool fits_u128(const Modulus& q, int n_max)
{
    const BigInt mass = pow(euler_phi(q), static_cast<unsigned long>(n_max - 1));
    return mass < (BigInt(1) << 126);
}

std::mutex cache_mutex;
std::map<std::int64_t, TupleCounts> cache;

} // namespace

std::int64_t max_dp_modulus()
{
    if (const char* env = std::getenv("KLOO_MAX_Q")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && v >= 2) return v;
    }
    return 2048;
}

PairDistribution::PairDistribution(const Modulus& q) : q_(q)
{
    inverses_ = inverse_table(q.value());
    for (std::int64_t x = 1; x < q.value(); ++x)
        if (gcd(x, q.value()) == 1) units_.push_back(x);
}

int PairDistribution::count(std::int64_t a, std::int64_t b) const
{
    const std::int64_t m = q_.value();
    a = mod(a, m);
    b = mod(b, m);
    if (gcd(a, m) != 1) return 0;
    return inverses_[a] == b ? 1 : 0;
}

BigInt PairDistribution::total_mass() const { return BigInt(static_cast<unsigned long>(units_.size())); }

TupleCounts count_tuples(int n_max, const Modulus& q, DpKernel kernel)
{
    require_n(n_max, 2, "count_tuples");
    require_dp_size(q);

    if (kernel == DpKernel::quadratic_roots)
        throw std::invalid_argument("count_tuples: the quadratic-roots kernel only counts W_4");
    if (kernel == DpKernel::automatic) kernel = DpKernel::orbit_compressed;

    if (kernel == DpKernel::orbit_compressed) {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(q.value());
        if (it != cache.end() && it->second.n_max >= n_max) return it->second;
    }

    const PairDistribution pairs(q);
    TupleCounts out;
    if (kernel == DpKernel::orbit_compressed)
        out = fits_u128(q, n_max) ? run_orbit_kernel<u128>(n_max, pairs)
                                  : run_orbit_kernel<BigInt>(n_max, pairs);
    else
        out = fits_u128(q, n_max) ? run_full_table_kernel<u128>(n_max, pairs)
                                  : run_full_table_kernel<BigInt>(n_max, pairs);

    if (kernel == DpKernel::orbit_compressed) {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto& slot = cache[q.value()];
        if (slot.n_max < out.n_max) slot = out;
    }
    return out;
}

BigInt count_W(int n, const Modulus& q, DpKernel kernel)
{
    require_n(n, 2, "count_W");
    const bool odd_prime_power = q.is_prime_power() && q.prime() != 2;
    if (kernel == DpKernel::automatic && n == 4 && odd_prime_power) kernel = DpKernel::quadratic_roots;
    if (kernel == DpKernel::quadratic_roots) {
        if (n != 4) throw std::invalid_argument("count_W: the quadratic-roots kernel only counts W_4");
        return count_W4_quadratic(q);
    }
    return count_tuples(n, q, kernel).W(n);
}

namespace {

struct OddPrimePower {
    std::int64_t p;
    int r;
    std::vector<std::int64_t> powers;   // p^0..p^r
    std::vector<char> residue;          // quadratic residues mod p

    explicit OddPrimePower(const Modulus& q) : p(q.prime()), r(static_cast<int>(q.exponent()))
    {
        powers.push_back(1);
        for (int i = 0; i < r; ++i) powers.push_back(powers.back() * p);
        residue.assign(static_cast<std::size_t>(p), 0);
        for (std::int64_t x = 1; x < p; ++x) residue[static_cast<std::size_t>(x * x % p)] = 1;
    }

    // p-adic valuation of x mod p^m, capped at m.
    int valuation(std::int64_t x, int m) const
    {
        int e = 0;
        while (e < m && x % p == 0) {
            x /= p;
            ++e;
        }
        return e;
    }

    // #{z mod p^m : z^2 = d}.
    std::int64_t sqrt_count(std::int64_t d, int m) const
    {
        const int e = valuation(d, m);
        if (e == m) return powers[static_cast<std::size_t>(m / 2)];
        if (e % 2 == 1) return 0;
        const std::int64_t unit = d / powers[static_cast<std::size_t>(e)];
        return residue[static_cast<std::size_t>(unit % p)] ? 2 * powers[static_cast<std::size_t>(e / 2)] : 0;
    }
};

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m)
{
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

// #{y unit : y + z = s, 1/y + 1/z = t for some unit z}; y solves t y^2 - s t y + s = 0.
std::int64_t pair_count(const OddPrimePower& pp, std::int64_t s, std::int64_t t)
{
    const int r = pp.r;
    const std::int64_t q = pp.powers[static_cast<std::size_t>(r)];
    const int a = pp.valuation(s, r), b = pp.valuation(t, r);
    if (a == r && b == r) return q - q / pp.p;
    if (a != b) return 0;
    const int m = r - a;
    const std::int64_t mod_m = pp.powers[static_cast<std::size_t>(m)];
    const std::int64_t scale = pp.powers[static_cast<std::size_t>(a)];
    const std::int64_t s1 = (s / scale) % mod_m, t1 = (t / scale) % mod_m;
    const std::int64_t shift = mulmod(scale % mod_m, s1, mod_m);
    const std::int64_t disc = mod(mulmod(shift, shift, mod_m) - mulmod(4 % mod_m, mulmod(s1, mod_inverse(t1, mod_m), mod_m), mod_m), mod_m);
    return scale * pp.sqrt_count(disc, m);
}

} // namespace

BigInt count_W4_quadratic(const Modulus& q)
{
    if (!q.is_prime_power() || q.prime() == 2)
        throw std::invalid_argument("count_W4_quadratic: q must be an odd prime power");
    if (q.value() > kQuadraticKernelLimit)
        throw GuardRefusal("count_W4_quadratic: modulus " + std::to_string(q.value()) + " exceeds the limit " +
                           std::to_string(kQuadraticKernelLimit));
    const OddPrimePower pp(q);
    const std::int64_t m = q.value();
    u128 total = 0;
    for (std::int64_t x = 1; x < m; ++x) {
        if (x % pp.p == 0) continue;
        const std::int64_t xi = mod_inverse(x, m);
        total += static_cast<u128>(pair_count(pp, mod(-1 - x, m), mod(-1 - xi, m)));
    }
    return to_big(total);
}

BigInt count_V(int n, const Modulus& q)
{
    require_n(n, 2, "count_V");
    return euler_phi(q) * count_W(n, q);
}

namespace {

// Calls visit(sum x, sum 1/x, tuple) for every tuple of units of length dims.
void enumerate_unit_tuples(const Modulus& q, int dims,
                           const std::function<void(std::int64_t, std::int64_t,
                                                    const std::vector<std::int64_t>&)>& visit)
{
    const PairDistribution pairs(q);
    const std::int64_t m = q.value();
    const auto& units = pairs.units();
    const auto& inv = pairs.inverses();
    std::vector<std::int64_t> tuple(static_cast<std::size_t>(dims));
    std::function<void(int, std::int64_t, std::int64_t)> rec = [&](int depth, std::int64_t s,
                                                                 std::int64_t t) {
        if (depth == dims) {
            visit(s, t, tuple);
            return;
        }
        for (const std::int64_t x : units) {
            tuple[static_cast<std::size_t>(depth)] = x;
            rec(depth + 1, (s + x) % m, (t + inv[x]) % m);
        }
    };
    rec(0, 0, 0);
}

} // namespace

BigInt count_W_bruteforce(int n, const Modulus& q)
{
    require_n(n, 2, "count_W_bruteforce");
    require_enumeration(euler_phi_small(q), n - 1, kBruteForceLimit, "count_W_bruteforce");
    const std::int64_t m = q.value();
    std::uint64_t hits = 0;
    enumerate_unit_tuples(q, n - 1, [&](std::int64_t s, std::int64_t t, const auto&) {
        if ((s + 1) % m == 0 && (t + 1) % m == 0) ++hits;
    });
    return BigInt(static_cast<unsigned long>(hits));
}

BigInt count_V_bruteforce(int n, const Modulus& q)
{
    require_n(n, 2, "count_V_bruteforce");
    require_enumeration(euler_phi_small(q), n - 1, kBruteForceLimit, "count_V_bruteforce");
    const std::int64_t m = q.value();
    std::uint64_t hits = 0;
    enumerate_unit_tuples(q, n - 1, [&](std::int64_t s, std::int64_t t, const auto&) {
        if (s * t % m == 1 % m) ++hits;
    });
    return BigInt(static_cast<unsigned long>(hits));
}

std::string to_string(Method m)
{
    switch (m) {
    case Method::exact_count: return "exact-count";
    case Method::direct_float: return "direct-float";
    case Method::closed_form: return "closed-form";
    case Method::oracle: return "oracle";
    }
    return "unknown";
}

namespace {

BigInt prime_power_moment(int n, const PrimePower& f)
{
    if (n == 1) return 0;
    const std::int64_t p = f.p;
    const Modulus q(f.value());
    const BigInt q2 = ipow(q.value(), 2);
    if (f.exponent == 1) {
        const BigInt w = count_W(n, q);
        const BigInt correction = ipow(p - 1, static_cast<unsigned long>(n - 1)) + (n % 2 == 0 ? 1 : -1);
        return q2 * w - correction;
    }
    // q^2 (W_n(q) - p^{n-3} W_n(q/p)) with q^2 p^{n-3} = (q^2/p) p^{n-2}
    const BigInt w = count_W(n, q);
    const BigInt w_lower = count_W(n, Modulus(q.value() / p));
    return q2 * w - (q2 / p) * ipow(p, static_cast<unsigned long>(n - 2)) * w_lower;
}

} // namespace

MomentRecord moment_exact(int n, const Modulus& q)
{
    require_n(n, 1, "moment_exact");
    MomentRecord out{n, q.value(), 1, Method::exact_count};
    for (const auto& f : q.factors()) out.value *= prime_power_moment(n, f);
    return out;
}

namespace {

constexpr int kMaxPrecisionBits = 1 << 14;

struct DirectAttempt {
    std::vector<BigInt> rounded;   // index n - 1
    bool ok = true;
    double worst_residual = 0;
};

DirectAttempt attempt_direct(int n_max, const Modulus& q, int bits)
{
    const KloostermanRow row = kloosterman_row(1, q, bits);
    const mpfr_prec_t wb = row.working_bits;
    const double e = row.error_bound;
    const double ulp = std::ldexp(1.0, -static_cast<int>(wb) + 1);

    std::vector<BigFloat> sums;
    std::vector<double> bounds(static_cast<std::size_t>(n_max), 0.0);
    std::vector<double> magnitude(static_cast<std::size_t>(n_max), 0.0);
    for (int n = 1; n <= n_max; ++n) sums.emplace_back(wb);

    for (const auto& k : row.values) {
        const double a = k.abs().to_double() + e;
        BigFloat power(k);
        double a_pow = a;   // (|K| + e)^n
        for (int n = 1; n <= n_max; ++n) {
            if (n > 1) {
                power *= k;
                a_pow *= a;
            }
            sums[n - 1] += power;
            auto i = static_cast<std::size_t>(n - 1);
            // mean value bound for the input error plus n roundings of the product
            bounds[i] += n * (a_pow / a) * e + n * a_pow * ulp;
            magnitude[i] += a_pow;
        }
    }

    DirectAttempt out;
    const auto terms = static_cast<double>(row.values.size());
    for (int n = 1; n <= n_max; ++n) {
        const auto i = static_cast<std::size_t>(n - 1);
        const double bound = 1.1 * (bounds[i] + terms * magnitude[i] * ulp);
        const BigInt nearest = sums[i].round();
        const double residual = (sums[i] - BigFloat(nearest, wb)).abs().to_double();
        out.worst_residual = std::max(out.worst_residual, residual);
        if (residual >= 0.25 || residual + bound >= 0.5) out.ok = false;
        out.rounded.push_back(nearest);
    }
    return out;
}

} // namespace

std::vector<MomentRecord> moments_direct(int n_max, const Modulus& q, int precision_bits)
{
    require_n(n_max, 1, "moments_direct");
    int bits = std::max(precision_bits, moment_precision(n_max, q));
    while (true) {
        const DirectAttempt attempt = attempt_direct(n_max, q, bits);
        if (attempt.ok) {
            std::vector<MomentRecord> out;
            for (int n = 1; n <= n_max; ++n)
                out.push_back({n, q.value(), attempt.rounded[static_cast<std::size_t>(n - 1)],
                               Method::direct_float});
            return out;
        }
        if (bits >= kMaxPrecisionBits)
            throw PrecisionExhausted("precision exhausted for S_" + std::to_string(n_max) + "(" +
                                     std::to_string(q.value()) + "): residual " +
                                     std::to_string(attempt.worst_residual) + " at " +
                                     std::to_string(bits) + " bits");
        bits = std::min(2 * bits, kMaxPrecisionBits);
    }
}

MomentRecord moment_direct(int n, const Modulus& q, int precision_bits)
{
    require_n(n, 1, "moment_direct");
    return moments_direct(n, q, precision_bits).back();
}

BigInt singular_census(int n, std::int64_t p)
{
    require_n(n, 2, "singular_census");
    require_odd_prime(p, "singular_census");
    BigInt total = 0;
    for (long i = 0; i <= n - 2; ++i) {
        if (mod(2 * i - (n - 2), p) == 0 || mod(2 * i - (n - 4), p) == 0)
            total += binomial(n - 2, i);
    }
    return BigInt(static_cast<long>(p - 1)) * total;
}

BigInt singular_census_bruteforce(int n, std::int64_t p)
{
    require_n(n, 2, "singular_census_bruteforce");
    require_odd_prime(p, "singular_census_bruteforce");
    require_enumeration(p - 1, n - 1, 10'000'000, "singular_census_bruteforce");
    const Modulus q(p);
    const auto inv = inverse_table(p);
    std::uint64_t hits = 0;
    enumerate_unit_tuples(q, n - 1, [&](std::int64_t s, std::int64_t t, const auto& x) {
        if (s * t % p != 1) return;
        // d g / d x_i = t - s / x_i^2
        for (const std::int64_t xi : x)
            if (mod(t - s * (inv[xi] * inv[xi] % p), p) != 0) return;
        ++hits;
    });
    return BigInt(static_cast<unsigned long>(hits));
}

bool hensel_ratio_check(int n, std::int64_t p, int r)
{
    require_n(n, 2, "hensel_ratio_check");
    if (r < 2) throw std::invalid_argument("hensel_ratio_check: r must be >= 2");
    if (!is_prime(p)) throw std::invalid_argument("hensel_ratio_check: p must be prime");
    const BigInt upper = count_V(n, Modulus(ipow(p, r).get_si()));
    const BigInt lower = count_V(n, Modulus(ipow(p, r - 1).get_si()));
    return upper == ipow(p, static_cast<unsigned long>(n - 2)) * lower;
}

BigInt torus_zero_count_mod_p(int n, std::int64_t p)
{
    require_n(n, 2, "torus_zero_count_mod_p");
    require_odd_prime(p, "torus_zero_count_mod_p");
    return count_tuples(n, Modulus(p)).V(n);
}

} // namespace kloo
