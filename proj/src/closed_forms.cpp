#include "kloo/closed_forms.hpp"

#include <string>

namespace kloo {

namespace {

void require_prime_above(std::int64_t p, std::int64_t floor, const char* who)
{
    if (p <= floor || !is_prime(p))
        throw std::invalid_argument(std::string(who) + ": p must be a prime > " +
                                    std::to_string(floor) + ", got " + std::to_string(p));
}

bool is_square(std::int64_t x, std::int64_t* root = nullptr)
{
    if (x < 0) return false;
    std::int64_t r = 0;
    while ((r + 1) * (r + 1) <= x) ++r;
    if (root) *root = r;
    return r * r == x;
}

BigInt big(std::int64_t x) { return BigInt(static_cast<long>(x)); }

// C(N, k) - C(N, k-1) = C(N, k) (N - 2k + 1) / (N - k + 1)
Rational binomial_step(long N, long k)
{
    Rational out(binomial(N, k) * (N - 2 * k + 1), BigInt(N - k + 1));
    out.canonicalize();
    return out;
}

// The singular-class index condition 2i = n-2 or 2i = n-4 (mod p).
bool singular_index(long i, int n, std::int64_t p)
{
    return mod(2 * i - (n - 2), p) == 0 || mod(2 * i - (n - 4), p) == 0;
}

} // namespace

SalieMoments salie_moments(std::int64_t p)
{
    require_prime_above(p, 3, "salie_moments");
    const BigInt P = big(p);
    return {P * P - P, jacobi_p_over_3(p) * P * P + 2 * P, 2 * P * P * P - 3 * P * P - 3 * P};
}

BigInt a_p(std::int64_t p)
{
    require_prime_above(p, 5, "a_p");
    std::optional<BigInt> first, second;
    for (std::int64_t u = 0; 3 * u * u <= p; ++u) {
        const std::int64_t rest = p - 3 * u * u;
        if (rest % 5 == 0 && is_square(rest / 5)) {
            first = big(2 * p - 12 * u * u);
            break;
        }
    }
    for (std::int64_t x = 0; x * x <= p; ++x) {
        const std::int64_t rest = p - x * x;
        if (rest % 15 == 0 && is_square(rest / 15)) {
            second = big(4 * x * x - 2 * p);
            break;
        }
    }
    if (first && second)
        throw std::logic_error("a_p: " + std::to_string(p) +
                               " is represented by both 3u^2+5v^2 and x^2+15y^2");
    if (first) return *first;
    if (second) return *second;
    const std::int64_t r = p % 15;
    if (r == 7 || r == 11 || r == 13 || r == 14) return 0;
    throw std::logic_error("a_p: no representation found for " + std::to_string(p));
}

BigInt s5_closed(std::int64_t p)
{
    require_prime_above(p, 5, "s5_closed");
    const BigInt P = big(p);
    return jacobi_p_over_3(p) * 4 * P * P * P + (a_p(p) + 5) * P * P + 4 * P;
}

std::vector<BigInt> eta_expansion(int order)
{
    if (order < 1) throw std::invalid_argument("eta_expansion: order must be >= 1");
    // F(q) = prod (1-q^m)^2 (1-q^{2m})^2 (1-q^{3m})^2 (1-q^{6m})^2 up to q^{order-1}.
    const auto len = static_cast<std::size_t>(order);
    std::vector<BigInt> euler(len, 0);
    // Pentagonal numbers k(3k-1)/2 for k = 0, 1, -1, 2, -2, ...
    euler[0] = 1;
    for (long k = 1;; ++k) {
        bool any = false;
        for (const long j : {k, -k}) {
            const long e = j * (3 * j - 1) / 2;
            if (e < static_cast<long>(len)) {
                euler[static_cast<std::size_t>(e)] += (k % 2 == 0) ? 1 : -1;
                any = true;
            }
        }
        if (!any) break;
    }
    auto multiply = [len](const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
        std::vector<BigInt> out(len, 0);
        for (std::size_t i = 0; i < len; ++i) {
            if (a[i] == 0) continue;
            for (std::size_t j = 0; i + j < len; ++j) out[i + j] += a[i] * b[j];
        }
        return out;
    };
    std::vector<BigInt> product(len, 0);
    product[0] = 1;
    for (const std::size_t d : {1u, 2u, 3u, 6u}) {
        std::vector<BigInt> scaled(len, 0);
        for (std::size_t i = 0; i * d < len; ++i) scaled[i * d] = euler[i];
        product = multiply(product, multiply(scaled, scaled));
    }
    std::vector<BigInt> coeffs(len + 1, 0);
    for (std::size_t i = 0; i < len; ++i) coeffs[i + 1] = product[i];
    return coeffs;
}

BigInt eta_coefficient(int p, int order)
{
    if (p < 1) throw std::invalid_argument("eta_coefficient: index must be >= 1");
    if (order < p)
        throw std::invalid_argument("eta_coefficient: order " + std::to_string(order) +
                                    " is below the requested index " + std::to_string(p));
    return eta_expansion(order)[static_cast<std::size_t>(p)];
}

BigInt eta_coefficient(int p) { return eta_coefficient(p, p + 1); }

BigInt s6_closed(std::int64_t p)
{
    require_prime_above(p, 6, "s6_closed");
    const BigInt P = big(p);
    const BigInt b = eta_coefficient(static_cast<int>(p));
    return 5 * P * P * P * P - 10 * P * P * P - (b + 9) * P * P - 5 * P;
}

std::vector<BigInt> convert_S_to_T(std::int64_t p, const std::vector<BigInt>& s_values)
{
    const BigInt P = big(p);
    std::vector<BigInt> t{P - 1};
    for (long m = 1; m <= static_cast<long>(s_values.size()); ++m) {
        const BigInt& s = s_values[static_cast<std::size_t>(m - 1)];
        BigInt rhs = (m % 2 == 0 ? s : BigInt(-s)) - 1;
        for (long k = 1; k <= m / 2; ++k)
            rhs -= (binomial(m, k) - binomial(m, k - 1)) * pow(P, static_cast<unsigned long>(k)) *
                   t[static_cast<std::size_t>(m - 2 * k)];
        t.push_back(rhs);
    }
    return t;
}

std::vector<BigInt> convert_T_to_S(std::int64_t p, const std::vector<BigInt>& t_values)
{
    const BigInt P = big(p);
    if (t_values.empty() || t_values.front() != P - 1)
        throw std::invalid_argument("convert_T_to_S: T_0 must equal p - 1");
    std::vector<BigInt> s;
    for (long m = 1; m < static_cast<long>(t_values.size()); ++m) {
        BigInt rhs = 1;
        for (long k = 0; k <= m / 2; ++k)
            rhs += (binomial(m, k) - binomial(m, k - 1)) * pow(P, static_cast<unsigned long>(k)) *
                   t_values[static_cast<std::size_t>(m - 2 * k)];
        s.push_back(m % 2 == 0 ? rhs : BigInt(-rhs));
    }
    return s;
}

bool t_bound_check(int n, std::int64_t p, const BigInt& t_n)
{
    if (n < 1) throw std::invalid_argument("t_bound_check: n must be >= 1");
    if (p % 2 == 0) throw std::invalid_argument("t_bound_check: p must be odd");
    const BigInt lhs = (1 + t_n) * (1 + t_n);
    const BigInt f = (n - 1) / 2;
    return lhs <= f * f * ipow(p, static_cast<unsigned long>(n + 1));
}

bool EstimatePair::contains(const BigInt& s) const
{
    const Rational diff = Rational(s) - main_term;
    // exponent is (n+1)/2, so p^{2 exponent} = p^{n+1}
    const Rational allowed = bound_constant * bound_constant * Rational(ipow(p, static_cast<unsigned long>(n + 1)));
    return diff * diff <= allowed;
}

EstimatePair estimate_pair(int n, std::int64_t p)
{
    if (n < 4) throw std::invalid_argument("estimate_pair: n must be >= 4");
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("estimate_pair: p must be an odd prime");
    const Rational P(big(p));
    auto pw = [&](long e) { return rpow(P, e); };

    EstimatePair out;
    out.n = n;
    out.p = p;
    out.exponent = Rational(n + 1, 2);
    if (n % 2 == 0) {
        const long m = n / 2;
        const Rational top = binomial_step(n, m);        // C(2m,m)/(m+1)
        const Rational second = binomial_step(n, m - 1); // 3 C(2m,m-1)/(m+2)
        const Rational third = binomial_step(n, m - 2);  // 5 C(2m,m-2)/(m+3)
        Rational a = 1 + top * pw(m + 1) - (top + third) * pw(m) - second * pw(m - 1) -
                     third * pw(m - 2);
        Rational b = 0;
        for (long k = 0; k <= m - 3; ++k) {
            const Rational step = binomial_step(n, k);
            a -= step * pw(k);
            b += step * Rational(m - k - 1);   // [m - k - 1/2]
        }
        out.main_term = a;
        out.bound_constant = b;
    } else {
        const long m = (n - 1) / 2;
        const Rational top = binomial_step(n, m);         // 2 C(2m+1,m)/(m+2)
        const Rational second = binomial_step(n, m - 1);  // 4 C(2m+1,m-1)/(m+3)
        Rational a = -1 + top * pw(m) + second * symbol_p_over_3(p) * pw(m + 1) + second * pw(m - 1);
        Rational b = 0;
        for (long k = 0; k <= m - 2; ++k) {
            const Rational step = binomial_step(n, k);
            a += step * pw(k);
            b += step * Rational(m - k);
        }
        out.main_term = a;
        out.bound_constant = b;
    }
    out.main_term.canonicalize();
    out.bound_constant.canonicalize();
    return out;
}

std::optional<BigInt> prime_power_closed(int n, std::int64_t p, int r)
{
    if (n < 1) throw std::invalid_argument("prime_power_closed: n must be >= 1");
    if (r < 1) throw std::invalid_argument("prime_power_closed: r must be >= 1");
    if (!is_prime(p)) throw std::invalid_argument("prime_power_closed: p must be prime");

    if (n % 2 == 1) {
        if (p == 2) return r >= 2 ? std::optional<BigInt>(0) : std::nullopt;
        if (ipow(p, static_cast<unsigned long>(r - 1)) > n) return BigInt(0);
        return std::nullopt;
    }
    const long half = n / 2;
    const BigInt lead = binomial(n - 1, half - 1);
    if (p == 2) {
        if (r < 2 || ipow(2, static_cast<unsigned long>(r - 2)) <= n) return std::nullopt;
        return lead * ipow(2, static_cast<unsigned long>(half - 2 + (half + 1) * r));
    }
    if (ipow(p, static_cast<unsigned long>(r - 1)) <= half) return std::nullopt;
    return lead * (p - 1) * ipow(p, static_cast<unsigned long>((half + 1) * r - 1));
}

BigInt odd_n_p2_closed(int n, std::int64_t p)
{
    if (n < 1 || n % 2 == 0) throw std::invalid_argument("odd_n_p2_closed: n must be odd");
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("odd_n_p2_closed: p must be an odd prime");
    if (p * p <= n) throw std::invalid_argument("odd_n_p2_closed: requires p^2 > n");
    BigInt sum = 0;
    for (long i = 0; i <= n - 2; ++i)
        if (singular_index(i, n, p)) sum += binomial(n - 2, i);
    return -ipow(p, static_cast<unsigned long>(n + 1)) * sum;
}

BigInt even_n_p2_correction(int n, std::int64_t p)
{
    if (n < 2 || n % 2 == 1) throw std::invalid_argument("even_n_p2_correction: n must be even");
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("even_n_p2_correction: p must be an odd prime");
    const long half = n / 2;
    if (p * p <= half) throw std::invalid_argument("even_n_p2_correction: requires p > sqrt(n/2)");
    BigInt extra = 0;
    for (long i = 0; i <= n - 2; ++i) {
        if (i == half - 1 || i == half - 2) continue;
        if (singular_index(i, n, p)) extra += binomial(n - 2, i);
    }
    const BigInt main = binomial(n - 1, half - 1) * (p - 1) * ipow(p, static_cast<unsigned long>(n + 1));
    return main - ipow(p, static_cast<unsigned long>(n + 1)) * extra;
}

IgusaConstants igusa_constants(int n, std::int64_t p)
{
    if (n % 2 == 1 || n < 6)
        throw std::invalid_argument("igusa_constants: n must be even and >= 6 (n = 4 has a double pole)");
    if (!is_prime(p)) throw std::invalid_argument("igusa_constants: p must be prime");
    const long half = n / 2;
    IgusaConstants out;
    out.Q = (ipow(p, static_cast<unsigned long>(half - 2)) + 1) * (ipow(p, static_cast<unsigned long>(half - 1)) - 1);
    const BigInt lead = binomial(n - 1, half - 1);
    if (p == 2) {
        out.C = Rational(-lead * ipow(2, static_cast<unsigned long>(half - 3)),
                         ipow(2, static_cast<unsigned long>(half - 2)) - 1);
    } else {
        out.C = Rational(-lead * (p - 1) * (p - 1),
                         ipow(p, 2) * (ipow(p, static_cast<unsigned long>(half - 2)) - 1));
    }
    out.C.canonicalize();
    return out;
}

} // namespace kloo
