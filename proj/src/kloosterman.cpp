#include "kloo/kloosterman.hpp"

#include <cmath>

namespace kloo {

namespace {

int bit_length(std::int64_t x)
{
    int bits = 0;
    while (x > 0) {
        ++bits;
        x >>= 1;
    }
    return bits;
}

// phi terms of size <= 1, each off by entry_error, summed with phi roundings
// bounded by |partial| * 2^-bits <= phi * 2^-bits.
double summation_bound(std::int64_t phi, double entry_error, mpfr_prec_t bits)
{
    const double f = static_cast<double>(phi);
    return f * entry_error + f * f * std::ldexp(1.0, -static_cast<int>(bits));
}

} // namespace

RootTable::RootTable(std::int64_t q, mpfr_prec_t bits) : q_(q), bits_(bits)
{
    cos_.reserve(static_cast<std::size_t>(q));
    sin_.reserve(static_cast<std::size_t>(q));
    BigFloat two_pi_over_q(bits);
    mpfr_const_pi(two_pi_over_q.get(), MPFR_RNDN);
    mpfr_mul_2ui(two_pi_over_q.get(), two_pi_over_q.get(), 1, MPFR_RNDN);
    mpfr_div_ui(two_pi_over_q.get(), two_pi_over_q.get(), static_cast<unsigned long>(q), MPFR_RNDN);
    BigFloat arg(bits);
    for (std::int64_t k = 0; k < q; ++k) {
        mpfr_mul_ui(arg.get(), two_pi_over_q.get(), static_cast<unsigned long>(k), MPFR_RNDN);
        BigFloat c(bits), s(bits);
        mpfr_sin_cos(s.get(), c.get(), arg.get(), MPFR_RNDN);
        cos_.push_back(std::move(c));
        sin_.push_back(std::move(s));
    }
}

double RootTable::entry_error() const
{
    // The argument carries four roundings (pi, *2, /q, *k): relative error
    // below 5 * 2^-bits on a value below 2 pi, hence below 2^-(bits-5) in
    // absolute terms; cos/sin are 1-Lipschitz and add half an ulp.
    return std::ldexp(1.0, -static_cast<int>(bits_) + 6);
}

mpfr_prec_t working_precision(const Modulus& q, int precision_bits)
{
    if (precision_bits < 64) throw std::invalid_argument("precision_bits must be >= 64");
    return static_cast<mpfr_prec_t>(precision_bits + bit_length(euler_phi_small(q)) + 8);
}

int moment_precision(int n, const Modulus& q)
{
    const double lq = std::log2(static_cast<double>(q.value()));
    return static_cast<int>(std::ceil(n * (1.0 + 0.5 * lq) + lq)) + 64;
}

KloostermanValue kloosterman(std::int64_t u, std::int64_t v, const Modulus& q, int precision_bits)
{
    const std::int64_t m = q.value();
    const mpfr_prec_t bits = working_precision(q, precision_bits);
    const RootTable roots(m, bits);
    const std::int64_t um = mod(u, m), vm = mod(v, m);

    KloostermanValue out;
    out.u = u;
    out.v = v;
    out.q = m;
    out.value = BigFloat(bits);
    out.imag = BigFloat(bits);
    std::int64_t phi = 0;
    for (std::int64_t x = 1; x <= m; ++x) {
        const std::int64_t xm = x % m;
        if (gcd(xm, m) != 1) continue;
        const std::int64_t k = mod(um * xm + vm * mod_inverse(xm, m), m);
        out.value += roots.cos(k);
        out.imag += roots.sin(k);
        ++phi;
    }
    out.error_bound = summation_bound(phi, roots.entry_error(), bits);
    return out;
}

KloostermanRow kloosterman_row(std::int64_t v, const Modulus& q, int precision_bits)
{
    const std::int64_t m = q.value();
    const mpfr_prec_t bits = working_precision(q, precision_bits);
    const RootTable roots(m, bits);
    const auto inv = inverse_table(m);
    const std::int64_t vm = mod(v, m);

    std::vector<std::int64_t> units, shifts;
    for (std::int64_t x = 1; x < m; ++x) {
        if (gcd(x, m) != 1) continue;
        units.push_back(x);
        shifts.push_back(vm * inv[x] % m);
    }

    KloostermanRow row;
    row.v = v;
    row.q = m;
    row.working_bits = bits;
    row.values.reserve(static_cast<std::size_t>(m));
    for (std::int64_t u = 0; u < m; ++u) {
        BigFloat acc(bits);
        for (std::size_t i = 0; i < units.size(); ++i) {
            std::int64_t k = u * units[i] % m + shifts[i];
            if (k >= m) k -= m;
            acc += roots.cos(k);
        }
        row.values.push_back(std::move(acc));
    }
    row.error_bound = summation_bound(static_cast<std::int64_t>(units.size()), roots.entry_error(), bits);
    return row;
}

namespace {

bool agree(const KloostermanValue& a, const KloostermanValue& b)
{
    return (a.value - b.value).abs().to_double() <= a.error_bound + b.error_bound;
}

} // namespace

SymmetryCheck check_symmetry_and_scaling(std::int64_t u, std::int64_t v, const Modulus& q,
                                         int precision_bits)
{
    SymmetryCheck out;
    const auto kuv = kloosterman(u, v, q, precision_bits);
    out.symmetric = agree(kuv, kloosterman(v, u, q, precision_bits));
    if (gcd(mod(u, q.value()), q.value()) == 1) {
        out.scaling_checked = true;
        const std::int64_t uv = mod(mod(u, q.value()) * mod(v, q.value()), q.value());
        out.scaling = agree(kuv, kloosterman(1, uv, q, precision_bits));
    }
    return out;
}

CrtResult kloosterman_crt(std::int64_t u, std::int64_t v, const Modulus& q, int precision_bits)
{
    CrtResult out;
    out.whole = kloosterman(u, v, q, precision_bits);
    const auto split = crt_split_v(v, q);
    mpfr_prec_t bits = out.whole.value.precision();
    out.product = BigFloat(1, bits);

    // |prod (a_i + e_i) - prod a_i| <= sum_i e_i prod_{j != i} (|a_j| + e_j)
    std::vector<double> mags;
    std::vector<double> errs;
    for (std::size_t i = 0; i < q.factors().size(); ++i) {
        const std::int64_t pm = q.factors()[i].value();
        CrtFactor f;
        f.modulus = pm;
        f.v = split[i];
        f.value = kloosterman(u, split[i], Modulus(pm), precision_bits);
        out.product *= f.value.value;
        mags.push_back(f.value.value.abs().to_double());
        errs.push_back(f.value.error_bound);
        out.factors.push_back(std::move(f));
    }
    double propagated = 0;
    for (std::size_t i = 0; i < mags.size(); ++i) {
        double term = errs[i];
        for (std::size_t j = 0; j < mags.size(); ++j)
            if (j != i) term *= mags[j] + errs[j];
        propagated += term;
    }
    const double rounding =
        (out.product.abs().to_double() + 1.0) * static_cast<double>(mags.size()) *
        std::ldexp(1.0, -static_cast<int>(bits) + 1);
    out.allowed = 1.01 * (out.whole.error_bound + propagated + rounding);
    out.residual = (out.whole.value - out.product).abs().to_double();
    return out;
}

AngleTable frobenius_angles(std::int64_t p, int precision_bits)
{
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw std::invalid_argument("frobenius_angles: p must be an odd prime");
    const Modulus q(p);
    // K(a,1;p) = K(1,a;p)
    auto row = kloosterman_row(1, q, precision_bits);
    const mpfr_prec_t bits = row.working_bits;

    AngleTable table;
    table.p = p;
    table.sum_error = row.error_bound;
    BigFloat two_sqrt_p(static_cast<long>(p), bits);
    mpfr_sqrt(two_sqrt_p.get(), two_sqrt_p.get(), MPFR_RNDN);
    mpfr_mul_2ui(two_sqrt_p.get(), two_sqrt_p.get(), 1, MPFR_RNDN);
    const double weil_slack = row.error_bound + std::ldexp(two_sqrt_p.to_double(), -static_cast<int>(bits) + 2);

    for (std::int64_t a = 1; a < p; ++a) {
        BigFloat& k = row.values[static_cast<std::size_t>(a)];
        const double excess = (k.abs() - two_sqrt_p).to_double();
        if (excess > weil_slack)
            throw WeilViolation("|K(" + std::to_string(a) + ")| exceeds 2 sqrt(" +
                                std::to_string(p) + ") by " + std::to_string(excess));
        BigFloat c(bits);
        mpfr_div(c.get(), k.get(), two_sqrt_p.get(), MPFR_RNDN);
        mpfr_neg(c.get(), c.get(), MPFR_RNDN);
        if (mpfr_cmp_si(c.get(), 1) > 0) mpfr_set_si(c.get(), 1, MPFR_RNDN);
        if (mpfr_cmp_si(c.get(), -1) < 0) mpfr_set_si(c.get(), -1, MPFR_RNDN);
        BigFloat theta(bits);
        mpfr_acos(theta.get(), c.get(), MPFR_RNDN);
        table.angles.push_back(std::move(theta));
        table.sums.push_back(std::move(k));
    }
    return table;
}

BigFloat monic_chebyshev_u(int n, const BigFloat& x)
{
    if (n < 0) throw std::invalid_argument("monic_chebyshev_u: n must be >= 0");
    const mpfr_prec_t bits = x.precision();
    BigFloat prev(1, bits);
    if (n == 0) return prev;
    BigFloat cur(x);
    for (int k = 2; k <= n; ++k) {
        BigFloat next = x * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

BigFloat t_moment_float(int n, const AngleTable& angles)
{
    if (n < 0) throw std::invalid_argument("t_moment_float: n must be >= 0");
    if (angles.angles.empty()) throw std::invalid_argument("t_moment_float: empty angle table");
    const mpfr_prec_t bits = angles.angles.front().precision();
    BigFloat scale(static_cast<long>(angles.p), bits);   // p^{n/2}
    mpfr_pow_ui(scale.get(), scale.get(), static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_sqrt(scale.get(), scale.get(), MPFR_RNDN);

    BigFloat total(bits);
    BigFloat x(bits);
    for (const auto& theta : angles.angles) {
        mpfr_cos(x.get(), theta.get(), MPFR_RNDN);
        mpfr_mul_2ui(x.get(), x.get(), 1, MPFR_RNDN);
        total += monic_chebyshev_u(n, x);
    }
    return total * scale;
}

} // namespace kloo
