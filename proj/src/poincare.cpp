#include "kloo/poincare.hpp"

#include "kloo/closed_forms.hpp"
#include "kloo/moments.hpp"

namespace kloo {

namespace {

Rational rat(std::int64_t x) { return Rational(BigInt(static_cast<long>(x))); }

std::int64_t prime_power(std::int64_t p, int r) { return ipow(p, static_cast<unsigned long>(r)).get_si(); }

Rational torus_measure(std::int64_t p, int dims) { return rpow(rat(p - 1) / rat(p), dims); }

void require_window(const std::map<int, BigInt>& counts, const char* who)
{
    if (counts.size() < 2) throw std::invalid_argument(std::string(who) + ": need at least two counts");
    int expect = counts.begin()->first;
    if (expect < 1) throw std::invalid_argument(std::string(who) + ": r must be >= 1");
    for (const auto& [r, v] : counts) {
        if (r != expect++)
            throw std::invalid_argument(std::string(who) + ": counts must cover consecutive r");
    }
}

// Walks down from the top of the window while the law keeps matching.
void certify(FittedForm& form, const std::map<int, BigInt>& counts)
{
    form.window_first = counts.begin()->first;
    form.window_last = counts.rbegin()->first;
    form.first_valid_r = form.window_last - 1;
    for (int r = form.window_last - 2; r >= form.window_first; --r) {
        if (form.predict(r) != Rational(counts.at(r))) break;
        form.first_valid_r = r;
    }
    form.certified = form.first_valid_r == form.window_first;
    form.matches_expected = form.C == form.expected_C;
}

BigInt quadric_points(int n, std::int64_t p)
{
    const long half = n / 2;
    return (ipow(p, static_cast<unsigned long>(half - 2)) + 1) *
           (ipow(p, static_cast<unsigned long>(half - 1)) - 1);
}

} // namespace

std::map<int, BigInt> torus_counts(int n, std::int64_t p, int r_max)
{
    if (!is_prime(p)) throw std::invalid_argument("torus_counts: p must be prime");
    std::map<int, BigInt> out;
    for (int r = 1; r <= r_max; ++r) out[r] = count_V(n, Modulus(prime_power(p, r)));
    return out;
}

int default_order(std::int64_t p)
{
    int r = 0;
    std::int64_t q = 1;
    while (q * p <= max_dp_modulus()) {
        q *= p;
        ++r;
    }
    return r;
}

TruncatedSeries poincare_series_from_counts(int n, std::int64_t p, const std::map<int, BigInt>& counts)
{
    TruncatedSeries s;
    s.p = p;
    s.dims = n - 1;
    s.coeffs.push_back(torus_measure(p, n - 1));
    int expect = 1;
    for (const auto& [r, v] : counts) {
        if (r != expect++) throw std::invalid_argument("poincare_series: counts must start at r = 1 and be consecutive");
        s.coeffs.push_back(Rational(v) / Rational(ipow(p, static_cast<unsigned long>((n - 1) * r))));
    }
    for (auto& c : s.coeffs) c.canonicalize();
    return s;
}

TruncatedSeries poincare_series(int n, std::int64_t p, int order)
{
    if (n < 2) throw std::invalid_argument("poincare_series: n must be >= 2");
    if (order < 1) throw std::invalid_argument("poincare_series: order must be >= 1");
    return poincare_series_from_counts(n, p, torus_counts(n, p, order));
}

TruncatedSeries p_to_z(const TruncatedSeries& P)
{
    if (P.order() < 1) throw std::invalid_argument("p_to_z: series order must be >= 1");
    if (P.coeffs[0] != torus_measure(P.p, P.dims))
        throw std::invalid_argument("p_to_z: constant term is not the torus measure");
    TruncatedSeries Z{P.p, P.dims, {}};
    for (int j = 0; j < P.order(); ++j) Z.coeffs.push_back(P.coeffs[j] - P.coeffs[j + 1]);
    return Z;
}

TruncatedSeries z_to_p(const TruncatedSeries& Z)
{
    TruncatedSeries P{Z.p, Z.dims, {torus_measure(Z.p, Z.dims)}};
    for (const auto& z : Z.coeffs) P.coeffs.push_back(P.coeffs.back() - z);
    return P;
}

namespace {

TruncatedSeries n4_closed(std::int64_t p, int order, bool zeta)
{
    if (!is_prime(p)) throw std::invalid_argument("n4 closed form: p must be prime");
    TruncatedSeries out{p, 3, {}};
    if (p == 2) {
        const series::Coeffs num = zeta ? series::Coeffs{0, 0, 0, 1, -1, 1}
                                        : series::Coeffs{4, 0, 1, 1, 0, 1};
        out.coeffs = series::divide(num, {32, -32, 8}, order);
        return out;
    }
    const Rational P = rat(p);
    const series::Coeffs num =
        zeta ? series::Coeffs{P * P * (P * P - 5 * P + 7), P * (P * P - 2 * P - 5), P * P + P + 1}
             : series::Coeffs{P * P * (P * P - 2 * P + 1), P * (P * P - 2 * P - 2), P * P + P + 1};
    const series::Coeffs one_minus_sq = series::multiply(series::one_minus(1 / P, 1), series::one_minus(1 / P, 1), 2);
    out.coeffs = series::scale(series::divide(num, one_minus_sq, order), (P - 1) / rpow(P, 5));
    return out;
}

} // namespace

TruncatedSeries n4_closed_z(std::int64_t p, int order) { return n4_closed(p, order, true); }
TruncatedSeries n4_closed_p(std::int64_t p, int order) { return n4_closed(p, order, false); }

Rational FittedForm::predict(int r) const
{
    const Rational P = rat(p);
    if (shape == FormShape::double_pole) return ((r + 1) * C + B) * rpow(P, 2 * r);
    return B * rpow(P, (n - 2) * r) + C * rpow(P, (n / 2) * r);
}

FittedForm fit_segers(int n, std::int64_t p, const std::map<int, BigInt>& counts)
{
    if (n == 4) throw std::invalid_argument("fit_segers: n = 4 has a double pole, use fit_segers_n4");
    if (n < 6 || n % 2 == 1) throw std::invalid_argument("fit_segers: n must be even and >= 6");
    require_window(counts, "fit_segers");

    FittedForm form;
    form.shape = FormShape::simple_poles;
    form.n = n;
    form.p = p;
    const Rational P = rat(p);
    form.pole_bases = {1 / P, rpow(P, -(n / 2) + 1)};

    const int r2 = counts.rbegin()->first, r1 = r2 - 1;
    const Rational x1 = rpow(P, (n - 2) * r1), x2 = rpow(P, (n - 2) * r2);
    const Rational y1 = rpow(P, (n / 2) * r1), y2 = rpow(P, (n / 2) * r2);
    const Rational v1(counts.at(r1)), v2(counts.at(r2));
    const Rational det = x1 * y2 - x2 * y1;
    form.B = (v1 * y2 - v2 * y1) / det;
    form.C = (x1 * v2 - x2 * v1) / det;
    form.expected_C = igusa_constants(n, p).C;
    certify(form, counts);

    if (p != 2 && 2 * p >= n + 2 && !form.certified)
        throw CertificationFailed("fit_segers: V_" + std::to_string(n) + "(" + std::to_string(p) +
                                  "^r) leaves the two-pole law below r = " +
                                  std::to_string(form.first_valid_r));
    return form;
}

FittedForm fit_segers_n4(std::int64_t p, const std::map<int, BigInt>& counts)
{
    require_window(counts, "fit_segers_n4");
    FittedForm form;
    form.shape = FormShape::double_pole;
    form.n = 4;
    form.p = p;
    const Rational P = rat(p);
    form.pole_bases = {1 / P};

    const int r2 = counts.rbegin()->first, r1 = r2 - 1;
    const Rational y1 = Rational(counts.at(r1)) / rpow(P, 2 * r1);
    const Rational y2 = Rational(counts.at(r2)) / rpow(P, 2 * r2);
    form.C = y2 - y1;
    form.B = y2 - (r2 + 1) * form.C;
    form.expected_C = p == 2 ? Rational(3, 2) : 3 * (P - 1) * (P - 1) / (P * P);
    form.expected_C.canonicalize();
    certify(form, counts);

    if (p != 2 && !form.certified)
        throw CertificationFailed("fit_segers_n4: V_4(" + std::to_string(p) +
                                  "^r) leaves the double-pole law below r = " +
                                  std::to_string(form.first_valid_r));
    return form;
}

HFormulaCheck check_h_formula(int n, std::int64_t p, int order)
{
    if (n < 4 || n % 2 == 1) throw std::invalid_argument("check_h_formula: n must be even and >= 4");
    if (p < 3 || !is_prime(p) || 2 * p < n + 2)
        throw std::invalid_argument("check_h_formula: requires an odd prime p >= n/2 + 1");
    if (order < 2) throw std::invalid_argument("check_h_formula: order must be >= 2");

    HFormulaCheck out;
    out.counted = p_to_z(poincare_series(n, p, order));
    const int z_order = out.counted.order();

    const Rational P = rat(p);
    const Rational N(torus_zero_count_mod_p(n, p));
    const Rational L(binomial(n - 1, n / 2 - 1));
    const Rational Q(quadric_points(n, p));
    const Rational pm1 = P - 1;
    const Rational inv_p = 1 / P;
    const Rational inv_p_n2 = rpow(P, -(n - 2));

    using series::Coeffs;
    const Coeffs simple = series::one_minus(inv_p, 1);           // 1 - t/p
    const Coeffs paired = series::one_minus(inv_p_n2, 2);        // 1 - p^{-n+2} t^2
    Coeffs total{rpow(pm1, n - 1) - N};
    total = series::add(total, series::divide(Coeffs{0, (N - L * pm1) * pm1 * inv_p}, simple, z_order), z_order);
    total = series::add(total,
                        series::divide(Coeffs{0, 0, L * (rpow(P, n - 2) - 1 - Q) * pm1 * inv_p_n2}, paired, z_order),
                        z_order);
    total = series::add(total,
                        series::divide(Coeffs{0, 0, 0, L * Q * pm1 * pm1 * rpow(P, -(n - 1))},
                                       series::multiply(simple, paired, 3), z_order),
                        z_order);
    out.predicted = TruncatedSeries{p, n - 1, series::scale(total, rpow(P, -(n - 1)))};
    for (auto& c : out.predicted.coeffs) c.canonicalize();
    return out;
}

bool verify_h_formula(int n, std::int64_t p, int order) { return check_h_formula(n, p, order).holds(); }

BigInt sformula_from_counts(int n, std::int64_t p, int r)
{
    if (r < 2) throw std::invalid_argument("sformula_from_counts: r must be >= 2");
    if (!is_prime(p)) throw std::invalid_argument("sformula_from_counts: p must be prime");
    const Modulus q(prime_power(p, r));
    const BigInt upper = count_V(n, q);
    const BigInt lower = count_V(n, Modulus(q.value() / p));
    const BigInt numer = ipow(q.value(), 2) * (upper - ipow(p, static_cast<unsigned long>(n - 2)) * lower);
    const BigInt phi = euler_phi(q);
    if (numer % phi != 0) throw std::logic_error("sformula_from_counts: non-integral moment");
    return numer / phi;
}

nlohmann::json to_json(const TruncatedSeries& s)
{
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : s.coeffs) coeffs.push_back(to_string(c));
    return {{"p", std::to_string(s.p)}, {"dims", s.dims}, {"order", s.order()}, {"coeffs", coeffs}};
}

TruncatedSeries series_from_json(const nlohmann::json& j)
{
    TruncatedSeries s;
    s.p = std::stoll(j.at("p").get<std::string>());
    s.dims = j.at("dims").get<int>();
    for (const auto& c : j.at("coeffs")) s.coeffs.push_back(parse_rational(c.get<std::string>()));
    if (j.contains("order") && j.at("order").get<int>() != s.order())
        throw std::invalid_argument("series_from_json: order does not match the coefficient count");
    return s;
}

nlohmann::json to_json(const FittedForm& f)
{
    nlohmann::json bases = nlohmann::json::array();
    for (const auto& b : f.pole_bases) bases.push_back(to_string(b));
    return {{"shape", f.shape == FormShape::simple_poles ? "ABC" : "ABC2"},
            {"n", f.n},
            {"p", std::to_string(f.p)},
            {"B", to_string(f.B)},
            {"C", to_string(f.C)},
            {"pole_bases", bases},
            {"window", {f.window_first, f.window_last}},
            {"first_valid_r", f.first_valid_r},
            {"certified", f.certified},
            {"expected_C", to_string(f.expected_C)},
            {"matches_expected", f.matches_expected}};
}

} // namespace kloo
