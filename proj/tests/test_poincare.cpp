#include <gtest/gtest.h>

#include "kloo/closed_forms.hpp"
#include "kloo/moments.hpp"
#include "kloo/poincare.hpp"

using namespace kloo;

namespace {

Rational q_rat(long a, long b = 1)
{
    Rational x(a, b);
    x.canonicalize();
    return x;
}

// Coefficients of num/den by long division, written without the library helpers.
std::vector<Rational> expand(const std::vector<Rational>& num, const std::vector<Rational>& den, int order)
{
    std::vector<Rational> out;
    for (int i = 0; i <= order; ++i) {
        Rational c = i < static_cast<int>(num.size()) ? num[i] : Rational(0);
        for (int j = 1; j <= i && j < static_cast<int>(den.size()); ++j) c -= den[j] * out[i - j];
        out.push_back(c / den[0]);
    }
    return out;
}

} // namespace

TEST(Series, ConstantTermAndTrivialCase)
{
    for (std::int64_t p : {2, 3, 5}) {
        const auto P = poincare_series(4, p, 3);
        EXPECT_EQ(P.coeffs[0], rpow(q_rat(p - 1, p), 3));
        EXPECT_EQ(P.dims, 3);
        const auto two = poincare_series(2, p, 4);
        for (int r = 1; r <= 4; ++r) EXPECT_EQ(two.coeffs[r], q_rat(p - 1, p));
    }
    EXPECT_THROW(poincare_series(4, 3, 0), std::invalid_argument);
    EXPECT_THROW(poincare_series(5, 2, 12), GuardRefusal);
}

TEST(Series, FourthMomentAtTwoFollowsTheLinearLaw)
{
    const auto P = poincare_series(4, 2, 8);
    for (int r = 4; r <= 8; ++r) {
        const Rational v = P.coeffs[r] * rpow(Rational(8), r);
        EXPECT_EQ(v, q_rat(3, 2) * (r - 3) * rpow(Rational(2), 2 * r)) << r;
    }
}

TEST(Series, PZRoundTrip)
{
    for (int n : {3, 4, 6})
        for (std::int64_t p : {2, 3, 5}) {
            const auto P = poincare_series(n, p, std::min(4, default_order(p)));
            const auto Z = p_to_z(P);
            EXPECT_EQ(Z.order(), P.order() - 1);
            const auto back = z_to_p(Z);
            EXPECT_EQ(back, P);
        }
    TruncatedSeries bad{3, 3, {Rational(1), Rational(0)}};
    EXPECT_THROW(p_to_z(bad), std::invalid_argument);
}

TEST(Series, FourthMomentClosedForms)
{
    for (std::int64_t p : {3, 5, 7}) {
        const int order = default_order(p) - 1;
        const auto Z = p_to_z(poincare_series(4, p, order + 1));
        const Rational P(p);
        // ((p-1)/p^5) (p^2(p^2-5p+7) + p(p^2-2p-5) t + (p^2+p+1) t^2) / (1 - t/p)^2
        const Rational f = (P - 1) / (P * P * P * P * P);
        const auto expected = expand({f * P * P * (P * P - 5 * P + 7), f * P * (P * P - 2 * P - 5), f * (P * P + P + 1)},
                                     {1, -2 / P, 1 / (P * P)}, order);
        EXPECT_EQ(Z.coeffs, expected) << p;
        EXPECT_EQ(n4_closed_z(p, order), Z);
        EXPECT_EQ(n4_closed_p(p, order + 1).coeffs, poincare_series(4, p, order + 1).coeffs);
    }
    const auto Z2 = p_to_z(poincare_series(4, 2, 9));
    EXPECT_EQ(Z2.coeffs, expand({0, 0, 0, 1, -1, 1}, {32, -32, 8}, 8));
    EXPECT_EQ(n4_closed_p(2, 9).coeffs, expand({4, 0, 1, 1, 0, 1}, {32, -32, 8}, 9));
}

TEST(Segers, Examples)
{
    const auto f65 = fit_segers(6, 5, torus_counts(6, 5, 3));
    EXPECT_EQ(f65.C, q_rat(-8, 5));
    EXPECT_EQ(f65.C, igusa_constants(6, 5).C);
    EXPECT_TRUE(f65.certified);
    EXPECT_TRUE(f65.matches_expected);

    const auto f62 = fit_segers(6, 2, torus_counts(6, 2, 11));
    EXPECT_EQ(f62.C, -10);
    EXPECT_TRUE(f62.matches_expected);
    for (int r = f62.first_valid_r; r <= 11; ++r) EXPECT_EQ(f62.predict(r), Rational(count_V(6, Modulus(1 << r))));

    EXPECT_THROW(fit_segers(4, 5, torus_counts(4, 5, 3)), std::invalid_argument);
    EXPECT_THROW(fit_segers(6, 5, {{1, BigInt(1)}}), std::invalid_argument);
}

TEST(Segers, GoodPrimesObeyTheLawEverywhere)
{
    for (auto [n, p] : std::vector<std::pair<int, std::int64_t>>{{6, 5}, {6, 7}, {8, 5}, {8, 7}, {10, 7}, {6, 11}}) {
        const auto counts = torus_counts(n, p, default_order(p));
        const auto f = fit_segers(n, p, counts);
        EXPECT_TRUE(f.certified) << n << " " << p;
        EXPECT_EQ(f.first_valid_r, 1);
        EXPECT_EQ(f.C, igusa_constants(n, p).C) << n << " " << p;
        for (const auto& [r, v] : counts) EXPECT_EQ(f.predict(r), Rational(v));
    }
}

TEST(Segers, DisagreementIsReported)
{
    auto counts = torus_counts(6, 5, 4);
    counts[1] += 1;
    EXPECT_THROW(fit_segers(6, 5, counts), CertificationFailed);
    // small primes only report where the law starts
    const auto f = fit_segers(8, 3, torus_counts(8, 3, 6));
    EXPECT_GE(f.first_valid_r, 1);
    EXPECT_LE(f.first_valid_r, 5);
}

TEST(SegersN4, Examples)
{
    const auto f5 = fit_segers_n4(5, torus_counts(4, 5, 4));
    EXPECT_EQ(f5.C, q_rat(48, 25));
    EXPECT_TRUE(f5.matches_expected);

    const auto counts3 = torus_counts(4, 3, 5);
    const auto f3 = fit_segers_n4(3, counts3);
    for (int r = 1; r <= 5; ++r) EXPECT_EQ(f3.predict(r), Rational(counts3.at(r))) << r;

    const auto f2 = fit_segers_n4(2, torus_counts(4, 2, 10));
    EXPECT_EQ(f2.C, q_rat(3, 2));
    // ((r+1) C + B) = (3/2) r - 9/2
    EXPECT_EQ(f2.C + f2.B, q_rat(-9, 2));
    EXPECT_EQ(f2.first_valid_r, 4);
}

TEST(HFormula, Examples)
{
    EXPECT_TRUE(verify_h_formula(6, 5, 4));
    EXPECT_TRUE(verify_h_formula(6, 7, 3));
    EXPECT_TRUE(verify_h_formula(8, 5, 4));
    EXPECT_TRUE(verify_h_formula(4, 3, 6));
    EXPECT_THROW(verify_h_formula(8, 3, 4), std::invalid_argument);
    EXPECT_THROW(verify_h_formula(5, 7, 3), std::invalid_argument);
}

TEST(HFormula, MismatchWouldBeSeen)
{
    auto check = check_h_formula(6, 5, 3);
    ASSERT_TRUE(check.holds());
    check.counted.coeffs[1] += 1;
    EXPECT_FALSE(check.holds());
}

TEST(SFormula, Examples)
{
    EXPECT_EQ(sformula_from_counts(4, 3, 2), moment_exact(4, Modulus(9)).value);
    EXPECT_EQ(sformula_from_counts(6, 2, 6), binomial(5, 2) * 2 * (BigInt(1) << 24));
    for (std::int64_t p : {2, 3, 5, 7})
        for (int r = 2; ipow(p, static_cast<unsigned long>(r)) <= 2048; ++r)
            EXPECT_EQ(sformula_from_counts(2, p, r), ipow(p, static_cast<unsigned long>(2 * r - 1)) * (p - 1));
    EXPECT_THROW(sformula_from_counts(4, 3, 1), std::invalid_argument);
}

TEST(SFormula, AgreesWithMomentsAndTheEvenLaw)
{
    for (int n = 2; n <= 8; ++n)
        for (std::int64_t p : {2, 3, 5, 7})
            for (int r = 2; ipow(p, static_cast<unsigned long>(r)) <= 1024; ++r) {
                const BigInt s = sformula_from_counts(n, p, r);
                EXPECT_EQ(s, moment_exact(n, Modulus(ipow(p, static_cast<unsigned long>(r)).get_si())).value);
                if (n % 2 == 0 && p != 2 && 2 * p >= n + 2)
                    EXPECT_EQ(s, *prime_power_closed(n, p, r)) << n << " " << p << " " << r;
            }
}

TEST(Json, SeriesRoundTripAndShape)
{
    const auto P = poincare_series(4, 3, 4);
    const auto j = to_json(P);
    EXPECT_EQ(j["p"], "3");
    EXPECT_EQ(j["order"], 4);
    EXPECT_EQ(j["coeffs"][0], "8/27");
    EXPECT_EQ(series_from_json(j), P);
    const auto back = series_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(back, P);

    const auto f = to_json(fit_segers(6, 5, torus_counts(6, 5, 3)));
    EXPECT_EQ(f["C"], "-8/5");
    EXPECT_EQ(f["shape"], "ABC");
    EXPECT_TRUE(f["certified"].get<bool>());
}
