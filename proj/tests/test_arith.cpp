#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "kloo/arith.hpp"

using namespace kloo;

namespace {

std::int64_t naive_phi(std::int64_t q)
{
    std::int64_t count = 0;
    for (std::int64_t x = 1; x <= q; ++x)
        if (std::gcd(x, q) == 1) ++count;
    return count;
}

// Random coprime pair (q1, q2) with q1, q2 >= 1.
std::pair<std::int64_t, std::int64_t> coprime_pair(std::mt19937_64& rng, std::int64_t limit)
{
    std::uniform_int_distribution<std::int64_t> dist(1, limit);
    for (;;) {
        const std::int64_t a = dist(rng), b = dist(rng);
        if (std::gcd(a, b) == 1 && a * b >= 2) return {a, b};
    }
}

} // namespace

TEST(Modulus, FactorsAreSortedAndMultiplyBack)
{
    for (std::int64_t q = 2; q <= 5000; ++q) {
        const Modulus m(q);
        std::int64_t product = 1, last = 0;
        for (const auto& f : m.factors()) {
            EXPECT_GT(f.p, last);
            EXPECT_GE(f.exponent, 1);
            EXPECT_TRUE(is_prime(f.p));
            last = f.p;
            product *= f.value();
        }
        EXPECT_EQ(product, q);
    }
    EXPECT_THROW(Modulus(1), std::invalid_argument);
    EXPECT_THROW(Modulus(0), std::invalid_argument);
}

TEST(ModInverse, Examples)
{
    EXPECT_EQ(mod_inverse(1, 7), 1);
    EXPECT_EQ(mod_inverse(3, 7), 5);
    EXPECT_THROW(mod_inverse(2, 4), NonUnitError);
    try {
        mod_inverse(2, 4);
    } catch (const NonUnitError& e) {
        EXPECT_NE(std::string(e.what()).find("non-unit"), std::string::npos);
    }
}

TEST(ModInverse, InvolutionForEveryModulusUpTo10000)
{
    for (std::int64_t m = 2; m <= 10000; m += (m < 500 ? 1 : 37)) {
        for (std::int64_t x = 1; x < m; ++x) {
            if (std::gcd(x, m) != 1) continue;
            const std::int64_t y = mod_inverse(x, m);
            ASSERT_GE(y, 0);
            ASSERT_LT(y, m);
            ASSERT_EQ(static_cast<__int128>(x) * y % m, 1 % m);
            ASSERT_EQ(mod_inverse(y, m), x);
        }
    }
}

TEST(ModInverse, TableMatchesPointwise)
{
    for (std::int64_t m : {2, 9, 12, 97, 1024}) {
        const auto table = inverse_table(m);
        for (std::int64_t x = 0; x < m; ++x)
            EXPECT_EQ(table[x], std::gcd(x, m) == 1 ? mod_inverse(x, m) : 0);
    }
}

TEST(EulerPhi, Examples)
{
    EXPECT_EQ(euler_phi(Modulus(27)), 18);
    EXPECT_EQ(euler_phi(Modulus(7)), 6);
    EXPECT_EQ(euler_phi(Modulus(12)), 4);
}

TEST(EulerPhi, AgreesWithCountingAndIsMultiplicative)
{
    for (std::int64_t q = 2; q <= 2000; ++q) EXPECT_EQ(euler_phi_small(Modulus(q)), naive_phi(q));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        auto [a, b] = coprime_pair(rng, 3000);
        if (a == 1 || b == 1) continue;
        EXPECT_EQ(euler_phi(Modulus(a * b)), euler_phi(Modulus(a)) * euler_phi(Modulus(b)));
    }
}

TEST(JacobiSymbol, Examples)
{
    EXPECT_EQ(jacobi_p_over_3(7), 1);
    EXPECT_EQ(jacobi_p_over_3(5), -1);
    EXPECT_EQ(jacobi_p_over_3(13), 1);
    EXPECT_THROW(jacobi_p_over_3(3), std::invalid_argument);
    EXPECT_EQ(symbol_p_over_3(3), 0);
    // quadratic reciprocity: (p/3) is decided by p mod 3
    for (auto p : primes_up_to(500)) {
        if (p <= 3) continue;
        const std::int64_t residue = p % 3;
        EXPECT_EQ(jacobi_p_over_3(p), residue == 1 ? 1 : -1);
    }
}

TEST(Binomial, ExamplesAndConvention)
{
    EXPECT_EQ(binomial(6, 3), 20);
    EXPECT_EQ(binomial(6, -1), 0);
    EXPECT_EQ(binomial(3, 1), 3);
    EXPECT_EQ(binomial(3, 4), 0);
}

TEST(Binomial, SymmetryAndPascalUpTo64)
{
    for (long n = 0; n <= 64; ++n)
        for (long k = -1; k <= n + 1; ++k) {
            EXPECT_EQ(binomial(n, k), binomial(n, n - k));
            if (n >= 1) EXPECT_EQ(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
        }
    EXPECT_EQ(binomial(64, 32).get_str(), "1832624140942590534");
}

TEST(CrtSplit, Examples)
{
    // exhaustive oracle: the unique (v1, v2) in [0,3) x [0,5) with v = v1*25 + v2*9 mod 15
    std::vector<std::pair<std::int64_t, std::int64_t>> found;
    for (std::int64_t a = 0; a < 3; ++a)
        for (std::int64_t b = 0; b < 5; ++b)
            if ((a * 25 + b * 9) % 15 == 1) found.emplace_back(a, b);
    ASSERT_EQ(found.size(), 1u);
    EXPECT_EQ(crt_split_v(1, 3, 5), found.front());
    EXPECT_EQ(crt_split_v(0, 7, 11), std::make_pair(std::int64_t{0}, std::int64_t{0}));
    for (std::int64_t v = -20; v <= 20; ++v) EXPECT_EQ(crt_split_v(v, 1, 13).first, 0);
    for (std::int64_t v = -20; v <= 20; ++v) EXPECT_EQ(crt_split_v(v, 1, 13).second, mod(v, 13));
    EXPECT_THROW(crt_split_v(1, 4, 6), std::invalid_argument);
}

TEST(CrtSplit, CongruenceForAllSmallProducts)
{
    for (std::int64_t q1 = 1; q1 <= 200; ++q1)
        for (std::int64_t q2 = 1; q1 * q2 <= 200; ++q2) {
            if (std::gcd(q1, q2) != 1) continue;
            const std::int64_t q = q1 * q2;
            for (std::int64_t v = 0; v < q; ++v) {
                auto [v1, v2] = crt_split_v(v, q1, q2);
                ASSERT_GE(v1, 0);
                ASSERT_LT(v1, q1);
                ASSERT_GE(v2, 0);
                ASSERT_LT(v2, q2);
                ASSERT_EQ(mod(v1 * q2 * q2 + v2 * q1 * q1 - v, q), 0) << v << " " << q1 << " " << q2;
            }
        }
}

TEST(Rational, StringRoundTrip)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> dist(-100000, 100000);
    for (int i = 0; i < 1000; ++i) {
        long den = dist(rng);
        if (den == 0) den = 1;
        Rational x(dist(rng), den);
        x.canonicalize();
        const std::string s = to_string(x);
        EXPECT_EQ(parse_rational(s), x) << s;
        EXPECT_EQ(s.find('/') == std::string::npos, x.get_den() == 1);
    }
    EXPECT_EQ(to_string(Rational(-20, 9)), "-20/9");
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}

TEST(Rational, ArithmeticStaysCanonical)
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> dist(-5000, 5000);
    auto draw = [&]() {
        long den = dist(rng);
        if (den == 0) den = 7;
        Rational x(dist(rng), den);
        x.canonicalize();
        return x;
    };
    for (int i = 0; i < 2000; ++i) {
        const Rational a = draw(), b = draw();
        for (const Rational& c : {Rational(a + b), Rational(a - b), Rational(a * b)}) {
            EXPECT_GT(c.get_den(), 0);
            EXPECT_EQ(gcd(c.get_num(), c.get_den()), 1);
        }
    }
}

TEST(Powers, RationalNegativeExponents)
{
    EXPECT_EQ(rpow(Rational(2, 3), -2), Rational(9, 4));
    EXPECT_EQ(rpow(Rational(5), 0), 1);
    EXPECT_EQ(ipow(3, 40).get_str(), "12157665459056928801");
    EXPECT_EQ(floor_div(-7, 2), -4);
}
