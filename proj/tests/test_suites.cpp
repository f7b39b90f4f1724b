#include <gtest/gtest.h>

#include "suites.hpp"

using namespace kloo;
using namespace kloo::verify;

namespace {

std::vector<std::string> without_timing(const SuiteReport& report)
{
    std::vector<std::string> out;
    for (auto row : report.rows) {
        row.elapsed_ms = 0;
        out.push_back(to_csv(row));
    }
    return out;
}

} // namespace

TEST(Suites, NamesAreComplete)
{
    const std::vector<std::string> expected = {"salie", "s5", "s6", "estimate", "primepower", "congruence",
                                               "tbound", "multiplicativity", "segers", "hformula", "n4closed"};
    EXPECT_EQ(suite_names(), expected);
    EXPECT_THROW(run_suite("nope"), std::invalid_argument);
    SuiteOptions bad;
    bad.jobs = 0;
    EXPECT_THROW(run_suite("salie", bad), std::invalid_argument);
}

TEST(Suites, SmallGridsPass)
{
    SuiteOptions o;
    o.pmax = 40;
    o.nmax = 8;
    o.qmax = 60;
    o.rmax = 3;
    for (const auto& name : suite_names()) {
        if (name == "hformula" || name == "segers" || name == "n4closed") continue;
        const auto report = run_suite(name, o);
        EXPECT_FALSE(report.rows.empty()) << name;
        EXPECT_TRUE(report.passed()) << name;
    }
}

TEST(Suites, PoincareSuitesOnSmallOrders)
{
    SuiteOptions o;
    o.rmax = 3;
    o.p = 5;
    EXPECT_TRUE(run_suite("n4closed", o).passed());
    o.n = 6;
    EXPECT_TRUE(run_suite("segers", o).passed());
    EXPECT_TRUE(run_suite("hformula", o).passed());
}

TEST(Suites, PrimePowerExampleAtTwo)
{
    SuiteOptions o;
    o.n = 4;
    o.p = 2;
    o.rmax = 8;
    const auto report = run_suite("primepower", o);
    ASSERT_EQ(report.rows.size(), 4u);   // r = 5..8
    for (const auto& row : report.rows) {
        EXPECT_TRUE(row.match);
        EXPECT_EQ(row.value, to_string(BigInt(3 * (BigInt(1) << (3 * row.r)))));
    }
}

TEST(Suites, DeterministicAcrossRunsAndJobs)
{
    SuiteOptions o;
    o.pmax = 60;
    o.nmax = 7;
    const auto a = run_suite("estimate", o);
    const auto b = run_suite("estimate", o);
    o.jobs = 3;
    const auto c = run_suite("estimate", o);
    EXPECT_EQ(without_timing(a), without_timing(b));
    EXPECT_EQ(without_timing(a), without_timing(c));
}

TEST(Suites, RowsAreSorted)
{
    SuiteOptions o;
    o.pmax = 30;
    const auto report = run_suite("congruence", o);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        const auto& x = report.rows[i - 1];
        const auto& y = report.rows[i];
        EXPECT_LE(std::tie(x.n, x.q, x.p, x.r, x.method), std::tie(y.n, y.q, y.p, y.r, y.method));
    }
}

TEST(Formatting, CsvAndJson)
{
    EXPECT_EQ(csv_header(), "n,q,p,r,method,value,closed,match,elapsed_ms");
    ReportRow row;
    row.n = 4;
    row.q = 25;
    row.p = 5;
    row.r = 2;
    row.method = "exact-count";
    row.value = "37500";
    row.closed = "37500";
    row.match = true;
    row.elapsed_ms = 1.5;
    EXPECT_EQ(to_csv(row), "4,25,5,2,exact-count,37500,37500,true,1.500");
    const auto j = to_json(row);
    EXPECT_EQ(j["value"], "37500");
    EXPECT_EQ(j["q"], "25");
    row.closed.clear();
    EXPECT_TRUE(to_json(row)["closed"].is_null());
    row.method = "a,b";
    EXPECT_EQ(to_csv(row).substr(0, 15), "4,25,5,2,\"a,b\",");
}

TEST(ClosedMoment, Selection)
{
    EXPECT_EQ(closed_moment(4, Modulus(25)), BigInt(37500));
    EXPECT_EQ(closed_moment(1, Modulus(360)), BigInt(0));
    EXPECT_EQ(closed_moment(5, Modulus(9)), BigInt(-3645));
    EXPECT_EQ(closed_moment(6, Modulus(7)), moment_exact(6, Modulus(7)).value);
    EXPECT_FALSE(closed_moment(6, Modulus(3)).has_value());
    EXPECT_FALSE(closed_moment(4, Modulus(16)).has_value());
    for (std::int64_t q : {10, 15, 21, 35, 77, 98}) {
        for (int n = 1; n <= 6; ++n)
            if (auto v = closed_moment(n, Modulus(q))) EXPECT_EQ(*v, moment_exact(n, Modulus(q)).value) << n << " " << q;
    }
}

TEST(MomentColumn, SwitchesToDirectBeyondTheGuard)
{
    const auto small = moment_column(Modulus(243), 5);
    EXPECT_EQ(small[4].method, Method::exact_count);
    const auto large = moment_column(Modulus(2187), 3);
    EXPECT_EQ(large[2].method, Method::direct_float);
    EXPECT_EQ(large[1].value, BigInt(2187) * 2187 / 3 * 2);
    EXPECT_EQ(large[2].value, 0);
}

TEST(NegationSearch, PairsAreUnorderedAndStable)
{
    const auto pairs = negation_search(2, 3);
    EXPECT_FALSE(pairs.empty());
    for (const auto& pr : pairs) {
        EXPECT_LT(pr.l1, pr.l2);
        EXPECT_TRUE(pr.stable);
        const auto a = kloosterman(pr.l1, 1, Modulus(8)), b = kloosterman(pr.l2, 1, Modulus(8));
        EXPECT_LE((a.value + b.value).abs().to_double(), a.error_bound + b.error_bound);
    }
    EXPECT_THROW(negation_search(4, 2), std::invalid_argument);
}
