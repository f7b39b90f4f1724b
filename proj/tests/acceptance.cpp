// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "kloo/closed_forms.hpp"
#include "kloo/kloosterman.hpp"
#include "kloo/moments.hpp"
#include "kloo/poincare.hpp"
#include "suites.hpp"

using namespace kloo;
using namespace kloo::verify;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void fail(const std::string& what)
    {
        if (ok) detail << "first failure: " << what << "; ";
        ok = false;
    }
};

int jobs()
{
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SuiteOptions options()
{
    SuiteOptions o;
    o.jobs = jobs();
    return o;
}

void absorb(Outcome& out, const std::vector<ReportRow>& rows, const std::string& label)
{
    std::size_t bad = 0;
    for (const auto& row : rows) {
        if (row.match) continue;
        if (bad++ == 0)
            out.fail(label + " n=" + std::to_string(row.n) + " q=" + std::to_string(row.q) + " value " + row.value +
                     (row.closed.empty() ? "" : " vs " + row.closed));
    }
    out.detail << label << ": " << rows.size() << " rows, " << bad << " failing; ";
    if (rows.empty()) out.fail(label + " produced no rows");
}

Outcome suite_criterion(const std::string& name)
{
    Outcome out;
    absorb(out, run_suite(name, options()).rows, name);
    return out;
}

bool has_row(const std::vector<ReportRow>& rows, int n, std::int64_t q)
{
    for (const auto& row : rows)
        if (row.n == n && row.q == q) return true;
    return false;
}

// The prime-power sweep is the slowest part; both criteria share one run.
const std::vector<ReportRow>& prime_power_rows()
{
    static const std::vector<ReportRow> rows = run_suite("primepower", options()).rows;
    return rows;
}

Outcome criterion_vanishing_law()
{
    Outcome out;
    std::vector<ReportRow> odd;
    for (const auto& row : prime_power_rows())
        if (row.n % 2 == 1 && row.n <= 9) odd.push_back(row);
    absorb(out, odd, "odd n");
    for (int n = 3; n <= 9; n += 2) {
        for (auto p : primes_up_to(1 << 14)) {
            std::int64_t q = p;
            for (int r = 1; q <= (1 << 14); ++r, q *= p) {
                const bool wanted = p == 2 ? (r >= 2 && r <= 12) : q / p > n;
                if (wanted && !has_row(odd, n, q)) out.fail("missing grid point n=" + std::to_string(n) + " q=" + std::to_string(q));
            }
        }
    }
    return out;
}

Outcome criterion_even_law()
{
    Outcome out;
    std::vector<ReportRow> even;
    for (const auto& row : prime_power_rows())
        if (row.n % 2 == 0) even.push_back(row);
    absorb(out, even, "even n");
    const std::vector<std::tuple<int, std::int64_t, int, int>> required = {
        {4, 3, 2, 6}, {4, 5, 2, 4}, {6, 3, 3, 6}, {6, 5, 2, 4}, {8, 3, 3, 5},
        {4, 2, 5, 10}, {6, 2, 6, 9}, {8, 2, 6, 8}};
    for (auto [n, p, r0, r1] : required)
        for (int r = r0; r <= r1; ++r) {
            const std::int64_t q = ipow(p, static_cast<unsigned long>(r)).get_si();
            if (!has_row(even, n, q)) out.fail("missing point n=" + std::to_string(n) + " q=" + std::to_string(q));
        }
    return out;
}

Outcome criterion_r2_corrections()
{
    Outcome out;
    int checked = 0;
    for (auto [n, p] : std::vector<std::pair<int, std::int64_t>>{{5, 3}, {7, 3}, {9, 3}, {7, 5}}) {
        if (p * p <= n) {
            out.detail << "(" << n << "," << p << ") skipped, p^2 <= n; ";
            continue;
        }
        ++checked;
        const BigInt exact = moment_exact(n, Modulus(p * p)).value;
        if (odd_n_p2_closed(n, p) != exact) out.fail("odd n=" + std::to_string(n) + " p=" + std::to_string(p));
    }
    for (int n : {8, 10, 12}) {
        ++checked;
        if (even_n_p2_correction(n, 3) != moment_exact(n, Modulus(9)).value)
            out.fail("even n=" + std::to_string(n) + " p=3");
    }
    out.detail << checked << " pairs compared; ";
    return out;
}

Outcome criterion_s6()
{
    Outcome out = suite_criterion("s6");
    int checked = 0;
    for (auto p : primes_up_to(200)) {
        if (p < 7) continue;
        ++checked;
        const BigInt a = a_p(p);
        if (abs(a) >= 2 * p) out.fail("|a_p| >= 2p at p=" + std::to_string(p));
    }
    out.detail << checked << " a_p bounds; ";
    return out;
}

Outcome criterion_multiplicativity()
{
    Outcome out;
    const auto rows = run_suite("multiplicativity", options()).rows;
    absorb(out, rows, "multiplicativity");
    for (std::int64_t q : {15, 21, 35, 45, 63, 77})
        for (int n = 1; n <= 6; ++n)
            if (!has_row(rows, n, q)) out.fail("missing q=" + std::to_string(q));
    return out;
}

Outcome criterion_poincare()
{
    Outcome out;
    for (auto [n, p] : std::vector<std::pair<int, std::int64_t>>{{6, 5}, {6, 7}, {8, 5}, {6, 2}, {8, 2}}) {
        const FittedForm f = fit_segers(n, p, torus_counts(n, p, default_order(p)));
        if (f.C != igusa_constants(n, p).C) out.fail("Segers C at n=" + std::to_string(n) + " p=" + std::to_string(p));
        out.detail << "C(" << n << "," << p << ")=" << f.C.get_str() << " ";
    }
    out.detail << "; ";
    for (auto [n, p, order] : std::vector<std::tuple<int, std::int64_t, int>>{{6, 5, 4}, {6, 7, 3}})
        if (!verify_h_formula(n, p, order)) out.fail("h-formula at n=" + std::to_string(n) + " p=" + std::to_string(p));
    out.detail << "h-formula checked; ";

    const auto rows = run_suite("n4closed", options()).rows;
    std::vector<ReportRow> series, law;
    for (const auto& row : rows) (row.method == "exact-count" ? law : series).push_back(row);
    absorb(out, series, "n=4 series to order 8");
    for (std::int64_t p : {2, 3, 5, 7})
        if (!has_row(series, 4, p)) out.fail("n=4 series missing p=" + std::to_string(p));
    absorb(out, law, "V_4(2^r) law");
    for (int r = 4; r <= 10; ++r)
        if (!has_row(law, 4, std::int64_t{1} << r)) out.fail("V_4 law missing r=" + std::to_string(r));
    return out;
}

Outcome criterion_oracles()
{
    Outcome out;
    std::vector<std::function<std::vector<ReportRow>()>> tasks;
    for (std::int64_t q = 2; q <= max_dp_modulus(); ++q) {
        const Modulus m(q);
        if (!m.is_prime_power()) continue;
        const double phi = euler_phi(m).get_d();
        for (int n = 2; n <= 12; ++n) {
            if (std::pow(phi, n - 1) > 1e7) break;
            tasks.push_back([q, n]() {
                ReportRow row;
                row.n = n;
                row.q = q;
                row.value = to_string(count_W(n, Modulus(q)));
                row.closed = to_string(count_W_bruteforce(n, Modulus(q)));
                row.match = row.value == row.closed;
                return std::vector<ReportRow>{row};
            });
        }
    }
    absorb(out, run_pool(tasks, jobs()), "W vs enumeration");

    tasks.clear();
    for (std::int64_t q = 2; q <= 1024; ++q) {
        const Modulus m(q);
        if (!m.is_prime_power()) continue;
        tasks.push_back([q]() {
            const auto direct = moments_direct(8, Modulus(q));
            std::vector<ReportRow> rows;
            for (int n = 1; n <= 8; ++n) {
                ReportRow row;
                row.n = n;
                row.q = q;
                row.value = to_string(direct[n - 1].value);
                row.closed = to_string(moment_exact(n, Modulus(q)).value);
                row.match = row.value == row.closed;
                rows.push_back(row);
            }
            return rows;
        });
    }
    absorb(out, run_pool(tasks, jobs()), "direct vs exact");
    return out;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"Salie identities, 5 <= p <= 200", [] { return suite_criterion("salie"); }},
        {"S5 identity, 7 <= p <= 200", [] { return suite_criterion("s5"); }},
        {"S6 identity and coefficient bounds", criterion_s6},
        {"estimate bounds, p <= 500, 4 <= n <= 12", [] { return suite_criterion("estimate"); }},
        {"prime-power vanishing law", criterion_vanishing_law},
        {"prime-power even law", criterion_even_law},
        {"r = 2 corrections", criterion_r2_corrections},
        {"congruence mod p^2", [] { return suite_criterion("congruence"); }},
        {"T-values and T bound", [] { return suite_criterion("tbound"); }},
        {"multiplicativity and K-level CRT", criterion_multiplicativity},
        {"Poincare series layer", criterion_poincare},
        {"oracle equivalence", criterion_oracles},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += out.ok ? 0 : 1;
        std::printf("criterion %2zu %s  %s (%.1fs) %s\n", i + 1, out.ok ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    secs, out.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
