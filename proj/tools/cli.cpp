#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "kloo/kloosterman.hpp"
#include "kloo/moments.hpp"
#include "suites.hpp"

namespace {

using namespace kloo;

enum Exit { ok = 0, mismatch = 1, usage = 2, refused = 3 };

struct Common {
    int precision_bits = kDefaultPrecisionBits;
    std::string format = "csv";
};

int cmd_eval(std::int64_t u, std::int64_t v, std::int64_t q, const Common& c)
{
    const KloostermanValue k = kloosterman(u, v, Modulus(q), c.precision_bits);
    std::ostringstream bound;
    bound << k.error_bound;
    const std::string value = k.value.to_string(30);
    const BigInt nearest = k.value.round();
    if (c.format == "json") {
        std::cout << nlohmann::json{{"u", std::to_string(u)},
                                    {"v", std::to_string(v)},
                                    {"q", std::to_string(q)},
                                    {"value", value},
                                    {"nearest_integer", to_string(nearest)},
                                    {"error_bound", bound.str()}}
                         .dump()
                  << "\n";
    } else {
        std::cout << "u,v,q,value,nearest_integer,error_bound\n"
                  << u << ',' << v << ',' << q << ',' << value << ',' << nearest << ',' << bound.str() << "\n";
    }
    return ok;
}

int cmd_moment(int n, std::int64_t q_value, const std::string& method, const Common& c)
{
    const Modulus q(q_value);
    const auto start = std::chrono::steady_clock::now();
    const std::optional<BigInt> closed = verify::closed_moment(n, q);

    verify::ReportRow row;
    row.n = n;
    row.q = q_value;
    row.p = q.is_prime_power() ? q.prime() : 0;
    row.r = q.is_prime_power() ? static_cast<int>(q.exponent()) : 0;
    row.closed = closed ? to_string(*closed) : "";
    if (method == "closed") {
        row.method = to_string(Method::closed_form);
        row.value = closed ? to_string(*closed) : "outside validity";
        row.match = closed.has_value();
    } else {
        const MomentRecord m = method == "direct" ? moment_direct(n, q, c.precision_bits) : moment_exact(n, q);
        row.method = to_string(m.method);
        row.value = to_string(m.value);
        row.match = !closed || row.value == row.closed;
    }
    row.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    if (c.format == "json")
        std::cout << verify::to_json(row).dump() << "\n";
    else
        std::cout << verify::csv_header() << "\n" << verify::to_csv(row) << "\n";
    if (method == "closed") return ok;
    return row.match ? ok : mismatch;
}

int cmd_verify(const std::string& suite, const verify::SuiteOptions& options, const Common& c)
{
    const verify::SuiteReport report = verify::run_suite(suite, options);
    if (c.format == "json") {
        for (const auto& row : report.rows) std::cout << verify::to_json(row).dump() << "\n";
    } else {
        std::cout << verify::csv_header() << "\n";
        for (const auto& row : report.rows) std::cout << verify::to_csv(row) << "\n";
    }
    std::cerr << suite << ": " << report.rows.size() << " rows, " << report.failures() << " mismatches\n";
    return report.passed() ? ok : mismatch;
}

int cmd_negation(std::int64_t p, int r, const Common& c)
{
    const auto pairs = verify::negation_search(p, r, c.precision_bits);
    if (c.format == "json") {
        for (const auto& pr : pairs)
            std::cout << nlohmann::json{{"l1", std::to_string(pr.l1)},
                                        {"l2", std::to_string(pr.l2)},
                                        {"K_l1", pr.value},
                                        {"flag", "numerically-zero"},
                                        {"stable_at_double_precision", pr.stable}}
                             .dump()
                      << "\n";
    } else {
        std::cout << "l1,l2,K_l1,flag,stable_at_double_precision\n";
        for (const auto& pr : pairs)
            std::cout << pr.l1 << ',' << pr.l2 << ',' << pr.value << ",numerically-zero,"
                      << (pr.stable ? "true" : "false") << "\n";
    }
    std::cerr << pairs.size() << " pairs\n";
    return ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Kloosterman sums and their power moments, computed exactly"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--precision-bits", common.precision_bits, "Working precision for direct sums")
            ->check(CLI::Range(64, 1 << 16));
        sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    };

    std::int64_t u = 0, v = 0, q = 0, p = 0;
    int n = 0, r = 0;
    std::string method = "exact";

    auto* eval = app.add_subcommand("eval", "Evaluate K(u,v;q)");
    eval->add_option("u", u)->required();
    eval->add_option("v", v)->required();
    eval->add_option("q", q)->required()->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40));
    add_common(eval);

    auto* moment = app.add_subcommand("moment", "Compute S_n(q)");
    moment->add_option("n", n)->required()->check(CLI::Range(1, 1000));
    moment->add_option("q", q)->required()->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40));
    moment->add_option("--method", method, "exact, direct or closed")
        ->check(CLI::IsMember({"exact", "direct", "closed"}));
    add_common(moment);

    verify::SuiteOptions options;
    std::string suite;
    auto* ver = app.add_subcommand("verify", "Run a verification sweep");
    ver->add_option("suite", suite)->required()->check(CLI::IsMember(verify::suite_names()));
    ver->add_option("--pmax", options.pmax);
    ver->add_option("--nmax", options.nmax);
    ver->add_option("--rmax", options.rmax);
    ver->add_option("--qmax", options.qmax);
    ver->add_option("--n", options.n);
    ver->add_option("--p", options.p);
    ver->add_option("--jobs", options.jobs)->check(CLI::Range(1, 256));
    add_common(ver);

    auto* neg = app.add_subcommand("negation-search", "List unit pairs with K(l1) = -K(l2) numerically");
    neg->add_option("p", p)->required();
    neg->add_option("r", r)->required()->check(CLI::Range(1, 64));
    add_common(neg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }
    options.precision_bits = common.precision_bits;

    try {
        if (*eval) return cmd_eval(u, v, q, common);
        if (*moment) return cmd_moment(n, q, method, common);
        if (*ver) return cmd_verify(suite, options, common);
        if (*neg) return cmd_negation(p, r, common);
    } catch (const GuardRefusal& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return refused;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return refused;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return mismatch;
    }
    return usage;
}
