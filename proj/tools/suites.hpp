#pragma once

// Verification sweeps shared by the command-line tool, the acceptance runner
// and the Python module. Every sweep returns its rows in a fixed order.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kloo/moments.hpp"

namespace kloo::verify {

struct ReportRow {
    int n = 0;
    std::int64_t q = 0;
    std::int64_t p = 0;
    int r = 0;
    std::string method;
    std::string value;
    std::string closed;   // empty for inequality checks
    bool match = false;
    double elapsed_ms = 0;
    std::string check;    // what was compared, JSON output only
};

struct SuiteOptions {
    std::optional<std::int64_t> pmax;
    std::optional<int> nmax;
    std::optional<int> rmax;
    std::optional<std::int64_t> qmax;
    std::optional<int> n;
    std::optional<std::int64_t> p;
    int precision_bits = kDefaultPrecisionBits;
    int jobs = 1;
};

struct SuiteReport {
    std::string suite;
    std::vector<ReportRow> rows;
    bool passed() const;
    std::size_t failures() const;
};

const std::vector<std::string>& suite_names();

/// Runs a named sweep; throws std::invalid_argument for an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options = {});

/// Runs tasks on `jobs` threads; results keep the task order.
std::vector<ReportRow> run_pool(const std::vector<std::function<std::vector<ReportRow>()>>& tasks, int jobs);

/// Sorts rows by (n, q, p, r, method) keeping the original order of ties.
void sort_rows(std::vector<ReportRow>& rows);

std::string csv_header();
std::string to_csv(const ReportRow& row);
nlohmann::json to_json(const ReportRow& row);

/// S_n(q) for n in [1, n_max]: counted when q fits the counting guard,
/// otherwise summed directly with certified rounding.
std::vector<MomentRecord> moment_column(const Modulus& q, int n_max, int precision_bits = kDefaultPrecisionBits);

/// The printed closed formula for S_n(q) that applies to (n, q), if any;
/// composite moduli multiply the factor values.
std::optional<BigInt> closed_moment(int n, const Modulus& q);

/// Unordered pairs {l1, l2} of units with K(l1,1;q) + K(l2,1;q) = 0 numerically.
struct NegationPair {
    std::int64_t l1 = 0;
    std::int64_t l2 = 0;
    std::string value;         // K(l1,1;q), rounded for display
    bool stable = false;       // still cancels at doubled precision
};
std::vector<NegationPair> negation_search(std::int64_t p, int r, int precision_bits = kDefaultPrecisionBits);

} // namespace kloo::verify
