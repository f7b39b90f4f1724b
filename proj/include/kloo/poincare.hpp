#pragma once

// Poincare series of the unit-torus counts V_n(p^r),
//
//     P(t) = ((p-1)/p)^{n-1} + sum_{r>=1} V_n(p^r) (p^{-(n-1)} t)^r,
//
// its companion Igusa zeta function Z(t) via P = (p^{-k} #W - t Z) / (1 - t),
// and exact fits of the two-pole laws V_n(p^r) = B p^{(n-2) r} + C p^{(n/2) r}
// (n >= 6) and V_4(p^r) = ((r+1) C + B) p^{2r}.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kloo/arith.hpp"
#include "kloo/series.hpp"

namespace kloo {

class CertificationFailed : public std::runtime_error {
public:
    explicit CertificationFailed(const std::string& what) : std::runtime_error(what) {}
};

struct TruncatedSeries {
    std::int64_t p = 0;
    int dims = 0;                   // k = n - 1 variables
    std::vector<Rational> coeffs;   // c_0..c_R

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;
};

/// V_n(p^r) for r in [1, r_max] from the counting kernel.
std::map<int, BigInt> torus_counts(int n, std::int64_t p, int r_max);

/// Largest R with p^R within the counting guard.
int default_order(std::int64_t p);

TruncatedSeries poincare_series(int n, std::int64_t p, int order);
TruncatedSeries poincare_series_from_counts(int n, std::int64_t p, const std::map<int, BigInt>& counts);

/// Z from P: Z_j = P_j - P_{j+1}; one order lower than P.
TruncatedSeries p_to_z(const TruncatedSeries& P);
TruncatedSeries z_to_p(const TruncatedSeries& Z);

/// The n = 4 closed forms expanded to `order`: odd p and p = 2.
TruncatedSeries n4_closed_z(std::int64_t p, int order);
TruncatedSeries n4_closed_p(std::int64_t p, int order);

enum class FormShape { simple_poles, double_pole };   // ABC and ABC2

struct FittedForm {
    FormShape shape = FormShape::simple_poles;
    int n = 0;
    std::int64_t p = 0;
    Rational B;
    Rational C;
    std::vector<Rational> pole_bases;   // p^{-1}, p^{-n/2+1}
    int window_first = 0;
    int window_last = 0;
    int first_valid_r = 0;              // smallest r from which every window point obeys the law
    bool certified = false;             // all window points obey the law
    Rational expected_C;
    bool matches_expected = false;

    /// V_n(p^r) predicted by the fitted law.
    Rational predict(int r) const;
};

/// Exact fit of V_n(p^r) = B p^{(n-2) r} + C p^{(n/2) r} on the top two points
/// of the window, certified downward. Throws CertificationFailed when p >= n/2+1
/// (where the law holds for every r >= 1) and a window point disagrees.
FittedForm fit_segers(int n, std::int64_t p, const std::map<int, BigInt>& counts);

/// Exact fit of V_4(p^r) = ((r+1) C + B) p^{2r}. For odd p the expected
/// constant is 3 (p-1)^2 / p^2 and every r >= 1 must obey the law; for p = 2
/// it is 3/2 from the large-r law V_4(2^r) = (3/2)(r-3) 2^{2r}.
FittedForm fit_segers_n4(std::int64_t p, const std::map<int, BigInt>& counts);

struct HFormulaCheck {
    TruncatedSeries predicted;   // Z(t) from the pole formula
    TruncatedSeries counted;     // Z(t) from the counts
    bool holds() const { return predicted == counted; }
};

/// Compares the good-reduction pole formula for p^{n-1} Z(t) against the
/// counted series to order R - 1. Requires even n >= 4 and p >= n/2 + 1.
HFormulaCheck check_h_formula(int n, std::int64_t p, int order);
bool verify_h_formula(int n, std::int64_t p, int order);

/// S_n(p^r) = q^2/phi(q) (V_n(q) - p^{n-2} V_n(q/p)) for r >= 2.
BigInt sformula_from_counts(int n, std::int64_t p, int r);

nlohmann::json to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FittedForm& f);

} // namespace kloo
