#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kloo/closed_forms.hpp"
#include "kloo/kloosterman.hpp"
#include "kloo/moments.hpp"
#include "kloo/poincare.hpp"
#include "suites.hpp"

namespace py = pybind11;
using namespace kloo;

namespace {

py::int_ to_py(const BigInt& x)
{
    return py::reinterpret_steal<py::int_>(PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

BigInt from_py(const py::int_& x)
{
    const std::string digits = py::str(py::handle(x));
    return BigInt(digits);
}

py::object fraction(const Rational& x)
{
    static py::object cls = py::module_::import("fractions").attr("Fraction");
    return cls(to_string(x));
}

py::list coeffs(const TruncatedSeries& s)
{
    py::list out;
    for (const auto& c : s.coeffs) out.append(fraction(c));
    return out;
}

// The counting caches take their own locks, so long counts run without the GIL.
template <class F>
auto unlocked(F&& f)
{
    py::gil_scoped_release release;
    return f();
}

} // namespace

PYBIND11_MODULE(_kloo, m)
{
    m.doc() = "Exact Kloosterman sums and power moments";

    py::register_exception<GuardRefusal>(m, "GuardRefusal");
    py::register_exception<PrecisionExhausted>(m, "PrecisionExhausted");
    py::register_exception<CertificationFailed>(m, "CertificationFailed");

    m.attr("DEFAULT_PRECISION_BITS") = kDefaultPrecisionBits;
    m.def("max_dp_modulus", &max_dp_modulus);

    m.def(
        "kloosterman",
        [](std::int64_t u, std::int64_t v, std::int64_t q, int bits) {
            const KloostermanValue k = unlocked([&] { return kloo::kloosterman(u, v, Modulus(q), bits); });
            py::dict d;
            d["value"] = k.value.to_string(30);
            d["approx"] = k.value.to_double();
            d["nearest_integer"] = to_py(k.value.round());
            d["error_bound"] = k.error_bound;
            return d;
        },
        py::arg("u"), py::arg("v"), py::arg("q"), py::arg("precision_bits") = kDefaultPrecisionBits);

    m.def("moment_exact", [](int n, std::int64_t q) { return to_py(unlocked([&] { return moment_exact(n, Modulus(q)).value; })); },
          py::arg("n"), py::arg("q"));
    m.def(
        "moments_direct",
        [](int n_max, std::int64_t q, int bits) {
            const auto rows = unlocked([&] { return moments_direct(n_max, Modulus(q), bits); });
            py::list out;
            for (const auto& r : rows) out.append(to_py(r.value));
            return out;
        },
        py::arg("n_max"), py::arg("q"), py::arg("precision_bits") = kDefaultPrecisionBits);
    m.def("count_W", [](int n, std::int64_t q) { return to_py(unlocked([&] { return count_W(n, Modulus(q)); })); });
    m.def("count_V", [](int n, std::int64_t q) { return to_py(unlocked([&] { return count_V(n, Modulus(q)); })); });
    m.def("count_W_bruteforce",
          [](int n, std::int64_t q) { return to_py(unlocked([&] { return count_W_bruteforce(n, Modulus(q)); })); });
    m.def("singular_census", [](int n, std::int64_t p) { return to_py(singular_census(n, p)); });

    m.def("closed_moment", [](int n, std::int64_t q) -> py::object {
        auto v = verify::closed_moment(n, Modulus(q));
        return v ? py::object(to_py(*v)) : py::object(py::none());
    });
    m.def("salie_moments", [](std::int64_t p) {
        const auto s = salie_moments(p);
        return py::make_tuple(to_py(s.s2), to_py(s.s3), to_py(s.s4));
    });
    m.def("a_p", [](std::int64_t p) { return to_py(a_p(p)); });
    m.def("eta_coefficient", [](int p) { return to_py(eta_coefficient(p)); });
    m.def("s5_closed", [](std::int64_t p) { return to_py(s5_closed(p)); });
    m.def("s6_closed", [](std::int64_t p) { return to_py(s6_closed(p)); });
    m.def("prime_power_closed", [](int n, std::int64_t p, int r) -> py::object {
        auto v = prime_power_closed(n, p, r);
        return v ? py::object(to_py(*v)) : py::object(py::none());
    });
    m.def("convert_S_to_T", [](std::int64_t p, const std::vector<py::int_>& s) {
        std::vector<BigInt> in;
        for (const auto& x : s) in.push_back(from_py(x));
        py::list out;
        for (const auto& t : convert_S_to_T(p, in)) out.append(to_py(t));
        return out;
    });

    m.def("poincare_series", [](int n, std::int64_t p, int order) {
        return coeffs(unlocked([&] { return poincare_series(n, p, order); }));
    });
    m.def("igusa_series", [](int n, std::int64_t p, int order) {
        return coeffs(unlocked([&] { return p_to_z(poincare_series(n, p, order + 1)); }));
    });
    m.def("fit_segers", [](int n, std::int64_t p, int r_max) {
        const FittedForm f = unlocked([&] {
            const auto counts = torus_counts(n, p, r_max);
            return n == 4 ? fit_segers_n4(p, counts) : fit_segers(n, p, counts);
        });
        return to_json(f).dump();
    });
    m.def("verify_h_formula", [](int n, std::int64_t p, int order) { return unlocked([&] { return verify_h_formula(n, p, order); }); });

    m.def("suite_names", &verify::suite_names);
    m.def(
        "run_suite",
        [](const std::string& name, std::optional<std::int64_t> pmax, std::optional<int> nmax, std::optional<int> rmax,
           std::optional<std::int64_t> qmax, std::optional<int> n, std::optional<std::int64_t> p, int jobs) {
            verify::SuiteOptions o;
            o.pmax = pmax;
            o.nmax = nmax;
            o.rmax = rmax;
            o.qmax = qmax;
            o.n = n;
            o.p = p;
            o.jobs = jobs;
            const auto report = unlocked([&] { return verify::run_suite(name, o); });
            std::vector<std::string> rows;
            for (const auto& row : report.rows) rows.push_back(verify::to_json(row).dump());
            return rows;
        },
        py::arg("name"), py::kw_only(), py::arg("pmax") = py::none(), py::arg("nmax") = py::none(),
        py::arg("rmax") = py::none(), py::arg("qmax") = py::none(), py::arg("n") = py::none(), py::arg("p") = py::none(),
        py::arg("jobs") = 1);
}
