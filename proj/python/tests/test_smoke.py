import math
from fractions import Fraction

import pytest

import kloo


def test_kloosterman_values():
    k = kloo.kloosterman(0, 0, 35)
    assert k["nearest_integer"] == 24
    assert k["error_bound"] < 1e-20
    five = kloo.kloosterman(1, 1, 5)
    assert math.isclose(five["approx"], 2 + 2 * math.cos(4 * math.pi / 5), abs_tol=1e-14)
    assert five["value"].startswith("0.3819660112501051")


def test_moments_agree_across_methods():
    assert kloo.moment_exact(4, 25) == 37500
    assert kloo.closed_moment(4, 25) == 37500
    assert kloo.moment_exact(5, 9) == -3645
    assert kloo.moments_direct(5, 9)[4] == -3645
    assert kloo.moment_exact(1, 360) == 0
    assert kloo.closed_moment(6, 3) is None
    for p in (7, 11, 13):
        assert kloo.s5_closed(p) == kloo.moment_exact(5, p)
        assert kloo.s6_closed(p) == kloo.moment_exact(6, p)
        assert tuple(kloo.moment_exact(n, p) for n in (2, 3, 4)) == kloo.salie_moments(p)


def test_big_values_are_python_ints():
    v = kloo.moment_exact(12, 499)
    assert isinstance(v, int)
    assert v > 2**64


def test_counts():
    assert kloo.count_W(4, 25) == kloo.count_W_bruteforce(4, 25)
    assert kloo.count_V(4, 25) == 20 * kloo.count_W(4, 25)
    assert kloo.singular_census(5, 3) == 10


def test_t_values():
    p = 7
    s = [kloo.moment_exact(n, p) for n in range(1, 7)]
    t = kloo.convert_S_to_T(p, s)
    assert t[0] == p - 1
    assert t[3] == -50
    assert all((x + 1) % (p * p) == 0 for x in t[1:])


def test_poincare_layer():
    P = kloo.poincare_series(4, 3, 3)
    assert P[0] == Fraction(8, 27)
    form = kloo.fit_segers(6, 5, 3)
    assert form["C"] == "-8/5"
    assert form["certified"]
    assert kloo.verify_h_formula(6, 5, 3)


def test_errors():
    with pytest.raises(kloo.GuardRefusal):
        kloo.moment_exact(5, 4096)
    with pytest.raises(ValueError):
        kloo.kloosterman(1, 1, 0)


def test_suite_rows():
    rows = kloo.run_suite("salie", pmax=30)
    assert rows and all(r["match"] for r in rows)
    assert {r["n"] for r in rows} == {2, 3, 4}
    assert "salie" in kloo.suite_names()
