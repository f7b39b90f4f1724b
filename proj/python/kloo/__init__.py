"""Exact Kloosterman sums, power moments and their closed forms."""

import json

from ._kloo import (
    DEFAULT_PRECISION_BITS,
    CertificationFailed,
    GuardRefusal,
    PrecisionExhausted,
    a_p,
    closed_moment,
    convert_S_to_T,
    count_V,
    count_W,
    count_W_bruteforce,
    eta_coefficient,
    igusa_series,
    kloosterman,
    max_dp_modulus,
    moment_exact,
    moments_direct,
    poincare_series,
    prime_power_closed,
    s5_closed,
    s6_closed,
    salie_moments,
    singular_census,
    suite_names,
    verify_h_formula,
)
from ._kloo import fit_segers as _fit_segers
from ._kloo import run_suite as _run_suite


def fit_segers(n, p, r_max):
    """Fitted pole law for V_n(p^r) as a dict; rationals stay as strings."""
    return json.loads(_fit_segers(n, p, r_max))


def run_suite(name, **options):
    """Rows of a verification sweep as dicts, in the same order as the CLI."""
    return [json.loads(row) for row in _run_suite(name, **options)]


__all__ = [name for name in dir() if not name.startswith("_")]
