"""Numerical verification of orbit measures, spherical vectors and Bessel kernels."""

import json

import numpy as np

from ._core import (
    CaseDescriptor,
    JorbitError,
    QuadratureSpec,
    bessel_k,
    bessel_mellin,
    bessel_parameter,
    cayley_constant,
    character_nu,
    equivariance_exponent,
    frame,
    jordan_norm,
    k0_cosine_transform,
    l2_certificate,
    l2_threshold,
    list_cases,
    lookup_case,
    orbit_rank,
    phi_t,
    rank1_l2_closed_form,
    rank1_mass_closed_form,
    singular_spectrum,
    upsilon,
)
from . import _core

__all__ = [
    "CaseDescriptor",
    "JorbitError",
    "QuadratureSpec",
    "bessel_k",
    "bessel_mellin",
    "bessel_parameter",
    "bessel_selftest",
    "cayley_check",
    "cayley_constant",
    "character_nu",
    "equivariance_exponent",
    "frame",
    "jordan_norm",
    "k0_cosine_transform",
    "l2_certificate",
    "l2_threshold",
    "list_cases",
    "lookup_case",
    "orbit_rank",
    "phi_l2_scan",
    "phi_t",
    "rank1_l2_closed_form",
    "rank1_mass_closed_form",
    "run_suite",
    "singular_spectrum",
    "upsilon",
    "verify_equivariance",
    "verify_polar",
]


def _spec(spec):
    return QuadratureSpec() if spec is None else spec


def _reports(document):
    return json.loads(document)["reports"]


def run_suite(case_id, n, spec=None, family_parameter=None):
    """Every check for one case, as a list of report dicts."""
    return _reports(_core._run_suite(case_id, n, _spec(spec), family_parameter))


def verify_polar(case, k, spec=None):
    """Polar against direct integration (k = n) or homogeneity of the rank-k measure (k < n)."""
    return _reports(_core._verify_polar(case, k, _spec(spec)))[0]


def verify_equivariance(case, k, a, b=None, spec=None, tolerance=0.02):
    """Pushforward ratio for the Levi element (a, b) against its character."""
    a = np.asarray(a, dtype=complex)
    b = np.zeros((0, 0), dtype=complex) if b is None else np.asarray(b, dtype=complex)
    return _reports(_core._verify_equivariance(case, k, a, b, _spec(spec), tolerance))[0]


def phi_l2_scan(case_id, n, t, spec=None):
    """Finite/divergent verdict for the square integral of Phi_t."""
    return _reports(_core._phi_l2_scan(case_id, n, t, _spec(spec)))[0]


def bessel_selftest():
    return _reports(_core._bessel_selftest())


def cayley_check(n=2, s=3.0, points=5, seed=7):
    return _reports(_core._cayley_check(n, s, points, seed))
