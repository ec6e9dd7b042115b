import math

import numpy as np
import pytest

import jorbit


def test_registry():
    ids = {c.case_id for c in jorbit.list_cases()}
    assert {"gl_r", "sp_c", "o_2n2n", "gl_c"} <= ids
    gl = jorbit.lookup_case("gl_r", 2)
    assert (gl.d, gl.e, gl.ambient_dim) == (1, 0, 4)
    assert gl.backend_available
    assert jorbit.l2_threshold(gl) == pytest.approx(-1.5)
    assert jorbit.bessel_parameter(gl) == 0.0
    assert jorbit.equivariance_exponent(gl, 1) == 2.0


def test_unknown_case_raises():
    with pytest.raises(jorbit.JorbitError) as info:
        jorbit.lookup_case("nope", 2)
    assert info.value.kind == "not-found"


def test_bessel():
    assert jorbit.bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1.0), rel=1e-10)
    assert jorbit.bessel_mellin(0.0, 2.0) == pytest.approx(1.0)
    assert jorbit.k0_cosine_transform(1.0) == pytest.approx(math.pi / 2 / math.sqrt(2.0), rel=1e-6)
    gl = jorbit.lookup_case("gl_r", 2)
    assert jorbit.rank1_mass_closed_form(gl) == pytest.approx(1.0)
    assert jorbit.rank1_l2_closed_form(gl) == pytest.approx(0.5)


def test_matrices():
    gl = jorbit.lookup_case("gl_r", 2)
    x = np.array([[3.0, 0.0], [0.0, 4.0]])
    assert jorbit.jordan_norm(gl, x) == pytest.approx(12.0)
    assert sorted(jorbit.singular_spectrum(gl, x)) == pytest.approx([3.0, 4.0])
    assert jorbit.orbit_rank(gl, np.diag([1.0, 0.0])) == 1
    assert jorbit.phi_t(-1.0, gl, x) == pytest.approx(1.0 / math.sqrt(10.0 * 17.0))
    assert len(jorbit.frame(gl)) == 2


def test_cayley_and_certificate():
    num, den = jorbit.cayley_constant(2, 3)
    assert den > 0 and num != 0
    cert = jorbit.l2_certificate(jorbit.lookup_case("sp_c", 3), 1)
    assert cert["valid"] and cert["branch"] == "sp_c"


def test_reports():
    reports = jorbit.bessel_selftest()
    assert reports and all(r["verdict"] == "pass" for r in reports)
    rep = jorbit.phi_l2_scan("gl_r", 2, -1.6)
    assert rep["measured"] == "finite"
    gl = jorbit.lookup_case("gl_r", 2)
    spec = jorbit.QuadratureSpec()
    spec.mode = "monte_carlo"
    spec.mc_samples = 20000
    rep = jorbit.verify_equivariance(gl, 1, np.diag([2.0, 1.0]), np.diag([1.0, 1.0]), spec=spec, tolerance=0.05)
    assert rep["claim_id"] == "equivariance"
    assert rep["verdict"] in ("pass", "inconclusive")
