import math

import numpy as np
import pytest

import antagonistic as ag

UNIFORM6 = {"n": 6, "seed": 1, "composition": {"kind": "antagonistic", "pair": {"kind": "uniform-antagonistic"}}}


def test_sample_is_antagonistic_and_reproducible():
    m = ag.sample_matrix(UNIFORM6)
    assert m.shape == (6, 6)
    assert np.all(np.diag(m) == 0)
    assert np.all(m * m.T <= 0)
    assert np.array_equal(m, ag.sample_matrix(UNIFORM6))
    assert not np.array_equal(m, ag.sample_matrix(UNIFORM6, index=1))


def test_spectrum_against_numpy():
    m = ag.sample_matrix(dict(UNIFORM6, n=30))
    ours = ag.eigenvalues(m)
    theirs = np.linalg.eigvals(m)
    assert np.allclose(np.sort_complex(ours), np.sort_complex(theirs), atol=1e-10)
    re_lo, re_hi, im_lo, im_hi = ag.bendixson_box(m)
    assert np.all(ours.real >= re_lo - 1e-9) and np.all(ours.real <= re_hi + 1e-9)
    assert np.all(np.abs(ours.imag) <= im_hi + 1e-9)


def test_pfaffian_squares_to_determinant():
    m = ag.sample_matrix(UNIFORM6)
    k = np.triu(m) - np.triu(m).T
    assert ag.pfaffian(k) ** 2 == pytest.approx(np.linalg.det(k), rel=1e-12)
    assert ag.determinant(m) == pytest.approx(np.linalg.det(m), rel=1e-12)


def test_expected_char_poly_and_expectation():
    theta = 0.25
    coeffs = ag.expected_char_poly(UNIFORM6)
    assert coeffs == pytest.approx([15 * theta**3, 0, 45 * theta**2, 0, 15 * theta, 0, 1])
    assert ag.expected_det(UNIFORM6) == pytest.approx(15 * theta**3)
    report = ag.expect(UNIFORM6, trials=3000)
    assert report["pass"]
    assert report["exact"] == pytest.approx(15 * theta**3)


def test_rho_and_perturbation():
    assert ag.rho({"kind": "gaussian-antagonistic"}) == pytest.approx(-2 / math.pi)
    d = [-7.0, -3.0]
    a = np.array([[0.0, 1.5], [-0.8, 0.0]])
    p = ag.predict_extremes(d, a, 1e-3)
    assert p["degenerate"] is False
    assert p["lambda_max"] == pytest.approx(-3.0 - 1e-6 * 1.2 / 4.0, abs=1e-15)


def test_errors_carry_codes():
    with pytest.raises(ag.Error) as info:
        ag.sample_matrix({"n": 3})
    assert info.value.code == "invalid-spec"
    with pytest.raises(ag.Error):
        ag.verify("nope")


def test_verify_suite_and_figure():
    assert ag.verify("exact-combinatorics")["pass"]
    panels = ag.figure("fig2", seed=0)
    assert list(panels) == ["n=250", "n=500", "n=750"]
    assert panels["n=500"].shape == (500,)
