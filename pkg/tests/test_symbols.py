import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wegnerlab.errors import ConfigError, NoConvergence, SymbolVanishes
from wegnerlab.lattice import LatticeFunction
from wegnerlab.symbols import (CoefficientField, certify_nonvanishing, check_diagonal_dominance,
                               evaluate_symbol, format_coefficients, parse_coefficients,
                               read_coefficients, symbol_on_grid, wiener_inverse,
                               write_coefficients)

from conftest import laurent_section_inverse


def test_coefficient_field_basics():
    a = CoefficientField({0: 2, 1: -1})
    assert a.d == 1 and a.D == 1
    assert a[1] == -1.0 and a[(0,)] == 2.0 and a[7] == 0.0
    b = CoefficientField({(0, 0): 1.0, (2, -1): 0.5, (1, 1): 0.0})
    assert b.D == 2 and len(b) == 2
    with pytest.raises(ValueError):
        CoefficientField({0: 0.0}, d=1)


def test_dense_roundtrip():
    b = CoefficientField({(0, 0): 1.0, (2, -1): 0.5, (-1, 1): -0.25})
    assert LatticeFunction.from_dense(b.dense(4), 4) == b


def test_convolution():
    a = LatticeFunction({0: 2.0, 1: -1.0})
    v = LatticeFunction({0: 1.0, 1: 1.0})
    assert a.convolve(v).as_dict() == {(0,): 2.0, (1,): 1.0, (2,): -1.0}


@pytest.mark.parametrize("theta", [0.0, 0.3, 2.0, 6.2])
def test_symbol_of_delta_is_one(theta):
    assert evaluate_symbol(CoefficientField({0: 1.0}), theta) == pytest.approx(1.0)


def test_symbol_values():
    assert evaluate_symbol(CoefficientField({0: 2, 1: -1}), 0.0) == pytest.approx(1.0)
    assert evaluate_symbol(CoefficientField({0: 1, 1: -1}), 0.0) == 0.0
    a = CoefficientField({0: 2, 1: -1})
    assert evaluate_symbol(a, math.pi) == pytest.approx(3.0)


@pytest.mark.parametrize("alpha", [
    {0: 2, 1: -1},
    {-2: 0.3, 0: 1.0, 3: -0.2},
    {(0, 0): 1.0, (1, 0): -0.3, (0, -2): 0.2, (1, 1): 0.1},
])
@pytest.mark.parametrize("n", [5, 16])
def test_symbol_matches_dft(alpha, n):
    a = CoefficientField(alpha)
    grid = np.stack(np.meshgrid(*[2 * np.pi * np.arange(n) / n] * a.d, indexing="ij"), axis=-1)
    direct = evaluate_symbol(a, grid.reshape(-1, a.d)).reshape((n,) * a.d)
    assert np.abs(direct - symbol_on_grid(a, n)).max() <= 1e-12


def test_diagonal_dominance_examples():
    assert check_diagonal_dominance(CoefficientField({0: 2, 1: -1}))
    assert not check_diagonal_dominance(CoefficientField({0: 1, 1: -1}))
    assert check_diagonal_dominance(CoefficientField({0: 1, 1: -0.4, -1: -0.4}))


def test_certificate_examples():
    c = certify_nonvanishing(CoefficientField({0: 2, 1: -1}), 256)
    assert c.min_modulus_on_grid == pytest.approx(1.0)
    assert c.lipschitz_bound == pytest.approx(1.0)
    assert c.certified_lower_bound == pytest.approx(1 - math.pi / 256)
    assert c.nonvanishing

    c = certify_nonvanishing(CoefficientField({0: 1, 1: -1}), 64)
    assert c.min_modulus_on_grid == 0.0
    assert c.vanishes_on_grid and not c.nonvanishing

    c = certify_nonvanishing(CoefficientField({0: 1}), 2)
    assert c.certified_lower_bound == 1.0 and c.nonvanishing


def test_certificate_formula_2d():
    a = CoefficientField({(0, 0): 1.0, (1, 1): 0.3})
    c = certify_nonvanishing(a, 32)
    assert c.lipschitz_bound == pytest.approx(0.3 * math.sqrt(2))
    assert c.certified_lower_bound == pytest.approx(
        c.min_modulus_on_grid - c.lipschitz_bound * (math.pi / 32) * math.sqrt(2))


@st.composite
def dominant_fields(draw):
    d = draw(st.integers(1, 2))
    keys = draw(st.lists(st.tuples(*[st.integers(-3, 3)] * d), min_size=1, max_size=5, unique=True))
    vals = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=len(keys), max_size=len(keys)))
    centre = draw(st.tuples(*[st.integers(-3, 3)] * d))
    others = {k: v for k, v in zip(keys, vals) if k != centre}
    margin = draw(st.floats(0.05, 1.0))
    sign = draw(st.sampled_from([-1.0, 1.0]))
    others[centre] = sign * (sum(abs(v) for v in others.values()) + margin)
    return CoefficientField(others, d=d), margin


@settings(max_examples=40, deadline=None)
@given(dominant_fields())
def test_dominance_implies_certificate(case):
    a, margin = case
    assert check_diagonal_dominance(a)
    # |symbol| >= margin everywhere, so a grid with L pi sqrt(d) / n < margin must certify
    L = float(np.sum(np.linalg.norm(a.points, axis=1) * np.abs(a.coefficients)))
    n = max(2, int(math.ceil(2 * L * math.pi * math.sqrt(a.d) / margin)) + 1)
    cert = certify_nonvanishing(a, n)
    assert cert.nonvanishing
    assert cert.certified_lower_bound <= margin + 1e-12 or cert.min_modulus_on_grid >= margin


def test_wiener_geometric_series():
    # 1/(2 - z) = sum_n z^n / 2^{n+1}
    w = wiener_inverse(CoefficientField({0: 2, 1: -1}), 1e-10)
    assert w.tail_bound <= 1e-10
    for n in range(0, 30):
        assert w[n] == pytest.approx(2.0 ** -(n + 1), abs=1e-12)
    for n in range(-30, 0):
        assert abs(w[n]) <= 1e-12
    assert w.column_sum_norm == pytest.approx(1.0, abs=1e-10)


def test_wiener_identity():
    w = wiener_inverse(CoefficientField({0: 1.0}))
    assert w[0] == pytest.approx(1.0)
    assert w.column_sum_norm == pytest.approx(1.0, abs=1e-14)
    assert w.as_field(1e-14).as_dict() == {(0,): pytest.approx(1.0)}


def test_wiener_against_dense_laurent_section():
    alpha = CoefficientField({0: 1.0, 1: -0.5})
    w = wiener_inverse(alpha, 1e-10)
    brute = laurent_section_inverse(alpha, 301)
    for n in range(-40, 41):
        assert w[n] == pytest.approx(brute[n], abs=1e-12)
    assert w.column_sum_norm == pytest.approx(2.0, abs=1e-10)


def test_wiener_sign_changing_beta_against_section():
    alpha = CoefficientField({-1: 0.3, 0: 1.0, 1: 0.4, 2: -0.2})
    w = wiener_inverse(alpha, 1e-12)
    brute = laurent_section_inverse(alpha, 1601)
    err = max(abs(w[n] - brute[n]) for n in range(-60, 61))
    assert err <= 1e-11
    # beta decays slowly here (||B||_1 = 10); the window must hold all significant mass
    assert w.column_sum_norm == pytest.approx(sum(abs(brute[n]) for n in range(-600, 601)), abs=1e-9)


@pytest.mark.parametrize("alpha", [
    {0: 2, 1: -1},
    {0: 1, 1: -0.5},
    {-1: 0.3, 0: 1.0, 1: 0.4, 2: -0.2},
    {0: 1, 1: 1.5},                                   # not dominant, still invertible
    {(0, 0): 1.0, (1, 0): -0.3, (0, 1): -0.3},
    {(0, 0): 1.0, (1, 0): -0.5, (0, 1): -0.5, (1, 1): 0.25},
])
def test_deconvolution_identity(alpha):
    tol = 1e-11
    a = CoefficientField(alpha)
    w = wiener_inverse(a, tol)
    assert w.deconvolution_residual(a) <= 10 * tol


def test_norm_estimates_monotone():
    from wegnerlab.symbols import _periodized_inverse
    a = CoefficientField({-1: 0.3, 0: 1.0, 1: 0.4, 2: -0.2})
    norms = [np.abs(_periodized_inverse(a, n)).sum() for n in (9, 27, 81, 243)]
    assert all(x <= y + 1e-14 for x, y in zip(norms, norms[1:]))
    assert norms[-1] <= wiener_inverse(a, 1e-12).column_sum_norm + 1e-14


def test_wiener_raises_when_symbol_vanishes():
    with pytest.raises(SymbolVanishes):
        wiener_inverse(CoefficientField({0: 1, 1: -1}))


def test_wiener_no_convergence_for_near_zero_off_grid():
    # zero of the symbol at an irrational angle is never sampled exactly
    theta = math.sqrt(2)
    alpha = CoefficientField({0: 1.0, 1: -2 * math.cos(theta), 2: 1.0})
    with pytest.raises((NoConvergence, SymbolVanishes)):
        wiener_inverse(alpha, 1e-12, max_grid_points=3 ** 9)


def test_text_format_roundtrip(tmp_path):
    a = CoefficientField({(0, 0): 1.0, (1, -2): -0.125, (-1, 0): 0.1})
    path = tmp_path / "alpha.txt"
    write_coefficients(a, path)
    assert read_coefficients(path) == a
    text = "# header\n0 2.0   # centre\n\n1 -1\n"
    assert parse_coefficients(text) == CoefficientField({0: 2, 1: -1})
    assert format_coefficients(CoefficientField({0: 1})).splitlines()[-1] == "0 1.0"


@pytest.mark.parametrize("text", ["", "0\n", "0 1\n0 2\n", "0 0 1\n1 2\n", "a 1\n", "0 0\n"])
def test_text_format_errors(text):
    with pytest.raises(ConfigError):
        parse_coefficients(text)
