import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qhjspectra.errors import InvariantError
from qhjspectra.potentials import (
    EffectiveAngularProblem,
    EffectiveRadialProblem,
    Hartmann,
    QuantumNumbers,
    RingOscillator,
    UnitSystem,
    a_from_angular_quantization,
    b_from_m,
    effective_angular_problem,
    effective_radial_problem,
    l_squared,
    mu_squared,
    potential_from_name,
)

HBARS = st.sampled_from([1.0, 0.5, 0.1, 2.0])
NS = st.integers(0, 6)
MS = st.integers(-5, 5)
BETAS = st.floats(0, 10, allow_nan=False)


def test_unit_system_validates():
    assert UnitSystem().hbar == 1.0
    for bad in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(InvariantError):
            UnitSystem(bad)


@pytest.mark.parametrize("cls, alpha", [(Hartmann, 1.0), (Hartmann, 0.0), (RingOscillator, -1.0), (RingOscillator, 0.0)])
def test_potential_sign_invariants(cls, alpha):
    with pytest.raises(InvariantError, match="alpha"):
        cls(alpha, 0.0)


@pytest.mark.parametrize("cls, alpha", [(Hartmann, -1.0), (RingOscillator, 1.0)])
def test_negative_beta_rejected(cls, alpha):
    with pytest.raises(InvariantError, match="beta"):
        cls(alpha, -1.0)


def test_potential_values():
    h = Hartmann(-2.0, 0.5)
    r, theta = 2.0, 0.3
    assert h(r, theta) == pytest.approx(-2.0 / r + 0.5 / (r * math.sin(theta)) ** 2)
    ring = RingOscillator(4.0, 3.0)
    assert ring(r, theta) == pytest.approx(4.0 * r * r + 3.0 / (r * math.sin(theta)) ** 2)
    assert potential_from_name("ring", 1.0).name == "ring"
    with pytest.raises(InvariantError):
        potential_from_name("yukawa", 1.0)


def test_quantum_numbers_validate():
    QuantumNumbers(0, 0, -3)
    with pytest.raises(InvariantError):
        QuantumNumbers(-1, 0, 0)
    with pytest.raises(InvariantError):
        QuantumNumbers(0, 1.5, 0)


@pytest.mark.parametrize("m, hbar, expected", [(0, 1.0, 0.0), (2, 1.0, 4.0), (-3, 0.5, 2.25)])
def test_b_from_m(m, hbar, expected):
    assert b_from_m(m, UnitSystem(hbar)) == expected


@pytest.mark.parametrize("nt, m, beta, expected", [(0, 0, 0.0, 0.0), (1, 0, 0.0, 2.0), (1, 1, 0.0, 6.0)])
def test_a_from_angular_quantization(units, nt, m, beta, expected):
    assert a_from_angular_quantization(nt, m, beta, units) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("nt, m, beta, expected", [(0, 0, 0.0, 0.25), (1, 1, 0.0, 6.25), (0, 1, 3.0, 6.25)])
def test_l_squared(units, nt, m, beta, expected):
    assert l_squared(nt, m, beta, units) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize(
    "potential, qn, expected",
    [
        (Hartmann(-1.0, 0.0), QuantumNumbers(0, 0, 0), 0.0),
        (Hartmann(-1.0, 0.0), QuantumNumbers(0, 1, 1), 2.0),
        (RingOscillator(1.0, 3.0), QuantumNumbers(0, 0, 1), 2.0),
    ],
)
def test_effective_radial_problem(units, potential, qn, expected):
    problem = effective_radial_problem(potential, qn, units)
    assert problem.big_l == expected
    assert problem.centrifugal == pytest.approx(expected * (expected + 1))


def test_effective_problem_invariants(units):
    with pytest.raises(InvariantError):
        EffectiveRadialProblem(Hartmann(-1.0, 0.0), -0.5, units)
    with pytest.raises(InvariantError):
        EffectiveAngularProblem(-1.0)
    ang = effective_angular_problem(QuantumNumbers(0, 2, 1), 3.0, units)
    assert ang.mu == 2.0
    assert ang.l_squared_hint == 20.25


@given(NS, MS, BETAS, HBARS)
def test_l_squared_a_identity(nt, m, beta, hbar):
    units = UnitSystem(hbar)
    lhs = hbar**2 * l_squared(nt, m, beta, units)
    rhs = a_from_angular_quantization(nt, m, beta, units) + (hbar / 2) ** 2
    assert lhs == pytest.approx(rhs, rel=1e-13)


@given(MS, HBARS)
def test_b_even_in_m(m, hbar):
    assert b_from_m(m, UnitSystem(hbar)) == b_from_m(-m, UnitSystem(hbar))


@given(NS, st.integers(0, 5), BETAS, HBARS)
def test_l_squared_monotone(nt, m, beta, hbar):
    units = UnitSystem(hbar)
    base = l_squared(nt, m, beta, units)
    assert l_squared(nt + 1, m, beta, units) > base
    assert l_squared(nt, m + 1, beta, units) > base


@given(NS, MS)
def test_big_l_integer_without_beta(nt, m):
    problem = effective_radial_problem(Hartmann(-1.0, 0.0), QuantumNumbers(0, nt, m), UnitSystem(1.0))
    assert problem.big_l == nt + abs(m)


def test_mu_squared_folds_hbar():
    assert mu_squared(1, 3.0, UnitSystem(0.5)) == 1 + 12.0
