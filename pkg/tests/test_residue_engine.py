import math

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from qhjspectra.analytic_spectra import j_r_closed_form, j_theta_closed_form
from qhjspectra.errors import DomainError
from qhjspectra.potentials import Hartmann, RingOscillator, UnitSystem
from qhjspectra.residue_engine import (
    BRANCH_RULES,
    assemble_j_r,
    assemble_j_theta,
    matching_residuals,
    pole_value,
    radial_contributions,
    radial_infinity_coulomb,
    radial_infinity_oscillator,
    radial_origin_contribution,
    theta_contributions,
    theta_infinity_contribution,
    theta_pole_contribution,
)


@pytest.mark.parametrize("beta, b, b1, value", [(0, 0, 0j, 0.0), (3, 1, 2j, -2.0), (0, 4, 2j, -2.0)])
def test_theta_infinity_examples(units, beta, b, b1, value):
    c = theta_infinity_contribution(beta, b, units)
    assert c.coefficients.b1 == b1
    assert c.value == value
    assert c.location == "theta_infinity"


@pytest.mark.parametrize("a, a0, value", [(0, 0, 0.0), (2, -1, 0.5), (6, -2, 1.0)])
def test_theta_pole_examples(units, a, a0, value):
    c = theta_pole_contribution(a, units, "+i")
    assert c.coefficients.a0 == pytest.approx(a0, abs=1e-15)
    assert c.value == pytest.approx(value, abs=1e-15)


@pytest.mark.parametrize("a, b, beta, expected", [(0, 0, 0, 0.0), (6, 1, 3, 0.0), (2, 0, 0, 1.0)])
def test_assemble_j_theta_examples(units, a, b, beta, expected):
    assert assemble_j_theta(a, b, beta, units) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("a, b1, value", [(0, 0j, 0.0), (2, -1j, -1.0), (6, -2j, -2.0)])
def test_radial_origin_examples(units, a, b1, value):
    c = radial_origin_contribution(a, units)
    assert c.coefficients.b1 == pytest.approx(b1, abs=1e-15)
    assert c.value == pytest.approx(value, abs=1e-15)


@pytest.mark.parametrize("E, alpha, value", [(-0.25, -1, 0.0), (-1 / 36, -1, 2.0), (-0.25, -2, 1.0)])
def test_radial_infinity_coulomb_examples(units, E, alpha, value):
    c = radial_infinity_coulomb(E, alpha, units)
    assert c.value == pytest.approx(value, abs=1e-14)
    # both roots of a0**2 = E are recorded
    assert c.coefficients.a0 ** 2 == pytest.approx(E)
    assert c.coefficients.rejected.a0 == pytest.approx(-c.coefficients.a0)


@pytest.mark.parametrize("E, alpha, value", [(3, 1, 0.0), (7, 1, 2.0), (26, 4, 5.0)])
def test_radial_infinity_oscillator_examples(units, E, alpha, value):
    assert radial_infinity_oscillator(E, alpha, units).value == pytest.approx(value, abs=1e-14)


@pytest.mark.parametrize(
    "potential, E, a, expected",
    [(Hartmann(-1, 0), -0.25, 0, 0.0), (Hartmann(-1, 0), -1 / 36, 6, 0.0), (RingOscillator(1, 0), 7, 0, 1.0)],
)
def test_assemble_j_r_examples(units, potential, E, a, expected):
    assert assemble_j_r(potential, E, a, units) == pytest.approx(expected, abs=1e-14)


def test_domain_errors(units):
    with pytest.raises(DomainError):
        theta_infinity_contribution(0.0, -1.0, units)
    with pytest.raises(DomainError):
        theta_pole_contribution(-1.0, units)
    with pytest.raises(DomainError):
        radial_origin_contribution(-1.0, units)
    with pytest.raises(DomainError):
        radial_infinity_coulomb(0.1, -1.0, units)
    with pytest.raises(DomainError):
        radial_infinity_oscillator(-1.0, 1.0, units)
    with pytest.raises(ValueError):
        theta_pole_contribution(1.0, units, "+1")
    with pytest.raises(ValueError):
        pole_value("nowhere", theta_pole_contribution(1.0, units).coefficients)


def test_branch_rules_cover_every_pole():
    assert set(BRANCH_RULES) == {"theta_plus_i", "theta_minus_i", "theta_infinity", "radial_origin", "radial_infinity"}
    assert all(rule[2] for rule in BRANCH_RULES.values())


@given(st.floats(-0.2, 80), st.sampled_from([1.0, 0.5, 0.05]))
def test_pole_symmetry(a, hbar):
    units = UnitSystem(hbar)
    if a + hbar**2 / 4 < 0:
        return
    assert theta_pole_contribution(a, units, "+i").value == theta_pole_contribution(a, units, "-i").value


# --- back-substitution into Riccati equations derived from the linear ODEs ---

S = sp.Symbol("s")
X = sp.Symbol("x", positive=True)


def _riccati_from_linear(p, dp, coeff_first, q):
    """psi'' + c1 psi' + q psi = 0 with psi'/psi = i p/hbar, times -hbar**2."""
    hb = sp.Symbol("hbar", positive=True)
    lin = sp.I * dp / hb - p**2 / hb**2 + coeff_first * sp.I * p / hb + q / hb**2
    return sp.expand(-hb**2 * lin), hb


def test_riccati_chain_rule_for_cot_variable():
    theta = sp.Symbol("theta")
    y = -sp.cot(theta)
    assert sp.simplify(sp.diff(y, theta) - (1 + y**2)) == 0
    assert sp.simplify(sp.sin(theta) ** 2 - 1 / (1 + y**2)) == 0


def _theta_residual(P_of_s, y_of_s, dy_ds, a, strength, hbar):
    # theta equation: Theta'' + cot Theta' + (a - strength/sin**2)/hbar**2 Theta = 0
    # in y = -cot(theta): d/dtheta = (1 + y**2) d/dy, cot = -y, 1/sin**2 = 1 + y**2
    y = y_of_s
    dP_dy = sp.diff(P_of_s, S) / dy_ds
    expr, hb = _riccati_from_linear(P_of_s, (1 + y**2) * dP_dy, -y, a - strength * (1 + y**2))
    return sp.expand(expr.subs(hb, hbar))


@pytest.mark.parametrize("a, b, beta, hbar", [(6.0, 1.0, 3.0, 1.0), (2.7, 0.25, 0.4, 0.5), (40.0, 9.0, 0.0, 1.0)])
def test_theta_coefficients_back_substitute(a, b, beta, hbar):
    units = UnitSystem(hbar)
    plus, minus, inf = theta_contributions(a, b, beta, units)
    for contrib, sign in ((plus, 1), (minus, -1)):
        a0 = complex(contrib.coefficients.a0)
        a1 = sp.Symbol("a1")
        P = a0 + a1 * S
        res = _theta_residual(P, sign * sp.I + S, 1, a, b + beta, hbar)
        assert abs(complex(res.coeff(S, 0))) < 1e-12
        key = "theta_plus_i" if sign == 1 else "theta_minus_i"
        assert abs(matching_residuals(key, contrib.coefficients, a=a, units=units)[0]) < 1e-12
    b1 = complex(inf.coefficients.b1)
    P = b1 / S + sp.Symbol("a0") + sp.Symbol("a1") * S
    # y = 1/s, dy/ds = -1/s**2
    res = _theta_residual(P, 1 / S, -1 / S**2, a, b + beta, hbar)
    lead = sp.expand(res * S**2).subs(S, 0)
    assert abs(complex(lead)) < 1e-12


@pytest.mark.parametrize("potential, E, a, hbar", [
    (Hartmann(-1.0, 0.0), -1 / 36, 6.0, 1.0),
    (Hartmann(-2.5, 1.0), -0.3, 1.7, 0.4),
    (RingOscillator(1.0, 0.0), 7.0, 0.0, 1.0),
    (RingOscillator(4.0, 2.0), 11.3, 3.1, 0.7),
])
def test_radial_coefficients_back_substitute(potential, E, a, hbar):
    units = UnitSystem(hbar)
    origin, infinity = radial_contributions(potential, E, a, units)
    V = potential.alpha / X if isinstance(potential, Hartmann) else potential.alpha * X**2

    def residual(P):
        expr, hb = _riccati_from_linear(P, sp.diff(P, X), 2 / X, E - V - a / X**2)
        return sp.expand(expr.subs(hb, hbar))

    b1 = complex(origin.coefficients.b1)
    res = residual(b1 / X + sp.Symbol("a0"))
    assert abs(complex(sp.expand(res * X**2).subs(X, 0))) < 1e-12

    c = infinity.coefficients
    P = complex(c.b1) * X + complex(c.a0) + complex(c.a1) / X
    res = residual(P)
    if isinstance(potential, Hartmann):
        matched = (0, -1)
    else:
        matched = (2, 1, 0)
    for power in matched:
        assert abs(complex(res.coeff(X, power))) < 1e-12, power
    kind = "coulomb" if isinstance(potential, Hartmann) else "oscillator"
    for value in matching_residuals("radial_infinity", c, E=E, alpha=potential.alpha, kind=kind, units=units).values():
        assert abs(value) < 1e-12


# --- branch choice read off exact wavefunctions -----------------------------


def _laurent(expr, var, power):
    return complex(sp.series(expr, var, 0, power + 2).removeO().coeff(var, power))


@pytest.mark.parametrize("big_l", [0, 1, 2, 3])
def test_selected_branch_matches_exact_coulomb_ground_state(big_l):
    # R = r**L exp(-r / (2 (L+1))) solves the alpha = -1 problem with E = -1/(4 (L+1)**2)
    units = UnitSystem(1.0)
    E = -1 / (4 * (big_l + 1) ** 2)
    R = X**big_l * sp.exp(-X / (2 * (big_l + 1)))
    p = sp.expand(-sp.I * sp.diff(R, X) / R)
    a = big_l * (big_l + 1)
    origin = radial_origin_contribution(a, units)
    assert origin.coefficients.b1 == pytest.approx(_laurent(sp.expand(p * X), X, 0), abs=1e-14)
    inf = radial_infinity_coulomb(E, -1.0, units)
    s = sp.Symbol("s", positive=True)
    p_s = sp.expand(p.subs(X, 1 / s))
    assert inf.coefficients.a0 == pytest.approx(_laurent(p_s, s, 0), abs=1e-14)
    assert inf.coefficients.a1 == pytest.approx(_laurent(p_s, s, 1), abs=1e-14)


@pytest.mark.parametrize("big_l", [0, 1, 2])
def test_selected_branch_matches_exact_oscillator_ground_state(big_l):
    # alpha = 1: R = r**L exp(-r**2/2), E = 2L + 3
    units = UnitSystem(1.0)
    R = X**big_l * sp.exp(-X**2 / 2)
    p = sp.expand(-sp.I * sp.diff(R, X) / R)
    inf = radial_infinity_oscillator(2 * big_l + 3.0, 1.0, units)
    s = sp.Symbol("s", positive=True)
    p_s = sp.expand(p.subs(X, 1 / s) * s)  # s * p = b1 + a0 s + a1 s**2
    assert inf.coefficients.b1 == pytest.approx(_laurent(p_s, s, 0), abs=1e-14)
    assert inf.coefficients.a1 == pytest.approx(_laurent(p_s, s, 2), abs=1e-14)


@pytest.mark.parametrize("mu", [0.5, 1.0, 2.0, math.sqrt(7)])
def test_selected_branch_matches_exact_angular_ground_state(mu):
    # Theta = sin(theta)**mu; in y = -cot(theta) its QMF is i hbar mu y
    units = UnitSystem(1.0)
    a = mu * (mu + 1)
    plus, minus, inf = theta_contributions(a, mu * mu, 0.0, units)
    assert plus.coefficients.a0 == pytest.approx(-mu, abs=1e-14)
    assert minus.coefficients.a0 == pytest.approx(mu, abs=1e-14)
    assert inf.coefficients.b1 == pytest.approx(1j * mu, abs=1e-14)
    theta = sp.Symbol("theta")
    p = -sp.I * sp.diff(sp.sin(theta) ** mu, theta) / sp.sin(theta) ** mu
    assert sp.simplify(p - sp.I * mu * (-sp.cot(theta))) == 0


# --- assembly sweeps ---------------------------------------------------------


def _scale(*terms):
    return max(abs(t) for t in terms)


@settings(max_examples=300, deadline=None)
@given(st.floats(0.01, 60), st.integers(-4, 4), st.floats(0, 8), st.floats(0.02, 2))
def test_assembled_j_theta_equals_closed_form(a, m, beta, hbar):
    units = UnitSystem(hbar)
    b = hbar**2 * m * m
    got = assemble_j_theta(a, b, beta, units)
    want = j_theta_closed_form(a, b, beta, units)
    scale = _scale(want, hbar, math.sqrt(a + hbar**2 / 4), math.sqrt(b + beta))
    assert abs(got - want) <= 1e-12 * scale


@settings(max_examples=300, deadline=None)
@given(st.floats(0.0, 60), st.floats(0.05, 10), st.floats(0.02, 2), st.floats(0.01, 50), st.booleans())
def test_assembled_j_r_equals_closed_form(a, strength, hbar, energy_mag, coulomb):
    units = UnitSystem(hbar)
    if coulomb:
        pot, E = Hartmann(-strength, 0.0), -energy_mag
        big = strength / (2 * math.sqrt(energy_mag))
    else:
        pot, E = RingOscillator(strength, 0.0), energy_mag
        big = E / (2 * math.sqrt(strength))
    got = assemble_j_r(pot, E, a, units)
    want = j_r_closed_form(pot, E, a, units)
    assert abs(got - want) <= 1e-12 * _scale(want, hbar, big, math.sqrt(a + hbar**2 / 4))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 60), st.floats(0.1, 8), st.floats(0.05, 2))
def test_rejected_theta_branches_fail(a, strength, hbar):
    units = UnitSystem(hbar)
    want = j_theta_closed_form(a, 0.0, strength, units)
    contribs = theta_contributions(a, 0.0, strength, units)
    for k in range(3):
        total = 0.0
        for j, c in enumerate(contribs):
            coeffs = c.coefficients.rejected if j == k else c.coefficients
            total += pole_value(c.location, coeffs).real
        assert abs(total - want) > 1e-6


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 60), st.floats(0.1, 10), st.floats(0.05, 2), st.floats(0.01, 50))
def test_rejected_radial_branches_fail(a, strength, hbar, energy_mag):
    units = UnitSystem(hbar)
    for pot, E in ((Hartmann(-strength, 0.0), -energy_mag), (RingOscillator(strength, 0.0), energy_mag)):
        want = j_r_closed_form(pot, E, a, units)
        half = 1.0 if isinstance(pot, Hartmann) else 0.5
        contribs = radial_contributions(pot, E, a, units)
        for k in range(2):
            total = sum(
                pole_value(c.location, c.coefficients.rejected if j == k else c.coefficients).real
                for j, c in enumerate(contribs)
            )
            assert abs(half * total - want) > 1e-6
