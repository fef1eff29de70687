"""Numerov shooting eigensolver for the separated radial and angular equations.

This is the independent ground truth: it never evaluates the closed-form
spectra. Both equations are brought to the form y'' = g(x) y on a uniform
grid in a Liouville-transformed variable, so the Frobenius behaviour at the
regular singular points becomes a smooth exponential and Numerov keeps its
fourth-order accuracy for non-integer indices:

* radial: x = ln r, u(r) = sqrt(r) y(x),
  g = r**2 (V1(r) - E)/hbar**2 + (L + 1/2)**2
* angular: x = ln tan(theta/2), H(theta) = sqrt(sin theta) y(x),
  g = mu**2 - (l**2 - 1/4) sech(x)**2

Both g are linear in the eigenvalue, g = g0 - ev * w with w > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from ._numerov import numerov_in, numerov_out, numerov_profile
from .analytic_spectra import energy, l_squared, radial_turning_points
from .errors import BracketError, NoClassicalRegionError
from .potentials import (
    Hartmann,
    PotentialSpec,
    QuantumNumbers,
    UnitSystem,
    mu_squared,
)

__all__ = [
    "RadialGrid",
    "AngularGrid",
    "EigenResult",
    "LevelComparison",
    "radial_eigen",
    "angular_eigen",
    "full_level_check",
    "radial_eigen_on_grid",
    "numerov_error_ratios",
    "RESIDUAL_TOL",
    "clear_caches",
]

RESIDUAL_TOL = 1e-10
RADIAL_STEP = 4e-3
ANGULAR_STEP = 4e-3
R_MIN = 1e-4
ANGULAR_EPS = 1e-4
TAIL_RTOL = 1e-9
GRID_RTOL = 1e-6


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid in ln r between ``r_min`` and ``r_max``."""

    r_min: float
    r_max: float
    n_points: int
    spacing: str = "uniform in ln r"

    @property
    def x(self) -> np.ndarray:
        return np.linspace(math.log(self.r_min), math.log(self.r_max), self.n_points)

    @property
    def step(self) -> float:
        return (math.log(self.r_max) - math.log(self.r_min)) / (self.n_points - 1)


@dataclass(frozen=True)
class AngularGrid:
    """Uniform grid in ln tan(theta/2) covering (eps, pi - eps)."""

    eps: float
    n_points: int
    spacing: str = "uniform in ln tan(theta/2)"

    @property
    def x(self) -> np.ndarray:
        edge = math.log(math.tan(self.eps / 2))
        return np.linspace(edge, -edge, self.n_points)

    @property
    def step(self) -> float:
        return -2 * math.log(math.tan(self.eps / 2)) / (self.n_points - 1)


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalue (E or l**2) with the diagnostics of the shooting run."""

    eigenvalue: float
    node_count: int
    residual: float
    grid: object
    unextrapolated: Tuple[float, ...] = ()
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def converged(self) -> bool:
        return self.residual < RESIDUAL_TOL

    @property
    def grid_too_coarse(self) -> bool:
        """Richardson extrapolation moved the value by more than the requested tolerance."""
        return bool(self.metadata.get("grid_too_coarse", False))


@dataclass(frozen=True)
class _Shot:
    eigenvalue: float
    node_count: int
    residual: float
    match_index: int


def _numerov_derivative(h, g_m1, y_m1, g_p1, y_p1):
    # fourth-order first derivative consistent with the Numerov recursion
    return ((1 - h * h * g_p1 / 6) * y_p1 - (1 - h * h * g_m1 / 6) * y_m1) / (2 * h)


class _Shooter:
    """Matched outward/inward Numerov shooting for y'' = (g0 - ev*w) y."""

    def __init__(self, x, g0, w, left: Callable, right: Callable):
        self.x = x
        self.g0 = g0
        self.w = w
        self.h = x[1] - x[0]
        self.h2 = self.h * self.h
        self.left = left
        self.right = right
        self.n = len(x)

    def g(self, ev):
        return self.g0 - ev * self.w

    def full_count(self, ev) -> int:
        g = self.g(ev)
        y0, y1 = self.left(ev)
        return numerov_out(g, self.h2, y0, y1, self.n - 2)[0]

    def mismatch(self, ev, m):
        """(total nodes, D_out - D_in) at matching index m."""
        g = self.g(ev)
        y0, y1 = self.left(ev)
        c_out, o_m1, o_m, o_p1 = numerov_out(g, self.h2, y0, y1, m)
        y_last, y_before = self.right(ev, g)
        c_in, i_m1, i_m, i_p1 = numerov_in(g, self.h2, y_last, y_before, m)
        d_out = _numerov_derivative(self.h, g[m - 1], o_m1, g[m + 1], o_p1) / o_m
        d_in = _numerov_derivative(self.h, g[m - 1], i_m1, g[m + 1], i_p1) / i_m
        # a node sitting on the matching point is counted once, by the outward leg
        return c_out + c_in, d_out - d_in

    def _above(self, ev, n, m) -> bool:
        # monotone in ev: False below the n-th eigenvalue, True above
        count, f = self.mismatch(ev, m)
        if not math.isfinite(f):
            return count > n
        return count > n or (count == n and f < 0)

    def dirichlet_bracket(self, n, lo, hi, rtol=1e-6):
        """Bisection on the full-grid outward node count."""
        if self.full_count(lo) > n:
            raise BracketError(f"lower bound {lo} already has more than {n} nodes")
        if self.full_count(hi) <= n:
            raise BracketError(f"upper bound {hi} has at most {n} nodes")
        scale = max(abs(lo), abs(hi))
        while hi - lo > rtol * scale:
            mid = 0.5 * (lo + hi)
            if self.full_count(mid) > n:
                hi = mid
            else:
                lo = mid
        return lo, hi

    def match_index(self, ev, n) -> int:
        g = self.g(ev)
        allowed = np.nonzero(g < 0)[0]
        last = self.n - 3
        if len(allowed) and allowed[-1] < self.n - 8:
            m = allowed[-1] + 1
        else:
            # no outer forbidden region: match midway between the last node and the edge
            prof = numerov_profile(g, self.h2, *self.left(ev))
            changes = np.nonzero(prof[:-1] * prof[1:] < 0)[0]
            start = changes[n - 1] if n > 0 and len(changes) >= n else self.n // 2
            m = (max(start, self.n // 2) + self.n) // 2
        return int(min(max(m, 2), last))

    def solve(self, n, lo, hi) -> _Shot:
        d_lo, d_hi = self.dirichlet_bracket(n, lo, hi)
        m = self.match_index(0.5 * (d_lo + d_hi), n)
        if self._above(lo, n, m):
            raise BracketError("matched indicator is already above at the lower bound")
        while not self._above(hi, n, m):
            hi = hi + (hi - lo)
        # bisect until both ends sit in the n-node sector with opposite mismatch signs
        for _ in range(200):
            c_lo, f_lo = self.mismatch(lo, m)
            c_hi, f_hi = self.mismatch(hi, m)
            if c_lo == n and c_hi == n and f_lo >= 0 >= f_hi:
                break
            mid = 0.5 * (lo + hi)
            if self._above(mid, n, m):
                hi = mid
            else:
                lo = mid
        else:
            raise BracketError("could not isolate the requested node sector")
        if f_lo == 0 or f_hi == 0:
            # bisection landed on the root itself
            ev = lo if f_lo == 0 else hi
        else:
            ev = brentq(lambda e: self.mismatch(e, m)[1], lo, hi, xtol=1e-300, rtol=1e-15, maxiter=200)
        count, f = self.mismatch(ev, m)
        return _Shot(eigenvalue=ev, node_count=count, residual=abs(f), match_index=m)


def _richardson(coarse: float, fine: float) -> float:
    return fine + (fine - coarse) / 15.0


def _extrapolated(coarse: _Shot, fine: _Shot, coarse_grid, fine_grid, tolerance: float) -> EigenResult:
    value = _richardson(coarse.eigenvalue, fine.eigenvalue)
    shift = abs(value - fine.eigenvalue) / abs(value)
    return EigenResult(
        eigenvalue=value,
        node_count=fine.node_count,
        residual=max(coarse.residual, fine.residual),
        grid=fine_grid,
        unextrapolated=(coarse.eigenvalue, fine.eigenvalue),
        metadata={
            "coarse_grid": coarse_grid,
            "match_index": fine.match_index,
            "richardson_shift": shift,
            "grid_too_coarse": shift > tolerance,
        },
    )


# --- radial -----------------------------------------------------------------


def _length_scale(potential: PotentialSpec, units: UnitSystem) -> float:
    hbar = units.hbar
    if isinstance(potential, Hartmann):
        return hbar * hbar / abs(potential.alpha)
    return math.sqrt(hbar / math.sqrt(potential.alpha))


def _radial_shooter(potential, big_l, units, grid: RadialGrid) -> _Shooter:
    hbar2 = units.hbar**2
    x = grid.x
    r = np.exp(x)
    nu = big_l + 0.5
    g0 = r * r * potential.radial_potential(r) / hbar2 + nu * nu
    w = r * r / hbar2
    is_coulomb = isinstance(potential, Hartmann)
    alpha = potential.alpha
    r0, r1 = r[0], r[1]

    def left(ev):
        # u ~ r**(L+1) (1 + c1 r + c2 r**2), y = u / sqrt(r); normalized to y0 = 1
        if is_coulomb:
            c1 = alpha / (hbar2 * (2 * big_l + 2))
            c2 = (alpha * c1 / hbar2 - ev / hbar2) / (4 * big_l + 6)
        else:
            c1 = 0.0
            c2 = -ev / (hbar2 * (4 * big_l + 6))
        s0 = 1 + c1 * r0 + c2 * r0 * r0
        s1 = 1 + c1 * r1 + c2 * r1 * r1
        return 1.0, math.exp(nu * (x[1] - x[0])) * s1 / s0

    def right(ev, g):
        if g[-1] <= 0 or g[-2] <= 0:
            return 0.0, 1.0
        # WKB decaying tail, growing inward
        return 1.0, math.exp(0.5 * (math.sqrt(g[-1]) + math.sqrt(g[-2])) * (x[-1] - x[-2]))

    return _Shooter(x, g0, w, left, right)


def radial_eigen_on_grid(potential, big_l, n_r, units, grid: RadialGrid) -> _Shot:
    shooter = _radial_shooter(potential, big_l, units, grid)
    if shooter.h2 * float(np.max(shooter.g0)) / 12 > 0.5:
        # Numerov loses stability once h**2 g / 12 approaches 1
        raise ValueError("radial grid step too coarse for the tail of the potential")
    # below min of the Langer-modified effective potential there are no nodes
    lo = float(np.min(shooter.g0 / shooter.w))
    lo -= 1e-3 * abs(lo) + 1e-12
    if isinstance(potential, Hartmann):
        hi = -1e-300
        if shooter.full_count(hi) <= n_r:
            raise BracketError("radial grid too short to hold the requested Coulomb state")
    else:
        hi = abs(lo) + units.hbar * math.sqrt(potential.alpha)
        while shooter.full_count(hi) <= n_r:
            hi *= 2
            if hi > 1e12:
                raise BracketError("could not bracket oscillator state")
    return shooter.solve(n_r, lo, hi)


def _grid(r_min, r_max, step) -> RadialGrid:
    n = int(math.ceil((math.log(r_max) - math.log(r_min)) / step)) + 1
    return RadialGrid(r_min=r_min, r_max=r_max, n_points=max(n, 16))


def _settle_radial(potential, big_l, n_r, units, step, r_min):
    """Find r_max >= 2.5 x outer turning point with a converged tail."""
    length = _length_scale(potential, units)
    if isinstance(potential, Hartmann):
        r_max = 20.0 * length * (1 + big_l + n_r) ** 2
    else:
        r_max = 4.0 * length * math.sqrt(2 * n_r + big_l + 2)
    for _ in range(60):
        try:
            shot = radial_eigen_on_grid(potential, big_l, n_r, units, _grid(r_min, r_max, step))
            break
        except BracketError:
            r_max *= 2
    else:
        raise BracketError("no radial grid could hold the requested state")
    a = units.hbar**2 * big_l * (big_l + 1)
    try:
        outer = radial_turning_points(potential, shot.eigenvalue, a).outer
    except NoClassicalRegionError:
        outer = r_max / 2.5
    r_max = max(r_max, 2.5 * outer)
    previous = None
    for _ in range(40):
        shot = radial_eigen_on_grid(potential, big_l, n_r, units, _grid(r_min, r_max, step))
        if previous is not None and abs(shot.eigenvalue - previous) <= TAIL_RTOL * abs(shot.eigenvalue):
            return r_max, shot
        previous = shot.eigenvalue
        r_max *= 1.25
    raise BracketError("tail of the radial grid did not converge")


def radial_eigen(
    potential: PotentialSpec,
    big_l: float,
    n_r: int,
    units: UnitSystem,
    *,
    step: float = RADIAL_STEP,
    r_min: float = R_MIN,
    tolerance: float = GRID_RTOL,
) -> EigenResult:
    """Energy of the radial state with ``n_r`` interior nodes.

    Two grids (``step`` and ``step/2`` in ln r) are solved on the same
    domain and Richardson-extrapolated.
    """
    r_max, _ = _settle_radial(potential, big_l, n_r, units, step, r_min)
    coarse_grid = _grid(r_min, r_max, step)
    fine_grid = RadialGrid(r_min, r_max, 2 * coarse_grid.n_points - 1)
    coarse = radial_eigen_on_grid(potential, big_l, n_r, units, coarse_grid)
    fine = radial_eigen_on_grid(potential, big_l, n_r, units, fine_grid)
    if coarse.node_count != n_r or fine.node_count != n_r:
        raise BracketError(f"node count mismatch: {coarse.node_count}, {fine.node_count} != {n_r}")
    return _extrapolated(coarse, fine, coarse_grid, fine_grid, tolerance)


def numerov_error_ratios(potential, big_l, n_r, units, exact, steps=(0.08, 0.04, 0.02, 0.01),
                         r_min=R_MIN, r_max=None):
    """Error ratios between successive grid halvings on a fixed domain."""
    if r_max is None:
        r_max, _ = _settle_radial(potential, big_l, n_r, units, steps[-1], r_min)
    span = math.log(r_max) - math.log(r_min)
    errors = []
    for h in steps:
        n = int(round(span / h)) + 1
        shot = radial_eigen_on_grid(potential, big_l, n_r, units, RadialGrid(r_min, r_max, n))
        errors.append(abs(shot.eigenvalue - exact))
    return [errors[i] / errors[i + 1] for i in range(len(errors) - 1)], errors


# --- angular ----------------------------------------------------------------


def _angular_shooter(mu_sq: float, grid: AngularGrid) -> _Shooter:
    x = grid.x
    sech2 = 1.0 / np.cosh(x) ** 2
    g0 = mu_sq + 0.25 * sech2
    w = sech2
    mu = math.sqrt(mu_sq)
    theta = 2 * np.arctan(np.exp(x[:2]))
    sin = np.sin(theta)

    def start(ev):
        # H ~ theta**(mu+1/2) (1 + c2 theta**2), y = H / sqrt(sin theta)
        c2 = ((mu_sq - 0.25) / 3 - ev) / (4 * mu + 4)
        h = theta ** (mu + 0.5) * (1 + c2 * theta**2) / np.sqrt(sin)
        return 1.0, float(h[1] / h[0])

    def right(ev, g):
        y0, y1 = start(ev)
        return y0, y1

    return _Shooter(x, g0, w, start, right)


@lru_cache(maxsize=512)
def _angular_solve(mu_sq: float, n_theta: int, step: float, eps: float, tolerance: float) -> EigenResult:
    edge = -2 * math.log(math.tan(eps / 2))
    n = int(math.ceil(edge / step)) + 1
    coarse_grid = AngularGrid(eps, n)
    fine_grid = AngularGrid(eps, 2 * n - 1)
    shots = []
    for grid in (coarse_grid, fine_grid):
        shooter = _angular_shooter(mu_sq, grid)
        # g > 0 everywhere for l**2 <= mu**2
        lo = mu_sq
        hi = max(2 * lo, 1.0)
        while shooter.full_count(hi) <= n_theta:
            hi *= 2
        shots.append(shooter.solve(n_theta, lo, hi))
    coarse, fine = shots
    if coarse.node_count != n_theta or fine.node_count != n_theta:
        raise BracketError("angular node count mismatch")
    return _extrapolated(coarse, fine, coarse_grid, fine_grid, tolerance)


def angular_eigen(
    mu_squared: float,
    n_theta: int,
    units: Optional[UnitSystem] = None,
    *,
    step: float = ANGULAR_STEP,
    eps: float = ANGULAR_EPS,
    tolerance: float = GRID_RTOL,
) -> EigenResult:
    """l**2 of the angular state with ``n_theta`` interior nodes on (0, pi).

    ``mu_squared`` = m**2 + beta/hbar**2 already carries hbar, so ``units``
    does not enter the computation.
    """
    if mu_squared < 0:
        raise ValueError(f"mu_squared must be >= 0, got {mu_squared!r}")
    return _angular_solve(float(mu_squared), int(n_theta), float(step), float(eps), float(tolerance))


# --- composition ------------------------------------------------------------


@dataclass(frozen=True)
class LevelComparison:
    e_analytic: float
    e_numeric: float
    rel_err: float
    l2_analytic: float
    l2_numeric: float
    l2_rel_err: float
    radial: EigenResult
    angular: EigenResult
    tolerance: float = 1e-6

    @property
    def ok(self) -> bool:
        return self.rel_err < self.tolerance and self.l2_rel_err < self.tolerance

    @property
    def flags(self) -> Tuple[str, ...]:
        """Names of every check that exceeded its tolerance."""
        out = []
        if not self.rel_err < self.tolerance:
            out.append("energy")
        if not self.l2_rel_err < self.tolerance:
            out.append("l_squared")
        for name, result in (("radial", self.radial), ("angular", self.angular)):
            if result.grid_too_coarse:
                out.append(f"{name}_grid_too_coarse")
            if not result.converged:
                out.append(f"{name}_residual")
        return tuple(out)


def full_level_check(
    potential: PotentialSpec,
    qn: QuantumNumbers,
    units: UnitSystem,
    *,
    tolerance: float = 1e-6,
    energy_override: Optional[float] = None,
) -> LevelComparison:
    """Compare the closed-form level with the two Numerov solves.

    The radial solve uses the numerically obtained l**2, so the chain
    angular -> radial is independent of the closed forms end to end.
    ``energy_override`` replaces the closed-form energy (used to inject
    deliberate perturbations).
    """
    mu_sq = mu_squared(qn.m, potential.beta, units)
    angular = angular_eigen(mu_sq, qn.n_theta, units)
    big_l = max(math.sqrt(angular.eigenvalue) - 0.5, 0.0)
    radial = _radial_cached(potential, big_l, qn.n_r, units)
    e_analytic = energy(potential, qn, units) if energy_override is None else energy_override
    l2_analytic = l_squared(qn.n_theta, qn.m, potential.beta, units)
    return LevelComparison(
        e_analytic=e_analytic,
        e_numeric=radial.eigenvalue,
        rel_err=abs(e_analytic - radial.eigenvalue) / abs(e_analytic),
        l2_analytic=l2_analytic,
        l2_numeric=angular.eigenvalue,
        l2_rel_err=abs(l2_analytic - angular.eigenvalue) / l2_analytic,
        radial=radial,
        angular=angular,
        tolerance=tolerance,
    )


@lru_cache(maxsize=2048)
def _radial_cached(potential, big_l, n_r, units):
    return radial_eigen(potential, big_l, n_r, units)



def clear_caches() -> None:
    """Forget memoized solves (for timing runs)."""
    _radial_cached.cache_clear()
    _angular_solve.cache_clear()
