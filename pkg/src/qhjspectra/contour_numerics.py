"""Numerical quantum action variables from complex-plane continuation.

The linear separated equations u'' = f(z) u are continued analytically along
closed ellipses in the complex coordinate plane. The quantum momentum
function is formed from the logarithmic derivative,

    p_r     = (hbar/i) (R'/R - 1/r)
    p_theta = (hbar/i) (H'/H - cot(theta)/2)

and (1/2 pi) * closed integral of p is evaluated with the trapezoidal rule,
which converges geometrically for periodic analytic integrands. By the
argument principle the result is hbar times the number of zeros of the
solution inside the contour, so at an eigenvalue it reproduces J = n hbar.

Riccati forms are never integrated: their solutions have poles at every
wavefunction node, whereas the linear equation is regular there.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np
from scipy.integrate import quad, solve_ivp

from .analytic_spectra import TurningPoints, angular_turning_points, radial_turning_points
from .errors import (
    ConvergenceError,
    NoClassicalRegionError,
    NodeOnContourError,
    PropagationError,
    WindowError,
)
from .potentials import (
    Hartmann,
    PotentialSpec,
    QuantumNumbers,
    UnitSystem,
    effective_radial_problem,
    mu_squared,
)

__all__ = [
    "OdeProblem",
    "Segment",
    "ContourPath",
    "PathSolution",
    "ActionEstimate",
    "radial_problem",
    "angular_problem",
    "frobenius_window",
    "regular_start",
    "propagate",
    "qmf_samples",
    "default_contour",
    "contour_action",
    "classical_action_numeric",
    "level_contour_actions",
    "NotApplicable",
]

# tighter than 1e-10: pointwise QMF samples must be good to 1e-10
STEP_RTOL = 1e-12
ACTION_TOL = 1e-8
MIN_SAMPLES = 64
MAX_SAMPLES = 65536
START_TOL = 1e-14
WINDOW_TOL = 1e-8


@dataclass(frozen=True)
class OdeProblem:
    """u'' = f(z) u for the radial or the angular separated equation.

    ``index`` is L for the radial problem (centrifugal L(L+1)/r**2) and mu
    for the angular problem ((mu**2 - 1/4)/sin**2). ``eigen`` is the energy
    E or l**2 respectively.
    """

    kind: str
    index: float
    eigen: float
    units: UnitSystem
    potential: Optional[PotentialSpec] = None
    fixed_singularities: Tuple[complex, ...] = ()

    def coefficient(self, z):
        if self.kind == "radial":
            ll1 = self.index * (self.index + 1)
            return (self.potential.radial_potential(z) - self.eigen) / self.units.hbar**2 + ll1 / (z * z)
        s = cmath.sin(z)
        return (self.index**2 - 0.25) / (s * s) - self.eigen

    def measure_correction(self, z):
        """Term removed from u'/u to convert the reduced function back to psi."""
        if self.kind == "radial":
            return 1.0 / z
        return 0.5 * cmath.cos(z) / cmath.sin(z)

    @property
    def exponent(self) -> float:
        """Leading Frobenius exponent of the regular solution."""
        return self.index + 1.0 if self.kind == "radial" else self.index + 0.5

    @property
    def exponent_gap(self) -> float:
        """Difference between the two indicial roots."""
        return 2 * self.index + 1.0 if self.kind == "radial" else 2 * self.index

    def next_frobenius_term(self) -> Tuple[int, float]:
        """(k, c_k): first nonzero correction u = z**s (1 + c_k z**k + ...)."""
        hbar2 = self.units.hbar**2
        L = self.index
        if self.kind == "radial":
            if isinstance(self.potential, Hartmann):
                return 1, self.potential.alpha / (hbar2 * (2 * L + 2))
            return 2, -self.eigen / (hbar2 * (4 * L + 6))
        mu = self.index
        return 2, ((mu * mu - 0.25) / 3 - self.eigen) / (4 * mu + 4)

    @property
    def a(self) -> float:
        """Separation constant entering the turning-point condition."""
        hbar2 = self.units.hbar**2
        if self.kind == "radial":
            return hbar2 * self.index * (self.index + 1)
        return hbar2 * (self.eigen - 0.25)

    def turning_points(self) -> TurningPoints:
        if self.kind == "radial":
            return radial_turning_points(self.potential, self.eigen, self.a)
        return angular_turning_points(self.a, self.units.hbar**2 * self.index**2, 0.0)


def radial_problem(potential: PotentialSpec, big_l: float, energy: float, units: UnitSystem) -> OdeProblem:
    return OdeProblem("radial", float(big_l), float(energy), units, potential, (0j,))


def angular_problem(mu_sq: float, l_sq: float, units: UnitSystem) -> OdeProblem:
    return OdeProblem("angular", math.sqrt(mu_sq), float(l_sq), units, None, (0j, complex(math.pi)))


# --- paths ------------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    """Straight path from ``start`` to ``end``, parameter t in [0, 1]."""

    start: complex
    end: complex

    span = (0.0, 1.0)

    def point(self, t):
        return self.start + (self.end - self.start) * t

    def derivative(self, t):
        return (self.end - self.start) * np.ones_like(t)


@dataclass(frozen=True)
class ContourPath:
    """Counterclockwise ellipse center + A cos(t + phase) + i B sin(t + phase)."""

    center: complex
    semi_axes: Tuple[float, float]
    n_samples: int = MIN_SAMPLES
    phase: float = 0.5 * math.pi

    span = (0.0, 2 * math.pi)

    def __post_init__(self):
        a, b = self.semi_axes
        if not (a > 0 and b > 0):
            raise ValueError(f"semi-axes must be positive, got {self.semi_axes}")
        n = self.n_samples
        if n < 1 or n & (n - 1):
            raise ValueError(f"n_samples must be a power of two, got {n}")

    def point(self, t):
        a, b = self.semi_axes
        return self.center + a * np.cos(t + self.phase) + 1j * b * np.sin(t + self.phase)

    def derivative(self, t):
        a, b = self.semi_axes
        return -a * np.sin(t + self.phase) + 1j * b * np.cos(t + self.phase)

    def distance_to(self, z: complex, n: int = 4096) -> float:
        t = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
        return float(np.min(np.abs(self.point(t) - z)))

    def encloses(self, z: complex) -> bool:
        a, b = self.semi_axes
        d = z - self.center
        return (d.real / a) ** 2 + (d.imag / b) ** 2 < 1.0

    @property
    def perimeter(self) -> float:
        a, b = self.semi_axes
        h = ((a - b) / (a + b)) ** 2
        return math.pi * (a + b) * (1 + 3 * h / (10 + math.sqrt(4 - 3 * h)))


Path = Union[Segment, ContourPath]


@dataclass(frozen=True)
class PathSolution:
    """(u, u') along a path, with the integrator's dense output."""

    path: Path
    t: np.ndarray
    u: np.ndarray
    u_prime: np.ndarray
    dense: object = field(repr=False)
    n_steps: int = 0
    nfev: int = 0
    rtol: float = STEP_RTOL

    def __call__(self, t):
        y = self.dense(t)
        return y[0], y[1]

    @property
    def final(self) -> Tuple[complex, complex]:
        return complex(self.u[-1]), complex(self.u_prime[-1])


@dataclass(frozen=True)
class ActionEstimate:
    value: complex
    refinement_history: List[Tuple[int, complex]]
    converged: bool
    monodromy: float = 0.0

    @property
    def n_samples(self) -> int:
        return self.refinement_history[-1][0]

    def quantum_number(self, hbar: float) -> int:
        return int(round(self.value.real / hbar))


# --- operations -------------------------------------------------------------


def frobenius_window(problem: OdeProblem, tol: float = WINDOW_TOL) -> float:
    """Largest x0 at which starting on the bare power law is accurate to ``tol``.

    Dropping the term c_k x0**k from the regular solution admixes the second
    Frobenius solution with a relative weight of order |c_k| x0**(k + gap),
    where gap is the difference of the indicial roots.
    """
    k, c = problem.next_frobenius_term()
    if c == 0:
        return math.inf
    return (tol / abs(c)) ** (1.0 / (k + problem.exponent_gap))


def regular_start(problem: OdeProblem, x0: float, tol: float = WINDOW_TOL) -> Tuple[complex, complex]:
    """Initial data x0**s, s x0**(s-1) of the solution regular at the singular point."""
    if not x0 > 0:
        raise WindowError(f"x0 must be positive, got {x0!r}")
    limit = frobenius_window(problem, tol)
    if x0 > limit:
        raise WindowError(f"x0={x0!r} outside the Frobenius window (< {limit:.3g}) at tolerance {tol:g}")
    s = problem.exponent
    return complex(x0**s), complex(s * x0 ** (s - 1))


def propagate(problem: OdeProblem, path: Path, initial: Tuple[complex, complex],
              rtol: float = STEP_RTOL) -> PathSolution:
    """Continue (u, u') along ``path`` with an adaptive 8(5,3) Runge-Kutta pair."""
    for z0 in problem.fixed_singularities:
        if isinstance(path, ContourPath) and path.distance_to(z0) < 1e-12:
            raise PropagationError(f"path passes through the singular point {z0}")

    def rhs(t, y):
        z = path.point(t)
        dz = path.derivative(t)
        return np.array([y[1] * dz, problem.coefficient(z) * y[0] * dz])

    y0 = np.array(initial, dtype=complex)
    sol = solve_ivp(rhs, path.span, y0, method="DOP853", rtol=rtol, atol=1e-300,
                    dense_output=True)
    if not sol.success:
        raise PropagationError(f"integration failed: {sol.message}")
    if not np.all(np.isfinite(sol.y)):
        raise PropagationError("non-finite values along the path")
    return PathSolution(path=path, t=sol.t, u=sol.y[0], u_prime=sol.y[1], dense=sol.sol,
                        n_steps=len(sol.t) - 1, nfev=sol.nfev, rtol=rtol)


def qmf_samples(solution: PathSolution, problem: OdeProblem, units: UnitSystem, t=None,
                node_tol: float = 1e-6) -> np.ndarray:
    """Quantum momentum function at parameters ``t`` (default: the integrator steps)."""
    if t is None:
        t, u, up = solution.t, solution.u, solution.u_prime
    else:
        u, up = solution(t)
    z = solution.path.point(t)
    scale = getattr(solution.path, "perimeter", None) or abs(solution.path.end - solution.path.start)
    # distance to the nearest zero, to first order
    with np.errstate(divide="ignore", invalid="ignore"):
        reach = np.abs(u) / np.abs(up)
    if np.any(reach < node_tol * scale) or np.any(u == 0):
        raise NodeOnContourError("the solution vanishes on the path")
    correction = np.array([problem.measure_correction(zi) for zi in np.atleast_1d(z)])
    return (units.hbar / 1j) * (up / u - correction.reshape(np.shape(u)))


def default_contour(problem: OdeProblem, n_samples: int = MIN_SAMPLES) -> ContourPath:
    """Ellipse around the two physical turning points.

    Centered on their midpoint with semi-minor axis a quarter of their
    separation w. The turning points are enclosed with a margin of 0.05 w,
    reduced where needed to keep min(0.1 w, inner/2) clear of r = 0 or
    theta = 0, pi. When the inner radial turning point is r = 0 the origin
    is enclosed on purpose (only possible for L = 0).
    """
    tp = problem.turning_points()
    w = tp.width
    margin = 0.05 * w
    if not (problem.kind == "radial" and tp.inner == 0.0):
        clearance = min(0.1 * w, 0.5 * tp.inner)
        margin = max(0.0, min(margin, tp.inner - clearance))
    return ContourPath(center=complex(tp.midpoint), semi_axes=(0.5 * w + margin, 0.25 * w),
                       n_samples=n_samples)


def _start_point(problem: OdeProblem, path: ContourPath) -> float:
    x0 = frobenius_window(problem, START_TOL)
    reach = max(path.center.real - path.semi_axes[0], 0.0)
    if reach > 0:
        x0 = min(x0, 0.1 * reach)
    else:
        x0 = min(x0, 1e-3 * path.semi_axes[0])
    return x0


def contour_action(problem: OdeProblem, path: Optional[ContourPath] = None,
                   units: Optional[UnitSystem] = None, *, tol: float = ACTION_TOL,
                   max_samples: int = MAX_SAMPLES, rtol: float = STEP_RTOL) -> ActionEstimate:
    """(1/2 pi) * closed integral of p along ``path`` for the regular solution.

    The solution regular at the left singular point (r = 0 or theta = 0) is
    carried from the Frobenius start to the contour, then once around it.
    Sample counts double from ``path.n_samples`` until successive trapezoid
    sums differ by less than ``tol``.
    """
    units = units or problem.units
    path = path or default_contour(problem)
    for z0 in problem.fixed_singularities:
        if problem.kind == "angular" and path.encloses(z0):
            raise PropagationError(f"contour encloses the fixed singularity {z0}")
    x0 = _start_point(problem, path)
    approach = propagate(problem, Segment(complex(x0), complex(path.point(0.0))),
                         regular_start(problem, x0, tol=START_TOL), rtol=rtol)
    u0, up0 = approach.final
    # unit normalization keeps the pure relative tolerance meaningful
    loop = propagate(problem, path, (1.0 + 0j, up0 / u0), rtol=rtol)
    u_end, up_end = loop.final
    monodromy = max(abs(u_end - 1.0), abs(up_end - up0 / u0) / max(abs(up0 / u0), 1e-300))

    history = []
    n = path.n_samples
    previous = None
    while True:
        t = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
        p = qmf_samples(loop, problem, units, t)
        value = complex(np.sum(p * path.derivative(t)) / n)
        history.append((n, value))
        if previous is not None and abs(value - previous) < tol:
            return ActionEstimate(value, history, True, monodromy)
        if 2 * n > max_samples:
            estimate = ActionEstimate(value, history, False, monodromy)
            raise ConvergenceError(f"trapezoid sums not converged at {n} samples", estimate)
        previous = value
        n *= 2


def classical_action_numeric(potential: PotentialSpec, E: float, a: float) -> float:
    """(1/pi) * integral of sqrt(E - V1 - a/r**2) between the turning points.

    With r = mid - (w/2) cos(phi) the endpoint square-root behaviour turns
    into a smooth sin(phi)**2 factor, so Gauss-Kronrod converges rapidly.
    """
    tp = radial_turning_points(potential, E, a)
    r1, r2 = tp.inner, tp.outer
    half = 0.5 * (r2 - r1)

    if isinstance(potential, Hartmann):
        kappa = math.sqrt(-E)

        def integrand(phi):
            r = tp.midpoint - half * math.cos(phi)
            # sqrt(E - V) = kappa sqrt((r - r1)(r2 - r)) / r and sqrt(...) = half sin(phi)
            return kappa * (half * math.sin(phi)) ** 2 / r
    else:
        root_alpha = math.sqrt(potential.alpha)

        def integrand(phi):
            r = tp.midpoint - half * math.cos(phi)
            return root_alpha * (half * math.sin(phi)) ** 2 * math.sqrt((r + r1) * (r + r2)) / r

    value, _ = quad(integrand, 0.0, math.pi, epsabs=1e-13, epsrel=1e-13, limit=200)
    return value / math.pi


class NotApplicable:
    """Marker for a contour check that cannot be set up (no turning points)."""

    reason: str

    def __init__(self, reason: str):
        self.reason = reason

    def __repr__(self):
        return f"NotApplicable({self.reason!r})"


def level_contour_actions(potential: PotentialSpec, qn: QuantumNumbers, units: UnitSystem,
                          energy: float, l_sq: Optional[float] = None):
    """Radial and angular contour actions at the given energy and l**2.

    With ``l_sq`` omitted the closed-form angular eigenvalue is used. The
    angular leg is not applicable when b + beta = 0, since the angular
    momentum function then has no turning points.
    """
    if l_sq is None:
        big_l = effective_radial_problem(potential, qn, units).big_l
        l_sq = (big_l + 0.5) ** 2
    else:
        big_l = math.sqrt(l_sq) - 0.5
    radial_est = contour_action(radial_problem(potential, big_l, energy, units), units=units)
    mu_sq = mu_squared(qn.m, potential.beta, units)
    if mu_sq == 0:
        return radial_est, NotApplicable("b + beta = 0: no angular turning points")
    try:
        angular_est = contour_action(angular_problem(mu_sq, l_sq, units), units=units)
    except NoClassicalRegionError as exc:
        return radial_est, NotApplicable(str(exc))
    return radial_est, angular_est
