"""Zero-energy two-body scattering for repulsive finite-range potentials.

The radial problem solved here is

    (-d^2/dt^2 - (2/t) d/dt + V(t)) f0 = 0,    V(t) = v(t/a) / (2 a^2),

with f0 -> 1 at infinity.  Outside the range a*R0 the solution is exactly
``1 - a_s/t``, which fixes both the normalization and the scattering length
``a_s``.  The interior is integrated for the pair ``(f, t^2 f')``, which
keeps the 2/t singularity out of the right-hand side.

From f0 the module also builds the Jastrow cutoff ``f = f0/f0(R)`` and the
planar kernels

    h(z) = int_{R^2} (f'(|x|)^2 + V(|x|) f(|x|)^2) d^2 x_perp
    m(z) = int_{R^2} f'(|x|) d^2 x_perp

which, after the substitution t^2 = rho^2 + z^2, become one-dimensional
integrals ``2 pi int_{|z|}^R (...) t dt``.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np
from scipy import integrate

__all__ = [
    "PotentialKind",
    "PotentialSpec",
    "GridPolicy",
    "ScatteringSolution",
    "JastrowCutoff",
    "KernelPair",
    "ScatteringError",
    "square_barrier_length",
    "solve_zero_energy",
    "calibrate_unit_scattering_length",
    "build_jastrow",
    "kernels",
    "smooth_barrier",
    "kernel_bounds",
]

RTOL = 1e-12
ATOL = 1e-14


class ScatteringError(RuntimeError):
    pass


class PotentialKind(str, Enum):
    HARD_CORE = "hard_core"
    SQUARE_BARRIER = "square_barrier"
    TABULATED_RADIAL = "tabulated_radial"


@dataclass(frozen=True)
class PotentialSpec:
    """Repulsive pair potential ``v(t)`` in units where the scattering length is a=1.

    ``table`` is a pair of equal-length sequences ``(t, v)`` for the tabulated
    kind; values between samples are linearly interpolated and the
    potential vanishes beyond ``range_R0``.  For the tabulated kind
    ``strength_v0`` is a multiplier applied to the table.
    """

    kind: PotentialKind
    range_R0: float
    strength_v0: float = math.inf
    table: Optional[tuple[tuple[float, ...], tuple[float, ...]]] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PotentialKind(self.kind))
        if not self.range_R0 > 0:
            raise ValueError("range_R0 must be positive")
        if not self.strength_v0 >= 0:
            raise ValueError("strength_v0 must be nonnegative")
        if self.kind is PotentialKind.TABULATED_RADIAL:
            if self.table is None:
                raise ValueError("tabulated_radial potential needs a table")
            t, v = (tuple(float(x) for x in col) for col in self.table)
            if len(t) != len(v) or len(t) < 2:
                raise ValueError("table columns must have equal length >= 2")
            if any(t2 <= t1 for t1, t2 in zip(t, t[1:])):
                raise ValueError("table radii must be strictly increasing")
            if min(v) < 0:
                raise ValueError("potential must be nonnegative")
            if t[0] > 0:
                t, v = (0.0,) + t, (v[0],) + v
            object.__setattr__(self, "table", (t, v))
            if not math.isfinite(self.strength_v0):
                raise ValueError("tabulated potential needs a finite multiplier")
        elif self.kind is PotentialKind.HARD_CORE:
            object.__setattr__(self, "strength_v0", math.inf)

    @property
    def is_zero(self) -> bool:
        if self.kind is PotentialKind.TABULATED_RADIAL:
            return self.strength_v0 == 0 or max(self.table[1]) == 0
        return self.strength_v0 == 0

    def __call__(self, t):
        """Evaluate v(t) (dimensionless radius, a=1 units)."""
        t = np.asarray(t, dtype=float)
        inside = t < self.range_R0
        if self.kind is PotentialKind.TABULATED_RADIAL:
            tt, vv = self.table
            val = self.strength_v0 * np.interp(t, tt, vv, right=0.0)
            return np.where(inside, val, 0.0)
        return np.where(inside, self.strength_v0, 0.0)

    def scaled(self, length: float) -> "PotentialSpec":
        """Return ``length^-2 v(t/length)``; its scattering length is ``length * a_s``."""
        if self.kind is PotentialKind.HARD_CORE:
            return replace(self, range_R0=self.range_R0 * length)
        s2 = 1.0 / length**2
        if self.kind is PotentialKind.SQUARE_BARRIER:
            return replace(self, range_R0=self.range_R0 * length, strength_v0=self.strength_v0 * s2)
        tt, vv = self.table
        return PotentialSpec(
            PotentialKind.TABULATED_RADIAL,
            range_R0=self.range_R0 * length,
            strength_v0=self.strength_v0 * s2,
            table=(tuple(x * length for x in tt), vv),
        )

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "range_R0": self.range_R0,
             "strength_v0": None if math.isinf(self.strength_v0) else self.strength_v0}
        if self.table is not None:
            d["table"] = [list(self.table[0]), list(self.table[1])]
        return d


def smooth_barrier(v0: float, R0: float = 1.0, samples: int = 401) -> PotentialSpec:
    """Tabulated soft sphere ``v0 (1 - (t/R0)^2)^2`` for t < R0 (C^1 at the edge)."""
    t = np.linspace(0.0, R0, samples)
    v = (1.0 - (t / R0) ** 2) ** 2
    return PotentialSpec(PotentialKind.TABULATED_RADIAL, R0, v0, (tuple(t), tuple(v)))


def square_barrier_length(v0: float, R0: float) -> float:
    """Closed-form scattering length of a square barrier of height v0 and radius R0 (a=1)."""
    if v0 == 0:
        return 0.0
    if math.isinf(v0):
        return R0
    kappa = math.sqrt(v0 / 2.0)
    return R0 - math.tanh(kappa * R0) / kappa


@dataclass(frozen=True)
class GridPolicy:
    """Graded radial sampling used for exported profiles.

    Spacing is geometric away from t=0 and from the range edge, with at least
    ``nodes_per_scale`` nodes across the range, capped at ``growth`` ratio.
    """

    nodes_per_scale: int = 20
    growth: float = 1.15
    outer_factor: float = 10.0


def graded_nodes(edge: float, outer: float, policy: GridPolicy) -> np.ndarray:
    h = edge / policy.nodes_per_scale
    # refine towards 0 and towards the edge from both sides
    left = _geometric(0.0, 0.5 * edge, h / 8, h, policy.growth)
    mid = edge - _geometric(0.0, 0.5 * edge, h / 8, h, policy.growth)[::-1]
    right = edge + _geometric(0.0, outer - edge, h / 8, max(h, (outer - edge) / 50), policy.growth)
    nodes = np.unique(np.concatenate([left, mid, right]))
    return nodes[(nodes >= 0) & (nodes <= outer)]


def _geometric(x0, length, h0, hmax, q):
    pts = [x0]
    h = h0
    while pts[-1] - x0 < length:
        pts.append(pts[-1] + h)
        h = min(h * q, hmax)
    pts[-1] = x0 + length
    return np.array(pts)


@dataclass(frozen=True)
class ScatteringSolution:
    """Zero-energy solution f0 for ``a^-2 v(t/a)``.

    ``scattering_length`` is an actual length (equal to ``a`` for a calibrated
    potential).  ``grid``/``f0``/``f0_prime`` are a graded sampling for
    export; the exact interior solution is kept for evaluation anywhere.
    """

    spec: PotentialSpec
    a: float
    scattering_length: float
    grid: np.ndarray
    f0: np.ndarray
    f0_prime: np.ndarray
    residual: float
    _interior: Optional[integrate.OdeSolution] = field(default=None, repr=False, compare=False)
    _scale: float = field(default=1.0, repr=False)  # C with f0 = f_u / C

    @property
    def edge(self) -> float:
        """Physical range a*R0 beyond which f0 = 1 - a_s/t."""
        return self.a * self.spec.range_R0

    def potential(self, t):
        """Scaled potential ``a^-2 v(t/a)`` (no 1/2)."""
        t = np.asarray(t, dtype=float)
        return self.spec(t / self.a) / self.a**2

    def f0_at(self, t):
        t_in = np.asarray(t, dtype=float)
        t = np.atleast_1d(t_in)
        safe = np.where(t > 0, t, 1.0)
        out = 1.0 - self.scattering_length / safe
        inner = t < self.edge
        if np.any(inner):
            if self.spec.kind is PotentialKind.HARD_CORE:
                out[inner] = 0.0
            elif self._interior is None:
                out[inner] = 1.0
            else:
                y = self._interior(np.clip(t[inner], self._t0, self.edge))
                out[inner] = y[0] / self._scale
        return out.reshape(t_in.shape)

    def f0_prime_at(self, t):
        t_in = np.asarray(t, dtype=float)
        t = np.atleast_1d(t_in)
        safe = np.where(t > 0, t, 1.0)
        out = self.scattering_length / safe**2
        inner = t < self.edge
        if np.any(inner):
            if self._interior is None or self.spec.kind is PotentialKind.HARD_CORE:
                out[inner] = 0.0
            else:
                tt = np.clip(t[inner], self._t0, self.edge)
                out[inner] = self._interior(tt)[1] / tt**2 / self._scale
        return out.reshape(t_in.shape)

    @property
    def _t0(self) -> float:
        return self._interior.ts[0] if self._interior is not None else 0.0

    def _cumulative(self, s, which: int):
        """Interior integrals from s to the edge (normalized f0).

        which=2: int t (f0'^2 + V f0^2) dt with V = v/(2a^2); which=3: int t f0' dt.
        """
        s = np.asarray(s, dtype=float)
        if self._interior is None:
            return np.zeros_like(s)
        y_edge = self._interior(self.edge)[which]
        y_s = self._interior(np.clip(s, self._t0, self.edge))[which]
        power = 2 if which == 2 else 1
        return (y_edge - y_s) / self._scale**power

    def write_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "f0", "f0_prime"])
            for row in zip(self.grid, self.f0, self.f0_prime):
                w.writerow([repr(float(x)) for x in row])


def _rhs(a, spec, linear=None):
    """Right-hand side; ``linear = (t_lo, V_lo, slope)`` gives V in closed form on a
    segment where the tabulated potential is linear (much cheaper than interpolating)."""
    def rhs(t, y):
        f, g = y[0], y[1]
        if linear is None:
            V = 0.5 * float(spec(t / a)) / a**2
        else:
            V = linear[1] + linear[2] * (t - linear[0])
        fp = g / t**2
        return [fp, t * t * V * f, t * (fp * fp + V * f * f), t * fp]

    return rhs


def _integrate_interior(spec, a, rtol):
    edge = a * spec.range_R0
    t0 = edge * 1e-7
    V0 = 0.5 * float(spec(0.0)) / a**2
    y0 = [1.0 + V0 * t0**2 / 6, V0 * t0**3 / 3, 0.0, 0.0]
    stops = [t0]
    if spec.kind is PotentialKind.TABULATED_RADIAL:
        # break the integration at table kinks
        knots = [a * x for x in spec.table[0] if 0 < a * x < edge]
        stops += sorted(knots)
    stops.append(edge)
    sols = []
    y = y0
    for lo, hi in zip(stops, stops[1:]):
        if hi <= lo:
            continue
        linear = None
        if spec.kind is PotentialKind.TABULATED_RADIAL:
            v_lo, v_hi = (0.5 * float(spec(x / a)) / a**2 for x in (lo, lo + (hi - lo) * (1 - 1e-9)))
            linear = (lo, v_lo, (v_hi - v_lo) / ((hi - lo) * (1 - 1e-9)))
        res = integrate.solve_ivp(_rhs(a, spec, linear), (lo, hi), y, method="DOP853",
                                  rtol=rtol, atol=ATOL, dense_output=True)
        if not res.success:
            raise ScatteringError(f"interior integration failed: {res.message}")
        sols.append(res)
        y = res.y[:, -1]
    interp = [s.sol.interpolants[i] for s in sols for i in range(len(s.sol.interpolants))]
    times = np.concatenate([[sols[0].t[0]]] + [s.t[1:] for s in sols])
    return integrate.OdeSolution(times, interp), y


def solve_zero_energy(spec: PotentialSpec, a: float = 1.0,
                      grid_policy: Optional[GridPolicy] = None) -> ScatteringSolution:
    """Solve the zero-energy scattering equation for ``a^-2 v(t/a)``.

    The returned ``residual`` estimates the interior integration error by
    comparing against a run at 100x looser tolerance (0 for closed forms).
    """
    if not a > 0:
        raise ValueError("a must be positive")
    policy = grid_policy or GridPolicy()
    edge = a * spec.range_R0
    grid = graded_nodes(edge, policy.outer_factor * edge, policy)

    if spec.is_zero:
        ones = np.ones_like(grid)
        return ScatteringSolution(spec, a, 0.0, grid, ones, np.zeros_like(grid), 0.0)

    if spec.kind is PotentialKind.HARD_CORE:
        sol = ScatteringSolution(spec, a, edge, grid, np.zeros_like(grid), np.zeros_like(grid), 0.0)
        return replace(sol, f0=sol.f0_at(grid), f0_prime=sol.f0_prime_at(grid))

    dense, y_edge = _integrate_interior(spec, a, RTOL)
    f_e, g_e = y_edge[0], y_edge[1]
    C = f_e + g_e / edge
    a_s = g_e / C
    _, y_chk = _integrate_interior(spec, a, RTOL * 100)
    C_chk = y_chk[0] + y_chk[1] / edge
    residual = abs(y_chk[1] / C_chk - a_s) / max(a_s, 1e-300)

    sol = ScatteringSolution(spec, a, float(a_s), grid, grid, grid, float(residual),
                             _interior=dense, _scale=float(C))
    return replace(sol, f0=sol.f0_at(grid), f0_prime=sol.f0_prime_at(grid))


def calibrate_unit_scattering_length(spec: PotentialSpec) -> PotentialSpec:
    """Rescale ``v -> L^-2 v(t/L)`` with L = 1/a_s so that a_s becomes 1.

    Range and strength are rescaled together; the scattering equation is
    covariant under this map, so the calibration is exact up to the ODE
    tolerance.
    """
    if spec.is_zero:
        raise ScatteringError("zero potential has a_s = 0; cannot calibrate")
    a_s = solve_zero_energy(spec, 1.0).scattering_length
    if not a_s > 0:
        raise ScatteringError(f"non-positive scattering length {a_s}")
    if abs(a_s - 1.0) < 1e-14:
        return spec
    return spec.scaled(1.0 / a_s)


@dataclass(frozen=True)
class JastrowCutoff:
    """``f = f0/f0(R)`` for t <= R and 1 beyond."""

    solution: ScatteringSolution
    R: float
    f0_R: float

    def f(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t < self.R, self.solution.f0_at(t) / self.f0_R, 1.0)

    def f_prime(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t < self.R, self.solution.f0_prime_at(t) / self.f0_R, 0.0)


def build_jastrow(sol: ScatteringSolution, R: float) -> JastrowCutoff:
    if R < sol.edge:
        raise ValueError(f"cutoff R={R} below potential range {sol.edge}")
    f0_R = float(sol.f0_at(R))
    if not f0_R > 0:
        raise ValueError("f0(R) must be positive")
    return JastrowCutoff(sol, float(R), f0_R)


@dataclass(frozen=True)
class KernelPair:
    R: float
    z: np.ndarray
    h: np.ndarray
    m: np.ndarray
    integral_h: float
    integral_m: float
    sup_m: float
    quad_error: float
    _jastrow: JastrowCutoff = field(repr=False, compare=False)

    def h_at(self, z):
        return _h_profile(self._jastrow, z)

    def m_at(self, z):
        return _m_profile(self._jastrow, z)


def _h_profile(jf: JastrowCutoff, z):
    sol, R = jf.solution, jf.R
    s = np.abs(np.asarray(z, dtype=float))
    a_s, edge = sol.scattering_length, sol.edge
    lo = np.maximum(s, edge)
    ext = 0.5 * a_s**2 * (1.0 / np.minimum(lo, R) ** 2 - 1.0 / R**2)
    # the ODE state tracks t (f'^2 + V f^2) with V = v/(2a^2), i.e. h's integrand
    inner = sol._cumulative(np.minimum(s, edge), 2)
    val = 2 * np.pi * (ext + np.where(s < edge, inner, 0.0)) / jf.f0_R**2
    return np.where(s < R, val, 0.0)


def _m_profile(jf: JastrowCutoff, z):
    sol, R = jf.solution, jf.R
    s = np.abs(np.asarray(z, dtype=float))
    a_s, edge = sol.scattering_length, sol.edge
    lo = np.minimum(np.maximum(s, edge), R)
    ext = a_s * np.log(R / lo)
    inner = sol._cumulative(np.minimum(s, edge), 3)
    val = 2 * np.pi * (ext + np.where(s < edge, inner, 0.0)) / jf.f0_R
    return np.where(s < R, val, 0.0)


def kernels(f: JastrowCutoff, samples: int = 401) -> KernelPair:
    """Tabulate h and m on [-R, R] and integrate them over z by adaptive quadrature."""
    R, edge = f.R, f.solution.edge
    pts = sorted({0.0, min(edge, R), R})

    def quad(fun):
        total, err = 0.0, 0.0
        for lo, hi in zip(pts, pts[1:]):
            if hi > lo:
                with warnings.catch_warnings():
                    # closed-form pieces are integrated past the roundoff floor
                    warnings.simplefilter("ignore", integrate.IntegrationWarning)
                    v, e = integrate.quad(lambda z: float(fun(f, z)), lo, hi,
                                          epsabs=0.0, epsrel=1e-11, limit=200)
                total += v
                err += e
        return 2 * total, 2 * err

    int_h, err_h = quad(_h_profile)
    int_m, err_m = quad(_m_profile)
    z = np.linspace(-R, R, samples)
    h = _h_profile(f, z)
    m = _m_profile(f, z)
    sup_m = float(max(m.max(), _m_profile(f, 0.0)))
    rel_err = max(err_h / max(int_h, 1e-300), err_m / max(int_m, 1e-300))
    return KernelPair(R, z, h, m, float(int_h), float(int_m), sup_m, float(rel_err), f)


def kernel_bounds(a: float, R: float) -> dict:
    """Reference values: int h identity and the sup/integral bounds on m."""
    q = 1.0 - a / R
    return {
        "integral_h": 4 * np.pi * a / q,
        "sup_m_bound": 2 * np.pi * a * (1 + math.log(R / a)) / q,
        "integral_m_bound": 2 * np.pi * a * R * (1 - a / (2 * R)) / q,
    }
