"""Effective coupling, energy envelopes and overlap bounds for the 3D -> 1D reduction.

Lengths are in the units of the geometry.  The transverse mode enters only
through its unscaled norms (``norm4_4``, ``sup_b``, ``sup_grad_b2``) and the
unscaled gap; the r-scaling is applied here.

Two kinds of error parameters are provided:
  * eta_lower / eta_upper: power laws in x = na/r with configurable constants
    D and C (only the existence of such constants is known);
  * upper_chain_explicit / lower_chain_explicit: the fully explicit factor
    chains of the variational upper bound and the operator lower bound,
    which need no unknown constants.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "GeometryParams",
    "BoundEnvelope",
    "LowerChainParams",
    "UpperChain",
    "LowerChain",
    "OverlapBound",
    "effective_g",
    "a_for_coupling",
    "eta_lower",
    "eta_upper",
    "theorem1_envelope",
    "upper_chain_explicit",
    "lower_chain_explicit",
    "search_lower_chain",
    "lemma2_overlap",
    "theorem2_bound",
]


@dataclass(frozen=True)
class GeometryParams:
    n: int
    r: float
    ell: float
    a: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not (self.r > 0 and self.ell > 0):
            raise ValueError("r and ell must be positive")
        if self.a < 0:
            raise ValueError("a must be non-negative")

    @property
    def x(self) -> float:
        """The dilution parameter na/r."""
        return self.n * self.a / self.r

    @property
    def a_over_r(self) -> float:
        return self.a / self.r

    @property
    def r_over_ell(self) -> float:
        return self.r / self.ell

    def scaled(self, length: float) -> "GeometryParams":
        """All lengths divided by ``length``."""
        return GeometryParams(self.n, self.r / length, self.ell / length, self.a / length)


def effective_g(geom: GeometryParams, mode) -> float:
    """g = 8 pi a ||b||_4^4 / r^2."""
    return 8 * math.pi * geom.a * mode.norm4_4 / geom.r**2


def a_for_coupling(g: float, r: float, mode) -> float:
    """Scattering length giving coupling g at transverse length r."""
    return g * r**2 / (8 * math.pi * mode.norm4_4)


def eta_lower(geom: GeometryParams, D: float = 1.0) -> float:
    x = geom.x
    return D * (x ** (1 / 8) + geom.n**2 * x ** (3 / 8))


def eta_upper(geom: GeometryParams, C: float = 1.0) -> float:
    return C * geom.x ** (2 / 3)


# ------------------------------------------------------------------ envelopes

@dataclass(frozen=True)
class BoundEnvelope:
    g: float
    eta_L: float
    eta_U: float
    E_1d: tuple[float, ...]
    lower_k: tuple[float, ...]
    upper_k: tuple[float, ...]
    valid_lower: tuple[bool, ...]
    valid_upper: bool
    constants_C_D: tuple[float, float]
    source: str = "power-law"
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in d.items()}

    def rows(self):
        for k, (E, lo, up, vl) in enumerate(zip(self.E_1d, self.lower_k, self.upper_k,
                                                self.valid_lower), start=1):
            yield k, E, lo, up, vl, self.valid_upper


def theorem1_envelope(E_1d: Sequence[float], geom: GeometryParams, mode, C: float = 1.0,
                      D: float = 1.0, eta_L: Optional[float] = None,
                      eta_U: Optional[float] = None, source: Optional[str] = None,
                      notes: Sequence[str] = ()) -> BoundEnvelope:
    """Per-level bracket of the excess energy E_3d^k - n e_perp / r^2.

    lower_k = E (1 - eta_L)(1 - r^2 E / gap) is claimed while E <= gap / r^2;
    upper_k = E / (1 - eta_U) while eta_U < 1 (otherwise +inf).  Explicit
    eta values (from the factor chains) override the power laws.
    """
    E = np.asarray(E_1d, dtype=float)
    eL = eta_lower(geom, D) if eta_L is None else float(eta_L)
    eU = eta_upper(geom, C) if eta_U is None else float(eta_U)
    gap = mode.gap / geom.r**2
    gamma = E / gap
    lower = E * (1 - eL) * (1 - gamma)
    valid_upper = eU < 1
    upper = E / (1 - eU) if valid_upper else np.full_like(E, np.inf)
    valid_lower = tuple(bool(e <= gap) for e in E)
    src = source or ("power-law" if eta_L is None and eta_U is None else "explicit")
    return BoundEnvelope(effective_g(geom, mode), eL, eU, tuple(map(float, E)),
                         tuple(map(float, lower)), tuple(map(float, upper)), valid_lower,
                         bool(valid_upper), (C, D), src, tuple(notes))


# --------------------------------------------------------------- upper chain

@dataclass(frozen=True)
class UpperChain:
    R: float
    K: float
    factor: float  # energy factor multiplying E_1d
    norm: float  # lower bound on the trial-state norm
    eta_U: float  # effective eta with factor / norm = 1 / (1 - eta_U)
    induced_C: float
    terms: dict
    vacuous: Optional[str] = None

    @property
    def excess_factor(self) -> float:
        return self.factor / self.norm if self.norm > 0 else math.inf


def upper_chain_explicit(geom: GeometryParams, mode, g: Optional[float] = None,
                         R: Optional[float] = None, R0: float = 1.0) -> UpperChain:
    """Jastrow-type variational bound: excess_k <= E_1d^k * factor / norm.

    Default R^3 = a r^2 / n^2.  ``R0`` is the interaction range in units of a.
    """
    n, r, a = geom.n, geom.r, geom.a
    g = effective_g(geom, mode) if g is None else g
    if a == 0:
        return UpperChain(math.inf if R is None else R, 0.0, 1.0, 1.0, 0.0, 0.0, {})
    R = (a * r**2 / n**2) ** (1 / 3) if R is None else float(R)
    if not R > a * R0:
        raise ValueError(f"cutoff R={R} must exceed the interaction range a*R0={a * R0}")
    q = a / R
    b4, binf = mode.norm4_4, mode.sup_b
    pairs = n * (n - 1) / 2
    overlap = pairs * math.pi * R**2 / r**2 * b4
    K = (2 * math.pi / 3) * (n - 2) * q * (1 + math.log(R / a)) / (1 - q) * (R / r) ** 2 * binf**2
    terms = {
        "overlap": overlap,
        "scattering": (q + K) / (1 - q),
        "kinetic": (1 + K) / (1 - q) * (math.sqrt(2 * R * g * (n - 1)) + (n - 1) * R * g),
        "K": K,
    }
    factor = 1 + overlap + terms["scattering"] + terms["kinetic"]
    norm = 1 - overlap
    vacuous = None if norm > 0 else "norm"
    eta = 1 - norm / factor if norm > 0 else math.inf
    x = geom.x
    return UpperChain(R, K, factor, norm, eta, eta / x ** (2 / 3) if x > 0 else 0.0, terms, vacuous)


# --------------------------------------------------------------- lower chain

@dataclass(frozen=True)
class LowerChainParams:
    R: float
    delta: float
    eps: float
    eta: float
    kappa: float
    gamma: Optional[float] = None

    def __post_init__(self):
        if not 0 <= self.eps <= 1:
            raise ValueError("eps must lie in [0, 1]")
        if not (self.eta > 0 and self.kappa > 0 and self.delta > 0 and self.R > 0):
            raise ValueError("R, delta, eta and kappa must be positive")
        if (1 - self.eps) * (1 + self.eta) > 1 + 1e-14:
            raise ValueError("need (1 - eps)(1 + eta) <= 1")
        if self.gamma is not None and not 0 <= self.gamma <= 1:
            raise ValueError("gamma must lie in [0, 1]")

    @classmethod
    def schedule(cls, geom: GeometryParams) -> "LowerChainParams":
        """R = n r x^(1/4), delta = eps = eta = x^(1/8), kappa = x^(5/12) / n, x = na/r.

        R is carried in units of r so that R/r = n x^(1/4) is dimensionless.
        """
        x = geom.x
        if x <= 0:
            raise ValueError("the schedule needs a > 0")
        s = x ** (1 / 8)
        return cls(R=geom.n * geom.r * x**0.25, delta=s, eps=s, eta=s,
                   kappa=x ** (5 / 12) / geom.n)


@dataclass(frozen=True)
class LowerChain:
    params: LowerChainParams
    g: float
    g_prime: float
    g_dprime: float
    kinetic_factor: float
    factors: dict  # name -> multiplicative factor (each should lie in (0, 1])
    U_height: float  # 3 / (R^3 - (a R0)^3)
    vacuous: Optional[str] = None

    @property
    def ratio(self) -> float:
        return self.g_dprime / self.g if self.g > 0 else 1.0

    @property
    def eta_L(self) -> float:
        """1 - min(kinetic_factor, g''/g); infinite when vacuous."""
        if self.vacuous:
            return math.inf
        return 1 - min(self.kinetic_factor, self.ratio)

    @property
    def deficits(self) -> dict:
        """1 - factor per chain link; the kappa link uses g >= g', so it never depends
        on the sign of g'."""
        out = {k: 1 - f for k, f in self.factors.items() if k != "kappa"}
        out["kappa"] = math.sqrt(2 * self.g * self.params.R / self.params.kappa)
        return out

    @property
    def eta_L_additive(self) -> float:
        """Sum of all deficits, an upper bound on eta_L whenever each deficit lies in [0, 1]."""
        return float(sum(self.deficits.values()))

    @property
    def kinetic_deficit(self) -> float:
        return 1 - self.kinetic_factor


def _b4_on_level_set(mode, delta: float) -> float:
    """int_{b^2 >= delta} b^4 d^2x from the mode samples."""
    rho, b = np.asarray(mode.rho), np.asarray(mode.b)
    h = rho[1] - rho[0]
    mask = b * b >= delta
    return float(2 * math.pi * np.sum((b**4 * rho * h)[mask]))


def lower_chain_explicit(geom: GeometryParams, mode, params: Optional[LowerChainParams] = None,
                         R0: float = 1.0, exact_level_set: bool = False) -> LowerChain:
    """Explicit operator lower bound: kinetic prefactor and reduced coupling g''.

    Every factor is reported by name; the first nonpositive one (or a broken
    inverse bracket) marks the chain vacuous.  With ``exact_level_set`` the
    estimate ||b||_4^4 - delta is replaced by the integral of b^4 over the
    level set {b^2 >= delta}.
    """
    n, r, a = geom.n, geom.r, geom.a
    g = effective_g(geom, mode)
    if a == 0:
        p = params or LowerChainParams(R=r, delta=1.0, eps=1.0, eta=1.0, kappa=1.0)
        return LowerChain(p, 0.0, 0.0, 0.0, 1.0, {}, math.inf)
    p = params or LowerChainParams.schedule(geom)
    R, delta, eps, eta, kappa = p.R, p.delta, p.eps, p.eta, p.kappa
    if not R > a * R0:
        raise ValueError(f"cutoff R={R} must exceed the interaction range a*R0={a * R0}")
    b4, binf, grad, gap = mode.norm4_4, mode.sup_b, mode.sup_grad_b2, mode.gap
    pairs = n * (n - 1) / 2
    core = 1 - (a * R0 / R) ** 3
    U_height = 3 / (R**3 - (a * R0) ** 3)

    kin_overlap = (1 - eps) * (1 + 1 / eta) * pairs * math.pi * R**2 / r**2 * b4
    kinetic = 1 - kin_overlap - (n - 1) * kappa

    level = (_b4_on_level_set(mode, delta) if exact_level_set else b4 - delta)
    factors = {
        "kinetic_overlap": 1 - kin_overlap,
        "kinetic_kappa": 1 - (n - 1) * kappa,
        "d_integral": (level - R * grad / r) / b4,
        "eps": 1 - eps,
        "gradient": 1 - 2 * R * grad / (r * delta),
        "three_body": 1 - (n - 2) * math.pi * R**2 / r**2 * binf**2,
    }
    inner = 1 - (n**2 / (eps * gap)) * (a / R) * 3 * math.pi * b4 / core if eps > 0 else -math.inf
    if inner > 0:
        factors["a_double_prime"] = 1 - (3 * n / (eps * gap)) * (a * r**2 / R**3) / core / inner
    else:
        factors["a_double_prime"] = -math.inf
    g_prime = g * np.prod([factors[k] for k in ("d_integral", "eps", "gradient", "three_body",
                                                "a_double_prime")])
    g_prime = float(g_prime)
    kappa_factor = 1 - math.sqrt(2 * g_prime * R / kappa) if g_prime > 0 else -math.inf
    factors["kappa"] = kappa_factor
    g_dprime = g_prime * kappa_factor if g_prime > 0 else -math.inf
    vacuous = None
    for name, f in factors.items():
        if not f > 0:
            vacuous = name
            break
    if inner <= 0 and vacuous is None:
        vacuous = "a_double_prime"
    return LowerChain(p, g, g_prime, float(g_dprime), float(kinetic), factors, U_height, vacuous)


def search_lower_chain(geom: GeometryParams, mode, scales: Sequence[float] = (0.25, 0.5, 1, 2, 4),
                       R0: float = 1.0) -> LowerChain:
    """Coarse grid over multiples of the default schedule, minimizing eta_L.

    Makes no optimality claim; returns the schedule itself when every trial
    is vacuous.
    """
    base = LowerChainParams.schedule(geom)
    best = lower_chain_explicit(geom, mode, base, R0)
    for sR in scales:
        for sd in scales:
            for sk in scales:
                eps = min(1.0, base.eps * sd)
                try:
                    p = LowerChainParams(R=base.R * sR, delta=base.delta * sd, eps=eps,
                                         eta=eps / (1 - eps) if eps < 1 else 1.0,
                                         kappa=base.kappa * sk)
                    trial = lower_chain_explicit(geom, mode, p, R0)
                except ValueError:
                    continue
                if trial.eta_L < best.eta_L:
                    best = trial
    return best


# ----------------------------------------------------------------- overlaps

@dataclass(frozen=True)
class OverlapBound:
    level_group: tuple[int, int]
    value: float
    valid: bool
    prefactor: float = 0.0
    gamma: float = 0.0
    reason: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


def lemma2_overlap(E: Sequence[float], eta: float, l: Optional[int] = None) -> float:
    """Lower bound on sum_{i,j<=k} |<f_i|psi_j>|^2 given <f_i|H|f_i> <= eta E_i.

    ``E`` holds E_1..E_{k+1}.  With ``l`` the block l+1..k is bounded
    instead, which needs E_{l+1} > E_l as well.
    """
    E = np.asarray(E, dtype=float)
    k = len(E) - 1
    if k < 1:
        raise ValueError("need at least E_1 and E_2")
    if np.any(np.diff(E) < 0):
        raise ValueError("energies must be ascending")
    if not E[k] > E[k - 1]:
        raise ValueError("E_{k+1} must exceed E_k")
    bound = k - (eta - 1) * E[:k].sum() / (E[k] - E[k - 1])
    if l is not None:
        if not 1 <= l < k:
            raise ValueError("need 1 <= l < k")
        if not E[l] > E[l - 1]:
            raise ValueError("E_{l+1} must exceed E_l")
        bound -= l + (eta - 1) * E[:l].sum() / (E[l] - E[l - 1])
    return float(bound)


def theorem2_bound(energies, group: int, geom: GeometryParams, mode, C: float = 1.0,
                   D: float = 1.0, eta_L: Optional[float] = None, eta_U: Optional[float] = None,
                   tol: float = 1e-8) -> OverlapBound:
    """Lower bound on the projected overlap of the degenerate group ``group`` (1-based).

    ``energies`` is an LLSpectrum or an ascending array that extends at least
    one level past the group.
    """
    from .lieb_liniger.spectrum import degeneracy_index

    E = np.asarray(getattr(energies, "energies", energies), dtype=float)
    ks = degeneracy_index(E, tol).k_list
    if not 1 <= group < len(ks) - 1:
        raise ValueError(f"group {group} is not followed by a resolved level")
    ki, kn = ks[group - 1], ks[group]
    eL = eta_lower(geom, D) if eta_L is None else eta_L
    eU = eta_upper(geom, C) if eta_U is None else eta_U
    gap = mode.gap / geom.r**2
    gamma = E[ki - 1] / gap
    reasons = []
    if not eU < 1:
        reasons.append("eta_U >= 1")
    if not eL < 1:
        reasons.append("eta_L >= 1")
    if not gamma < 1:
        reasons.append("level above the transverse gap")
    if reasons:
        return OverlapBound((ki, kn), -math.inf, False, math.inf, gamma, "; ".join(reasons))
    pref = 1 / ((1 - gamma) * (1 - eU) * (1 - eL)) - 1
    bracket = E[: kn - 1].sum() / (E[kn - 1] - E[ki - 1])
    if ki > 1:
        bracket += E[: ki - 1].sum() / (E[ki - 1] - E[ki - 2])
    value = 1 - pref * bracket
    return OverlapBound((ki, kn), float(value), True, float(pref), float(gamma),
                        None if value > 0 else "nonpositive (vacuous) bound")


# ------------------------------------------------------------ combined chains

UPPER_R_MARGIN = 1.1  # smallest admissible upper cutoff, in units of the interaction range


def explicit_chains(geom: GeometryParams, mode, R0: float = 1.0, schedule: Optional[dict] = None):
    """Upper and lower chains with optional overrides (R_upper, R_lower, delta, eps, eta, kappa).

    The default upper cutoff R^3 = a r^2 / n^2 is raised to UPPER_R_MARGIN * a R0
    when it falls inside the interaction range.  Returns (upper, lower, notes);
    ``lower`` is None when its cutoff lies inside the range.
    """
    sched = schedule or {}
    notes = []
    R_up = sched.get("R_upper")
    if R_up is None and geom.a > 0:
        R_def = (geom.a * geom.r**2 / geom.n**2) ** (1 / 3)
        R_up = max(R_def, UPPER_R_MARGIN * geom.a * R0)
        if R_up != R_def:
            notes.append(f"upper cutoff raised from {R_def:.4g} to {R_up:.4g} (interaction range)")
    upper = upper_chain_explicit(geom, mode, R=R_up, R0=R0)
    params = None
    if geom.a > 0:
        base = LowerChainParams.schedule(geom)
        params = LowerChainParams(R=sched.get("R_lower", base.R), delta=sched.get("delta", base.delta),
                                  eps=sched.get("eps", base.eps), eta=sched.get("eta", base.eta),
                                  kappa=sched.get("kappa", base.kappa))
    try:
        lower = lower_chain_explicit(geom, mode, params, R0=R0)
    except ValueError as exc:
        lower = None
        notes.append(f"lower chain inapplicable: {exc}")
    return upper, lower, notes
