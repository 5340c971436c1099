"""Lieb-Liniger spectra: periodic (Bethe ansatz) and trapped (exact diagonalization).

Energies are those of H = -sum d^2/dz_i^2 + sum V(z_i) + g sum_{i<j} delta(z_i - z_j).
"""
from __future__ import annotations

import csv
import math
from itertools import combinations
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .bethe import bethe_solve, boson_to_bethe, ground_quantum_numbers
from .ed import _multisets, oscillator_ed, oscillator_quadrature, trap_correction

__all__ = [
    "Trap",
    "LLSpectrum",
    "DegeneracyIndex",
    "Branches",
    "ll_spectrum_periodic",
    "ll_spectrum_trapped",
    "excitation_branches",
    "tg_levels",
    "degeneracy_index",
    "richardson",
]


class Trap(str, Enum):
    PERIODIC = "periodic"
    HARMONIC = "harmonic"
    TABULATED = "tabulated"


@dataclass(frozen=True)
class LLSpectrum:
    n: int
    ell: float
    g: float
    trap: Trap
    energies: np.ndarray
    states: tuple = ()
    basis_size: Optional[int] = None
    defects: Optional[np.ndarray] = None
    contact: Optional[np.ndarray] = None  # <sum_{i<j} delta(z_i - z_j)> per level
    flags: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"n": self.n, "ell": self.ell, "g": _json_float(self.g), "trap": self.trap.value,
               "energies": [float(e) for e in self.energies], "basis_size": self.basis_size,
               "flags": self.flags}
        if self.defects is not None:
            out["defects"] = [float(d) for d in self.defects]
        return out

    def write_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "E_1d"])
            for k, e in enumerate(self.energies, start=1):
                w.writerow([k, repr(float(e))])


def _json_float(x):
    return "inf" if math.isinf(x) else float(x)


# --------------------------------------------------------------------- periodic

def _boson_configs(n: int, budget: float) -> list:
    """Free-boson momentum multisets (integers q, sorted) with sum q^2 <= budget.

    Returned as sorted tuples; negative entries come from the symmetric range.
    """
    qmax = int(math.isqrt(int(budget))) if budget >= 0 else -1
    out = []

    def rec(prefix, start, left, remaining):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        lo = max(start, -math.isqrt(int(left)))
        for q in range(lo, qmax + 1):
            c = q * q
            if c > left:
                break
            prefix.append(q)
            rec(prefix, q, left - c, remaining - 1)
            prefix.pop()

    rec([], -qmax, budget, n)
    return out


def _fermion_sq(config) -> float:
    """sum I_j^2 for the Bethe numbers attached to a boson multiset."""
    I = np.asarray(boson_to_bethe(config))
    return float(I @ I)


def _enumerate_window(n: int, k_max: int):
    """Boson multisets guaranteed to contain the k_max lowest states at every g.

    Each level interpolates monotonically between its boson (g=0) and
    fermion (g=inf) energy.  With E_cut the k_max-th lowest fermion energy,
    at least k_max states lie below E_cut for every g, while a state whose
    boson energy exceeds E_cut never does.  Units: (2 pi/ell)^2.
    """
    budget = max(1.0, _fermion_sq(tuple([0] * n)))
    while True:
        configs = _boson_configs(n, budget)
        ferm = sorted(_fermion_sq(c) for c in configs)
        if len(ferm) >= k_max and ferm[k_max - 1] <= budget:
            cut = ferm[k_max - 1]
            window = [c for c in configs if sum(q * q for q in c) <= cut + 1e-9]
            return window, cut
        budget *= 2.0


def ll_spectrum_periodic(n: int, ell: float, g: float, k_max: int) -> LLSpectrum:
    """Lowest k_max levels (with multiplicity) on the circle of length ell."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    window, cut = _enumerate_window(n, k_max)
    states = [bethe_solve(n, ell, g, boson_to_bethe(c)) for c in window]
    states.sort(key=lambda s: (s.energy, s.momentum))
    states = states[:k_max]
    energies = np.array([s.energy for s in states])
    flags = {"window_states": len(window), "cut_energy": cut * (2 * np.pi / ell) ** 2,
             "max_residual": max(s.newton_residual for s in states)}
    return LLSpectrum(n, ell, g, Trap.PERIODIC, energies, tuple(states), flags=flags)


@dataclass(frozen=True)
class Branches:
    n: int
    ell: float
    g: float
    p: np.ndarray
    eps_I: np.ndarray
    eps_II: np.ndarray
    ground: float

    def write_csv(self, path) -> None:
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["p", "eps_I", "eps_II"])
            for row in zip(self.p, self.eps_I, self.eps_II):
                w.writerow([repr(float(x)) for x in row])


def excitation_branches(n: int, ell: float, g: float, q_values: Optional[Sequence[int]] = None) -> Branches:
    """Particle (type I) and hole (type II) dispersions at momenta 2 pi q/ell.

    Type I moves the top quantum number out by q.  Type II raises the top q
    numbers by one, leaving a hole q places below the Fermi edge.
    """
    if not g > 0:
        raise ValueError("branches need g > 0")
    I0 = np.array(ground_quantum_numbers(n))
    ground = bethe_solve(n, ell, g, I0)
    qs = list(range(0, n + 1)) if q_values is None else list(q_values)
    eI, eII = [], []
    warm_I = warm_II = ground.rapidities
    for q in qs:
        I1 = I0.copy()
        I1[-1] += q
        sI = bethe_solve(n, ell, g, I1, k0=warm_I if q else None)
        I2 = I0.copy()
        if q:
            I2[n - q:] += 1
        sII = bethe_solve(n, ell, g, I2, k0=warm_II if q else None)
        warm_I, warm_II = sI.rapidities, sII.rapidities
        eI.append(sI.energy - ground.energy)
        eII.append(sII.energy - ground.energy)
    p = 2 * np.pi * np.array(qs, dtype=float) / ell
    return Branches(n, ell, g, p, np.array(eI), np.array(eII), ground.energy)


# -------------------------------------------------------------------- fermions

def _oscillator_fermions(n: int, k_max: int) -> np.ndarray:
    """Lowest k_max values of sum (2 j_i + 1) over distinct j_1 < ... < j_n."""
    # distinct ordered j correspond to boson multisets via j_i = m_i + i
    quanta_min = n * (n - 1) // 2
    budget = k_max + quanta_min + n
    while True:
        bos = _multisets(n, 0, budget, budget, lambda v: v)
        sums = sorted(sum(m) for m in bos)
        if len(sums) >= k_max and sums[k_max - 1] < budget:
            return np.array([2 * (s + quanta_min) + n for s in sums[:k_max]], dtype=float)
        budget *= 2


def tg_levels(n: int, ell: float, k_max: int, trap: Trap | str = Trap.PERIODIC,
              single_particle: Optional[np.ndarray] = None) -> np.ndarray:
    """Free-fermion levels E_f^k: sums of n distinct single-particle energies.

    Periodic momenta are 2 pi I/ell with the Bethe parity (half-odd for even
    n); the harmonic trap uses (2j+1)/ell^2.  ``single_particle`` supplies
    ascending one-body levels for any other trap.
    """
    trap = Trap(trap)
    if single_particle is not None:
        eps = np.sort(np.asarray(single_particle, dtype=float))
        if len(eps) < n:
            raise ValueError("not enough single-particle levels")
        # the k-th lowest n-subset only uses the lowest n + k - 1 levels
        sums = sorted(sum(c) for c in combinations(eps[: n + k_max - 1], n))
        return np.array(sums[:k_max])
    if trap is Trap.PERIODIC:
        _, cut = _enumerate_window(n, k_max)
        configs = _boson_configs(n, cut)
        ferm = sorted(_fermion_sq(c) for c in configs)[:k_max]
        return np.array(ferm) * (2 * np.pi / ell) ** 2
    return _oscillator_fermions(n, k_max) / ell**2


# --------------------------------------------------------------------- trapped

def richardson(h: Sequence[float], values: np.ndarray, powers: Sequence[float]) -> np.ndarray:
    """Extrapolate values(h) = v0 + sum_p c_p h^p to h = 0 (rows of values per h)."""
    h = np.asarray(h, dtype=float)
    A = np.column_stack([np.ones_like(h)] + [h**p for p in powers])
    values = np.asarray(values, dtype=float)
    coef = np.linalg.lstsq(A, values, rcond=None)[0]
    return coef[0]


def _trap_single_particle(ell, v_par, n_max):
    t = trap_correction(n_max, ell, v_par)
    h1 = np.diag((2 * np.arange(n_max + 1) + 1) / ell**2) + t
    return np.linalg.eigvalsh(h1)


def ll_spectrum_trapped(n: int, ell: float, g: float, v_par: Optional[Callable] = None,
                        basis_size: int = 200, k_max: int = 6, ladder: int = 4,
                        extrapolate: bool = True, tol: float = 1e-4, seed: int = 0) -> LLSpectrum:
    """Levels of n bosons in the trap -d^2 + V(z) (default V = z^2/ell^4).

    ``basis_size`` is the largest total number of oscillator quanta.  Contact
    interactions converge like basis_size^{-1/2}; the extrapolated value uses
    the ladder basis_size / 2^j (j < ladder) with powers 1/2, 1, 3/2, ...,
    separately in each parity sector.  ``defects`` compares extrapolations
    with and without the coarsest rung.
    """
    if n > 4:
        raise ValueError("trapped ED is limited to n <= 4")
    if g < 0:
        raise ValueError("attractive coupling is not supported")
    trap = Trap.HARMONIC if v_par is None else Trap.TABULATED
    if math.isinf(g):
        if v_par is None:
            E = tg_levels(n, ell, k_max, Trap.HARMONIC)
        else:
            E = tg_levels(n, ell, k_max, single_particle=_trap_single_particle(ell, v_par, basis_size))
        return LLSpectrum(n, ell, g, trap, E, basis_size=basis_size, flags={"fermionized": True})

    # even cutoffs: a parity sector at odd N coincides with N - 1, which spoils the fit
    rungs = ladder if extrapolate and g > 0 else 1
    sizes = [2 * (basis_size // 2 ** (j + 1)) for j in reversed(range(rungs))]
    if min(sizes) < 2:
        raise ValueError("basis_size too small for the extrapolation ladder")
    sectors = (0, 1) if v_par is None else (None,)
    runs = []
    for N in sizes:
        u = oscillator_quadrature(N, ell)
        # the harmonic trap conserves total parity; tabulated traps use the full basis
        runs.append([oscillator_ed(n, ell, g, N, k_max, parity=p, seed=seed, quadrature=u, v_par=v_par)
                     for p in sectors])
    final_parts = runs[-1]
    if len(runs) == 1:
        E = np.concatenate([r.energies for r in final_parts])
        order = np.argsort(E, kind="stable")[:k_max]
        contact = np.concatenate([r.contact for r in final_parts])[order]
        return LLSpectrum(n, ell, g, trap, E[order], _vectors(final_parts, order),
                          sizes[-1], np.zeros(len(order)), contact,
                          flags={"extrapolated": False, "residual": max(r.residual for r in final_parts)})
    powers = [1, 2, 3, 4][: len(runs) - 1]
    ext, alt = [], []
    for i, p in enumerate(sectors):
        # a parity sector holds totals up to its effective cutoff: N, or N - 1 for odd states
        hs = [(N - (1 if p == 1 else 0)) ** -0.5 for N in sizes]
        vals = np.array([run[i].energies for run in runs])
        ext.append(richardson(hs, vals, powers))
        alt.append(richardson(hs[1:], vals[1:], powers[:-1]) if len(runs) > 2 else vals[-1])
    E_all = np.concatenate(ext)
    order = np.argsort(E_all, kind="stable")[:k_max]
    E_ext = E_all[order]
    defects = np.abs(E_ext - np.concatenate(alt)[order])
    contact = np.concatenate([r.contact for r in final_parts])[order]
    converged = bool(np.all(defects <= tol * np.maximum(1.0, np.abs(E_ext))))
    flags = {"extrapolated": True, "ladder": sizes, "converged": converged,
             "residual": max(r.residual for r in final_parts)}
    return LLSpectrum(n, ell, g, trap, E_ext, _vectors(final_parts, order), sizes[-1],
                      defects, contact, flags)


def _vectors(parts, order):
    flat = []
    for r in parts:
        for i in range(len(r.energies)):
            flat.append((r.basis, r.vectors[:, i]))
    return tuple(flat[i] for i in order)


# ------------------------------------------------------------------ degeneracy

@dataclass(frozen=True)
class DegeneracyIndex:
    k_list: tuple[int, ...]
    tol: float

    def groups(self, count: int) -> list[tuple[int, int]]:
        """Half-open (k_i, k_{i+1}) pairs, 1-based, for groups fully inside count levels."""
        ks = list(self.k_list)
        return [(a, b) for a, b in zip(ks, ks[1:]) if b - 1 <= count]

    def group_of(self, k: int) -> tuple[int, int]:
        ks = list(self.k_list)
        for a, b in zip(ks, ks[1:]):
            if a <= k < b:
                return a, b
        raise ValueError(f"level {k} is not inside a closed group")


def degeneracy_index(spec: LLSpectrum | Sequence[float], tol: float = 1e-8) -> DegeneracyIndex:
    """k_1 = 1, k_i = min{k : E^k > E^{k_{i-1}}}; equality within tol*max(1, |E|).

    The list ends with len(E)+1 so that every complete group is closed; the
    last group may be truncated by the spectrum length.
    """
    E = np.asarray(spec.energies if isinstance(spec, LLSpectrum) else spec, dtype=float)
    if np.any(np.diff(E) < -tol * np.maximum(1.0, np.abs(E[1:]))):
        raise ValueError("energies must be ascending")
    ks = [1]
    for k in range(2, len(E) + 1):
        ref = E[ks[-1] - 1]
        if E[k - 1] - ref > tol * max(1.0, abs(ref)):
            ks.append(k)
    ks.append(len(E) + 1)
    return DegeneracyIndex(tuple(ks), tol)
