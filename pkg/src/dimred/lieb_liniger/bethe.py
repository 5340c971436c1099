"""Bethe ansatz for the periodic Lieb-Liniger gas.

The interaction ``g sum delta(z_i - z_j)`` corresponds to the standard
``2c sum delta`` with ``c = g/2``.  Rapidities solve

    k_j L = 2 pi I_j - 2 sum_{l != j} arctan((k_j - k_l)/c),

which is the stationarity condition of the strictly convex Yang-Yang action

    S(k) = L/2 sum k_j^2 - 2 pi sum I_j k_j + sum_{j<l} Theta(k_j - k_l),
    Theta(x) = 2 x arctan(x/c) - c log(1 + x^2/c^2).

Newton steps are damped by backtracking on S, so the iteration converges
from any start.  g = 0 and g = inf are closed forms: the free-fermion
rapidities 2 pi I/L at infinite coupling, and the c -> 0+ limit (free-boson
momenta) at zero coupling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

__all__ = ["BetheState", "BetheError", "bethe_solve", "ground_quantum_numbers",
           "as_doubled", "boson_to_bethe"]

RESIDUAL_TOL = 1e-12


class BetheError(RuntimeError):
    pass


@dataclass(frozen=True)
class BetheState:
    n: int
    ell: float
    g: float
    quantum_numbers: tuple[int, ...]  # 2*I_j, sorted
    rapidities: np.ndarray
    energy: float
    momentum: float
    newton_residual: float
    iterations: int = 0

    @property
    def I(self) -> np.ndarray:
        return np.asarray(self.quantum_numbers, dtype=float) / 2.0


def as_doubled(n: int, quantum_numbers: Sequence[float]) -> tuple[int, ...]:
    """Validate Bethe quantum numbers and return them doubled and sorted.

    Odd n takes integers, even n half-odd integers.
    """
    if len(quantum_numbers) != n:
        raise ValueError(f"expected {n} quantum numbers, got {len(quantum_numbers)}")
    doubled = []
    for q in quantum_numbers:
        d = 2 * q
        if abs(d - round(d)) > 1e-9:
            raise ValueError(f"quantum number {q} is not a (half-)integer")
        doubled.append(int(round(d)))
    parity = (n + 1) % 2  # doubled values are odd for even n
    if any(d % 2 != parity for d in doubled):
        kind = "half-odd integers" if n % 2 == 0 else "integers"
        raise ValueError(f"n={n} requires {kind}")
    doubled.sort()
    if len(set(doubled)) != n:
        raise ValueError("quantum numbers must be distinct")
    return tuple(doubled)


def ground_quantum_numbers(n: int) -> tuple[float, ...]:
    return tuple(j - (n - 1) / 2 for j in range(n))


def boson_to_bethe(occupations: Sequence[int]) -> tuple[float, ...]:
    """Map nondecreasing free-boson momentum quanta to Bethe numbers I_j = q_j + j - (n-1)/2."""
    q = sorted(occupations)
    n = len(q)
    return tuple(q[j] + j - (n - 1) / 2 for j in range(n))


def _action(k, I2, L, c):
    d = k[:, None] - k[None, :]
    theta = 2 * d * np.arctan(d / c) - c * np.log1p((d / c) ** 2)
    return 0.5 * L * np.dot(k, k) - np.pi * np.dot(I2, k) + 0.5 * theta.sum()


def _gradient(k, I2, L, c):
    d = k[:, None] - k[None, :]
    return L * k - np.pi * I2 + 2 * np.arctan(d / c).sum(axis=1)


def _hessian(k, L, c):
    d = k[:, None] - k[None, :]
    kern = 2 * c / (c * c + d * d)
    np.fill_diagonal(kern, 0.0)
    H = -kern
    H[np.diag_indices_from(H)] = L + kern.sum(axis=1)
    return H


def bethe_solve(n: int, ell: float, g: float, quantum_numbers: Sequence[float],
                k0: Optional[np.ndarray] = None, max_iter: int = 200) -> BetheState:
    """Solve the Bethe equations for the given quantum numbers.

    ``k0`` is an optional warm start (e.g. the solution at a nearby g).
    """
    if g < 0:
        raise ValueError("attractive coupling is not supported")
    if not ell > 0:
        raise ValueError("ell must be positive")
    I2 = np.asarray(as_doubled(n, quantum_numbers), dtype=float)
    momentum = np.pi * I2.sum() / ell

    if math.isinf(g):
        k = np.pi * I2 / ell
        return BetheState(n, ell, g, tuple(int(x) for x in I2), k, float(k @ k), momentum, 0.0)
    if g == 0:
        # c -> 0+: arctan terms become -pi/2 sign differences
        j = np.arange(n)
        k = 2 * np.pi * (I2 / 2 - (j - (n - 1) / 2)) / ell
        return BetheState(n, ell, g, tuple(int(x) for x in I2), k, float(k @ k), momentum, 0.0)

    c = g / 2.0
    L = ell
    k = np.pi * I2 / (L + 2 * n / c) if k0 is None else np.array(k0, dtype=float)
    S = _action(k, I2, L, c)
    it = 0
    for it in range(1, max_iter + 1):
        F = _gradient(k, I2, L, c)
        res = np.abs(F).max()
        if res <= RESIDUAL_TOL * max(1.0, np.abs(np.pi * I2).max()):
            break
        step = np.linalg.solve(_hessian(k, L, c), -F)
        t = 1.0
        fnorm = np.linalg.norm(F)
        while True:
            trial = k + t * step
            S_trial = _action(trial, I2, L, c)
            # Armijo on S; near the root S stalls at roundoff, so a drop in |grad| also counts
            if (S_trial <= S + 1e-4 * t * (F @ step)
                    or np.linalg.norm(_gradient(trial, I2, L, c)) < (1 - 1e-4 * t) * fnorm
                    or t < 1e-12):
                break
            t *= 0.5
        k, S = trial, S_trial
    F = _gradient(k, I2, L, c)
    res = float(np.abs(F).max())
    if res > 1e-9 * max(1.0, np.abs(np.pi * I2).max()):
        raise BetheError(f"Newton did not converge: residual {res:.3e} after {it} iterations")
    k = np.sort(k)
    return BetheState(n, ell, g, tuple(int(x) for x in I2), k, float(k @ k), momentum, res, it)
