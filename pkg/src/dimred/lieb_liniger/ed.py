"""Exact diagonalization of few bosons with a contact interaction.

Basis states are occupation multisets, stored as sorted tuples of mode
indices.  The pair operator ``(g/2) sum a+_a a+_b W_abcd a_c a_d`` is
written through spectator decompositions: removing a pair q from a state S
leaves a spectator R, and

    <S'|V|S> = (g/2) sum_R sum_{p,q} amp(S', p) amp(S, q) W_pq,

with amp(S, q) = m_q * sqrt(occupation factors) and m_q = 2 for a < b,
1 for a = b.  When W factors as sum_i u_p(i) u_q(i) (a quadrature rule, or
a single constant node for plane waves) V = (g/2) Phi Phi^T with a sparse
Phi, and the Hamiltonian is applied matrix-free.
"""
from __future__ import annotations

import math
import warnings
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.sparse import linalg as sla
from scipy.special import roots_hermite

__all__ = [
    "EDResult",
    "FockBasis",
    "oscillator_basis",
    "plane_wave_basis",
    "hermite_functions",
    "oscillator_quadrature",
    "build_pair_factor",
    "diagonalize",
    "build_one_body",
    "trap_correction",
    "plane_wave_ed",
    "oscillator_ed",
]

DENSE_LIMIT = 800


@dataclass(frozen=True)
class FockBasis:
    states: tuple[tuple[int, ...], ...]

    def __len__(self):
        return len(self.states)

    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}


def _multisets(n, lo, hi, budget, cost):
    """Nondecreasing tuples of length n from [lo, hi] with sum(cost) <= budget."""
    out = []

    def rec(prefix, start, left, remaining):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for v in range(start, hi + 1):
            c = cost(v)
            if c * remaining > left:  # cost is nondecreasing in v
                break
            prefix.append(v)
            rec(prefix, v, left - c, remaining - 1)
            prefix.pop()

    rec([], lo, budget, n)
    return out


def oscillator_basis(n: int, n_max: int, parity: Optional[int] = None) -> FockBasis:
    """Bosonic states with total oscillator quanta <= n_max (optionally of fixed parity)."""
    states = _multisets(n, 0, n_max, n_max, lambda v: v)
    if parity is not None:
        states = [s for s in states if sum(s) % 2 == parity]
    states.sort(key=lambda s: (sum(s), s))
    return FockBasis(tuple(states))


def plane_wave_basis(n: int, cutoff: int, total: int = 0) -> FockBasis:
    """Sorted momentum-quantum tuples with |q| <= cutoff and sum q = total."""
    out = []

    def rec(prefix, start, remaining, acc):
        if remaining == 0:
            if acc == total:
                out.append(tuple(prefix))
            return
        for v in range(start, cutoff + 1):
            # the remaining entries lie in [v, cutoff]
            if acc + v * remaining > total:
                break
            if acc + v + (remaining - 1) * cutoff < total:
                continue
            prefix.append(v)
            rec(prefix, v, remaining - 1, acc + v)
            prefix.pop()

    rec([], -cutoff, n, 0)
    out.sort(key=lambda s: (sum(q * q for q in s), s))
    return FockBasis(tuple(out))


def _pair_entries(state):
    """(spectator, pair, amplitude) for every distinct removable pair of a state."""
    occ = defaultdict(int)
    for m in state:
        occ[m] += 1
    modes = sorted(occ)
    entries = []
    for i, a in enumerate(modes):
        for b in modes[i:]:
            if a == b:
                if occ[a] < 2:
                    continue
                amp = math.sqrt(occ[a] * (occ[a] - 1))
            else:
                amp = 2.0 * math.sqrt(occ[a] * occ[b])
            rest = list(state)
            rest.remove(a)
            rest.remove(b)
            entries.append((tuple(rest), (a, b), amp))
    return entries


def build_pair_factor(basis: FockBasis, mode_nodes: np.ndarray, offset: int = 0) -> sparse.csr_matrix:
    """Sparse Phi with V = (1/2) Phi Phi^T for unit coupling.

    ``mode_nodes[j + offset]`` holds the node values u_j of mode j, and the
    pair interaction is W_abcd = sum_i u_a u_b u_c u_d over nodes i.
    """
    groups = {}
    idx, ma, mb, amps, blocks = [], [], [], [], []
    for i, s in enumerate(basis.states):
        for rest, (a, b), amp in _pair_entries(s):
            blk = groups.setdefault(rest, len(groups))
            idx.append(i)
            ma.append(a + offset)
            mb.append(b + offset)
            amps.append(amp)
            blocks.append(blk)
    U = np.asarray(mode_nodes, dtype=float)
    nodes = U.shape[1]
    if not idx:
        return sparse.csr_matrix((len(basis), 1))
    idx = np.asarray(idx)
    vals = np.asarray(amps)[:, None] * U[np.asarray(ma)] * U[np.asarray(mb)]
    cols = np.asarray(blocks)[:, None] * nodes + np.arange(nodes)[None, :]
    rows = np.broadcast_to(idx[:, None], vals.shape)
    shape = (len(basis), max(1, len(groups) * nodes))
    return sparse.csr_matrix((vals.ravel(), (rows.ravel(), cols.ravel())), shape=shape)


@dataclass(frozen=True)
class EDResult:
    energies: np.ndarray
    vectors: np.ndarray
    basis: FockBasis
    residual: float
    contact: np.ndarray  # <sum_{i<j} delta(z_i - z_j)> = |Phi^T v|^2 / 2


def diagonalize(kinetic: np.ndarray, phi: sparse.spmatrix, g: float, k: int,
                seed: int = 0, basis: Optional[FockBasis] = None,
                one_body: Optional[sparse.spmatrix] = None) -> EDResult:
    """Lowest k eigenpairs of diag(kinetic) + one_body + (g/2) Phi Phi^T.

    Large bases use LOBPCG preconditioned by the kinetic diagonal, falling
    back to Lanczos if the block iteration stalls.
    """
    dim = len(kinetic)
    k = min(k, dim)
    phiT = phi.T.tocsr()

    def apply(X):
        out = kinetic.reshape((-1,) + (1,) * (X.ndim - 1)) * X
        if g:
            out = out + 0.5 * g * (phi @ (phiT @ X))
        if one_body is not None:
            out = out + one_body @ X
        return out

    if dim <= DENSE_LIMIT:
        H = np.diag(kinetic) + 0.5 * g * (phi @ phiT).toarray()
        if one_body is not None:
            H = H + one_body.toarray()
        w, v = np.linalg.eigh(H)
        w, v = w[:k], v[:, :k]
    else:
        op = sla.LinearOperator((dim, dim), matvec=lambda x: apply(np.ravel(x)),
                                matmat=apply, dtype=float)
        diag = kinetic + (one_body.diagonal() if one_body is not None else 0.0)
        shift = 1.0 - diag.min()
        prec = sla.LinearOperator((dim, dim), matvec=lambda x: np.ravel(x) / (diag + shift),
                                  matmat=lambda X: X / (diag[:, None] + shift), dtype=float)
        rng = np.random.default_rng(seed)
        block = min(dim // 4, k + 4)
        X = rng.standard_normal((dim, block))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            w, v = sla.lobpcg(op, X, M=prec, largest=False, tol=1e-11, maxiter=2000)
        order = np.argsort(w)
        w, v = w[order][:k], v[:, order][:, :k]
        res = np.linalg.norm(apply(v) - v * w, axis=0)
        if np.any(res > 1e-8 * np.maximum(1.0, np.abs(w))):
            w, v = sla.eigsh(op, k=k, which="SA", v0=rng.standard_normal(dim), tol=1e-13,
                             ncv=max(2 * k + 20, 40), maxiter=20000)
            order = np.argsort(w)
            w, v = w[order], v[:, order]
    res = float(np.max(np.linalg.norm(apply(v) - v * w, axis=0)))
    contact = 0.5 * np.sum((phiT @ v) ** 2, axis=0)
    return EDResult(w, v, basis, res, contact)


def build_one_body(basis: FockBasis, t: np.ndarray) -> sparse.csr_matrix:
    """Second-quantized sum_ab t_ab a+_a a_b restricted to the basis (t symmetric)."""
    index = basis.index()
    rows, cols, vals = [], [], []
    for i, s in enumerate(basis.states):
        occ = defaultdict(int)
        for m in s:
            occ[m] += 1
        for b, nb in occ.items():
            rest = list(s)
            rest.remove(b)
            for a in range(t.shape[0]):
                if t[a, b] == 0.0:
                    continue
                new = tuple(sorted(rest + [a]))
                j = index.get(new)
                if j is None:
                    continue
                na = occ.get(a, 0) + (0 if a == b else 1)
                rows.append(j)
                cols.append(i)
                vals.append(t[a, b] * math.sqrt(nb * (na if a != b else nb)))
    dim = len(basis)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(dim, dim))


def _hermite_scaled(jmax, y):
    """Yield (p_j, L_j) with h_j(y) = p_j exp(L_j) for j = 0..jmax.

    The recurrence runs on rescaled polynomials, so tails far beyond the
    turning point neither overflow nor underflow.
    """
    y = np.asarray(y, dtype=float)
    log_scale = -0.5 * y * y
    prev = np.zeros_like(y)
    cur = np.full_like(y, np.pi**-0.25)
    yield cur, log_scale.copy()
    for j in range(jmax):
        nxt = math.sqrt(2.0 / (j + 1)) * y * cur - math.sqrt(j / (j + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e100
        if big.any():
            prev[big] *= 1e-100
            cur[big] *= 1e-100
            log_scale[big] += 100 * math.log(10.0)
        yield cur, log_scale.copy()


def hermite_functions(jmax: int, y: np.ndarray) -> np.ndarray:
    """Normalized Hermite functions h_0..h_jmax at y, shape (jmax+1, len(y))."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    return np.array([p * np.exp(L) for p, L in _hermite_scaled(jmax, y)])


def oscillator_quadrature(jmax: int, ell: float = 1.0):
    """Node values u_j(i) with int phi_a phi_b phi_c phi_d dz = sum_i u_a u_b u_c u_d.

    phi_j are the eigenfunctions of -d^2/dz^2 + z^2/ell^4.  The rule is exact
    for all four-fold products with indices <= jmax.
    """
    npts = 2 * jmax + 2
    x, _ = roots_hermite(npts)
    # Gauss-Hermite weight times e^{x^2} is 1 / sum_k h_k(x)^2 (Christoffel)
    log_sum = np.full_like(x, -np.inf)
    with np.errstate(divide="ignore"):
        for p, L in _hermite_scaled(npts - 1, x):
            log_sum = np.logaddexp(log_sum, 2 * (np.log(np.abs(p)) + L))
    log_w = 0.25 * (-log_sum - math.log(math.sqrt(2.0) * ell))
    y = x / math.sqrt(2.0)
    return np.array([p * np.exp(L + log_w) for p, L in _hermite_scaled(jmax, y)])

def plane_wave_ed(n: int, ell: float, g: float, cutoff: int, k: int = 1,
                  total: int = 0, seed: int = 0) -> EDResult:
    """Periodic box in the momentum basis e^{2 pi i q z/ell}/sqrt(ell), |q| <= cutoff."""
    basis = plane_wave_basis(n, cutoff, total)
    kin = np.array([sum((2 * np.pi * q / ell) ** 2 for q in s) for s in basis.states])
    # all pairs in one spectator block share the pair momentum, so W = 1/ell
    nodes = np.full((2 * cutoff + 1, 1), ell**-0.25)
    phi = build_pair_factor(basis, nodes, offset=cutoff)
    return diagonalize(kin, phi, g, k, seed, basis)


def trap_correction(n_max: int, ell: float, v_par, nodes: int = 400) -> np.ndarray:
    """Matrix of V(z) - z^2/ell^4 between the first n_max+1 oscillator functions."""
    x, w = roots_hermite(nodes)
    # z = ell * x: phi_a phi_b dz = h_a(x) h_b(x) dx, and h_a h_b = poly * e^{-x^2}
    p = np.array([q * np.exp(L + 0.5 * x * x) for q, L in _hermite_scaled(n_max, x)])
    z = ell * x
    dv = np.asarray(v_par(z), dtype=float) - z * z / ell**4
    return (p * (w * dv)[None, :]) @ p.T


def oscillator_ed(n: int, ell: float, g: float, n_max: int, k: int = 1,
                  parity: Optional[int] = None, seed: int = 0,
                  quadrature: Optional[np.ndarray] = None, v_par=None) -> EDResult:
    """Trap -d^2 + V(z) per particle in the oscillator product basis.

    ``v_par=None`` is the harmonic trap z^2/ell^4, diagonal in this basis; a
    callable adds the one-body correction V - z^2/ell^4 (which breaks the
    parity blocking unless V is even).
    """
    basis = oscillator_basis(n, n_max, parity)
    kin = np.array([sum(2 * j + 1 for j in s) / ell**2 for s in basis.states])
    u = oscillator_quadrature(n_max, ell) if quadrature is None else quadrature
    phi = build_pair_factor(basis, u)
    one_body = None
    if v_par is not None:
        one_body = build_one_body(basis, trap_correction(n_max, ell, v_par))
    return diagonalize(kin, phi, g, k, seed, basis, one_body)
