"""Heisenberg -> Fermi-Hubbard reduction and second-order perturbation theory.

Qubit i of the spin model is spatial orbital i at half filling: |0> means the
single electron on site i has spin +1 and |1> means spin -1.  Qubit 1 is the
most significant factor of the Kronecker product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import HypothesisViolation, ValidationError
from .fockspace import SecondQuantizedHamiltonian, mode, sector_basis, sector_matrix
from .instances import HeisenbergInstance, HubbardInstance, WeightedGraph

I2 = np.eye(2)
X = np.array([[0.0, 1.0], [1.0, 0.0]])
Y = np.array([[0.0, -1j], [1j, 0.0]])
Z = np.diag([1.0, -1.0])
SWAP = 0.5 * (np.kron(I2, I2) + np.kron(X, X) + np.kron(Y, Y).real + np.kron(Z, Z))


@dataclass(frozen=True)
class ReductionCertificate:
    hubbard: HubbardInstance
    c_eff: float
    h_eff: dict  # (i, j) -> 2 t^2 / u0
    hypothesis_holds: bool | None = None
    sign: int = 1

    @property
    def u0(self) -> float:
        return self.hubbard.u0


def reduce_heisenberg_to_hubbard(inst: HeisenbergInstance, u0: float, sign: int = 1) -> ReductionCertificate:
    """Hoppings t = sign * sqrt(u0 kappa / 2), half filling.

    The low-energy Hubbard spectrum is c_eff + sum h_eff W with h_eff = 2t^2/u0
    and c_eff = -sum h_eff; both spin-singlet and triplet levels are then
    matched exactly at second order.
    """
    if not u0 > 0:
        raise ValidationError(f"onsite repulsion must be positive, got {u0}")
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    g = inst.graph
    ts = [sign * math.sqrt(u0 * k / 2.0) for _, _, k in g.edges]
    hub = HubbardInstance(g.with_weights(ts), float(u0), g.n, inst.p, inst.q)
    h_eff = {(i, j): 2.0 * t * t / u0 for (i, j, _), t in zip(g.edges, ts)}
    c_eff = -sum(h_eff.values())
    holds = None
    if inst.p is not None and inst.q is not None:
        holds = bool(u0 >= g.n ** (14 + 3 * inst.p + 2 * inst.q))
    return ReductionCertificate(hub, c_eff, h_eff, holds, sign)


def _embed_pair(op4: np.ndarray, n: int, i: int, j: int) -> np.ndarray:
    """Two-qubit operator acting on qubits i < j (1-indexed) of n."""
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=op4.dtype)
    bi, bj = n - i, n - j
    for col in range(dim):
        a, b = (col >> bi) & 1, (col >> bj) & 1
        base = col & ~((1 << bi) | (1 << bj))
        for a2 in (0, 1):
            for b2 in (0, 1):
                amp = op4[2 * a2 + b2, 2 * a + b]
                if amp != 0:
                    out[base | (a2 << bi) | (b2 << bj), col] += amp
    return out


def swap_operator(n: int, i: int, j: int) -> np.ndarray:
    return _embed_pair(SWAP, n, i, j)


def heisenberg_qubit_hamiltonian(inst: HeisenbergInstance) -> np.ndarray:
    """Dense sum kappa_ij (XX + YY + ZZ) on n qubits, i.e. kappa (2W - 1)."""
    n = inst.n
    pauli = np.kron(X, X) + np.kron(Y, Y).real + np.kron(Z, Z)
    H = np.zeros((1 << n, 1 << n))
    for i, j, k in inst.graph.edges:
        if k:
            H += k * _embed_pair(pauli, n, i, j)
    return H


def effective_qubit_operator(cert: ReductionCertificate) -> np.ndarray:
    """c_eff + sum h_eff W_ij as a dense qubit matrix."""
    n = cert.hubbard.n
    H = cert.c_eff * np.eye(1 << n)
    for (i, j), h in cert.h_eff.items():
        H += h * swap_operator(n, i, j)
    return H


def single_occupancy_states(n: int) -> np.ndarray:
    """Fock-state integer for every qubit basis index (one electron per site)."""
    out = np.zeros(1 << n, dtype=np.int64)
    for x in range(1 << n):
        s = 0
        for i in range(1, n + 1):
            down = (x >> (n - i)) & 1
            s |= 1 << mode(i, -1 if down else +1)
        out[x] = s
    return out


@dataclass(frozen=True, eq=False)
class EffectiveHamiltonian:
    matrix: np.ndarray  # on the ground space, in the basis ``basis``
    basis: np.ndarray  # columns span the ground space of h_pen (sector coordinates)
    states: np.ndarray | None  # Fock integers of the sector basis
    checks: dict = field(default_factory=dict)

    def full(self) -> np.ndarray:
        """Pi0-sandwiched operator on the whole sector."""
        return self.basis @ self.matrix @ self.basis.T

    def on_qubits(self, n: int) -> np.ndarray:
        """Express in the qubit basis when the ground space is single occupancy."""
        if self.states is None:
            raise ValidationError("no Fock-state labels attached")
        index = {int(s): k for k, s in enumerate(self.states)}
        occ = single_occupancy_states(n)
        P = np.zeros((len(self.states), 1 << n))
        for x, s in enumerate(occ):
            P[index[int(s)], x] = 1.0
        W = P.T @ self.basis
        if not np.allclose(W @ W.T, np.eye(1 << n), atol=1e-10):
            raise ValidationError("ground space is not the single-occupancy space")
        return W @ self.matrix @ W.T


def _as_matrix(h, eta):
    if isinstance(h, SecondQuantizedHamiltonian):
        return sector_matrix(h, eta), sector_basis(h.n_modes, eta)
    return np.asarray(h, float), None


def effective_hamiltonian(h_pen, h_pert, delta: float, eta: int | None = None) -> EffectiveHamiltonian:
    """Pi0 V Pi0 - Pi0 V Pi1 (Pi1 H Pi1)^+ Pi1 V Pi0 for H = h_pen, V = h_pert."""
    H, states = _as_matrix(h_pen, eta)
    V, _ = _as_matrix(h_pert, eta)
    if H.shape != V.shape:
        raise ValidationError("penalty and perturbation act on different spaces")
    norm_pen = float(np.max(np.abs(np.linalg.eigvalsh(H)))) if H.size else 0.0
    tol = 1e-9 * max(norm_pen, 1.0)
    if np.count_nonzero(H - np.diag(np.diag(H))) == 0:
        lam = np.diag(H).copy()
        vecs = np.eye(len(lam))
        order = np.argsort(lam, kind="stable")
        lam, vecs = lam[order], vecs[:, order]
    else:
        lam, vecs = np.linalg.eigh(H)
    if abs(lam[0]) > tol:
        raise HypothesisViolation(f"penalty ground energy {lam[0]:.3e} is not zero")
    ground = np.abs(lam) <= tol
    excited = ~ground
    gap = float(lam[excited].min()) if excited.any() else math.inf
    if gap < delta * (1 - 1e-12):
        raise HypothesisViolation(f"penalty gap {gap} below delta={delta}")
    norm_pert = float(np.max(np.abs(np.linalg.eigvalsh(V)))) if V.size else 0.0
    P0 = vecs[:, ground]
    if not excited.any():
        return EffectiveHamiltonian(P0.T @ V @ P0, P0, states, {"gap": gap, "pert_norm": norm_pert})
    P1 = vecs[:, excited]
    lam1 = lam[excited]
    cutoff = 1e-12 * max(norm_pen, 1.0)
    inv = np.where(np.abs(lam1) > cutoff, 1.0 / np.where(lam1 == 0, 1.0, lam1), 0.0)
    V01 = P0.T @ V @ P1
    M = P0.T @ V @ P0 - (V01 * inv) @ V01.T
    M = 0.5 * (M + M.T)
    checks = {"gap": gap, "pert_norm": norm_pert, "pert_small": bool(2 * norm_pert <= delta)}
    return EffectiveHamiltonian(M, P0, states, checks)


def hopping_norm(graph: WeightedGraph) -> float:
    """Fock-space norm of sum_sigma t_ij (a+_i a_j + h.c.).

    Filling every negative (or every positive) one-body level in both spins
    gives the extremes, so the norm is 2 max(sum lambda+, sum |lambda-|).
    """
    n = graph.n
    t = np.zeros((n, n))
    for i, j, w in graph.edges:
        t[i - 1, j - 1] = t[j - 1, i - 1] = w
    lam = np.linalg.eigvalsh(t)
    return 2.0 * float(max(lam[lam > 0].sum(), -lam[lam < 0].sum()))


def low_spectrum_distance(cert: ReductionCertificate) -> float:
    """max |E_k(H_Hubb low) - E_k(c_eff + sum h W)| over the 2^n lowest levels."""
    from .fockspace import build_hubbard

    n = cert.hubbard.n
    E = np.linalg.eigvalsh(sector_matrix(build_hubbard(cert.hubbard), n))[: 1 << n]
    F = np.linalg.eigvalsh(effective_qubit_operator(cert))
    return float(np.max(np.abs(E - F)))
