"""Slater-determinant energies and the independent-set gadget."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, HypothesisViolation, ValidationError
from .fockspace import SecondQuantizedHamiltonian, build_classical, diagonal_energies, sector_basis
from .instances import WeightedGraph
from .layout import place_centers
from .lowdin import rounded_coefficients

MAX_SCAN_MODES = 30
SCAN_CHUNK = 1 << 16


@dataclass(frozen=True, eq=False)
class SlaterState:
    B: np.ndarray  # eta x M, orthonormal rows

    def __post_init__(self):
        B = np.atleast_2d(np.asarray(self.B, float))
        if B.size and not np.allclose(B @ B.T, np.eye(B.shape[0]), atol=1e-10, rtol=0):
            raise ValidationError("Slater coefficient rows are not orthonormal")
        object.__setattr__(self, "B", B)

    @property
    def eta(self) -> int:
        return self.B.shape[0]

    @property
    def density(self) -> np.ndarray:
        """rho_pq = <a+_p a_q>."""
        return self.B.T @ self.B

    @classmethod
    def from_occupation(cls, modes, n_modes: int) -> "SlaterState":
        B = np.zeros((len(modes), n_modes))
        for k, m in enumerate(sorted(modes)):
            B[k, m] = 1.0
        return cls(B)

    @classmethod
    def random(cls, eta: int, n_modes: int, rng) -> "SlaterState":
        Q, _ = np.linalg.qr(rng.standard_normal((n_modes, eta)))
        return cls(Q.T)


def slater_energy(h: SecondQuantizedHamiltonian, state: SlaterState) -> float:
    """Wick contraction: c + tr(h rho) + 1/2 sum v_pqrs (rho_ps rho_qr - rho_pr rho_qs)."""
    if state.B.shape[1] != h.n_modes:
        raise ValidationError("state and operator have different mode counts")
    rho = state.density
    e = h.constant + float(np.sum(h.one_body * rho))
    if h.two_body is not None and state.eta >= 2:
        v = h.two_body
        direct = np.einsum("pqrs,ps,qr->", v, rho, rho)
        exch = np.einsum("pqrs,pr,qs->", v, rho, rho)
        e += 0.5 * float(direct - exch)
    return e


def slater_vector(state: SlaterState) -> np.ndarray:
    """Amplitudes of b+_1 ... b+_eta |0> on the sorted fixed-weight basis."""
    M = state.B.shape[1]
    basis = sector_basis(M, state.eta)
    out = np.empty(len(basis))
    for k, s in enumerate(basis):
        cols = [m for m in range(M) if (int(s) >> m) & 1]
        out[k] = np.linalg.det(state.B[:, cols]) if cols else 1.0
    return out


def _fock_matrix(h: SecondQuantizedHamiltonian, rho: np.ndarray) -> np.ndarray:
    F = h.one_body.copy()
    if h.two_body is not None:
        v = h.two_body
        F += 0.5 * (
            np.einsum("aqrb,qr->ab", v, rho)
            + np.einsum("pabs,ps->ab", v, rho)
            - np.einsum("aqbs,qs->ab", v, rho)
            - np.einsum("pasb,ps->ab", v, rho)
        )
    return F


def local_search_hf(h, eta: int, restarts: int = 4, steps: int = 200, seed: int = 0):
    """Projected-gradient descent over orthonormal B from random starts (demo only)."""
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        st = SlaterState.random(eta, h.n_modes, rng)
        e = slater_energy(h, st)
        lr = 0.1
        for _ in range(steps):
            F = _fock_matrix(h, st.density)
            G = st.B @ (F + F.T)
            G -= (G @ st.B.T) @ st.B  # tangent to the row space
            if np.linalg.norm(G) < 1e-10:
                break
            while lr > 1e-8:
                Q, _ = np.linalg.qr((st.B - lr * G).T)
                cand = SlaterState(Q.T)
                ec = slater_energy(h, cand)
                if ec < e:
                    st, e, lr = cand, ec, lr * 1.5
                    break
                lr *= 0.5
            else:
                break
        if best is None or e < best[0]:
            best = (e, st)
    return best


def classical_ground(h: SecondQuantizedHamiltonian, eta: int, cap: int = 10**7):
    """Lowest diagonal energy over weight-eta bitstrings; ties go to the smallest integer."""
    M = h.n_modes
    if not h.is_diagonal():
        raise ValidationError("classical_ground needs a diagonal operator")
    if eta < 0 or eta > M:
        raise ValidationError(f"eta={eta} outside [0, {M}]")
    if M > MAX_SCAN_MODES or math.comb(M, eta) > cap:
        raise CapExceeded(f"scan over C({M}, {eta}) states exceeds the cap")
    best_e, best_s = math.inf, None
    combos = itertools.combinations(range(M), eta)
    while True:
        chunk = list(itertools.islice(combos, SCAN_CHUNK))
        if not chunk:
            break
        states = np.array([sum(1 << m for m in c) for c in chunk], dtype=np.int64)
        e = diagonal_energies(h, states)
        k = int(np.argmin(e))
        if e[k] < best_e or (e[k] == best_e and states[k] < best_s):
            best_e, best_s = float(e[k]), int(states[k])
    occupation = [(best_s >> m) & 1 for m in range(M)]
    return best_e, occupation


@dataclass(frozen=True)
class IndependentSetResult:
    exists: bool
    energy: float
    occupation: list
    vertices: list
    u1: float
    u2: float

    def to_dict(self) -> dict:
        return {
            "energy": self.energy,
            "occupation": self.occupation,
            "vertices": self.vertices,
            "is_independent_set": self.exists,
            "u_class_1": self.u1,
            "u_class_2": self.u2,
        }


def gadget_hamiltonian(graph: WeightedGraph, alpha: float = 1.0, gamma: float = 1.0, beta: float | None = None, Gamma: float | None = None):
    """H_class for a uniform close-pair distance; beta defaults to 16 n^4."""
    n = graph.n
    beta = float(16 * n**4) if beta is None else beta
    Gamma = 640.0 * n**18 * beta**3 if Gamma is None else Gamma
    layout = place_centers(graph, gamma, Gamma, alpha, beta)
    rc = rounded_coefficients(layout)
    return build_classical(layout, rc), rc


def independent_set_check(graph: WeightedGraph, k: int, alpha: float = 1.0, gamma: float = 1.0, beta: float | None = None) -> IndependentSetResult:
    n = graph.n
    if not 0 <= k <= n:
        raise ValidationError(f"k={k} outside [0, n={n}]")
    h, rc = gadget_hamiltonian(graph, alpha, gamma, beta)
    u1 = rc.c_U
    u2 = rc.u_class_2
    if graph.m and not u1 > 4 * n**2 * u2:
        raise HypothesisViolation(f"u1={u1} not above 4 n^2 u2={4 * n * n * u2}")
    energy, occ = classical_ground(h, k)
    vertices = sorted({m // 2 + 1 for m, x in enumerate(occ) if x})
    threshold = u2 / 2 if graph.m else math.inf
    return IndependentSetResult(bool(energy < threshold), energy, occ, vertices, u1, u2)
