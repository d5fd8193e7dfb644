"""Symmetric orthonormalization and the rounded Hamiltonian coefficients."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .integrals import CoefficientTensors, _contract4, coulomb_pair, exchange_pair, kinetic, other_pair

MIN_EIGENVALUE = 1e-10


def f_omega(omega):
    """f(w) = w^2 exp(-w)."""
    omega = np.asarray(omega, float)
    out = omega * omega * np.exp(-omega)
    return out[()] if out.ndim == 0 else out


def block_inv_sqrt(eps: float) -> np.ndarray:
    """Closed-form inverse square root of [[1, eps], [eps, 1]]."""
    a = 1.0 / math.sqrt(1.0 + eps)
    b = 1.0 / math.sqrt(1.0 - eps)
    return 0.5 * np.array([[a + b, a - b], [a - b, a + b]])


@dataclass(frozen=True, eq=False)
class OrthoTransform:
    R: np.ndarray
    R_aprx: np.ndarray
    blocks: dict  # edge -> (a, b) primitive indices
    eps: dict  # edge -> overlap inside the block

    @property
    def R_neg(self) -> np.ndarray:
        return self.R - self.R_aprx

    @property
    def N(self) -> int:
        return self.R.shape[0]

    def block_overlap(self) -> np.ndarray:
        """S_block: identity plus the edge-block overlaps."""
        S = np.eye(self.N)
        for e, (a, b) in self.blocks.items():
            S[a, b] = S[b, a] = self.eps[e]
        return S


def inv_sqrt_overlap(S: np.ndarray, blocks: dict | None = None) -> OrthoTransform:
    S = np.asarray(S, float)
    if S.ndim != 2 or S.shape[0] != S.shape[1] or not np.allclose(S, S.T, rtol=0, atol=1e-14):
        raise ValidationError("overlap matrix must be square and symmetric")
    lam, V = np.linalg.eigh(S)
    if lam[0] <= MIN_EIGENVALUE:
        raise ValidationError(f"overlap matrix is not positive definite (min eigenvalue {lam[0]:.3e})")
    R = (V * lam**-0.5) @ V.T
    R = 0.5 * (R + R.T)
    blocks = dict(blocks or {})
    R_aprx = np.eye(S.shape[0])
    eps = {}
    for e, (a, b) in blocks.items():
        eps[e] = float(S[a, b])
        blk = block_inv_sqrt(eps[e])
        R_aprx[np.ix_((a, b), (a, b))] = blk
    return OrthoTransform(R, R_aprx, blocks, eps)


def layout_blocks(layout) -> dict:
    return {e: (layout.index(*u), layout.index(*v)) for e, (u, v) in layout.pair_map.items()}


def orthonormalizer(layout, prim: CoefficientTensors) -> OrthoTransform:
    return inv_sqrt_overlap(prim.S, layout_blocks(layout))


def transform_tensors(prim: CoefficientTensors, xf: OrthoTransform) -> CoefficientTensors:
    """R T R and (R x R) U (R x R); R is symmetric."""
    R = xf.R
    if R.shape[0] != prim.N:
        raise ValidationError("transform does not match the tensor basis size")
    S = R @ prim.S @ R
    T = R @ prim.T @ R
    U = _contract4(prim.U, R)
    return CoefficientTensors(S, T, U, prim.level, R @ prim.V @ R)


@dataclass(frozen=True)
class RoundedCoefficients:
    n: int
    d: int
    alpha: float
    beta: float
    c_T: float
    t_edge: dict  # (i, j) -> hopping
    c_U: float
    c_main_U: float
    u_edge: dict  # (i, j) -> {"coulomb", "exchange", "other"}, 1/(4d^2) included
    omega: dict

    @property
    def u_class_2(self) -> float:
        vals = {cls["coulomb"] for cls in self.u_edge.values()}
        if len(vals) > 1:
            raise ValidationError("edge Coulomb terms differ; close-pair distance is not uniform")
        return vals.pop() if vals else 0.0

    @property
    def support(self) -> set:
        """B: all 4-tuples over {i}^4 or {i, j}^4 for an edge (1-indexed)."""
        out = {(i,) * 4 for i in range(1, self.n + 1)}
        for i, j in self.u_edge:
            out.update(itertools.product((i, j), repeat=4))
        return out


def rounded_coefficients(layout) -> RoundedCoefficients:
    a, b, d = layout.alpha, layout.beta, layout.d
    c_T = 0.5 * (float(kinetic(a, a, 0.0)) + float(kinetic(b, b, 0.0)))
    t_edge, u_edge = {}, {}
    for e, w in layout.omega.items():
        g = layout.gamma[e]
        t_edge[e] = -(a / (4 * d)) * math.sqrt(float(f_omega(w)))
        u_edge[e] = {
            "coulomb": float(coulomb_pair(a, g)) / (4 * d * d),
            "exchange": float(exchange_pair(a, g)) / (4 * d * d),
            "other": float(other_pair(a, g)) / (4 * d * d),
        }
    c_U = 0.25 * float(coulomb_pair(b, 0.0)) + float(coulomb_pair(a, 0.0)) / (4 * d)
    c_main_U = 0.25 * float(coulomb_pair(b, 0.0))
    return RoundedCoefficients(layout.n, d, a, b, c_T, t_edge, c_U, c_main_U, u_edge, dict(layout.omega))
