"""Closed-form integrals over normalized s-type Gaussians and tensor assembly.

A primitive is ``xi_z(r - c) = (2z/pi)^{3/4} exp(-z |r - c|^2)``.
Two-electron tensors use the physicists' pair ordering

    U[a, b, c, d] = int int xi_a(r) xi_b(s) |r - s|^-1 xi_c(s) xi_d(r) dr ds,

so electron one lives on (a, d) and electron two on (b, c); in chemists'
notation this is (ad|bc).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from .errors import CapExceeded, ValidationError

TINY = 1e-300
TAYLOR_SWITCH = 1e-6
DENSE_PRIMITIVE_CAP = 48
_ERI_PREF = 2.0 * math.pi**2.5


def overlap(z1, z2, x):
    z1, z2, x = np.asarray(z1, float), np.asarray(z2, float), np.asarray(x, float)
    s = z1 + z2
    out = (2.0 * np.sqrt(z1 * z2) / s) ** 1.5 * np.exp(-(z1 * z2 / s) * x * x)
    return out[()] if out.ndim == 0 else out


def kinetic(z1, z2, x):
    """<xi_z1| -1/2 nabla^2 |xi_z2> for centers ``x`` apart."""
    z1, z2, x = np.asarray(z1, float), np.asarray(z2, float), np.asarray(x, float)
    s = z1 + z2
    mu = z1 * z2 / s
    out = 2.0**1.5 * (z1 * z2) ** 1.75 / s**2.5 * (3.0 - 2.0 * mu * x * x) * np.exp(-mu * x * x)
    return out[()] if out.ndim == 0 else out


def boys0(x):
    x = np.asarray(x, float)
    small = x < TAYLOR_SWITCH
    xs = np.where(small, 1.0, x)
    big = np.sqrt(np.pi / (4.0 * xs)) * erf(np.sqrt(xs))
    out = np.where(small, 1.0 - x / 3.0 + x * x / 10.0, big)
    return out[()] if out.ndim == 0 else out


def coulomb_pair(z, x):
    """Repulsion between two xi_z densities ``x`` apart: sqrt(4z/pi) F0(z x^2)."""
    z, x = np.asarray(z, float), np.asarray(x, float)
    out = np.sqrt(4.0 * z / np.pi) * boys0(z * x * x)
    return out[()] if np.ndim(out) == 0 else out


def exchange_pair(z, x):
    out = np.exp(-np.asarray(z, float) * np.asarray(x, float) ** 2) * coulomb_pair(z, 0.0)
    return out[()] if np.ndim(out) == 0 else out


def other_pair(z, x):
    x = np.asarray(x, float)
    out = np.exp(-np.asarray(z, float) * x * x / 2.0) * coulomb_pair(z, x / 2.0)
    return out[()] if np.ndim(out) == 0 else out


def _norm(z):
    return (2.0 * z / np.pi) ** 0.75


def _eri_from_geometry(z1, z2, z3, z4, d14, d23, dPQ):
    """ERI given the two intra-pair distances and the distance of the product centers."""
    p = z1 + z4
    q = z2 + z3
    k14 = _norm(z1) * _norm(z4) * np.exp(-(z1 * z4 / p) * d14 * d14)
    k23 = _norm(z2) * _norm(z3) * np.exp(-(z2 * z3 / q) * d23 * d23)
    return k14 * k23 * _ERI_PREF / (p * q * np.sqrt(p + q)) * boys0(p * q / (p + q) * dPQ * dPQ)


def eri_four_center(c1, c2, c3, c4, z1, z2, z3, z4) -> float:
    """int int xi1(r-c1) xi2(s-c2) |r-s|^-1 xi3(s-c3) xi4(r-c4) dr ds."""
    c1, c2, c3, c4 = (np.asarray(c, float) for c in (c1, c2, c3, c4))
    # work relative to c1 to limit cancellation when coordinates are large
    c2, c3, c4 = c2 - c1, c3 - c1, c4 - c1
    P = z4 * c4 / (z1 + z4)
    Q = (z2 * c2 + z3 * c3) / (z2 + z3)
    d14 = float(np.linalg.norm(c4))
    d23 = float(np.linalg.norm(c3 - c2))
    dPQ = float(np.linalg.norm(P - Q))
    return float(_eri_from_geometry(z1, z2, z3, z4, d14, d23, dPQ))


@dataclass(frozen=True, eq=False)
class CoefficientTensors:
    S: np.ndarray
    T: np.ndarray
    U: np.ndarray
    level: str  # "primitive" | "composite"
    V: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.level not in ("primitive", "composite"):
            raise ValidationError(f"unknown tensor level {self.level!r}")
        N = self.S.shape[0]
        if self.S.shape != (N, N) or self.T.shape != (N, N) or self.U.shape != (N,) * 4:
            raise ValidationError("tensor shapes are inconsistent")
        if self.V is None:
            object.__setattr__(self, "V", np.zeros((N, N)))

    @property
    def N(self) -> int:
        return self.S.shape[0]

    def symmetry_defect(self) -> float:
        """Max deviation from u_abcd = u_badc = u_dcba and S, T symmetry."""
        U = self.U
        return float(
            max(
                np.max(np.abs(U - U.transpose(1, 0, 3, 2)), initial=0.0),
                np.max(np.abs(U - U.transpose(3, 2, 1, 0)), initial=0.0),
                np.max(np.abs(self.S - self.S.T), initial=0.0),
                np.max(np.abs(self.T - self.T.T), initial=0.0),
            )
        )


def _flush(a: np.ndarray) -> np.ndarray:
    a[np.abs(a) < TINY] = 0.0
    return a


def assemble_primitive_tensors(layout, cap: int = DENSE_PRIMITIVE_CAP) -> CoefficientTensors:
    N = layout.N
    if N > cap:
        raise CapExceeded(f"{N} primitive orbitals exceed the dense tensor cap {cap}")
    z = layout.exponents
    D = layout.distance_matrix()
    S = _flush(overlap(z[:, None], z[None, :], D))
    np.fill_diagonal(S, 1.0)
    T = _flush(kinetic(z[:, None], z[None, :], D))

    # unordered primitive pairs whose Gaussian product is not negligible
    L = layout.cell_size
    cell, off = layout.cell, layout.offset
    A, B = np.triu_indices(N)
    za, zb = z[A], z[B]
    p = za + zb
    K = _norm(za) * _norm(zb) * np.exp(-(za * zb / p) * D[A, B] ** 2)
    keep = K > TINY
    A, B, p, K = A[keep], B[keep], p[keep], K[keep]
    za, zb = z[A], z[B]
    # product center as (reference cell, offset) relative to the lower cell
    ref = np.minimum(cell[A], cell[B])
    pos = (za * (off[A] + (cell[A] - ref) * L) + zb * (off[B] + (cell[B] - ref) * L)) / p
    pair_id = -np.ones((N, N), dtype=np.int64)
    pair_id[A, B] = np.arange(len(A))
    pair_id[B, A] = np.arange(len(A))

    dPQ = (ref[:, None] - ref[None, :]) * L + (pos[:, None] - pos[None, :])
    pq = p[:, None] * p[None, :]
    spq = p[:, None] + p[None, :]
    G = K[:, None] * K[None, :] * _ERI_PREF / (pq * np.sqrt(spq)) * boys0(pq / spq * dPQ * dPQ)
    G = _flush(np.triu(G) + np.triu(G, 1).T)  # exact pair-pair symmetry

    U = np.zeros((N,) * 4)
    ad = pair_id  # ad[a, d]
    a_idx, d_idx = np.nonzero(ad >= 0)
    for a, d in zip(a_idx, d_idx):
        row = G[ad[a, d]]
        b_idx, c_idx = a_idx, d_idx
        U[a, b_idx, c_idx, d] = row[ad[b_idx, c_idx]]
    return CoefficientTensors(S, T, U, "primitive")


def _contract4(U: np.ndarray, C: np.ndarray) -> np.ndarray:
    # sum_abcd U[a,b,c,d] C[a,i] C[b,j] C[c,k] C[d,l]
    out = np.tensordot(U, C, axes=([0], [0]))  # b c d i
    out = np.tensordot(out, C, axes=([0], [0]))  # c d i j
    out = np.tensordot(out, C, axes=([0], [0]))  # d i j k
    out = np.tensordot(out, C, axes=([0], [0]))  # i j k l
    return out


def compose_tensors(prim: CoefficientTensors, layout) -> CoefficientTensors:
    """Contract primitive-level tensors with the composite amplitudes."""
    if prim.level != "primitive":
        raise ValidationError("compose_tensors needs primitive-level tensors")
    C = layout.coefficient_matrix()
    if C.shape[0] != prim.N:
        raise ValidationError("layout does not match the tensor basis size")
    S = C.T @ prim.S @ C
    T = C.T @ prim.T @ C
    U = _contract4(prim.U, C)
    return CoefficientTensors(S, T, U, "composite", C.T @ prim.V @ C)
