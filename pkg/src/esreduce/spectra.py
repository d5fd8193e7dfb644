"""Ground energies, low spectra and spectral norms on particle-number sectors."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .errors import CapExceeded
from .fockspace import DEFAULT_CAP, DENSE_MAX_DIM, SecondQuantizedHamiltonian, sector_dim, sector_matrix


@dataclass(frozen=True)
class SpectrumReport:
    ground_energy: float
    eigenvalues: tuple
    eta: int | None
    dimension: int
    method: str  # "dense" | "iterative"
    residual: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["eigenvalues"] = list(self.eigenvalues)
        return d


def _realize(h, eta, sparse, cap):
    if isinstance(h, SecondQuantizedHamiltonian):
        if sector_dim(h.n_modes, eta) > cap:
            raise CapExceeded(f"sector dimension {sector_dim(h.n_modes, eta)} exceeds cap {cap}")
        return sector_matrix(h, eta, sparse=sparse, cap=cap)
    A = h
    if A.shape[0] > cap:
        raise CapExceeded(f"matrix dimension {A.shape[0]} exceeds cap {cap}")
    return A if sparse else (A.toarray() if sp.issparse(A) else np.asarray(A, float))


def _dimension(h, eta) -> int:
    if isinstance(h, SecondQuantizedHamiltonian):
        return sector_dim(h.n_modes, eta)
    return h.shape[0]


def _start_vector(dim: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal(dim)


def ground_energy(
    h, eta: int | None = None, k: int = 1, method: str = "auto", seed: int = 0, cap: int = DEFAULT_CAP
) -> SpectrumReport:
    dim = _dimension(h, eta)
    k = max(1, min(k, dim))
    use_dense = method == "dense" or (method == "auto" and dim <= DENSE_MAX_DIM) or dim <= k + 1
    if use_dense:
        A = _realize(h, eta, False, cap)
        lam, V = np.linalg.eigh(A)
        lam, V = lam[:k], V[:, :k]
        label = "dense"
    else:
        A = _realize(h, eta, True, cap)
        lam, V = eigsh(A, k=k, which="SA", v0=_start_vector(dim, seed), tol=1e-12)
        order = np.argsort(lam)
        lam, V = lam[order], V[:, order]
        label = "iterative"
    R = A @ V - V * lam
    res = float(np.max(np.linalg.norm(R, axis=0) / np.linalg.norm(V, axis=0)))
    return SpectrumReport(float(lam[0]), tuple(float(x) for x in lam), eta, dim, label, res)


def spectral_norm_diff(h1, h2, eta: int | None = None, method: str = "auto", seed: int = 0, cap: int = DEFAULT_CAP) -> float:
    """Largest |eigenvalue| of h1 - h2 on the sector (whole Fock space if ``eta`` is None)."""
    diff = h1 - h2
    dim = _dimension(diff, eta)
    if method == "dense" or (method == "auto" and dim <= DENSE_MAX_DIM):
        lam = np.linalg.eigvalsh(_realize(diff, eta, False, cap))
        return float(max(abs(lam[0]), abs(lam[-1])))
    A = _realize(diff, eta, True, cap)
    v0 = _start_vector(dim, seed)
    top = eigsh(A, k=1, which="LA", v0=v0, tol=1e-12, return_eigenvectors=False)
    bot = eigsh(A, k=1, which="SA", v0=v0, tol=1e-12, return_eigenvectors=False)
    return float(max(abs(top[0]), abs(bot[0])))


def low_spectrum_projection(h, threshold: float, eta: int | None = None, cap: int = DEFAULT_CAP) -> SpectrumReport:
    """All eigenvalues at most ``threshold`` (dense)."""
    A = _realize(h, eta, False, cap)
    lam = np.linalg.eigvalsh(A)
    kept = lam[lam <= threshold]
    g = float(kept[0]) if len(kept) else float("nan")
    return SpectrumReport(g, tuple(float(x) for x in kept), eta, A.shape[0], "dense", 0.0)
