"""Second-quantized operators on spin orbitals and their matrix realizations.

Operators are stored as

    H = c + sum_pq h[p, q] a+_p a_q + 1/2 sum_pqrs v[p, q, r, s] a+_p a+_q a_r a_s

over ``M = 2n`` spin-orbital modes.  Spatial orbital ``i`` (1-indexed) with
spin ``sigma`` is mode ``2(i-1) + [sigma == -1]``, i.e. the interleaved order
(1,+1), (1,-1), (2,+1), ...  A basis state is an integer whose bit ``k`` is
the occupation of mode ``k`` (bit 0 least significant), and the fermionic sign
of ``a_k`` is the parity of the occupied modes below ``k``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import CapExceeded, ValidationError

SPINS = (+1, -1)
DENSE_MAX_DIM = 4096
DEFAULT_CAP = 2_000_000


def mode(i: int, sigma: int) -> int:
    """Mode index of spatial orbital ``i`` (1-indexed) with spin ``sigma``."""
    return 2 * (i - 1) + (1 if sigma == -1 else 0)


@dataclass(frozen=True, eq=False)
class SecondQuantizedHamiltonian:
    n_modes: int
    one_body: np.ndarray
    two_body: np.ndarray | None = None
    constant: float = 0.0

    def __post_init__(self):
        M = self.n_modes
        h = np.asarray(self.one_body, dtype=float)
        if h.shape != (M, M):
            raise ValidationError(f"one-body block has shape {h.shape}, expected {(M, M)}")
        object.__setattr__(self, "one_body", h)
        if self.two_body is not None:
            v = np.asarray(self.two_body, dtype=float)
            if v.shape != (M,) * 4:
                raise ValidationError(f"two-body block has shape {v.shape}, expected {(M,) * 4}")
            object.__setattr__(self, "two_body", v)
        object.__setattr__(self, "constant", float(self.constant))

    @classmethod
    def zero(cls, n_modes: int) -> "SecondQuantizedHamiltonian":
        return cls(n_modes, np.zeros((n_modes, n_modes)))

    @property
    def n_spatial(self) -> int:
        return self.n_modes // 2

    def _v(self) -> np.ndarray:
        if self.two_body is None:
            return np.zeros((self.n_modes,) * 4)
        return self.two_body

    def __add__(self, other):
        if isinstance(other, (int, float)):
            return SecondQuantizedHamiltonian(
                self.n_modes, self.one_body, self.two_body, self.constant + other
            )
        if other.n_modes != self.n_modes:
            raise ValidationError("mode counts differ")
        if self.two_body is None and other.two_body is None:
            v = None
        else:
            v = self._v() + other._v()
        return SecondQuantizedHamiltonian(
            self.n_modes, self.one_body + other.one_body, v, self.constant + other.constant
        )

    __radd__ = __add__

    def __mul__(self, c: float):
        v = None if self.two_body is None else c * self.two_body
        return SecondQuantizedHamiltonian(self.n_modes, c * self.one_body, v, c * self.constant)

    __rmul__ = __mul__

    def __neg__(self):
        return -1.0 * self

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            return self + (-other)
        return self + (-other)

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        """Coefficient map closed under adjoint: h_pq = h_qp and v_pqrs = v_srqp."""
        if not np.allclose(self.one_body, self.one_body.T, atol=atol, rtol=0):
            return False
        if self.two_body is None:
            return True
        return bool(np.allclose(self.two_body, self.two_body.transpose(3, 2, 1, 0), atol=atol, rtol=0))

    def is_diagonal(self, atol: float = 0.0) -> bool:
        """True when every term is a product of number operators."""
        off = self.one_body - np.diag(np.diag(self.one_body))
        if np.any(np.abs(off) > atol):
            return False
        if self.two_body is None:
            return True
        for p, q, r, s in zip(*np.nonzero(np.abs(self.two_body) > atol)):
            if p == q or r == s:
                continue
            if {p, q} != {r, s}:
                return False
        return True

    def terms(self, tol: float = 0.0):
        """Yield ``(ops, coefficient)`` with ops a tuple of ``(mode, is_creation)``.

        Two-body coefficients carry the 1/2 prefactor already.
        """
        if self.constant != 0.0:
            yield (), self.constant
        for p, q in zip(*np.nonzero(np.abs(self.one_body) > tol)):
            yield ((int(p), True), (int(q), False)), float(self.one_body[p, q])
        if self.two_body is not None:
            for p, q, r, s in zip(*np.nonzero(np.abs(self.two_body) > tol)):
                if p == q or r == s:
                    continue
                yield (
                    ((int(p), True), (int(q), True), (int(r), False), (int(s), False)),
                    0.5 * float(self.two_body[p, q, r, s]),
                )

    def to_json_terms(self, tol: float = 0.0) -> str:
        terms = [
            {"ops": [[m, "+" if c else "-"] for m, c in ops], "coeff": coeff}
            for ops, coeff in self.terms(tol)
        ]
        return json.dumps({"n_modes": self.n_modes, "terms": terms}, indent=1)

    def to_csv_triplets(self, eta: int | None = None) -> str:
        mat = sp.coo_matrix(sector_matrix(self, eta, sparse=True))
        order = np.lexsort((mat.col, mat.row))
        lines = ["row,col,value"]
        for k in order:
            lines.append(f"{mat.row[k]},{mat.col[k]},{mat.data[k]!r}")
        return "\n".join(lines) + "\n"


def add_density_density(v: np.ndarray, p: int, q: int, c: float) -> None:
    """Accumulate ``c n_p n_q`` (p != q) into a two-body array in place."""
    if p == q:
        raise ValueError("use the one-body block for n_p n_p = n_p")
    v[p, q, q, p] += c
    v[q, p, p, q] += c


def add_hopping(h: np.ndarray, p: int, q: int, t: float) -> None:
    """Accumulate ``t (a+_p a_q + a+_q a_p)`` into a one-body array in place."""
    h[p, q] += t
    h[q, p] += t


def number_operator(n_modes: int) -> SecondQuantizedHamiltonian:
    return SecondQuantizedHamiltonian(n_modes, np.eye(n_modes))


# --- basis and sector realizations -------------------------------------------


def sector_basis(n_modes: int, eta: int | None) -> np.ndarray:
    """Sorted bitstrings of Hamming weight ``eta`` (all ``2**M`` when ``eta`` is None)."""
    if eta is None:
        return np.arange(1 << n_modes, dtype=np.int64)
    if eta < 0 or eta > n_modes:
        raise ValidationError(f"eta={eta} outside [0, {n_modes}]")
    states = [sum(1 << k for k in c) for c in itertools.combinations(range(n_modes), eta)]
    return np.array(sorted(states), dtype=np.int64)


def sector_dim(n_modes: int, eta: int | None) -> int:
    return 1 << n_modes if eta is None else math.comb(n_modes, eta)


def _popcount_below(states: np.ndarray, k: int) -> np.ndarray:
    return np.bitwise_count(states & np.int64((1 << k) - 1)).astype(np.int64)


def _apply_ladder(states, signs, cols, k: int, create: bool):
    occ = ((states >> k) & 1).astype(bool)
    keep = ~occ if create else occ
    states, signs, cols = states[keep], signs[keep], cols[keep]
    parity = _popcount_below(states, k) & 1
    signs = signs * (1 - 2 * parity)
    states = states ^ np.int64(1 << k)
    return states, signs, cols


def _apply_term(ops, basis: np.ndarray):
    states = basis.copy()
    signs = np.ones(len(basis), dtype=np.int64)
    cols = np.arange(len(basis), dtype=np.int64)
    for m, create in reversed(ops):
        states, signs, cols = _apply_ladder(states, signs, cols, m, create)
        if len(states) == 0:
            break
    return states, signs, cols


def sector_matrix(
    h: SecondQuantizedHamiltonian,
    eta: int | None = None,
    sparse: bool = False,
    cap: int = DEFAULT_CAP,
):
    """Matrix of ``h`` on the ``eta``-electron sector (full Fock space if None)."""
    dim = sector_dim(h.n_modes, eta)
    if dim > cap:
        raise CapExceeded(f"sector dimension {dim} exceeds cap {cap}")
    basis = sector_basis(h.n_modes, eta)
    full = eta is None
    rows, cols, vals = [], [], []
    for ops, coeff in h.terms():
        if not ops:
            idx = np.arange(dim, dtype=np.int64)
            rows.append(idx)
            cols.append(idx)
            vals.append(np.full(dim, coeff))
            continue
        states, signs, c = _apply_term(ops, basis)
        if len(states) == 0:
            continue
        r = states if full else np.searchsorted(basis, states)
        rows.append(r)
        cols.append(c)
        vals.append(coeff * signs)
    if rows:
        mat = sp.coo_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
        ).tocsr()
    else:
        mat = sp.csr_matrix((dim, dim))
    mat.sum_duplicates()
    if sparse:
        return mat
    return mat.toarray()


sector_restrict = sector_matrix


def diagonal_energies(h: SecondQuantizedHamiltonian, states: np.ndarray) -> np.ndarray:
    """Diagonal matrix elements <s|h|s> for an array of bitstrings."""
    states = np.asarray(states, dtype=np.int64)
    M = h.n_modes
    occ = ((states[:, None] >> np.arange(M, dtype=np.int64)) & 1).astype(float)
    e = h.constant + occ @ np.diag(h.one_body)
    if h.two_body is not None:
        v = h.two_body
        idx = np.arange(M)
        direct = v[idx[:, None], idx[None, :], idx[None, :], idx[:, None]]
        exch = v[idx[:, None], idx[None, :], idx[:, None], idx[None, :]]
        pair = direct - exch
        np.fill_diagonal(pair, 0.0)
        e = e + 0.5 * np.einsum("sp,pq,sq->s", occ, pair, occ)
    return e


# --- explicit Jordan-Wigner construction --------------------------------------

_I2 = np.eye(2)
_Z = np.diag([1.0, -1.0])
_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]])  # (X + iY)/2 = |0><1|


def jw_annihilators(n_modes: int) -> list[np.ndarray]:
    """Dense ``a_k = Z_0 ... Z_{k-1} (X_k + i Y_k)/2`` with qubit ``k`` = bit ``k``."""
    out = []
    for k in range(n_modes):
        factors = []
        for j in range(n_modes - 1, -1, -1):  # kron order: most significant bit first
            factors.append(_Z if j < k else (_LOWER if j == k else _I2))
        mat = np.array([[1.0]])
        for f in factors:
            mat = np.kron(mat, f)
        out.append(mat)
    return out


def jordan_wigner_matrix(h: SecondQuantizedHamiltonian) -> np.ndarray:
    """Full ``2**M`` matrix of ``h`` built from explicit Pauli-string ladder operators."""
    M = h.n_modes
    if M > 10:
        raise CapExceeded("explicit Jordan-Wigner matrices are limited to M <= 10")
    a = jw_annihilators(M)
    ad = [x.T for x in a]
    dim = 1 << M
    out = h.constant * np.eye(dim)
    for p, q in zip(*np.nonzero(h.one_body)):
        out += h.one_body[p, q] * ad[p] @ a[q]
    if h.two_body is not None:
        for p, q, r, s in zip(*np.nonzero(h.two_body)):
            out += 0.5 * h.two_body[p, q, r, s] * ad[p] @ ad[q] @ a[r] @ a[s]
    return out


# --- named Hamiltonians ---------------------------------------------------------


def build_hubbard(inst) -> SecondQuantizedHamiltonian:
    """``u0 sum_i n_{i,+} n_{i,-} + sum_edges,sigma t_ij (a+_{i s} a_{j s} + h.c.)``."""
    n = inst.graph.n
    M = 2 * n
    h = np.zeros((M, M))
    v = np.zeros((M,) * 4)
    for i in range(1, n + 1):
        add_density_density(v, mode(i, +1), mode(i, -1), inst.u0)
    for i, j, t in inst.graph.edges:
        for s in SPINS:
            add_hopping(h, mode(i, s), mode(j, s), t)
    return SecondQuantizedHamiltonian(M, h, v)


def hubbard_parts(inst) -> tuple[SecondQuantizedHamiltonian, SecondQuantizedHamiltonian]:
    """Split into (onsite penalty, hopping perturbation)."""
    full = build_hubbard(inst)
    M = full.n_modes
    pen = SecondQuantizedHamiltonian(M, np.zeros((M, M)), full.two_body)
    pert = SecondQuantizedHamiltonian(M, full.one_body)
    return pen, pert


def spin_expand(t: np.ndarray, u: np.ndarray | None) -> SecondQuantizedHamiltonian:
    """Spin-orbital operator from spatial one-body ``t`` and two-body ``u``.

    ``u[i, j, k, l]`` multiplies ``a+_{i s} a+_{j r} a_{k r} a_{l s}`` (with 1/2),
    i.e. electron one on (i, l) and electron two on (j, k).
    """
    n = t.shape[0]
    M = 2 * n
    h = np.zeros((M, M))
    for s in (0, 1):
        h[s::2, s::2] = t
    v = None
    if u is not None:
        v = np.zeros((M,) * 4)
        for s in (0, 1):
            for r in (0, 1):
                v[s::2, r::2, r::2, s::2] = u
    return SecondQuantizedHamiltonian(M, h, v)


def build_es_hamiltonian(tensors, xf=None, layout=None) -> SecondQuantizedHamiltonian:
    """Electronic-structure operator ``T + U`` over composite orbitals.

    With ``xf`` (an orthonormalizing transform) the tensors are taken at the
    primitive level, conjugated by ``xf.R`` and then contracted with the
    composite amplitudes of ``layout``.
    """
    from .integrals import compose_tensors
    from .lowdin import transform_tensors

    if xf is not None:
        if layout is None:
            raise ValidationError("a layout is required to compose transformed tensors")
        tensors = compose_tensors(transform_tensors(tensors, xf), layout)
    if tensors.level != "composite":
        raise ValidationError("build_es_hamiltonian needs composite-level tensors")
    if tensors.U.shape != (tensors.N,) * 4 or tensors.T.shape != (tensors.N, tensors.N):
        raise ValidationError("tensor dimensions do not match basis size")
    return spin_expand(tensors.T, tensors.U)


def _rounded_two_body(rc, include_onsite: bool = True) -> np.ndarray:
    n = rc.n
    u = np.zeros((n,) * 4)
    if include_onsite:
        for i in range(n):
            u[i, i, i, i] = rc.c_U
    for (i, j), cls in rc.u_edge.items():
        a, b = i - 1, j - 1
        for idx in itertools.product((a, b), repeat=4):
            if len(set(idx)) == 1:
                continue
            u[idx] = cls[_tuple_class(idx, a, b)]
    return u


def _tuple_class(idx, a, b) -> str:
    i, j, k, l = idx
    if i == l and j == k:
        return "coulomb"
    n_a = sum(x == a for x in idx)
    if n_a == 2:
        return "exchange"
    return "other"


def _rounded_one_body(rc, diagonal: bool = True) -> np.ndarray:
    t = np.zeros((rc.n, rc.n))
    if diagonal:
        np.fill_diagonal(t, rc.c_T)
    for (i, j), tij in rc.t_edge.items():
        t[i - 1, j - 1] = t[j - 1, i - 1] = tij
    return t


def build_rounded(rc, n: int | None = None, d: int | None = None) -> SecondQuantizedHamiltonian:
    """Rounded operator: diagonal ``c_T``, edge hoppings, B-supported interactions."""
    if n is not None and n != rc.n:
        raise ValidationError("n does not match the rounded coefficients")
    return spin_expand(_rounded_one_body(rc), _rounded_two_body(rc))


def build_main(rc, n: int | None = None) -> SecondQuantizedHamiltonian:
    """Onsite ``u^Coul_beta(0)/4 n_+ n_-`` plus the rounded edge hoppings."""
    if n is not None and n != rc.n:
        raise ValidationError("n does not match the rounded coefficients")
    M = 2 * rc.n
    h = np.zeros((M, M))
    for s in (0, 1):
        h[s::2, s::2] = _rounded_one_body(rc, diagonal=False)
    v = np.zeros((M,) * 4)
    for i in range(1, rc.n + 1):
        add_density_density(v, mode(i, +1), mode(i, -1), rc.c_main_U)
    return SecondQuantizedHamiltonian(M, h, v)


def build_classical(layout, rc) -> SecondQuantizedHamiltonian:
    """Diagonal ``u1 sum_i n_{i+} n_{i-} + u2 sum_edges,sigma,tau n_{i s} n_{j t}``."""
    gammas = np.array(list(layout.gamma.values()))
    if len(gammas) and not np.allclose(gammas, gammas[0], rtol=1e-12, atol=0):
        raise ValidationError("the classical operator needs a uniform close-pair distance")
    M = 2 * rc.n
    v = np.zeros((M,) * 4)
    for i in range(1, rc.n + 1):
        add_density_density(v, mode(i, +1), mode(i, -1), rc.c_U)
    for (i, j), cls in rc.u_edge.items():
        u2 = cls["coulomb"]
        for s in SPINS:
            for r in SPINS:
                add_density_density(v, mode(i, s), mode(j, r), u2)
    return SecondQuantizedHamiltonian(M, np.zeros((M, M)), v)
