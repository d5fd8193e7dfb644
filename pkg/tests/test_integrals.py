import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import mc_eri, quad_boys0, quad_kinetic, quad_overlap
from scipy.special import erf

from esreduce.errors import CapExceeded, ValidationError
from esreduce.instances import complete_graph, empty_graph, path_graph
from esreduce.integrals import (
    CoefficientTensors,
    assemble_primitive_tensors,
    boys0,
    compose_tensors,
    coulomb_pair,
    eri_four_center,
    exchange_pair,
    kinetic,
    other_pair,
    overlap,
)
from esreduce.layout import place_centers

exps = st.floats(0.2, 8.0)
dists = st.floats(0.0, 6.0)


def test_overlap_examples():
    assert overlap(2.7, 2.7, 0.0) == pytest.approx(1.0, abs=1e-15)
    for x in (0.0, 0.5, 2.0):
        assert overlap(1.0, 1.0, x) == pytest.approx(math.exp(-x * x / 2), rel=1e-14)
    assert overlap(1.0, 3.0, 0.0) == pytest.approx(0.80592744887, abs=1e-10)
    assert overlap(1.0, 3.0, 0.0) == pytest.approx(quad_overlap(1.0, 3.0, 0.0), abs=1e-12)


def test_kinetic_examples():
    assert kinetic(1.0, 1.0, 0.0) == pytest.approx(1.5, abs=1e-15)
    z = 2.3
    assert kinetic(z, z, math.sqrt(3 / z)) == pytest.approx(0.0, abs=1e-15)
    assert kinetic(1.0, 2.0, 1.0) == pytest.approx(0.52223195699, abs=1e-10)
    assert kinetic(1.0, 2.0, 1.0) == pytest.approx(quad_kinetic(1.0, 2.0, 1.0), abs=1e-8)
    x = 1.3
    assert kinetic(1.0, 1.0, x) == pytest.approx(0.5 * (3 - x * x) * math.exp(-x * x / 2), rel=1e-14)


def test_boys_examples():
    assert boys0(0.0) == 1.0
    assert boys0(1.0) == pytest.approx(0.746824132812427, abs=1e-14)
    assert boys0(1e4) * math.sqrt(1e4) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)
    # Taylor branch meets the erf branch
    assert boys0(0.99e-6) == pytest.approx(quad_boys0(0.99e-6), abs=1e-15)
    assert boys0(1.01e-6) == pytest.approx(quad_boys0(1.01e-6), abs=1e-15)


def test_pair_examples():
    z = 1.7
    assert coulomb_pair(z, 0.0) == pytest.approx(2 * math.sqrt(z / math.pi), rel=1e-15)
    assert coulomb_pair(math.pi, 0.0) == pytest.approx(2.0, rel=1e-15)
    assert coulomb_pair(1.0, 10.0) == pytest.approx(erf(10.0) / 10.0, rel=1e-14)
    assert exchange_pair(z, 0.0) == pytest.approx(coulomb_pair(z, 0.0), rel=1e-15)
    assert exchange_pair(1.0, 2.0) == pytest.approx(math.exp(-4) * 2 / math.sqrt(math.pi), rel=1e-14)
    assert other_pair(z, 0.0) == pytest.approx(coulomb_pair(z, 0.0), rel=1e-15)
    ref = math.exp(-0.5) * math.sqrt(4 / math.pi) * quad_boys0(0.25)
    assert other_pair(1.0, 1.0) == pytest.approx(ref, abs=1e-13)
    assert other_pair(1.0, 60.0) < 1e-300


def test_coulomb_pair_monte_carlo():
    m, s = mc_eri([0, 0, 0], [10, 0, 0], [10, 0, 0], [0, 0, 0], 1, 1, 1, 1)
    assert abs(m - coulomb_pair(1.0, 10.0)) <= max(3 * s, 1e-3)


@settings(max_examples=100, deadline=None)
@given(exps, exps, dists)
def test_integral_properties(z1, z2, x):
    assert overlap(z1, z2, x) == pytest.approx(overlap(z2, z1, x), rel=1e-14)
    assert 0 < overlap(z1, z2, x) <= 1 + 1e-15 or overlap(z1, z2, x) == 0.0
    assert kinetic(z1, z2, x) == pytest.approx(kinetic(z2, z1, x), rel=1e-13, abs=1e-300)
    assert exchange_pair(z1, x) <= coulomb_pair(z1, x) * (1 + 1e-14)
    assert other_pair(z1, x) <= coulomb_pair(z1, 0.0) * (1 + 1e-14)
    assert boys0(z1 * x) <= 1.0


def test_vectorized_shapes():
    xs = np.linspace(0, 3, 7)
    assert overlap(1.0, 2.0, xs).shape == (7,)
    assert np.allclose(boys0(xs), [boys0(float(x)) for x in xs])


def test_eri_special_cases():
    c = np.array([0.3, -1.0, 2.0])
    z = 1.4
    assert eri_four_center(c, c, c, c, z, z, z, z) == pytest.approx(coulomb_pair(z, 0.0), rel=1e-14)
    A, B = np.zeros(3), np.array([1.1, 0.4, -0.2])
    r = float(np.linalg.norm(A - B))
    assert eri_four_center(A, B, B, A, z, z, z, z) == pytest.approx(coulomb_pair(z, r), rel=1e-14)
    assert eri_four_center(A, B, A, B, z, z, z, z) == pytest.approx(exchange_pair(z, r), rel=1e-14)
    assert eri_four_center(A, A, A, B, z, z, z, z) == pytest.approx(other_pair(z, r), rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=12, max_size=12), st.lists(exps, min_size=4, max_size=4), st.floats(0, 2 * math.pi))
def test_eri_symmetries(xs, zs, theta):
    c = np.array(xs).reshape(4, 3)
    z = zs
    v = eri_four_center(*c, *z)
    assert eri_four_center(c[1], c[0], c[3], c[2], z[1], z[0], z[3], z[2]) == pytest.approx(v, rel=1e-12, abs=1e-300)
    assert eri_four_center(c[3], c[2], c[1], c[0], z[3], z[2], z[1], z[0]) == pytest.approx(v, rel=1e-12, abs=1e-300)
    assert eri_four_center(c[3], c[1], c[2], c[0], z[3], z[1], z[2], z[0]) == pytest.approx(v, rel=1e-12, abs=1e-300)
    Rz = np.array([[math.cos(theta), -math.sin(theta), 0], [math.sin(theta), math.cos(theta), 0], [0, 0, 1]])
    moved = c @ Rz.T + np.array([5.0, -3.0, 1.0])
    assert eri_four_center(*moved, *z) == pytest.approx(v, rel=1e-11, abs=1e-300)


def test_single_edge_tensors():
    alpha, beta, gamma = 1.0, 2.0, 1.7
    lay = place_centers(path_graph(2), gamma, 1e5, alpha, beta)
    prim = assemble_primitive_tensors(lay)
    off = np.abs(prim.S - np.eye(4))
    iu = np.argwhere(np.triu(off > 1e-12, 1))
    assert len(iu) == 1
    a, b = iu[0]
    assert prim.S[a, b] == pytest.approx(math.exp(-alpha * gamma**2 / 2), rel=1e-14)
    assert set(np.round(np.diag(prim.T), 14)) == {1.5 * alpha, 1.5 * beta}
    assert prim.U[a, b, b, a] == pytest.approx(coulomb_pair(alpha, gamma), rel=1e-14)
    assert prim.symmetry_defect() == 0.0


def test_primitive_tensors_against_direct_integrals():
    # small Gamma so that every quadruple interacts
    lay = place_centers(path_graph(3, d=2), 1.2, 2.0, 1.0, 1.5)
    prim = assemble_primitive_tensors(lay)
    C, z = lay.centers, lay.exponents
    N = lay.N
    D = lay.distance_matrix()
    for a, b in itertools.product(range(N), repeat=2):
        assert prim.S[a, b] == pytest.approx(overlap(z[a], z[b], D[a, b]), rel=1e-13, abs=1e-300)
        assert prim.T[a, b] == pytest.approx(kinetic(z[a], z[b], D[a, b]), rel=1e-12, abs=1e-300)
    rng = np.random.default_rng(0)
    for a, b, c, d in rng.integers(0, N, size=(300, 4)):
        ref = eri_four_center(C[a], C[b], C[c], C[d], z[a], z[b], z[c], z[d])
        assert prim.U[a, b, c, d] == pytest.approx(ref, rel=1e-12, abs=1e-300)
    assert prim.symmetry_defect() < 1e-15


def test_primitive_cap():
    lay = place_centers(complete_graph(4), 1.0, 1e3, 1.0, 1.0)
    with pytest.raises(CapExceeded):
        assemble_primitive_tensors(lay, cap=10)


def test_compose_far_apart():
    alpha, beta = 1.3, 2.1
    # same-vertex primitives still repel at ~1/Gamma, so push them very far
    lay = place_centers(empty_graph(3, d=2), 1.0, 1e14, alpha, beta)
    comp = compose_tensors(assemble_primitive_tensors(lay), lay)
    assert comp.level == "composite" and comp.N == 3
    assert np.allclose(comp.S, np.eye(3), atol=1e-12)
    assert np.allclose(np.diag(comp.T), 0.75 * (alpha + beta), rtol=1e-14)
    d = 2
    ref = 0.25 * coulomb_pair(beta, 0.0) + coulomb_pair(alpha, 0.0) / (4 * d)
    assert comp.U[0, 0, 0, 0] == pytest.approx(ref, abs=1e-12)
    near = place_centers(empty_graph(3, d=2), 1.0, 1e4, alpha, beta)
    u = compose_tensors(assemble_primitive_tensors(near), near).U[0, 0, 0, 0]
    assert 0 < u - ref <= 2 * beta**3 / 1e4


def test_compose_matches_coefficient_contraction():
    lay = place_centers(complete_graph(3), 1.0, 3.0, 1.0, 1.0)
    prim = assemble_primitive_tensors(lay)
    comp = compose_tensors(prim, lay)
    C = lay.coefficient_matrix()
    assert np.allclose(comp.T, C.T @ prim.T @ C, atol=1e-15)
    U = np.einsum("abcd,ai,bj,ck,dl->ijkl", prim.U, C, C, C, C)
    assert np.allclose(comp.U, U, atol=1e-14)


def test_tensor_shape_validation():
    with pytest.raises(ValidationError):
        CoefficientTensors(np.eye(2), np.eye(3), np.zeros((2,) * 4), "primitive")
    with pytest.raises(ValidationError):
        CoefficientTensors(np.eye(2), np.eye(2), np.zeros((2,) * 4), "atomic")
