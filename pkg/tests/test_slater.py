import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import has_independent_set

from esreduce.errors import CapExceeded, ValidationError
from esreduce.fockspace import (
    SecondQuantizedHamiltonian,
    build_hubbard,
    diagonal_energies,
    mode,
    sector_basis,
    sector_matrix,
)
from esreduce.instances import HubbardInstance, WeightedGraph, complete_graph, cycle_graph, empty_graph, path_graph
from esreduce.slater import (
    SlaterState,
    classical_ground,
    gadget_hamiltonian,
    independent_set_check,
    local_search_hf,
    slater_energy,
    slater_vector,
)


def test_single_electron():
    t = np.array([[1.5, 0.3], [0.3, -0.2]])
    h = SecondQuantizedHamiltonian(2, t)
    assert slater_energy(h, SlaterState.from_occupation([0], 2)) == pytest.approx(1.5)


def test_non_orthonormal_rejected():
    with pytest.raises(ValidationError):
        SlaterState(np.array([[1.0, 0.0], [1.0, 0.0]]))
    with pytest.raises(ValidationError):
        slater_energy(SecondQuantizedHamiltonian.zero(3), SlaterState.from_occupation([0], 2))


def test_slater_vector_normalized():
    st_ = SlaterState.random(3, 6, np.random.default_rng(0))
    v = slater_vector(st_)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_random_state_on_two_site_hubbard(seed):
    rng = np.random.default_rng(seed)
    h = build_hubbard(HubbardInstance(path_graph(2, -1.3), 5.0, 2))
    for eta in (1, 2, 3):
        st_ = SlaterState.random(eta, 4, rng)
        v = slater_vector(st_)
        exact = float(v @ sector_matrix(h, eta) @ v)
        assert slater_energy(h, st_) == pytest.approx(exact, abs=1e-10)


def test_occupation_state_on_classical():
    h, rc = gadget_hamiltonian(path_graph(3), beta=4.0)
    for modes in itertools.combinations(range(6), 3):
        s = sum(1 << m for m in modes)
        e = slater_energy(h, SlaterState.from_occupation(modes, 6))
        assert e == pytest.approx(diagonal_energies(h, np.array([s]))[0], rel=1e-13, abs=1e-15)
    both = SlaterState.from_occupation([mode(1, 1), mode(1, -1)], 6)
    assert slater_energy(h, both) == pytest.approx(rc.c_U)


def test_classical_ground_examples():
    h, rc = gadget_hamiltonian(path_graph(3))
    e, occ = classical_ground(h, 2)
    assert e == 0.0
    assert sorted({m // 2 + 1 for m, x in enumerate(occ) if x}) == [1, 3]
    h, rc = gadget_hamiltonian(complete_graph(3))
    e, _ = classical_ground(h, 2)
    assert e == pytest.approx(rc.u_class_2, rel=1e-14)
    assert classical_ground(h, 0)[0] == 0.0


def test_classical_ground_errors():
    h = build_hubbard(HubbardInstance(path_graph(2, 1.0), 1.0, 2))
    with pytest.raises(ValidationError):
        classical_ground(h, 2)
    diag = SecondQuantizedHamiltonian(40, np.eye(40))
    with pytest.raises(CapExceeded):
        classical_ground(diag, 20)


def test_independent_set_examples():
    assert independent_set_check(cycle_graph(5), 2).exists
    res = independent_set_check(complete_graph(4), 2)
    assert not res.exists and res.energy >= res.u2
    assert independent_set_check(empty_graph(4, d=1), 4).exists
    assert independent_set_check(complete_graph(4), 0).exists
    with pytest.raises(ValidationError):
        independent_set_check(cycle_graph(5), 6)


@st.composite
def graphs(draw):
    n = draw(st.integers(2, 6))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = sorted(draw(st.lists(st.sampled_from(pairs), unique=True)))
    deg = [0] * (n + 1)
    for i, j in chosen:
        deg[i] += 1
        deg[j] += 1
    return WeightedGraph(n, tuple((i, j, 1.0) for i, j in chosen), max(1, max(deg)))


@settings(max_examples=40, deadline=None)
@given(graphs(), st.data())
def test_independent_set_matches_brute_force(g, data):
    k = data.draw(st.integers(0, g.n))
    res = independent_set_check(g, k)
    assert res.exists == has_independent_set(g.n, g.edges, k)
    if res.exists:
        assert res.energy == 0.0 and len(res.vertices) == k
        assert not any((i, j) in set(g.edge_pairs()) for i, j in itertools.combinations(res.vertices, 2))
    else:
        assert res.energy >= res.u2 * (1 - 1e-12)


def test_local_search_is_variational():
    h = build_hubbard(HubbardInstance(path_graph(3, -1.0), 4.0, 3))
    e_hf, st_ = local_search_hf(h, 3, restarts=2, steps=100)
    exact = np.linalg.eigvalsh(sector_matrix(h, 3))[0]
    assert e_hf >= exact - 1e-10
    assert e_hf == pytest.approx(slater_energy(h, st_))


def test_result_dict():
    d = independent_set_check(cycle_graph(5), 2).to_dict()
    assert d["is_independent_set"] is True and len(d["occupation"]) == 10
    assert sector_basis(2, 1).tolist() == [1, 2]
