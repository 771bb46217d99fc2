from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sethlab import oracles as o
from sethlab.errors import CapacityError, ParameterError, StructuralError
from sethlab.instances import CnfFormula, Gate, Graph, SetSystem, SubsetSumInstance, VspCircuit, popcount

from .test_instances import formulas, set_systems


def cnf(n, clauses):
    return CnfFormula.from_dimacs(n, clauses)


def test_count_satisfying_examples():
    assert o.count_satisfying(cnf(3, [[1, 2, 3]])) == 7
    assert o.count_satisfying(cnf(2, [])) == 4
    assert o.count_satisfying(cnf(1, [[1], [-1]])) == 0


def test_cap_enforced(monkeypatch):
    with pytest.raises(CapacityError):
        o.count_satisfying(cnf(5, []), cap=4)
    monkeypatch.setenv("SETHLAB_CAP", "3")
    with pytest.raises(CapacityError):
        o.count_satisfying(cnf(4, []))


def test_nae_examples():
    f = cnf(2, [[1, 2]])
    assert o.count_nae_assignments(f) == 2
    assert o.exists_nae_assignment(f)
    assert o.count_nae_assignments(cnf(1, [[1]])) == 0


def test_hitting_set_counts():
    s = SetSystem.from_sets(2, [[0], [1]])
    assert o.count_hitting_sets_by_size(s) == {2: 1}
    assert o.count_hitting_sets_by_size(SetSystem(2)) == {0: 1, 1: 2, 2: 1}
    assert o.min_hitting_set_size(s) == 2


def test_set_cover_counts_and_dp():
    s = SetSystem.from_sets(2, [[0], [1], [0, 1]])
    assert o.count_set_covers_by_size(s) == {1: 1, 2: 3, 3: 1}
    assert o.min_set_cover_dp(s) == 1
    assert o.min_set_cover_dp(SetSystem.from_sets(2, [[0]])) is None
    assert [o.count_set_covers_exact_size(s, j) for j in range(4)] == [0, 1, 3, 1]


def test_set_splittings():
    assert o.count_set_splittings(SetSystem.from_sets(2, [[0, 1]])) == 2
    assert o.count_set_splittings(SetSystem(2)) == 4
    assert not o.exists_set_splitting(SetSystem.from_sets(1, [[0]]))


def test_partitionings():
    s = SetSystem.from_sets(2, [[0], [1], [0, 1]])
    for method in ("brute", "dp"):
        assert o.count_set_partitionings_by_size(s, method=method) == {1: 1, 2: 1}


def test_graph_counters_on_a_path():
    path = Graph(3, ((0, 1), (1, 2)), (0, 2))
    assert o.count_steiner_sets_by_size(path) == {3: 1}
    assert o.count_cvc_by_size(path) == {1: 1, 2: 2, 3: 1}


def test_bipartite_independent_sets():
    k22 = Graph(4, ((0, 2), (0, 3), (1, 2), (1, 3)), None, 2)
    assert o.count_bipartite_independent_sets(k22) == 7
    assert o.parity_bipartite_independent_sets(k22) == 1
    with pytest.raises(ParameterError):
        o.count_bipartite_independent_sets(Graph(2, ((0, 1),)))


def test_subset_sum_examples():
    assert o.subset_sum_decide(SubsetSumInstance((3, 5), 8))
    assert not o.subset_sum_decide(SubsetSumInstance((3, 5), 4), "brute")
    assert o.subset_sum_decide(SubsetSumInstance((), 0))
    with pytest.raises(CapacityError):
        o.subset_sum_decide(SubsetSumInstance((1,), 100), table_cap=10)


def test_circuit_count_and_cycle():
    and_gate = VspCircuit((Gate("INPUT"), Gate("INPUT"), Gate("AND", (0, 1))), 2)
    assert o.circuit_count_sat(and_gate) == 1
    cyclic = VspCircuit((Gate("INPUT"), Gate("AND", (0, 2)), Gate("NOT", (1,))), 2)
    with pytest.raises(StructuralError):
        o.circuit_count_sat(cyclic)


def test_covering_q_families():
    # the three perfect matchings of K4 among 2-subsets of a 4-set
    assert o.count_covering_q_families(4, 2, 2) == 3
    assert o.count_covering_q_families(0, 3, 0) == 1


# --- properties against independent brute force ------------------------------


def _naive_covers(system):
    counts = {}
    for r in range(system.num_sets + 1):
        for fam in combinations(system.sets, r):
            u = 0
            for s in fam:
                u |= s
            if u == system.universe_mask:
                counts[r] = counts.get(r, 0) + 1
    return counts


@settings(max_examples=60, deadline=None)
@given(set_systems(max_n=6))
def test_cover_counter_matches_naive(system):
    counts = o.count_set_covers_by_size(system)
    assert counts == _naive_covers(system)
    assert o.min_set_cover_dp(system) == counts.minimum()
    for j in range(system.num_sets + 1):
        assert o.count_set_covers_exact_size(system, j) == counts[j]


@settings(max_examples=60, deadline=None)
@given(set_systems(max_n=6))
def test_partition_dp_matches_brute(system):
    assert o.count_set_partitionings_by_size(system, method="dp") == o.count_set_partitionings_by_size(
        system, method="brute"
    )


@settings(max_examples=60, deadline=None)
@given(formulas())
def test_sat_count_matches_scalar_loop(formula):
    expect = sum(formula.satisfied_by(a) for a in range(1 << formula.num_vars))
    assert o.count_satisfying(formula) == expect


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 40), max_size=10), st.integers(0, 150))
def test_subset_sum_dp_equals_brute(items, target):
    inst = SubsetSumInstance(tuple(items), target)
    assert o.subset_sum_decide(inst, "dp") == o.subset_sum_decide(inst, "brute")


@settings(max_examples=40, deadline=None)
@given(set_systems(max_n=6))
def test_hitting_sets_monotone_in_size(system):
    # supersets of hitting sets hit too, so size-s hitters lift to size s+1
    counts = o.count_hitting_sets_by_size(system)
    n = system.universe_size
    for s in range(n):
        lifted = counts[s] * (n - s)
        assert counts[s + 1] * (s + 1) >= lifted


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.floats(0, 1), st.integers(0, 10**6))
def test_bipartite_is_formula_matches_plain(a, b, p, seed):
    from sethlab.instances import random_bipartite_graph

    g = random_bipartite_graph(a, b, p, seed)
    assert o.count_bipartite_independent_sets(g) == o.count_independent_sets(g)


def test_popcount_helper():
    assert popcount(0b1011) == 3
