from math import comb

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sethlab import oracles as o
from sethlab.errors import ParameterError
from sethlab.instances import CnfFormula, Gate, SetSystem, VspCircuit, random_cnf
from sethlab.reductions_branch import (
    HittingSetInstance,
    cnf_to_hitting_set,
    cnf_to_parity_hitting_set,
    cnf_to_vsp_circuit,
    compositions,
    encode_assignment,
    hitting_set_to_monotone_cnf,
    hitting_set_to_set_splitting,
    make_block_code,
    nae_to_cnf,
    pad_formula,
    set_splitting_to_nae_cnf,
    splitting_compositions,
    verify_vsp_labeling,
)

from .test_instances import formulas, set_systems

ALL_SIGNS = [[s1 * 1, s2 * 2, s3 * 3] for s1 in (1, -1) for s2 in (1, -1) for s3 in (1, -1)]


def test_block_code_p3():
    code = make_block_code(3)
    assert code.p_prime == 7 and code.half == 4
    assert comb(7, 4) >= 8
    assert code.encode(0) == 0b1111
    assert all(code.decode(code.encode(v)) == v for v in range(8))


def test_block_code_p5_and_errors():
    assert make_block_code(5).p_prime == 11
    assert comb(11, 6) >= 32
    for bad in (1, 2, 4):
        with pytest.raises(ParameterError):
            make_block_code(bad)


@pytest.mark.parametrize(
    "clauses,hits",
    [([], 8), ([[1, 2, 3]], 7), (ALL_SIGNS, 0)],
)
def test_hitting_set_examples(clauses, hits):
    f = CnfFormula.from_dimacs(3, clauses)
    inst = cnf_to_hitting_set(f, 3)
    assert inst.system.universe_size == 7 and inst.target == 4
    assert o.count_hitting_sets_by_size(inst.system)[4] == hits


@pytest.mark.parametrize("clauses,parity", [([], 0), ([[1, 2, 3]], 1)])
def test_parity_hitting_set_examples(clauses, parity):
    s = cnf_to_parity_hitting_set(CnfFormula.from_dimacs(3, clauses), 3)
    assert s.universe_size == 8
    assert o.count_hitting_sets_by_size(s).parity() == parity


def test_satisfying_assignments_encode_to_hitting_sets():
    f = random_cnf(6, 5, 3, 11)
    inst = cnf_to_hitting_set(f, 3)
    code = make_block_code(3)
    for a in range(64):
        h = encode_assignment(f, code, a)
        hits = all(h & s for s in inst.system.sets)
        assert hits == f.satisfied_by(a)


def test_divisibility():
    f = CnfFormula.from_dimacs(4, [[1, -4]])
    with pytest.raises(ParameterError):
        cnf_to_hitting_set(f, 3)
    padded, extra = pad_formula(f, 3)
    assert extra == 2 and padded.num_vars == 6
    assert o.count_satisfying(padded) == o.count_satisfying(f)
    inst = cnf_to_hitting_set(f, 3, pad=True)
    assert o.count_hitting_sets_by_size(inst.system)[inst.target] == o.count_satisfying(f)


@settings(max_examples=25, deadline=None)
@given(formulas())
def test_count_and_parity_preserved(formula):
    assume(formula.num_vars <= 6)
    f = CnfFormula(formula.num_vars, formula.clauses[:4])
    inst = cnf_to_hitting_set(f, 3, pad=True)
    sat = o.count_satisfying(f)
    assert o.count_hitting_sets_by_size(inst.system)[inst.target] == sat
    k = max(1, f.width)
    assert inst.system.width <= 7 * k
    assert o.count_hitting_sets_by_size(cnf_to_parity_hitting_set(f, 3, pad=True)).parity() == sat & 1


# --- splitting chain ---------------------------------------------------------


def test_compositions_lexicographic():
    assert list(compositions(2, 2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert list(compositions(5, 2, 2)) == []
    assert list(compositions(0, 0, 3)) == [()]


def test_splitting_examples():
    f = SetSystem.from_sets(2, [[0], [1]])
    yes = list(hitting_set_to_set_splitting(HittingSetInstance(f, 2), 2))
    assert len(yes) == 1 and yes[0].universe_size == 4
    assert o.exists_set_splitting(yes[0])
    no = list(hitting_set_to_set_splitting(HittingSetInstance(f, 1), 2))
    assert len(no) == 1 and not any(o.exists_set_splitting(s) for s in no)
    empty = list(hitting_set_to_set_splitting(HittingSetInstance(SetSystem(2), 0), 2))
    assert o.exists_set_splitting(empty[0])


def test_splitting_size_bounds():
    f = SetSystem.from_sets(4, [[0, 1, 3], [2]])
    inst = HittingSetInstance(f, 2)
    outs = list(hitting_set_to_set_splitting(inst, 2))
    assert len(outs) == len(splitting_compositions(inst, 2)) == 3
    assert all(s.width <= max(2 + 1, f.width + 1) for s in outs)


def test_target_above_universe():
    with pytest.raises(ParameterError):
        HittingSetInstance(SetSystem(2), 3)


@settings(max_examples=40, deadline=None)
@given(set_systems(max_n=6), st.sampled_from([1, 2]), st.data())
def test_splitting_decision(system, p, data):
    t = data.draw(st.integers(0, system.universe_size))
    m = o.min_hitting_set_size(system)
    outs = hitting_set_to_set_splitting(HittingSetInstance(system, t), p)
    assert any(o.exists_set_splitting(s) for s in outs) == (m is not None and m <= t)


def test_nae_examples():
    f = set_splitting_to_nae_cnf(SetSystem.from_sets(2, [[0, 1]]))
    assert f.dimacs_clauses() == [[1, 2]]
    assert o.count_nae_assignments(f) == 2 == o.count_set_splittings(SetSystem.from_sets(2, [[0, 1]]))
    assert o.count_nae_assignments(set_splitting_to_nae_cnf(SetSystem(2))) == 4
    single = SetSystem.from_sets(1, [[0]])
    assert o.count_nae_assignments(set_splitting_to_nae_cnf(single)) == 0 == o.count_set_splittings(single)


def test_nae_to_cnf_examples():
    f = nae_to_cnf(CnfFormula.from_dimacs(2, [[1, 2]]))
    assert f.dimacs_clauses() == [[-1, -2], [1, 2]]
    assert o.count_satisfying(f) == 2
    assert o.count_satisfying(nae_to_cnf(CnfFormula.from_dimacs(1, [[1]]))) == 0
    assert nae_to_cnf(CnfFormula(2)).num_clauses == 0


@settings(max_examples=40, deadline=None)
@given(formulas())
def test_nae_to_cnf_same_assignments(formula):
    g = nae_to_cnf(formula)
    assert g.num_clauses == 2 * formula.num_clauses
    assert o.count_satisfying(g) == o.count_nae_assignments(formula)


@settings(max_examples=40, deadline=None)
@given(set_systems(max_n=7))
def test_monotone_cnf_parsimonious(system):
    f = hitting_set_to_monotone_cnf(system)
    assert o.count_satisfying(f) == o.count_hitting_sets_by_size(system).total()
    assert o.count_nae_assignments(set_splitting_to_nae_cnf(system)) == o.count_set_splittings(system)


def test_monotone_examples():
    assert o.count_satisfying(hitting_set_to_monotone_cnf(SetSystem.from_sets(2, [[0], [1]]))) == 1
    assert o.count_satisfying(hitting_set_to_monotone_cnf(SetSystem(2))) == 4
    assert o.count_satisfying(hitting_set_to_monotone_cnf(SetSystem.from_sets(2, [[0, 1]]))) == 3


# --- series-parallel circuits ------------------------------------------------


def test_vsp_single_clause():
    c = cnf_to_vsp_circuit(CnfFormula.from_dimacs(2, [[1, 2]]))
    assert o.circuit_count_sat(c) == 3
    assert verify_vsp_labeling(c)


def test_vsp_empty_formula_is_true():
    c = cnf_to_vsp_circuit(CnfFormula(2))
    assert o.circuit_count_sat(c) == 4
    assert verify_vsp_labeling(c)


def test_vsp_wire_bound():
    f = random_cnf(6, 8, 3, 5)
    c = cnf_to_vsp_circuit(f)
    assert c.wire_count <= 4 * 3 * 8
    assert o.circuit_count_sat(c) == o.count_satisfying(f)


def test_labeling_checker():
    ok = VspCircuit((Gate("INPUT"), Gate("INPUT"), Gate("AND", (0, 1))), 2, (0, 0, 1))
    assert verify_vsp_labeling(ok)
    # wires 0->2 and 1->3 have labels 0 < 1 < 2 < 3, so they interleave
    gates = (Gate("INPUT"), Gate("NOT", (0,)), Gate("NOT", (0,)), Gate("AND", (1, 2)))
    assert not verify_vsp_labeling(VspCircuit(gates, 3, (0, 1, 2, 3)))
    # same dag, but a label that is not monotone along wire 1->3
    assert not verify_vsp_labeling(VspCircuit(gates, 3, (0, 1, 2, 1)))
    with pytest.raises(ParameterError):
        verify_vsp_labeling(VspCircuit((Gate("INPUT"),), 0))


@settings(max_examples=30, deadline=None)
@given(formulas())
def test_vsp_preserves_count(formula):
    c = cnf_to_vsp_circuit(formula)
    assert o.circuit_count_sat(c) == o.count_satisfying(formula)
    assert verify_vsp_labeling(c)
    assert all(len(g.inputs) <= 2 for g in c.gates)
    assert c.wire_count <= 4 * max(1, formula.width) * formula.num_clauses
