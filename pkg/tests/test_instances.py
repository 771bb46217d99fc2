import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sethlab.errors import ParameterError, ParseError
from sethlab.oracles import min_set_cover_dp
from sethlab.instances import (
    CnfFormula,
    FORMATS,
    Gate,
    Graph,
    Literal,
    SetSystem,
    SizeIndexedCounts,
    SubsetSumInstance,
    VspCircuit,
    parse_instance,
    random_cnf,
    random_coverable_set_system,
    random_instance,
    serialize_instance,
)


# --- types -------------------------------------------------------------------


def test_literal_dimacs_round_trip():
    for lit in (1, -1, 7, -12):
        assert Literal.from_dimacs(lit).to_dimacs() == lit
    assert -Literal(3, True) == Literal(3, False)
    with pytest.raises(ParameterError):
        Literal.from_dimacs(0)


def test_cnf_canonical_order_and_satisfaction():
    f = CnfFormula.from_dimacs(3, [[3, -1], [2]])
    assert f.dimacs_clauses() == [[-1, 3], [2]]
    assert f.width == 2
    # x1=0, x2=1 satisfies both clauses
    assert f.satisfied_by(0b010)
    assert not f.satisfied_by(0b001)


def test_cnf_rejects_bad_clauses():
    with pytest.raises(ParameterError):
        CnfFormula.from_dimacs(2, [[1, -1]])
    with pytest.raises(ParameterError):
        CnfFormula.from_dimacs(2, [[3]])


def test_setsystem_sorted_and_duplicates():
    s = SetSystem.from_sets(3, [[2], [0, 1]])
    assert s.sets == (0b011, 0b100)
    assert serialize_instance(s).splitlines()[1:3] == ["0 1", "2"]
    with pytest.raises(ParameterError):
        SetSystem.from_sets(2, [[0], [0]])
    m = SetSystem.from_sets(2, [[0], [0]], multiset=True)
    assert m.multiplicities() == {1: 2}


def test_graph_validation():
    g = Graph(4, ((2, 0), (1, 3)), None, 2)
    assert g.edges == ((0, 2), (1, 3))
    with pytest.raises(ParameterError):
        Graph(2, ((0, 0),))
    with pytest.raises(ParameterError):
        Graph(3, ((0, 1),), None, 2)  # edge inside side A


def test_subset_sum_format():
    text = serialize_instance(SubsetSumInstance((3, 5), 8))
    assert text.splitlines() == ["3", "5", "t 8"]


def test_circuit_wire_count():
    c = VspCircuit((Gate("INPUT"), Gate("INPUT"), Gate("AND", (0, 1))), 2, (0, 0, 1))
    assert c.wire_count == 2
    assert c.num_inputs == 2
    with pytest.raises(ParameterError):
        VspCircuit((Gate("INPUT"), Gate("NOT", (0, 0))), 1)


def test_size_indexed_counts():
    c = SizeIndexedCounts({2: 3, 1: 1, 5: 0}, 5)
    assert c[1] == 1 and c[4] == 0 and 5 not in c
    assert c.total() == 4 and c.parity() == 0
    assert c.minimum() == 1
    assert c == {1: 1, 2: 3}


# --- formats -----------------------------------------------------------------


def test_dimacs_parse_with_comments_and_density():
    text = "c a comment\np cnf 3 2\nc density 2/3\n1 -2 0\n3\n0\n"
    f = parse_instance("dimacs-cnf", text)
    assert f.num_vars == 3 and f.num_clauses == 2
    assert parse_instance("dimacs-cnf", serialize_instance(f)) == f


@pytest.mark.parametrize(
    "fmt,text,line",
    [
        ("dimacs-cnf", "p cnf 2 1\n1 x 0\n", 2),
        ("dimacs-cnf", "p cnf 2 2\n1 0\n", None),
        ("setsys", "p setsys 2 1\n0 5\n", 2),
        ("setsys", "p setsys 3 1\nsize-bound 1\n0 1\n", None),
        ("graph", "p graph 2 1\n0 2\n", 2),
        ("subsetsum", "3\n-1\nt 2\n", 2),
        ("circuit", "0 INPUT\n1 FOO 0\nout 1\n", 2),
    ],
)
def test_parse_errors_carry_line_numbers(fmt, text, line):
    with pytest.raises(ParseError) as info:
        parse_instance(fmt, text)
    if line is not None:
        assert f"line {line}" in str(info.value)


def test_unknown_format():
    with pytest.raises(ParameterError):
        parse_instance("xml", "")


def test_empty_set_line_round_trips():
    s = SetSystem.from_sets(2, [[], [0, 1]])
    assert parse_instance("setsys", serialize_instance(s)) == s


def test_bytes_input_accepted():
    assert parse_instance("subsetsum", b"4\nt 4\n") == SubsetSumInstance((4,), 4)


# --- generators --------------------------------------------------------------


def test_random_instance_is_deterministic():
    a = random_instance("cnf", {"n": 6, "m": 8, "k": 3, "seed": 1})
    b = random_instance("cnf", {"n": 6, "m": 8, "k": 3, "seed": 1})
    assert a == b


def test_random_setsys_respects_width():
    s = random_instance("setsys", {"n": 8, "m": 16, "k": 3, "seed": 7})
    assert s.num_sets == 16 and s.width <= 3


def test_coverable_generator_plants_a_cover():
    for seed in range(20):
        s = random_coverable_set_system(7, 4, 3, seed)
        assert s.width <= 3 and s.num_sets >= 4
        assert min_set_cover_dp(s) is not None


def test_random_bipartite_edges_cross():
    g = random_instance("graph-bipartite", {"a": 4, "b": 5, "p": 0.5, "seed": 2})
    assert all(u < 4 <= v for u, v in g.edges)


def test_infeasible_params():
    with pytest.raises(ParameterError):
        random_instance("setsys", {"n": 2, "m": 1, "k": 3, "seed": 0})
    with pytest.raises(ParameterError):
        random_instance("nope", {"n": 2, "m": 1, "k": 1})


@st.composite
def set_systems(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    masks = draw(st.sets(st.integers(0, (1 << n) - 1), max_size=10))
    return SetSystem(n, tuple(masks))


@st.composite
def formulas(draw):
    n = draw(st.integers(1, 8))
    lit = st.tuples(st.integers(0, n - 1), st.booleans())
    clauses = draw(st.lists(st.lists(lit, min_size=0, max_size=3, unique_by=lambda x: x[0]), max_size=8))
    return CnfFormula(n, tuple(tuple(Literal(v, s) for v, s in c) for c in clauses))


@settings(max_examples=60, deadline=None)
@given(set_systems())
def test_setsys_round_trip(system):
    text = serialize_instance(system)
    assert parse_instance("setsys", text) == system
    assert serialize_instance(parse_instance("setsys", text)) == text


@settings(max_examples=60, deadline=None)
@given(formulas())
def test_cnf_round_trip(formula):
    text = serialize_instance(formula)
    assert parse_instance("dimacs-cnf", text) == formula
    assert serialize_instance(parse_instance("dimacs-cnf", text)) == text


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 10**15), max_size=8), st.integers(0, 10**16))
def test_subsetsum_round_trip(items, target):
    inst = SubsetSumInstance(tuple(items), target)
    assert parse_instance("subsetsum", serialize_instance(inst)) == inst


def test_formats_cover_every_type():
    assert set(FORMATS) == {"dimacs-cnf", "setsys", "graph", "subsetsum", "circuit"}
    assert random_cnf(3, 0, 1, 0).num_clauses == 0
