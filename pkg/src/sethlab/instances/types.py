"""In-memory instance types.

All instances are immutable and canonical: constructors sort their contents
so that two equal instances always serialize to the same bytes.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple

from ..errors import ParameterError


def popcount(x: int) -> int:
    return x.bit_count()


def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        mask |= 1 << e
    return mask


def elements_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class Literal(NamedTuple):
    """A variable (0-based) with a sign."""

    var: int
    positive: bool = True

    @classmethod
    def from_dimacs(cls, lit: int) -> Literal:
        if lit == 0:
            raise ParameterError("0 is not a DIMACS literal")
        return cls(abs(lit) - 1, lit > 0)

    def to_dimacs(self) -> int:
        return self.var + 1 if self.positive else -(self.var + 1)

    def __neg__(self) -> Literal:
        return Literal(self.var, not self.positive)


def _clause_key(clause):
    return tuple((lit.var, lit.positive) for lit in clause)


@dataclass(frozen=True)
class CnfFormula:
    """CNF over ``num_vars`` variables; clauses are tuples of :class:`Literal`.

    Clauses may be empty (unsatisfiable) and may repeat, but a single clause
    never mentions a variable twice.
    """

    num_vars: int
    clauses: tuple[tuple[Literal, ...], ...] = ()
    density: Fraction | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.num_vars < 0:
            raise ParameterError("num_vars must be nonnegative")
        canon = []
        for clause in self.clauses:
            lits = [lit if isinstance(lit, Literal) else Literal(*lit) for lit in clause]
            seen = set()
            for lit in lits:
                if not 0 <= lit.var < self.num_vars:
                    raise ParameterError(f"variable {lit.var} outside [0, {self.num_vars})")
                if lit.var in seen:
                    raise ParameterError(f"variable {lit.var} occurs twice in one clause")
                seen.add(lit.var)
            canon.append(tuple(sorted(lits, key=lambda lit: (lit.var, lit.positive))))
        canon.sort(key=_clause_key)
        object.__setattr__(self, "clauses", tuple(canon))
        if self.density is not None:
            object.__setattr__(self, "density", Fraction(self.density))

    @classmethod
    def from_dimacs(cls, num_vars: int, clauses: Iterable[Iterable[int]], density=None) -> CnfFormula:
        return cls(
            num_vars,
            tuple(tuple(Literal.from_dimacs(x) for x in c) for c in clauses),
            density,
        )

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def width(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    def dimacs_clauses(self) -> list[list[int]]:
        return [[lit.to_dimacs() for lit in c] for c in self.clauses]

    @cached_property
    def clause_masks(self) -> tuple[tuple[int, int], ...]:
        """Per clause, the (positive-variable mask, negative-variable mask)."""
        out = []
        for clause in self.clauses:
            pos = neg = 0
            for lit in clause:
                if lit.positive:
                    pos |= 1 << lit.var
                else:
                    neg |= 1 << lit.var
            out.append((pos, neg))
        return tuple(out)

    def satisfied_by(self, assignment: int) -> bool:
        """``assignment`` is the set of true variables as a bit mask."""
        full = (1 << self.num_vars) - 1
        return all((assignment & pos) or (~assignment & full & neg) for pos, neg in self.clause_masks)


@dataclass(frozen=True)
class SetSystem:
    """A family of subsets of ``range(universe_size)`` stored as bit masks.

    Sets are kept sorted by mask value. Duplicates are rejected unless the
    system is flagged as a multiset, in which case each copy is a distinct
    member.
    """

    universe_size: int
    sets: tuple[int, ...] = ()
    multiset: bool = False

    def __post_init__(self):
        if self.universe_size < 0:
            raise ParameterError("universe_size must be nonnegative")
        limit = 1 << self.universe_size
        masks = sorted(int(s) for s in self.sets)
        for s in masks:
            if s < 0 or s >= limit:
                raise ParameterError(f"set mask {s:#x} has elements outside [0, {self.universe_size})")
        if not self.multiset:
            for a, b in zip(masks, masks[1:]):
                if a == b:
                    raise ParameterError(f"duplicate set {list(elements_of(a))} in a non-multiset system")
        object.__setattr__(self, "sets", tuple(masks))

    @classmethod
    def from_sets(cls, universe_size: int, sets: Iterable[Iterable[int]], multiset=False) -> SetSystem:
        return cls(universe_size, tuple(mask_of(s) for s in sets), multiset)

    @property
    def num_sets(self) -> int:
        return len(self.sets)

    @property
    def width(self) -> int:
        return max((popcount(s) for s in self.sets), default=0)

    @property
    def density(self) -> Fraction | None:
        if self.universe_size == 0:
            return None
        return Fraction(self.num_sets, self.universe_size)

    @property
    def universe_mask(self) -> int:
        return (1 << self.universe_size) - 1

    def as_lists(self) -> list[list[int]]:
        return [list(elements_of(s)) for s in self.sets]

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for s in self.sets:
            out[s] = out.get(s, 0) + 1
        return out


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on ``range(num_vertices)``.

    ``bipartition = a`` means vertices ``[0, a)`` form side A and the rest
    side B; every edge must then cross the split.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...] = ()
    terminals: tuple[int, ...] | None = None
    bipartition: int | None = None

    def __post_init__(self):
        n = self.num_vertices
        if n < 0:
            raise ParameterError("num_vertices must be nonnegative")
        canon = set()
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
            if u == v:
                raise ParameterError(f"self-loop on vertex {u}")
            e = (min(u, v), max(u, v))
            if e in canon:
                raise ParameterError(f"duplicate edge {e}")
            canon.add(e)
        object.__setattr__(self, "edges", tuple(sorted(canon)))
        if self.terminals is not None:
            ts = sorted(set(self.terminals))
            if ts and not (0 <= ts[0] and ts[-1] < n):
                raise ParameterError("terminal outside the vertex set")
            object.__setattr__(self, "terminals", tuple(ts))
        if self.bipartition is not None:
            a = self.bipartition
            if not 0 <= a <= n:
                raise ParameterError(f"bipartition size {a} outside [0, {n}]")
            for u, v in self.edges:
                if (u < a) == (v < a):
                    raise ParameterError(f"edge ({u}, {v}) does not cross the bipartition")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Neighbourhood of each vertex as a bit mask."""
        adj = [0] * self.num_vertices
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @property
    def terminal_mask(self) -> int:
        return mask_of(self.terminals or ())

    def is_connected_subset(self, mask: int) -> bool:
        """Whether ``mask`` induces a connected subgraph (empty counts as connected)."""
        if mask == 0:
            return True
        adj = self.adjacency
        reached = mask & -mask
        frontier = reached
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = adj[low.bit_length() - 1] & mask & ~reached
            reached |= new
            frontier |= new
        return reached == mask


@dataclass(frozen=True)
class SubsetSumInstance:
    items: tuple[int, ...]
    target: int

    def __post_init__(self):
        items = tuple(int(a) for a in self.items)
        if any(a <= 0 for a in items):
            raise ParameterError("subset-sum items must be positive")
        if self.target < 0:
            raise ParameterError("subset-sum target must be nonnegative")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "target", int(self.target))

    @property
    def bit_length(self) -> int:
        return self.target.bit_length()


GATE_KINDS = ("INPUT", "AND", "OR", "NOT")


class Gate(NamedTuple):
    kind: str
    inputs: tuple[int, ...] = ()


@dataclass(frozen=True)
class VspCircuit:
    """Fan-in <= 2 boolean circuit.

    INPUT gates are the circuit's variables, in index order. AND/OR gates
    with no inputs are the constants true/false. Acyclicity is checked by
    the consumers (:func:`topological_order`), so a cyclic circuit can be
    represented and then rejected with a :class:`StructuralError`.
    """

    gates: tuple[Gate, ...]
    output: int
    labels: tuple[int, ...] | None = None

    def __post_init__(self):
        gates = tuple(g if isinstance(g, Gate) else Gate(g[0], tuple(g[1])) for g in self.gates)
        gates = tuple(Gate(g.kind, tuple(g.inputs)) for g in gates)
        n = len(gates)
        for idx, g in enumerate(gates):
            if g.kind not in GATE_KINDS:
                raise ParameterError(f"gate {idx}: unknown kind {g.kind!r}")
            arity = len(g.inputs)
            if g.kind == "INPUT" and arity:
                raise ParameterError(f"gate {idx}: INPUT takes no wires")
            if g.kind == "NOT" and arity != 1:
                raise ParameterError(f"gate {idx}: NOT takes exactly one wire")
            if arity > 2:
                raise ParameterError(f"gate {idx}: fan-in {arity} > 2")
            for src in g.inputs:
                if not 0 <= src < n:
                    raise ParameterError(f"gate {idx}: wire from missing gate {src}")
        if not 0 <= self.output < n:
            raise ParameterError(f"output gate {self.output} does not exist")
        object.__setattr__(self, "gates", gates)
        if self.labels is not None:
            labels = tuple(int(x) for x in self.labels)
            if len(labels) != n:
                raise ParameterError("labeling must assign one label per gate")
            object.__setattr__(self, "labels", labels)

    @property
    def wire_count(self) -> int:
        return sum(len(g.inputs) for g in self.gates)

    @property
    def input_gates(self) -> tuple[int, ...]:
        return tuple(i for i, g in enumerate(self.gates) if g.kind == "INPUT")

    @property
    def num_inputs(self) -> int:
        return len(self.input_gates)

    def wires(self) -> list[tuple[int, int]]:
        return [(src, dst) for dst, g in enumerate(self.gates) for src in g.inputs]


class SizeIndexedCounts(Mapping):
    """Solution counts indexed by solution size; missing sizes count zero.

    ``max_size`` is the largest size the producer evaluated, so consumers can
    tell "zero" apart from "never computed".
    """

    __slots__ = ("_counts", "max_size")

    def __init__(self, counts: Mapping[int, int] | Iterable[tuple[int, int]] = (), max_size: int | None = None):
        items = counts.items() if isinstance(counts, Mapping) else counts
        clean = {}
        for size, count in items:
            if count < 0:
                raise ParameterError("counts must be nonnegative")
            if count:
                clean[int(size)] = int(count)
        self._counts = dict(sorted(clean.items()))
        if max_size is None:
            max_size = max(self._counts, default=0)
        self.max_size = max_size

    def __getitem__(self, size: int) -> int:
        return self._counts.get(size, 0)

    def __contains__(self, size) -> bool:
        return size in self._counts

    def __iter__(self):
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def __repr__(self) -> str:
        return f"SizeIndexedCounts({self._counts!r}, max_size={self.max_size})"

    def total(self) -> int:
        return sum(self._counts.values())

    def parity(self) -> int:
        return self.total() & 1

    def mod2(self) -> SizeIndexedCounts:
        return SizeIndexedCounts({s: c & 1 for s, c in self._counts.items()}, self.max_size)

    def minimum(self) -> int | None:
        return next(iter(self._counts), None)

    def as_dict(self) -> dict[int, int]:
        return dict(self._counts)
