"""Reductions among CNF-Sat, Hitting Set, Set Splitting, NAE-Sat and
series-parallel circuit satisfiability.

Each transformer is deterministic; its correspondence (count, parity or
decision preservation) is checked against :mod:`sethlab.oracles` in the test
suite and by ``sethlab verify``.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, islice, product
from math import comb

from .errors import CapacityError, InvariantViolation, ParameterError
from .instances.types import CnfFormula, Gate, Literal, SetSystem, VspCircuit, mask_of


def _combination_masks(size: int, k: int, offset: int = 0) -> list[int]:
    return [mask_of(c) << offset for c in combinations(range(size), k)]


@dataclass(frozen=True)
class BlockCode:
    """Injective code from assignments of ``p`` variables to balanced subsets.

    Assignment value ``v`` (bit ``j`` = variable ``j`` of the block) maps to
    the ``v``-th ``ceil(p'/2)``-subset of ``range(p')`` in lexicographic order.
    """

    p: int
    p_prime: int
    images: tuple[int, ...]

    @property
    def half(self) -> int:
        return (self.p_prime + 1) // 2

    @property
    def block_mask(self) -> int:
        return (1 << self.p_prime) - 1

    def encode(self, value: int) -> int:
        return self.images[value]

    def decode(self, mask: int) -> int | None:
        return self._inverse.get(mask)

    @cached_property
    def _inverse(self) -> dict[int, int]:
        return {m: v for v, m in enumerate(self.images)}


def make_block_code(p: int) -> BlockCode:
    if p < 3 or p % 2 == 0:
        raise ParameterError(f"block size p must be odd and >= 3, got {p}")
    p_prime = p + 2 * (p - 1).bit_length()  # (p-1).bit_length() == ceil(log2 p)
    half = (p_prime + 1) // 2
    if comb(p_prime, half) < 1 << p:
        raise InvariantViolation(f"C({p_prime}, {half}) < 2^{p}")
    images = tuple(mask_of(c) for c in islice(combinations(range(p_prime), half), 1 << p))
    return BlockCode(p, p_prime, images)


@dataclass(frozen=True)
class HittingSetInstance:
    """A set system with a solution size.

    ``padding`` counts fresh variables added to make the block size divide
    the variable count; each is forced false so counts are unchanged.
    """

    system: SetSystem
    target: int
    padding: int = 0

    def __post_init__(self):
        if not 0 <= self.target <= self.system.universe_size:
            raise ParameterError(f"target {self.target} outside [0, {self.system.universe_size}]")


def pad_formula(formula: CnfFormula, p: int) -> tuple[CnfFormula, int]:
    """Append forced-false variables (unit clauses) until ``p`` divides n."""
    extra = -formula.num_vars % p
    if not extra:
        return formula, 0
    n = formula.num_vars
    units = tuple((Literal(v, False),) for v in range(n, n + extra))
    return CnfFormula(n + extra, formula.clauses + units, formula.density), extra


def _prepare(formula: CnfFormula, p: int, pad: bool) -> tuple[CnfFormula, BlockCode, int]:
    code = make_block_code(p)
    extra = 0
    if formula.num_vars % p:
        if not pad:
            raise ParameterError(f"p={p} does not divide n={formula.num_vars}; pass pad=True or pad first")
        formula, extra = pad_formula(formula, p)
    return formula, code, extra


def encode_assignment(formula: CnfFormula, code: BlockCode, assignment: int) -> int:
    """The hitting set that encodes ``assignment`` block by block."""
    p, pp = code.p, code.p_prime
    out = 0
    for i in range(formula.num_vars // p):
        out |= code.encode(assignment >> (p * i) & ((1 << p) - 1)) << (pp * i)
    return out


def _block_family(formula: CnfFormula, code: BlockCode) -> tuple[set[int], int]:
    """The size-balancing and code-completion sets of every block."""
    g = formula.num_vars // code.p
    pp, half = code.p_prime, code.half
    image_set = set(code.images)
    full = code.block_mask
    family: set[int] = set()
    upper = _combination_masks(pp, half)
    lower = [x for x in _combination_masks(pp, half - 1) if full ^ x not in image_set]
    for i in range(g):
        off = pp * i
        family.update(x << off for x in upper)
        family.update(x << off for x in lower)
    return family, g


def _clause_sets(formula: CnfFormula, code: BlockCode) -> set[int]:
    """For every clause, all unions of per-block complements of falsifying codewords."""
    p, pp = code.p, code.p_prime
    full = code.block_mask
    k = formula.width
    limit = 1 << (k * pp)
    out: set[int] = set()
    for clause in formula.clauses:
        by_block: dict[int, list[Literal]] = {}
        for lit in clause:
            by_block.setdefault(lit.var // p, []).append(lit)
        choices = []
        for blk, lits in sorted(by_block.items()):
            opts = []
            for value in range(1 << p):
                if all((value >> (lit.var % p) & 1) != lit.positive for lit in lits):
                    opts.append((full ^ code.encode(value)) << (pp * blk))
            choices.append(opts)
        tuples = 1
        for opts in choices:
            tuples *= len(opts)
        if tuples > limit:
            raise CapacityError(f"clause expands to {tuples} tuples > 2^(k p') = {limit}")
        for combo in product(*choices):
            u = 0
            for x in combo:
                u |= x
            out.add(u)
    return out


def cnf_to_hitting_set(formula: CnfFormula, p: int, pad: bool = False) -> HittingSetInstance:
    """Hitting-set instance whose size-``t`` hitting sets are the satisfying assignments.

    With ``p' = p + 2 ceil(log2 p)`` and ``g = n / p`` blocks the universe has
    ``p' g`` elements and ``t = ceil(p'/2) g``.
    """
    formula, code, extra = _prepare(formula, p, pad)
    family, g = _block_family(formula, code)
    family |= _clause_sets(formula, code)
    system = SetSystem(code.p_prime * g, tuple(family))
    return HittingSetInstance(system, code.half * g, extra)


def cnf_to_parity_hitting_set(formula: CnfFormula, p: int, pad: bool = False) -> SetSystem:
    """Set system whose total number of hitting sets has the parity of #SAT.

    Extends :func:`cnf_to_hitting_set` with one fresh element ``e_i`` per
    block and the sets ``X + e_i`` for every ``floor(p'/2)``-subset X of the
    block.
    """
    formula, code, _ = _prepare(formula, p, pad)
    base = cnf_to_hitting_set(formula, p)
    g = formula.num_vars // p
    n_prime = base.system.universe_size
    family = set(base.system.sets)
    lower = _combination_masks(code.p_prime, code.half - 1)
    for i in range(g):
        tag = 1 << (n_prime + i)
        family.update((x << (code.p_prime * i)) | tag for x in lower)
    return SetSystem(n_prime + g, tuple(family))


# --- hitting set -> set splitting -> NAE -> CNF ----------------------------


def compositions(total: int, parts: int, most: int) -> Iterator[tuple[int, ...]]:
    """Tuples of ``parts`` integers in ``[0, most]`` summing to ``total``, lexicographically."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    rest_max = most * (parts - 1)
    for first in range(max(0, total - rest_max), min(most, total) + 1):
        for tail in compositions(total - first, parts - 1, most):
            yield (first, *tail)


def splitting_compositions(instance: HittingSetInstance, p: int) -> list[tuple[int, ...]]:
    """The budget splits, in the order :func:`hitting_set_to_set_splitting` emits them."""
    n = instance.system.universe_size
    n_pad = -(-n // p) * p
    return list(compositions(instance.target, n_pad // p, p))


def hitting_set_to_set_splitting(instance: HittingSetInstance, p: int) -> Iterator[SetSystem]:
    """One set-splitting instance per split (t_1..t_g) of the hitting-set budget.

    Universe = the (padded) hitting-set universe plus R and B as the two
    highest elements. The hitting-set instance is YES iff some output can be
    split.
    """
    if p < 1:
        raise ParameterError("p must be >= 1")
    system, t = instance.system, instance.target
    n = system.universe_size
    if t > n:
        raise ParameterError(f"target {t} exceeds universe {n}")
    n_pad = -(-n // p) * p
    red, blue = 1 << n_pad, 1 << (n_pad + 1)
    lifted = [y | blue for y in system.sets]
    for comp in compositions(t, n_pad // p, p):
        family = {red | blue}
        for i, ti in enumerate(comp):
            if ti < p:
                family.update(x | red for x in _combination_masks(p, ti + 1, p * i))
        family.update(lifted)
        yield SetSystem(n_pad + 2, tuple(family), multiset=system.multiset)


def set_splitting_to_nae_cnf(system: SetSystem) -> CnfFormula:
    """Monotone formula: variable per element, positive clause per set.

    An empty set becomes an empty clause, which no assignment NAE-satisfies.
    """
    return CnfFormula(
        system.universe_size,
        tuple(tuple(Literal(e) for e in range(system.universe_size) if s >> e & 1) for s in system.sets),
    )


def nae_to_cnf(formula: CnfFormula) -> CnfFormula:
    """Each clause plus a sign-flipped copy; SAT assignments = NAE assignments."""
    flipped = tuple(tuple(-lit for lit in c) for c in formula.clauses)
    return CnfFormula(formula.num_vars, formula.clauses + flipped, formula.density)


def hitting_set_to_monotone_cnf(system: SetSystem) -> CnfFormula:
    """Parsimonious: satisfying assignments are exactly the hitting sets."""
    return set_splitting_to_nae_cnf(system)


# --- CNF -> series-parallel circuit ----------------------------------------


def cnf_to_vsp_circuit(formula: CnfFormula) -> VspCircuit:
    """Fan-in-2 circuit for ``formula`` together with a non-interleaving labeling.

    Each clause is a left-leaning OR chain, the clause outputs feed a
    left-leaning AND chain. Every gate-to-gate wire joins consecutive labels
    (NOT gates sit one label below their consumer), so no wire can straddle
    another; wires leaving inputs start at label 0 and cannot be straddled
    either. Clause chains are aligned to end one label below the AND gate
    that consumes them.
    """
    n = formula.num_vars
    gates: list[Gate] = [Gate("INPUT") for _ in range(n)]
    labels: list[int] = [0] * n

    def add(kind, inputs, label):
        gates.append(Gate(kind, tuple(inputs)))
        labels.append(label)
        return len(gates) - 1

    def literal(lit: Literal, label: int) -> int:
        return lit.var if lit.positive else add("NOT", (lit.var,), label)

    def clause(lits, end: int) -> int:
        if not lits:
            return add("OR", (), 0)
        if len(lits) == 1:
            return literal(lits[0], end)
        first = end - len(lits) + 2
        cur = add("OR", (literal(lits[0], first - 1), literal(lits[1], first - 1)), first)
        for j, lit in enumerate(lits[2:], 1):
            cur = add("OR", (cur, literal(lit, first + j - 1)), first + j)
        return cur

    m = formula.num_clauses
    if m == 0:
        out = add("AND", (), 0)
        return VspCircuit(tuple(gates), out, tuple(labels))
    base = max(formula.width, 1)
    out = clause(formula.clauses[0], base)
    for i in range(1, m):
        c = clause(formula.clauses[i], base + i - 1)
        out = add("AND", (out, c), base + i)
    return VspCircuit(tuple(gates), out, tuple(labels))


def verify_vsp_labeling(circuit: VspCircuit) -> bool:
    """Whether the attached labeling is normal and has no interleaving wires.

    Normal: labels strictly increase along wires, in-degree-0 gates are
    labelled 0 and all other sinks share one label. Interleaving: wires
    (u, v), (u', v') with l(u) < l(u') < l(v) < l(v').
    """
    if circuit.labels is None:
        raise ParameterError("circuit carries no labeling")
    lab = circuit.labels
    if any(x < 0 for x in lab):
        return False
    wires = circuit.wires()
    if any(lab[u] >= lab[v] for u, v in wires):
        return False
    has_out = {u for u, _ in wires}
    sink_labels = set()
    for idx, g in enumerate(circuit.gates):
        if not g.inputs:
            if lab[idx] != 0:
                return False
        elif idx not in has_out:
            sink_labels.add(lab[idx])
    if len(sink_labels) > 1:
        return False
    spans = sorted({(lab[u], lab[v]) for u, v in wires})
    for a, b in spans:
        for c, d in spans:
            if a < c < b < d:
                return False
    return True
