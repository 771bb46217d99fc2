"""Reductions from Set Cover and its parity version.

After the parity flip between Hitting Set and Set Cover, the module regroups
sets into unions of q sets, which shrinks the solution size for both the
decision and the parity version. The rest holds the gadget reductions from
Set Cover to Steiner Tree, Connected Vertex Cover, Set Partitioning and
Subset Sum.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import ceil, comb
from typing import NamedTuple

from .errors import CapacityError, InvariantViolation, ParameterError
from .instances.types import Graph, SetSystem, SizeIndexedCounts, SubsetSumInstance, popcount
from .oracles import (
    count_hitting_sets_by_size,
    count_set_covers_by_size,
    count_set_covers_exact_size,
    parity_bipartite_independent_sets,
)
from .parity_math import binom_parity, nested_binom_parity

# --- the flip ---------------------------------------------------------------


def incidence_graph(system: SetSystem) -> Graph:
    """Bipartite graph with the sets as side A (vertices 0..m-1) and elements after."""
    m = system.num_sets
    edges = tuple((i, m + e) for i, s in enumerate(system.sets) for e in range(system.universe_size) if s >> e & 1)
    return Graph(m + system.universe_size, edges, None, m)


class FlipParities(NamedTuple):
    parity_hitting: int
    parity_covers: int
    parity_is: int

    def agree(self) -> bool:
        return self.parity_hitting == self.parity_covers == self.parity_is


def flip_parities(system: SetSystem, cap: int | None = None) -> FlipParities:
    """Parities of hitting sets, set covers and incidence-graph independent sets."""
    hitting = count_hitting_sets_by_size(system, cap).parity()
    covers = count_set_covers_by_size(system, cap).parity()
    ind = parity_bipartite_independent_sets(incidence_graph(system), cap)
    return FlipParities(hitting, covers, ind)


# --- grouping ---------------------------------------------------------------


@dataclass(frozen=True)
class GroupedCoverInstance:
    """Set Cover instance built from unions of exactly ``q`` source sets.

    ``provenance[i]`` lists the indices (into ``source.sets``) of the ``q``
    sets whose union produced ``system.sets[i]``; sets with no entry (the
    tag-collecting set of the parity pipeline) were added directly.
    """

    system: SetSystem
    target: int
    q: int
    provenance: dict[int, tuple[int, ...]]
    source: SetSystem
    z: int = 0
    padding: int = 0


def _union(masks) -> int:
    u = 0
    for s in masks:
        u |= s
    return u


def _with_singletons(system: SetSystem, extra: int) -> SetSystem:
    n = system.universe_size
    return SetSystem(n + extra, system.sets + tuple(1 << e for e in range(n, n + extra)), system.multiset)


def group_set_cover(system: SetSystem, t: int, alpha) -> GroupedCoverInstance:
    """Decision-preserving regrouping so the solution size drops to ``t/q``.

    ``q`` is the smallest integer with ``1/q <= alpha``. Fresh elements with
    singleton sets make ``q`` divide the budget and make at least ``q`` sets
    available; ``t`` is clamped to the universe size first, which never
    changes the answer for covers without empty sets.
    """
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ParameterError("alpha must be positive")
    if t < 0:
        raise ParameterError("t must be nonnegative")
    n = system.universe_size
    t = min(t, n)
    q = ceil(1 / alpha)
    extra = 0
    if t:
        while (t + extra) % q or system.num_sets + extra < q:
            extra += 1
    source = _with_singletons(system, extra)
    t_new = t + extra
    unions: dict[int, tuple[int, ...]] = {}
    for combo in combinations(range(source.num_sets), q):
        u = _union(source.sets[i] for i in combo)
        unions.setdefault(u, combo)
    grouped = SetSystem(source.universe_size, tuple(unions))
    provenance = {i: unions[s] for i, s in enumerate(grouped.sets)}
    return GroupedCoverInstance(grouped, t_new // q, q, provenance, source, 0, extra)


# --- parity of all set covers via size-restricted oracle calls -------------


def dj_coefficient(j: int, q: int, t_star: int) -> int:
    """Parity of the number of ways ``t_star`` distinct q-subsets of a j-set cover it.

    Inclusion-exclusion modulo two removes the signs, leaving
    ``sum_i C(j, i) * C(C(i, q), t_star)``.
    """
    if q < 1 or t_star < 0 or j < 0:
        raise ParameterError("need q >= 1, t_star >= 0, j >= 0")
    acc = 0
    for i in range(j + 1):
        if binom_parity(j, i):
            acc ^= nested_binom_parity(i, q, t_star)
    return acc


@dataclass
class ParityLedger:
    """``s[j]``: parity of covers of size j of the input, filled in increasing j.

    ``d[j]`` holds the fiber-parity table used when solving for size j.
    """

    s: dict[int, int] = field(default_factory=dict)
    d: dict[int, dict[int, int]] = field(default_factory=dict)


@dataclass
class PipelineStep:
    j: int
    j0: int
    t_star: int
    target: int
    universe_size: int
    num_sets: int
    max_multiplicity: int
    oracle_bit: int


@dataclass
class PipelineResult:
    parity: int
    q: int
    z: int
    ledger: ParityLedger
    steps: list[PipelineStep]
    brute_force_escape: bool = False


def brute_force_size_parity(instance: GroupedCoverInstance) -> int:
    """Reference callback: exact count of covers of size ``target``, mod 2."""
    return count_set_covers_exact_size(instance.system, instance.target) & 1


def pipeline_q(num_sets: int, universe_size: int, alpha) -> int:
    """Smallest power of two q with m/q + 2 <= alpha * n."""
    bound = Fraction(alpha) * universe_size
    q = 1
    while Fraction(num_sets, q) + 2 > bound:
        q *= 2
    return q


def build_pipeline_instance(system: SetSystem, j: int, q: int, k: int) -> tuple[GroupedCoverInstance, int, int]:
    """The tagged q-fold-union instance used to learn the size-j cover parity.

    Returns ``(instance, j0, max_multiplicity)``.
    """
    pad = q - j % q
    f0 = _with_singletons(system, pad)
    j0 = j + pad
    t_star = j0 // q
    z = 1 + k * q * q
    u0 = f0.universe_size
    seen: dict[int, int] = {}
    tagged: list[tuple[int, tuple[int, ...]]] = []
    for combo in combinations(range(f0.num_sets), q):
        u = _union(f0.sets[i] for i in combo)
        dup = seen.get(u, 0)
        seen[u] = dup + 1
        # the dup-th copy of a union gets the tag subset whose bit mask is dup
        tagged.append((u | (dup << u0), combo))
    max_mult = max(seen.values(), default=0)
    if max_mult > 1 << (k * q * q):
        raise InvariantViolation(f"union multiplicity {max_mult} exceeds 2^(k q^2) = {1 << (k * q * q)}")
    collector = ((1 << z) - 1) << u0
    final = SetSystem(u0 + z, tuple(m for m, _ in tagged) + (collector,))
    index = {m: i for i, m in enumerate(final.sets)}
    provenance = {index[m]: combo for m, combo in tagged}
    if len(final.sets) != len(tagged) + 1:
        raise InvariantViolation("tagging left duplicate sets")
    inst = GroupedCoverInstance(final, t_star + 1, q, provenance, f0, z, pad)
    return inst, j0, max_mult


def run_parity_cover_pipeline(
    system: SetSystem,
    alpha,
    size_parity_oracle: Callable[[GroupedCoverInstance], int] = brute_force_size_parity,
    density=None,
) -> PipelineResult:
    """Parity of the total number of set covers, using only oracle calls on
    instances whose solution size is at most ``alpha * n``.

    For each size j the input is padded so q divides the size, all q-fold
    unions are formed, duplicates are told apart by fresh tag elements plus
    one set holding every tag, and the oracle's answer is corrected by the
    already-known smaller sizes weighted with the fiber parities ``d``.
    """
    alpha = Fraction(alpha)
    n, m = system.universe_size, system.num_sets
    if alpha <= 0:
        raise ParameterError("alpha must be positive")
    if system.multiset:
        raise ParameterError("the pipeline expects a set system without duplicates")
    if density is not None and m > Fraction(density) * n:
        raise ParameterError(f"{m} sets exceed density {density} over {n} elements")
    ledger = ParityLedger()
    if alpha * n < 3:
        counts = count_set_covers_by_size(system)
        ledger.s = {j: counts[j] & 1 for j in range(m + 1)}
        return PipelineResult(counts.parity(), 0, 0, ledger, [], brute_force_escape=True)
    q = pipeline_q(m, n, alpha)
    k = max(1, system.width)
    z = 1 + k * q * q
    ledger.s[0] = int(n == 0)
    steps = []
    for j in range(1, m + 1):
        inst, j0, mult = build_pipeline_instance(system, j, q, k)
        if inst.target > alpha * n:
            raise InvariantViolation(f"solution size {inst.target} exceeds alpha*n = {alpha * n}")
        t_star = inst.target - 1
        pad = inst.padding
        bit = size_parity_oracle(inst) & 1
        d = {jj: dj_coefficient(jj, q, t_star) for jj in range(j0 + 1)}
        if d[j0] != 1:
            raise InvariantViolation(f"fiber parity d[{j0}] = {d[j0]} for q={q}, t*={t_star}")
        acc = bit
        for jj in range(pad, j0):
            acc ^= ledger.s[jj - pad] & d[jj]
        ledger.s[j] = acc
        ledger.d[j] = d
        steps.append(
            PipelineStep(j, j0, t_star, inst.target, inst.system.universe_size, inst.system.num_sets, mult, bit)
        )
    parity = 0
    for bit in ledger.s.values():
        parity ^= bit
    return PipelineResult(parity, q, z, ledger, steps)


def parity_cover_pipeline(
    system: SetSystem,
    alpha,
    size_parity_oracle: Callable[[GroupedCoverInstance], int] = brute_force_size_parity,
    density=None,
) -> int:
    return run_parity_cover_pipeline(system, alpha, size_parity_oracle, density).parity


# --- Steiner tree and connected vertex cover -------------------------------


@dataclass(frozen=True)
class SteinerReduction:
    """Incidence graph plus hub ``s`` on all sets and pendant ``u`` on ``s``.

    Vertices: sets ``0..m-1``, elements ``m..m+n-1``, ``s = m+n``,
    ``u = m+n+1``; terminals are the elements and ``u``. Covers of size i
    correspond to Steiner sets of ``n + i + 2`` vertices.
    """

    graph: Graph
    size_offset: int
    target: int | None
    trivially_no: bool


def _uncoverable(system: SetSystem) -> bool:
    return _union(system.sets) != system.universe_mask


def set_cover_to_steiner(system: SetSystem, t: int | None = None) -> SteinerReduction:
    m, n = system.num_sets, system.universe_size
    hub, pendant = m + n, m + n + 1
    edges = [(i, m + e) for i, s in enumerate(system.sets) for e in range(n) if s >> e & 1]
    edges += [(i, hub) for i in range(m)]
    edges.append((hub, pendant))
    terminals = tuple(range(m, m + n)) + (pendant,)
    graph = Graph(m + n + 2, tuple(edges), terminals)
    offset = n + 2
    return SteinerReduction(graph, offset, None if t is None else t + offset, _uncoverable(system))


@dataclass(frozen=True)
class CvcReduction:
    """Incidence graph plus hub ``s`` on all sets and a pendant on every element and on ``s``.

    Vertices: sets ``0..m-1``, elements ``m..m+n-1``, ``s = m+n``, element
    pendants ``m+n+1..m+2n``, hub pendant ``m+2n+1``.
    """

    graph: Graph
    target: int | None
    universe_size: int
    trivially_no: bool


def set_cover_to_cvc(system: SetSystem, t: int | None = None) -> CvcReduction:
    m, n = system.num_sets, system.universe_size
    hub = m + n
    edges = [(i, m + e) for i, s in enumerate(system.sets) for e in range(n) if s >> e & 1]
    edges += [(i, hub) for i in range(m)]
    edges += [(m + e, hub + 1 + e) for e in range(n)]
    edges.append((hub, hub + 1 + n))
    graph = Graph(m + 2 * n + 2, tuple(edges))
    return CvcReduction(graph, None if t is None else t + n + 1, n, _uncoverable(system))


def cvc_counts_from_covers(cover_counts: SizeIndexedCounts, universe_size: int) -> SizeIndexedCounts:
    """Connected-vertex-cover counts predicted from set-cover counts.

    ``c_j = sum_i s_i * C(n+1, j - i - n - 1)``; the sum starts at i = 0,
    which only matters for an empty universe.
    """
    n = universe_size
    out: dict[int, int] = {}
    for i, s in cover_counts.items():
        for extra in range(n + 2):
            j = i + n + 1 + extra
            out[j] = out.get(j, 0) + s * comb(n + 1, extra)
    return SizeIndexedCounts(out, cover_counts.max_size + 2 * n + 2)


def cvc_parity_recover(c_parities: SizeIndexedCounts, universe_size: int, i_max: int) -> SizeIndexedCounts:
    """Set-cover parities s_0..s_{i_max} from connected-vertex-cover parities.

    The coefficient of s_i in c_{i+n+1} is C(n+1, 0) = 1, so the system is
    triangular and solved in increasing i.
    """
    n = universe_size
    if c_parities.max_size < i_max + n + 1:
        raise ParameterError(f"need c up to size {i_max + n + 1}, have {c_parities.max_size}")
    s: dict[int, int] = {}
    for i in range(i_max + 1):
        acc = c_parities[i + n + 1] & 1
        for prev in range(max(0, i - n - 1), i):
            if s.get(prev) and binom_parity(n + 1, i - prev):
                acc ^= 1
        s[i] = acc
    return SizeIndexedCounts(s, i_max)


# --- set partitioning and subset sum ---------------------------------------

MAX_SUBSET_CLOSURE_WIDTH = 20


def set_cover_to_set_partitioning(system: SetSystem, t: int | None = None) -> tuple[SetSystem, int | None]:
    """Close the family under nonempty subsets; cover size <= t iff partition size <= t."""
    if system.width > MAX_SUBSET_CLOSURE_WIDTH:
        raise CapacityError(f"set of size {system.width} would expand to 2^{system.width} subsets")
    family: set[int] = set()
    for s in system.sets:
        sub = s
        while sub:
            family.add(sub)
            sub = (sub - 1) & s
    return SetSystem(system.universe_size, tuple(family)), t


class SubsetSumLayout(NamedTuple):
    """Bit offsets of the three fields, least significant first."""

    pad: int
    count_width: int
    indicator_offset: int
    size_offset: int
    cardinality_offset: int


def subset_sum_layout(universe_size: int, t0: int) -> SubsetSumLayout:
    pad = t0.bit_length()  # == ceil(log2(t0 + 1))
    width = universe_size.bit_length()  # == ceil(log2(n + 1))
    size_off = universe_size + pad
    card_off = size_off + width + pad
    return SubsetSumLayout(pad, width, 0, size_off, card_off)


def set_partitioning_to_subset_sum(system: SetSystem, t0: int) -> SubsetSumInstance:
    """Subset-sum instance that is YES iff a partition with exactly ``t0`` sets exists.

    Fields, low to high: element indicators, then the set size, then a 1 per
    chosen set; each of the lower two is followed by enough zero bits to
    absorb ``t0`` summands without carrying into the next field.
    """
    if t0 < 1:
        raise ParameterError("t0 must be >= 1")
    n = system.universe_size
    lay = subset_sum_layout(n, t0)
    target = (t0 << lay.cardinality_offset) | (n << lay.size_offset) | system.universe_mask
    items = tuple((1 << lay.cardinality_offset) | (popcount(s) << lay.size_offset) | s for s in system.sets)
    return SubsetSumInstance(items, target)


def set_partitioning_to_subset_sum_all(system: SetSystem, t: int) -> list[SubsetSumInstance]:
    if t < 1:
        raise ParameterError("t must be >= 1")
    return [set_partitioning_to_subset_sum(system, t0) for t0 in range(1, t + 1)]
