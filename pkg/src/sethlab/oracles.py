"""Exact reference solvers.

These are the ground truth for every reduction check. Exhaustive counters
enumerate bit masks in fixed-size numpy chunks, so their running time is a
clean 2^n times the per-chunk work. Counts are exact Python integers;
parities are taken by callers at the very end.
"""

from __future__ import annotations

import graphlib
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .caps import DEFAULT_TABLE_CAP, check_cap, default_cap
from .errors import CapacityError, ParameterError, StructuralError
from .instances.types import CnfFormula, Graph, SetSystem, SizeIndexedCounts, SubsetSumInstance, VspCircuit, mask_of

CHUNK_BITS = 10
_MAX_NUMPY_BITS = 62


def _chunks(n: int):
    """Yield int64 arrays covering ``range(2**n)`` in chunks of 2**CHUNK_BITS."""
    if n > _MAX_NUMPY_BITS:
        raise CapacityError(f"cannot enumerate 2^{n} masks")
    total = 1 << n
    step = min(total, 1 << CHUNK_BITS)
    for start in range(0, total, step):
        yield np.arange(start, start + step, dtype=np.int64)


def _popcount(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr).astype(np.int64)


def _to_counts(hist, max_size: int) -> SizeIndexedCounts:
    return SizeIndexedCounts({i: int(c) for i, c in enumerate(hist)}, max_size)


# --- CNF / NAE -------------------------------------------------------------


def count_satisfying(formula: CnfFormula, cap: int | None = None) -> int:
    """Number of assignments satisfying every clause."""
    n = formula.num_vars
    check_cap("variables", n, cap)
    masks = formula.clause_masks
    if any(pos == 0 and neg == 0 for pos, neg in masks):
        return 0
    total = 0
    for a in _chunks(n):
        ok = np.ones(a.shape, dtype=bool)
        na = ~a
        for pos, neg in masks:
            ok &= ((a & pos) != 0) | ((na & neg) != 0)
        total += int(np.count_nonzero(ok))
    return total


def count_nae_assignments(formula: CnfFormula, cap: int | None = None) -> int:
    """Assignments giving every clause both a true and a false literal."""
    n = formula.num_vars
    check_cap("variables", n, cap)
    masks = formula.clause_masks
    if any(pos == 0 and neg == 0 for pos, neg in masks):
        return 0
    total = 0
    for a in _chunks(n):
        ok = np.ones(a.shape, dtype=bool)
        na = ~a
        for pos, neg in masks:
            has_true = ((a & pos) != 0) | ((na & neg) != 0)
            has_false = ((na & pos) != 0) | ((a & neg) != 0)
            ok &= has_true & has_false
        total += int(np.count_nonzero(ok))
    return total


def exists_nae_assignment(formula: CnfFormula, cap: int | None = None) -> bool:
    return count_nae_assignments(formula, cap) > 0


# --- set systems -------------------------------------------------------------


def count_hitting_sets_by_size(system: SetSystem, cap: int | None = None) -> SizeIndexedCounts:
    n = system.universe_size
    check_cap("universe size", n, cap)
    sets = system.sets
    if 0 in sets:
        return SizeIndexedCounts({}, n)
    hist = np.zeros(n + 1, dtype=np.int64)
    for h in _chunks(n):
        ok = np.ones(h.shape, dtype=bool)
        for s in sets:
            ok &= (h & s) != 0
        hist += np.bincount(_popcount(h[ok]), minlength=n + 1)
    return _to_counts(hist, n)


def count_set_splittings(system: SetSystem, cap: int | None = None) -> int:
    """Number of X subset of U such that no set lies inside X or inside U - X."""
    n = system.universe_size
    check_cap("universe size", n, cap)
    if 0 in system.sets:
        return 0
    total = 0
    for x in _chunks(n):
        ok = np.ones(x.shape, dtype=bool)
        for s in system.sets:
            inside = x & s
            ok &= (inside != 0) & (inside != s)
        total += int(np.count_nonzero(ok))
    return total


def exists_set_splitting(system: SetSystem, cap: int | None = None) -> bool:
    n = system.universe_size
    check_cap("universe size", n, cap)
    if 0 in system.sets:
        return False
    for x in _chunks(n):
        ok = np.ones(x.shape, dtype=bool)
        for s in system.sets:
            inside = x & s
            ok &= (inside != 0) & (inside != s)
        if ok.any():
            return True
    return False


def _array(masks, wide: bool):
    return np.array(masks, dtype=object if wide else np.int64)


def _subfamily_table(masks, wide: bool):
    """Union and pairwise-disjointness of every subfamily of ``masks``.

    Entry ``i`` describes the subfamily whose members are the set bits of ``i``.
    """
    unions = _array([0], wide)
    disjoint = np.ones(1, dtype=bool)
    for s in masks:
        disjoint = np.concatenate([disjoint, disjoint & ((unions & s) == 0)])
        unions = np.concatenate([unions, unions | s])
    sizes = _popcount(np.arange(len(unions), dtype=np.int64))
    return unions, disjoint, sizes


_SPLIT = 12


def _enumerate_subfamilies(system: SetSystem, cap, want_disjoint: bool) -> SizeIndexedCounts:
    m = system.num_sets
    check_cap("number of sets", m, cap)
    wide = system.universe_size > _MAX_NUMPY_BITS
    full = system.universe_mask
    low, high = system.sets[:_SPLIT], system.sets[_SPLIT:]
    lo_u, lo_d, lo_sz = _subfamily_table(low, wide)
    hi_u, hi_d, hi_sz = _subfamily_table(high, wide)
    hist = np.zeros(m + 1, dtype=np.int64)
    for u, d, sz in zip(hi_u.tolist(), hi_d.tolist(), hi_sz.tolist()):
        ok = (lo_u | u) == full
        if want_disjoint:
            if not d:
                continue
            ok &= lo_d & ((lo_u & u) == 0)
        hist += np.bincount(lo_sz[ok] + sz, minlength=m + 1)[: m + 1]
    return _to_counts(hist, m)


def count_set_covers_by_size(system: SetSystem, cap: int | None = None) -> SizeIndexedCounts:
    """Subfamilies whose union is the universe, by size (duplicates are distinct)."""
    return _enumerate_subfamilies(system, cap, want_disjoint=False)


def count_set_partitionings_by_size(system: SetSystem, cap: int | None = None, method: str = "auto") -> SizeIndexedCounts:
    """Pairwise-disjoint subfamilies whose union is the universe, by size.

    ``method="brute"`` enumerates all 2^m subfamilies; ``"dp"`` runs an
    exact-cover recursion over the 2^n covered-element states, branching on
    the lowest uncovered element. ``"auto"`` picks brute when m fits the cap.
    """
    limit = default_cap() if cap is None else cap
    if method == "auto":
        method = "brute" if system.num_sets <= limit else "dp"
    if method == "brute":
        return _enumerate_subfamilies(system, cap, want_disjoint=True)
    if method != "dp":
        raise ParameterError(f"unknown method {method!r}")
    return _partitionings_dp(system, cap)


def _partitionings_dp(system: SetSystem, cap) -> SizeIndexedCounts:
    n = system.universe_size
    check_cap("universe size", n, cap)
    full = system.universe_mask
    empties = sum(1 for s in system.sets if s == 0)
    containing: list[list[int]] = [[] for _ in range(n)]
    for e in range(n):
        containing[e] = [s for s in system.sets if s >> e & 1]

    @lru_cache(maxsize=None)
    def ways(covered: int) -> tuple[int, ...]:
        if covered == full:
            return (1,)
        rest = ~covered & full
        e = (rest & -rest).bit_length() - 1
        acc: list[int] = []
        for s in containing[e]:
            if s & covered:
                continue
            sub = ways(covered | s)
            if len(acc) < len(sub) + 1:
                acc.extend([0] * (len(sub) + 1 - len(acc)))
            for i, c in enumerate(sub):
                acc[i + 1] += c
        return tuple(acc)

    poly = list(ways(0))
    ways.cache_clear()
    # each empty set may be added to any partition
    for _ in range(empties):
        poly = [a + b for a, b in zip(poly + [0], [0] + poly)]
    return SizeIndexedCounts(dict(enumerate(poly)), system.num_sets)


def count_set_covers_exact_size(system: SetSystem, size: int, cap: int | None = None) -> int:
    """Number of ``size``-subfamilies covering the universe, by inclusion-exclusion.

    Elements contained in exactly the same members are merged first, so the
    alternating sum runs over 2^(#element classes) terms rather than 2^n.
    The cap applies to the number of classes.
    """
    if size < 0:
        return 0
    m = system.num_sets
    n = system.universe_size
    signature = [0] * n
    for idx, s in enumerate(system.sets):
        x = s
        while x:
            low = x & -x
            signature[low.bit_length() - 1] |= 1 << idx
            x ^= low
    if any(sig == 0 for sig in signature):
        return 0
    classes = sorted(set(signature))
    c = len(classes)
    check_cap("element classes", c, cap)
    # class mask of each set: classes whose elements it contains
    class_mask = np.zeros(m, dtype=np.int64)
    for ci, sig in enumerate(classes):
        for idx in range(m):
            if sig >> idx & 1:
                class_mask[idx] |= 1 << ci
    g = np.bincount(class_mask, minlength=1 << c).astype(np.int64)
    for bit in range(c):
        step = 1 << bit
        view = g.reshape(-1, 2 * step)
        view[:, step:] += view[:, :step]
    sign = np.where((c - _popcount(np.arange(1 << c, dtype=np.int64))) & 1, -1, 1)
    per_value = np.bincount(g, weights=sign, minlength=m + 1)
    return sum(int(round(w)) * comb(v, size) for v, w in enumerate(per_value) if w)


def min_set_cover_dp(system: SetSystem, cap: int | None = None) -> int | None:
    """Minimum cover size by DP over all 2^n universe subsets; None if uncoverable.

    ``best[X]`` is the fewest sets covering X. Some set must cover the lowest
    element of X, so ``best[X] = 1 + min(best[X - S] for S containing it)``.
    """
    n = system.universe_size
    check_cap("universe size", n, cap)
    by_elem: list[list[int]] = [[] for _ in range(n)]
    for s in set(system.sets):
        for e in range(n):
            if s >> e & 1:
                by_elem[e].append(~s)
    inf = system.num_sets + 1
    best = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        b = inf
        for not_s in by_elem[low]:
            v = best[mask & not_s]
            if v < b:
                b = v
        best[mask] = b + 1 if b < inf else inf
    result = best[-1]
    return None if result >= inf else result


def min_hitting_set_size(system: SetSystem, cap: int | None = None) -> int | None:
    return count_hitting_sets_by_size(system, cap).minimum()


# --- graphs -----------------------------------------------------------------


def _connected_array(x: np.ndarray, adjacency) -> np.ndarray:
    """Vectorised induced-connectivity test for every mask in ``x``."""
    if x.size == 0:
        return np.zeros(0, dtype=bool)
    reached = x & -x
    adj = [np.int64(a) for a in adjacency]
    while True:
        grow = reached.copy()
        for v, a in enumerate(adj):
            grow |= np.where((reached >> v) & 1 == 1, a, 0)
        grow &= x
        if np.array_equal(grow, reached):
            break
        reached = grow
    return reached == x


def count_steiner_sets_by_size(graph: Graph, cap: int | None = None) -> SizeIndexedCounts:
    """Vertex sets X containing the terminals with G[X] connected, by size."""
    n = graph.num_vertices
    check_cap("vertices", n, cap)
    term = graph.terminal_mask
    free = [v for v in range(n) if not term >> v & 1]
    hist = np.zeros(n + 1, dtype=np.int64)
    for y in _chunks(len(free)):
        x = np.full(y.shape, term, dtype=np.int64)
        for i, v in enumerate(free):
            x |= ((y >> i) & 1) << v
        ok = _connected_array(x, graph.adjacency)
        hist += np.bincount(_popcount(x[ok]), minlength=n + 1)
    return _to_counts(hist, n)


def count_cvc_by_size(graph: Graph, cap: int | None = None) -> SizeIndexedCounts:
    """Connected vertex covers by size."""
    n = graph.num_vertices
    check_cap("vertices", n, cap)
    edge_masks = [(1 << u) | (1 << v) for u, v in graph.edges]
    hist = np.zeros(n + 1, dtype=np.int64)
    for x in _chunks(n):
        ok = np.ones(x.shape, dtype=bool)
        for e in edge_masks:
            ok &= (x & e) != 0
        cand = x[ok]
        conn = _connected_array(cand, graph.adjacency)
        hist += np.bincount(_popcount(cand[conn]), minlength=n + 1)
    return _to_counts(hist, n)


def count_bipartite_independent_sets(graph: Graph, cap: int | None = None) -> int:
    """Independent sets of a bipartite graph via sum over X in A of 2^|B - N(X)|."""
    if graph.bipartition is None:
        raise ParameterError("graph carries no bipartition")
    n = graph.num_vertices
    check_cap("vertices", n, cap)
    a = graph.bipartition
    b = n - a
    nb_of = [adj >> a for adj in graph.adjacency[:a]]
    free_hist = np.zeros(b + 1, dtype=np.int64)
    for x in _chunks(a):
        nb = np.zeros(x.shape, dtype=np.int64)
        for v, mask in enumerate(nb_of):
            nb |= np.where((x >> v) & 1 == 1, mask, 0)
        free_hist += np.bincount(b - _popcount(nb), minlength=b + 1)
    return sum(int(c) << f for f, c in enumerate(free_hist))


def parity_bipartite_independent_sets(graph: Graph, cap: int | None = None) -> int:
    return count_bipartite_independent_sets(graph, cap) & 1


def count_independent_sets(graph: Graph, cap: int | None = None) -> int:
    """Plain enumeration over all vertex subsets; no bipartite structure used."""
    n = graph.num_vertices
    check_cap("vertices", n, cap)
    edge_masks = [(1 << u) | (1 << v) for u, v in graph.edges]
    total = 0
    for x in _chunks(n):
        ok = np.ones(x.shape, dtype=bool)
        for e in edge_masks:
            ok &= (x & e) != e
        total += int(np.count_nonzero(ok))
    return total


# --- subset sum -------------------------------------------------------------


def subset_sum_decide(
    instance: SubsetSumInstance,
    mode: str = "dp",
    cap: int | None = None,
    table_cap: int = DEFAULT_TABLE_CAP,
) -> bool:
    """Whether some subset of the items sums exactly to the target.

    ``dp`` is the pseudo-polynomial reachability table (a bitset over
    ``0..t``); ``brute`` lists all 2^n subset sums.
    """
    t = instance.target
    if mode == "dp":
        if t > table_cap:
            raise CapacityError(f"target {t} exceeds DP table cap {table_cap}")
        window = (1 << (t + 1)) - 1
        reach = 1
        for a in instance.items:
            reach = (reach | (reach << a)) & window
        return bool(reach >> t & 1)
    if mode == "brute":
        check_cap("items", len(instance.items), cap)
        sums = [0]
        for a in instance.items:
            sums += [s + a for s in sums]
        return t in sums
    raise ParameterError(f"unknown subset-sum mode {mode!r}")


# --- circuits ---------------------------------------------------------------


def topological_order(circuit: VspCircuit) -> list[int]:
    sorter = graphlib.TopologicalSorter({i: set(g.inputs) for i, g in enumerate(circuit.gates)})
    try:
        return list(sorter.static_order())
    except graphlib.CycleError as exc:
        raise StructuralError(f"circuit has a cycle through gates {exc.args[1]}") from None


def _evaluate(circuit: VspCircuit, order, a: np.ndarray) -> np.ndarray:
    values: dict[int, np.ndarray] = {}
    input_pos = {g: i for i, g in enumerate(circuit.input_gates)}
    for idx in order:
        g = circuit.gates[idx]
        ins = [values[i] for i in g.inputs]
        if g.kind == "INPUT":
            v = (a >> input_pos[idx]) & 1 == 1
        elif g.kind == "NOT":
            v = ~ins[0]
        elif g.kind == "AND":
            v = np.ones(a.shape, dtype=bool)
            for x in ins:
                v = v & x
        else:
            v = np.zeros(a.shape, dtype=bool)
            for x in ins:
                v = v | x
        values[idx] = v
    return values[circuit.output]


def circuit_count_sat(circuit: VspCircuit, cap: int | None = None) -> int:
    """Input assignments (bit i = i-th INPUT gate) making the output true."""
    order = topological_order(circuit)
    n = circuit.num_inputs
    check_cap("circuit inputs", n, cap)
    return sum(int(np.count_nonzero(_evaluate(circuit, order, a))) for a in _chunks(n))



# --- covering families of q-subsets -----------------------------------------


def count_covering_q_families(j: int, q: int, t_star: int, cap: int | None = None) -> int:
    """Families of ``t_star`` distinct q-subsets of ``{0..j-1}`` whose union is everything.

    Plain enumeration over all families; the number of q-subsets is capped.
    """
    if q < 1 or t_star < 0 or j < 0:
        raise ParameterError("need q >= 1, t_star >= 0, j >= 0")
    blocks = [mask_of(c) for c in combinations(range(j), q)]
    check_cap("q-subsets", len(blocks), cap)
    full = (1 << j) - 1
    return sum(1 for fam in combinations(blocks, t_star) if _union_of(fam) == full)


def _union_of(masks) -> int:
    u = 0
    for s in masks:
        u |= s
    return u
