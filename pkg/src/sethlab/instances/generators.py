"""Seeded random instance generators.

Every generator is a pure function of its arguments: it builds a private
``random.Random(seed)`` and never touches global state.
"""

from __future__ import annotations

import random
from math import comb

from ..errors import ParameterError
from .types import CnfFormula, Gate, Graph, Literal, SetSystem, SubsetSumInstance, VspCircuit, mask_of

FAMILIES = ("cnf", "setsys", "graph", "graph-bipartite", "subsetsum", "circuit")


def random_cnf(n: int, m: int, k: int, seed: int, exact_width: bool = False) -> CnfFormula:
    """``m`` clauses over ``n`` variables, each of width 1..k (exactly k if asked)."""
    if n < 1 or m < 0 or k < 1:
        raise ParameterError("need n >= 1, m >= 0, k >= 1")
    if k > n:
        raise ParameterError(f"clause width {k} exceeds {n} variables")
    rng = random.Random(seed)
    clauses = []
    for _ in range(m):
        w = k if exact_width else rng.randint(1, k)
        vars_ = rng.sample(range(n), w)
        clauses.append(tuple(Literal(v, rng.random() < 0.5) for v in vars_))
    return CnfFormula(n, tuple(clauses))


def random_set_system(n: int, m: int, k: int, seed: int, min_size: int = 1) -> SetSystem:
    """``m`` distinct sets over ``n`` elements with sizes in ``[min_size, k]``."""
    if n < 0 or m < 0 or k < 0:
        raise ParameterError("need n, m, k >= 0")
    k = min(k, n)
    if min_size > k:
        if m:
            raise ParameterError(f"no sets of size in [{min_size}, {k}] over {n} elements")
        return SetSystem(n)
    available = sum(comb(n, s) for s in range(min_size, k + 1))
    if m > available:
        raise ParameterError(f"only {available} distinct sets of size {min_size}..{k} exist over {n} elements")
    rng = random.Random(seed)
    chosen: set[int] = set()
    while len(chosen) < m:
        size = rng.randint(min_size, k)
        chosen.add(mask_of(rng.sample(range(n), size)))
    return SetSystem(n, tuple(chosen))


def random_coverable_set_system(n: int, m: int, k: int, seed: int) -> SetSystem:
    """A random partition of the universe into blocks of size <= k, plus random extra sets.

    The planted partition guarantees at least one cover, so cover counts are
    not trivially zero. The result has ``max(m, blocks)`` distinct sets.
    """
    if n < 1 or k < 1:
        raise ParameterError("need n, k >= 1")
    k = min(k, n)
    available = sum(comb(n, s) for s in range(1, k + 1))
    if m > available:
        raise ParameterError(f"only {available} distinct sets of size 1..{k} exist over {n} elements")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    chosen: set[int] = set()
    i = 0
    while i < n:
        w = rng.randint(1, k)
        chosen.add(mask_of(order[i : i + w]))
        i += w
    while len(chosen) < m:
        chosen.add(mask_of(rng.sample(range(n), rng.randint(1, k))))
    return SetSystem(n, tuple(chosen))


def random_graph(n: int, p: float, seed: int, terminals: int | None = None) -> Graph:
    if n < 0 or not 0 <= p <= 1:
        raise ParameterError("need n >= 0 and 0 <= p <= 1")
    rng = random.Random(seed)
    edges = tuple((u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p)
    term = None
    if terminals is not None:
        if terminals > n:
            raise ParameterError("more terminals than vertices")
        term = tuple(rng.sample(range(n), terminals))
    return Graph(n, edges, term)


def random_bipartite_graph(a: int, b: int, p: float, seed: int) -> Graph:
    if a < 0 or b < 0 or not 0 <= p <= 1:
        raise ParameterError("need a, b >= 0 and 0 <= p <= 1")
    rng = random.Random(seed)
    edges = tuple((u, a + v) for u in range(a) for v in range(b) if rng.random() < p)
    return Graph(a + b, edges, None, a)


def random_subset_sum(n: int, max_item: int, seed: int, hit: bool | None = None) -> SubsetSumInstance:
    """Items uniform in ``[1, max_item]``; ``hit=True`` plants a reachable target."""
    if n < 0 or max_item < 1:
        raise ParameterError("need n >= 0 and max_item >= 1")
    rng = random.Random(seed)
    items = tuple(rng.randint(1, max_item) for _ in range(n))
    if hit is None:
        hit = rng.random() < 0.5
    if hit:
        target = sum(a for a in items if rng.random() < 0.5)
    else:
        target = rng.randint(0, max(1, sum(items)))
    return SubsetSumInstance(items, target)


def random_circuit(n: int, gates: int, seed: int) -> VspCircuit:
    """A random fan-in <= 2 circuit; gate ``i`` reads only from gates ``< i``."""
    if n < 1 or gates < 0:
        raise ParameterError("need n >= 1 and gates >= 0")
    rng = random.Random(seed)
    out = [Gate("INPUT") for _ in range(n)]
    for _ in range(gates):
        kind = rng.choice(("AND", "OR", "NOT"))
        arity = 1 if kind == "NOT" else 2
        out.append(Gate(kind, tuple(rng.randrange(len(out)) for _ in range(arity))))
    return VspCircuit(tuple(out), len(out) - 1)


def random_instance(family: str, params: dict):
    """Dispatch on ``family``; ``params`` holds n, m, k, seed (and p, a, b where relevant)."""
    seed = params.get("seed", 0)
    if family == "cnf":
        return random_cnf(params["n"], params["m"], params["k"], seed)
    if family == "setsys":
        if params["n"] < 1 or params["m"] < 1 or params["k"] < 1:
            raise ParameterError("need n, m, k >= 1")
        if params["k"] > params["n"]:
            raise ParameterError(f"set size bound {params['k']} exceeds universe {params['n']}")
        return random_set_system(params["n"], params["m"], params["k"], seed)
    if family == "graph":
        return random_graph(params["n"], params.get("p", 0.5), seed, params.get("terminals"))
    if family == "graph-bipartite":
        return random_bipartite_graph(params["a"], params["b"], params.get("p", 0.5), seed)
    if family == "subsetsum":
        return random_subset_sum(params["n"], params.get("max_item", 50), seed)
    if family == "circuit":
        return random_circuit(params["n"], params.get("m", 2 * params["n"]), seed)
    raise ParameterError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
