"""Seeded verification suites, one per reduction contract.

A suite is a function ``case(seed, sizes) -> (params, passed, detail)``
plus a default case count. Cases draw everything from
``random.Random(base_seed + case_id)``, so every record can be replayed on
its own. Exceptions inside a case are recorded as failures.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import comb

from .instances import (
    FORMATS,
    SetSystem,
    parse_instance,
    random_circuit,
    random_cnf,
    random_coverable_set_system,
    random_graph,
    random_set_system,
    random_subset_sum,
    serialize_instance,
)
from .instances.generators import random_bipartite_graph
from .oracles import (
    count_covering_q_families,
    count_cvc_by_size,
    count_hitting_sets_by_size,
    count_nae_assignments,
    count_satisfying,
    count_set_covers_by_size,
    count_set_partitionings_by_size,
    count_set_splittings,
    count_steiner_sets_by_size,
    exists_set_splitting,
    circuit_count_sat,
    min_hitting_set_size,
    min_set_cover_dp,
    subset_sum_decide,
)
from .parity_math import binom_parity
from .reductions_branch import (
    HittingSetInstance,
    cnf_to_hitting_set,
    cnf_to_parity_hitting_set,
    cnf_to_vsp_circuit,
    hitting_set_to_monotone_cnf,
    hitting_set_to_set_splitting,
    make_block_code,
    nae_to_cnf,
    set_splitting_to_nae_cnf,
    verify_vsp_labeling,
)
from .reductions_dp import (
    cvc_counts_from_covers,
    cvc_parity_recover,
    dj_coefficient,
    flip_parities,
    group_set_cover,
    run_parity_cover_pipeline,
    set_cover_to_cvc,
    set_cover_to_set_partitioning,
    set_cover_to_steiner,
    set_partitioning_to_subset_sum_all,
)


@dataclass(frozen=True)
class CaseRecord:
    case_id: int
    seed: int
    passed: bool
    params: dict
    detail: dict = field(default_factory=dict)


@dataclass
class SuiteReport:
    suite: str
    base_seed: int
    cases: int
    sizes: tuple[int, ...] | None
    records: list[CaseRecord]
    elapsed: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def failures(self) -> list[CaseRecord]:
        return [r for r in self.records if not r.passed]

    def summary(self) -> dict:
        return {
            "suite": self.suite,
            "base_seed": self.base_seed,
            "cases": self.cases,
            "sizes": list(self.sizes) if self.sizes else None,
            "passed": sum(r.passed for r in self.records),
            "failed": len(self.failures),
            "ok": self.passed,
            "elapsed_s": round(self.elapsed, 3),
        }

    def to_dict(self) -> dict:
        return {"summary": self.summary(), "records": [asdict(r) for r in self.records]}


def _pick(rng: random.Random, sizes, lo: int, hi: int) -> int:
    return rng.choice(sizes) if sizes else rng.randint(lo, hi)


def _system(rng: random.Random, n: int, m_max: int, k_max: int, seed: int, m_min: int = 0) -> SetSystem:
    """Random distinct nonempty sets; m is clamped to what exists."""
    k = rng.randint(1, max(1, min(k_max, n))) if n else 0
    available = sum(comb(n, s) for s in range(1, k + 1))
    m = min(rng.randint(m_min, m_max), available)
    return random_set_system(n, m, k, seed)


def _at_most(minimum: int | None, t: int) -> bool:
    return minimum is not None and minimum <= t


# --- branching-side suites --------------------------------------------------


def _cnf_case(seed: int, sizes):
    rng = random.Random(seed)
    n = _pick(rng, sizes or (3, 6), 3, 6)
    m = rng.randint(0, 6)
    return random_cnf(n, m, min(3, n), seed), {"n": n, "m": m, "k": min(3, n), "p": 3}


def case_sattohit(seed: int, sizes):
    formula, params = _cnf_case(seed, sizes)
    inst = cnf_to_hitting_set(formula, 3, pad=True)
    want = count_satisfying(formula)
    got = count_hitting_sets_by_size(inst.system)[inst.target]
    pp = make_block_code(3).p_prime
    ok = want == got and inst.system.width <= pp * max(1, formula.width)
    return params, ok, {"sat": want, "hitting": got, "target": inst.target, "universe": inst.system.universe_size}


def case_psattophit(seed: int, sizes):
    formula, params = _cnf_case(seed, sizes)
    system = cnf_to_parity_hitting_set(formula, 3, pad=True)
    want = count_satisfying(formula) & 1
    got = count_hitting_sets_by_size(system).parity()
    return params, want == got, {"sat_parity": want, "hitting_parity": got, "universe": system.universe_size}


def case_splitting_chain(seed: int, sizes):
    rng = random.Random(seed)
    n = _pick(rng, sizes, 1, 8)
    p = rng.choice((1, 2))
    system = _system(rng, n, 8, 3, seed)
    params = {"n": n, "m": system.num_sets, "p": p}
    minimum = min_hitting_set_size(system)
    mismatched = []
    for t in range(n + 1):
        outs = hitting_set_to_set_splitting(HittingSetInstance(system, t), p)
        if any(exists_set_splitting(o) for o in outs) != _at_most(minimum, t):
            mismatched.append(t)
    nae = set_splitting_to_nae_cnf(system)
    splits = count_set_splittings(system)
    nae_count = count_nae_assignments(nae)
    cnf_count = count_satisfying(nae_to_cnf(nae))
    mono = count_satisfying(hitting_set_to_monotone_cnf(system))
    hits = count_hitting_sets_by_size(system).total()
    ok = not mismatched and splits == nae_count == cnf_count and mono == hits
    detail = {"min_hitting": minimum, "bad_t": mismatched, "splittings": splits, "nae": nae_count,
              "cnf_of_nae": cnf_count, "monotone_sat": mono, "hitting_total": hits}
    return params, ok, detail


def case_vsp(seed: int, sizes):
    rng = random.Random(seed)
    n = _pick(rng, sizes, 1, 8)
    m = rng.randint(0, 10)
    k = min(3, n)
    formula = random_cnf(n, m, k, seed)
    circuit = cnf_to_vsp_circuit(formula)
    want, got = count_satisfying(formula), circuit_count_sat(circuit)
    labeled = verify_vsp_labeling(circuit)
    bound = 4 * k * m
    ok = want == got and labeled and circuit.wire_count <= bound
    return {"n": n, "m": m, "k": k}, ok, {"sat": want, "circuit": got, "labeling": labeled,
                                          "wires": circuit.wire_count, "bound": bound}


# --- set cover side ---------------------------------------------------------


def case_flip(seed: int, sizes):
    rng = random.Random(seed)
    n = _pick(rng, sizes, 0, 10)
    system = _system(rng, n, 10, n, seed)
    fp = flip_parities(system)
    return {"n": n, "m": system.num_sets}, fp.agree(), fp._asdict()


def case_setcovera(seed: int, sizes):
    rng = random.Random(seed)
    n = _pick(rng, sizes, 1, 10)
    system = _system(rng, n, 10, n, seed, m_min=1)
    alpha = Fraction(1, 2)
    minimum = count_set_covers_by_size(system).minimum()
    bad = []
    for t in range(n + 1):
        g = group_set_cover(system, t, alpha)
        out = min_set_cover_dp(g.system)
        size_ok = g.target <= alpha * g.system.universe_size and all(len(v) == g.q for v in g.provenance.values())
        width_ok = g.system.width <= g.q * max(1, g.source.width)
        if _at_most(minimum, t) != _at_most(out, g.target) or not size_ok or not width_ok:
            bad.append(t)
    return {"n": n, "m": system.num_sets, "alpha": "1/2"}, not bad, {"min_cover": minimum, "bad_t": bad}


PIPELINE_DENSITY = Fraction(1)


def case_psetcover_pipeline(seed: int, sizes):
    rng = random.Random(seed)
    n = _pick(rng, sizes or (6, 7, 8), 6, 8)
    k = min(3, n)
    m = rng.randint(-(-n // k), int(PIPELINE_DENSITY * n))
    system = random_coverable_set_system(n, m, k, seed)
    alpha = Fraction(1, 2)
    res = run_parity_cover_pipeline(system, alpha, density=PIPELINE_DENSITY)
    covers = count_set_covers_by_size(system)
    k_eff = max(1, system.width)
    mult_ok = all(s.max_multiplicity <= 1 << (k_eff * res.q * res.q) for s in res.steps)
    t_ok = all(s.target <= alpha * n for s in res.steps)
    sizes_ok = all(bit == covers[j] & 1 for j, bit in res.ledger.s.items())
    detail = {
        "oracle": covers.parity(),
        "pipeline": res.parity,
        "q": res.q,
        "z": res.z,
        "max_target": max((s.target for s in res.steps), default=0),
        "max_multiplicity": max((s.max_multiplicity for s in res.steps), default=0),
        "per_size_ok": sizes_ok,
        "escape": res.brute_force_escape,
    }
    ok = covers.parity() == res.parity and mult_ok and t_ok and sizes_ok
    return {"n": n, "m": system.num_sets, "k": k, "alpha": "1/2"}, ok, detail


_ODD_A = [(q, t) for q in (1, 2, 4) for t in range(7)]
_ODD_B = [(q, j) for q in (1, 2) for j in range(7)]


def case_oddpartition(case_id: int, sizes):
    if case_id < len(_ODD_A):
        q, t_star = _ODD_A[case_id]
        got = dj_coefficient(q * t_star, q, t_star)
        return {"q": q, "t_star": t_star, "j": q * t_star}, got == 1, {"d": got}
    q, j = _ODD_B[case_id - len(_ODD_A)]
    bad = [t for t in range(comb(j, q) + 1) if dj_coefficient(j, q, t) != count_covering_q_families(j, q, t) & 1]
    return {"q": q, "j": j}, not bad, {"bad_t_star": bad}


def _gadget_system(seed: int, sizes):
    rng = random.Random(seed)
    n = _pick(rng, sizes, 1, 5)
    return _system(rng, n, 6, n, seed)


def case_steiner(seed: int, sizes):
    system = _gadget_system(seed, sizes)
    n = system.universe_size
    red = set_cover_to_steiner(system)
    covers = count_set_covers_by_size(system)
    steiner = count_steiner_sets_by_size(red.graph)
    bad = [i for i in range(system.num_sets + 1) if covers[i] != steiner[n + i + 2]]
    stray = [v for v in steiner if v < n + 2 or v > n + 2 + system.num_sets]
    ok = not bad and not stray and red.trivially_no == (covers.total() == 0)
    return {"n": n, "m": system.num_sets}, ok, {"covers": covers.as_dict(), "bad_i": bad}


def case_cvc(seed: int, sizes):
    system = _gadget_system(seed, sizes)
    n = system.universe_size
    red = set_cover_to_cvc(system)
    covers = count_set_covers_by_size(system)
    cvc = count_cvc_by_size(red.graph)
    predicted = cvc_counts_from_covers(covers, n)
    bad_j = [j for j in range(red.graph.num_vertices + 1) if cvc[j] != predicted[j]]
    rec = cvc_parity_recover(cvc.mod2(), n, system.num_sets)
    bad_i = [i for i in range(system.num_sets + 1) if rec[i] != covers[i] & 1]
    return {"n": n, "m": system.num_sets}, not bad_j and not bad_i, {"bad_j": bad_j, "bad_i": bad_i}


def case_setpart(seed: int, sizes):
    rng = random.Random(seed)
    n = _pick(rng, sizes, 1, 10)
    system = _system(rng, n, 8, 3, seed)
    closed, _ = set_cover_to_set_partitioning(system)
    cover_min = count_set_covers_by_size(system).minimum()
    parts = count_set_partitionings_by_size(closed, method="dp")
    part_min = parts.minimum()
    bad_t = [t for t in range(1, n + 1) if _at_most(cover_min, t) != _at_most(part_min, t)]
    bad_t0 = []
    for t0, inst in enumerate(set_partitioning_to_subset_sum_all(closed, n), start=1):
        if subset_sum_decide(inst) != (parts[t0] > 0):
            bad_t0.append(t0)
    return {"n": n, "m": system.num_sets, "k": 3}, not bad_t and not bad_t0, {
        "closed_sets": closed.num_sets, "min_cover": cover_min, "bad_t": bad_t, "bad_t0": bad_t0}


def case_lucas(case_id: int, sizes):
    a = case_id
    row = [1]
    for _ in range(a):
        row = [1] + [(row[i] + row[i + 1]) & 1 for i in range(len(row) - 1)] + [1]
    bad = [b for b in range(a + 1) if binom_parity(a, b) != row[b]]
    return {"a": a}, not bad, {"pairs": a + 1, "bad_b": bad}


ROUNDTRIP_PER_FORMAT = 100


def _roundtrip_instance(fmt: str, seed: int):
    rng = random.Random(seed)
    if fmt == "dimacs-cnf":
        n = rng.randint(1, 12)
        return random_cnf(n, rng.randint(0, 15), min(4, n), seed)
    if fmt == "setsys":
        return _system(rng, rng.randint(0, 12), 15, 5, seed)
    if fmt == "graph":
        if rng.random() < 0.5:
            return random_bipartite_graph(rng.randint(0, 5), rng.randint(0, 5), rng.random(), seed)
        n = rng.randint(0, 10)
        return random_graph(n, rng.random(), seed, rng.randint(0, n))
    if fmt == "subsetsum":
        return random_subset_sum(rng.randint(0, 12), rng.choice((10, 1000, 10**12)), seed)
    return random_circuit(rng.randint(1, 6), rng.randint(0, 12), seed)


def case_roundtrip(seed: int, sizes):
    fmt = FORMATS[seed % len(FORMATS)]
    inst = _roundtrip_instance(fmt, seed)
    text = serialize_instance(inst)
    back = parse_instance(fmt, text)
    again = serialize_instance(back)
    return {"format": fmt}, back == inst and again == text, {"bytes": len(text)}


@dataclass(frozen=True)
class Suite:
    name: str
    case: object
    default_cases: int
    description: str
    seeded: bool = True  # False: case_id enumerates a fixed table


SUITES: dict[str, Suite] = {
    s.name: s
    for s in (
        Suite("sattohit", case_sattohit, 200, "#SAT equals hitting sets of the target size"),
        Suite("psattophit", case_psattophit, 200, "#SAT parity equals total hitting-set parity"),
        Suite("flip", case_flip, 200, "hitting sets, set covers and incidence independent sets agree mod 2"),
        Suite("lucas", case_lucas, 65, "binom_parity matches Pascal's triangle mod 2 for a <= 64", seeded=False),
        Suite("splitting-chain", case_splitting_chain, 100, "hitting set -> splitting -> NAE -> CNF"),
        Suite("setcovera", case_setcovera, 100, "grouping into q-fold unions keeps the decision"),
        Suite("psetcover-pipeline", case_psetcover_pipeline, 100, "parity pipeline equals oracle parity"),
        Suite("oddpartition", case_oddpartition, len(_ODD_A) + len(_ODD_B), "fiber parities", seeded=False),
        Suite("steiner", case_steiner, 100, "set covers map to Steiner sets"),
        Suite("cvc", case_cvc, 100, "connected vertex cover convolution and parity recovery"),
        Suite("setpart", case_setpart, 100, "subset closure and the subset-sum encoding"),
        Suite("vsp", case_vsp, 50, "CNF to labeled series-parallel circuit"),
        Suite("roundtrip", case_roundtrip, ROUNDTRIP_PER_FORMAT * len(FORMATS), "format round-trips"),
    )
}


def run_case(name: str, case_id: int, base_seed: int = 0, sizes=None) -> CaseRecord:
    suite = SUITES[name]
    seed = base_seed + case_id if suite.seeded else case_id
    try:
        params, ok, detail = suite.case(seed, sizes)
    except Exception as exc:  # a crash is a failed case, not a crashed suite
        return CaseRecord(case_id, seed, False, {}, {"error": f"{type(exc).__name__}: {exc}"})
    return CaseRecord(case_id, seed, bool(ok), params, detail)


def _run_one(args) -> CaseRecord:
    return run_case(*args)


def run_suite(name: str, cases: int | None = None, base_seed: int = 0, sizes=None, workers: int = 1) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(name)
    suite = SUITES[name]
    count = suite.default_cases if cases is None or not suite.seeded else cases
    sizes = tuple(sizes) if sizes else None
    jobs = [(name, i, base_seed, sizes) for i in range(count)]
    start = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            records = list(pool.map(_run_one, jobs, chunksize=max(1, count // (4 * workers))))
    else:
        records = [_run_one(j) for j in jobs]
    records.sort(key=lambda r: r.case_id)
    return SuiteReport(name, base_seed, count, sizes, records, time.perf_counter() - start)
