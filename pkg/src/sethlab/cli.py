"""Command-line front end: ``sethlab reduce | solve | verify | bench``.

Exit codes: 0 pass / YES / odd, 1 fail / NO / even, 2 usage or input
error, 3 capacity exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bench import BENCHMARKS, run_bench
from .caps import ENV_VAR
from .errors import CapacityError, ParameterError, ParseError, StructuralError
from .instances import FORMAT_OF, SizeIndexedCounts, parse_instance, serialize_instance
from . import oracles
from . import reductions_branch as rb
from . import reductions_dp as rd
from .suites import SUITES, run_suite

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class Output:
    """Collects report fields; prints them as ``key: value`` lines or one JSON document."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.doc: dict = {}

    def put(self, key: str, value):
        self.doc[key] = value

    def emit(self, stream=None):
        stream = stream or sys.stdout
        if self.fmt == "json":
            print(json.dumps(self.doc, indent=2, sort_keys=True, default=str), file=stream)
            return
        for key, value in self.doc.items():
            if isinstance(value, dict):
                print(f"{key}:", file=stream)
                for k, v in value.items():
                    print(f"  {k}: {v}", file=stream)
            else:
                print(f"{key}: {value}", file=stream)


def _read(path: str, fmt: str):
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    return parse_instance(fmt, data)


def _write(instance, path: str):
    text = serialize_instance(instance)
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="ascii")


def _counts_dict(c: SizeIndexedCounts) -> dict:
    return {str(k): v for k, v in c.items()}


def _need(args, name):
    value = getattr(args, name)
    if value is None:
        raise ParameterError(f"--{name} is required here")
    return value


# --- reduce ----------------------------------------------------------------

# name -> input format
REDUCTIONS = {
    "cnf-to-hittingset": "dimacs-cnf",
    "cnf-to-parity-hittingset": "dimacs-cnf",
    "hs-to-splitting": "setsys",
    "splitting-to-nae": "setsys",
    "nae-to-cnf": "dimacs-cnf",
    "hs-to-monotone-cnf": "setsys",
    "cnf-to-vsp": "dimacs-cnf",
    "setcover-incidence": "setsys",
    "setcover-group": "setsys",
    "setcover-to-steiner": "setsys",
    "setcover-to-cvc": "setsys",
    "setcover-to-setpart": "setsys",
    "setpart-to-subsetsum": "setsys",
}


def _reduce_one(args, inst, out: Output):
    """A single instance, or a list of (instance, metadata) pairs for multi-output reductions."""
    name = args.reduction
    if name == "cnf-to-hittingset":
        r = rb.cnf_to_hitting_set(inst, _need(args, "p"), pad=args.pad)
        out.put("target", r.target)
        out.put("padding", r.padding)
        return r.system
    if name == "cnf-to-parity-hittingset":
        return rb.cnf_to_parity_hitting_set(inst, _need(args, "p"), pad=args.pad)
    if name == "hs-to-splitting":
        hs = rb.HittingSetInstance(inst, _need(args, "t"))
        p = _need(args, "p")
        comps = rb.splitting_compositions(hs, p)
        return [(s, {"composition": list(c)}) for s, c in zip(rb.hitting_set_to_set_splitting(hs, p), comps)]
    if name == "splitting-to-nae":
        return rb.set_splitting_to_nae_cnf(inst)
    if name == "nae-to-cnf":
        return rb.nae_to_cnf(inst)
    if name == "hs-to-monotone-cnf":
        return rb.hitting_set_to_monotone_cnf(inst)
    if name == "cnf-to-vsp":
        return rb.cnf_to_vsp_circuit(inst)
    if name == "setcover-incidence":
        return rd.incidence_graph(inst)
    if name == "setcover-group":
        g = rd.group_set_cover(inst, _need(args, "t"), Fraction(args.alpha))
        out.put("q", g.q)
        out.put("target", g.target)
        out.put("padding", g.padding)
        return g.system
    if name == "setcover-to-steiner":
        r = rd.set_cover_to_steiner(inst, args.t)
        out.put("size_offset", r.size_offset)
        out.put("target", r.target)
        out.put("trivially_no", r.trivially_no)
        return r.graph
    if name == "setcover-to-cvc":
        r = rd.set_cover_to_cvc(inst, args.t)
        out.put("target", r.target)
        out.put("trivially_no", r.trivially_no)
        return r.graph
    if name == "setcover-to-setpart":
        system, t = rd.set_cover_to_set_partitioning(inst, args.t)
        out.put("target", t)
        return system
    if name == "setpart-to-subsetsum":
        t = _need(args, "t")
        return [(s, {"t0": t0}) for t0, s in enumerate(rd.set_partitioning_to_subset_sum_all(inst, t), start=1)]
    raise ParameterError(f"unknown reduction {name!r}")


def cmd_reduce(args, out: Output) -> int:
    inst = _read(args.input, REDUCTIONS[args.reduction])
    result = _reduce_one(args, inst, out)
    out.put("reduction", args.reduction)
    if not isinstance(result, list):
        _write(result, args.output)
        out.put("output", args.output)
        out.put("format", FORMAT_OF[type(result)])
        # with the instance on stdout, the report goes to stderr
        out.emit(sys.stderr if args.output == "-" else None)
        return EXIT_OK
    if args.output == "-":
        raise ParameterError("multi-output reductions need an output directory")
    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    entries = []
    width = max(3, len(str(len(result))))
    for i, (instance, meta) in enumerate(result, start=1):
        fmt = FORMAT_OF[type(instance)]
        fname = f"{i:0{width}d}.{'ss' if fmt == 'subsetsum' else fmt}"
        (outdir / fname).write_text(serialize_instance(instance), encoding="ascii")
        entries.append({"index": i, "file": fname, "format": fmt, **meta})
    manifest = {"reduction": args.reduction, "input": args.input, "params": _params(args), "outputs": entries}
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    out.put("outputs", len(entries))
    out.put("manifest", str(outdir / "manifest.json"))
    out.emit()
    return EXIT_OK


def _params(args) -> dict:
    return {k: getattr(args, k) for k in ("p", "t", "alpha", "pad") if getattr(args, k, None) is not None}


# --- solve -----------------------------------------------------------------

PROBLEMS = {
    "cnf": "dimacs-cnf",
    "nae": "dimacs-cnf",
    "hittingset": "setsys",
    "setcover": "setsys",
    "setsplitting": "setsys",
    "setpart": "setsys",
    "psetcover": "setsys",
    "steiner": "graph",
    "cvc": "graph",
    "bipartite-is": "graph",
    "subsetsum": "subsetsum",
    "circuit": "circuit",
}


SCALAR_COUNTERS = {
    "cnf": oracles.count_satisfying,
    "nae": oracles.count_nae_assignments,
    "setsplitting": oracles.count_set_splittings,
    "circuit": oracles.circuit_count_sat,
}


def _yes(out: Output, flag: bool) -> int:
    out.put("answer", "YES" if flag else "NO")
    return EXIT_OK if flag else EXIT_NO


def _parity(out: Output, bit: int) -> int:
    out.put("parity", bit)
    return EXIT_OK if bit else EXIT_NO


def _solve_sized(args, out: Output, counts: SizeIndexedCounts, what: str) -> int:
    """Shared handling for families whose counts are indexed by solution size."""
    if args.mode_ == "count":
        out.put("counts", _counts_dict(counts))
        out.put("total", counts.total())
        return EXIT_OK
    if args.mode_ == "parity":
        bit = counts[args.size] & 1 if args.size is not None else counts.parity()
        return _parity(out, bit)
    t = _need(args, "t")
    out.put(f"min_{what}", counts.minimum())
    m = counts.minimum()
    return _yes(out, m is not None and m <= t)


def cmd_solve(args, out: Output) -> int:
    inst = _read(args.input, PROBLEMS[args.problem])
    out.put("problem", args.problem)
    mode = args.mode_
    out.put("query", mode)
    prob = args.problem
    if prob in SCALAR_COUNTERS:
        count = SCALAR_COUNTERS[prob](inst)
        if mode == "count":
            out.put("count", count)
            return EXIT_OK
        return _parity(out, count & 1) if mode == "parity" else _yes(out, count > 0)
    if prob == "bipartite-is":
        if mode == "count":
            out.put("count", oracles.count_bipartite_independent_sets(inst))
            return EXIT_OK
        if mode == "parity":
            return _parity(out, oracles.parity_bipartite_independent_sets(inst))
        raise ParameterError("bipartite-is supports --count and --parity")
    if prob == "subsetsum":
        if mode != "decide":
            raise ParameterError("subsetsum supports --decide only")
        return _yes(out, oracles.subset_sum_decide(inst, args.mode))
    if prob == "psetcover":
        if mode != "parity":
            raise ParameterError("psetcover supports --parity only")
        res = rd.run_parity_cover_pipeline(inst, Fraction(args.alpha), density=args.density)
        out.put("q", res.q)
        out.put("oracle_calls", len(res.steps))
        out.put("size_parities", {str(j): b for j, b in res.ledger.s.items()})
        return _parity(out, res.parity)
    if prob == "setcover" and mode == "decide" and args.mode == "dp":
        m = oracles.min_set_cover_dp(inst)
        out.put("min_setcover", m)
        return _yes(out, m is not None and m <= _need(args, "t"))
    counters = {
        "hittingset": oracles.count_hitting_sets_by_size,
        "setcover": oracles.count_set_covers_by_size,
        "setpart": oracles.count_set_partitionings_by_size,
        "steiner": oracles.count_steiner_sets_by_size,
        "cvc": oracles.count_cvc_by_size,
    }
    return _solve_sized(args, out, counters[prob](inst), prob)


# --- verify ----------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    """``3,6`` or ``10..20`` (inclusive) or a mix: ``3,5..7``."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        elif part:
            values.append(int(part))
    if not values:
        raise argparse.ArgumentTypeError(f"empty size list {text!r}")
    return values


def cmd_verify(args, out: Output) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    summaries = []
    reports = []
    for name in names:
        rep = run_suite(name, args.seeds, args.seed, args.n, args.workers)
        ok &= rep.passed
        summaries.append(rep.summary())
        reports.append(rep.to_dict())
        if args.format == "text":
            for r in rep.records:
                if args.verbose or not r.passed:
                    status = "PASS" if r.passed else "FAIL"
                    print(f"{name} case {r.case_id:04d} seed {r.seed} {status} {json.dumps(r.params)} {json.dumps(r.detail, default=str)}")
            s = rep.summary()
            print(f"{name}: {s['passed']}/{s['cases']} passed in {s['elapsed_s']}s {'OK' if rep.passed else 'FAILED'}")
    if args.report:
        Path(args.report).write_text(json.dumps({"suites": reports}, indent=2, default=str) + "\n")
    if args.format == "json":
        out.put("suites", summaries if args.summary_only else reports)
        out.put("ok", ok)
        out.emit()
    return EXIT_OK if ok else EXIT_NO


# --- bench -----------------------------------------------------------------


def cmd_bench(args, out: Output) -> int:
    rep = run_bench(args.bench, args.n, args.seed, args.repeats)
    if args.format == "json":
        out.put("bench", rep.to_dict())
        out.emit()
        return EXIT_OK
    print(f"bench {rep.name} seed {rep.seed} best of {rep.repeats}")
    print(f"{rep.variable:>8}  {'seconds':>12}")
    for s, t in zip(rep.sizes, rep.seconds):
        print(f"{s:>8}  {t:>12.6f}")
    print(f"slope of log2(seconds) vs {rep.variable}: {rep.slope:.3f}")
    return EXIT_OK


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sethlab", description="Reductions between hard problems, with exact oracles.")
    ap.add_argument("--version", action="version", version=f"sethlab {__version__}")
    ap.add_argument("--seed", type=int, default=0, help="base seed for verify and bench (default 0)")
    ap.add_argument("--cap", type=int, help=f"brute-force exponent cap (overrides ${ENV_VAR})")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reduce", help="apply a reduction")
    r.add_argument("reduction", choices=sorted(REDUCTIONS))
    r.add_argument("input", help="input file, or - for stdin")
    r.add_argument("output", help="output file (- for stdout) or directory for multi-output reductions")
    r.add_argument("--p", type=int)
    r.add_argument("--t", type=int)
    r.add_argument("--alpha", default="1/2")
    r.add_argument("--pad", action="store_true", help="pad variables with forced-false ones so p divides n")
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="run an exact solver")
    s.add_argument("problem", choices=sorted(PROBLEMS))
    s.add_argument("input")
    q = s.add_mutually_exclusive_group()
    q.add_argument("--count", dest="mode_", action="store_const", const="count")
    q.add_argument("--parity", dest="mode_", action="store_const", const="parity")
    q.add_argument("--decide", dest="mode_", action="store_const", const="decide")
    s.add_argument("--size", type=int, help="with --parity: only solutions of this size")
    s.add_argument("--t", type=int, help="with --decide: solution size bound")
    s.add_argument("--mode", choices=("dp", "brute"), default="dp")
    s.add_argument("--alpha", default="1/2")
    s.add_argument("--density", type=Fraction)
    s.set_defaults(func=cmd_solve, mode_="count")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("--seeds", type=int, help="number of seeded cases (suite default otherwise)")
    v.add_argument("--n", type=_int_list, help="sizes to draw from, e.g. 3,6 or 6..8")
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--report", help="write the full JSON report here")
    v.add_argument("--verbose", action="store_true", help="print passing records too")
    v.add_argument("--summary-only", action="store_true", help="JSON output without per-case records")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="fit an empirical growth exponent")
    b.add_argument("bench", choices=sorted(BENCHMARKS))
    b.add_argument("--n", type=_int_list, help="sweep, e.g. 10..20")
    b.add_argument("--repeats", type=int, default=3)
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    # the cap travels through the environment so worker processes see it too
    saved = os.environ.get(ENV_VAR)
    if args.cap is not None:
        os.environ[ENV_VAR] = str(args.cap)
    out = Output(args.format)
    try:
        code = args.func(args, out)
        if args.command == "solve":
            out.emit()
        return code
    except CapacityError as exc:
        print(f"sethlab: capacity: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, ParameterError, StructuralError, OSError, ValueError) as exc:
        print(f"sethlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if saved is None:
            os.environ.pop(ENV_VAR, None)
        else:
            os.environ[ENV_VAR] = saved


if __name__ == "__main__":
    sys.exit(main())
