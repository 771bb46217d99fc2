"""The fourteen acceptance criteria, each at its stated tolerance and time limit.

Every test prints one line ``criterion NN: PASS|FAIL ...`` straight to the
terminal. Run ``python tests/test_acceptance.py`` for the same lines without
pytest.
"""

import sys
import time

import pytest

from sethlab.bench import run_bench
from sethlab.suites import run_suite

LINES: list[str] = []


def _report(number: int, ok: bool, text: str, seconds: float, limit: float, capsys=None) -> bool:
    passed = ok and seconds < limit
    line = f"criterion {number:02d}: {'PASS' if passed else 'FAIL'}  {text}  [{seconds:.2f}s < {limit:g}s]"
    LINES.append(line)
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    return passed


def _suite(number, name, cases, limit, capsys=None, sizes=None, extra=lambda rep: (True, "")):
    rep = run_suite(name, cases, 0, sizes)
    ok_extra, note = extra(rep)
    s = rep.summary()
    text = f"{name}: {s['passed']}/{s['cases']} cases exact" + (f"; {note}" if note else "")
    if rep.failures:
        text += f"; first failure {rep.failures[0].params} {rep.failures[0].detail}"
    return _report(number, rep.passed and ok_extra and s["cases"] == cases, text, rep.elapsed, limit, capsys)


def _lucas_pairs(rep):
    pairs = sum(r.detail["pairs"] for r in rep.records)
    return pairs == 2145, f"{pairs} (a, b) pairs"


def _pipeline_bounds(rep):
    t = max(r.detail["max_target"] for r in rep.records if "max_target" in r.detail)
    mult = max(r.detail["max_multiplicity"] for r in rep.records if "max_multiplicity" in r.detail)
    odd = sum(r.detail.get("oracle", 0) for r in rep.records)
    return True, f"{odd} odd-parity inputs; largest sub-instance target {t}, largest duplicate multiplicity {mult}"


CRITERIA = {
    1: lambda c: _suite(1, "sattohit", 200, 60, c, (3, 6)),
    2: lambda c: _suite(2, "psattophit", 200, 120, c, (3, 6)),
    3: lambda c: _suite(3, "flip", 200, 30, c),
    4: lambda c: _suite(4, "lucas", 65, 1, c, extra=_lucas_pairs),
    5: lambda c: _suite(5, "splitting-chain", 100, 120, c),
    6: lambda c: _suite(6, "setcovera", 100, 60, c),
    7: lambda c: _suite(7, "psetcover-pipeline", 100, 300, c, extra=_pipeline_bounds),
    8: lambda c: _suite(8, "oddpartition", 35, 5, c),
    9: lambda c: _suite(9, "steiner", 100, 120, c),
    10: lambda c: _suite(10, "cvc", 100, 180, c),
    11: lambda c: _suite(11, "setpart", 100, 120, c),
    12: lambda c: _suite(12, "vsp", 50, 30, c),
    13: lambda c: _suite(13, "roundtrip", 500, 10, c),
}


def _bench(capsys=None) -> bool:
    start = time.perf_counter()
    slopes = {name: run_bench(name, range(10, 21), seed=0, repeats=3).slope for name in ("setcover-dp", "cnf-brute")}
    ok = all(abs(s - 1.0) <= 0.2 for s in slopes.values())
    text = ", ".join(f"{k} slope {v:.3f}" for k, v in slopes.items()) + " (want 1.0 +/- 0.2)"
    return _report(14, ok, text, time.perf_counter() - start, 600, capsys)


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    assert CRITERIA[number](capsys)


def test_criterion_14_bench(capsys):
    assert _bench(capsys)


if __name__ == "__main__":
    results = [CRITERIA[k](None) for k in sorted(CRITERIA)] + [_bench()]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
