"""Text formats for every instance family.

``parse_instance(fmt, text)`` and ``serialize_instance(instance)`` are exact
inverses on canonical text. Grammar summary::

    dimacs-cnf  p cnf N M / clause lines of 1-based literals ending in 0
                (an optional "c density X" comment records the density bound)
    setsys      p setsys N M [multiset] / M lines of 0-based elements
                (an empty line is the empty set) / optional "size-bound K"
    graph       p graph N M / M lines "u v" / optional "terminals ..." /
                optional "bipartition A"
    subsetsum   one item per line / final "t T"
    circuit     "idx KIND [in1 [in2]]" per gate / optional "label idx v" /
                final "out idx"
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ParameterError, ParseError
from .types import CnfFormula, Gate, Graph, Literal, SetSystem, SubsetSumInstance, VspCircuit, elements_of, mask_of

FORMATS = ("dimacs-cnf", "setsys", "graph", "subsetsum", "circuit")


def _lines(text):
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("ascii")
    return text.splitlines()


def _int(tok, lineno, what="integer"):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected {what}, got {tok!r}", lineno) from None


def _parse_cnf(lines):
    header = None
    density = None
    clauses = []
    pending = []
    for lineno, raw in enumerate(lines, 1):
        toks = raw.split()
        if not toks:
            continue
        if toks[0] == "c":
            if len(toks) == 3 and toks[1] == "density":
                try:
                    density = Fraction(toks[2])
                except ValueError:
                    raise ParseError(f"bad density {toks[2]!r}", lineno) from None
            continue
        if toks[0] == "p":
            if header is not None or len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("malformed header, expected 'p cnf N M'", lineno)
            header = (_int(toks[2], lineno), _int(toks[3], lineno))
            continue
        if header is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        n = header[0]
        for tok in toks:
            lit = _int(tok, lineno, "literal")
            if lit == 0:
                vars_ = [abs(x) for x in pending]
                if len(set(vars_)) != len(vars_):
                    raise ParseError("variable repeated within a clause", lineno)
                clauses.append((lineno, pending))
                pending = []
            elif abs(lit) > n:
                raise ParseError(f"literal {lit} out of range for {n} variables", lineno)
            else:
                pending.append(lit)
    if header is None:
        raise ParseError("missing 'p cnf' header", len(lines) or 1)
    if pending:
        raise ParseError("last clause is not terminated by 0", len(lines))
    if len(clauses) != header[1]:
        raise ParseError(f"header announces {header[1]} clauses, found {len(clauses)}", len(lines))
    return CnfFormula(
        header[0],
        tuple(tuple(Literal.from_dimacs(x) for x in c) for _, c in clauses),
        density,
    )


def _serialize_cnf(f: CnfFormula) -> str:
    out = [f"p cnf {f.num_vars} {f.num_clauses}"]
    if f.density is not None:
        out.append(f"c density {f.density}")
    for clause in f.dimacs_clauses():
        out.append(" ".join(str(x) for x in clause + [0]))
    return "\n".join(out) + "\n"


def _parse_setsys(lines):
    it = iter(enumerate(lines, 1))
    header = None
    for lineno, raw in it:
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        if toks[0] != "p" or len(toks) not in (4, 5) or toks[1] != "setsys":
            raise ParseError("malformed header, expected 'p setsys N M [multiset]'", lineno)
        if len(toks) == 5 and toks[4] != "multiset":
            raise ParseError(f"unknown header flag {toks[4]!r}", lineno)
        header = (_int(toks[2], lineno), _int(toks[3], lineno), len(toks) == 5, lineno)
        break
    if header is None:
        raise ParseError("missing 'p setsys' header", len(lines) or 1)
    n, m, multiset, hline = header
    masks = []
    seen = {}
    for _ in range(m):
        try:
            lineno, raw = next(it)
        except StopIteration:
            raise ParseError(f"header announces {m} sets, file ends early", len(lines)) from None
        elems = [_int(tok, lineno, "element") for tok in raw.split()]
        for e in elems:
            if not 0 <= e < n:
                raise ParseError(f"element {e} outside [0, {n})", lineno)
        if len(set(elems)) != len(elems):
            raise ParseError("element repeated within a set", lineno)
        mask = mask_of(elems)
        if not multiset and mask in seen:
            raise ParseError(f"duplicate set (first seen on line {seen[mask]}) in a non-multiset file", lineno)
        seen.setdefault(mask, lineno)
        masks.append(mask)
    bound = None
    for lineno, raw in it:
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        if toks[0] == "size-bound" and len(toks) == 2 and bound is None:
            bound = _int(toks[1], lineno)
            widest = max((s.bit_count() for s in masks), default=0)
            if widest > bound:
                raise ParseError(f"a set of size {widest} exceeds size-bound {bound}", lineno)
            continue
        raise ParseError(f"unexpected line {raw!r}", lineno)
    return SetSystem(n, tuple(masks), multiset)


def _serialize_setsys(s: SetSystem) -> str:
    head = f"p setsys {s.universe_size} {s.num_sets}" + (" multiset" if s.multiset else "")
    out = [head]
    out.extend(" ".join(str(e) for e in elements_of(mask)) for mask in s.sets)
    out.append(f"size-bound {s.width}")
    return "\n".join(out) + "\n"


def _parse_graph(lines):
    header = None
    edges = []
    terminals = None
    bipartition = None
    for lineno, raw in enumerate(lines, 1):
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        if toks[0] == "p":
            if header is not None or len(toks) != 4 or toks[1] != "graph":
                raise ParseError("malformed header, expected 'p graph N M'", lineno)
            header = (_int(toks[2], lineno), _int(toks[3], lineno))
            continue
        if header is None:
            raise ParseError("content before 'p graph' header", lineno)
        n = header[0]
        if toks[0] == "terminals":
            if terminals is not None:
                raise ParseError("second terminals line", lineno)
            terminals = [_int(t, lineno, "vertex") for t in toks[1:]]
            for t in terminals:
                if not 0 <= t < n:
                    raise ParseError(f"terminal {t} outside [0, {n})", lineno)
            continue
        if toks[0] == "bipartition":
            if bipartition is not None or len(toks) != 2:
                raise ParseError("malformed bipartition line", lineno)
            bipartition = _int(toks[1], lineno)
            continue
        if len(toks) != 2:
            raise ParseError("edge lines hold exactly two vertices", lineno)
        u, v = (_int(t, lineno, "vertex") for t in toks)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"edge ({u}, {v}) out of range", lineno)
        edges.append((u, v, lineno))
    if header is None:
        raise ParseError("missing 'p graph' header", len(lines) or 1)
    if len(edges) != header[1]:
        raise ParseError(f"header announces {header[1]} edges, found {len(edges)}", len(lines))
    seen = set()
    for u, v, lineno in edges:
        key = (min(u, v), max(u, v))
        if u == v or key in seen:
            raise ParseError("self-loop or duplicate edge", lineno)
        seen.add(key)
    try:
        return Graph(header[0], tuple((u, v) for u, v, _ in edges), None if terminals is None else tuple(terminals), bipartition)
    except ParameterError as exc:
        raise ParseError(str(exc), len(lines)) from None


def _serialize_graph(g: Graph) -> str:
    out = [f"p graph {g.num_vertices} {g.num_edges}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    if g.terminals is not None:
        out.append(" ".join(["terminals", *map(str, g.terminals)]))
    if g.bipartition is not None:
        out.append(f"bipartition {g.bipartition}")
    return "\n".join(out) + "\n"


def _parse_subsetsum(lines):
    items = []
    target = None
    for lineno, raw in enumerate(lines, 1):
        toks = raw.split()
        if not toks:
            continue
        if target is not None:
            raise ParseError("content after the target line", lineno)
        if toks[0] == "t":
            if len(toks) != 2:
                raise ParseError("malformed target line", lineno)
            target = _int(toks[1], lineno)
            continue
        if len(toks) != 1:
            raise ParseError("one item per line", lineno)
        a = _int(toks[0], lineno)
        if a <= 0:
            raise ParseError("items must be positive", lineno)
        items.append(a)
    if target is None:
        raise ParseError("missing final 't <target>' line", len(lines) or 1)
    if target < 0:
        raise ParseError("negative target", len(lines))
    return SubsetSumInstance(tuple(items), target)


def _serialize_subsetsum(s: SubsetSumInstance) -> str:
    return "".join(f"{a}\n" for a in s.items) + f"t {s.target}\n"


def _parse_circuit(lines):
    gates = {}
    labels = {}
    output = None
    for lineno, raw in enumerate(lines, 1):
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        if output is not None:
            raise ParseError("content after the 'out' line", lineno)
        if toks[0] == "out":
            if len(toks) != 2:
                raise ParseError("malformed out line", lineno)
            output = _int(toks[1], lineno)
            continue
        if toks[0] == "label":
            if len(toks) != 3:
                raise ParseError("malformed label line", lineno)
            labels[_int(toks[1], lineno)] = _int(toks[2], lineno)
            continue
        idx = _int(toks[0], lineno, "gate index")
        if len(toks) < 2:
            raise ParseError("gate line needs a kind", lineno)
        if idx != len(gates):
            raise ParseError(f"gate index {idx} out of sequence (expected {len(gates)})", lineno)
        kind = toks[1]
        ins = tuple(_int(t, lineno, "gate index") for t in toks[2:])
        gates[idx] = (Gate(kind, ins), lineno)
    if output is None:
        raise ParseError("missing final 'out idx' line", len(lines) or 1)
    n = len(gates)
    for idx, (g, lineno) in gates.items():
        if g.kind not in ("INPUT", "AND", "OR", "NOT"):
            raise ParseError(f"unknown gate kind {g.kind!r}", lineno)
        arity = {"INPUT": (0, 0), "NOT": (1, 1)}.get(g.kind, (0, 2))
        if not arity[0] <= len(g.inputs) <= arity[1]:
            raise ParseError(f"{g.kind} gate with {len(g.inputs)} wires", lineno)
        for src in g.inputs:
            if not 0 <= src < n:
                raise ParseError(f"wire from missing gate {src}", lineno)
    if labels and set(labels) != set(range(n)):
        raise ParseError("labeling must cover every gate", len(lines))
    try:
        return VspCircuit(
            tuple(g for g, _ in (gates[i] for i in range(n))),
            output,
            tuple(labels[i] for i in range(n)) if labels else None,
        )
    except ParameterError as exc:
        raise ParseError(str(exc), len(lines)) from None


def _serialize_circuit(c: VspCircuit) -> str:
    out = [" ".join([str(i), g.kind, *map(str, g.inputs)]) for i, g in enumerate(c.gates)]
    if c.labels is not None:
        out.extend(f"label {i} {v}" for i, v in enumerate(c.labels))
    out.append(f"out {c.output}")
    return "\n".join(out) + "\n"


_PARSERS = {
    "dimacs-cnf": _parse_cnf,
    "setsys": _parse_setsys,
    "graph": _parse_graph,
    "subsetsum": _parse_subsetsum,
    "circuit": _parse_circuit,
}

_SERIALIZERS = {
    CnfFormula: _serialize_cnf,
    SetSystem: _serialize_setsys,
    Graph: _serialize_graph,
    SubsetSumInstance: _serialize_subsetsum,
    VspCircuit: _serialize_circuit,
}

FORMAT_OF = {
    CnfFormula: "dimacs-cnf",
    SetSystem: "setsys",
    Graph: "graph",
    SubsetSumInstance: "subsetsum",
    VspCircuit: "circuit",
}


def parse_instance(fmt: str, text):
    """Parse ``text`` (str or bytes) in format ``fmt``."""
    try:
        parser = _PARSERS[fmt]
    except KeyError:
        raise ParameterError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}") from None
    try:
        return parser(_lines(text))
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not ASCII text: {exc}") from None
    except ParameterError as exc:
        raise ParseError(str(exc)) from None


def serialize_instance(instance) -> str:
    """Canonical text of ``instance``; encode as ASCII for a byte stream."""
    try:
        return _SERIALIZERS[type(instance)](instance)
    except KeyError:
        raise ParameterError(f"cannot serialize {type(instance).__name__}") from None
