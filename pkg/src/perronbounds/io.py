"""Text formats read and written by the command line.

Matrix file: a line with ``n`` followed by ``n`` rows of ``n`` numbers.
Vector file: a line with ``n`` followed by ``n`` numbers (any line breaks).
Tree file: ``n`` (optionally ``n weighted``), then one edge ``u v [w]`` per
line, then optionally ``root r``. Blank lines and ``#`` comments are ignored
everywhere. Numbers may be decimals or exact ratios such as ``3/7``.
"""
import csv
import enum
import io
import json
import math
from fractions import Fraction

import numpy as np

from .tree import WeightedGraph

SCHEMA_VERSION = 1
FLOAT_DIGITS = 12


class ParseError(ValueError):
    pass


def _lines(text):
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def _number(tok):
    try:
        value = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a number: {tok!r}") from None
    return value


def _count(tok, what):
    try:
        n = int(tok)
    except ValueError:
        raise ParseError(f"expected an integer {what}, got {tok!r}") from None
    if n < 1:
        raise ParseError(f"{what} must be positive, got {n}")
    return n


def _as_array(values):
    # entries are converted to float64; exact routines work from those values
    return np.array(values, dtype=float)


def parse_matrix(text):
    """Parse the matrix format and return a float array."""
    lines = _lines(text)
    if not lines:
        raise ParseError("empty matrix file")
    n = _count(lines[0], "dimension")
    rows = lines[1:]
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, found {len(rows)}")
    values = []
    for i, row in enumerate(rows, start=1):
        toks = row.split()
        if len(toks) != n:
            raise ParseError(f"row {i} has {len(toks)} entries, expected {n}")
        values.append([_number(t) for t in toks])
    return _as_array(values)


def parse_vector(text, n=None):
    lines = _lines(text)
    if not lines:
        raise ParseError("empty vector file")
    m = _count(lines[0], "dimension")
    toks = " ".join(lines[1:]).split()
    if len(toks) != m:
        raise ParseError(f"expected {m} entries, found {len(toks)}")
    if n is not None and m != n:
        raise ParseError(f"vector has dimension {m}, matrix has {n}")
    return _as_array([_number(t) for t in toks])


def parse_tree(text):
    """Parse the tree format; returns ``(graph, root)`` with ``root`` possibly ``None``."""
    lines = _lines(text)
    if not lines:
        raise ParseError("empty tree file")
    head = lines[0].split()
    n = _count(head[0], "vertex count")
    weighted = len(head) > 1 and head[1].lower() == "weighted"
    if len(head) > 2 or (len(head) == 2 and not weighted):
        raise ParseError(f"bad header line {lines[0]!r}")
    root = None
    edges = []
    for line in lines[1:]:
        toks = line.split()
        if toks[0].lower() == "root":
            if len(toks) != 2 or root is not None:
                raise ParseError(f"bad root line {line!r}")
            root = _count(toks[1], "root label")
            continue
        if root is not None:
            raise ParseError("the root line must come last")
        if len(toks) not in (2, 3) or (len(toks) == 3 and not weighted):
            raise ParseError(f"bad edge line {line!r}")
        u, v = _count(toks[0], "vertex label"), _count(toks[1], "vertex label")
        w = _number(toks[2]) if len(toks) == 3 else Fraction(1)
        edges.append((u, v, int(w) if w.denominator == 1 else float(w)))
    try:
        G = WeightedGraph(n, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if not G.is_tree():
        raise ParseError("the edges do not form a tree")
    if root is not None and root > n:
        raise ParseError(f"root {root} is not a vertex")
    return G, root


def read_text(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def render(value):
    """JSON-ready form: floats to 12 significant digits, ``Fraction`` to ``"p/q"``."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        return float(f"{value:.{FLOAT_DIGITS}g}")
    if isinstance(value, dict):
        return {str(k): render(v) for k, v in value.items()}
    if isinstance(value, (frozenset, set)):
        return sorted(render(v) for v in value)
    if isinstance(value, np.ndarray):
        return [render(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    if isinstance(value, enum.Enum):
        return value.value
    raise TypeError(f"cannot render {type(value).__name__}")


def to_json(payload):
    """Serialize with the schema tag first; identical payloads give identical bytes."""
    doc = {"schema": SCHEMA_VERSION}
    doc.update(render(payload))
    return json.dumps(doc, indent=2) + "\n"


def float_cell(value):
    return f"{float(value):.{FLOAT_DIGITS}g}"


def sweep_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "c3_M", "c3_Q", "rho_M"])
    for row in rows:
        writer.writerow([row.r, float_cell(row.c3_M), float_cell(row.c3_Q), float_cell(row.rho_M)])
    return buf.getvalue()


def sweep_json(d, rows):
    return to_json({
        "d": d,
        "rows": [{"r": row.r, "c3_M": row.c3_M, "c3_Q": row.c3_Q, "rho_M": row.rho_M} for row in rows],
    })
