"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 violated hypothesis, 3 internal
invariant failure.
"""
import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from . import bounds, broom, exact, logindex, selfcheck, tree
from . import io as pio
from .errors import ConvergenceError, HypothesisError, InvariantError
from .linalg import perron

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_INTERNAL = 0, 1, 2, 3
SEQUENCE_TERMS = 12


class _Failure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _report(seq, tol, exact_mode):
    band = (0, 0) if exact_mode else (tol, max(tol, bounds.EQUAL_TOL))
    rep = bounds.classify_monotonicity(seq, *band)
    return {"classification": rep.classification, "onset_index": rep.onset_index}


def _sequence_doc(seq):
    return {"kind": seq.kind, "values": list(seq.values), "perron_reference": seq.perron_reference}


def cmd_bounds(args):
    A = pio.parse_matrix(pio.read_text(args.matrix))
    n = A.shape[0]
    x = pio.parse_vector(pio.read_text(args.x), n) if args.x else None
    exact_mode = exact.is_integral(A) and (x is None or exact.is_integral(x))
    try:
        rho = perron(A).value
    except ConvergenceError:
        rho = None
    a, b = bounds.ratio_bounds(A, x, args.k, exact=exact_mode, perron_reference=rho)
    doc = {
        "command": "bounds",
        "n": n,
        "K": args.k,
        "arithmetic": "exact" if exact_mode else "float",
        "a": _sequence_doc(a),
        "b": _sequence_doc(b),
        "a_monotonicity": _report(a, args.tol, exact_mode),
        "b_monotonicity": _report(b, args.tol, exact_mode),
        "perron_bracket": [b[args.k], a[args.k]],
        "bracket_width": a[args.k] - b[args.k],
        "perron_value": rho,
        "perron_onset": bounds.perron_onset(A, x, args.k, exact=exact_mode) if exact_mode
        else bounds.perron_onset(A, x, args.k, tol=args.tol),
    }
    try:
        c = bounds.c_seq(A, x, args.k, exact=exact_mode, perron_reference=rho)
        doc["c"] = _sequence_doc(c)
        doc["c_monotonicity"] = _report(c, args.tol, exact_mode)
    except HypothesisError as exc:
        doc["c"] = None
        doc["c_skipped"] = f"requires {exc.hypothesis}"
    return doc


def _charset_doc(res):
    return {
        "type": res.tree_type,
        "vertices": list(res.vertices),
        "algebraic_connectivity": res.algebraic_connectivity,
        "gamma": res.gamma,
        "edge_weight": res.edge_weight if res.tree_type is tree.TreeType.TYPE_II else None,
    }


def cmd_tree(args):
    G, root = pio.parse_tree(pio.read_text(args.tree))
    doc = {"command": "tree", "n": G.n, "weighted": G.weighted, "root": root or 1}
    if G.weighted:
        doc["bound_report"] = None
        doc["bound_report_skipped"] = "bounds are reported for unweighted rooted trees"
    else:
        T = tree.RootedTree.from_edges(G.n, G.edges, root or 1)
        rep = tree.bound_report(T, max(args.k, 3))
        doc["bound_report"] = {
            "norm1": rep.norm1, "rho_c": rep.rho_c, "pi": rep.pi, "rho": rep.rho,
            "a_M": list(rep.a_M), "b_M": list(rep.b_M), "c_M": list(rep.c_M), "c_Q": list(rep.c_Q),
        }
    if G.n >= 2:
        by_branch = tree.characteristic_set_perron(G)
        by_sign = tree.characteristic_set_fiedler(G)
        doc["characteristic_set"] = {"perron_branch": _charset_doc(by_branch), "fiedler_sign": _charset_doc(by_sign)}
        if (by_branch.tree_type, by_branch.vertices) != (by_sign.tree_type, by_sign.vertices):
            raise _Failure(EXIT_INTERNAL, "characteristic-set methods disagree")
    return doc


def _broom_cell(d, r):
    p = broom.BroomParams(d, r)
    V = broom.BroomVariant
    a3 = broom.a3_upper_B2(p)
    via_Q, via_M = broom.c3_lower_B1(p)
    m2, m3 = (broom.broom_iterate(V.B2_BOTTLENECK, p, k).values for k in (2, 3))
    checks = {
        "a3_upper_B2": a3 == Fraction(m3[-1], m2[-1]) == max(Fraction(s, t) for s, t in zip(m3, m2)),
        "c3_via_Q": via_Q == Fraction(broom.broom_moment(V.B1_NECKBOTTLE, p, 3),
                                      broom.broom_moment(V.B1_NECKBOTTLE, p, 2)),
        "c3_via_M": via_M == Fraction(broom.broom_moment(V.B1_BOTTLENECK, p, 3),
                                      broom.broom_moment(V.B1_BOTTLENECK, p, 2)),
        "upper_gap": broom.upper_gap(p) == broom.prior_upper_bound(p) - a3,
    }
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        raise _Failure(EXIT_INTERNAL, f"closed form disagrees with recurrence at d={d}, r={r}: {bad}")
    return {
        "d": d, "r": r,
        "a3_upper_B2": a3, "a3_upper_B2_float": float(a3),
        "c3_Q1": via_Q, "c3_Q1_float": float(via_Q),
        "c3_M1": via_M, "c3_M1_float": float(via_M),
        "f": broom.prior_upper_bound(p), "upper_gap": broom.upper_gap(p),
        "F": broom.F_crossing(d, r),
        "recurrence_check": "passed",
    }


def cmd_broom(args):
    d, r = args.d, args.r
    if d < 1 or r < 1:
        raise ValueError("d and r must be positive integers")
    if args.sweep:
        rows = broom.crossing_sweep(d, r)
        return {"_sweep": rows, "d": d}
    doc = {"command": "broom"}
    doc.update(_broom_cell(d, r))
    if args.r0:
        if d < 3:
            raise ValueError("the crossing root is defined for d >= 3")
        lo, hi = broom.crossing_interval(d)
        doc["r0"] = broom.find_r0(d)
        doc["r0_interval"] = [float(lo), float(hi)]
    return doc


def cmd_logindex(args):
    A = pio.parse_matrix(pio.read_text(args.matrix))
    x = pio.parse_vector(pio.read_text(args.x), A.shape[0]) if args.x else None
    res = logindex.find_log_indices(A, x, window=args.window)
    start = max(res.onset_k - 1, 0)
    K = start + SEQUENCE_TERMS - 1
    sequences = []
    for origin, indices in ((logindex.Origin.CONCAVITY_INDEX, res.concavity_indices),
                            (logindex.Origin.CONVEXITY_INDEX, res.convexity_indices)):
        for i in sorted(indices):
            seq = logindex.generate(A, x, i, K, origin, start)
            tail = seq.values[start:]
            sequences.append({
                "origin": origin, "index": i, "start_k": start, "values": list(seq.values[:SEQUENCE_TERMS]),
                "log_shape_from_start": logindex.verify_log_shape(tail, seq.shape()),
                "strict_log_shape_from_start": logindex.verify_log_shape(tail, seq.shape(), strict=True),
            })
    mom = logindex.moments(A, x, SEQUENCE_TERMS - 1)
    return {
        "command": "logindex",
        "n": A.shape[0],
        "concavity_indices": res.concavity_indices,
        "convexity_indices": res.convexity_indices,
        "onset_k": res.onset_k,
        "method": res.method,
        "perron_iterate": res.perron_iterate,
        "trace": [{"role": t.role, "column": t.column, "pivot": t.pivot, "survivors": list(t.survivors)}
                  for t in res.trace],
        "sequences": sequences,
        "moments": {"values": list(mom.values),
                    "log_convex": logindex.verify_log_shape(mom, logindex.Shape.LOG_CONVEX)},
    }


def cmd_selfcheck(args):
    results = selfcheck.run_all(args.seed)
    doc = {"command": "selfcheck", "seed": args.seed, "suites": results}
    if not all(v["passed"] for v in results.values()):
        doc["_exit"] = EXIT_INTERNAL
    return doc


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_float(text):
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError("must be a positive number")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=_positive_int, default=50, help="iteration horizon K (default 50)")
    common.add_argument("--tol", type=_positive_float, default=1e-9, help="tolerance (default 1e-9)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="perronbounds", description="Bounds on Perron values of nonnegative matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="a_k, b_k, c_k sequences of a matrix")
    p.add_argument("matrix")
    p.add_argument("--x", help="vector file (default all ones)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("tree", parents=[common], help="bound report and characteristic set of a tree")
    p.add_argument("tree")
    p.set_defaults(func=cmd_tree)

    p = sub.add_parser("broom", parents=[common], help="exact broom bounds, crossing root, sweep table")
    p.add_argument("d", type=int)
    p.add_argument("r", type=int, help="pendant count, or r_max with --sweep")
    p.add_argument("--r0", action="store_true", help="also locate the crossing root r0(d)")
    p.add_argument("--sweep", action="store_true", help="tabulate c3(M1), c3(Q1), rho(M1) for r = 1..R")
    p.set_defaults(func=cmd_broom)

    p = sub.add_parser("logindex", parents=[common], help="log-concavity/convexity indices and sequences")
    p.add_argument("matrix")
    p.add_argument("--x", help="vector file (default all ones)")
    p.add_argument("--window", type=_positive_int, default=logindex.DEFAULT_WINDOW)
    p.set_defaults(func=cmd_logindex)

    p = sub.add_parser("selfcheck", parents=[common], help="run the randomized property suites")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def _text(doc, indent=""):
    lines = []
    for key, value in doc.items():
        if key == "schema":
            continue
        if isinstance(value, dict):
            lines.append(f"{indent}{key}:")
            lines.extend(_text(value, indent + "  "))
        else:
            lines.append(f"{indent}{key}: {value}")
    return lines


def _emit(args, doc):
    if "_sweep" in doc:
        rows = doc["_sweep"]
        if args.format == "csv" or args.out and args.out.endswith(".csv"):
            body = pio.sweep_csv(rows)
            if args.out:
                stem = args.out[:-4] if args.out.endswith(".csv") else args.out
                with open(stem + ".json", "w", encoding="utf-8") as fh:
                    fh.write(pio.sweep_json(doc["d"], rows))
        else:
            body = pio.sweep_json(doc["d"], rows)
    elif args.format == "text":
        body = "\n".join(_text(pio.render(doc))) + "\n"
    elif args.format == "csv":
        raise ValueError("csv output is only available for broom --sweep")
    else:
        body = pio.to_json(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    else:
        sys.stdout.write(body)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc = args.func(args)
        code = doc.pop("_exit", EXIT_OK)
        _emit(args, doc)
        return code
    except _Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except HypothesisError as exc:
        print(f"hypothesis violated ({exc.hypothesis}): {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (InvariantError, ConvergenceError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
