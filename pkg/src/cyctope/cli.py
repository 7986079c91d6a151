"""Command-line driver. Every command prints one JSON report on stdout.

Exit codes: 0 all checks passed, 1 a verification failed, 2 input or usage
error, 3 truncation or resource guard.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from math import comb
from pathlib import Path

from . import config
from .category import (
    check_simplicial_identities,
    finite_poset_to_category,
    nerve,
    single_object_aut,
    truncated_cyc,
    truncated_delta_inj,
)
from .cyclic import (
    brute_force_embeddings,
    check_axioms,
    dumps,
    enumerate_embeddings,
    standard_cycle,
    structure_from_json,
)
from .dense import alternating_back_and_forth, check_partial_iso, replay, t_stage, verify_density_step
from .errors import InputError, ResourceError, TruncationError
from .homology import boundary_complex, homology_report, reduced_homology_vanishes
from .paracyclic import format_rational, parse_rational, slice_poset, verify_horb, verify_square

CATEGORIES = {"cyc": truncated_cyc, "delta": truncated_delta_inj, "aut": single_object_aut}


def _positive(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(s: str) -> int:
    try:
        v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def cmd_axioms(args) -> dict:
    path = Path(args.file)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e.msg}") from None
    S = structure_from_json(raw)
    rep = check_axioms(S)
    body = rep.to_json()
    return {
        "params": {"file": str(args.file)},
        "checks": {a: v["holds"] for a, v in body["axioms"].items()},
        "counts": {"elements": len(S), "triples": len(S.triples)},
        "axioms": body["axioms"],
    }


def cmd_homcount(args) -> dict:
    m, n = args.m, args.n
    C, D = standard_cycle(m), standard_cycle(n)
    fast = len(enumerate_embeddings(C, D))
    brute = len(brute_force_embeddings(C, D))
    closed = m * comb(n, m)
    return {
        "params": {"m": m, "n": n},
        "checks": {"fast-matches-brute-force": fast == brute, "closed-form": brute == closed},
        "counts": {"enumerated": fast, "brute_force": brute, "closed_form": closed},
    }


def cmd_horb(args) -> dict:
    if args.all_up_to is not None:
        pairs = [(m, n) for n in range(1, args.all_up_to + 1) for m in range(1, n + 1)]
    elif args.m is not None and args.n is not None:
        pairs = [(args.m, args.n)]
    else:
        raise InputError("horb needs M N or --all-up-to K")
    reports = [verify_horb(m, n) for m, n in pairs]
    return {
        "params": {"pairs": [list(p) for p in pairs]},
        "checks": {f"horb({r.params['m']},{r.params['n']})": r.passed for r in reports},
        "counts": {"reports": len(reports)},
        "reports": [r.to_json() for r in reports],
    }


def cmd_homology(args) -> dict:
    C = CATEGORIES[args.category](args.param)
    d = args.max_dim
    degrees = [args.degree] if args.degree is not None else list(range(d))
    for k in degrees:
        if k + 1 > d:
            raise TruncationError(f"H_{k} needs --max-dim >= {k + 1}")
    nv = nerve(C, d)
    cx = boundary_complex(nv)
    return {
        "params": {"category": args.category, "param": args.param, "max_dim": d},
        "checks": {"boundary-squared-zero": cx.boundary_squares_vanish(),
                   "simplicial-identities": check_simplicial_identities(nv).passed},
        "counts": {"simplices": nv.counts()},
        "homology": [homology_report(cx, k) for k in degrees],
        "truncation": {"max_dim": d, "trusted_degrees": [0, d - 1]},
    }


def cmd_slice(args) -> dict:
    n, a, b = args.n, parse_rational(args.a), parse_rational(args.b)
    P = slice_poset(n, a, b, args.k_max)
    nv = nerve(finite_poset_to_category(P), args.max_deg + 1)
    cx = boundary_complex(nv)
    top = P.maximum()
    checks = {"reduced-homology-vanishes": reduced_homology_vanishes(cx, args.max_deg)}
    if b - a <= 1 and args.k_max >= n * (b - a):
        checks["has-terminal-object"] = top is not None
    return {
        "params": {"n": n, "a": format_rational(a), "b": format_rational(b), "k_max": args.k_max},
        "checks": checks,
        "counts": {"objects": len(P), "simplices": nv.counts()},
        "terminal": None if top is None else [format_rational(y) for y in top.images],
        "homology": [homology_report(cx, k) for k in range(args.max_deg + 1)],
        "truncation": {"k_max": args.k_max, "max_dim": args.max_deg + 1},
    }


def cmd_square(args) -> dict:
    rep = verify_square(args.n, parse_rational(args.a), parse_rational(args.b), args.k_max)
    body = rep.to_json()
    return {"params": body["params"], "checks": body["checks"], "counts": body["details"]["sizes"],
            "details": body["details"]}


def cmd_density(args) -> dict:
    C = standard_cycle(args.base_size)
    rows = []
    checks = {}
    for k in range(args.stages):
        rep = verify_density_step(t_stage(C, k))
        checks[f"stage-{k}"] = rep.passed
        rows.append({"stage": k, "elements": len(C) * 2 ** k, "defects": rep.details["defects"],
                     "witnessed": rep.passed})
    return {"params": {"base_size": args.base_size, "stages": args.stages}, "checks": checks, "stages": rows}


def cmd_bandf(args) -> dict:
    if args.replay:
        try:
            session = json.loads(Path(args.replay).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"cannot load session {args.replay}: {e}") from None
        p = replay(session)
        original = session
    else:
        p = alternating_back_and_forth(args.left, args.right, args.steps)
        original = p.to_json()
    again = replay(json.loads(dumps(original)))
    session = p.to_json()
    return {
        "params": {"left": args.left, "right": args.right, "steps": args.steps, "replay": args.replay},
        "checks": {"partial-iso": check_partial_iso(p).passed,
                   "replay-identical": dumps(again.to_json()) == dumps(original)},
        "counts": {"pairs": len(p.pairs)},
        "session": session,
    }


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyctope", description=__doc__.splitlines()[0])
    ap.add_argument("--max-elements", type=_positive, default=None, help="cap on structure sizes")
    ap.add_argument("--max-matrix", type=_positive, default=None, help="cap on simplices / matrix cells")
    ap.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("axioms", help="check the cyclic-order axioms of a JSON structure")
    p.add_argument("file")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("homcount", help="count embeddings [m-1] -> [n-1] two ways")
    p.add_argument("m", type=_positive)
    p.add_argument("n", type=_positive)
    p.set_defaults(func=cmd_homcount)

    p = sub.add_parser("horb", help="orbits of paracyclic embeddings vs cyclic embeddings")
    p.add_argument("m", type=_positive, nargs="?")
    p.add_argument("n", type=_positive, nargs="?")
    p.add_argument("--all-up-to", type=_positive, default=None, metavar="K")
    p.set_defaults(func=cmd_horb)

    p = sub.add_parser("homology", help="homology of a truncated nerve")
    p.add_argument("--category", choices=sorted(CATEGORIES), required=True)
    p.add_argument("--param", type=_positive, required=True)
    p.add_argument("--max-dim", type=_nonneg, required=True)
    p.add_argument("--degree", type=_nonneg, default=None)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("slice", help="slice poset C_[a,b) and its reduced homology")
    p.add_argument("n", type=_positive)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("k_max", type=_positive)
    p.add_argument("--max-deg", type=_nonneg, default=2)
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("square", help="pushout/pullback identities of the slice decomposition")
    p.add_argument("n", type=_positive)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("k_max", type=_positive)
    p.set_defaults(func=cmd_square)

    p = sub.add_parser("density", help="density defects witnessed one stage later")
    p.add_argument("--base-size", type=_positive, required=True)
    p.add_argument("--stages", type=_nonneg, required=True)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("bandf", help="alternating back-and-forth between two sides")
    p.add_argument("--left", default="stage:1", help="'qz' or 'stage:N'")
    p.add_argument("--right", default="stage:2", help="'qz' or 'stage:N'")
    p.add_argument("--steps", type=_nonneg, default=10)
    p.add_argument("--replay", default=None, metavar="FILE", help="replay a saved session instead")
    p.set_defaults(func=cmd_bandf)
    return ap


def _summary(report: dict) -> str:
    failed = [k for k, v in report.get("checks", {}).items() if not v]
    head = f"{report['command']}: {'PASS' if report['passed'] else 'FAIL'}"
    if failed:
        head += " (failed: " + ", ".join(failed) + ")"
    return head


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    saved = (config.limits.max_elements, config.limits.max_cells)
    start = time.perf_counter()
    try:
        config.apply_env()
        if args.max_elements:
            config.limits.max_elements = args.max_elements
        if args.max_matrix:
            config.limits.max_cells = args.max_matrix
        body = args.func(args)
        code = 0 if all(body.get("checks", {}).values()) else 1
    except InputError as e:
        body, code = {"error": {"kind": "input", "message": str(e)}}, 2
    except (TruncationError, ResourceError) as e:
        kind = "truncation" if isinstance(e, TruncationError) else "resource"
        body, code = {"error": {"kind": kind, "message": str(e)}}, 3
    finally:
        config.limits.max_elements, config.limits.max_cells = saved
    elapsed = time.perf_counter() - start
    report = {"command": args.command, "argv": argv, **body, "passed": code == 0, "exit_code": code}
    if args.timing:
        report["timing_s"] = round(elapsed, 6)
    sys.stdout.write(dumps(report) + "\n")
    msg = report["error"]["message"] if "error" in report else _summary(report)
    print(f"{msg}  [{elapsed:.3f}s]", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
