"""``confmat`` command-line front end.

Output is JSON on stdout (``--text`` for a plain rendering).  Exit codes:
0 success, 1 failed check, 2 input error, 3 Groebner resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any

from . import groebner
from . import families as fam
from .checks import CHECK_NAMES, DEFAULT_FIELD, CheckContext, run_check
from .configuration import Realization
from .errors import ConfmatError, ParseError, ResourceLimit
from .fields import QQ, Field, parse_field
from .groebner import Ideal
from .poly import PolyRing

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


# -- input ------------------------------------------------------------------------


def _read_json(path: str | None) -> Any:
    text = sys.stdin.read() if path in (None, "-") else open(path, encoding="utf-8").read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _field_override(args) -> Field | None:
    if args.field:
        return parse_field(args.field)
    env = os.environ.get("CONFMAT_FIELD")
    return parse_field(env) if env else None


def _realization(args) -> Realization:
    data = _read_json(args.file)
    field = _field_override(args)
    if isinstance(data, dict) and "edges" in data:
        return fam.graph_configuration(fam.Graph.from_json(data), field or QQ)
    if not isinstance(data, dict):
        raise ParseError("expected a realization object")
    if field is None and "field" not in data:
        field = QQ
    return Realization.from_json(data, field)


def _variable_labels(names: list[str]) -> list[str]:
    """Ground-set labels for variable names; ``x<digits>`` maps to ``<digits>``."""
    out = []
    for v in names:
        out.append(v[1:] if v[:1] == "x" and v[1:].isdigit() else v)
    return out


def _infer_variables(gens: list[str]) -> list[str]:
    seen: list[str] = []
    for g in gens:
        for name in re.findall(r"[A-Za-z_][A-Za-z0-9_']*", g):
            if name not in seen:
                seen.append(name)

    def key(name):
        m = re.match(r"^([A-Za-z_]+)(\d*)$", name)
        return (m.group(1), int(m.group(2) or 0)) if m else (name, 0)

    return sorted(seen, key=key)


def _ideal(args) -> Ideal:
    """An ideal from a realization (with --ideal) or from a generator list."""
    data = _read_json(args.file)
    field = _field_override(args)
    kind = getattr(args, "ideal", None)
    if isinstance(data, dict) and ("matrix" in data or "edges" in data):
        if kind is None:
            raise ParseError("--ideal jacobian|minors is required for realization input")
        if "edges" in data:
            W = fam.graph_configuration(fam.Graph.from_json(data), field or QQ)
        else:
            W = Realization.from_json(data, field if field or "field" in data else QQ)
        return W.ideal(kind, args.max_pairs)
    if isinstance(data, list):
        gens, names, fspec = data, None, None
    elif isinstance(data, dict) and "generators" in data:
        gens, names, fspec = data["generators"], data.get("variables"), data.get("field")
    else:
        raise ParseError("expected a realization, a generator list or {\"generators\": [...]}")
    if field is None:
        field = parse_field(fspec) if fspec is not None else QQ
    extra = [args.poly] if getattr(args, "poly", None) else []
    names = names or _infer_variables([str(g) for g in gens] + extra)
    ring = PolyRing(field, _variable_labels(names))
    return Ideal(ring, [ring.parse(str(g)) for g in gens], args.max_pairs)


# -- commands ------------------------------------------------------------------------


def cmd_poly(args) -> tuple[int, Any]:
    if args.kind in ("kirchhoff", "symanzik", "second-kirchhoff"):
        data = _read_json(args.file)
        G = fam.Graph.from_json(data)
        field = _field_override(args) or QQ
        if args.kind == "kirchhoff":
            f = fam.kirchhoff(G, field)
        elif args.kind == "symanzik":
            f = fam.symanzik(G, field)
        else:
            if not args.momentum:
                raise ParseError("--momentum is required for the second Kirchhoff polynomial")
            p = json.loads(args.momentum)
            f = fam.second_kirchhoff(G, p, args.variant, field)
    else:
        W = _realization(args)
        f = W.det_form() if args.kind == "det" else W.config_poly()
        if args.kind == "matroid":
            f = fam.matroid_polynomial(W.matroid.bases(), W.labels, W.field)
    return EXIT_OK, {"polynomial": str(f), "degree": f.degree() if f else None, "terms": len(f.coeffs)}


def cmd_form(args):
    W = _realization(args)
    Q = W.config_form()
    return EXIT_OK, {"form": [[str(q) for q in row] for row in Q]}


def cmd_ideal(args):
    W = _realization(args)
    I = W.ideal(args.ideal, args.max_pairs)
    out = {"ideal": args.ideal, "generators": [str(g) for g in I.gens]}
    if args.basis:
        out["basis"] = [str(g) for g in I.groebner_basis()]
    return EXIT_OK, out


def cmd_matroid(args):
    W = _realization(args)
    return EXIT_OK, W.matroid.report()


def _order(args, ring):
    if getattr(args, "elim", None):
        front = _variable_labels([v.strip() for v in args.elim.split(",") if v.strip()])
        return groebner.BlockElim(front)
    return groebner.DegRevLex


def cmd_gb(args):
    I = _ideal(args)
    basis = I.groebner_basis(_order(args, I.ring))
    return EXIT_OK, {"variables": list(I.ring.labels), "basis": [str(g) for g in basis]}


def cmd_nf(args):
    I = _ideal(args)
    f = I.ring.parse(args.poly)
    r = I.normal_form(f)
    return EXIT_OK, {"normal_form": str(r), "member": not r}


def cmd_dim(args):
    I = _ideal(args)
    d = I.dimension()
    return EXIT_OK, {"dimension": d, "codimension": I.ring.ngens - d}


def cmd_quotient(args):
    I = _ideal(args)
    Q = I.quotient(I.ring.parse(args.poly))
    return EXIT_OK, {"generators": [str(g) for g in Q.gens], "basis": [str(g) for g in Q.groebner_basis()]}


def cmd_saturate(args):
    I = _ideal(args)
    S = I.saturate(I.ring.parse(args.poly))
    return EXIT_OK, {"basis": [str(g) for g in S.groebner_basis()]}


def cmd_gen(args):
    field = _field_override(args) or QQ
    what = args.family
    extra: dict = {}
    if what == "wheel":
        W = fam.wheel_whirl_realization(args.n, 1 if args.t is None else args.t, field)
    elif what == "whirl":
        W = fam.wheel_whirl_realization(args.n, 2 if args.t is None else args.t, field)
    elif what == "prism":
        W = fam.prism_realization(field)
    elif what == "triangle":
        W = fam.triangle_realization(field)
    elif what == "theta":
        return EXIT_OK, fam.theta_graph().to_json()
    elif what == "wheel-graph":
        return EXIT_OK, fam.wheel_graph(args.n).to_json()
    elif what == "uniform":
        W = fam.generic_uniform(args.r, args.n, args.seed, field)
        extra["seed"] = args.seed
    elif what == "graph":
        G = fam.Graph.from_json(_read_json(args.file))
        W = fam.graph_configuration(G, field)
    else:  # pragma: no cover - argparse restricts choices
        raise ParseError(f"unknown family {what!r}")
    out = W.to_json()
    out.update(extra)
    return EXIT_OK, out


def cmd_check(args):
    names = CHECK_NAMES if args.all else [args.name]
    if not args.all and args.name not in CHECK_NAMES:
        raise ParseError(f"unknown check {args.name!r}; choose from {', '.join(CHECK_NAMES)}")
    field = _field_override(args)
    instance = _realization(args) if args.file else None
    ctx = CheckContext(
        field=field or (instance.field if instance else DEFAULT_FIELD),
        instance=instance,
        seed=args.seed,
        samples=args.samples,
        field_given=field is not None,
    )
    if len(names) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(lambda n: run_check(n, ctx), names))
    else:
        reports = [run_check(names[0], ctx)]
    reports.sort(key=lambda r: r.check)
    for r in reports:
        print(f"{r.check}: {r.status} in {r.elapsed:.3f}s", file=sys.stderr) if args.timing else None
    code = EXIT_FAIL if any(r.status == "fail" for r in reports) else EXIT_OK
    payload = [r.to_json() for r in reports]
    return code, payload if args.all else payload[0]


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q or Fp:p (default: input field, $CONFMAT_FIELD, or Q)")
    common.add_argument("--max-pairs", type=int, default=groebner.DEFAULT_MAX_PAIRS,
                        help="Groebner pair-reduction budget")
    common.add_argument("--text", action="store_true", help="plain text instead of JSON")
    common.add_argument("--timing", action="store_true", help="print elapsed time on stderr")

    parser = argparse.ArgumentParser(prog="confmat", description="Configuration polynomials and their ideals.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(fn=fn)
        return p

    p = add("poly", cmd_poly, "configuration or graph polynomial")
    p.add_argument("--file")
    p.add_argument("--kind", default="config",
                   choices=["config", "det", "matroid", "kirchhoff", "symanzik", "second-kirchhoff"])
    p.add_argument("--momentum", help='JSON object, e.g. {"v1": "1", "v2": "-1"}')
    p.add_argument("--variant", default="forest", choices=["forest", "cutset"])

    p = add("form", cmd_form, "configuration form")
    p.add_argument("--file")

    p = add("ideal", cmd_ideal, "Jacobian or minors ideal")
    p.add_argument("--file")
    p.add_argument("--ideal", default="jacobian", choices=["jacobian", "minors"])
    p.add_argument("--basis", action="store_true", help="include the reduced Groebner basis")

    p = add("matroid", cmd_matroid, "matroid report")
    p.add_argument("--file")

    for name, fn, needs_poly in [("gb", cmd_gb, False), ("nf", cmd_nf, True), ("dim", cmd_dim, False),
                                 ("quotient", cmd_quotient, True), ("saturate", cmd_saturate, True)]:
        p = add(name, fn, f"{name} of an ideal")
        p.add_argument("--file")
        p.add_argument("--ideal", choices=["jacobian", "minors"])
        if needs_poly:
            p.add_argument("--poly", required=True)
        if name == "gb":
            p.add_argument("--elim", help="comma-separated variables for an elimination order")

    p = add("gen", cmd_gen, "named instances")
    p.add_argument("family", choices=["wheel", "whirl", "prism", "triangle", "theta", "wheel-graph", "uniform", "graph"])
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--t", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--file")

    p = add("check", cmd_check, "named identity checks")
    p.add_argument("name", nargs="?", default=None)
    p.add_argument("--all", action="store_true")
    p.add_argument("--file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, help="number of random cases")
    p.add_argument("--jobs", type=int, default=4)
    return parser


def _render_text(payload: Any, indent: str = "") -> str:
    if isinstance(payload, dict):
        if set(payload) == {"polynomial", "degree", "terms"}:
            return payload["polynomial"]
        lines = []
        for k, v in payload.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                lines.append(_render_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{k}: {v}")
        return "\n".join(lines)
    if isinstance(payload, list):
        return "\n".join(
            _render_text(v, indent + "  ") if isinstance(v, (dict, list)) else f"{indent}- {v}" for v in payload
        )
    return f"{indent}{payload}"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "check" and not args.all and not args.name:
        parser.error("check needs a name or --all")
    groebner.DEFAULT_MAX_PAIRS = args.max_pairs
    t0 = time.perf_counter()
    try:
        code, payload = args.fn(args)
    except ResourceLimit as exc:
        print(json.dumps({"error": "ResourceLimit", "message": str(exc)}), file=sys.stderr)
        return EXIT_LIMIT
    except (ConfmatError, OSError, ValueError, KeyError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_INPUT
    if args.text:
        print(_render_text(payload))
    else:
        print(json.dumps(payload, indent=2))
    if args.timing and args.command != "check":
        print(f"elapsed: {time.perf_counter() - t0:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
