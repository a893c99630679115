"""Command-line interface: ``rlab <command> ...``.

JSON on stdout by default (sorted keys, no timestamps), ``--table`` for a
plain aligned view. Exit codes: 0 computed, 1 hypothesis violation, 2 input
error, 3 indeterminate verdict.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__, bounds, certify, families
from .degmat import (DegreeMatrix, class_sizes, format_degree_matrix, parse_degree_matrix,
                     spectrum_of_D)
from .errors import HypothesisViolation, InputError, InstanceTooLarge, NotFoundWithin
from .graphcore import Graph, ball, format_graph, girth, odd_girth, parse_graph, universal_girth
from .project import subuniversal_project
from .realize import format_partition, parse_partition, realize, verify_equitable
from .spectral import eigen_full, spectral_radius
from .treeball import quotient, tree_ball, xdg_ball

EXIT_OK, EXIT_HYPOTHESIS, EXIT_INPUT, EXIT_INDETERMINATE = 0, 1, 2, 3

FAMILIES = {
    "petersen": lambda: families.petersen(),
    "cycle": families.cycle,
    "path": families.path,
    "complete": families.complete,
    "prism": families.prism,
    "star": families.star,
    "kbip": families.complete_bipartite,
}


class Outcome(Exception):
    """Carries a non-zero exit code together with a payload that should still be printed."""

    def __init__(self, payload, code):
        super().__init__(code)
        self.payload = payload
        self.code = code


def _read_text(source: str) -> str:
    try:
        return sys.stdin.read() if source == "-" else Path(source).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None


def load_graph(source: str) -> tuple[Graph, str]:
    """A graph file, or ``@family[:args]`` such as ``@prism:24`` or ``@kbip:2,3``."""
    if source.startswith("@"):
        name, _, args = source[1:].partition(":")
        if name not in FAMILIES:
            raise InputError(f"unknown family {name!r}; known: {sorted(FAMILIES)}")
        try:
            ints = [int(x) for x in args.split(",")] if args else []
            g = FAMILIES[name](*ints)
        except (TypeError, ValueError):
            raise InputError(f"bad family arguments in {source!r}") from None
        return g, hashlib.sha256(source.encode()).hexdigest()
    text = _read_text(source)
    return parse_graph(text), hashlib.sha256(text.encode()).hexdigest()


def load_degmat(source: str) -> tuple[DegreeMatrix, str]:
    """A degree-matrix file, or an inline ``[[0,3],[2,0]]``."""
    if source.lstrip().startswith("["):
        try:
            D = DegreeMatrix.of(json.loads(source))
        except (ValueError, TypeError):
            raise InputError(f"bad inline degree matrix {source!r}") from None
        text = format_degree_matrix(D)
    else:
        text = _read_text(source)
        D = parse_degree_matrix(text)
    return D, hashlib.sha256(text.encode()).hexdigest()


def _subsets(args, g: Graph, D: DegreeMatrix):
    if getattr(args, "partition", None):
        return parse_partition(_read_text(args.partition))
    if D.t == 1:
        return [tuple(range(g.n))]
    raise InputError("--partition is required for a degree matrix with t > 1")


# --- commands -------------------------------------------------------------

def cmd_spectrum(args, path):
    g, h = load_graph(path)
    s = eigen_full(g, args.method)
    return {"input_sha256": h, "n": g.n, **s.to_json()}


def cmd_rho(args, path):
    g, h = load_graph(path)
    return {"input_sha256": h, "n": g.n, "rho": spectral_radius(g)}


def cmd_ball(args):
    g, h = load_graph(args.graph)
    b, order = ball(g, args.vertex, args.radius)
    return {"input_sha256": h, "n": b.n, "m": b.m, "vertices": order,
            "edges": [list(e) for e in b.edges()], "rho": spectral_radius(b)}


def cmd_girth(args, path):
    g, h = load_graph(path)
    out = {"input_sha256": h}
    if args.universal:
        out["universal_girth"] = universal_girth(g, args.cap)
    elif args.odd:
        go = odd_girth(g)
        out["odd_girth"] = None if go == math.inf else int(go)
    else:
        gi = girth(g)
        out["girth"] = None if gi == math.inf else int(gi)
    return out


def cmd_degmat(args):
    D, h = load_degmat(args.degmat)
    out = {"input_sha256": h, "matrix": D.to_json()}
    if args.action == "validate":
        out.update(D.validity.to_json())
        if not D.validity.ok:
            raise Outcome(out, EXIT_INPUT)
    elif args.action == "sizes":
        out["sizes"] = list(class_sizes(D).sizes)
    else:
        D.require_valid()
        out.update(spectrum_of_D(D).to_json())
    return out


def cmd_treeball(args):
    D, h = load_degmat(args.degmat)
    out = {"input_sha256": h, "class": args.cls, "radius": args.radius}
    q = quotient(D, args.cls, args.radius)
    lo, hi = q.rho_bracket()
    out.update(rho=q.spectral_radius(), rho_bracket=[lo, hi], n=q.total_vertices)
    if args.quotient:
        out["states"] = [[k, c, p] for k, c, p in q.states]
        out["sizes"] = list(q.sizes)
        out["children"] = [[list(x) for x in ch] for ch in q.children]
    else:
        b = tree_ball(D, args.cls, args.radius)
        out["edges"] = [list(e) for e in b.graph.edges()]
        out["labels"] = list(b.labels)
        out["depth"] = list(b.depth)
    return out


def cmd_xdg(args):
    b = xdg_ball(args.d, args.g, args.radius)
    return {"d": args.d, "g": args.g, "radius": args.radius, "n": b.n, "m": b.graph.m,
            "rho": spectral_radius(b.graph), "paschke_rho": bounds.paschke_rho(args.d, args.g)}


def cmd_realize(args):
    D, h = load_degmat(args.degmat)
    g, part = realize(D, args.mult)
    if args.out:
        Path(args.out + ".graph").write_text(format_graph(g))
        Path(args.out + ".part").write_text(format_partition(part))
    return {"input_sha256": h, "n": g.n, "m": g.m, "edges": [list(e) for e in g.edges()],
            "partition": [list(s) for s in part],
            "equitable": verify_equitable(g, part, D).ok}


def cmd_project(args):
    g, hg = load_graph(args.graph)
    D, hd = load_degmat(args.degmat)
    subsets = _subsets(args, g, D)
    mode = "backtracking" if args.backtrack else "greedy"
    p = subuniversal_project(g, D, subsets, args.start, args.cls, args.radius, mode)
    out = {"input_sha256": {"graph": hg, "degmat": hd}, "mode": mode, **p.to_json()}
    if p.status == "failure":
        raise Outcome(out, EXIT_HYPOTHESIS)
    if p.status == "budget":
        raise Outcome(out, EXIT_INDETERMINATE)
    return out


def cmd_rho_cover(args):
    D, h = load_degmat(args.degmat)
    br = bounds.rho_universal_cover(D, args.cls, args.tol, args.rmax)
    out = {"input_sha256": h, **br.to_json(), "closed_form": bounds.closed_form_rho(D)}
    if not args.history:
        out.pop("history")
    return out


def _d_or_D(args):
    if args.degmat:
        return load_degmat(args.degmat)[0]
    if args.d is None:
        raise InputError("one of -d or --degmat is required")
    return args.d


def cmd_serre(args, path):
    g, h = load_graph(path)
    dD = _d_or_D(args)
    subsets = _subsets(args, g, dD) if isinstance(dD, DegreeMatrix) else None
    rep = certify.serre_verify(g, dD, args.delta_max, args.eps, subsets)
    return {"input_sha256": h, **rep.to_json()}


def paschke_rows(args):
    ds = range(3, args.d + 1) if args.sweep else [args.d]
    gs = range(3, args.g + 1) if args.sweep else [args.g]
    return [bounds.paschke(d, g).to_json() for d in ds for g in gs]


def cmd_paschke(args):
    rows = paschke_rows(args)
    return rows if args.sweep else rows[0]


def cmd_certify(args, path):
    g, h = load_graph(path)
    if args.degmat:
        D, _ = load_degmat(args.degmat)
        rep = certify.ramanujan_D(g, _subsets(args, g, D), D, args.mode)
    else:
        rep = certify.ramanujan_classic(g)
    out = {"input_sha256": h, **rep.to_json()}
    if not args.spectrum:
        out.pop("spectrum")
    if rep.verdict == certify.UNKNOWN:
        raise Outcome(out, EXIT_INDETERMINATE)
    return out


def cmd_negative(args, path):
    g, h = load_graph(path)
    if args.degmat:
        D, _ = load_degmat(args.degmat)
        if args.eps is None:
            raise InputError("--eps is required with --degmat")
        rep = certify.negative_side_verify_D(g, _subsets(args, g, D), D, args.delta_max, args.eps)
    else:
        if args.d is None:
            raise InputError("one of -d or --degmat is required")
        rep = certify.negative_side_verify(g, args.d, args.delta_max)
    return {"input_sha256": h, **rep.to_json()}


def cmd_boost(args, path):
    g, h = load_graph(path)
    rep = certify.girth_boost_verify(g, args.d, args.delta_max, args.cap, args.radius)
    out = {"input_sha256": h, **rep.to_json()}
    if rep.status == "inconclusive":
        raise Outcome(out, EXIT_INDETERMINATE)
    return out


# --- plumbing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="table", action="store_false", default=False,
                     help="JSON output (default)")
    fmt.add_argument("--table", action="store_true", help="aligned plain-text output")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers across input files")

    p = argparse.ArgumentParser(prog="rlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, multi=False, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=func, multi=multi)
        if multi:
            sp.add_argument("graphs", nargs="+", help="graph files or @family[:args]")
        return sp

    sp = add("spectrum", cmd_spectrum, True, help="full adjacency spectrum")
    sp.add_argument("--method", choices=["auto", "jacobi", "lapack"], default="auto")
    add("rho", cmd_rho, True, help="spectral radius by power iteration")

    sp = add("ball", cmd_ball, help="r-ball around a vertex")
    sp.add_argument("graph")
    sp.add_argument("-v", "--vertex", type=int, required=True)
    sp.add_argument("-r", "--radius", type=int, required=True)

    sp = add("girth", cmd_girth, True, help="girth, odd girth or universal girth")
    kind = sp.add_mutually_exclusive_group()
    kind.add_argument("--odd", action="store_true")
    kind.add_argument("--universal", action="store_true")
    sp.add_argument("--cap", type=int, default=64)

    sp = add("degmat", cmd_degmat, help="degree-matrix utilities")
    sp.add_argument("action", choices=["validate", "sizes", "spectrum"])
    sp.add_argument("degmat", help="file or inline [[..],[..]]")

    sp = add("treeball", cmd_treeball, help="ball of the universal cover T_D")
    sp.add_argument("degmat")
    sp.add_argument("--class", dest="cls", type=int, default=0)
    sp.add_argument("-r", "--radius", type=int, required=True)
    sp.add_argument("--quotient", action="store_true", help="emit the radial state quotient only")

    sp = add("xdg", cmd_xdg, help="ball of the cycle-expanded tree X_{d,g}")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("-g", type=int, required=True)
    sp.add_argument("-r", "--radius", type=int, required=True)

    sp = add("realize", cmd_realize, help="finite graph with equitable partition D")
    sp.add_argument("degmat")
    sp.add_argument("--mult", type=int, default=1)
    sp.add_argument("--out", help="write OUT.graph and OUT.part")

    sp = add("project", cmd_project, help="subuniversal projection of a T_D ball")
    sp.add_argument("graph")
    sp.add_argument("degmat")
    sp.add_argument("--partition")
    sp.add_argument("--start", type=int, required=True)
    sp.add_argument("--class", dest="cls", type=int, default=0)
    sp.add_argument("-r", "--radius", type=int, required=True)
    sp.add_argument("--backtrack", action="store_true")

    sp = add("rho-cover", cmd_rho_cover, help="bracket rho(T_D)")
    sp.add_argument("degmat")
    sp.add_argument("--class", dest="cls", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--rmax", type=int, default=10_000)
    sp.add_argument("--history", action="store_true")

    sp = add("serre", cmd_serre, True, help="count eigenvalues above rho_D - eps")
    sp.add_argument("-d", type=int)
    sp.add_argument("--degmat")
    sp.add_argument("--partition")
    sp.add_argument("--delta-max", type=int, required=True)
    sp.add_argument("--eps", type=float, required=True)

    sp = add("paschke", cmd_paschke, help="spectral radius of X_{d,g} by Paschke's formula")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("-g", type=int, required=True)
    sp.add_argument("--sweep", action="store_true", help="all 3 <= d' <= d, 3 <= g' <= g")
    sp.add_argument("--csv", action="store_true")

    sp = add("certify", cmd_certify, True, help="Ramanujan or D-Ramanujan verdict")
    sp.add_argument("--degmat")
    sp.add_argument("--partition")
    sp.add_argument("--mode", choices=["equitable", "subdegree"], default="equitable")
    sp.add_argument("--spectrum", action="store_true", help="include the full spectrum")

    sp = add("negative", cmd_negative, True, help="count eigenvalues on the negative side")
    sp.add_argument("-d", type=int)
    sp.add_argument("--degmat")
    sp.add_argument("--partition")
    sp.add_argument("--eps", type=float)
    sp.add_argument("--delta-max", type=int, required=True)

    sp = add("boost", cmd_boost, True, help="eigenvalues above 2 sqrt(d-1) + delta from universal girth")
    sp.add_argument("-d", type=int, required=True)
    sp.add_argument("--delta-max", type=int, required=True)
    sp.add_argument("--cap", type=int, default=64)
    sp.add_argument("--radius", type=int)
    return p


def _run_one(args, path=None):
    try:
        payload = args.func(args, path) if args.multi else args.func(args)
        return payload, EXIT_OK, None
    except Outcome as o:
        return o.payload, o.code, None
    except (HypothesisViolation, NotFoundWithin) as exc:
        return None, EXIT_HYPOTHESIS, str(exc)
    except (InputError, InstanceTooLarge) as exc:
        return None, EXIT_INPUT, str(exc)


def render_table(payload) -> str:
    if isinstance(payload, list) and payload and all(isinstance(r, dict) for r in payload):
        keys = list(payload[0])
        rows = [[_cell(r.get(k)) for k in keys] for r in payload]
        widths = [max(len(k), *(len(r[i]) for r in rows)) for i, k in enumerate(keys)]
        lines = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
        lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
        return "\n".join(lines) + "\n"
    if isinstance(payload, dict):
        width = max((len(k) for k in payload), default=0)
        return "".join(f"{k.ljust(width)}  {_cell(v)}\n" for k, v in sorted(payload.items()))
    return f"{_cell(payload)}\n"


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, dict)):
        text = json.dumps(v, sort_keys=True)
        return text if len(text) <= 72 else text[:69] + "..."
    return str(v)


def emit(payload, args, out) -> None:
    if getattr(args, "csv", False):
        rows = payload if isinstance(payload, list) else [payload]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        out.write(buf.getvalue())
    elif args.table:
        out.write(render_table(payload))
    else:
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.multi:
        paths = args.graphs
        if args.jobs > 1 and len(paths) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_run_one, [args] * len(paths), paths))
        else:
            results = [_run_one(args, p) for p in paths]
    else:
        results = [_run_one(args)]
    payloads = []
    for (payload, _, err), label in zip(results, args.graphs if args.multi else [None]):
        if err is not None:
            print(f"rlab {args.command}: {label + ': ' if label else ''}{err}", file=sys.stderr)
        payloads.append(payload if err is None else {"error": err})
    if len(payloads) > 1 or results[0][2] is None:
        emit(payloads[0] if len(payloads) == 1 else payloads, args, sys.stdout)
    return max(code for _, code, _ in results)


if __name__ == "__main__":
    sys.exit(main())
