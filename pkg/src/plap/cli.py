"""Command-line entry point: ``plap {spectrum,sweep,homological,cheeger,verify}``."""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import acceptance, catalog
from .complex import ComplexSizeError
from .exact import frac_str
from .graph import Graph, GraphInputError, SetPair, f1_pair, mask_of, members, read_edge_list
from .onelap import PatternOverflowError

EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_NUMERIC = 4

CSV_HEADER = "branch_id,p,lambda,residual"


class CliInputError(ValueError):
    pass


# --------------------------------------------------------------------------
# serialization


def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(float(x), ".17g")


def to_json(obj, indent: int = 2, level: int = 0) -> str:
    """JSON with Fractions as ``"num/den"`` and floats at 17 significant digits."""
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, Fraction):
        return json.dumps(frac_str(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return fmt_float(x) if math.isfinite(x) else json.dumps(fmt_float(x))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + to_json(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_atomic(path: str | Path, text: str) -> None:
    """Write ``text`` to a temporary sibling, then rename over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent if str(path.parent) else ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --------------------------------------------------------------------------
# argument helpers


def load_graph(args) -> tuple[str, Graph]:
    if args.catalog and args.edges:
        raise CliInputError("give either --catalog or --edges, not both")
    if args.catalog:
        return args.catalog, catalog.by_name(args.catalog)
    if args.edges:
        return str(args.edges), read_edge_list(args.edges)
    raise CliInputError("a graph is required: --catalog NAME or --edges FILE")


def parse_seed(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--seed expects a hexadecimal integer, got {text!r}") from None


def parse_vertex_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise CliInputError(f"bad vertex list {text!r}") from None


def parse_set_pair(text: str, n: int) -> SetPair:
    """``"2,5,6"`` for ``1_A`` or ``"3,4/5,6"`` for ``1_A - 1_B``."""
    a_text, _, b_text = text.partition("/")
    a, b = parse_vertex_list(a_text), parse_vertex_list(b_text)
    if any(not 1 <= v <= n for v in a + b):
        raise CliInputError(f"vertex out of range in {text!r}")
    try:
        return SetPair.of(a, b)
    except ValueError as exc:
        raise CliInputError(str(exc)) from None


def emit(args, payload, table: str) -> None:
    text = to_json(payload) + "\n"
    if args.out:
        write_atomic(args.out, text)
    sys.stdout.write(text if args.json else table)


def warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


# --------------------------------------------------------------------------
# commands


def cmd_spectrum(args) -> int:
    name, g = load_graph(args)
    p = args.p
    if p < 1:
        raise CliInputError("--p must be at least 1")
    rows = []
    if p == 1:
        from .onelap import enumerate_delta1_spectrum

        spec = enumerate_delta1_spectrum(g)
        for lam in spec.values:
            w = spec.witnesses[lam]
            rows.append({"value": lam, "label": spec.label, "witness": {"A": members(w.a), "B": members(w.b)}})
        table = [f"{str(r['value']):>8}  {r['label']}  A={r['witness']['A']} B={r['witness']['B']}" for r in rows]
    elif p == 2:
        from .psolver import spectrum_p2

        for lam in spectrum_p2(g):
            rows.append({"value": float(lam), "label": "exact (dense symmetric eigensolver)"})
        table = [f"{fmt_float(r['value']):>24}  {r['label']}" for r in rows]
    else:
        from .psolver import continue_branch, residual_tolerance, seed_from_p2

        lost = []
        for k in range(1, g.n + 1):
            br = continue_branch(g, seed_from_p2(g, k), p, steps=args.steps, label=f"p2-k{k}", strict=args.strict)
            if br.lost_at is not None:
                lost.append(f"{br.label} lost at p = {br.lost_at:.6g}: {br.error}")
                continue
            s = br.last()
            rows.append({"value": s.lam, "label": "approximate (continuation from p = 2)", "branch": br.label,
                         "residual": s.residual, "within_tolerance": s.residual <= residual_tolerance(p)})
        for msg in lost:
            warn(msg)
        rows.sort(key=lambda r: r["value"])
        table = [f"{fmt_float(r['value']):>24}  {r['label']}  {r['branch']} residual {r['residual']:.2e}" for r in rows]
    payload = {"graph": name, "n": g.n, "p": p, "values": rows}
    emit(args, payload, "\n".join(table) + "\n")
    return 0


def _sweep_rows(g: Graph, args) -> tuple[list[str], list[str]]:
    from .psolver import (
        _state_from_vector,
        geometric_grid,
        seed_from_delta1,
        seed_from_p2,
        trace,
    )

    pmin, pmax, steps = args.pmin, args.pmax, args.steps
    if not 1 < pmin <= pmax:
        raise CliInputError("need 1 < --pmin <= --pmax")
    if steps < 1:
        raise CliInputError("--steps must be positive")
    ks = list(range(1, g.n + 1)) if args.k is None else args.k
    if args.seeds is not None:
        ks = [int(t) for t in args.seeds.replace(",", " ").split()]
    for k in ks:
        if not 1 <= k <= g.n:
            raise CliInputError(f"seed index {k} outside 1..{g.n}")
    rows: list[str] = []
    lost: list[str] = []

    def record(br) -> None:
        for s in br.samples:
            rows.append(f"{br.label},{fmt_float(s.p)},{fmt_float(s.lam)},{fmt_float(s.residual)}")
        if br.lost_at is not None:
            rows.append(f"{br.label},{fmt_float(br.lost_at)},nan,lost")
            lost.append(f"{br.label} lost at p = {br.lost_at:.6g}: {br.error}")

    for k in ks:
        p0, lam0, x0 = seed_from_p2(g, k)
        for lo, hi in ((pmin, min(pmax, 2.0)), (max(pmin, 2.0), pmax)):
            if lo >= hi:
                continue
            target = lo if hi == 2.0 else hi
            grid = geometric_grid(2.0, target, steps)
            st = _state_from_vector(g, lam0, x0, 2.0)
            record(trace(g, st, 2.0, grid, label=f"p2-k{k}", strict=args.strict))
    for text in args.delta1_seed or []:
        pair = parse_set_pair(text, g.n)
        lam = f1_pair(g, pair)
        label = "delta1-" + "-".join(str(v) for v in members(pair.a)) + ("_" + "-".join(str(v) for v in members(pair.b)) if pair.b else "")
        if pmin >= 2:
            raise CliInputError("a 1-Laplacian seed needs --pmin below 2")
        st = seed_from_delta1(g, lam, pair.vector(g.n), pmin)
        record(trace(g, st, pmin, geometric_grid(pmin, pmax, steps), label=label, strict=args.strict))
    return rows, lost


def cmd_sweep(args) -> int:
    name, g = load_graph(args)
    rows, lost = _sweep_rows(g, args)
    text = "\n".join([CSV_HEADER] + rows) + "\n"
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    for msg in lost:
        warn(msg)
    return 0


def cmd_homological(args) -> int:
    from .homological import homological_spectrum, local_link_criterion

    name, g = load_graph(args)
    spec = homological_spectrum(g)
    payload = {"graph": name, "n": g.n, "thresholds": spec.to_json(), "homological": list(spec.values)}
    lines = [f"{'value':>8}  {'strict betti':<20}{'closed betti':<20}homological  betti changed"]
    for t in spec.thresholds:
        lines.append(f"{str(t.value):>8}  {str(list(t.strict_betti)):<20}{str(list(t.closed_betti)):<20}"
                     f"{'yes' if t.homological else 'no':<13}{'yes' if t.betti_changed else 'no'}")
    if args.link:
        a = parse_vertex_list(args.link)
        if not a or any(not 1 <= v <= g.n for v in a):
            raise CliInputError(f"--link needs vertices in 1..{g.n}")
        v = local_link_criterion(g, mask_of(a))
        payload["link"] = {"A": sorted(set(a)), "status": v.status, "lambda": v.lam,
                           "reduced_betti": list(v.reduced_betti), "components": v.components,
                           "ties": [{"A": members(t.a), "B": members(t.b)} for t in v.ties]}
        lines.append(f"link at {sorted(set(a))}: {v.status}, lambda {v.lam}, reduced betti {list(v.reduced_betti)}, "
                     f"{v.components} components")
    emit(args, payload, "\n".join(lines) + "\n")
    return 0


def cmd_cheeger(args) -> int:
    from .cheeger import cheeger_report

    name, g = load_graph(args)
    report = cheeger_report(g, args.p)
    if args.k is not None:
        wanted = {str(k) for k in args.k}
        bad = wanted - set(report)
        if bad:
            raise CliInputError(f"k outside 1..{g.n}: {sorted(bad)}")
        report = {k: v for k, v in report.items() if k in wanted}
    payload = {"graph": name, "n": g.n, "p": args.p, "k": report}
    lines = []
    for k, entry in report.items():
        lines.append(f"k={k}  h_k={entry['h_k']}  hhat_k={entry['hhat_k']}  h/hhat={entry['h_over_hhat']}")
        for a in entry["arrows"]:
            mark = {True: "ok", False: "FAILS", None: "-"}[a["holds"]]
            lines.append(f"    [{mark:>5}] {a['name']} ({a['status']})")
    emit(args, payload, "\n".join(lines) + "\n")
    return 0


def cmd_verify(args) -> int:
    seed = acceptance.DEFAULT_SEED if args.seed is None else args.seed
    results = acceptance.run_suite(args.suite, seed=seed)
    buf = io.StringIO()
    for r in results:
        print(r.line(), file=buf)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed", file=buf)
    if args.json:
        payload = [{"criterion": r.number, "name": r.name, "passed": r.passed, "measured": r.measured,
                    "expected": r.expected, "source": r.source, "seconds": r.seconds, "note": r.note} for r in results]
        text = to_json(payload) + "\n"
    else:
        text = buf.getvalue()
    if args.out:
        write_atomic(args.out, text)
    sys.stdout.write(text)
    return EXIT_VERIFY if failed else 0


# --------------------------------------------------------------------------
# parser


def _graph_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--catalog", metavar="NAME", help=f"built-in graph ({', '.join(catalog.catalog_names())})")
    sp.add_argument("--edges", metavar="FILE", help="edge-list file: 'n' then 'i j' per line, '#' comments")


def _output_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--out", metavar="PATH", help="also write the JSON result to PATH")
    sp.add_argument("--json", action="store_true", help="print JSON instead of a table")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plap", description="Spectra of graph p-Laplacians.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="eigenvalues at one p")
    _graph_flags(sp)
    _output_flags(sp)
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--steps", type=int, default=200, help="continuation steps when p is not 1 or 2")
    sp.add_argument("--strict", action="store_true", help="fail (exit 4) on a lost branch")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("sweep", help="continue eigenbranches over a p range into CSV")
    _graph_flags(sp)
    sp.add_argument("--pmin", type=float, default=1.01)
    sp.add_argument("--pmax", type=float, default=2.0)
    sp.add_argument("--steps", type=int, default=200)
    sp.add_argument("--k", type=int, action="append", help="p = 2 eigenpair index to seed from (repeatable)")
    sp.add_argument("--seeds", metavar="LIST", help="comma-separated p = 2 seed indices; empty for none")
    sp.add_argument("--delta1-seed", action="append", metavar="A[/B]",
                    help="also trace the branch from the 1-Laplacian eigenvector 1_A - 1_B upward from --pmin")
    sp.add_argument("--out", metavar="PATH", help="CSV destination (standard output if omitted)")
    sp.add_argument("--strict", action="store_true", help="fail (exit 4) on a lost branch")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("homological", help="homological eigenvalues of the 1-Laplacian")
    _graph_flags(sp)
    _output_flags(sp)
    sp.add_argument("--link", metavar="A", help="also run the local link test at 1_A")
    sp.set_defaults(func=cmd_homological)

    sp = sub.add_parser("cheeger", help="Cheeger constants and the inequality diagram")
    _graph_flags(sp)
    _output_flags(sp)
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--k", type=int, action="append", help="restrict to this k (repeatable)")
    sp.set_defaults(func=cmd_cheeger)

    sp = sub.add_parser("verify", help="run acceptance criteria")
    sp.add_argument("suite", choices=sorted(acceptance.SUITES))
    sp.add_argument("--seed", type=parse_seed, metavar="HEX", help="RNG seed for the randomized suites")
    _output_flags(sp)
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    from .psolver import ContinuationError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0
    try:
        return args.func(args)
    except (ComplexSizeError, PatternOverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ContinuationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (GraphInputError, CliInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
