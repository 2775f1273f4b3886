"""Command-line driver.

Exit codes: 0 success, 1 usage/input error, 2 assertion or bound violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .groups import is_prime
from .group_ring import stabilize_refine
from .partition import OrderedPartition
from .spectral import eigenvalue_classes, numeric_spectrum, stabilizer_subgroup
from .sweep import (
    BoundViolation,
    CounterexampleMismatch,
    EngineMismatch,
    SweepConfig,
    compute_counterexample_rounds,
    reproduce_counterexample,
    run_sweep,
)
from .tinhofer import canonical_form_prime_circulant, has_tinhofer_property, individualize
from .wl import (
    CayleyGraph,
    Graph,
    GraphFormatError,
    induced_smodule,
    initial_cayley_smodule,
    parse_adjacency,
    parse_cayley_graph,
    partition_from_coloring,
    cr_stabilize,
    uniform_coloring,
    wl2_stabilize,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse default exits with 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load_graph(arg: str) -> Graph:
    """Cayley string when it contains ':', otherwise an adjacency-list file."""
    if ":" in arg:
        return parse_cayley_graph(arg)
    path = Path(arg)
    if not path.exists():
        raise GraphFormatError(f"no such adjacency file {arg!r}", 0)
    return parse_adjacency(path.read_text())


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_vertex(token: str, g: Graph) -> int:
    if token.startswith("("):
        if not isinstance(g, CayleyGraph):
            raise GraphFormatError("residue tuples need a Cayley graph input", 0)
        residues = tuple(int(t) for t in token.strip("()").split(","))
        return g.spec.index(residues)
    try:
        v = int(token)
    except ValueError:
        raise GraphFormatError(f"expected a vertex index, got {token!r}", 0) from None
    if not 0 <= v < g.n:
        raise GraphFormatError(f"vertex {v} out of range for {g.n} vertices", 0)
    return v


def _classes_json(p: OrderedPartition) -> list[list[int]]:
    return [list(c) for c in p.classes]


def _cmd_wl2(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    trace = wl2_stabilize(g)
    if isinstance(g, CayleyGraph):
        module = induced_smodule(trace.final, g.spec)
        if args.format == "json":
            text = json.dumps(
                {"rounds": trace.rounds, "classes": _classes_json(module)},
                sort_keys=True,
            ) + "\n"
        elif args.format == "csv":
            text = f"rounds,classes\n{trace.rounds},{module.to_text()}\n"
        else:
            text = f"rounds: {trace.rounds}, classes: {module.to_text()}\n"
    else:
        if args.format == "json":
            text = json.dumps(
                {"rounds": trace.rounds, "pair_classes": trace.final.class_count},
                sort_keys=True,
            ) + "\n"
        elif args.format == "csv":
            text = f"rounds,pair_classes\n{trace.rounds},{trace.final.class_count}\n"
        else:
            text = f"rounds: {trace.rounds}, pair-classes: {trace.final.class_count}\n"
    _emit(text, args.out)
    return 0


def _cmd_cr(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    n = g.n
    coloring = uniform_coloring(n)
    for token in args.individualize or []:
        coloring = individualize(coloring, _parse_vertex(token, g))
    trace = cr_stabilize(g, coloring)
    if isinstance(g, CayleyGraph):
        classes_text = partition_from_coloring(trace.final, g.spec).to_text()
    else:
        classes_text = "|".join(
            ",".join(str(v) for v in c) for c in trace.final.classes()
        )
    if args.format == "json":
        text = json.dumps(
            {
                "rounds": trace.rounds,
                "classes": [list(c) for c in trace.final.classes()],
            },
            sort_keys=True,
        ) + "\n"
    elif args.format == "csv":
        text = f"rounds,classes\n{trace.rounds},{classes_text}\n"
    else:
        text = f"rounds: {trace.rounds}, classes: {classes_text}\n"
    _emit(text, args.out)
    return 0


def _cmd_smodule(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if not isinstance(g, CayleyGraph):
        raise GraphFormatError("smodule needs a Cayley graph input", 0)
    initial = initial_cayley_smodule(g.spec, g.con)
    trace = stabilize_refine(initial)
    if args.format == "json":
        text = json.dumps(
            {
                "initial": _classes_json(initial),
                "rounds": trace.rounds,
                "stable": _classes_json(trace.final),
            },
            sort_keys=True,
        ) + "\n"
    elif args.format == "csv":
        text = (
            "rounds,initial,stable\n"
            f"{trace.rounds},{initial.to_text()},{trace.final.to_text()}\n"
        )
    else:
        text = (
            f"initial: {initial.to_text()}\n"
            f"rounds: {trace.rounds}\n"
            f"stable: {trace.final.to_text()}\n"
        )
    _emit(text, args.out)
    return 0


def _cmd_spectrum(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if not isinstance(g, CayleyGraph) or len(g.spec.moduli) != 1:
        raise GraphFormatError("spectrum needs a cyclic Cayley graph input", 0)
    p = g.spec.order
    if not is_prime(p):
        raise GraphFormatError(f"spectrum needs prime order, got {p}", 0)
    sd = stabilizer_subgroup(p, g.con)
    classes = eigenvalue_classes(sd)
    values = numeric_spectrum(sd)
    member = classes.membership
    if args.format == "json":
        rows = [
            {"k": k, "real": values[k].real, "imag": values[k].imag, "class": member[k]}
            for k in range(p)
        ]
        text = json.dumps(rows, sort_keys=True) + "\n"
    else:
        lines = ["k,real,imag,class"]
        for k in range(p):
            lines.append(
                f"{k},{values[k].real:.12g},{values[k].imag:.12g},{member[k]}"
            )
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_tinhofer_check(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    report = has_tinhofer_property(g, budget=args.max_nodes)
    payload = {
        "property": {"true": True, "false": False}.get(report.status),
        "status": report.status,
        "certificate": [list(p) for p in report.certificate] if report.certificate else None,
        "nodes": report.nodes,
    }
    _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_canon(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if not isinstance(g, CayleyGraph):
        raise GraphFormatError("canon needs a Cayley graph input", 0)
    form = canonical_form_prime_circulant(g.spec, g.con)
    payload = {"code": form.hex, "order": list(form.order)}
    _emit(json.dumps(payload, sort_keys=True) + "\n", args.out)
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = SweepConfig(
        n_values=tuple(range(args.n_min, args.n_max + 1)),
        mode="sampled" if args.sample is not None else "exhaustive",
        sample_count=args.sample or 0,
        seed=args.seed,
        cross_check=args.cross_check,
        jobs=args.jobs,
    )
    records = run_sweep(cfg)
    if args.format == "json":
        rows = [
            {
                "n": r.n,
                "set": r.set_mask,
                "rounds": r.rounds,
                "rounds_wl2": r.rounds_wl2,
                "bound": r.bound,
                "d": r.d,
            }
            for r in records
        ]
        text = json.dumps(rows, sort_keys=True) + "\n"
    else:
        lines = ["n,set,rounds,rounds_wl2,bound,d"]
        for r in records:
            wl2 = "" if r.rounds_wl2 is None else str(r.rounds_wl2)
            lines.append(f"{r.n},{r.set_mask},{r.rounds},{wl2},{r.bound},{r.d}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_counterexample(args: argparse.Namespace) -> int:
    report = reproduce_counterexample(budget=args.max_nodes)
    lines = ["round class lists (element indices, index = 4a+b):"]
    for i, text in enumerate(report.computed_rounds):
        lines.append(f"  round {i}: {text}")
    lines.append(f"tinhofer property: {report.tinhofer.status}")
    lines.append(f"certificate: {list(report.tinhofer.certificate or ())}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cayleywl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, formats: Sequence[str] = ("text", "json", "csv")) -> None:
        p.add_argument("--format", choices=list(formats), default=formats[0])
        p.add_argument("--out", default=None, help="write output to a file")

    p = sub.add_parser("wl2", help="stabilize the pair-coloring refinement")
    p.add_argument("graph")
    common(p)
    p.set_defaults(func=_cmd_wl2)

    p = sub.add_parser("cr", help="stabilize color refinement")
    p.add_argument("graph")
    p.add_argument(
        "--individualize",
        action="append",
        metavar="V",
        help="vertex index or residue tuple to individualize (repeatable)",
    )
    common(p)
    p.set_defaults(func=_cmd_cr)

    p = sub.add_parser("smodule", help="stabilize the group-partition refinement")
    p.add_argument("graph")
    common(p)
    p.set_defaults(func=_cmd_smodule)

    p = sub.add_parser("spectrum", help="adjacency eigenvalues with class ids")
    p.add_argument("graph")
    common(p, formats=("csv", "json"))
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("tinhofer-check", help="decide the Tinhofer property")
    p.add_argument("graph")
    p.add_argument("--max-nodes", type=int, default=1_000_000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_tinhofer_check)

    p = sub.add_parser("canon", help="canonical form of a prime circulant")
    p.add_argument("graph")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_canon)

    p = sub.add_parser("sweep", help="round-bound sweep over connection sets")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exhaustive", action="store_true", default=True)
    group.add_argument("--sample", type=int, default=None, metavar="COUNT")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--cross-check", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    common(p, formats=("csv", "json"))
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("counterexample", help="reproduce the 16-vertex counterexample")
    p.add_argument("--max-nodes", type=int, default=1_000_000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_counterexample)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"cayleywl: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"cayleywl: {exc}", file=sys.stderr)
        return 1
    except (BoundViolation, EngineMismatch) as exc:
        print(f"cayleywl: {exc}", file=sys.stderr)
        return 2
    except CounterexampleMismatch as exc:
        print("cayleywl: counterexample mismatch", file=sys.stderr)
        print(str(exc), file=sys.stderr)
        for i, text in enumerate(compute_counterexample_rounds()):
            print(f"  computed round {i}: {text}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
