"""Command-line front end: ``plainrws <command> ...``.

Commands::

    check <rws|->                     convergence report
    normalize <rws> -w WORD           normal form of a word
    gen plain --factors C2,C3,Z       emit a `.rws` presentation of a plain group
    ball <rws> -r R                   Cayley ball as JSON, DOT or text
    analyze <ball.json|edges.txt>     geodecity, circuits, blocks, broomlike
    evidence <rws> -r R               plainness evidence from a certified ball
    verify --suite NAME               property suites over the geodetic corpus

Exit status: 0 on success, 1 when a check or verification fails, 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .cayley import build_ball, load_ball_json
from .errors import PlainRwsError
from .graph_metrics import (
    all_pairs_bfs,
    block_cut_tree,
    blocks,
    check_stemple_4circuits,
    enumerate_iecs,
    is_geodetic,
    is_s_broomlike,
    max_embedded_circuit_diameter,
    parse_edge_list,
)
from .presentations import PlainSpec, gen_plain, parse_factors, table_from_csv
from .rewrite_core import check_convergent, format_system, normalize, parse_system
from .verifiers import SUITES, Outcome, broomlike_parameter, plainness_evidence, run_suite

__all__ = ["RunConfig", "run", "main"]

FORMATS = ("json", "dot", "text")
CORPUS_KINDS = ("builtin", "glued", "cayley", "all")


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    radius: int = 3
    cap: int | None = None
    seed: int = 0
    fmt: str = "text"
    suite: str = "all"
    corpus: str = "all"
    word: str = ""
    factors: str = ""
    tables: list[str] = field(default_factory=list)
    s: int | None = None
    output: str | None = None

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be >= 0")
        if self.cap is not None and self.cap < 1:
            raise ValueError("vertex cap must be >= 1")
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}")


def _read(path: str) -> tuple[str, str]:
    if path == "-":
        return sys.stdin.read(), "<stdin>"
    return Path(path).read_text(encoding="utf-8"), path


def _dump(data) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _load_system(path: str):
    text, source = _read(path)
    return parse_system(text, source)


def _cmd_check(cfg: RunConfig) -> tuple[int, str]:
    rws = _load_system(cfg.inputs[0])
    report = check_convergent(rws)
    if cfg.fmt == "json":
        data = report.to_dict(rws)
        data.update(letters=len(rws.alphabet), rules=len(rws.rules), max_lhs=rws.max_lhs,
                    inverse_closed=rws.alphabet.inverse_closed)
        return (0 if report.convergent else 1), _dump(data)
    words = [
        "convergent" if report.convergent else "not convergent",
        "length-reducing" if report.length_reducing else "not length-reducing",
        "presents group" if report.presents_group else "does not present a group",
    ]
    lines = [", ".join(words),
             f"letters: {len(rws.alphabet)}  rules: {len(rws.rules)}  max lhs: {rws.max_lhs}"]
    for i, rule in enumerate(rws.rules):
        if not rule.length_reducing:
            lines.append(f"not length-reducing: rule {i}: {rws.format_rule(rule)}")
    for cp in report.unresolved_pairs:
        fmt = rws.format_word
        normals = [("?" if w is None else fmt(w)) for w in (cp.left_normal, cp.right_normal)]
        lines.append(f"unresolved {cp.kind} {fmt(cp.superposition)} -> "
                     f"{{{fmt(cp.left_result)}, {fmt(cp.right_result)}}} "
                     f"normal forms {{{normals[0]}, {normals[1]}}}")
    return (0 if report.convergent else 1), "\n".join(lines) + "\n"


def _cmd_normalize(cfg: RunConfig) -> tuple[int, str]:
    rws = _load_system(cfg.inputs[0])
    word = rws.parse_word(cfg.word)
    return 0, rws.format_word(normalize(rws, word)) + "\n"


def _cmd_gen(cfg: RunConfig) -> tuple[int, str]:
    tables = []
    for path in cfg.tables:
        text, source = _read(path)
        tables.append(table_from_csv(text, source))
    if cfg.factors:
        spec = parse_factors(cfg.factors)
        spec = PlainSpec(tuple(spec.finite) + tuple(tables), spec.infinite_cyclic)
    else:
        spec = PlainSpec(tuple(tables), 0)
    rws = gen_plain(spec)
    return 0, f"# plain group {spec.describe()}\n" + format_system(rws)


def _cmd_ball(cfg: RunConfig) -> tuple[int, str]:
    rws = _load_system(cfg.inputs[0])
    ball = build_ball(rws, cfg.radius, cfg.cap)
    if cfg.fmt == "json":
        return 0, ball.to_json()
    if cfg.fmt == "dot":
        return 0, ball.to_dot()
    lines = [f"radius {ball.radius}: {ball.n} vertices, {ball.graph.edge_count} edges",
             "level sizes: " + " ".join(map(str, ball.level_sizes()))]
    return 0, "\n".join(lines) + "\n"


def analyze_graph(graph, s: int | None = None) -> dict:
    """Finite-graph report used by ``analyze``."""
    graph.require_connected()
    results = all_pairs_bfs(graph)
    geo = is_geodetic(graph, results)
    decomp = blocks(graph)
    tree = block_cut_tree(decomp)
    data = {
        "vertices": graph.n,
        "edges": graph.edge_count,
        "geodetic": geo.to_dict(),
        "blocks": decomp.to_dict(),
        "block_cut_tree": tree.to_dict(),
        "max_embedded_circuit_diameter": max_embedded_circuit_diameter(graph, decomp, results),
    }
    if geo.geodetic:
        iecs = enumerate_iecs(graph, results)
        max_iec = max((r.length for r in iecs), default=2)
        s_used = broomlike_parameter(max_iec) if s is None else s
        data["iecs"] = {"max_length": max_iec, "count": len(iecs), "circuits": [r.to_dict() for r in iecs]}
        data["broomlike"] = is_s_broomlike(graph, s_used, results).to_dict()
        data["stemple_4circuits"] = check_stemple_4circuits(graph, results).to_dict()
    else:
        data["iecs"] = data["broomlike"] = data["stemple_4circuits"] = "skipped: not geodetic"
    return data


def _cmd_analyze(cfg: RunConfig) -> tuple[int, str]:
    text, source = _read(cfg.inputs[0])
    view = None
    if text.lstrip().startswith("{"):
        view = load_ball_json(text, source)
        graph = view.graph
    else:
        graph = parse_edge_list(text, source)
    data = analyze_graph(graph, cfg.s)
    if view is not None:
        cert_iecs = [c for c in view.iecs() if c.certified]
        cert_blocks = [b for b in view.blocks() if b["certified"]]
        data["certified"] = {
            "radius": view.radius,
            "geodetic": view.geodetic(),
            "max_iec": max((c.length for c in cert_iecs if c.isometric), default=2),
            "iecs": len(cert_iecs),
            "blocks": len(cert_blocks),
            "max_block_diameter": max((b["diameter"] for b in cert_blocks), default=0),
        }
    if cfg.fmt == "json":
        return 0, _dump(data)
    lines = [
        f"vertices {data['vertices']}, edges {data['edges']}",
        f"geodetic: {data['geodetic']['geodetic']}",
        f"blocks: {len(data['blocks']['blocks'])}, cut vertices: {len(data['blocks']['cut_vertices'])}",
        f"max embedded circuit diameter: {data['max_embedded_circuit_diameter']}",
    ]
    if isinstance(data["iecs"], dict):
        lines.append(f"isometric circuits: {data['iecs']['count']} (max length {data['iecs']['max_length']})")
        bl = data["broomlike"]
        lines.append(f"{bl['s']}-broomlike: {bl['holds']}")
    return 0, "\n".join(lines) + "\n"


def _cmd_evidence(cfg: RunConfig) -> tuple[int, str]:
    rws = _load_system(cfg.inputs[0])
    ev = plainness_evidence(rws, cfg.radius, name=cfg.inputs[0], vertex_cap=cfg.cap)
    status = 0 if ev.consistent_with_plain else 1
    if cfg.fmt == "json":
        return status, _dump(ev.to_dict())
    verdict = "consistent with plain" if ev.consistent_with_plain else "not consistent with plain"
    return status, (f"{verdict} (radius {ev.radius}): geodetic={ev.geodetic} max_iec={ev.max_iec} "
                    f"max_lhs={ev.max_lhs} max_block_diameter={ev.max_block_diameter}\n")


def _cmd_verify(cfg: RunConfig) -> tuple[int, str]:
    reports = run_suite(cfg.suite, corpus=cfg.corpus, seed=cfg.seed, radius=cfg.radius)
    failed = any(r.outcome is Outcome.FAIL for r in reports)
    if cfg.fmt == "json":
        suites: dict[str, list] = {}
        for r in reports:
            suites.setdefault(r.name, []).append(r.to_dict())
        data = {"suite": cfg.suite, "corpus": cfg.corpus, "seed": cfg.seed, "radius": cfg.radius,
                "passed": not failed, "suites": suites}
        return (1 if failed else 0), _dump(data)
    lines = []
    for r in reports:
        extra = ""
        if r.outcome is Outcome.HYPOTHESES_NOT_MET:
            extra = f"  [{r.details.get('failed_hypothesis')}]"
            if "max_circuit_diameter" in r.details:
                extra += f" diameter={r.details['max_circuit_diameter']}"
        lines.append(f"{r.outcome.value:<20} {r.name:<10} {r.subject}{extra}")
    counts: dict[str, int] = {}
    for r in reports:
        counts[r.outcome.value] = counts.get(r.outcome.value, 0) + 1
    lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    return (1 if failed else 0), "\n".join(lines) + "\n"


_COMMANDS = {
    "check": _cmd_check,
    "normalize": _cmd_normalize,
    "gen": _cmd_gen,
    "ball": _cmd_ball,
    "analyze": _cmd_analyze,
    "evidence": _cmd_evidence,
    "verify": _cmd_verify,
}


def run(cfg: RunConfig) -> int:
    status, text = _COMMANDS[cfg.command](cfg)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plainrws", description="Length-reducing rewriting systems and geodetic Cayley graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default="text", formats=("json", "text")):
        p.add_argument("--format", dest="fmt", choices=formats, default=fmt_default)
        p.add_argument("-o", "--output", help="write to this file instead of stdout")

    p = sub.add_parser("check", help="convergence report for a .rws system")
    p.add_argument("input", help="path or - for stdin")
    common(p)

    p = sub.add_parser("normalize", help="normal form of a word")
    p.add_argument("input")
    p.add_argument("-w", "--word", required=True, help='letter tokens, e.g. "a A a" or "aAa"')
    common(p)

    p = sub.add_parser("gen", help="generate presentations")
    p.add_argument("kind", choices=["plain"])
    p.add_argument("--factors", default="", help="comma-separated C<n> and Z factors")
    p.add_argument("--table", action="append", default=[], help="CSV multiplication table (repeatable)")
    common(p)

    p = sub.add_parser("ball", help="build a Cayley ball")
    p.add_argument("input")
    p.add_argument("-r", "--radius", type=int, required=True)
    p.add_argument("--cap", type=int, help="vertex limit (default: $PLAINRWS_VERTEX_CAP or 200000)")
    common(p, "json", FORMATS)

    p = sub.add_parser("analyze", help="analyze a ball JSON or an edge list")
    p.add_argument("input")
    p.add_argument("-s", type=int, help="broomlike parameter (default from max IEC length)")
    common(p, "json")

    p = sub.add_parser("evidence", help="plainness evidence from a certified ball")
    p.add_argument("input")
    p.add_argument("-r", "--radius", type=int, required=True)
    p.add_argument("--cap", type=int)
    common(p)

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--corpus", choices=CORPUS_KINDS, default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-r", "--radius", type=int, default=5, help="ball radius for the lemma8 suite")
    common(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen" and not args.factors and not args.table:
        parser.error("gen plain needs --factors and/or --table")
    try:
        cfg = RunConfig(
            command=args.command,
            inputs=[args.input] if hasattr(args, "input") else [],
            radius=getattr(args, "radius", 3),
            cap=getattr(args, "cap", None),
            seed=getattr(args, "seed", 0),
            fmt=args.fmt,
            suite=getattr(args, "suite", "all"),
            corpus=getattr(args, "corpus", "all"),
            word=getattr(args, "word", ""),
            factors=getattr(args, "factors", ""),
            tables=getattr(args, "table", []),
            s=getattr(args, "s", None),
            output=args.output,
        )
        return run(cfg)
    except (PlainRwsError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
