"""Property checks for geodetic graphs and rewriting systems, plus the geodetic test corpus.

Every verifier returns a :class:`VerifierReport` with one of three outcomes:
``pass``, ``fail`` (with witnesses) or ``hypotheses-not-met``. A graph that
falls outside a check's hypotheses is never counted as a counterexample.
"""

from __future__ import annotations

import enum
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cayley import CayleyBall, build_ball
from .errors import PreconditionError
from .graph_metrics import (
    SimpleGraph,
    all_pairs_bfs,
    bfs,
    block_cut_tree,
    blocks,
    check_stemple_4circuits,
    enumerate_iecs,
    is_geodetic,
    is_isometric_circuit,
    is_s_broomlike,
    max_embedded_circuit_diameter,
)
from .presentations import gen_plain, parse_factors
from .rewrite_core import StringRewritingSystem, check_convergent

__all__ = [
    "Outcome",
    "VerifierReport",
    "PlainnessEvidence",
    "CorpusGraph",
    "SUITES",
    "RULE_CHECK_FACTORS",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "star_graph",
    "petersen_graph",
    "glue",
    "geodetic_corpus",
    "verify_circuit_diameter",
    "verify_apex_circuits",
    "verify_broomlike",
    "verify_stemple",
    "verify_block_circuits",
    "verify_circuit_rules",
    "plainness_evidence",
    "run_suite",
]

APEX_EXHAUSTIVE_LIMIT = 2000
# factor lists for the rewriting-to-circuit correspondence suite
RULE_CHECK_FACTORS = (
    "C2,C3",
    "C2,C4",
    "C2,C5",
    "C3,C4",
    "C3,C5",
    "C2,Z",
    "C3,Z",
    "C4,Z",
    "C5,Z",
    "Z,Z",
    "C2,C2,C3",
    "C2,C3,Z",
)
CORPUS_CAYLEY_FACTORS = ("C2,C3", "Z", "C2,C2", "C3,C4", "C2,Z", "C2,C2,C2", "C5")


class Outcome(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    HYPOTHESES_NOT_MET = "hypotheses-not-met"


@dataclass
class VerifierReport:
    name: str
    subject: str
    outcome: Outcome
    details: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.outcome is Outcome.PASS

    @property
    def failed(self) -> bool:
        return self.outcome is Outcome.FAIL

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "subject": self.subject,
            "outcome": self.outcome.value,
            "details": self.details,
            "witnesses": self.witnesses,
        }


# ------------------------------------------------------------------ corpus


@dataclass(frozen=True)
class CorpusGraph:
    name: str
    graph: SimpleGraph
    provenance: str  # builtin | glued | cayley-ball

    def __post_init__(self):
        report = is_geodetic(self.graph)
        if not report.geodetic:
            raise ValueError(f"corpus graph {self.name} is not geodetic: {report.witness}")


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, itertools.combinations(range(n), 2))


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> SimpleGraph:
    return SimpleGraph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def binary_tree(depth: int) -> SimpleGraph:
    n = 2 ** (depth + 1) - 1
    return SimpleGraph.from_edges(n, [((i - 1) // 2, i) for i in range(1, n)])


def petersen_graph() -> SimpleGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return SimpleGraph.from_edges(10, outer + spokes + inner)


def glue(g1: SimpleGraph, v1: int, g2: SimpleGraph, v2: int) -> SimpleGraph:
    """Identify vertex ``v1`` of ``g1`` with vertex ``v2`` of ``g2``.

    ``g1`` keeps its numbering; the other vertices of ``g2`` follow in order.
    """
    relabel = {}
    nxt = g1.n
    for x in range(g2.n):
        if x == v2:
            relabel[x] = v1
        else:
            relabel[x] = nxt
            nxt += 1
    edges = g1.edges() + [(relabel[a], relabel[b]) for a, b in g2.edges()]
    return SimpleGraph.from_edges(nxt, edges)


def _builtins() -> list[CorpusGraph]:
    out = [CorpusGraph(f"K{n}", complete_graph(n), "builtin") for n in range(1, 7)]
    out += [CorpusGraph(f"C{n}", cycle_graph(n), "builtin") for n in (5, 7, 9)]
    out.append(CorpusGraph("Petersen", petersen_graph(), "builtin"))
    out.append(CorpusGraph("P6", path_graph(6), "builtin"))
    out.append(CorpusGraph("K1,3", star_graph(3), "builtin"))
    out.append(CorpusGraph("BinaryTree3", binary_tree(3), "builtin"))
    return out


def _gluings(pool: Sequence[CorpusGraph], count: int, seed: int, max_vertices: int = 40) -> list[CorpusGraph]:
    """Two fixed gluings plus ``count`` seeded random ones (possibly of earlier gluings)."""
    rng = random.Random(seed)
    out = [
        CorpusGraph("glue(K3,K3)", glue(complete_graph(3), 0, complete_graph(3), 0), "glued"),
        CorpusGraph("glue(C5,K2)", glue(cycle_graph(5), 0, complete_graph(2), 0), "glued"),
    ]
    candidates = [c for c in pool if c.graph.n >= 2]
    fixed = len(out)
    while len(out) < fixed + count:
        a = rng.choice(candidates + out)
        b = rng.choice(candidates)
        if a.graph.n + b.graph.n - 1 > max_vertices:
            continue
        va, vb = rng.randrange(a.graph.n), rng.randrange(b.graph.n)
        name = f"glue({a.name}@{va},{b.name}@{vb})"
        out.append(CorpusGraph(name, glue(a.graph, va, b.graph, vb), "glued"))
    return out


def _cayley_entries(radius: int) -> list[CorpusGraph]:
    out = []
    for factors in CORPUS_CAYLEY_FACTORS:
        ball = build_ball(gen_plain(parse_factors(factors)), radius)
        out.append(CorpusGraph(f"ball({factors.replace(',', '*')},R={radius})", ball.graph, "cayley-ball"))
    return out


def geodetic_corpus(kind: str = "all", seed: int = 0, gluings: int = 24, cayley_radius: int = 4) -> list[CorpusGraph]:
    """Geodetic test graphs: ``builtin``, ``glued``, ``cayley`` or ``all``.

    Gluing two geodetic graphs at a single vertex keeps them geodetic; every
    entry is re-checked on construction anyway.
    """
    if kind not in ("builtin", "glued", "cayley", "all"):
        raise ValueError(f"unknown corpus kind {kind!r}")
    builtin = _builtins()
    out = []
    if kind in ("builtin", "all"):
        out += builtin
    if kind in ("glued", "all"):
        out += _gluings(builtin, gluings, seed)
    if kind in ("cayley", "all"):
        out += _cayley_entries(cayley_radius)
    return out


# ------------------------------------------------------------------ graph verifiers


def verify_circuit_diameter(graph: SimpleGraph, name: str = "") -> VerifierReport:
    """Geodetic with isometric circuits of length <= 5 implies circuit diameter <= 2."""
    results = all_pairs_bfs(graph)
    geo = is_geodetic(graph, results)
    if not geo.geodetic:
        return VerifierReport("theoremB", name, Outcome.HYPOTHESES_NOT_MET,
                              {"failed_hypothesis": "geodetic", **geo.to_dict()})
    max_iec = max((r.length for r in enumerate_iecs(graph, results)), default=2)
    diameter = max_embedded_circuit_diameter(graph, results=results)
    details = {"geodetic": True, "max_iec": max_iec, "max_circuit_diameter": diameter}
    if max_iec > 5:
        details["failed_hypothesis"] = "max_iec<=5"
        return VerifierReport("theoremB", name, Outcome.HYPOTHESES_NOT_MET, details)
    if diameter <= 2:
        return VerifierReport("theoremB", name, Outcome.PASS, details)
    decomp = blocks(graph)
    bad = [sorted(b) for b in decomp.blocks
           if len(b) >= 2 and max(results[u].dist[v] for u in b for v in b) > 2]
    return VerifierReport("theoremB", name, Outcome.FAIL, details, [{"block": b} for b in bad])


def _apex_configs(graph: SimpleGraph, results) -> list[tuple[int, int, int]]:
    configs = []
    for res in results:
        d = res.dist
        for x, y in graph.edges():
            n = d[x]
            if n >= 1 and d[y] == n and res.first_steps[x].isdisjoint(res.first_steps[y]):
                configs.append((res.source, x, y))
    return configs


def verify_apex_circuits(graph: SimpleGraph, samples: int = APEX_EXHAUSTIVE_LIMIT, seed: int = 0,
                     name: str = "") -> VerifierReport:
    """Two equal-length geodesics from one vertex with different first steps and
    adjacent endpoints close up into an isometric circuit.

    Isometry is re-checked with fresh BFS runs from the circuit vertices.
    """
    results = all_pairs_bfs(graph)
    geo = is_geodetic(graph, results)
    if not geo.geodetic:
        return VerifierReport("apex", name, Outcome.HYPOTHESES_NOT_MET,
                              {"failed_hypothesis": "geodetic", **geo.to_dict()})
    configs = _apex_configs(graph, results)
    exhaustive = len(configs) <= samples
    chosen = configs if exhaustive else random.Random(seed).sample(configs, samples)
    witnesses = []
    for u0, x, y in chosen:
        res = results[u0]
        circuit = res.path_to(x) + list(reversed(res.path_to(y)[1:]))
        fresh = {v: bfs(graph, v).dist for v in circuit}
        if not is_isometric_circuit(circuit, lambda a, b: fresh[a][b]):
            witnesses.append({"apex": u0, "edge": [x, y], "circuit": circuit})
    details = {"configurations": len(configs), "checked": len(chosen), "exhaustive": exhaustive, "seed": seed}
    outcome = Outcome.FAIL if witnesses else Outcome.PASS
    return VerifierReport("apex", name, outcome, details, witnesses)


def broomlike_parameter(max_iec: int) -> int:
    return max(1, math.ceil((max_iec - 1) / 2))


def verify_broomlike(graph: SimpleGraph, name: str = "", s: int | None = None) -> VerifierReport:
    """IECs of length at most 2s+1 force the s-broomlike property."""
    results = all_pairs_bfs(graph)
    geo = is_geodetic(graph, results)
    if not geo.geodetic:
        return VerifierReport("broomlike", name, Outcome.HYPOTHESES_NOT_MET,
                              {"failed_hypothesis": "geodetic", **geo.to_dict()})
    max_iec = max((r.length for r in enumerate_iecs(graph, results)), default=2)
    s = broomlike_parameter(max_iec) if s is None else s
    report = is_s_broomlike(graph, s, results)
    details = {"max_iec": max_iec, **report.to_dict()}
    if max_iec > 2 * s + 1:
        return VerifierReport("broomlike", name, Outcome.HYPOTHESES_NOT_MET, details)
    if report.holds:
        return VerifierReport("broomlike", name, Outcome.PASS, details)
    return VerifierReport("broomlike", name, Outcome.FAIL, details, [details.get("witness")])


def verify_stemple(graph: SimpleGraph, name: str = "") -> VerifierReport:
    """Embedded 4-circuits of a geodetic graph span complete graphs."""
    results = all_pairs_bfs(graph)
    geo = is_geodetic(graph, results)
    if not geo.geodetic:
        return VerifierReport("stemple", name, Outcome.HYPOTHESES_NOT_MET,
                              {"failed_hypothesis": "geodetic", **geo.to_dict()})
    report = check_stemple_4circuits(graph, results)
    details = {"four_circuits": len(report.circuits), "violations": len(report.violations)}
    outcome = Outcome.PASS if report.holds else Outcome.FAIL
    return VerifierReport("stemple", name, outcome, details, [list(c) for c in report.violations])


def circuit_pairs(graph: SimpleGraph) -> set[tuple[int, int]]:
    """Vertex pairs visited together by some embedded circuit, by brute force.

    Adjacent pairs count through the length-two circuit u, v, u; longer
    circuits are enumerated from their smallest vertex.
    """
    adj = graph.adjacency
    pairs = set(graph.edges())
    for s in range(graph.n):
        stack = [(s, (s,))]
        while stack:
            x, path = stack.pop()
            for w in adj[x]:
                if w == s and len(path) >= 3:
                    pairs.update((min(a, b), max(a, b)) for a, b in itertools.combinations(path, 2))
                elif w > s and w not in path:
                    stack.append((w, path + (w,)))
    return pairs


def verify_block_circuits(graph: SimpleGraph, name: str = "", max_vertices: int = 12) -> VerifierReport:
    """Same block (with >= 2 vertices) iff a common embedded circuit, by brute force."""
    if graph.n > max_vertices:
        return VerifierReport("blocks", name, Outcome.HYPOTHESES_NOT_MET,
                              {"failed_hypothesis": f"n<={max_vertices}", "n": graph.n})
    decomp = blocks(graph)
    on_circuit = circuit_pairs(graph)
    witnesses = []
    for u, v in itertools.combinations(range(graph.n), 2):
        same_block = any(u in b and v in b for b in decomp.blocks)
        if same_block != ((u, v) in on_circuit):
            witnesses.append({"pair": [u, v], "same_block": same_block})
    tree_ok = block_cut_tree(decomp).is_tree()
    outcome = Outcome.PASS if not witnesses and tree_ok else Outcome.FAIL
    return VerifierReport("blocks", name, outcome, {"pairs": graph.n * (graph.n - 1) // 2,
                                                   "block_cut_tree_is_tree": tree_ok}, witnesses)


# ------------------------------------------------------------------ rewriting verifiers


def _circuit_labels(ball: CayleyBall, circuit: Sequence[int]) -> list[int]:
    m = len(circuit)
    return [ball.labels[circuit[i], circuit[(i + 1) % m]] for i in range(m)]


def _candidate_rule(ball: CayleyBall, labels: Sequence[int]):
    """(x_1..x_{n+1}, x_m^-1..x_{n+2}^-1) for a circuit of odd length m = 2n+1."""
    m = len(labels)
    n = (m - 1) // 2
    inv = ball.system.alphabet.inverse
    lhs = tuple(labels[: n + 1])
    rhs = tuple(inv[x] for x in reversed(labels[n + 1 :]))
    return lhs, rhs


def verify_circuit_rules(rws: StringRewritingSystem, ball: CayleyBall, scope: str = "all",
                  name: str = "") -> VerifierReport:
    """Isometric circuits of a convergent length-reducing group system spell rules.

    Checks (a) unique geodesics on every certified pair, (b) every certified
    isometric circuit of length > 2 is odd, and (c) reading the circuit's
    labels from any of its vertices, in at least one direction, gives a
    literal rule of the system. ``scope`` is ``"origin"`` (circuits through
    the identity) or ``"all"`` (every certified circuit in the ball).
    """
    _require_group_system(rws)
    if ball.system != rws:
        raise PreconditionError("ball was built from a different system")
    if scope not in ("origin", "all"):
        raise ValueError(f"unknown scope {scope!r}")
    view = ball.view
    geo = view.geodetic()
    # apex construction only ever yields odd circuits; an even isometric
    # circuit would show up in (a) as a pair with two geodesics
    iecs = view.iecs([0] if scope == "origin" else None)
    certified_iecs = [c for c in iecs if c.certified]
    witnesses = []
    if not geo["geodetic"]:
        witnesses.append({"check": "geodetic", **geo})
    rules = rws.rule_set
    both = 0
    readings = 0
    for rec in certified_iecs:
        if not rec.isometric:
            witnesses.append({"check": "isometric", "circuit": list(rec.circuit)})
            continue
        if rec.length % 2 == 0:
            witnesses.append({"check": "odd", "circuit": list(rec.circuit)})
            continue
        m = rec.length
        starts = [rec.circuit.index(0)] if scope == "origin" else range(m)
        for k in starts:
            fwd = [rec.circuit[(k + i) % m] for i in range(m)]
            bwd = [fwd[0]] + fwd[:0:-1]
            hits = []
            for orient in (fwd, bwd):
                cand = _candidate_rule(ball, _circuit_labels(ball, orient))
                hits.append(cand in rules)
            readings += 1
            both += all(hits)
            if not any(hits):
                cand = _candidate_rule(ball, _circuit_labels(ball, fwd))
                witnesses.append({
                    "check": "rule",
                    "circuit": [ball.view.names[v] for v in fwd],
                    "candidate": [rws.format_word(cand[0]), rws.format_word(cand[1])],
                })
    lengths = sorted({c.length for c in certified_iecs})
    details = {
        "radius": ball.radius,
        "scope": scope,
        "geodetic_on_certified_pairs": geo["geodetic"],
        "certified_pairs_checked": geo["checked_pairs"],
        "certified_iecs": len(certified_iecs),
        "uncertified_iecs": len(iecs) - len(certified_iecs),
        "iec_lengths": lengths,
        "readings": readings,
        "readings_matching_both_orientations": both,
    }
    return VerifierReport("lemma8", name, Outcome.FAIL if witnesses else Outcome.PASS, details, witnesses)


def _require_group_system(rws: StringRewritingSystem) -> None:
    report = check_convergent(rws)
    if not report.length_reducing:
        raise PreconditionError("system is not length-reducing")
    if not report.locally_confluent:
        raise PreconditionError("system is not confluent")
    if not rws.alphabet.inverse_closed:
        raise PreconditionError("alphabet is not closed under inverses")
    if not report.presents_group:
        raise PreconditionError("system does not present a group")


@dataclass
class PlainnessEvidence:
    """Finite-ball evidence; ``consistent_with_plain`` never certifies plainness."""

    system: str
    radius: int
    geodetic: bool
    max_iec: int
    max_lhs: int
    max_block_diameter: int
    consistent_with_plain: bool
    certified_blocks: int = 0
    uncertified_blocks: int = 0
    certified_iecs: int = 0
    uncertified_iecs: int = 0
    witnesses: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def plainness_evidence(rws: StringRewritingSystem, radius: int, name: str = "",
                       from_gen_plain: bool = False, vertex_cap: int | None = None) -> PlainnessEvidence:
    """Check the ball's certified part against the plain-group picture.

    Consistent means: unique geodesics on certified pairs, certified isometric
    circuits no longer than 2*max_lhs - 1, certified blocks of diameter <= 2.
    With ``from_gen_plain`` the blocks must have diameter exactly 1, as the
    free-product construction produces complete blocks and single edges.
    """
    _require_group_system(rws)
    ball = build_ball(rws, radius, vertex_cap)
    view = ball.view
    geo = view.geodetic()
    witnesses = []
    if not geo["geodetic"]:
        witnesses.append({"check": "geodetic", **geo})
    iecs = view.iecs()
    good = [c for c in iecs if c.certified and c.isometric]
    for c in iecs:
        if c.certified and not c.isometric:
            witnesses.append({"check": "isometric", "circuit": list(c.circuit)})
    max_iec = max((c.length for c in good), default=2)
    block_info = view.blocks()
    cert_blocks = [b for b in block_info if b["certified"]]
    max_block = max((b["diameter"] for b in cert_blocks), default=0)
    limit = 2 * rws.max_lhs - 1
    if max_iec > limit:
        witnesses.append({"check": "max_iec", "max_iec": max_iec, "limit": limit})
    if max_block > 2:
        witnesses.append({"check": "block_diameter", "blocks": [b["vertices"] for b in cert_blocks if b["diameter"] > 2]})
    if from_gen_plain and cert_blocks and max_block != 1:
        witnesses.append({"check": "construction_block_diameter", "max_block_diameter": max_block})
    consistent = geo["geodetic"] and max_iec <= limit and max_block <= 2
    if from_gen_plain and cert_blocks and max_block != 1:
        consistent = False
    return PlainnessEvidence(
        system=name or f"{len(rws.alphabet)} letters / {len(rws.rules)} rules",
        radius=radius,
        geodetic=geo["geodetic"],
        max_iec=max_iec,
        max_lhs=rws.max_lhs,
        max_block_diameter=max_block,
        consistent_with_plain=consistent,
        certified_blocks=len(cert_blocks),
        uncertified_blocks=len(block_info) - len(cert_blocks),
        certified_iecs=len(good),
        uncertified_iecs=sum(1 for c in iecs if not c.certified),
        witnesses=witnesses,
    )


# ------------------------------------------------------------------ suites

SUITES = ("all", "theoremB", "apex", "lemma8", "stemple", "broomlike", "corpus")


def run_suite(suite: str = "all", corpus: str = "all", seed: int = 0, radius: int = 5,
              rule_check_factors: Iterable[str] = RULE_CHECK_FACTORS) -> list[VerifierReport]:
    """Run one named suite (or all of them); reports come back sorted by name."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    wanted = set(SUITES[1:]) if suite == "all" else {suite}
    reports: list[VerifierReport] = []
    graphs = geodetic_corpus(corpus, seed=seed) if wanted - {"lemma8"} else []
    for entry in graphs:
        if "theoremB" in wanted:
            reports.append(verify_circuit_diameter(entry.graph, entry.name))
        if "apex" in wanted:
            reports.append(verify_apex_circuits(entry.graph, seed=seed, name=entry.name))
        if "stemple" in wanted:
            reports.append(verify_stemple(entry.graph, entry.name))
        if "broomlike" in wanted:
            reports.append(verify_broomlike(entry.graph, entry.name))
        if "corpus" in wanted:
            reports.append(verify_block_circuits(entry.graph, entry.name))
    if "lemma8" in wanted:
        for factors in rule_check_factors:
            rws = gen_plain(parse_factors(factors))
            ball = build_ball(rws, radius)
            reports.append(verify_circuit_rules(rws, ball, name=factors.replace(",", "*")))
    reports.sort(key=lambda r: (r.name, r.subject))
    return reports
