"""Balls in undirected Cayley graphs built from normal forms.

A radius-R ball only sees part of the infinite graph. A pair (u, v) is
*certified* when ``min(level(u), level(v)) + d_ball(u, v) <= R``: every path of
that length from the lower vertex stays inside the ball, so the ball's
distance and geodesics between u and v are the true ones.
"""

from __future__ import annotations

import json
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

from .errors import ParseError, PreconditionError, VertexCapExceeded
from .graph_metrics import SimpleGraph, blocks, is_isometric_circuit
from .rewrite_core import StringRewritingSystem, Word, normalize_append

__all__ = [
    "DEFAULT_VERTEX_CAP",
    "VERTEX_CAP_ENV",
    "CayleyBall",
    "CertifiedView",
    "LocalBfs",
    "CertifiedIec",
    "build_ball",
    "certified",
    "default_vertex_cap",
    "load_ball_json",
]

DEFAULT_VERTEX_CAP = 200_000
VERTEX_CAP_ENV = "PLAINRWS_VERTEX_CAP"


def default_vertex_cap() -> int:
    raw = os.environ.get(VERTEX_CAP_ENV)
    if raw is None:
        return DEFAULT_VERTEX_CAP
    cap = int(raw)
    if cap < 1:
        raise ValueError(f"{VERTEX_CAP_ENV} must be at least 1")
    return cap


@dataclass
class LocalBfs:
    """Depth-bounded BFS from one vertex, kept sparse.

    ``first[v]`` is the first step of the geodesic recorded through ``parent``.
    """

    source: int
    depth: int
    dist: dict[int, int]
    count: dict[int, int]
    parent: dict[int, int]
    first: dict[int, int]

    def path_to(self, v: int) -> list[int]:
        path = [v]
        while v != self.source:
            v = self.parent[v]
            path.append(v)
        path.reverse()
        return path


def _local_bfs(adj, source: int, depth: int) -> LocalBfs:
    dist = {source: 0}
    count = {source: 1}
    parent = {source: source}
    first = {source: source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if du >= depth:
            continue
        for v in adj[u]:
            dv = dist.get(v)
            if dv is None:
                dist[v] = du + 1
                count[v] = count[u]
                parent[v] = u
                first[v] = v if u == source else first[u]
                queue.append(v)
            elif dv == du + 1:
                count[v] += count[u]
    return LocalBfs(source, depth, dist, count, parent, first)


@dataclass(frozen=True)
class CertifiedIec:
    apex: int
    circuit: tuple[int, ...]
    certified: bool
    isometric: bool | None  # None when uncertified

    @property
    def length(self) -> int:
        return len(self.circuit)


class CertifiedView:
    """Certified-pair metric on a ball given only its graph, levels and radius.

    Per-vertex bounded BFS results are memoized; the view is otherwise
    read-only.
    """

    def __init__(self, graph: SimpleGraph, levels, radius: int, names=None):
        self.graph = graph
        self.levels = tuple(levels)
        self.radius = radius
        self.names = tuple(names) if names is not None else None
        if len(self.levels) != graph.n:
            raise ValueError("one level per vertex required")
        self._local: dict[int, LocalBfs] = {}

    def local(self, u: int) -> LocalBfs:
        res = self._local.get(u)
        if res is None:
            res = _local_bfs(self.graph.adjacency, u, self.radius - self.levels[u])
            self._local[u] = res
        return res

    def certified_distance(self, u: int, v: int) -> int | None:
        """Exact distance for certified pairs, ``None`` otherwise."""
        if self.levels[v] < self.levels[u]:
            u, v = v, u
        return self.local(u).dist.get(v)

    def certified(self, u: int, v: int) -> bool:
        return self.certified_distance(u, v) is not None

    def geodetic(self, sources: Iterable[int] | None = None) -> dict:
        """Unique geodesics on every certified pair (restricted to ``sources`` if given).

        Every pair found by the bounded BFS from ``u`` is certified, and every
        certified pair is found from its lower-level end.
        """
        sources = range(self.graph.n) if sources is None else sources
        checked = 0
        for u in sources:
            res = self.local(u)
            for v, c in res.count.items():
                checked += 1
                if c > 1:
                    return {"geodetic": False, "checked_pairs": checked, "witness": [u, v],
                            "geodesics": [list(p) for p in self._two_paths(res, v)]}
        return {"geodetic": True, "checked_pairs": checked}

    def _two_paths(self, res: LocalBfs, v: int):
        adj = self.graph.adjacency
        tail = [v]
        x = v
        while True:
            preds = [p for p in adj[x] if res.dist.get(p) == res.dist[x] - 1]
            if len(preds) >= 2:
                back = list(reversed(tail))
                return res.path_to(preds[0]) + back, res.path_to(preds[1]) + back
            x = preds[0]
            tail.append(x)

    def iecs(self, apexes: Iterable[int] | None = None) -> list[CertifiedIec]:
        """Circuits built from apex + opposite edge at equal distance with distinct first steps.

        Each vertex set is reported once. Candidates touching a non-unique
        geodesic are skipped; :meth:`geodetic` reports those.
        """
        apexes = range(self.graph.n) if apexes is None else apexes
        adj = self.graph.adjacency
        seen = set()
        out = []
        for u in apexes:
            res = self.local(u)
            dist, count, first = res.dist, res.count, res.first
            for x, n in dist.items():
                if n < 1 or count[x] != 1:
                    continue
                for y in adj[x]:
                    if y <= x or dist.get(y) != n or count[y] != 1 or first[x] == first[y]:
                        continue
                    circuit = tuple(res.path_to(x) + list(reversed(res.path_to(y)[1:])))
                    key = frozenset(circuit)
                    if key in seen:
                        continue
                    seen.add(key)
                    out.append(self._classify(u, circuit))
        return out

    def _classify(self, apex, circuit) -> CertifiedIec:
        m = len(circuit)
        dists = {}
        for i in range(m):
            for j in range(i + 1, m):
                d = self.certified_distance(circuit[i], circuit[j])
                if d is None:
                    return CertifiedIec(apex, circuit, False, None)
                dists[circuit[i], circuit[j]] = dists[circuit[j], circuit[i]] = d
        return CertifiedIec(apex, circuit, True, is_isometric_circuit(circuit, lambda a, b: dists[a, b]))

    def blocks(self) -> list[dict]:
        """Blocks of the ball with their certification status and certified diameter."""
        out = []
        for block in blocks(self.graph).blocks:
            if len(block) < 2:
                continue
            members = sorted(block)
            diameter = 0
            ok = True
            for i, a in enumerate(members):
                for b in members[i + 1 :]:
                    d = self.certified_distance(a, b)
                    if d is None:
                        ok = False
                        break
                    diameter = max(diameter, d)
                if not ok:
                    break
            out.append({"vertices": members, "certified": ok, "diameter": diameter if ok else None})
        return out


@dataclass(frozen=True, eq=False)
class CayleyBall:
    """Radius-R ball of the undirected Cayley graph; vertex 0 is the identity.

    ``words[v]`` is the normal form at vertex ``v`` and ``levels[v]`` its
    distance to vertex 0 (equal to its length). ``labels[(u, v)]`` is the
    lowest-index letter x with ``normalize(words[u] x) == words[v]``.
    """

    system: StringRewritingSystem
    radius: int
    words: tuple[Word, ...]
    levels: tuple[int, ...]
    graph: SimpleGraph
    labels: dict = field(repr=False)

    @cached_property
    def index(self) -> dict[Word, int]:
        return {w: i for i, w in enumerate(self.words)}

    @cached_property
    def view(self) -> CertifiedView:
        names = [self.system.format_word(w) for w in self.words]
        return CertifiedView(self.graph, self.levels, self.radius, names)

    @property
    def n(self) -> int:
        return len(self.words)

    def level_sizes(self) -> list[int]:
        sizes = [0] * (self.radius + 1)
        for lv in self.levels:
            sizes[lv] += 1
        return sizes

    def vertex(self, word) -> int:
        if isinstance(word, str):
            word = self.system.parse_word(word)
        return self.index[tuple(word)]

    def certified(self, u: int, v: int) -> bool:
        return self.view.certified(u, v)

    def to_json(self) -> str:
        fmt = self.system.format_word
        names = self.system.alphabet.names
        data = {
            "format": "cayley-ball",
            "version": 1,
            "radius": self.radius,
            "letters": list(names),
            "vertices": [
                {"id": i, "word": fmt(w), "level": lv} for i, (w, lv) in enumerate(zip(self.words, self.levels))
            ],
            "edges": [
                {"u": u, "v": v, "label": names[self.labels[u, v]], "reverse_label": names[self.labels[v, u]]}
                for u, v in self.graph.edges()
            ],
        }
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"

    def to_dot(self) -> str:
        fmt = self.system.format_word
        names = self.system.alphabet.names
        lines = ["graph cayley_ball {"]
        for i, w in enumerate(self.words):
            lines.append(f'  {i} [label="{fmt(w)}", level={self.levels[i]}];')
        for u, v in self.graph.edges():
            lines.append(f'  {u} -- {v} [label="{names[self.labels[u, v]]}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _check_ball_preconditions(rws: StringRewritingSystem) -> None:
    report = rws.report
    if not report.length_reducing:
        raise PreconditionError("system is not length-reducing")
    if not report.locally_confluent:
        raise PreconditionError(f"system is not confluent ({len(report.unresolved_pairs)} unresolved critical pairs)")
    if not rws.alphabet.inverse_closed:
        raise PreconditionError("alphabet is not closed under inverses")
    if not report.presents_group:
        raise PreconditionError("system does not present a group")


def build_ball(rws: StringRewritingSystem, radius: int, vertex_cap: int | None = None) -> CayleyBall:
    """All normal forms of length <= radius, joined when they differ by one letter."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    cap = default_vertex_cap() if vertex_cap is None else vertex_cap
    _check_ball_preconditions(rws)
    letters = range(len(rws.alphabet))

    words: list[Word] = [()]
    frontier: list[Word] = [()]
    for level in range(radius):
        nxt = set()
        for w in frontier:
            for x in letters:
                ext = w + (x,)
                if rws.is_irreducible(ext):
                    nxt.add(ext)
        frontier = sorted(nxt)
        words.extend(frontier)
        if len(words) > cap:
            raise VertexCapExceeded(f"ball of radius {radius} exceeds {cap} vertices (reached level {level + 1})")

    index = {w: i for i, w in enumerate(words)}
    labels: dict[tuple[int, int], int] = {}
    nbrs: list[set[int]] = [set() for _ in words]
    for u, w in enumerate(words):
        for x in letters:
            v = index.get(normalize_append(rws, w, x))
            if v is None or v == u:
                continue
            nbrs[u].add(v)
            labels.setdefault((u, v), x)
    graph = SimpleGraph(tuple(tuple(s) for s in nbrs))
    levels = tuple(len(w) for w in words)
    return CayleyBall(rws, radius, tuple(words), levels, graph, labels)


def certified(ball: CayleyBall, u: int, v: int) -> bool:
    return ball.certified(u, v)


def load_ball_json(text: str, source: str | None = None) -> CertifiedView:
    """Read ball JSON written by :meth:`CayleyBall.to_json` into a certified view."""
    try:
        data = json.loads(text)
        verts = sorted(data["vertices"], key=lambda v: v["id"])
        n = len(verts)
        if [v["id"] for v in verts] != list(range(n)):
            raise ParseError("vertex ids must be 0..n-1", None, source)
        graph = SimpleGraph.from_edges(n, [(e["u"], e["v"]) for e in data["edges"]])
        return CertifiedView(graph, [v["level"] for v in verts], int(data["radius"]), [v["word"] for v in verts])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed ball JSON: {exc}", None, source) from None
