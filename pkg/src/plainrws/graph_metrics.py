"""Finite simple-graph analysis: geodesics, isometric circuits, blocks.

Vertices are ``0..n-1``. All analyses other than :func:`bfs` assume a
connected graph and raise :class:`DisconnectedGraphError` otherwise; the
circuit analyses additionally require a geodetic graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DisconnectedGraphError, NotGeodeticError, ParseError

__all__ = [
    "SimpleGraph",
    "BfsResult",
    "GeodeticReport",
    "IecRecord",
    "BlockDecomposition",
    "BlockCutTree",
    "BroomlikeReport",
    "StempleReport",
    "parse_edge_list",
    "bfs",
    "all_pairs_bfs",
    "is_geodetic",
    "enumerate_iecs",
    "max_iec_length",
    "is_isometric_circuit",
    "blocks",
    "block_cut_tree",
    "set_diameter",
    "max_embedded_circuit_diameter",
    "is_s_broomlike",
    "check_stemple_4circuits",
]

UNREACHED = -1


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph stored as sorted adjacency tuples."""

    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        adj = tuple(tuple(sorted(set(nbrs))) for nbrs in self.adjacency)
        object.__setattr__(self, "adjacency", adj)
        n = len(adj)
        for u, nbrs in enumerate(adj):
            for v in nbrs:
                if not 0 <= v < n:
                    raise ValueError(f"neighbor {v} of {u} out of range")
                if v == u:
                    raise ValueError(f"loop at vertex {u}")
                if u not in adj[v]:
                    raise ValueError(f"adjacency not symmetric at {u}-{v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(tuple(tuple(s) for s in nbrs))

    @property
    def n(self) -> int:
        return len(self.adjacency)

    def __len__(self):
        return self.n

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjacency_sets[u]

    @cached_property
    def _adjacency_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        return all(d != UNREACHED for d in bfs(self, 0).dist)

    def require_connected(self) -> None:
        if not self.is_connected():
            raise DisconnectedGraphError("graph is empty or disconnected")

    def to_edge_list(self) -> str:
        return "".join(f"{u} {v}\n" for u, v in self.edges())


def parse_edge_list(text: str, source: str | None = None) -> SimpleGraph:
    """One ``u v`` pair per line, 0-based; ``#`` starts a comment.

    A line holding a single integer declares an isolated vertex index.
    """
    edges = []
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"expected integers, got {line!r}", lineno, source) from None
        if len(nums) not in (1, 2) or min(nums) < 0:
            raise ParseError(f"expected 'u v' with non-negative ids, got {line!r}", lineno, source)
        if len(nums) == 2:
            if nums[0] == nums[1]:
                raise ParseError(f"loop at vertex {nums[0]}", lineno, source)
            edges.append((nums[0], nums[1]))
        top = max(top, *nums)
    return SimpleGraph.from_edges(top + 1, edges)


# ------------------------------------------------------------------ BFS


@dataclass(frozen=True)
class BfsResult:
    """Single-source shortest-path data.

    ``count[v]`` is the number of geodesics from ``source`` to ``v``;
    ``first_steps[v]`` the neighbors of ``source`` that start one; ``parent[v]``
    a predecessor on a geodesic (the unique one when ``count[v] == 1``).
    Unreached vertices have distance ``UNREACHED`` and count 0.
    """

    source: int
    dist: tuple[int, ...]
    count: tuple[int, ...]
    first_steps: tuple[frozenset[int], ...]
    parent: tuple[int, ...]

    def path_to(self, v: int) -> list[int]:
        """A geodesic from the source to ``v`` (the unique one in geodetic graphs)."""
        if self.dist[v] == UNREACHED:
            raise ValueError(f"{v} unreachable from {self.source}")
        path = [v]
        while v != self.source:
            v = self.parent[v]
            path.append(v)
        path.reverse()
        return path


def bfs(graph: SimpleGraph, source: int, max_depth: int | None = None) -> BfsResult:
    """Breadth-first search counting geodesics (Brandes-style sigma).

    With ``max_depth`` the search stops at that distance; farther vertices are
    reported unreached.
    """
    n = graph.n
    if not 0 <= source < n:
        raise ValueError(f"source {source} out of range")
    dist = [UNREACHED] * n
    count = [0] * n
    parent = [UNREACHED] * n
    first: list[frozenset[int] | set[int]] = [frozenset()] * n
    dist[source] = 0
    count[source] = 1
    parent[source] = source
    queue = deque([source])
    adj = graph.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u]
        if max_depth is not None and du >= max_depth:
            continue
        for v in adj[u]:
            if dist[v] == UNREACHED:
                dist[v] = du + 1
                parent[v] = u
                first[v] = set()
                queue.append(v)
            if dist[v] == du + 1:
                count[v] += count[u]
                first[v] |= {v} if u == source else first[u]
    return BfsResult(
        source,
        tuple(dist),
        tuple(count),
        tuple(frozenset(s) for s in first),
        tuple(parent),
    )


def all_pairs_bfs(graph: SimpleGraph) -> list[BfsResult]:
    return [bfs(graph, s) for s in range(graph.n)]


@dataclass(frozen=True)
class GeodeticReport:
    geodetic: bool
    witness: tuple[int, int] | None = None
    geodesics: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __bool__(self):
        return self.geodetic

    def to_dict(self) -> dict:
        out = {"geodetic": self.geodetic}
        if self.witness is not None:
            out["witness"] = list(self.witness)
            out["geodesics"] = [list(p) for p in self.geodesics]
        return out


def _two_geodesics(graph: SimpleGraph, res: BfsResult, v: int) -> tuple[list[int], list[int]]:
    # walk back from v until a vertex with two geodesic predecessors appears
    tail = [v]
    x = v
    while True:
        preds = [p for p in graph.adjacency[x] if res.dist[p] == res.dist[x] - 1]
        if len(preds) >= 2:
            p1, p2 = preds[0], preds[1]
            tail.reverse()
            return res.path_to(p1) + tail, res.path_to(p2) + tail
        x = preds[0]
        tail.append(x)


def is_geodetic(graph: SimpleGraph, results: Sequence[BfsResult] | None = None) -> GeodeticReport:
    graph.require_connected()
    results = results if results is not None else all_pairs_bfs(graph)
    for res in results:
        for v, c in enumerate(res.count):
            if c > 1:
                p1, p2 = _two_geodesics(graph, res, v)
                return GeodeticReport(False, (res.source, v), (tuple(p1), tuple(p2)))
    return GeodeticReport(True)


def _require_geodetic(graph, results):
    report = is_geodetic(graph, results)
    if not report.geodetic:
        u, v = report.witness
        raise NotGeodeticError(f"graph is not geodetic: two geodesics join {u} and {v}")


# ------------------------------------------------------------------ IECs


@dataclass(frozen=True)
class IecRecord:
    """Isometric circuit built from an apex and an opposite edge.

    ``path_x`` and ``path_y`` are the geodesics apex -> x and apex -> y, each
    of length ``half_length``; ``x`` and ``y`` are adjacent.
    """

    apex: int
    x: int
    y: int
    half_length: int
    path_x: tuple[int, ...]
    path_y: tuple[int, ...]

    @property
    def length(self) -> int:
        return 2 * self.half_length + 1

    @property
    def circuit(self) -> tuple[int, ...]:
        """Vertices in traversal order apex, ..., x, y, ..., (apex excluded at the end)."""
        return self.path_x + tuple(reversed(self.path_y[1:]))

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.circuit)

    def to_dict(self) -> dict:
        return {"apex": self.apex, "edge": [self.x, self.y], "length": self.length, "circuit": list(self.circuit)}


def is_isometric_circuit(circuit: Sequence[int], dist) -> bool:
    """``dist(u, v)`` must equal the cyclic distance for every pair on the circuit."""
    m = len(circuit)
    if len(set(circuit)) != m:
        return False
    for i in range(m):
        for j in range(i + 1, m):
            if dist(circuit[i], circuit[j]) != min(j - i, m + i - j):
                return False
    return True


def _iec_candidates(graph: SimpleGraph, res: BfsResult, max_depth: int | None = None):
    """(x, y, n) for every edge at equal distance n >= 1 from the source with distinct first steps."""
    d = res.dist
    for x, y in graph.edges():
        n = d[x]
        if n < 1 or d[y] != n or (max_depth is not None and n > max_depth):
            continue
        if res.first_steps[x].isdisjoint(res.first_steps[y]):
            yield x, y, n


def enumerate_iecs(graph: SimpleGraph, results: Sequence[BfsResult] | None = None) -> list[IecRecord]:
    """Every isometric circuit of length > 2, once per vertex set.

    In a geodetic graph each such circuit has odd length 2n+1 and arises from
    any of its vertices as apex together with the opposite edge, both of whose
    ends sit at distance n with different first steps.
    """
    results = results if results is not None else all_pairs_bfs(graph)
    _require_geodetic(graph, results)
    seen = set()
    out = []
    for res in results:
        for x, y, n in _iec_candidates(graph, res):
            rec = IecRecord(res.source, x, y, n, tuple(res.path_to(x)), tuple(res.path_to(y)))
            key = rec.vertex_set
            if key in seen:
                continue
            seen.add(key)
            if not is_isometric_circuit(rec.circuit, lambda a, b: results[a].dist[b]):
                raise AssertionError(f"apex construction produced a non-isometric circuit {rec.circuit}")
            out.append(rec)
    # an even isometric circuit would put its antipode at two geodesics from the
    # apex, which the geodetic check above already rules out
    assert all(rec.length % 2 == 1 for rec in out)
    return out


def max_iec_length(graph: SimpleGraph, results: Sequence[BfsResult] | None = None) -> int:
    return max((rec.length for rec in enumerate_iecs(graph, results)), default=2)


# ------------------------------------------------------------------ blocks


@dataclass(frozen=True)
class BlockDecomposition:
    n_vertices: int
    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]
    edge_block: dict = field(compare=False, hash=False, repr=False)

    def block_of_edge(self, u: int, v: int) -> int:
        return self.edge_block[(min(u, v), max(u, v))]

    def to_dict(self) -> dict:
        return {
            "blocks": [sorted(b) for b in self.blocks],
            "cut_vertices": sorted(self.cut_vertices),
        }


def blocks(graph: SimpleGraph) -> BlockDecomposition:
    """Biconnected components via an iterative Hopcroft-Tarjan edge-stack DFS."""
    graph.require_connected()
    n = graph.n
    adj = graph.adjacency
    if n == 1:
        return BlockDecomposition(1, (frozenset([0]),), frozenset(), {})
    disc = [-1] * n
    low = [0] * n
    edge_stack: list[tuple[int, int]] = []
    comps: list[list[tuple[int, int]]] = []
    cuts = set()
    timer = 0
    root = 0
    disc[root] = low[root] = timer
    timer += 1
    root_children = 0
    stack = [(root, -1, iter(adj[root]))]
    while stack:
        u, parent, it = stack[-1]
        advanced = False
        for v in it:
            if v == parent:
                continue
            if disc[v] == -1:
                disc[v] = low[v] = timer
                timer += 1
                edge_stack.append((u, v))
                stack.append((v, u, iter(adj[v])))
                advanced = True
                break
            if disc[v] < disc[u]:
                edge_stack.append((u, v))
                low[u] = min(low[u], disc[v])
        if advanced:
            continue
        stack.pop()
        if parent == -1:
            continue
        low[parent] = min(low[parent], low[u])
        if low[u] >= disc[parent]:
            if parent == root:
                root_children += 1
            else:
                cuts.add(parent)
            comp = []
            while True:
                e = edge_stack.pop()
                comp.append(e)
                if e == (parent, u):
                    break
            comps.append(comp)
    if root_children > 1:
        cuts.add(root)

    vertex_sets = [frozenset(x for e in comp for x in e) for comp in comps]
    order = sorted(range(len(comps)), key=lambda i: sorted(vertex_sets[i]))
    edge_block = {}
    for new, old in enumerate(order):
        for u, v in comps[old]:
            edge_block[(min(u, v), max(u, v))] = new
    return BlockDecomposition(n, tuple(vertex_sets[i] for i in order), frozenset(cuts), edge_block)


@dataclass(frozen=True)
class BlockCutTree:
    """Bipartite incidence tree: type-I node per vertex, type-II node per block.

    Node ids: vertex ``x`` is node ``x``; block ``b`` is node ``n_vertices + b``.
    """

    n_vertices: int
    n_blocks: int
    edges: tuple[tuple[int, int], ...]  # (vertex, block index)

    @property
    def node_count(self) -> int:
        return self.n_vertices + self.n_blocks

    def as_graph(self) -> SimpleGraph:
        return SimpleGraph.from_edges(self.node_count, [(x, self.n_vertices + b) for x, b in self.edges])

    def is_tree(self) -> bool:
        if len(self.edges) != self.node_count - 1:
            return False
        return self.as_graph().is_connected()

    def to_dict(self) -> dict:
        return {
            "type_I": self.n_vertices,
            "type_II": self.n_blocks,
            "edges": [[x, b] for x, b in self.edges],
        }


def block_cut_tree(decomp: BlockDecomposition) -> BlockCutTree:
    edges = tuple(sorted((x, b) for b, block in enumerate(decomp.blocks) for x in block))
    tree = BlockCutTree(decomp.n_vertices, len(decomp.blocks), edges)
    if not tree.is_tree():
        raise AssertionError("block-cut incidence structure is not a tree")
    return tree


def set_diameter(vertices: Iterable[int], dist) -> int:
    """Max whole-graph distance between members; ``dist(u, v)`` supplies distances."""
    vs = sorted(vertices)
    return max((dist(u, v) for i, u in enumerate(vs) for v in vs[i + 1 :]), default=0)


def max_embedded_circuit_diameter(
    graph: SimpleGraph,
    decomp: BlockDecomposition | None = None,
    results: Sequence[BfsResult] | None = None,
) -> int:
    """Largest block diameter, distances taken in the whole graph.

    Two vertices share an embedded circuit exactly when they share a block,
    so this is also the largest diameter of any embedded circuit.
    """
    decomp = decomp if decomp is not None else blocks(graph)
    results = results if results is not None else all_pairs_bfs(graph)
    return max(
        (set_diameter(b, lambda u, v: results[u].dist[v]) for b in decomp.blocks if len(b) >= 2),
        default=0,
    )


# ------------------------------------------------------------------ broomlike


@dataclass(frozen=True)
class BroomlikeReport:
    s: int
    holds: bool
    checked: int
    # (a0, geodesic a0..a_n, b, p) for the first violation found
    witness: tuple[int, tuple[int, ...], int, int] | None = None
    max_divergence: int = 0

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        out = {"s": self.s, "holds": self.holds, "checked": self.checked, "max_divergence": self.max_divergence}
        if self.witness is not None:
            a0, path, b, p = self.witness
            out["witness"] = {"a0": a0, "path": list(path), "b": b, "p": p}
        return out


def is_s_broomlike(graph: SimpleGraph, s: int, results: Sequence[BfsResult] | None = None) -> BroomlikeReport:
    """Check that failed geodesic extensions re-branch within ``s`` steps of the tip.

    For each source a0 and each edge {a_n, b} with both ends at distance n
    from a0, the geodesics a0 -> a_n and a0 -> b share a prefix
    a0..a_{n-p}; the graph is s-broomlike iff every such p is at most s.
    """
    if s < 1:
        raise ValueError("s must be a positive integer")
    results = results if results is not None else all_pairs_bfs(graph)
    _require_geodetic(graph, results)
    checked = 0
    worst = 0
    witness = None
    for res in results:
        d = res.dist
        for u, v in graph.edges():
            n = d[u]
            if n < 1 or d[v] != n:
                continue
            pu, pv = res.path_to(u), res.path_to(v)
            shared = 0
            while shared <= n and pu[shared] == pv[shared]:
                shared += 1
            p = n - (shared - 1)
            for b, path in ((v, pu), (u, pv)):
                checked += 1
                if p > worst:
                    worst = p
                if p > s and witness is None:
                    witness = (res.source, tuple(path), b, p)
    return BroomlikeReport(s, witness is None, checked, witness, worst)


# ------------------------------------------------------------------ 4-circuits


@dataclass(frozen=True)
class StempleReport:
    circuits: tuple[tuple[int, int, int, int], ...]
    violations: tuple[tuple[int, int, int, int], ...]

    @property
    def holds(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.holds

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "circuits": [list(c) for c in self.circuits],
            "violations": [list(c) for c in self.violations],
        }


def _canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    m = len(cycle)
    i = cycle.index(min(cycle))
    fwd = tuple(cycle[(i + k) % m] for k in range(m))
    bwd = tuple(cycle[(i - k) % m] for k in range(m))
    return min(fwd, bwd)


def check_stemple_4circuits(graph: SimpleGraph, results: Sequence[BfsResult] | None = None) -> StempleReport:
    """Every embedded 4-circuit of a geodetic graph must span a complete graph."""
    results = results if results is not None else all_pairs_bfs(graph)
    _require_geodetic(graph, results)
    sets = graph._adjacency_sets
    found = set()
    for w0 in range(graph.n):
        for w2 in range(w0 + 1, graph.n):
            common = sorted(sets[w0] & sets[w2])
            for i, w1 in enumerate(common):
                for w3 in common[i + 1 :]:
                    found.add(_canonical_cycle((w0, w1, w2, w3)))
    circuits = tuple(sorted(found))
    violations = tuple(c for c in circuits if not (graph.has_edge(c[0], c[2]) and graph.has_edge(c[1], c[3])))
    return StempleReport(circuits, violations)
