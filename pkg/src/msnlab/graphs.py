"""Directed input graphs with distinguished vertices ``s`` and ``t``.

Graphs are immutable values.  Vertex names are alphanumeric tokens; ``s``
and ``t`` are always present.  Tree-oriented helpers work on the *body* of a
graph: every vertex except ``s``/``t`` when those are isolated, so a bare tree
can be written in the edge-list format without mentioning the terminals.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import random
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

S = "s"
T = "t"

_TOKEN = re.compile(r"^[A-Za-z0-9_]+$")
_EDGE_LINE = re.compile(r"^([A-Za-z0-9_]+)\s*->\s*([A-Za-z0-9_]+)$")
_VERTEX_LINE = re.compile(r"^vertex\s+([A-Za-z0-9_]+)$")

DEFAULT_SIGMA_BUDGET = 10**6
DEFAULT_TREE_LIMIT = 10


class GraphError(ValueError):
    pass


class ParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class DiGraph:
    vertices: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable[tuple[str, str]] = ()):
        edge_set = frozenset((str(u), str(v)) for u, v in edges)
        vs = set(vertices) | {S, T}
        for u, v in edge_set:
            if u == v:
                raise GraphError(f"self-loop on {u!r}")
            vs.add(u)
            vs.add(v)
        for name in vs:
            if not isinstance(name, str) or not _TOKEN.match(name):
                raise GraphError(f"bad vertex name {name!r}")
        object.__setattr__(self, "vertices", frozenset(vs))
        object.__setattr__(self, "edges", edge_set)

    # dense indices follow the sorted order of names
    @property
    def order(self) -> tuple[str, ...]:
        return tuple(sorted(self.vertices))

    @property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.order)}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def inner(self) -> frozenset[str]:
        return self.vertices - {S, T}

    def successors(self, v: str) -> list[str]:
        return sorted(b for a, b in self.edges if a == v)

    def predecessors(self, v: str) -> list[str]:
        return sorted(a for a, b in self.edges if b == v)

    def degree(self, v: str) -> int:
        return sum(1 for a, b in self.edges if v in (a, b))

    def has_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.edges

    def add_edges(self, *edges: tuple[str, str]) -> "DiGraph":
        return DiGraph(self.vertices, self.edges | set(edges))

    def remove_edges(self, *edges: tuple[str, str]) -> "DiGraph":
        return DiGraph(self.vertices, self.edges - set(edges))

    def relabel(self, mapping: dict[str, str]) -> "DiGraph":
        f = lambda v: mapping.get(v, v)  # noqa: E731
        return DiGraph((f(v) for v in self.vertices), ((f(a), f(b)) for a, b in self.edges))

    def union(self, other: "DiGraph") -> "DiGraph":
        return DiGraph(self.vertices | other.vertices, self.edges | other.edges)

    def subgraph(self, keep: Iterable[str]) -> "DiGraph":
        keep = set(keep) | {S, T}
        return DiGraph(keep, ((a, b) for a, b in self.edges if a in keep and b in keep))

    def body(self) -> frozenset[str]:
        touched = {x for e in self.edges for x in e}
        return frozenset(v for v in self.vertices if v not in (S, T) or v in touched)

    def __repr__(self) -> str:
        es = ", ".join(f"{a}->{b}" for a, b in sorted(self.edges))
        extra = sorted(self.vertices - {x for e in self.edges for x in e} - {S, T})
        iso = f" | {' '.join(extra)}" if extra else ""
        return f"DiGraph({es}{iso})"

    def to_text(self) -> str:
        return format_edge_list(self)

    def to_json(self) -> dict:
        return {"vertices": sorted(self.vertices), "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, data: dict) -> "DiGraph":
        return cls(data.get("vertices", ()), (tuple(e) for e in data["edges"]))


def parse_edge_list(text: str) -> DiGraph:
    """Parse ``u -> v`` lines, ``vertex u`` declarations and ``#`` comments."""
    vertices: set[str] = set()
    edges: list[tuple[str, str]] = []
    seen: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _EDGE_LINE.match(line)
        if m:
            u, v = m.group(1), m.group(2)
            if u == v:
                raise ParseError(f"self-loop {u} -> {v}", lineno)
            if (u, v) in seen:
                raise ParseError(f"duplicate edge {u} -> {v}", lineno)
            seen.add((u, v))
            edges.append((u, v))
            continue
        m = _VERTEX_LINE.match(line)
        if m:
            vertices.add(m.group(1))
            continue
        raise ParseError(f"malformed line {raw!r}", lineno)
    return DiGraph(vertices, edges)


def format_edge_list(g: DiGraph) -> str:
    lines = [f"{a} -> {b}" for a, b in sorted(g.edges)]
    touched = {x for e in g.edges for x in e}
    lines += [f"vertex {v}" for v in sorted(g.vertices - touched - {S, T})]
    return "\n".join(lines) + ("\n" if lines else "")


def graph(*edges: str, isolated: Iterable[str] = ()) -> DiGraph:
    """Shorthand: ``graph("s->a", "a->t", isolated=["b"])``."""
    pairs = []
    for e in edges:
        u, v = (x.strip() for x in e.split("->"))
        pairs.append((u, v))
    return DiGraph(isolated, pairs)


# ---------------------------------------------------------------- reachability

def reachable(g: DiGraph, sources: Iterable[str], reverse: bool = False) -> set[str]:
    adj: dict[str, list[str]] = {v: [] for v in g.vertices}
    for a, b in g.edges:
        if reverse:
            adj[b].append(a)
        else:
            adj[a].append(b)
    seen = set(sources)
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def has_st_path(g: DiGraph) -> bool:
    return T in reachable(g, [S])


def shortest_st_path(g: DiGraph) -> list[str] | None:
    prev: dict[str, str | None] = {S: None}
    queue = deque([S])
    succ = {v: [] for v in g.vertices}
    for a, b in sorted(g.edges):
        succ[a].append(b)
    while queue:
        u = queue.popleft()
        if u == T:
            path = [T]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for w in succ[u]:
            if w not in prev:
                prev[w] = u
                queue.append(w)
    return None


def simple_st_paths(vertices: Iterable[str]) -> Iterator[DiGraph]:
    """Every input graph that is a single simple s-t path over ``vertices``."""
    vs = set(vertices) | {S, T}
    inner = sorted(vs - {S, T})
    for k in range(len(inner) + 1):
        for mid in itertools.permutations(inner, k):
            seq = (S, *mid, T)
            yield DiGraph(vs, zip(seq, seq[1:]))


# ---------------------------------------------------------------- permutations

def iter_sigma(g: DiGraph, fixed: Iterable[str] = (S, T)) -> Iterator[DiGraph]:
    """Stream one relabeled graph per permutation of the non-fixed vertices.

    Duplicates (automorphic images) are not filtered here.
    """
    fixed = set(fixed) | {S, T}
    if not fixed <= g.vertices:
        raise GraphError(f"fixed set {sorted(fixed - g.vertices)} not in graph")
    free = sorted(g.vertices - fixed)
    for perm in itertools.permutations(free):
        yield g.relabel(dict(zip(free, perm)))


def sigma(g: DiGraph, fixed: Iterable[str] = (S, T), budget: int = DEFAULT_SIGMA_BUDGET) -> set[DiGraph]:
    fixed = set(fixed) | {S, T}
    free = len(g.vertices - fixed)
    if math.factorial(free) > budget:
        raise GraphError(f"{free}! permutations exceed sigma budget {budget}; use iter_sigma")
    return set(iter_sigma(g, fixed))


# ---------------------------------------------------------------- tree shapes

@dataclass(frozen=True)
class TreeKind:
    kind: str  # "flow-out", "flow-in", "tree", "not-a-tree"
    root: str | None = None

    @property
    def is_tree(self) -> bool:
        return self.kind != "not-a-tree"


FLOW_OUT, FLOW_IN, GENERAL_TREE, NOT_A_TREE = "flow-out", "flow-in", "tree", "not-a-tree"


def is_tree(g: DiGraph, vertices: Iterable[str] | None = None) -> bool:
    vs = set(g.body() if vertices is None else vertices)
    es = [(a, b) for a, b in g.edges if a in vs and b in vs]
    if not vs or len(es) != len(vs) - 1:
        return False
    if len({frozenset(e) for e in es}) != len(es):
        return False
    adj: dict[str, list[str]] = {v: [] for v in vs}
    for a, b in es:
        adj[a].append(b)
        adj[b].append(a)
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vs)


def classify_tree(g: DiGraph) -> TreeKind:
    """Classify the body of ``g``.  A directed path reports as flow-out."""
    vs = g.body()
    if not is_tree(g, vs):
        return TreeKind(NOT_A_TREE)
    indeg = {v: 0 for v in vs}
    outdeg = {v: 0 for v in vs}
    for a, b in g.edges:
        outdeg[a] += 1
        indeg[b] += 1
    # in a tree, flow-out means exactly one vertex of indegree 0 and all others indegree 1
    sources = [v for v in vs if indeg[v] == 0]
    sinks = [v for v in vs if outdeg[v] == 0]
    if len(vs) == 1:
        (v,) = vs
        return TreeKind(FLOW_OUT, v)
    if len(sources) == 1 and all(indeg[v] == 1 for v in vs if v != sources[0]):
        return TreeKind(FLOW_OUT, sources[0])
    if len(sinks) == 1 and all(outdeg[v] == 1 for v in vs if v != sinks[0]):
        return TreeKind(FLOW_IN, sinks[0])
    return TreeKind(GENERAL_TREE)


def lollipops(g: DiGraph) -> set[str]:
    return {v for v in g.inner if (S, v) in g.edges or (v, T) in g.edges}


def count_non_lollipops(g: DiGraph) -> int:
    return len(g.inner) - len(lollipops(g))


# ---------------------------------------------------------------- fingerprints

def fingerprint(g: DiGraph) -> str:
    """Hash of the labeled graph; equal iff vertex and edge sets are equal."""
    h = hashlib.sha256()
    h.update(("V:" + ",".join(sorted(g.vertices)) + ";E:").encode())
    h.update(",".join(f"{a}>{b}" for a, b in sorted(g.edges)).encode())
    return h.hexdigest()[:32]


def brute_canonical_bytes(g: DiGraph, fixed: Iterable[str] = ()) -> bytes:
    """Lexicographically least adjacency encoding over all relabelings.

    Vertices in ``fixed`` keep their positions at the front.  Exponential;
    meant for graphs of at most about eight vertices.
    """
    fixed = sorted(set(fixed))
    free = sorted(g.vertices - set(fixed))
    n = len(fixed) + len(free)
    best = None
    for perm in itertools.permutations(free):
        pos = {v: i for i, v in enumerate([*fixed, *perm])}
        bits = bytearray(n * n)
        for a, b in g.edges:
            bits[pos[a] * n + pos[b]] = 1
        code = bytes(bits)
        if best is None or code < best:
            best = code
    return bytes([n]) + (best or b"")


def _rooted_code(root: str, adj: dict[str, list[tuple[str, str]]]) -> str:
    # iterative post-order so deep paths do not hit the recursion limit
    parent = {root: None}
    order = [root]
    for u in order:
        for w, _ in adj[u]:
            if w != parent[u]:
                parent[w] = u
                order.append(w)
    code: dict[str, str] = {}
    for u in reversed(order):
        parts = sorted(d + code[w] for w, d in adj[u] if w != parent[u])
        code[u] = "(" + "".join(parts) + ")"
    return code[root]


def tree_canonical_form(g: DiGraph, vertices: Iterable[str] | None = None) -> str:
    """Isomorphism-invariant code of a directed tree (names ignored)."""
    vs = set(g.body() if vertices is None else vertices)
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in vs}
    for a, b in g.edges:
        if a in vs and b in vs:
            adj[a].append((b, ">"))
            adj[b].append((a, "<"))
    return min(_rooted_code(c, adj) for c in _centers(adj))


def _centers(adj: dict[str, list]) -> list[str]:
    deg = {v: len(adj[v]) for v in adj}
    layer = [v for v in adj if deg[v] <= 1]
    remaining = len(adj)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for u in layer:
            for w, _ in adj[u]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


# ---------------------------------------------------------------- tree corpus

def _free_trees(n: int) -> list[list[tuple[int, int]]]:
    """Free trees on vertices 0..n-1 up to isomorphism, by leaf extension."""
    if n == 1:
        return [[]]
    level: dict[str, list[tuple[int, int]]] = {"": []}
    for size in range(2, n + 1):
        nxt: dict[str, list[tuple[int, int]]] = {}
        for edges in level.values():
            for v in range(size - 1):
                cand = edges + [(v, size - 1)]
                key = _undirected_code(size, cand)
                nxt.setdefault(key, cand)
        level = nxt
    return list(level.values())


def _undirected_code(n: int, edges: list[tuple[int, int]]) -> str:
    adj: dict[str, list[tuple[str, str]]] = {str(i): [] for i in range(n)}
    for a, b in edges:
        adj[str(a)].append((str(b), "-"))
        adj[str(b)].append((str(a), "-"))
    return min(_rooted_code(c, adj) for c in _centers(adj))


def tree_from_edges(n: int, edges: Iterable[tuple[int, int]], prefix: str = "v") -> DiGraph:
    return DiGraph((f"{prefix}{i}" for i in range(n)), ((f"{prefix}{a}", f"{prefix}{b}") for a, b in edges))


def enumerate_directed_trees(n_max: int, limit: int = DEFAULT_TREE_LIMIT, exact: bool = False) -> Iterator[DiGraph]:
    """Every directed tree with at most ``n_max`` vertices, once per isomorphism class.

    With ``exact=True`` only trees with exactly ``n_max`` vertices.  Vertices
    are named ``v0``, ``v1``, ...; ``s`` and ``t`` stay isolated.
    """
    if n_max > limit:
        raise GraphError(f"n_max={n_max} exceeds tree corpus limit {limit}")
    sizes = [n_max] if exact else range(1, n_max + 1)
    for n in sizes:
        seen: set[str] = set()
        for free in _free_trees(n):
            for flips in itertools.product((False, True), repeat=len(free)):
                oriented = [(b, a) if f else (a, b) for (a, b), f in zip(free, flips)]
                g = tree_from_edges(n, oriented)
                key = tree_canonical_form(g)
                if key not in seen:
                    seen.add(key)
                    yield g


def random_tree_edges(n: int, rng: random.Random) -> list[tuple[int, int]]:
    """Random recursive tree on 0..n-1 with uniformly random edge directions."""
    edges = []
    for i in range(1, n):
        p = rng.randrange(i)
        edges.append((p, i) if rng.random() < 0.5 else (i, p))
    return edges


def random_directed_tree(n: int, rng: random.Random, prefix: str = "v") -> DiGraph:
    return tree_from_edges(n, random_tree_edges(n, rng), prefix)


def random_flow_out_tree(n: int, rng: random.Random, prefix: str = "v") -> DiGraph:
    return tree_from_edges(n, [(rng.randrange(i), i) for i in range(1, n)], prefix)


def random_st_tree(n: int, ell: int, rng: random.Random, flow_out: bool = False) -> DiGraph:
    """Tree on n vertices containing an s-t path of ell edges.

    Extra vertices attach to a random earlier vertex with a random direction
    (always away from it when ``flow_out``).
    """
    if ell < 1 or n < ell + 1:
        raise GraphError("need n >= ell + 1 >= 2")
    seq = [S, *(f"p{i}" for i in range(1, ell)), T]
    names = list(seq)
    edges = list(zip(seq, seq[1:]))
    for i in range(n - ell - 1):
        v = f"x{i}"
        u = rng.choice(names)
        edges.append((u, v) if flow_out or rng.random() < 0.5 else (v, u))
        names.append(v)
    return DiGraph(names, edges)


__all__ = [
    "S", "T", "DiGraph", "GraphError", "ParseError", "TreeKind",
    "FLOW_OUT", "FLOW_IN", "GENERAL_TREE", "NOT_A_TREE",
    "parse_edge_list", "format_edge_list", "graph", "reachable", "has_st_path",
    "shortest_st_path", "simple_st_paths", "iter_sigma", "sigma", "is_tree",
    "classify_tree", "lollipops", "count_non_lollipops", "fingerprint",
    "brute_canonical_bytes", "tree_canonical_form", "enumerate_directed_trees",
    "tree_from_edges", "random_tree_edges", "random_directed_tree", "random_flow_out_tree", "random_st_tree",
]
