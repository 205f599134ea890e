"""Monotone switching networks: model, acceptance, soundness, completeness.

A network is an undirected multigraph on network vertices including ``s'``
and ``t'``; each edge carries a directed-edge label ``a->b`` over the input
universe or is unlabeled (always traversable).  The network accepts an input
graph when ``s'`` reaches ``t'`` using edges whose labels are edges of the
input.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import BudgetExceeded
from .graphs import S, T, DiGraph, ParseError, has_st_path, simple_st_paths

SP = "s'"
TP = "t'"

_NODE = r"[A-Za-z0-9_]+'?"
_NET_EDGE = re.compile(rf"^({_NODE})\s*--\s*({_NODE})\s*:\s*(\*|[A-Za-z0-9_]+\s*->\s*[A-Za-z0-9_]+)$")
_NET_NODE = re.compile(rf"^node\s+({_NODE})$")


@dataclass(frozen=True, order=True)
class Label:
    """Directed-edge label ``u->v``."""

    u: str
    v: str

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"label {self.u}->{self.v} is a self-loop")

    def __str__(self) -> str:
        return f"{self.u}->{self.v}"

    @property
    def pair(self) -> tuple[str, str]:
        return (self.u, self.v)


class _Unlabeled:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNLABELED"

    def __str__(self) -> str:
        return "*"

    def __lt__(self, other) -> bool:  # sorts before every directed label
        return not isinstance(other, _Unlabeled)

    def __reduce__(self):
        return (_Unlabeled, ())


UNLABELED = _Unlabeled()
EdgeLabel = Union[Label, _Unlabeled]


def label(text: str) -> EdgeLabel:
    text = text.strip()
    if text == "*":
        return UNLABELED
    u, v = (x.strip() for x in text.split("->"))
    return Label(u, v)


def _label_key(lab: EdgeLabel) -> tuple:
    return ("",) if lab is UNLABELED else (lab.u, lab.v)


@dataclass(frozen=True)
class SwitchingNetwork:
    vertices: frozenset[str]
    edges: tuple[tuple[str, str, EdgeLabel], ...]  # multiset, kept sorted

    def __init__(self, vertices: Iterable[str] = (), edges: Iterable[tuple[str, str, EdgeLabel]] = ()):
        vs = set(vertices) | {SP, TP}
        norm = []
        for a, b, lab in edges:
            if isinstance(lab, str):
                lab = label(lab)
            if a > b:
                a, b = b, a
            vs.add(a)
            vs.add(b)
            norm.append((a, b, lab))
        norm.sort(key=lambda e: (e[0], e[1], _label_key(e[2])))
        object.__setattr__(self, "vertices", frozenset(vs))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def size(self) -> int:
        return len(self.vertices)

    def labels(self) -> set[Label]:
        return {lab for _, _, lab in self.edges if lab is not UNLABELED}

    def label_vertices(self) -> set[str]:
        return {x for lab in self.labels() for x in lab.pair}

    def with_edges(self, extra: Iterable[tuple[str, str, EdgeLabel]]) -> "SwitchingNetwork":
        return SwitchingNetwork(self.vertices, [*self.edges, *extra])

    def to_text(self) -> str:
        return format_network(self)

    def to_json(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "edges": [[a, b, None if lab is UNLABELED else str(lab)] for a, b, lab in self.edges],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SwitchingNetwork":
        return cls(data.get("vertices", ()), ((a, b, UNLABELED if lab is None else label(lab)) for a, b, lab in data["edges"]))


def parse_network(text: str) -> SwitchingNetwork:
    """Parse ``u -- v : a->b`` / ``u -- v : *`` edge lines and ``node x`` declarations."""
    vertices: set[str] = set()
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _NET_EDGE.match(line)
        if m:
            try:
                edges.append((m.group(1), m.group(2), label(m.group(3))))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            continue
        m = _NET_NODE.match(line)
        if m:
            vertices.add(m.group(1))
            continue
        raise ParseError(f"malformed network line {raw!r}", lineno)
    return SwitchingNetwork(vertices, edges)


def format_network(net: SwitchingNetwork) -> str:
    lines = [f"{a} -- {b} : {lab}" for a, b, lab in net.edges]
    touched = {x for a, b, _ in net.edges for x in (a, b)}
    lines += [f"node {v}" for v in sorted(net.vertices - touched - {SP, TP})]
    return "\n".join(lines) + ("\n" if lines else "")


def network(*specs: str, nodes: Iterable[str] = ()) -> SwitchingNetwork:
    """Shorthand: ``network("s' -- x : s->a", "x -- t' : a->t")``."""
    return parse_network("\n".join([*specs, *(f"node {v}" for v in nodes)]))


# ---------------------------------------------------------------- acceptance

class _DSU:
    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _connected_under(net: SwitchingNetwork, allowed) -> bool:
    dsu = _DSU(net.vertices)
    for a, b, lab in net.edges:
        if lab is UNLABELED or allowed(lab):
            dsu.union(a, b)
    return dsu.find(SP) == dsu.find(TP)


def accepts(net: SwitchingNetwork, g: DiGraph) -> bool:
    edges = g.edges
    return _connected_under(net, lambda lab: lab.pair in edges)


# ---------------------------------------------------------------- soundness

@dataclass(frozen=True)
class SoundnessReport:
    verdict: bool
    witness_walk: tuple[str, ...] | None = None
    witness_graph: DiGraph | None = None

    def __bool__(self) -> bool:
        return self.verdict

    def to_json(self) -> dict:
        out: dict = {"sound": self.verdict}
        if not self.verdict:
            out["walk"] = list(self.witness_walk or ())
            out["witness"] = self.witness_graph.to_json() if self.witness_graph else None
        return out


DEFAULT_SOUND_BUDGET = 2_000_000


def _universe(net: SwitchingNetwork, universe: Iterable[str] | None) -> set[str]:
    if universe is None:
        return net.label_vertices() | {S, T}
    vs = set(universe) | {S, T}
    missing = net.label_vertices() - vs
    if missing:
        raise ValueError(f"labels mention vertices outside the universe: {sorted(missing)}")
    return vs


def is_sound(
    net: SwitchingNetwork,
    universe: Iterable[str] | None = None,
    budget: int = DEFAULT_SOUND_BUDGET,
    method: str = "walk",
) -> SoundnessReport:
    """Decide whether every input graph the network accepts has an s-t path.

    ``method="walk"`` searches s'-to-t' walks over states (network vertex,
    accumulated label set); a branch whose labels already contain an s-t path
    is cut, since every extension only accepts graphs containing that path.
    ``method="cuts"`` checks, for every vertex set R with s in R and t not in
    R, that the labels not leaving R do not connect s' to t'.
    """
    if method == "cuts":
        return _sound_by_cuts(net, _universe(net, universe), budget)
    if method != "walk":
        raise ValueError(f"unknown soundness method {method!r}")
    vs = _universe(net, universe)
    alphabet = sorted(net.labels())
    bit = {lab: 1 << i for i, lab in enumerate(alphabet)}
    adj: dict[str, list[tuple[str, int]]] = {v: [] for v in net.vertices}
    for a, b, lab in net.edges:
        m = 0 if lab is UNLABELED else bit[lab]
        adj[a].append((b, m))
        adj[b].append((a, m))

    path_cache: dict[int, bool] = {}

    def has_path(mask: int) -> bool:
        hit = path_cache.get(mask)
        if hit is None:
            g = DiGraph(vs, (alphabet[i].pair for i in range(len(alphabet)) if mask >> i & 1))
            hit = path_cache[mask] = has_st_path(g)
        return hit

    start = (SP, 0)
    prev: dict[tuple[str, int], tuple[str, int] | None] = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        node, mask = state
        if node == TP:
            walk = [node]
            cur = prev[state]
            while cur is not None:
                walk.append(cur[0])
                cur = prev[cur]
            g = DiGraph(vs, (alphabet[i].pair for i in range(len(alphabet)) if mask >> i & 1))
            return SoundnessReport(False, tuple(reversed(walk)), g)
        for w, m in adj[node]:
            nmask = mask | m
            nxt = (w, nmask)
            if nxt in prev:
                continue
            if nmask != mask and has_path(nmask):
                continue
            prev[nxt] = state
            if len(prev) > budget:
                raise BudgetExceeded(f"soundness search exceeded {budget} states")
            queue.append(nxt)
    return SoundnessReport(True)


def st_cuts(universe: Iterable[str]) -> list[frozenset[str]]:
    """Every vertex set containing s and not t, in a fixed order."""
    inner = sorted(set(universe) - {S, T})
    out = []
    for k in range(len(inner) + 1):
        for extra in itertools.combinations(inner, k):
            out.append(frozenset((S, *extra)))
    return out


def _sound_by_cuts(net: SwitchingNetwork, vs: set[str], budget: int) -> SoundnessReport:
    cuts = st_cuts(vs)
    if len(cuts) > budget:
        raise BudgetExceeded(f"{len(cuts)} cuts exceed budget {budget}")
    for cut in cuts:
        allowed = lambda lab, cut=cut: not (lab.u in cut and lab.v not in cut)  # noqa: E731
        if _connected_under(net, allowed):
            # the largest graph with no edge leaving the cut has no s-t path
            g = DiGraph(vs, ((a, b) for a in vs for b in vs if a != b and not (a in cut and b not in cut)))
            walk = _find_walk(net, lambda lab: lab.pair in g.edges)
            return SoundnessReport(False, walk, _walk_labels_graph(net, walk, vs))
    return SoundnessReport(True)


def _find_walk(net: SwitchingNetwork, allowed) -> tuple[str, ...]:
    adj: dict[str, list[str]] = {v: [] for v in net.vertices}
    for a, b, lab in net.edges:
        if lab is UNLABELED or allowed(lab):
            adj[a].append(b)
            adj[b].append(a)
    prev = {SP: None}
    queue = deque([SP])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in prev:
                prev[w] = u
                queue.append(w)
    walk = [TP]
    while prev[walk[-1]] is not None:
        walk.append(prev[walk[-1]])
    return tuple(reversed(walk))


def _walk_labels_graph(net: SwitchingNetwork, walk: tuple[str, ...], vs: set[str]) -> DiGraph:
    """Smallest graph accepted along ``walk`` (one usable label per step)."""
    pairs = set()
    for a, b in zip(walk, walk[1:]):
        labs = [lab for x, y, lab in net.edges if {x, y} == {a, b}]
        if any(lab is UNLABELED for lab in labs):
            continue
        pairs.add(min(labs).pair)
    return DiGraph(vs, pairs)


# ---------------------------------------------------------------- completeness

DEFAULT_COMPLETE_BUDGET = 10**6


def is_complete(net: SwitchingNetwork, universe: Iterable[str], budget: int = DEFAULT_COMPLETE_BUDGET) -> bool:
    """True iff every single simple s-t path over the universe is accepted.

    By acceptance monotonicity this covers every graph with an s-t path.
    """
    vs = _universe(net, universe)
    k = len(vs) - 2
    count = sum(_falling(k, j) for j in range(k + 1))
    if count > budget:
        raise BudgetExceeded(f"{count} simple s-t paths exceed budget {budget}")
    return all(accepts(net, p) for p in simple_st_paths(vs))


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


# ---------------------------------------------------------------- transforms

@dataclass(frozen=True)
class ParallelSTo:
    """Add ``s->v2`` parallel to edges labeled ``v1->v2`` (all labels when ``only`` is None)."""

    only: tuple[str, str] | None = None


@dataclass(frozen=True)
class ParallelToT:
    """Add ``v1->t`` parallel to edges labeled ``v1->v2``."""

    only: tuple[str, str] | None = None


@dataclass(frozen=True)
class UnlabelIntoS:
    """Edges labeled ``v->s`` become unlabeled."""


@dataclass(frozen=True)
class UnlabelFromT:
    """Edges labeled ``t->v`` become unlabeled."""


@dataclass(frozen=True)
class RelabelMerge:
    """Rewrite label endpoints in ``S`` to ``s`` and in ``T`` to ``t``.

    A label whose endpoints collapse together stands for an edge inside a
    merged set; it becomes unlabeled.
    """

    S: frozenset[str]
    T: frozenset[str]

    def __init__(self, S_: Iterable[str], T_: Iterable[str]):
        s_set, t_set = frozenset(S_) | {S}, frozenset(T_) | {T}
        if T in s_set or S in t_set or s_set & t_set:
            raise ValueError("merge sets must be disjoint with s only in S and t only in T")
        object.__setattr__(self, "S", s_set)
        object.__setattr__(self, "T", t_set)


Transform = Union[ParallelSTo, ParallelToT, UnlabelIntoS, UnlabelFromT, RelabelMerge]


def apply_network_transform(net: SwitchingNetwork, transform: Transform) -> SwitchingNetwork:
    if isinstance(transform, ParallelSTo):
        extra = []
        for a, b, lab in net.edges:
            if lab is UNLABELED or (transform.only and lab.pair != transform.only):
                continue
            if lab.u != S and lab.v != S:
                extra.append((a, b, Label(S, lab.v)))
        return net.with_edges(extra)
    if isinstance(transform, ParallelToT):
        extra = []
        for a, b, lab in net.edges:
            if lab is UNLABELED or (transform.only and lab.pair != transform.only):
                continue
            if lab.u != T and lab.v != T:
                extra.append((a, b, Label(lab.u, T)))
        return net.with_edges(extra)
    if isinstance(transform, UnlabelIntoS):
        return SwitchingNetwork(
            net.vertices, ((a, b, UNLABELED if lab is not UNLABELED and lab.v == S else lab) for a, b, lab in net.edges)
        )
    if isinstance(transform, UnlabelFromT):
        return SwitchingNetwork(
            net.vertices, ((a, b, UNLABELED if lab is not UNLABELED and lab.u == T else lab) for a, b, lab in net.edges)
        )
    if isinstance(transform, RelabelMerge):
        def img(x: str) -> str:
            return S if x in transform.S else T if x in transform.T else x

        edges = []
        for a, b, lab in net.edges:
            if lab is not UNLABELED:
                u, v = img(lab.u), img(lab.v)
                lab = UNLABELED if u == v else Label(u, v)
            edges.append((a, b, lab))
        return SwitchingNetwork(net.vertices, edges)
    raise TypeError(f"unknown transform {transform!r}")


def merged_universe(universe: Iterable[str], transform: RelabelMerge) -> set[str]:
    return (set(universe) - transform.S - transform.T) | {S, T}


def accepted_graphs(net: SwitchingNetwork, universe: Iterable[str]) -> Iterator[DiGraph]:
    """Every input graph over the universe that the network accepts (exponential)."""
    vs = sorted(set(universe) | {S, T})
    pairs = [(a, b) for a in vs for b in vs if a != b]
    for mask in range(1 << len(pairs)):
        g = DiGraph(vs, (pairs[i] for i in range(len(pairs)) if mask >> i & 1))
        if accepts(net, g):
            yield g


__all__ = [
    "SP", "TP", "Label", "UNLABELED", "EdgeLabel", "label", "SwitchingNetwork",
    "parse_network", "format_network", "network", "accepts", "SoundnessReport",
    "is_sound", "st_cuts", "is_complete", "ParallelSTo", "ParallelToT",
    "UnlabelIntoS", "UnlabelFromT", "RelabelMerge", "apply_network_transform",
    "merged_universe", "accepted_graphs",
]
