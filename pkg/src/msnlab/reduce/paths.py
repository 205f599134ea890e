"""Turning a floating tree into a single directed path by legal moves.

Two strategies are offered.  ``sqrt`` guarantees at least ceil(sqrt(n_H))
path vertices using a depth labeling; ``dplen`` reaches p(H) vertices
using a maximum disconnected-path family.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from ..dplen import general_p_dp
from ..graphs import S, T, DiGraph, GraphError, is_tree, reachable
from .certificate import Builder, ReductionCertificate
from .moves import AddEdge, MergeIntoS, RemoveUselessEdges


class NotATreeError(GraphError):
    pass


@dataclass(frozen=True)
class DepthLabeling:
    depth: dict[str, int]
    d_min: int
    d_max: int

    @property
    def span(self) -> int:
        return self.d_max - self.d_min + 1


def _adjacency(g: DiGraph, verts: set[str]) -> dict[str, list[tuple[str, int]]]:
    """Undirected adjacency inside ``verts``; the int is +1 along the edge, -1 against it."""
    adj: dict[str, list[tuple[str, int]]] = {v: [] for v in verts}
    for a, b in g.edges:
        if a in verts and b in verts:
            adj[a].append((b, 1))
            adj[b].append((a, -1))
    for v in adj:
        adj[v].sort()
    return adj


def depth_labeling(g: DiGraph, verts: Iterable[str]) -> DepthLabeling:
    """Depths with d(b) - d(a) = 1 on every edge a->b; the smallest name gets depth 0."""
    verts = set(verts)
    adj = _adjacency(g, verts)
    root = min(verts)
    depth = {root: 0}
    q = deque([root])
    while q:
        u = q.popleft()
        for w, sign in adj[u]:
            if w not in depth:
                depth[w] = depth[u] + sign
                q.append(w)
    return DepthLabeling(depth, min(depth.values()), max(depth.values()))


def _tree_path(adj, a: str, b: str) -> list[str]:
    prev = {a: None}
    q = deque([a])
    while q:
        u = q.popleft()
        for w, _ in adj[u]:
            if w not in prev:
                prev[w] = u
                q.append(w)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def _split_off_path(b: Builder, adj, path: list[str], verts: set[str]) -> None:
    """Merge every off-path branch into s or t so that its attaching edge becomes useless."""
    on = set(path)
    to_s: set[str] = set()
    to_t: set[str] = set()
    for p in path:
        for c, sign in adj[p]:
            if c in on:
                continue
            comp = {c}
            stack = [c]
            while stack:
                u = stack.pop()
                for w, _ in adj[u]:
                    if w not in on and w not in comp:
                        comp.add(w)
                        stack.append(w)
            # sign +1 means p->c, which becomes p->s once c is merged into s
            (to_s if sign > 0 else to_t).update(comp)
    b.merge_s(to_s)
    b.merge_t(to_t)
    b.clean()


def reduce_sqrt(b: Builder, verts: Iterable[str]) -> tuple[list[str], dict]:
    """Reduce the floating tree on ``verts`` (inside b.g) to a path of >= ceil(sqrt(n)) vertices."""
    verts = set(verts)
    n = len(verts)
    need = math.isqrt(n - 1) + 1 if n > 1 else 1  # ceil(sqrt(n))
    lab = depth_labeling(b.g, verts)
    info: dict = {"n_H": n, "target": need, "d_min": lab.d_min, "d_max": lab.d_max}
    if lab.span < need:
        info["case"] = 1
        levels: dict[int, list[str]] = {}
        for v, d in lab.depth.items():
            levels.setdefault(d, []).append(v)
        dbar = max(sorted(levels), key=lambda d: len(levels[d]))  # first level of maximum size
        info["dbar"] = dbar
        b.merge_t(v for v, d in lab.depth.items() if d < dbar)
        b.merge_s(v for v, d in lab.depth.items() if d > dbar)
        b.clean()
        path = sorted(levels[dbar])
        for x, y in zip(path, path[1:]):
            b.add(x, y)
        info["path_vertices"] = len(path)
        return path, info
    info["case"] = 2
    adj = _adjacency(b.g, verts)
    w_min = min(v for v, d in lab.depth.items() if d == lab.d_min)
    w_max = min(v for v, d in lab.depth.items() if d == lab.d_max)
    path = _tree_path(adj, w_min, w_max)
    _split_off_path(b, adj, path, verts)
    path, steps = straighten(b, path)
    info["straighten"] = steps
    info["path_vertices"] = len(path)
    return path, info


def _counts(g: DiGraph, path: list[str]) -> tuple[int, int]:
    plus = sum(1 for x, y in zip(path, path[1:]) if (x, y) in g.edges)
    return plus, len(path) - 1 - plus


def straighten(b: Builder, path: list[str]) -> tuple[list[str], list[tuple[int, int]]]:
    """Remove backward edges along ``path`` one at a time.

    At the first pattern w1->w2<-w3, w2 is merged into s, both edges become
    useless and are dropped, and w1->w3 is added.  Returns the directed path
    and the (c+, c-) pair seen before each step and after the last.
    """
    path = list(path)
    trace = [_counts(b.g, path)]
    while True:
        hit = None
        for i in range(1, len(path) - 1):
            w1, w2, w3 = path[i - 1], path[i], path[i + 1]
            if (w1, w2) in b.g.edges and (w3, w2) in b.g.edges:
                hit = i
                break
        if hit is None:
            break
        w1, w2, w3 = path[hit - 1], path[hit], path[hit + 1]
        b.do(MergeIntoS({w2}))
        b.do(RemoveUselessEdges({(w1, S), (w3, S)}))
        b.do(AddEdge(w1, w3))
        del path[hit]
        trace.append(_counts(b.g, path))
    return path, trace


def reduce_dplen(b: Builder, verts: Iterable[str]) -> tuple[list[str], dict]:
    """Reduce the floating tree on ``verts`` to a path with p(H) vertices."""
    verts = set(verts)
    h = DiGraph(verts, ((x, y) for x, y in b.g.edges if x in verts and y in verts))
    p, tabs = general_p_dp(h)
    fam = tabs.witness
    on = fam.vertices
    inbound = {v for v in verts - on if reachable(h, [v]) & on}
    outbound = {v for v in verts - on if reachable(h, on) & {v}}
    assert not inbound & outbound and inbound | outbound == verts - on
    b.merge_t(inbound)
    b.merge_s(outbound)
    b.clean()
    paths = sorted(fam.paths)
    for x, y in zip(paths, paths[1:]):
        b.add(x[-1], y[0])
    path = [v for q in paths for v in q]
    return path, {"n_H": len(verts), "p": p, "family": [list(q) for q in paths], "path_vertices": len(path)}


REDUCERS = {"sqrt": reduce_sqrt, "dplen": reduce_dplen}


def _check_floating(g: DiGraph, h: DiGraph) -> set[str]:
    hv = set(h.body())
    if not hv:
        raise NotATreeError("empty tree")
    if S in hv or T in hv:
        raise NotATreeError("the tree must not contain s or t")
    if not is_tree(h, hv):
        raise NotATreeError("H is not a directed tree")
    if hv & (g.vertices | set(g.body())):
        raise GraphError(f"H shares vertices {sorted(hv & g.vertices)} with G")
    return hv


def _path_certificate(g: DiGraph, h: DiGraph, method: str) -> ReductionCertificate:
    hv = _check_floating(g, h)
    b = Builder(g.union(h))
    path, info = REDUCERS[method](b, hv)
    b.meta.update(info, method=method, path=path)
    return b.finish()


def sqrt_path_certificate(g: DiGraph, h: DiGraph) -> ReductionCertificate:
    return _path_certificate(g, h, "sqrt")


def dplen_path_certificate(g: DiGraph, h: DiGraph) -> ReductionCertificate:
    return _path_certificate(g, h, "dplen")


def end_path(cert: ReductionCertificate) -> list[str]:
    return list(cert.metadata["path"])


__all__ = [
    "NotATreeError", "DepthLabeling", "depth_labeling", "reduce_sqrt", "reduce_dplen", "straighten",
    "REDUCERS", "sqrt_path_certificate", "dplen_path_certificate", "end_path",
]
