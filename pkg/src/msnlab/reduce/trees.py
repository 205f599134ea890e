"""Certificate generators for whole trees and the upper-bound graph sequence.

Every generator ends (for the lower-bound reductions) in a graph made of
vertex-disjoint s-t paths of one common length, recorded in the metadata.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..bounds import _bfs_dist, _max_below, compute_stats, flowout_c, lglg_len
from ..errors import PreconditionError
from ..graphs import FLOW_OUT, S, T, DiGraph, classify_tree, is_tree, shortest_st_path
from .certificate import Builder, ReductionCertificate
from .moves import ReplaceEdgeWithSinkT, ReplaceEdgeWithSourceS
from .paths import REDUCERS


def is_disjoint_st_paths(g: DiGraph) -> tuple[int, int] | None:
    """(count, length) when g is a union of internally disjoint s-t paths of one length."""
    succ: dict[str, list[str]] = {v: [] for v in g.vertices}
    indeg = {v: 0 for v in g.vertices}
    for a, b in g.edges:
        succ[a].append(b)
        indeg[b] += 1
    lengths = []
    seen: set[str] = set()
    for first in sorted(succ[S]):
        cur, n = first, 1
        while cur != T:
            if cur in seen or cur == S or indeg[cur] != 1 or len(succ[cur]) != 1:
                return None
            seen.add(cur)
            cur = succ[cur][0]
            n += 1
        lengths.append(n)
    if not lengths or len(set(lengths)) != 1:
        return None
    if seen != set(g.vertices) - {S, T} or indeg[S] or succ[T]:
        return None
    if sum(lengths) != len(g.edges):
        return None
    return len(lengths), lengths[0]


def _components(g: DiGraph, verts: set[str]) -> list[set[str]]:
    adj: dict[str, list[str]] = {v: [] for v in verts}
    for a, b in g.edges:
        if a in verts and b in verts:
            adj[a].append(b)
            adj[b].append(a)
    comps = []
    seen: set[str] = set()
    for v in sorted(verts):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def _floating(b: Builder, verts: set[str], method: str) -> tuple[list[list[str]], list[int], list[int]]:
    paths, sizes, lens = [], [], []
    for comp in _components(b.g, verts):
        path, _ = REDUCERS[method](b, comp)
        paths.append(path)
        sizes.append(len(comp))
        lens.append(len(path))
    return paths, sizes, lens


def chunk_into_paths(b: Builder, paths: list[list[str]], length: int) -> int:
    """Cut the concatenated floating paths into s-t paths with ``length`` edges.

    Each chunk gets s->first and last->t (replacing the edge to the next
    chunk when there is one); a leftover shorter than a chunk merges into s.
    Returns the number of new s-t paths.
    """
    inner = length - 1
    seq = [v for p in paths for v in p]
    if inner <= 0:
        b.merge_s(seq)
        b.clean()
        return 0
    full = len(seq) // inner
    for j in range(full):
        part = seq[j * inner:(j + 1) * inner]
        b.add(S, part[0])
        for x, y in zip(part, part[1:]):
            if (x, y) not in b.g.edges:
                b.add(x, y)
        x = part[-1]
        nxt = seq[(j + 1) * inner] if (j + 1) * inner < len(seq) else None
        if nxt is not None and (x, nxt) in b.g.edges:
            b.do(ReplaceEdgeWithSinkT(x, nxt))
        else:
            b.add(x, T)
    rest = seq[full * inner:]
    if rest:
        b.merge_s(rest)
        b.clean()
    return full


def _tree_with_path(g: DiGraph) -> list[str]:
    if not is_tree(g):
        raise PreconditionError("G is not a directed tree")
    path = shortest_st_path(g)
    if path is None:
        raise PreconditionError("G has no s-t path")
    return path


def thm51_lower_certificates(g: DiGraph, floating: str = "sqrt") -> list[ReductionCertificate]:
    """Three certificates: disjoint s-t paths, a flow-out tree and a flow-in tree."""
    path = _tree_with_path(g)
    st = compute_stats(g)
    ell = st.ell
    on = set(path)

    b = Builder(g)
    b.merge_s(st.H_s)
    b.merge_t(st.H_t)
    b.clean()
    rest = set(b.g.vertices) - on
    paths, sizes, lens = _floating(b, rest, floating)
    extra = chunk_into_paths(b, paths, ell)
    b.meta.update(part=1, ell=ell, dbar=st.dbar, a=sizes, reduced=lens, paths=1 + extra,
                  path_length=ell, total_vertices=len(b.g.vertices), floating=floating)
    part1 = b.finish()

    b = Builder(g)
    b.merge_t(set(g.vertices) - st.H_s - on)
    b.clean()
    b.meta.update(part=2, side="s", kind=classify_tree(b.g).kind)
    out_cert = b.finish()

    b = Builder(g)
    b.merge_s(set(g.vertices) - st.H_t - on)
    b.clean()
    b.meta.update(part=2, side="t", kind=classify_tree(b.g).kind)
    in_cert = b.finish()
    return [part1, out_cert, in_cert]


def flowout_lower_certificate(g: DiGraph, i: int, floating: str = "sqrt") -> ReductionCertificate:
    kind = classify_tree(g)
    if kind.kind != FLOW_OUT or kind.root != S:
        raise PreconditionError("G is not a flow-out tree rooted at s")
    depth = _bfs_dist(g, S)
    if T not in depth:
        raise PreconditionError("t is not in the tree")
    ell = depth[T]
    top = lglg_len(ell)
    if not 1 <= i <= top:
        raise PreconditionError(f"i={i} outside 1..{top}")
    path = shortest_st_path(g)
    on_edges = set(zip(path, path[1:]))
    b = Builder(g)
    if i == 1:
        for a, c in sorted(g.edges - on_edges):
            if a != S:
                b.do(ReplaceEdgeWithSourceS(a, c))
        b.meta.update(i=1, ell=ell, case="i=1", replaced=len(b.moves))
        return b.finish()

    k = 2 ** (2**i)
    L = (k + 1) // 2
    if ell < k:
        raise PreconditionError(f"path length {ell} is shorter than k={k}")
    body = set(g.body())
    below = _max_below(g, body, depth)
    s1 = {v for v in body if below[v] < k}
    b.merge_s(s1)
    b.clean()
    R = set(b.g.vertices)  # s, t and every vertex with a descendant at distance >= k
    c_i = len(R)
    assert c_i == flowout_c(g).c[i - 1]
    dbar_k = sum(1 for v in R if 1 <= depth[v] <= L)
    kids: dict[str, list[str]] = {v: [] for v in R}
    for a, c in b.g.edges:
        kids[a].append(c)
    for v in kids:
        kids[v].sort()
    on = set(path)
    D = sorted(v for v in R if depth[v] == L)

    def desc(v: str) -> set[str]:
        out = {v}
        q = deque([v])
        while q:
            u = q.popleft()
            for w in kids[u]:
                out.add(w)
                q.append(w)
        return out

    b.meta.update(i=i, k=k, L=L, ell=ell, c_i=c_i, dbar_k=dbar_k, S_1=len(s1 - {S}), D=D, floating=floating)
    if dbar_k * dbar_k >= c_i:
        b.meta["case"] = 1
        chains: set[str] = set()
        below_w: set[str] = set()
        for v in D:
            cur, chain = v, [v]
            while depth[cur] < k - 2:
                nxt = [w for w in kids[cur] if w in on] or kids[cur]
                cur = nxt[0]
                chain.append(cur)
            chains.update(chain)
            below_w |= desc(cur) - {cur}
        b.merge_t(below_w)
        b.merge_s(R - chains - below_w - {S, T})
        b.clean()
        b.meta.update(paths=len(D), path_length=L)
        return b.finish()

    b.meta["case"] = 2
    sizes = {v: len(desc(v)) for v in D}
    biggest = max(sizes.values())
    v_star = min(v for v in D if sizes[v] == biggest)  # ties go to the smallest name
    H = desc(v_star)
    b.meta.update(v_star=v_star, H_size=len(H))
    if T in H:
        b.meta["subcase"] = 1
        tail = {v for v in path if depth[v] >= L}
        anc = {v for v in path if depth[v] < L}
        b.merge_t(tail)
        b.merge_s(R - H - anc)
        b.clean()
        loose = H - tail
        base = 1
    else:
        b.meta["subcase"] = 2
        w = path[ell - L]
        tail = {v for v in path if depth[v] > ell - L}
        anc = set()
        cur = v_star
        while cur != S:
            cur = next(a for a, c in g.edges if c == cur)
            anc.add(cur)
        b.merge_t({v_star})
        b.merge_s(R - H - anc - tail)
        b.clean()
        b.meta["w"] = w
        loose = H - {v_star}
        base = 2
    paths, fsizes, lens = _floating(b, loose, floating)
    extra = chunk_into_paths(b, paths, L)
    b.meta.update(a=fsizes, reduced=lens, paths=base + extra, path_length=L)
    return b.finish()


# ---------------------------------------------------------------- upper bound side

@dataclass(frozen=True)
class GraphSequence:
    graphs: tuple[DiGraph, ...]
    P_s: tuple[frozenset[str], ...]  # P_s[j] belongs to graphs[j + 1]
    P_t: tuple[frozenset[str], ...]
    thresholds: tuple[int, ...]
    cbar: int
    stripped: frozenset[str]
    unconverted: tuple[int, ...]
    path: tuple[str, ...] = field(default=())

    @property
    def final(self) -> DiGraph:
        return self.graphs[-1]

    def to_json(self) -> dict:
        return {
            "graphs": [g.to_json() for g in self.graphs],
            "P_s": [sorted(p) for p in self.P_s],
            "P_t": [sorted(p) for p in self.P_t],
            "thresholds": list(self.thresholds),
            "cbar": self.cbar,
            "unconverted": list(self.unconverted),
        }


def final_shape_ok(g: DiGraph, path) -> bool:
    """Every vertex is on the path, isolated, or a degree-one lollipop."""
    on = set(path)
    deg = {v: 0 for v in g.vertices}
    for a, b in g.edges:
        deg[a] += 1
        deg[b] += 1
    for v in g.vertices - on:
        if deg[v] == 0:
            continue
        if deg[v] != 1 or not ((S, v) in g.edges or (v, T) in g.edges):
            return False
    path_edges = set(zip(path, path[1:]))
    return all(e in path_edges or S in e or T in e for e in g.edges)


def upper_graph_sequence(g: DiGraph) -> GraphSequence:
    path = _tree_with_path(g)
    st = compute_stats(g)
    ell = st.ell
    dist_s = _bfs_dist(g, S)
    dist_t = _bfs_dist(g, T, reverse=True)
    far = {v for v in g.vertices if dist_s.get(v, -1) > ell or dist_t.get(v, -1) > ell}
    loose = set(g.vertices) - set(path) - st.H_s - st.H_t
    cut = far | loose
    g1 = DiGraph(g.vertices, (e for e in g.edges if e[0] not in cut and e[1] not in cut))
    hs = set(st.H_s) - far
    ht = set(st.H_t) - far
    below = _max_below(g1, hs, dist_s)
    above = _max_below(g1, ht, dist_t, reverse=True)
    graphs = [g1]
    ps_list, pt_list, thr_list, left = [], [], [], []
    cur = g1
    for i in range(2, max(lglg_len(ell), 1) + 2):
        thr = 2 ** (2 ** (i - 1))
        ps = frozenset(v for v in hs if below[v] <= thr)
        pt = frozenset(v for v in ht if above[v] <= thr)
        moved = ps | pt
        edges = {e for e in cur.edges if e[0] not in moved and e[1] not in moved}
        edges |= {(S, v) for v in ps} | {(v, T) for v in pt}
        cur = DiGraph(cur.vertices, edges)
        graphs.append(cur)
        ps_list.append(ps)
        pt_list.append(pt)
        thr_list.append(thr)
        left.append(len(hs - ps) + len(ht - pt))
    return GraphSequence(tuple(graphs), tuple(ps_list), tuple(pt_list), tuple(thr_list), len(far),
                         frozenset(far), tuple(left), tuple(path))


__all__ = [
    "is_disjoint_st_paths", "chunk_into_paths", "thm51_lower_certificates", "flowout_lower_certificate",
    "GraphSequence", "final_shape_ok", "upper_graph_sequence",
]
