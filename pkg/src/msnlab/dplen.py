"""Disconnected-path length of directed trees.

A disconnected-path family of a tree H is a set of vertex-disjoint directed
paths (single vertices allowed) such that no directed path of H leads from a
vertex of one family path to a vertex of another.  p(H) is the largest total
vertex count of such a family.

Trees are given as ``DiGraph`` values; ``s``/``t`` are ignored when isolated
(see :meth:`DiGraph.body`).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BudgetExceeded
from .graphs import FLOW_OUT, DiGraph, GraphError, classify_tree, reachable

DEFAULT_BRUTE_LIMIT = 12


class NotATree(GraphError):
    pass


# ---------------------------------------------------------------- tree index

@dataclass
class TreeIndex:
    """Integer view of a directed tree: ``out[i]``/``inn[i]`` neighbor lists."""

    names: list[str]
    out: list[list[int]]
    inn: list[list[int]]

    @property
    def n(self) -> int:
        return len(self.names)

    @classmethod
    def from_graph(cls, h: DiGraph, check: bool = True) -> "TreeIndex":
        names = sorted(h.body())
        pos = {v: i for i, v in enumerate(names)}
        out: list[list[int]] = [[] for _ in names]
        inn: list[list[int]] = [[] for _ in names]
        for a, b in h.edges:
            out[pos[a]].append(pos[b])
            inn[pos[b]].append(pos[a])
        for lst in out:
            lst.sort()
        for lst in inn:
            lst.sort()
        idx = cls(names, out, inn)
        if check:
            idx.check_tree()
        return idx

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], check: bool = False) -> "TreeIndex":
        out: list[list[int]] = [[] for _ in range(n)]
        inn: list[list[int]] = [[] for _ in range(n)]
        for a, b in edges:
            out[a].append(b)
            inn[b].append(a)
        idx = cls([f"v{i}" for i in range(n)], out, inn)
        if check:
            idx.check_tree()
        return idx

    def check_tree(self) -> None:
        n = self.n
        if n == 0:
            raise NotATree("empty graph")
        m = sum(len(x) for x in self.out)
        if m != n - 1:
            raise NotATree(f"{n} vertices but {m} edges")
        seen = [False] * n
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for w in self.out[u] + self.inn[u]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
        if count != n:
            raise NotATree("underlying graph is disconnected")

    def reach_masks(self) -> list[int]:
        """Bitmask of vertices reachable from each vertex (itself included)."""
        n = self.n
        order = _topological(self)
        reach = [0] * n
        for u in reversed(order):
            r = 1 << u
            for w in self.out[u]:
                r |= reach[w]
            reach[u] = r
        return reach


def _topological(idx: TreeIndex) -> list[int]:
    indeg = [len(x) for x in idx.inn]
    queue = deque(i for i in range(idx.n) if indeg[i] == 0)
    order = []
    while queue:
        u = queue.popleft()
        order.append(u)
        for w in idx.out[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return order


# ---------------------------------------------------------------- families

@dataclass(frozen=True)
class PathFamily:
    paths: tuple[tuple[str, ...], ...]

    @property
    def size(self) -> int:
        return sum(len(p) for p in self.paths)

    @property
    def vertices(self) -> set[str]:
        return {v for p in self.paths for v in p}

    def to_json(self) -> dict:
        return {"size": self.size, "paths": [list(p) for p in self.paths]}


def _family_from_vertices(h: DiGraph, chosen: Iterable[str]) -> PathFamily:
    """Split a vertex set into the directed paths it induces."""
    chosen = set(chosen)
    nxt: dict[str, str] = {}
    has_pred: set[str] = set()
    for a, b in h.edges:
        if a in chosen and b in chosen:
            nxt[a] = b
            has_pred.add(b)
    paths = []
    for v in sorted(chosen - has_pred):
        p = [v]
        while p[-1] in nxt:
            p.append(nxt[p[-1]])
        paths.append(tuple(p))
    return PathFamily(tuple(paths))


def is_family(h: DiGraph, fam: PathFamily | Sequence[Sequence[str]]) -> bool:
    paths = fam.paths if isinstance(fam, PathFamily) else tuple(tuple(p) for p in fam)
    body = h.body()
    seen: set[str] = set()
    for p in paths:
        if not p:
            return False
        for v in p:
            if v not in body or v in seen:
                return False
            seen.add(v)
        for a, b in zip(p, p[1:]):
            if (a, b) not in h.edges:
                return False
    owner = {v: i for i, p in enumerate(paths) for v in p}
    for i, p in enumerate(paths):
        for w in reachable(h, p):
            j = owner.get(w)
            if j is not None and j != i:
                return False
    return True


# ---------------------------------------------------------------- brute force

def brute_force_p(h: DiGraph, limit: int = DEFAULT_BRUTE_LIMIT) -> tuple[int, PathFamily]:
    """Exact p(H) by checking every vertex subset.

    A family is determined by its vertex set: its paths are the components of
    the induced subgraph, each of which must be a directed path, and no
    component may reach another.
    """
    idx = TreeIndex.from_graph(h)
    n = idx.n
    if n > limit:
        raise BudgetExceeded(f"brute-force p(H) limited to {limit} vertices, got {n}")
    reach = idx.reach_masks()
    nbr = [0] * n
    outm = [0] * n
    inm = [0] * n
    for u in range(n):
        for w in idx.out[u]:
            nbr[u] |= 1 << w
            nbr[w] |= 1 << u
            outm[u] |= 1 << w
            inm[w] |= 1 << u
    best, best_mask = 0, 0
    for mask in range(1, 1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        rest = mask
        ok = True
        while rest and ok:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                v = b.bit_length() - 1
                new = nbr[v] & mask & ~comp
                comp |= new
                frontier |= new
            rest &= ~comp
            creach = 0
            m = comp
            while m:
                b = m & -m
                m ^= b
                v = b.bit_length() - 1
                if bin(outm[v] & comp).count("1") > 1 or bin(inm[v] & comp).count("1") > 1:
                    ok = False
                    break
                creach |= reach[v]
            if ok and creach & mask & ~comp:
                ok = False
        if ok:
            # incoming reach is covered by the outgoing check of the other component
            best, best_mask = size, mask
    chosen = [idx.names[i] for i in range(n) if best_mask >> i & 1]
    return best, _family_from_vertices(h, chosen)


# ---------------------------------------------------------------- flow-out recursion

@dataclass
class BTable:
    root: str
    b: dict[str, int]
    d: dict[str, int]
    witness: PathFamily

    @property
    def value(self) -> int:
        return self.b[self.root]


def flowout_b(h: DiGraph) -> BTable:
    """b(v) = max(sum of children's b, d(v)); leaves have b = d = 1.

    ``d(v)`` counts the vertices on a longest path starting at ``v``.  The
    witness is built greedily in topological order: an unreached vertex whose
    b-value is not the children's sum contributes its longest path.
    """
    kind = classify_tree(h)
    if kind.kind != FLOW_OUT:
        raise NotATree(f"not a flow-out tree ({kind.kind})")
    idx = TreeIndex.from_graph(h)
    order = _topological(idx)
    n = idx.n
    b = [0] * n
    d = [0] * n
    nxt = [-1] * n
    for u in reversed(order):
        kids = idx.out[u]
        if not kids:
            b[u] = d[u] = 1
            continue
        best = max(kids, key=lambda w: (d[w], -w))
        d[u] = d[best] + 1
        nxt[u] = best
        b[u] = max(sum(b[w] for w in kids), d[u])
    covered = [False] * n  # reachable from a chosen path
    paths = []
    for u in order:
        if covered[u]:
            for w in idx.out[u]:
                covered[w] = True
            continue
        kids = idx.out[u]
        if kids and b[u] == sum(b[w] for w in kids):
            continue
        p = [u]
        while nxt[p[-1]] != -1:
            p.append(nxt[p[-1]])
        paths.append(tuple(idx.names[x] for x in p))
        covered[u] = True
        for w in idx.out[u]:
            covered[w] = True
    root = idx.names[order[0]]
    return BTable(
        root,
        {idx.names[i]: b[i] for i in range(n)},
        {idx.names[i]: d[i] for i in range(n)},
        PathFamily(tuple(paths)),
    )


# ---------------------------------------------------------------- six-function DP

@dataclass
class DpTables:
    """Per-vertex DP values for a chosen root.

    For the subtree ``V_i`` hanging below ``v_i``:

    * ``a1``: best family avoiding ``v_i`` with nothing reachable from ``v_i``;
    * ``a2``: best family avoiding ``v_i`` with nothing reaching ``v_i``;
    * ``a3``: best family where ``v_i`` starts its path (no path edge enters it);
    * ``a4``: best family where ``v_i`` ends its path (no path edge leaves it);
    * ``a5``: best family containing ``v_i``;
    * ``a6``: best family overall.
    """

    order: list[str]
    a: dict[str, tuple[int, int, int, int, int, int]]
    d_plus: dict[str, list[str]]
    d_minus: dict[str, list[str]]
    witness: PathFamily | None = None

    @property
    def value(self) -> int:
        return self.a[self.order[0]][5]


def _bfs_order(idx: TreeIndex, root: int) -> tuple[list[int], list[int]]:
    n = idx.n
    parent = [-1] * n
    parent[root] = root
    order = [root]
    out, inn = idx.out, idx.inn
    for u in order:  # list grows while iterating
        for w in out[u]:
            if parent[w] == -1:
                parent[w] = u
                order.append(w)
        for w in inn[u]:
            if parent[w] == -1:
                parent[w] = u
                order.append(w)
    if len(order) != n:
        raise NotATree("underlying graph is disconnected")
    return order, parent


def _dp_core(idx: TreeIndex, root: int = 0):
    """Bottom-up pass; returns order, parent and the six value arrays."""
    n = idx.n
    order, parent = _bfs_order(idx, root)
    a1 = [0] * n
    a2 = [0] * n
    a3 = [0] * n
    a4 = [0] * n
    a5 = [0] * n
    a6 = [0] * n
    out, inn = idx.out, idx.inn
    for u in reversed(order):
        pu = parent[u]
        s1 = s2 = 0
        base = 1
        up = dn = 0
        for w in out[u]:
            if w == pu:
                continue
            x1 = a1[w]
            s1 += x1
            s2 += a6[w]
            base += x1
            g = a3[w] - x1
            if g > up:
                up = g
        for w in inn[u]:
            if w == pu:
                continue
            x2 = a2[w]
            s2 += x2
            s1 += a6[w]
            base += x2
            g = a4[w] - x2
            if g > dn:
                dn = g
        a1[u] = s1
        a2[u] = s2
        a3[u] = base + up
        a4[u] = base + dn
        v5 = base + up + dn
        a5[u] = v5
        a6[u] = max(s1, s2, v5)
    return order, parent, (a1, a2, a3, a4, a5, a6)


def _dp_witness(idx: TreeIndex, order, parent, tabs) -> list[int]:
    a1, a2, a3, a4, a5, a6 = tabs
    n = idx.n
    mode = [0] * n

    def resolve(u: int) -> int:
        best = max(a1[u], a2[u], a5[u])
        return 5 if a5[u] == best else 1 if a1[u] == best else 2

    mode[order[0]] = resolve(order[0])
    chosen = []
    for u in order:
        m = mode[u]
        if m == 6:
            m = mode[u] = resolve(u)
        pu = parent[u]
        kids_out = [w for w in idx.out[u] if w != pu]
        kids_in = [w for w in idx.inn[u] if w != pu]
        if m == 1:
            for w in kids_out:
                mode[w] = 1
            for w in kids_in:
                mode[w] = 6
            continue
        if m == 2:
            for w in kids_in:
                mode[w] = 2
            for w in kids_out:
                mode[w] = 6
            continue
        chosen.append(u)
        ext_out = ext_in = -1
        if m in (3, 5):
            gains = [(a3[w] - a1[w], -w) for w in kids_out]
            if gains and max(gains)[0] > 0:
                ext_out = -max(gains)[1]
        if m in (4, 5):
            gains = [(a4[w] - a2[w], -w) for w in kids_in]
            if gains and max(gains)[0] > 0:
                ext_in = -max(gains)[1]
        for w in kids_out:
            mode[w] = 3 if w == ext_out else 1
        for w in kids_in:
            mode[w] = 4 if w == ext_in else 2
    return chosen


def general_p_dp(h: DiGraph, root: str | None = None, witness: bool = True) -> tuple[int, DpTables]:
    """p(H) for any directed tree in one bottom-up pass over a level order."""
    idx = TreeIndex.from_graph(h)
    r = 0 if root is None else idx.names.index(root)
    order, parent, tabs = _dp_core(idx, r)
    names = idx.names
    _check_single_earlier_neighbor(idx, order)
    a = {names[i]: tuple(t[i] for t in tabs) for i in range(idx.n)}
    d_plus = {names[u]: [names[w] for w in idx.out[u] if w != parent[u]] for u in order}
    d_minus = {names[u]: [names[w] for w in idx.inn[u] if w != parent[u]] for u in order}
    fam = None
    if witness:
        chosen = _dp_witness(idx, order, parent, tabs)
        fam = _family_from_vertices(h, (names[i] for i in chosen))
    tables = DpTables([names[u] for u in order], a, d_plus, d_minus, fam)
    return tables.value, tables


def _check_single_earlier_neighbor(idx: TreeIndex, order: list[int]) -> None:
    pos = [0] * idx.n
    for i, u in enumerate(order):
        pos[u] = i
    for i, u in enumerate(order):
        earlier = sum(1 for w in idx.out[u] + idx.inn[u] if pos[w] < i)
        if earlier != (0 if i == 0 else 1):
            raise AssertionError(f"vertex {idx.names[u]} has {earlier} earlier neighbors")


def p_of_index(idx: TreeIndex, root: int = 0) -> int:
    """The DP value on a prebuilt index; used for timing."""
    order, _, tabs = _dp_core(idx, root)
    return tabs[5][order[0]]


def p_of(h: DiGraph) -> int:
    return general_p_dp(h, witness=False)[0]


# ---------------------------------------------------------------- j-labels

@dataclass
class JLabeling:
    j: dict[str, int]
    counts: dict[int, int]

    def best_class(self) -> int:
        return max(self.counts, key=lambda i: (self.counts[i], -i))

    def family(self, h: DiGraph, cls: int | None = None) -> PathFamily:
        cls = self.best_class() if cls is None else cls
        return _family_from_vertices(h, (v for v, x in self.j.items() if x == cls))


def j_label_bound(h: DiGraph) -> tuple[JLabeling, int]:
    """Label leaves 1; a vertex copies a unique maximal child label, else max + 1.

    Each label class induces a disconnected-path family, so the largest class
    is a lower bound on p(H).
    """
    kind = classify_tree(h)
    if kind.kind != FLOW_OUT:
        raise NotATree(f"not a flow-out tree ({kind.kind})")
    idx = TreeIndex.from_graph(h)
    j = [0] * idx.n
    for u in reversed(_topological(idx)):
        kids = [j[w] for w in idx.out[u]]
        if not kids:
            j[u] = 1
            continue
        top = max(kids)
        j[u] = top if kids.count(top) == 1 else top + 1
    counts: dict[int, int] = {}
    for x in j:
        counts[x] = counts.get(x, 0) + 1
    lab = JLabeling({idx.names[i]: j[i] for i in range(idx.n)}, counts)
    return lab, max(counts.values())


def lg(x: float) -> float:
    return math.log2(x)


def flowout_lower(v: int) -> int:
    """ceil(V / (lg V + 1))"""
    return math.ceil(v / (lg(v) + 1))


def general_lower(v: int) -> int:
    """ceil(V / (2 (lg V + 1)))"""
    return math.ceil(v / (2 * (lg(v) + 1)))


# ---------------------------------------------------------------- layers

@dataclass
class LayerDecomposition:
    root: str
    layers: list[list[str]] = field(default_factory=list)

    @property
    def odd(self) -> set[str]:
        return {v for i, layer in enumerate(self.layers) if i % 2 for v in layer}

    @property
    def even(self) -> set[str]:
        return {v for i, layer in enumerate(self.layers) if i % 2 == 0 for v in layer}


def bk_decompose(h: DiGraph, root: str | None = None) -> LayerDecomposition:
    """Alternating layers from a source root.

    Layer 0 is the root.  Odd layers add everything reachable from the
    previous layer; even layers add everything that reaches it.  Odd layers
    induce flow-out forests and even layers flow-in forests.
    """
    idx = TreeIndex.from_graph(h)
    if root is None:
        r = next(i for i in range(idx.n) if not idx.inn[i])
    else:
        r = idx.names.index(root)
        if idx.inn[r]:
            raise ValueError(f"root {root!r} has incoming edges")
    layer_of = [-1] * idx.n
    layer_of[r] = 0
    layers = [[r]]
    k = 0
    while True:
        k += 1
        nbrs = idx.out if k % 2 else idx.inn
        frontier = deque(layers[-1])
        new = []
        while frontier:
            u = frontier.popleft()
            for w in nbrs[u]:
                if layer_of[w] == -1:
                    layer_of[w] = k
                    new.append(w)
                    frontier.append(w)
        if not new:
            break
        layers.append(sorted(new))
    if any(x == -1 for x in layer_of):
        raise NotATree("layers do not cover the tree")
    return LayerDecomposition(idx.names[r], [[idx.names[i] for i in layer] for layer in layers])


def induced(h: DiGraph, keep: Iterable[str]) -> DiGraph:
    """Subgraph on ``keep`` with ``s``/``t`` dropped unless kept."""
    keep = set(keep)
    return DiGraph(keep, ((a, b) for a, b in h.edges if a in keep and b in keep))


def forest_components(h: DiGraph, keep: Iterable[str]) -> list[DiGraph]:
    keep = set(keep)
    adj: dict[str, list[str]] = {v: [] for v in keep}
    for a, b in h.edges:
        if a in keep and b in keep:
            adj[a].append(b)
            adj[b].append(a)
    comps = []
    seen: set[str] = set()
    for v in sorted(keep):
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
        comps.append(induced(h, comp))
    return comps


__all__ = [
    "TreeIndex", "NotATree", "PathFamily", "is_family", "brute_force_p", "BTable",
    "flowout_b", "DpTables", "general_p_dp", "p_of", "p_of_index", "JLabeling",
    "j_label_bound", "flowout_lower", "general_lower", "LayerDecomposition",
    "bk_decompose", "induced", "forest_components",
]
