"""Exact minimum size of a sound network accepting a set of input graphs.

The search works on *cut types*.  A cut is a vertex set R with s in R and t
outside.  A network is sound exactly when every network vertex x can be given
a type (the set of cuts R for which x lies on the s' side) such that s' has
every cut, t' has none, and each edge x--y labeled u->v satisfies: for every
cut separating x from y, u is in R and v is not.

Proof sketch.  If such types exist and K has no s-t path, let R be the set
reached from s in K; no edge of K leaves R, so no usable edge crosses the
boundary of the R side and t' stays unreachable.  Conversely, take the s' side
of cut R to be the component of s' under the largest graph with no edge
leaving R.

Two vertices of the same type can be merged without breaking soundness or
losing acceptance, and every edge allowed by the types can be added.  So the
minimum size is the smallest family of distinct types, containing the full
and the empty type, in which every input graph connects full to empty.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .errors import BudgetExceeded
from .graphs import S, T, DiGraph, has_st_path, shortest_st_path, sigma
from .msn import SP, TP, Label, SwitchingNetwork, accepts, is_sound, st_cuts

DEFAULT_MAX_UNIVERSE = 5
DEFAULT_MAX_SIZE = 8
DEFAULT_NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class SearchResult:
    m: int
    witness: SwitchingNetwork
    explored: int

    def to_json(self) -> dict:
        return {"m": self.m, "explored": self.explored, "witness": self.witness.to_json()}


def _common_universe(family: Iterable[DiGraph]) -> tuple[list[DiGraph], frozenset[str]]:
    graphs = list(family)
    if not graphs:
        raise ValueError("empty input set")
    vs = graphs[0].vertices
    for g in graphs:
        if g.vertices != vs:
            raise ValueError("input graphs must share one vertex universe")
        if not has_st_path(g):
            raise ValueError(f"input graph {g!r} has no s-t path")
    return graphs, vs


def upper_bound(graphs: list[DiGraph]) -> int:
    """One dedicated s'-t' path per graph, labeled by a shortest s-t path."""
    return 2 + sum(len(shortest_st_path(g)) - 2 for g in graphs)


def _path_network(graphs: list[DiGraph]) -> SwitchingNetwork:
    edges = []
    k = 0
    for g in graphs:
        path = shortest_st_path(g)
        nodes = [SP]
        for _ in path[1:-1]:
            nodes.append(f"x{k}")
            k += 1
        nodes.append(TP)
        for (a, b), (u, v) in zip(zip(nodes, nodes[1:]), zip(path, path[1:])):
            edges.append((a, b, Label(u, v)))
    return SwitchingNetwork((), edges)


class _TypeSpace:
    def __init__(self, universe: frozenset[str], graphs: list[DiGraph]):
        self.cuts = st_cuts(universe)
        self.full = (1 << len(self.cuts)) - 1
        self.labels = sorted({e for g in graphs for e in g.edges})
        self.cross = {}
        for lab in self.labels:
            u, v = lab
            m = 0
            for i, r in enumerate(self.cuts):
                if u in r and v not in r:
                    m |= 1 << i
            self.cross[lab] = m
        # per graph: distinct crossing masks of its edges, keeping only maximal ones
        self.masks = []
        for g in graphs:
            ms = {self.cross[e] for e in g.edges}
            ms = [m for m in ms if not any(m != o and m & o == m for o in ms)]
            self.masks.append(tuple(sorted(ms)))
        self.perms = self._symmetries(universe, graphs)

    def _symmetries(self, universe: frozenset[str], graphs: list[DiGraph]) -> list[list[int]]:
        """Cut permutations induced by relabelings that map the input set to itself."""
        inner = sorted(universe - {S, T})
        pos = {r: i for i, r in enumerate(self.cuts)}
        gset = set(graphs)
        perms = []
        for image in itertools.permutations(inner):
            ren = dict(zip(inner, image))
            if ren != {v: v for v in inner} and {g.relabel(ren) for g in gset} != gset:
                continue
            perms.append([pos[frozenset(ren.get(v, v) for v in r)] for r in self.cuts])
        return perms

    def _apply(self, perm: list[int], x: int) -> int:
        y = 0
        i = 0
        while x:
            if x & 1:
                y |= 1 << perm[i]
            x >>= 1
            i += 1
        return y

    def canonical(self, fam: frozenset[int]) -> tuple[int, ...]:
        return min(tuple(sorted(self._apply(p, x) for x in fam)) for p in self.perms)

    def neighbors(self, x: int, masks: tuple[int, ...]) -> set[int]:
        out = set()
        for m in masks:
            sub = m
            while True:  # every y with x ^ y inside m
                out.add(x ^ sub)
                if sub == 0:
                    break
                sub = (sub - 1) & m
        out.discard(x)
        return out

    @staticmethod
    def allowed(x: int, y: int, masks: tuple[int, ...]) -> bool:
        d = x ^ y
        return any(d & ~m == 0 for m in masks)

    def connected(self, fam: Iterable[int], masks: tuple[int, ...]) -> bool:
        nodes = list(fam)
        seen = {self.full}
        queue = deque([self.full])
        while queue:
            x = queue.popleft()
            if x == 0:
                return True
            for y in nodes:
                if y not in seen and self.allowed(x, y, masks):
                    seen.add(y)
                    queue.append(y)
        return False


def _type_search(space: _TypeSpace, size: int, budget: int) -> tuple[frozenset[int] | None, int]:
    """Find a type family of exactly ``size`` members accepting every graph."""
    extra = size - 2
    seen: set[frozenset[int]] = set()
    explored = 0

    def dfs(fam: frozenset[int]) -> frozenset[int] | None:
        nonlocal explored
        explored += 1
        if explored > budget:
            raise BudgetExceeded(f"type search exceeded {budget} nodes")
        room = extra - (len(fam) - 2)
        pending = [i for i, m in enumerate(space.masks) if not space.connected(fam, m)]
        if not pending:
            return fam
        if room <= 0:
            return None
        needs = {i: _new_type_distance(space, fam, space.masks[i]) for i in pending}
        demand = {i: needs[i].get(space.full, room + 1) for i in pending}
        if max(demand.values()) > room:
            return None
        gi = max(pending, key=lambda i: (demand[i], -i))  # most demanding graph first
        masks = space.masks[gi]
        need = needs[gi]
        # minimal sets of new types that connect the full type to the empty type;
        # any connecting path of a solution contains one of them
        results: set[frozenset[int]] = set()
        start = (space.full, frozenset())
        states = {start}
        queue = deque([start])
        while queue:
            x, added = queue.popleft()
            for y in space.neighbors(x, masks):
                if y not in need:
                    continue
                nxt = added if y in fam else added | {y}
                if len(nxt) + need[y] - (0 if y in fam else 1) > room:
                    continue
                if y == 0:
                    results.add(nxt)
                    continue
                state = (y, nxt)
                if state not in states:
                    states.add(state)
                    queue.append(state)
            if len(states) > budget:
                raise BudgetExceeded(f"type search exceeded {budget} states")
        results = {r for r in results if not any(o < r for o in results)}
        for new in sorted(results, key=lambda r: (len(r), sorted(r))):
            cand = fam | new
            key = space.canonical(cand)
            if key in seen:
                continue
            seen.add(key)
            hit = dfs(cand)
            if hit is not None:
                return hit
        return None

    hit = dfs(frozenset([space.full, 0]))
    return hit, explored


def _new_type_distance(space: _TypeSpace, fam: frozenset[int], masks: tuple[int, ...]) -> dict[int, int]:
    """Fewest new types (counting the node itself) on a path from each type to the empty type."""
    dist = {0: 0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in space.neighbors(x, masks):
            c = dist[x] + (0 if y in fam else 1)
            if c < dist.get(y, 1 << 30):
                dist[y] = c
                if y in fam:
                    queue.appendleft(y)
                else:
                    queue.append(y)
    return dist


def _types_to_network(space: _TypeSpace, fam: frozenset[int], graphs: list[DiGraph]) -> SwitchingNetwork:
    others = sorted(x for x in fam if x not in (0, space.full))
    names = {space.full: SP, 0: TP}
    for i, x in enumerate(others):
        names[x] = f"x{i}"
    edges = []
    for x, y in itertools.combinations(sorted(fam), 2):
        d = x ^ y
        for lab in space.labels:
            if d & ~space.cross[lab] == 0:
                edges.append((names[x], names[y], Label(*lab)))
    net = SwitchingNetwork(names.values(), edges)
    # drop edges that are not needed for acceptance; soundness survives removal
    kept = list(net.edges)
    for e in list(kept):
        trial = [f for f in kept if f is not e]
        cand = SwitchingNetwork(net.vertices, trial)
        if all(accepts(cand, g) for g in graphs):
            kept = trial
    return SwitchingNetwork(net.vertices, kept)


def min_sound_msn(
    family: Iterable[DiGraph],
    max_universe: int = DEFAULT_MAX_UNIVERSE,
    max_size: int = DEFAULT_MAX_SIZE,
    budget: int = DEFAULT_NODE_BUDGET,
) -> SearchResult:
    """Exact m(I) with a witness network, by increasing network size."""
    graphs, universe = _common_universe(family)
    return _min_sound_cached(frozenset(graphs), universe, max_universe, max_size, budget)


@lru_cache(maxsize=4096)
def _min_sound_cached(graphs_fs, universe, max_universe, max_size, budget) -> SearchResult:
    graphs = sorted(graphs_fs, key=lambda g: sorted(g.edges))
    if len(universe) > max_universe:
        raise BudgetExceeded(f"universe of {len(universe)} vertices exceeds limit {max_universe}")
    upper = upper_bound(graphs)
    space = _TypeSpace(universe, graphs)
    explored = 0
    for size in range(2, min(upper, max_size) + 1):
        try:
            fam, n = _type_search(space, size, budget)
        except BudgetExceeded as exc:
            raise BudgetExceeded(str(exc), lower=size, upper=upper) from None
        explored += n
        if fam is not None:
            return SearchResult(size, _types_to_network(space, fam, graphs), explored)
    if upper <= max_size:
        raise AssertionError("path network should have been found")  # pragma: no cover
    raise BudgetExceeded(f"m exceeds size cap {max_size}", lower=max_size + 1, upper=upper)


def verify_m(family: Iterable[DiGraph], claimed: int, **kw) -> bool:
    return min_sound_msn(family, **kw).m == claimed


def m_sigma(g: DiGraph, **kw) -> int:
    return min_sound_msn(sigma(g), **kw).m


# ---------------------------------------------------------------- naive route

def naive_min_sound_msn(family: Iterable[DiGraph], max_size: int = 4, max_edges: int | None = None) -> SearchResult:
    """Literal enumeration of labeled edge sets, by size then edge count.

    Candidates use labels from the union of the inputs' edges only, skip
    unlabeled edges and parallel copies of one label, and are deduplicated
    under permutations of the inner network vertices.  Exponential; meant as
    an independent cross-check on tiny instances.
    """
    graphs, _ = _common_universe(family)
    labels = sorted({e for g in graphs for e in g.edges})
    explored = 0
    for size in range(2, max_size + 1):
        inner = [f"x{i}" for i in range(size - 2)]
        nodes = [SP, *inner, TP]
        slots = [
            (a, b, lab)
            for a, b in itertools.combinations(nodes, 2)
            for lab in labels
        ]
        perms = list(itertools.permutations(inner))
        top = len(slots) if max_edges is None else min(max_edges, len(slots))
        for k in range(1, top + 1):
            seen: set[tuple] = set()
            for combo in itertools.combinations(slots, k):
                key = _naive_canonical(combo, inner, perms)
                if key in seen:
                    continue
                seen.add(key)
                explored += 1
                net = SwitchingNetwork(nodes, ((a, b, Label(*lab)) for a, b, lab in combo))
                if all(accepts(net, g) for g in graphs) and is_sound(net).verdict:
                    return SearchResult(size, net, explored)
    raise BudgetExceeded(f"no sound network up to size {max_size}")


def _naive_canonical(combo, inner, perms) -> tuple:
    best = None
    for perm in perms:
        ren = dict(zip(inner, perm))
        key = tuple(sorted(tuple(sorted((ren.get(a, a), ren.get(b, b)))) + (lab,) for a, b, lab in combo))
        if best is None or key < best:
            best = key
    return best


__all__ = [
    "SearchResult", "min_sound_msn", "verify_m", "m_sigma", "naive_min_sound_msn", "upper_bound",
]
