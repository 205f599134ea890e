"""Structural statistics of directed trees and symbolic bound profiles.

Distances are unweighted edge counts.  A vertex counts as its own
descendant (and ancestor), so a leaf contributes at its own distance.
Bound profiles are products of ``base^(c * scale)`` factors with the
constants ``c`` left unspecified; they are compared only symbolically.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .graphs import FLOW_OUT, S, T, DiGraph, GraphError, classify_tree, count_non_lollipops, is_tree, shortest_st_path


class StatsError(GraphError):
    pass


def lglg_len(ell: int) -> int:
    """Length of the c arrays: the ceiling of lg lg ell, or 0 when ell <= 2."""
    if ell <= 2:
        return 0
    k = 0
    while 2 ** (2**k) < ell:
        k += 1
    return k


def _bfs_dist(g: DiGraph, src: str, reverse: bool = False) -> dict[str, int]:
    nbrs: dict[str, list[str]] = {v: [] for v in g.vertices}
    for a, b in g.edges:
        if reverse:
            nbrs[b].append(a)
        else:
            nbrs[a].append(b)
    dist = {src: 0}
    q = deque([src])
    while q:
        u = q.popleft()
        for w in nbrs[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def _max_below(g: DiGraph, verts: set[str], dist: dict[str, int], reverse: bool = False) -> dict[str, int]:
    """For each v in verts, the max of dist over v and everything v reaches inside verts."""
    nbrs: dict[str, list[str]] = {v: [] for v in verts}
    for a, b in g.edges:
        if a in verts and b in verts:
            if reverse:
                nbrs[b].append(a)
            else:
                nbrs[a].append(b)
    out: dict[str, int] = {}
    # process far vertices first; in a tree each child is strictly farther than its parent
    for v in sorted(verts, key=lambda x: -dist[x]):
        out[v] = max([dist[v], *(out[w] for w in nbrs[v])])
    return out


def _histogram(values: Iterable[int]) -> list[int]:
    values = list(values)
    top = max(values, default=0)
    d = [0] * (top + 1)
    for x in values:
        d[x] += 1
    return d


def _c_array(d: list[int], length: int, first: int) -> list[int]:
    """c_1 = first, c_k = sum of d_j for j >= 2^(2^k)."""
    cs = []
    for k in range(1, length + 1):
        if k == 1:
            cs.append(first)
        else:
            lo = 2 ** (2**k)
            cs.append(sum(d[lo:]))
    return cs


@dataclass(frozen=True)
class StructureStats:
    n: int
    ell: int
    path: tuple[str, ...]
    H_s: frozenset[str]
    H_t: frozenset[str]
    d_s: tuple[int, ...]  # d_s[i] = number of H_s vertices whose descendants reach distance i
    d_t: tuple[int, ...]
    c_s: tuple[int, ...]  # c_s[k-1] = c_k^s
    c_t: tuple[int, ...]
    dbar: int
    cbar: int
    k: int

    def c_sum(self, i: int) -> int:
        return self.c_s[i - 1] + self.c_t[i - 1]

    def to_json(self) -> dict:
        return {
            "n": self.n, "ell": self.ell, "path": list(self.path),
            "H_s": sorted(self.H_s), "H_t": sorted(self.H_t),
            "d_s": list(self.d_s), "d_t": list(self.d_t),
            "c_s": list(self.c_s), "c_t": list(self.c_t),
            "dbar": self.dbar, "cbar": self.cbar, "k": self.k,
        }


def compute_stats(g: DiGraph) -> StructureStats:
    if not is_tree(g):
        raise StatsError("not a tree")
    path = shortest_st_path(g)
    if path is None:
        raise StatsError("no s-t path")
    on_path = set(path)
    ell = len(path) - 1
    from_s = _bfs_dist(g, S)
    to_t = _bfs_dist(g, T, reverse=True)
    hs = {v for v in from_s if v not in on_path}
    ht = {v for v in to_t if v not in on_path}
    ms = _max_below(g, hs, from_s)
    mt = _max_below(g, ht, to_t, reverse=True)
    d_s = _histogram(ms.values())
    d_t = _histogram(mt.values())
    length = lglg_len(ell)
    cbar = sum(1 for v in g.vertices if from_s.get(v, -1) > ell or to_t.get(v, -1) > ell)
    return StructureStats(
        n=g.n, ell=ell, path=tuple(path), H_s=frozenset(hs), H_t=frozenset(ht),
        d_s=tuple(d_s), d_t=tuple(d_t),
        c_s=tuple(_c_array(d_s, length, len(hs))), c_t=tuple(_c_array(d_t, length, len(ht))),
        dbar=g.n - len(on_path) - len(hs) - len(ht), cbar=cbar, k=count_non_lollipops(g),
    )


@dataclass(frozen=True)
class FlowOutStats:
    n: int
    ell: int
    d: tuple[int, ...]
    c: tuple[int, ...]

    def to_json(self) -> dict:
        return {"n": self.n, "ell": self.ell, "d": list(self.d), "c": list(self.c)}


def flowout_c(g: DiGraph) -> FlowOutStats:
    kind = classify_tree(g)
    if kind.kind != FLOW_OUT or kind.root != S:
        raise StatsError("not a flow-out tree rooted at s")
    dist = _bfs_dist(g, S)
    if T not in dist:
        raise StatsError("t is not in the tree")
    verts = set(g.body())
    below = _max_below(g, verts, dist)
    d = _histogram(below.values())
    n = len(verts)
    c = _c_array(d, lglg_len(dist[T]), n)
    assert sum(d) == n
    return FlowOutStats(n=n, ell=dist[T], d=tuple(d), c=tuple(c))


def flowin_c(g: DiGraph) -> FlowOutStats:
    """Flow-in tree with sink t: reverse every edge and swap s and t."""
    swap = {S: T, T: S}
    rev = DiGraph((swap.get(v, v) for v in g.vertices), ((swap.get(b, b), swap.get(a, a)) for a, b in g.edges))
    return flowout_c(rev)


# ---------------------------------------------------------------- profiles

# scale kinds; POW2 carries its index
ONE, LGLG, LG, LGN, POW2 = "1", "lg lg ell", "lg ell", "lg n", "2^i"


@dataclass(frozen=True)
class Scale:
    kind: str
    i: int = 0

    def __str__(self) -> str:
        return f"2^{self.i}" if self.kind == POW2 else self.kind

    def le(self, other: "Scale") -> bool:
        if self == other or self.kind == ONE:
            return True
        chain = [LGLG, LG, LGN]
        if self.kind in chain and other.kind in chain:
            return chain.index(self.kind) <= chain.index(other.kind)
        if self.kind == POW2 and other.kind == POW2:
            return self.i <= other.i
        return False


@dataclass(frozen=True)
class Factor:
    base: int
    scale: Scale
    label: str = ""

    def render(self) -> str:
        b = self.label or str(self.base)
        return f"({b})^{{{self.scale}}}"

    def le(self, other: "Factor") -> bool:
        return self.base <= other.base and self.scale.le(other.scale)

    def to_json(self) -> dict:
        out = {"base": self.base, "scale": self.scale.kind, "label": self.label}
        if self.scale.kind == POW2:
            out["i"] = self.scale.i
        return out


@dataclass(frozen=True)
class BoundProfile:
    side: str  # "lower" or "upper"
    factors: tuple[Factor, ...] = field(default_factory=tuple)

    def render(self) -> str:
        return " * ".join(f.render() for f in self.factors) or "1"

    def to_json(self) -> dict:
        return {"side": self.side, "factors": [f.to_json() for f in self.factors], "text": self.render()}

    def normalized(self) -> tuple[tuple[int, Scale], ...]:
        """Maximal (base, scale) pairs; factors majorized by another factor are dropped."""
        pairs = {(f.base, f.scale) for f in self.factors}
        keep = []
        for b, s in pairs:
            if not any((b2, s2) != (b, s) and b <= b2 and s.le(s2) for b2, s2 in pairs):
                keep.append((b, s))
        return tuple(sorted(keep, key=lambda p: (p[0], p[1].kind, p[1].i)))


def _profile(side: str, factors: Iterable[Factor]) -> BoundProfile:
    # a base of 0 or 1 contributes nothing up to constants
    return BoundProfile(side, tuple(f for f in factors if f.base > 1))


def compare_profiles(p1: BoundProfile, p2: BoundProfile) -> str:
    if p1.side != p2.side:
        raise ValueError("profiles are on different sides")

    def covers(a: BoundProfile, b: BoundProfile) -> bool:
        fa = a.normalized()
        return all(any(bb <= ba and sb.le(sa) for ba, sa in fa) for bb, sb in b.normalized())

    if covers(p1, p2):
        return "dominates"
    if covers(p2, p1):
        return "dominated"
    return "incomparable"


THEOREMS = ("T3.1", "T3.2", "T3.3", "T3.4", "T5.1", "T5.4")


def _argmax_c(cs: list[int]) -> int | None:
    """Index i (1-based) maximizing c_i^(2^i); ties go to the larger i."""
    best, arg = 0.0, None
    for i, c in enumerate(cs, start=1):
        if c > 1:
            w = (2**i) * math.log2(c)
            if w >= best:
                best, arg = w, i
    return arg


def profile(theorem: str, inputs) -> BoundProfile | tuple[BoundProfile, BoundProfile]:
    """Symbolic bound for one of the supported theorems.

    T3.1 takes n; T3.2 and T3.3 take (n, ell); T3.4 takes (n, k, ell);
    T5.1 takes StructureStats; T5.4 takes FlowOutStats.  Two-sided results
    return (lower, upper).
    """
    if theorem == "T3.1":
        if not isinstance(inputs, int):
            raise TypeError("T3.1 expects n")
        fs = [Factor(inputs, Scale(LGN), "n")]
        return _profile("lower", fs), _profile("upper", fs)
    if theorem in ("T3.2", "T3.3"):
        if not (isinstance(inputs, tuple) and len(inputs) == 2):
            raise TypeError(f"{theorem} expects (n, ell)")
        n, _ell = inputs
        fs = [Factor(n, Scale(LG), "n")]
        return _profile("lower", fs), _profile("upper", fs)
    if theorem == "T3.4":
        if not (isinstance(inputs, tuple) and len(inputs) == 3):
            raise TypeError("T3.4 expects (n, k, ell)")
        n, k, _ell = inputs
        return _profile("upper", [Factor(n, Scale(ONE), "n"), Factor(k, Scale(LG), "k")])
    if theorem == "T5.1":
        if not isinstance(inputs, StructureStats):
            raise TypeError("T5.1 expects StructureStats")
        st = inputs
        sums = [st.c_sum(i) for i in range(1, len(st.c_s) + 1)]
        lower = [Factor(st.ell + st.dbar, Scale(LG), "ell+dbar")]
        arg = _argmax_c(sums)
        if arg is not None:
            lower.append(Factor(sums[arg - 1], Scale(POW2, arg), f"c_{arg}^s+c_{arg}^t"))
        upper = [Factor(st.n, Scale(LGLG), "n"), Factor(st.ell + st.dbar, Scale(LG), "ell+dbar")]
        upper += [Factor(c, Scale(POW2, i), f"c_{i}^s+c_{i}^t") for i, c in enumerate(sums, start=1)]
        return _profile("lower", lower), _profile("upper", upper)
    if theorem == "T5.4":
        if not isinstance(inputs, FlowOutStats):
            raise TypeError("T5.4 expects FlowOutStats")
        st = inputs
        lower = [Factor(st.ell, Scale(LG), "ell")]
        arg = _argmax_c(list(st.c))
        if arg is not None:
            lower.append(Factor(st.c[arg - 1], Scale(POW2, arg), f"c_{arg}"))
        return _profile("lower", lower)
    raise ValueError(f"unknown theorem tag {theorem!r}; expected one of {THEOREMS}")


__all__ = [
    "StatsError", "lglg_len", "StructureStats", "compute_stats", "FlowOutStats", "flowout_c", "flowin_c",
    "Scale", "Factor", "BoundProfile", "ONE", "LGLG", "LG", "LGN", "POW2", "THEOREMS",
    "compare_profiles", "profile",
]
