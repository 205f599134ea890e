"""Reduction moves on input graphs.

Each move maps G to a graph H with m(sigma(G)) >= m(sigma(H)):

* MergeIntoS / MergeIntoT collapse a vertex set into s or t.
* RemoveUselessEdges drops edges into s or out of t (m is unchanged).
* AddEdge inserts a new edge.  Adding edges can only lower m, so this is a
  legal step in a ">=" chain even though it makes the graph larger.
* ReplaceEdgeWithSourceS turns a->b into s->b; ReplaceEdgeWithSinkT turns
  a->b into a->t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from ..graphs import S, T, DiGraph


class MoveError(ValueError):
    def __init__(self, message: str, index: int | None = None, reason: str = "precondition"):
        self.index = index
        self.reason = reason
        prefix = f"move {index}: " if index is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class MergeIntoS:
    X: frozenset[str]

    def __init__(self, X: Iterable[str]):
        object.__setattr__(self, "X", frozenset(X))

    def to_json(self) -> dict:
        return {"op": "merge_s", "vertices": sorted(self.X)}


@dataclass(frozen=True)
class MergeIntoT:
    Y: frozenset[str]

    def __init__(self, Y: Iterable[str]):
        object.__setattr__(self, "Y", frozenset(Y))

    def to_json(self) -> dict:
        return {"op": "merge_t", "vertices": sorted(self.Y)}


@dataclass(frozen=True)
class RemoveUselessEdges:
    """Drop useless edges; all of them when ``edges`` is None."""

    edges: frozenset[tuple[str, str]] | None = None

    def __init__(self, edges: Iterable[tuple[str, str]] | None = None):
        object.__setattr__(self, "edges", None if edges is None else frozenset((a, b) for a, b in edges))

    def to_json(self) -> dict:
        out: dict = {"op": "remove_useless"}
        if self.edges is not None:
            out["edges"] = [list(e) for e in sorted(self.edges)]
        return out


@dataclass(frozen=True)
class AddEdge:
    u: str
    v: str

    def to_json(self) -> dict:
        return {"op": "add_edge", "u": self.u, "v": self.v}


@dataclass(frozen=True)
class ReplaceEdgeWithSourceS:
    u: str
    v: str

    def to_json(self) -> dict:
        return {"op": "replace_source_s", "u": self.u, "v": self.v}


@dataclass(frozen=True)
class ReplaceEdgeWithSinkT:
    u: str
    v: str

    def to_json(self) -> dict:
        return {"op": "replace_sink_t", "u": self.u, "v": self.v}


Move = Union[MergeIntoS, MergeIntoT, RemoveUselessEdges, AddEdge, ReplaceEdgeWithSourceS, ReplaceEdgeWithSinkT]

_BY_OP = {
    "merge_s": lambda d: MergeIntoS(d["vertices"]),
    "merge_t": lambda d: MergeIntoT(d["vertices"]),
    "remove_useless": lambda d: RemoveUselessEdges(None if "edges" not in d else [tuple(e) for e in d["edges"]]),
    "add_edge": lambda d: AddEdge(d["u"], d["v"]),
    "replace_source_s": lambda d: ReplaceEdgeWithSourceS(d["u"], d["v"]),
    "replace_sink_t": lambda d: ReplaceEdgeWithSinkT(d["u"], d["v"]),
}


def move_from_json(data: dict) -> Move:
    try:
        return _BY_OP[data["op"]](data)
    except KeyError as exc:
        raise MoveError(f"malformed move {data!r}", reason="format") from exc


def is_useless(e: tuple[str, str]) -> bool:
    return e[1] == S or e[0] == T


def merge(g: DiGraph, S_: Iterable[str] = (), T_: Iterable[str] = ()) -> DiGraph:
    """The (S, T)-merge graph, with the merged vertices named s and t."""
    S_ = set(S_) | {S}
    T_ = set(T_) | {T}
    if S_ & T_:
        raise MoveError(f"merge sets overlap on {sorted(S_ & T_)}")
    f = lambda v: S if v in S_ else (T if v in T_ else v)  # noqa: E731
    edges = set()
    for a, b in g.edges:
        fa, fb = f(a), f(b)
        if fa != fb:
            edges.add((fa, fb))
    return DiGraph((f(v) for v in g.vertices), edges)


def apply_move(g: DiGraph, m: Move, index: int | None = None) -> DiGraph:
    if isinstance(m, (MergeIntoS, MergeIntoT)):
        into_s = isinstance(m, MergeIntoS)
        xs = m.X if into_s else m.Y
        banned = T if into_s else S
        if banned in xs:
            raise MoveError(f"cannot merge {banned} into {'s' if into_s else 't'}", index)
        missing = xs - g.vertices
        if missing:
            raise MoveError(f"unknown vertices {sorted(missing)}", index)
        return merge(g, S_=xs) if into_s else merge(g, T_=xs)
    if isinstance(m, RemoveUselessEdges):
        if m.edges is None:
            return DiGraph(g.vertices, (e for e in g.edges if not is_useless(e)))
        for e in sorted(m.edges):
            if e not in g.edges:
                raise MoveError(f"edge {e[0]}->{e[1]} not present", index)
            if not is_useless(e):
                raise MoveError(f"edge {e[0]}->{e[1]} is not useless", index)
        return DiGraph(g.vertices, g.edges - m.edges)
    if isinstance(m, AddEdge):
        if m.u not in g.vertices or m.v not in g.vertices:
            raise MoveError(f"unknown endpoint in {m.u}->{m.v}", index)
        if m.u == m.v:
            raise MoveError("self-loop", index)
        if (m.u, m.v) in g.edges:
            raise MoveError(f"edge {m.u}->{m.v} already present", index)
        return g.add_edges((m.u, m.v))
    if isinstance(m, (ReplaceEdgeWithSourceS, ReplaceEdgeWithSinkT)):
        if (m.u, m.v) not in g.edges:
            raise MoveError(f"edge {m.u}->{m.v} not present", index)
        new = (S, m.v) if isinstance(m, ReplaceEdgeWithSourceS) else (m.u, T)
        if new[0] == new[1]:
            raise MoveError("replacement would be a self-loop", index)
        return DiGraph(g.vertices, (g.edges - {(m.u, m.v)}) | {new})
    raise MoveError(f"unknown move {m!r}", index, reason="format")


__all__ = [
    "MoveError", "MergeIntoS", "MergeIntoT", "RemoveUselessEdges", "AddEdge",
    "ReplaceEdgeWithSourceS", "ReplaceEdgeWithSinkT", "Move", "move_from_json",
    "is_useless", "merge", "apply_move",
]
