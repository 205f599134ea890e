"""Replayable reduction certificates.

A certificate lists a start graph, a move sequence, the fingerprint of the
graph after every move, and the end graph.  Checking it replays the moves
from scratch, so generators never have to be trusted.  A valid certificate
witnesses m(sigma(start)) >= m(sigma(end)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..graphs import S, T, DiGraph, fingerprint
from .moves import (
    AddEdge, MergeIntoS, MergeIntoT, Move, MoveError, RemoveUselessEdges, apply_move, is_useless, move_from_json,
)


@dataclass(frozen=True)
class ReductionCertificate:
    start: DiGraph
    moves: tuple[Move, ...]
    fingerprints: tuple[str, ...]
    end: DiGraph
    metadata: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "moves": [m.to_json() for m in self.moves],
            "fingerprints": list(self.fingerprints),
            "end": self.end.to_json(),
            "metadata": self.metadata,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True, default=_jsonable)

    @classmethod
    def from_json(cls, data: dict) -> "ReductionCertificate":
        return cls(
            start=DiGraph.from_json(data["start"]),
            moves=tuple(move_from_json(m) for m in data["moves"]),
            fingerprints=tuple(data.get("fingerprints", ())),
            end=DiGraph.from_json(data["end"]),
            metadata=data.get("metadata", {}),
        )


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


@dataclass(frozen=True)
class CheckResult:
    valid: bool
    reason: str | None = None  # "precondition", "fingerprint", "end", "format"
    step: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.valid

    def to_json(self) -> dict:
        return {"valid": self.valid, "reason": self.reason, "step": self.step, "detail": self.detail}


def replay(start: DiGraph, moves) -> list[DiGraph]:
    out = [start]
    for i, m in enumerate(moves):
        out.append(apply_move(out[-1], m, i))
    return out


def check_certificate(cert: ReductionCertificate) -> CheckResult:
    if cert.fingerprints and len(cert.fingerprints) != len(cert.moves):
        return CheckResult(False, "format", None, "fingerprint count differs from move count")
    g = cert.start
    for i, m in enumerate(cert.moves):
        try:
            g = apply_move(g, m, i)
        except MoveError as exc:
            return CheckResult(False, exc.reason, i, str(exc))
        if cert.fingerprints and fingerprint(g) != cert.fingerprints[i]:
            return CheckResult(False, "fingerprint", i, "replayed graph differs from the recorded one")
    if g != cert.end:
        return CheckResult(False, "end", len(cert.moves), "replay does not reproduce the end graph")
    return CheckResult(True)


class Builder:
    """Applies moves while recording fingerprints; merges skip empty sets."""

    def __init__(self, start: DiGraph):
        self.start = start
        self.g = start
        self.moves: list[Move] = []
        self.prints: list[str] = []
        self.meta: dict = {}
        self._old_useless = {e for e in start.edges if is_useless(e)}

    def do(self, m: Move) -> DiGraph:
        self.g = apply_move(self.g, m, len(self.moves))
        self.moves.append(m)
        self.prints.append(fingerprint(self.g))
        return self.g

    def merge_s(self, xs) -> None:
        xs = set(xs) - {S}
        if xs:
            self.do(MergeIntoS(xs))

    def merge_t(self, ys) -> None:
        ys = set(ys) - {T}
        if ys:
            self.do(MergeIntoT(ys))

    def clean(self) -> None:
        """Remove the useless edges created since the start; ones present at the start stay."""
        new = {e for e in self.g.edges if is_useless(e)} - self._old_useless
        if new:
            self.do(RemoveUselessEdges(new))

    def add(self, u: str, v: str) -> None:
        self.do(AddEdge(u, v))

    def finish(self) -> ReductionCertificate:
        return ReductionCertificate(self.start, tuple(self.moves), tuple(self.prints), self.g, dict(self.meta))


__all__ = ["ReductionCertificate", "CheckResult", "check_certificate", "replay", "Builder"]
