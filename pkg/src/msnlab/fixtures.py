"""Small hand-built instances used by tests, the CLI demos and the README."""

from __future__ import annotations

from .graphs import DiGraph, graph
from .msn import SwitchingNetwork, network


def two_route_network() -> SwitchingNetwork:
    """Five-vertex network over {s,a,b,t} that is sound and complete.

    Node ``A`` means "a is reachable", ``B`` means "b is reachable" and
    ``AB`` means both are.
    """
    return network(
        "s' -- A : s->a",
        "s' -- B : s->b",
        "A -- AB : a->b",
        "B -- AB : b->a",
        "A -- t' : a->t",
        "B -- t' : b->t",
        "AB -- t' : a->t",
        "AB -- t' : b->t",
        "s' -- t' : s->t",
    )


def two_route_inputs() -> tuple[DiGraph, DiGraph]:
    """An accepted input with an s-t path and an s-t-free input on the same universe."""
    g1 = graph("s->a", "a->b", "b->t")
    g2 = graph("s->a", "s->b", "a->b", "b->a")
    return g1, g2


def path_with_spare() -> DiGraph:
    """s->a->t plus an isolated vertex b; its permutation set has two members and m = 4."""
    return graph("s->a", "a->t", isolated=["b"])


def merge_example() -> tuple[DiGraph, set[str], set[str]]:
    """Graph and (S, T) pair whose merge produces the useless edge t->s."""
    g = graph("s->a", "a->b", "b->t", "d->c")
    return g, {"s", "c"}, {"t", "d"}


def path_with_lollipops(length: int = 4, hanging: int = 2) -> DiGraph:
    """An s-t path of ``length`` edges; every off-path vertex hangs on s or t."""
    inner = [f"p{i}" for i in range(1, length)]
    seq = ["s", *inner, "t"]
    edges = [f"{a}->{b}" for a, b in zip(seq, seq[1:])]
    for j in range(hanging):
        edges.append(f"s->x{j}")
        edges.append(f"y{j}->t")
    return graph(*edges)


def out_star(leaves: int, prefix: str = "v") -> DiGraph:
    return graph(*(f"{prefix}0->{prefix}{i}" for i in range(1, leaves + 1)))


def directed_path(n: int, prefix: str = "v") -> DiGraph:
    if n == 1:
        return graph(isolated=[f"{prefix}0"])
    return graph(*(f"{prefix}{i}->{prefix}{i + 1}" for i in range(n - 1)))


def spine_tree(ell: int, branches=(), reverse_branches=()) -> DiGraph:
    """An s-t path of ``ell`` edges with chains hanging off it.

    ``branches`` lists (depth, length) pairs: a chain of ``length`` vertices
    leaving the path vertex at that depth, directed away from it.  Each entry
    of ``reverse_branches`` is a chain directed into the path vertex, so its
    vertices reach t.  Chains may themselves be (depth, length, fanout)
    triples, in which case every chain vertex also gets ``fanout`` leaves.
    """
    seq = ["s", *(f"p{i}" for i in range(1, ell)), "t"]
    edges = [(a, b) for a, b in zip(seq, seq[1:])]
    for tag, specs, into in (("b", branches, False), ("r", reverse_branches, True)):
        for j, spec in enumerate(specs):
            at, length, fan = (*spec, 0) if len(spec) == 2 else spec
            prev = seq[at]
            for m in range(length):
                v = f"{tag}{j}_{m}"
                edges.append((v, prev) if into else (prev, v))
                for f in range(fan):
                    leaf = f"{tag}{j}_{m}_{f}"
                    edges.append((leaf, v) if into else (v, leaf))
                prev = v
    return DiGraph((), edges)


def general_tree_example() -> DiGraph:
    """Neither flow-out nor flow-in: two sources and two sinks."""
    return graph("a->s", "a->t", "b->t")


__all__ = [
    "two_route_network", "two_route_inputs", "path_with_spare", "merge_example",
    "path_with_lollipops", "out_star", "directed_path", "spine_tree", "general_tree_example",
]
