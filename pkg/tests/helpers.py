"""Random instances shared by several test files."""

import functools
import random

from msnlab.graphs import S, T, DiGraph
from msnlab.msn import SP, TP, UNLABELED, Label, SwitchingNetwork, is_sound


def universe(k):
    """s, t and k - 2 extra vertices named a, b, c, ..."""
    return [S, T, *"abcdefgh"[: k - 2]]


def random_network(rng: random.Random, size: int, names, n_edges: int, unlabeled: float = 0.1) -> SwitchingNetwork:
    nodes = [SP, TP, *(f"x{i}" for i in range(size - 2))]
    pairs = [(a, b) for a in names for b in names if a != b]
    edges = []
    for _ in range(n_edges):
        x, y = rng.sample(nodes, 2)
        lab = UNLABELED if rng.random() < unlabeled else Label(*rng.choice(pairs))
        edges.append((x, y, lab))
    return SwitchingNetwork(nodes, edges)


def random_sound_network(rng: random.Random, max_size: int = 6, k: int = 4) -> tuple[SwitchingNetwork, list[str]]:
    names = universe(k)
    while True:
        net = random_network(rng, rng.randint(2, max_size), names, rng.randint(1, 8), unlabeled=0.0)
        if is_sound(net, names).verdict:
            return net, names


def random_graph(rng: random.Random, names, p: float = 0.3) -> DiGraph:
    return DiGraph(names, ((a, b) for a in names for b in names if a != b and rng.random() < p))


def random_supergraph(rng: random.Random, g: DiGraph, p: float = 0.3) -> DiGraph:
    names = sorted(g.vertices)
    extra = [(a, b) for a in names for b in names if a != b and rng.random() < p]
    return g.add_edges(*extra) if extra else g


def floating_tree_example():
    """Path s,p1..p5,t with a forward chain, a reverse chain and two floating trees."""
    from msnlab.graphs import graph
    return graph(
        "s->p1", "p1->p2", "p2->p3", "p3->p4", "p4->p5", "p5->t",
        "p2->a1", "a1->a2",
        "r1->p4", "r2->r1",
        "f1->a1", "f2->f1", "f2->f3", "f4->f3", "f4->f5",
        "g1->r2", "g1->g2", "g3->g2",
    )


def flowout_fixtures():
    """(name, tree, i, expected case, expected subcase) covering every branch of the flow-out reduction."""
    from msnlab.fixtures import spine_tree
    from msnlab.graphs import random_st_tree
    out = [
        ("path3-i1", spine_tree(3), 1, "i=1", None),
        ("star-i1", spine_tree(4, branches=[(1, 2, 3), (3, 1)]), 1, "i=1", None),
        ("deep-i1", spine_tree(16, branches=[(3, 4, 2)]), 1, "i=1", None),
        ("path16", spine_tree(16), 2, 1, None),
        ("path16-twigs", spine_tree(16, branches=[(2, 3), (9, 4, 1)]), 2, 1, None),
        ("path20-long-branch", spine_tree(20, branches=[(2, 15)]), 2, 1, None),
        ("fan-on-path", spine_tree(16, branches=[(8, 8, 60)]), 2, 2, 1),
        ("fan-off-path", spine_tree(16, branches=[(7, 9, 60)]), 2, 2, 2),
        ("path256", spine_tree(256), 3, 1, None),
    ]
    rng = random.Random(51)
    for j in range(3):
        ell = rng.randint(4, 15)
        out.append((f"random-i1-{j}", random_st_tree(ell + 20, ell, rng, flow_out=True), 1, "i=1", None))
    return out


def thm51_fixtures():
    """Trees with an s-t path: bare, one-sided, two-sided and with floating parts."""
    from msnlab.fixtures import path_with_lollipops, spine_tree
    from msnlab.graphs import random_st_tree
    out = [
        ("bare", spine_tree(5)),
        ("forward-only", spine_tree(6, branches=[(2, 3)])),
        ("reverse-only", spine_tree(6, reverse_branches=[(4, 3)])),
        ("lollipops", path_with_lollipops(5, 2)),
        ("floating", floating_tree_example()),
    ]
    rng = random.Random(5)
    for j in range(3):
        ell = rng.randint(2, 8)
        out.append((f"random-{j}", random_st_tree(rng.randint(ell + 10, ell + 30), ell, rng)))
    return out


@functools.lru_cache(maxsize=None)
def corpus(n_max):
    """Every directed tree with at most n_max vertices, up to isomorphism."""
    from msnlab.graphs import enumerate_directed_trees
    return tuple(enumerate_directed_trees(n_max))


@functools.lru_cache(maxsize=None)
def flowout_corpus(n_max):
    from msnlab.graphs import FLOW_OUT, classify_tree
    return tuple(h for h in corpus(n_max) if classify_tree(h).kind == FLOW_OUT)
