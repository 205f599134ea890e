"""Layered counterexample graph and the random-path network that accepts its permutations.

The layered graph has sets C_1..C_{ell-1} of equal size with complete edges
s->C_1, C_i->C_{i+1}, C_{ell-1}->t and the remaining vertices isolated.  The
network is C internally disjoint s'-t' paths of length ell whose labels are
s->w_1, w_1->w_2, ..., w_{ell-1}->t with every w_i drawn uniformly from the
vertex universe.  Each path's labels form an s-t walk, so the network is
sound no matter what is drawn.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist
from typing import Iterable, Iterator

from .errors import PreconditionError
from .graphs import S, T, DiGraph
from .msn import SP, TP, UNLABELED, Label, SwitchingNetwork, is_sound

DEFAULT_SWEEP_LIMIT = 10**5


def layer_size(n: int, ell: int) -> int:
    return (n - 2) // (2 * (ell - 1))


@dataclass(frozen=True)
class LayeredGraph:
    n: int
    ell: int
    layers: tuple[tuple[str, ...], ...]
    isolated: tuple[str, ...]
    graph: DiGraph

    def merged(self) -> DiGraph:
        """Each layer collapsed to one vertex v_i: an s-t path of ell edges plus the isolated vertices."""
        seq = [S, *(f"v{i}" for i in range(1, self.ell)), T]
        return DiGraph([*seq, *self.isolated], zip(seq, seq[1:]))

    def to_json(self) -> dict:
        return {"n": self.n, "ell": self.ell, "layer_size": len(self.layers[0]) if self.layers else 0,
                "isolated": len(self.isolated)}


def check_hypotheses(n: int, ell: int) -> None:
    if ell < 2:
        raise PreconditionError("ell must be at least 2")
    if not n > 20:
        raise PreconditionError(f"n={n} must exceed 20")
    if not n > 4 * ell:
        raise PreconditionError(f"n/4={n / 4} must exceed ell={ell}")


def build_layered(n: int, ell: int, check: bool = True) -> LayeredGraph:
    """``check=False`` skips the size hypotheses (useful at toy scale) but still needs a nonempty layer."""
    if check:
        check_hypotheses(n, ell)
    if ell < 2:
        raise PreconditionError("ell must be at least 2")
    w = layer_size(n, ell)
    if w < 1:
        raise PreconditionError(f"layer size is zero for n={n}, ell={ell}")
    layers = tuple(tuple(f"c{i}_{j}" for j in range(w)) for i in range(1, ell))
    iso = tuple(f"z{j}" for j in range(n - 2 - (ell - 1) * w))
    edges = [(S, v) for v in layers[0]] + [(v, T) for v in layers[-1]]
    for a, b in zip(layers, layers[1:]):
        edges += [(x, y) for x in a for y in b]
    verts = [v for layer in layers for v in layer] + list(iso)
    return LayeredGraph(n, ell, layers, iso, DiGraph(verts, edges))


def required_C(n: int, ell: int) -> tuple[Fraction, int]:
    if ell < 2:
        raise PreconditionError("ell must be at least 2")
    p = Fraction(1, 4 * (ell - 1)) ** (ell - 1)
    return p, math.ceil(n * n / p)


def per_path_probability(n: int, ell: int) -> Fraction:
    """Chance that one random path accepts a fixed permutation: (layer size / n)^(ell-1)."""
    return Fraction(layer_size(n, ell), n) ** (ell - 1)


@dataclass(frozen=True)
class RandomPathNetwork:
    n: int
    ell: int
    C: int
    seed: int
    universe: tuple[str, ...]
    words: tuple[tuple[str, ...], ...]  # w_1..w_{ell-1} for each path

    @property
    def size(self) -> int:
        return 2 + self.C * (self.ell - 1)

    def path_labels(self, j: int) -> list[tuple[str, str]]:
        seq = [S, *self.words[j], T]
        return list(zip(seq, seq[1:]))

    def required_edges(self, j: int) -> frozenset[tuple[str, str]]:
        # a label v->v is satisfied by every input, so it is dropped here
        return frozenset(e for e in self.path_labels(j) if e[0] != e[1])

    def network(self) -> SwitchingNetwork:
        verts = [SP, TP]
        edges = []
        for j in range(self.C):
            nodes = [SP, *(f"q{j}_{i}" for i in range(1, self.ell)), TP]
            verts += nodes[1:-1]
            for (x, y), (a, b) in zip(zip(nodes, nodes[1:]), self.path_labels(j)):
                edges.append((x, y, UNLABELED if a == b else Label(a, b)))
        return SwitchingNetwork(verts, edges)

    def accepts(self, g: DiGraph) -> bool:
        es = g.edges
        return any(self.required_edges(j) <= es for j in range(self.C))


def build_random_network(n: int, ell: int, C: int, seed: int, universe=None) -> RandomPathNetwork:
    if ell < 2:
        raise PreconditionError("ell must be at least 2")
    if universe is None:
        universe = build_layered(n, ell, check=False).graph.vertices
    uni = tuple(sorted(universe))
    rng = random.Random(seed)
    words = tuple(tuple(rng.choice(uni) for _ in range(ell - 1)) for _ in range(C))
    return RandomPathNetwork(n, ell, C, seed, uni, words)


def sigma_count(lg: LayeredGraph) -> int:
    """|sigma(G)|: ways to assign the inner vertices to the layers and the isolated pool."""
    inner = lg.n - 2
    w = len(lg.layers[0])
    return math.factorial(inner) // (math.factorial(w) ** len(lg.layers) * math.factorial(len(lg.isolated)))


def _relayer(lg: LayeredGraph, layers) -> DiGraph:
    edges = [(S, v) for v in layers[0]] + [(v, T) for v in layers[-1]]
    for a, b in zip(layers, layers[1:]):
        edges += [(x, y) for x in a for y in b]
    return DiGraph(lg.graph.vertices, edges)


def iter_layered_sigma(lg: LayeredGraph) -> Iterator[DiGraph]:
    """Every member of sigma(G) exactly once."""
    names = sorted(lg.graph.inner)
    w = len(lg.layers[0])

    def rec(pool: list[str], depth: int, acc: list):
        if depth == len(lg.layers):
            yield _relayer(lg, acc)
            return
        for pick in itertools.combinations(pool, w):
            chosen = set(pick)
            yield from rec([v for v in pool if v not in chosen], depth + 1, acc + [pick])

    yield from rec(names, 0, [])


def _count_rejected(args) -> tuple[int, int]:
    """Worker: sweep the members whose first layer is one of ``firsts``."""
    lg, reqs, firsts = args
    w = len(lg.layers[0])
    names = sorted(lg.graph.inner)
    swept = rejected = 0

    def rec(pool, depth, acc):
        if depth == len(lg.layers):
            yield _relayer(lg, acc)
            return
        for pick in itertools.combinations(pool, w):
            chosen = set(pick)
            yield from rec([v for v in pool if v not in chosen], depth + 1, acc + [pick])

    for first in firsts:
        rest = [v for v in names if v not in set(first)]
        for m in rec(rest, 1, [first]):
            swept += 1
            es = m.edges
            if not any(r <= es for r in reqs):
                rejected += 1
    return swept, rejected


def _parallel_sweep(lg: LayeredGraph, reqs, workers: int) -> tuple[int, int]:
    firsts = list(itertools.combinations(sorted(lg.graph.inner), len(lg.layers[0])))
    chunks = [(lg, reqs, firsts[k::workers]) for k in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_count_rejected, chunks))
    return sum(a for a, _ in parts), sum(b for _, b in parts)


def _members(lg: LayeredGraph, limit: int, rng: random.Random, samples: int) -> tuple[Iterable[DiGraph], bool]:
    if sigma_count(lg) <= limit:
        return iter_layered_sigma(lg), True
    # too many to sweep; shuffle labels uniformly instead
    names = sorted(lg.graph.inner)
    out = []
    for _ in range(samples):
        img = names[:]
        rng.shuffle(img)
        out.append(lg.graph.relabel(dict(zip(names, img))))
    return out, False


def verify_construction(
    net: RandomPathNetwork,
    lg: LayeredGraph,
    limit: int = DEFAULT_SWEEP_LIMIT,
    samples: int = 2000,
    soundness: str = "structural",
    rate_samples: int = 200,
    workers: int = 1,
) -> dict:
    """Sweep sigma(G) (or a sample of it) and report acceptance and soundness.

    ``soundness`` is "structural" (every path spells an s-t walk), "cuts"
    (exact check through msn.is_sound) or "none" (reported as null).
    ``workers`` > 1 splits an exhaustive sweep across processes.
    """
    if (net.n, net.ell) != (lg.n, lg.ell):
        raise PreconditionError("network and graph parameters differ")
    rng = random.Random(net.seed ^ 0x5EED)
    members, exhaustive = _members(lg, limit, rng, samples)
    reqs = [net.required_edges(j) for j in range(net.C)]
    swept = rejected = 0
    hits = trials = 0
    parallel = workers > 1 and exhaustive
    for idx, m in enumerate(members):
        if parallel and idx >= rate_samples:
            break
        es = m.edges
        swept += 1
        if not any(r <= es for r in reqs):
            rejected += 1
        if idx < rate_samples:
            hits += sum(1 for r in reqs if r <= es)
            trials += len(reqs)
    if parallel:
        swept, rejected = _parallel_sweep(lg, reqs, workers)
    structural = all(_walks_s_to_t(net.path_labels(j)) for j in range(net.C))
    sound: bool | None = structural
    if soundness == "none":
        sound = None
    elif soundness == "cuts":
        sound = structural and is_sound(net.network(), lg.graph.vertices, method="cuts").verdict
    p, _ = required_C(net.n, net.ell)
    return {
        "n": net.n, "ell": net.ell, "p": str(p), "C": net.C, "seed": net.seed,
        "size": net.size, "swept": swept, "rejected": rejected, "exhaustive": exhaustive,
        "sound": sound, "soundness_method": soundness,
        "per_path_rate": hits / trials if trials else None,
        "rejected_rate_ci": None if exhaustive else wilson_interval(rejected, swept),
        "per_path_probability": str(per_path_probability(net.n, net.ell)),
    }


def wilson_interval(k: int, n: int, level: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion k/n."""
    if n == 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + level / 2)
    ph = k / n
    den = 1 + z * z / n
    mid = (ph + z * z / (2 * n)) / den
    half = z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / den
    return max(0.0, mid - half), min(1.0, mid + half)


def _walks_s_to_t(labels: list[tuple[str, str]]) -> bool:
    cur = S
    for a, b in labels:
        if a != cur:
            return False
        cur = b
    return cur == T


def accepting_draw(n: int, ell: int, C: int | None = None, seed: int = 0, retries: int = 5,
                   check: bool = True, **kw) -> tuple[RandomPathNetwork | None, list[dict]]:
    """Draw networks with seeds seed, seed+1, ... until one accepts all of sigma(G)."""
    lg = build_layered(n, ell, check=check)
    if C is None:
        C = required_C(n, ell)[1]
    reports = []
    for k in range(retries):
        net = build_random_network(n, ell, C, seed + k, lg.graph.vertices)
        rep = verify_construction(net, lg, **kw)
        reports.append(rep)
        if rep["rejected"] == 0:
            return net, reports
    return None, reports


__all__ = [
    "layer_size", "LayeredGraph", "check_hypotheses", "build_layered", "required_C", "per_path_probability",
    "RandomPathNetwork", "build_random_network", "sigma_count", "iter_layered_sigma", "verify_construction",
    "accepting_draw", "wilson_interval",
]
