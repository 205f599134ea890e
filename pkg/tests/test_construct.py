import itertools
import random
from fractions import Fraction

import pytest

from msnlab.construct import (
    RandomPathNetwork, accepting_draw, build_layered, build_random_network, check_hypotheses, iter_layered_sigma,
    layer_size, per_path_probability, required_C, sigma_count, verify_construction, wilson_interval,
)
from msnlab.errors import PreconditionError
from msnlab.graphs import S, T, DiGraph, has_st_path, sigma
from msnlab.msn import accepts, is_sound


def test_layered_shape():
    lg = build_layered(24, 3)
    assert layer_size(24, 3) == 5
    assert [len(x) for x in lg.layers] == [5, 5]
    assert len(lg.isolated) == 12
    assert len(lg.graph.vertices) == 24
    assert len(lg.graph.edges) == 5 + 25 + 5


def test_merged_is_path_plus_isolated():
    lg = build_layered(24, 3)
    m = lg.merged()
    assert m.edges == {(S, "v1"), ("v1", "v2"), ("v2", T)}
    assert len(m.vertices) == 4 + 12


def test_hypotheses():
    check_hypotheses(24, 3)
    with pytest.raises(PreconditionError):
        check_hypotheses(20, 3)
    with pytest.raises(PreconditionError):
        check_hypotheses(24, 6)
    with pytest.raises(PreconditionError):
        build_layered(10, 1, check=False)
    with pytest.raises(PreconditionError):
        build_layered(3, 3, check=False)


def test_required_C_values():
    assert required_C(10, 3) == (Fraction(1, 64), 6400)
    assert required_C(10, 2) == (Fraction(1, 4), 400)
    for n in (5, 11, 30):
        assert required_C(n, 2)[1] == 4 * n * n


def test_network_size_and_determinism():
    a = build_random_network(10, 3, 50, seed=7)
    b = build_random_network(10, 3, 50, seed=7)
    assert a == b
    assert a.size == 2 + 50 * 2
    net = a.network()
    assert len(net.vertices) == a.size
    assert build_random_network(10, 3, 50, seed=8) != a


def test_accepts_iff_required_edges_present():
    rng = random.Random(3)
    net = build_random_network(8, 3, 30, seed=1)
    lg = build_layered(8, 3, check=False)
    full = net.network()
    for g in itertools.islice(iter_layered_sigma(lg), 40):
        want = any(net.required_edges(j) <= g.edges for j in range(net.C))
        assert net.accepts(g) == want == accepts(full, g)
    inner = sorted(lg.graph.inner)
    for _ in range(40):
        g = lg.graph.relabel(dict(zip(inner, rng.sample(inner, len(inner)))))
        assert net.accepts(g) == accepts(full, g)


def test_sigma_count_matches_enumeration():
    for n, ell in ((8, 2), (8, 3), (9, 3), (10, 3)):
        lg = build_layered(n, ell, check=False)
        members = list(iter_layered_sigma(lg))
        assert len(members) == sigma_count(lg) == len(set(members))
    lg = build_layered(7, 2, check=False)
    assert set(iter_layered_sigma(lg)) == sigma(lg.graph)


def test_small_network_is_sound_exactly():
    lg = build_layered(6, 2, check=False)
    net = build_random_network(6, 2, 12, seed=2, universe=lg.graph.vertices)
    assert is_sound(net.network(), lg.graph.vertices).verdict
    rep = verify_construction(net, lg, soundness="cuts")
    assert rep["sound"] is True


def test_every_path_spells_an_st_walk():
    net = build_random_network(6, 2, 12, seed=2)
    for j in range(net.C):
        assert has_st_path(DiGraph((), net.required_edges(j)))


def test_exhaustive_and_sampled_sweeps():
    lg = build_layered(8, 2, check=False)
    net = build_random_network(8, 2, 256, seed=0, universe=lg.graph.vertices)
    ex = verify_construction(net, lg)
    assert ex["exhaustive"] and ex["swept"] == sigma_count(lg) == 20
    assert ex["rejected_rate_ci"] is None
    sam = verify_construction(net, lg, limit=5, samples=300)
    assert not sam["exhaustive"] and sam["swept"] == 300
    lo, hi = sam["rejected_rate_ci"]
    assert lo <= ex["rejected"] / ex["swept"] <= hi or ex["rejected"] == 0 and lo == 0


def test_per_path_rate_at_least_p():
    lg = build_layered(12, 2, check=False)
    net = build_random_network(12, 2, 2000, seed=4, universe=lg.graph.vertices)
    rep = verify_construction(net, lg, soundness="none")
    p, _ = required_C(12, 2)
    assert rep["sound"] is None
    assert rep["per_path_rate"] >= float(p) * 0.9
    assert Fraction(rep["per_path_probability"]) == per_path_probability(12, 2) == Fraction(5, 12)


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and 0 < hi < 0.05
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert wilson_interval(0, 0) == (0.0, 1.0)
    lo99, hi99 = wilson_interval(50, 100, level=0.99)
    assert lo99 < lo and hi99 > hi


def test_parallel_sweep_matches_serial():
    lg = build_layered(10, 3, check=False)
    net = build_random_network(10, 3, 400, seed=5, universe=lg.graph.vertices)
    one = verify_construction(net, lg, soundness="none")
    two = verify_construction(net, lg, soundness="none", workers=2)
    assert (one["swept"], one["rejected"]) == (two["swept"], two["rejected"])


def test_accepting_draw_small():
    net, reps = accepting_draw(8, 2, seed=0, check=False)
    assert isinstance(net, RandomPathNetwork)
    assert reps[-1]["rejected"] == 0 and reps[-1]["sound"]
    assert net.C == 4 * 64


def test_accepting_draw_can_fail():
    net, reps = accepting_draw(10, 3, C=1, seed=0, retries=2, check=False, soundness="none")
    assert net is None and len(reps) == 2
