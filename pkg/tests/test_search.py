import itertools
import random

import pytest

from msnlab.errors import BudgetExceeded
from msnlab.fixtures import path_with_spare
from msnlab.graphs import DiGraph, graph, has_st_path, sigma
from msnlab.msn import accepts, is_sound
from msnlab.reduce import MergeIntoS, MergeIntoT, RemoveUselessEdges, apply_move
from msnlab.search import m_sigma, min_sound_msn, naive_min_sound_msn, upper_bound, verify_m


def _graphs_over(names):
    pairs = [(a, b) for a in names for b in names if a != b]
    for mask in range(1 << len(pairs)):
        yield DiGraph(names, (pairs[i] for i in range(len(pairs)) if mask >> i & 1))


def _check_witness(res, family):
    assert res.witness.size == res.m
    assert all(accepts(res.witness, g) for g in family)
    assert is_sound(res.witness, next(iter(family)).vertices).verdict


def test_single_edge_needs_two_vertices():
    res = min_sound_msn({graph("s->t")})
    assert res.m == 2
    _check_witness(res, {graph("s->t")})


def test_two_edge_path_needs_three():
    fam = sigma(graph("s->a", "a->t"))
    res = min_sound_msn(fam)
    assert res.m == 3
    _check_witness(res, fam)


def test_spare_vertex_path_needs_four():
    fam = sigma(path_with_spare())
    res = min_sound_msn(fam)
    assert res.m == 4
    _check_witness(res, fam)


def test_verify_m():
    assert verify_m({graph("s->t")}, 2)
    assert not verify_m({graph("s->t")}, 3)
    assert verify_m(sigma(path_with_spare()), 4)


def test_rejects_unconnected_inputs():
    with pytest.raises(ValueError):
        min_sound_msn({graph("s->a")})
    with pytest.raises(ValueError):
        min_sound_msn({graph("s->t"), graph("s->a", "a->t")})


def test_universe_limit():
    g = graph("s->a", "a->b", "b->c", "c->t")
    with pytest.raises(BudgetExceeded):
        min_sound_msn({g}, max_universe=4)


def test_budget_reports_interval():
    g = graph("s->a", "a->b", "b->c", "c->t")
    with pytest.raises(BudgetExceeded) as exc:
        min_sound_msn(sigma(g), max_universe=5, budget=50)
    assert exc.value.lower is not None and exc.value.upper is not None
    assert exc.value.lower <= exc.value.upper


def test_matches_naive_on_universe_3():
    for g in _graphs_over(["s", "t", "a"]):
        if has_st_path(g):
            fam = sigma(g)
            assert min_sound_msn(fam).m == naive_min_sound_msn(fam).m


def test_matches_naive_on_sparse_universe_4():
    # the literal enumeration is only tractable for small label unions
    checked = 0
    for g in _graphs_over(["s", "t", "a", "b"]):
        if not has_st_path(g) or len(g.edges) > 3:
            continue
        fam = sigma(g)
        if len({e for h in fam for e in h.edges}) > 5:
            continue
        m = min_sound_msn(fam).m
        if m <= 4:
            assert naive_min_sound_msn(fam, max_size=4).m == m
            checked += 1
    assert checked > 20


def test_path_network_upper_bound():
    fam = sigma(path_with_spare())
    assert upper_bound(sorted(fam, key=lambda g: sorted(g.edges))) >= min_sound_msn(fam).m


def test_subset_monotone():
    rng = random.Random(3)
    graphs = [g for g in _graphs_over(["s", "t", "a", "b"]) if has_st_path(g)]
    for _ in range(60):
        big = set(rng.sample(graphs, 3))
        small = set(rng.sample(sorted(big, key=lambda g: sorted(g.edges)), 2))
        assert min_sound_msn(small).m <= min_sound_msn(big).m


# ---------------------------------------------------------------- reduction theorems at universe 3

NAMES3 = ["s", "t", "a"]


def _m(g):
    return m_sigma(g) if has_st_path(g) else float("inf")


def test_adding_an_edge_never_raises_m():
    for g in _graphs_over(NAMES3):
        for a, b in itertools.permutations(NAMES3, 2):
            if (a, b) not in g.edges:
                assert _m(g) >= _m(g.add_edges((a, b)))


def test_merging_never_raises_m():
    for g in _graphs_over(NAMES3):
        for side in ("s", "t"):
            h = apply_move(g, MergeIntoS({"a"}) if side == "s" else MergeIntoT({"a"}))
            assert _m(g) >= _m(h)


def test_useless_edge_removal_keeps_m():
    for g in _graphs_over(NAMES3):
        assert _m(g) == _m(apply_move(g, RemoveUselessEdges()))


def test_m_sigma_matches_family_call():
    g = graph("s->a", "a->t")
    assert m_sigma(g) == min_sound_msn(sigma(g)).m == 3
