import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_graph, random_network, random_sound_network, random_supergraph, universe
from msnlab.errors import BudgetExceeded
from msnlab.fixtures import two_route_inputs, two_route_network
from msnlab.graphs import S, T, ParseError, graph, has_st_path, sigma, simple_st_paths
from msnlab.msn import (
    SP, TP, UNLABELED, Label, ParallelSTo, ParallelToT, RelabelMerge, SwitchingNetwork, UnlabelFromT, UnlabelIntoS,
    accepted_graphs, accepts, apply_network_transform, format_network, is_complete, is_sound, merged_universe,
    network, parse_network,
)

UNI4 = universe(4)


# ---------------------------------------------------------------- model and format

def test_parse_network_parallel_and_unlabeled():
    net = parse_network("s' -- x : s->a\ns' -- x : s->a\nx -- t' : *\nnode y")
    assert net.size == 4
    assert len(net.edges) == 3
    assert sum(1 for e in net.edges if e[2] is UNLABELED) == 1


def test_parse_network_errors():
    with pytest.raises(ParseError, match="line 1"):
        parse_network("s' - t' : s->t")
    with pytest.raises(ValueError):
        parse_network("s' -- t' : a->a")


def test_network_round_trip():
    net = two_route_network()
    assert parse_network(format_network(net)) == net
    assert SwitchingNetwork.from_json(net.to_json()) == net


# ---------------------------------------------------------------- acceptance

def test_two_route_network_accepts_first_input():
    g1, _ = two_route_inputs()
    assert accepts(two_route_network(), g1)


def test_single_edge_network():
    net = network("s' -- t' : s->t")
    assert accepts(net, graph("s->t"))
    assert not accepts(net, graph("a->t"))


def test_acceptance_uses_non_simple_walks():
    # s' reaches t' only by going back through x
    net = network("s' -- x : s->a", "x -- y : a->t", "x -- t' : s->t")
    assert accepts(net, graph("s->a", "s->t"))


@settings(max_examples=200)
@given(st.integers(0, 10**9))
def test_acceptance_monotone(seed):
    rng = random.Random(seed)
    net = random_network(rng, rng.randint(2, 6), UNI4, rng.randint(1, 8))
    g = random_graph(rng, UNI4)
    h = random_supergraph(rng, g)
    if accepts(net, g):
        assert accepts(net, h)


# ---------------------------------------------------------------- soundness

def test_two_route_network_sound_and_complete():
    net = two_route_network()
    assert is_sound(net, UNI4).verdict
    assert is_sound(net, UNI4, method="cuts").verdict
    assert is_complete(net, UNI4)


def test_unlabeled_edge_is_unsound_with_empty_witness():
    rep = is_sound(network("s' -- t' : *"), UNI4)
    assert not rep.verdict
    assert rep.witness_graph.edges == frozenset()
    assert rep.witness_walk == (SP, TP)


def test_split_labels_unsound():
    net = network("s' -- u : s->a", "u -- t' : b->t")
    rep = is_sound(net, UNI4)
    assert not rep.verdict
    assert rep.witness_graph.edges == {("s", "a"), ("b", "t")}
    assert accepts(net, rep.witness_graph) and not has_st_path(rep.witness_graph)


def test_soundness_budget():
    rng = random.Random(0)
    net = random_network(rng, 8, universe(6), 30, unlabeled=0.0)
    with pytest.raises(BudgetExceeded):
        is_sound(net, universe(6), budget=3)


def test_universe_must_cover_labels():
    with pytest.raises(ValueError):
        is_sound(network("s' -- t' : s->z"), UNI4)


def test_walk_and_cut_methods_agree():
    rng = random.Random(11)
    for _ in range(300):
        net = random_network(rng, rng.randint(2, 5), UNI4, rng.randint(1, 7), unlabeled=0.05)
        a = is_sound(net, UNI4)
        b = is_sound(net, UNI4, method="cuts")
        assert a.verdict == b.verdict
        if not a.verdict:
            assert accepts(net, a.witness_graph) and not has_st_path(a.witness_graph)


def test_soundness_matches_accepted_graph_enumeration():
    rng = random.Random(5)
    names = universe(3)
    for _ in range(100):
        net = random_network(rng, rng.randint(2, 5), names, rng.randint(1, 6), unlabeled=0.05)
        truth = all(has_st_path(g) for g in accepted_graphs(net, names))
        assert is_sound(net, names).verdict == truth


# ---------------------------------------------------------------- completeness

def test_single_edge_is_not_complete():
    assert not is_complete(network("s' -- t' : s->t"), ["s", "t", "a"])


def test_dedicated_paths_are_complete():
    names = ["s", "t", "a"]
    specs = []
    for j, p in enumerate(simple_st_paths(names)):
        seq = sorted(p.edges, key=lambda e: (e[0] != "s", e))
        nodes = [SP, *(f"q{j}_{i}" for i in range(len(seq) - 1)), TP]
        specs += [f"{x} -- {y} : {a}->{b}" for (x, y), (a, b) in zip(zip(nodes, nodes[1:]), seq)]
    net = network(*specs)
    assert is_complete(net, names)
    assert is_sound(net, names).verdict


def test_completeness_budget():
    with pytest.raises(BudgetExceeded):
        is_complete(network("s' -- t' : s->t"), universe(8), budget=10)


# ---------------------------------------------------------------- transforms

def test_parallel_s_adds_copy():
    net = network("s' -- x : a->b", "x -- t' : b->t")
    out = apply_network_transform(net, ParallelSTo(("a", "b")))
    assert ("s'", "x", Label("s", "b")) in out.edges
    assert ("s'", "x", Label("a", "b")) in out.edges
    assert out.vertices == net.vertices


def test_parallel_t_adds_copy():
    net = network("s' -- x : s->a", "x -- t' : a->b")
    out = apply_network_transform(net, ParallelToT(("a", "b")))
    assert ("t'", "x", Label("a", "t")) in out.edges


def test_unlabel_without_useless_labels_is_identity():
    net = two_route_network()
    assert apply_network_transform(net, UnlabelIntoS()) == net
    assert apply_network_transform(net, UnlabelFromT()) == net


def test_unlabel_turns_useless_labels_unlabeled():
    net = network("s' -- x : a->s", "x -- t' : t->b")
    assert all(e[2] is UNLABELED for e in apply_network_transform(net, UnlabelIntoS()).edges if e[0] == "s'")
    assert all(e[2] is UNLABELED for e in apply_network_transform(net, UnlabelFromT()).edges if e[0] == "t'")


def test_relabel_merge_collapses_labels():
    net = network("s' -- x : a->b", "x -- t' : b->t")
    out = apply_network_transform(net, RelabelMerge({"a"}, {"b"}))
    assert out.labels() == {Label("s", "t")}
    inside = apply_network_transform(net, RelabelMerge({"a", "b"}, ()))
    assert any(e[2] is UNLABELED for e in inside.edges)


def test_relabel_merge_rejects_overlap():
    with pytest.raises(ValueError):
        RelabelMerge({"a"}, {"a"})
    with pytest.raises(ValueError):
        RelabelMerge({"t"}, ())


def _random_transform(rng, names):
    inner = [v for v in names if v not in (S, T)]
    kind = rng.randrange(5)
    if kind == 0:
        return ParallelSTo()
    if kind == 1:
        return ParallelToT()
    if kind == 2:
        return UnlabelIntoS()
    if kind == 3:
        return UnlabelFromT()
    side = {v: rng.randrange(3) for v in inner}
    return RelabelMerge([v for v in inner if side[v] == 1], [v for v in inner if side[v] == 2])


def test_transforms_preserve_soundness_fuzz():
    rng = random.Random(2024)
    for _ in range(200):
        net, names = random_sound_network(rng)
        tr = _random_transform(rng, names)
        out = apply_network_transform(net, tr)
        uni = merged_universe(names, tr) if isinstance(tr, RelabelMerge) else names
        assert is_sound(out, uni).verdict, (format_network(net), tr)


def test_parallel_keeps_old_acceptances():
    rng = random.Random(8)
    for _ in range(100):
        net = random_network(rng, 4, UNI4, 5)
        out = apply_network_transform(net, ParallelSTo())
        g = random_graph(rng, UNI4)
        if accepts(net, g):
            assert accepts(out, g)


def test_replacing_edge_with_source_edge_is_accepted_after_parallel_copies():
    # a network for sigma(G) plus s->b copies accepts sigma(H), H = G with a->b turned into s->b
    g = graph("s->a", "a->b", "b->t")
    h = graph("s->a", "s->b", "b->t")
    specs = []
    for j, x in enumerate(sorted(sigma(g), key=lambda x: sorted(x.edges))):
        seq = [e for e in sorted(x.edges, key=lambda e: (e[0] != "s", e[1] == "t"))]
        nodes = [SP, f"q{j}a", f"q{j}b", TP]
        specs += [f"{u} -- {v} : {a}->{b}" for (u, v), (a, b) in zip(zip(nodes, nodes[1:]), seq)]
    net = network(*specs)
    assert is_sound(net, g.vertices).verdict
    assert not all(accepts(net, x) for x in sigma(h))
    out = apply_network_transform(net, ParallelSTo())
    assert all(accepts(out, x) for x in sigma(h))
    assert is_sound(out, g.vertices).verdict


def test_sound_networks_accept_only_connected_graphs():
    rng = random.Random(9)
    names = universe(3)
    for _ in range(30):
        net, _ = random_sound_network(rng, k=3)
        for g in accepted_graphs(net, names):
            assert has_st_path(g)
