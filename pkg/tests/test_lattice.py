"""Sort hierarchy: closure degrees, meets, validation, enrichment, file format."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings

import oracles
import strategies
from fuzzyosf import (
    BOT,
    TOP,
    CycleDetected,
    DegreeOutOfRange,
    DuplicateName,
    NotALattice,
    OntologyError,
    SortLattice,
    UnknownSort,
    build_similarity,
    build_sort_graph,
    enrich_from_similarity,
    format_ontology,
    load_ontology,
    validate_lattice,
)


# -- frozen closure values on the chain hierarchy --------------------------------


@pytest.mark.parametrize(
    "sub,sup,expected",
    [
        ("q", "u", 0.7),
        ("s", "v", 0.4),
        ("q", "v", 0.5),
        ("s", "u", 0.7),
        ("q", "t", 0.6),
        ("p", "u", 0.8),
        ("p", "v", 0.4),
        ("q", "s", 0.9),
        ("u", "q", 0.0),
        ("u", "v", 0.0),
    ],
)
def test_chain_closure_degrees(chain_lattice, sub, sup, expected):
    assert chain_lattice.degree(sub, sup) == expected


@pytest.mark.parametrize(
    "left,right,meet",
    [("u", "v", "s"), ("s", "t", "q"), ("r", "s", "p"), ("u", "u", "u"), ("p", "q", BOT)],
)
def test_chain_glbs(chain_lattice, left, right, meet):
    assert chain_lattice.glb(left, right) == meet
    assert chain_lattice.glb(right, left) == meet


def test_bounds_are_implicit(chain_lattice):
    for s in chain_lattice.graph.sorts:
        assert chain_lattice.degree(BOT, s) == 1.0
        assert chain_lattice.degree(s, TOP) == 1.0
        assert chain_lattice.degree(s, s) == 1.0
    assert chain_lattice.degree(TOP, "p") == 0.0
    assert chain_lattice.degree("p", BOT) == 0.0
    assert chain_lattice.glb(TOP, "p") == "p"
    assert chain_lattice.glb(BOT, "p") == BOT


def test_unknown_sort_raises(chain_lattice):
    with pytest.raises(UnknownSort):
        chain_lattice.degree("p", "nosuch")
    with pytest.raises(UnknownSort):
        chain_lattice.glb("nosuch", "p")


def test_densify_matches_lazy(chain_lattice):
    graph = build_sort_graph(
        list(chain_lattice.graph.sorts),
        list(chain_lattice.graph.features),
        list(chain_lattice.graph.edges),
    )
    dense = SortLattice(graph)
    dense.densify()
    for s in graph.sorts:
        for t in graph.sorts:
            assert dense.degree(s, t) == chain_lattice.degree(s, t)


def test_closure_pairs_lists_every_positive_degree(chain_lattice):
    table = {(s, t): d for s, t, d in chain_lattice.closure_pairs()}
    assert table[("q", "u")] == 0.7
    assert all(d > 0.0 for d in table.values())
    assert ("u", "q") not in table


# -- construction errors ----------------------------------------------------------


def test_duplicate_sort_rejected():
    with pytest.raises(DuplicateName):
        build_sort_graph(["a", "a"], [], [])


def test_sort_feature_collision_rejected():
    with pytest.raises(DuplicateName):
        build_sort_graph(["a"], ["a"], [])


def test_degree_zero_edge_rejected():
    with pytest.raises(DegreeOutOfRange):
        build_sort_graph(["a", "b"], [], [("a", "b", 0.0)])


def test_degree_above_one_rejected():
    with pytest.raises(DegreeOutOfRange):
        build_sort_graph(["a", "b"], [], [("a", "b", 1.5)])


def test_cycle_detected_with_witness():
    with pytest.raises(CycleDetected) as exc:
        lat = SortLattice(
            build_sort_graph(
                ["a", "b", "c"], [], [("a", "b", 1.0), ("b", "c", 0.5), ("c", "a", 1.0)]
            )
        )
        lat.degree("a", "b")
    assert set(exc.value.cycle) <= {"a", "b", "c"}


def test_self_edge_rejected():
    with pytest.raises(CycleDetected):
        build_sort_graph(["a"], [], [("a", "a", 1.0)])


def test_edges_touching_bounds():
    with pytest.raises(CycleDetected):
        build_sort_graph(["a"], [], [("a", BOT, 1.0)])
    with pytest.raises(CycleDetected):
        build_sort_graph(["a"], [], [(TOP, "a", 1.0)])
    graph = build_sort_graph(["a"], [], [(BOT, "a", 1.0), ("a", TOP, 1.0)])
    assert SortLattice(graph).degree("a", TOP) == 1.0


def test_duplicate_edges_keep_the_best():
    graph = build_sort_graph(["a", "b"], [], [("a", "b", 0.3), ("a", "b", 0.8)])
    assert SortLattice(graph).degree("a", "b") == 0.8


def test_diamond_is_not_a_lattice():
    graph = build_sort_graph(
        ["a", "b", "c", "d"],
        [],
        [("a", "c", 1.0), ("a", "d", 1.0), ("b", "c", 1.0), ("b", "d", 1.0)],
    )
    with pytest.raises(NotALattice) as exc:
        validate_lattice(graph)
    assert set(exc.value.pair) == {"c", "d"}
    assert set(exc.value.maximal) == {"a", "b"}


def test_validate_is_idempotent(chain_lattice):
    assert chain_lattice.validate() is chain_lattice


# -- random DAGs vs the brute-force oracle ----------------------------------------


@settings(max_examples=150, deadline=None)
@given(strategies.dags(max_sorts=8))
def test_closure_matches_oracle(dag):
    sorts, edges = dag
    table = oracles.closure_table(sorts, edges)
    lattice = SortLattice(build_sort_graph(sorts, [], edges))
    for s in [BOT, *sorts, TOP]:
        for t in [BOT, *sorts, TOP]:
            assert lattice.degree(s, t) == table[(s, t)], (s, t)


@settings(max_examples=150, deadline=None)
@given(strategies.dags(max_sorts=8))
def test_glb_agrees_with_support_oracle(dag):
    sorts, edges = dag
    lattice = SortLattice(build_sort_graph(sorts, [], edges))
    try:
        lattice.validate()
    except NotALattice as exc:
        left, right = exc.pair
        assert len(oracles.glb_candidates(sorts, edges, left, right)) != 1
        return
    assert oracles.is_lattice(sorts, edges)
    for s in sorts:
        for t in sorts:
            assert [lattice.glb(s, t)] == oracles.glb_candidates(sorts, edges, s, t)


@settings(max_examples=100, deadline=None)
@given(strategies.forest_lattices(max_sorts=10))
def test_forest_lattices_validate(lattice):
    names = [s for s in lattice.graph.sorts if s not in (BOT, TOP)]
    for s in names:
        for t in names:
            meet = lattice.glb(s, t)
            assert lattice.degree(meet, s) > 0.0
            assert lattice.degree(meet, t) > 0.0


# -- similarity enrichment ---------------------------------------------------------


def test_enrichment_grades_a_crisp_taxonomy():
    graph = build_sort_graph(
        ["car", "bike", "truck", "vehicle"],
        [],
        [("car", "vehicle", 1.0), ("bike", "vehicle", 1.0), ("truck", "vehicle", 1.0)],
    )
    sim = build_similarity([("car", "truck", 0.8), ("car", "bike", 0.4)])
    enriched, dropped = enrich_from_similarity(graph, sim)
    table = {(a, b): d for a, b, d in enriched.edges}
    assert table[("car", "truck")] == 0.8
    assert table[("bike", "car")] == 0.4
    reasons = {(e.sub, e.sup): e.reason for e in dropped}
    assert reasons[("truck", "car")] == "cycle"
    assert reasons[("car", "bike")] == "cycle"
    SortLattice(enriched).validate()


def test_enrichment_max_combines_candidates():
    graph = build_sort_graph(
        ["a", "b", "c"], [], [("a", "b", 1.0)]
    )
    sim = build_similarity([("b", "c", 0.6), ("a", "c", 0.9)])
    enriched, _ = enrich_from_similarity(graph, sim)
    table = {(x, y): d for x, y, d in enriched.edges}
    # a sits below b, so sim(b, c) also seeds (a, c); the direct 0.9 wins.
    assert table[("a", "c")] == 0.9


def test_enrichment_requires_crisp_hierarchy():
    graph = build_sort_graph(["a", "b"], [], [("a", "b", 0.7)])
    with pytest.raises(ValueError):
        enrich_from_similarity(graph, build_similarity([("a", "b", 0.5)]))


def test_similarity_table_rules():
    table = build_similarity([("a", "b", 0.5)])
    assert table[("a", "b")] == table[("b", "a")] == 0.5
    with pytest.raises(DegreeOutOfRange):
        build_similarity([("a", "b", 1.2)])
    with pytest.raises(OntologyError):
        build_similarity([("a", "a", 0.3)])
    with pytest.raises(OntologyError):
        build_similarity([("a", "b", 0.3), ("b", "a", 0.4)])


# -- the file format ---------------------------------------------------------------


ONTOLOGY_TEXT = """\
# two branches
sort a b c
feature f
edge a b 0.5
edge a c 1
sim b c 0.25
"""


def test_load_ontology_roundtrip():
    graph, sim = load_ontology(ONTOLOGY_TEXT)
    assert set(graph.features) == {"f"}
    assert sim[("b", "c")] == 0.25
    again, sim2 = load_ontology(format_ontology(graph, sim))
    assert sorted(again.edges) == sorted(graph.edges)
    assert sim2 == sim
    assert list(again.sorts) == list(graph.sorts)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("sort", "line 1"),
        ("edge a b", "line 1"),
        ("edge a b nope", "bad degree"),
        ("hedge a b 1", "unknown directive"),
        ("sort a\nedge a b 2", "line 2"),
    ],
)
def test_load_ontology_reports_line_numbers(text, fragment):
    with pytest.raises(OntologyError) as exc:
        graph, _ = load_ontology(text)
        SortLattice(graph).validate()
    assert fragment in str(exc.value)


@settings(max_examples=60, deadline=None)
@given(strategies.dags(max_sorts=8))
def test_format_parse_roundtrip_random(dag):
    sorts, edges = dag
    graph = build_sort_graph(sorts, ["f0"], edges)
    again, _ = load_ontology(format_ontology(graph))
    assert sorted(again.edges) == sorted(graph.edges)
    assert list(again.sorts) == list(graph.sorts)
    assert list(again.features) == ["f0"]
