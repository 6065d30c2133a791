"""Rooted feature graphs: bijections with terms, canonical forms, equivalence."""

from __future__ import annotations

import pytest
from hypothesis import given, settings

import strategies
from fuzzyosf import (
    NotSolved,
    OsfGraph,
    apply_feature,
    canonical_form,
    clause_to_graphs,
    format_term,
    graph_equivalent,
    graph_isomorphic,
    graph_to_dot,
    graph_to_term,
    parse_clause,
    parse_term,
    sort_membership,
    term_to_graph,
)
from fuzzyosf.graphs import TrivialGraph


@pytest.fixture(scope="module")
def sig(chain_lattice):
    return chain_lattice.graph


# -- term <-> graph -----------------------------------------------------------------


def test_term_to_graph_basics(sig):
    g = term_to_graph(parse_term("X: s(f -> Y: u(g -> X))", sig))
    assert g.root == "X"
    assert g.sorts == {"X": "s", "Y": "u"}
    assert g.out == {"X": (("f", "Y"),), "Y": (("g", "X"),)}


def test_graph_roundtrip_is_identity(sig):
    text = "X: s(f -> Y: u(g -> X), h -> Z: v)"
    t = parse_term(text, sig)
    assert format_term(graph_to_term(term_to_graph(t))) == text


@settings(max_examples=200, deadline=None)
@given(strategies.lattice_and_terms(count=1))
def test_graph_roundtrip_random(bundle):
    lattice, (t,) = bundle
    again = graph_to_term(term_to_graph(t))
    assert format_term(again) == format_term(t)


def test_clause_to_graphs_slices_by_tag(sig):
    clause = parse_clause("X: s & X.f = Y & Y: u & Z: v", sig)
    graphs = clause_to_graphs(clause)
    assert set(graphs) == {"X", "Y", "Z"}
    assert graphs["X"].out["X"] == (("f", "Y"),)
    assert graphs["Y"].out.get("Y", ()) == ()
    assert graphs["Z"].sorts["Z"] == "v"


def test_clause_to_graphs_rejects_unsolved(sig):
    clause = parse_clause("X = Y & X: s", sig)
    with pytest.raises(NotSolved):
        clause_to_graphs(clause)


# -- graph algebra -------------------------------------------------------------------


def test_sort_membership_degree(chain_lattice):
    g = term_to_graph(parse_term("X: q", chain_lattice.graph))
    assert sort_membership(g, "u", chain_lattice) == 0.7
    assert sort_membership(g, "q", chain_lattice) == 1.0
    assert sort_membership(g, "p", chain_lattice) == 0.0


def test_apply_feature_follows_edges(sig):
    g = term_to_graph(parse_term("X: s(f -> Y: u)", sig))
    sub = apply_feature(g, "f")
    assert sub.root == "Y"
    assert sub.sorts["Y"] == "u"


def test_apply_absent_feature_is_trivial(chain_lattice):
    g = term_to_graph(parse_term("X: s(f -> Y: u)", chain_lattice.graph))
    t = apply_feature(g, "g")
    assert isinstance(t, TrivialGraph)
    assert sort_membership(t, "top", chain_lattice) == 1.0
    assert sort_membership(t, "u", chain_lattice) == 0.0
    deeper = apply_feature(t, "f")
    assert isinstance(deeper, TrivialGraph)
    assert deeper.path != t.path


# -- canonical forms and equivalence -------------------------------------------------


def test_canonical_form_strips_top_leaves(sig):
    g = term_to_graph(parse_term("X: s(f -> Y: u, g -> Z: top)", sig))
    c = canonical_form(g)
    assert "Z" not in c.nodes()
    assert c.out["X"] == (("f", "Y"),)


def test_canonical_form_keeps_shared_top_leaves(sig):
    g = term_to_graph(parse_term("X: s(f -> Y: top, g -> Y)", sig))
    c = canonical_form(g)
    assert "Y" in c.nodes()


def test_canonical_form_keeps_the_root(sig):
    g = term_to_graph(parse_term("X: top", sig))
    assert "X" in canonical_form(g).nodes()


def test_equivalence_modulo_trivial_leaf(sig):
    psi0 = parse_term("X0: s(f -> Y0: u)", sig)
    psi1 = parse_term("X1: s(f -> Y1: u, g -> Z1: top)", sig)
    assert graph_equivalent(term_to_graph(psi0), term_to_graph(psi1))
    assert graph_equivalent(term_to_graph(psi1), term_to_graph(psi0))


def test_isomorphism_is_tag_blind(sig):
    a = term_to_graph(parse_term("X: s(f -> Y: u(g -> X))", sig))
    b = term_to_graph(parse_term("A: s(f -> B: u(g -> A))", sig))
    assert graph_isomorphic(a, b)


def test_isomorphism_respects_coreference(sig):
    shared = term_to_graph(parse_term("X: s(f -> Y: u, g -> Y)", sig))
    split = term_to_graph(parse_term("A: s(f -> B: u, g -> C: u)", sig))
    assert not graph_isomorphic(shared, split)
    assert not graph_equivalent(shared, split)


def test_different_sorts_are_not_isomorphic(sig):
    a = term_to_graph(parse_term("X: s", sig))
    b = term_to_graph(parse_term("X: u", sig))
    assert not graph_isomorphic(a, b)


@settings(max_examples=150, deadline=None)
@given(strategies.lattice_and_terms(count=1))
def test_equivalence_is_reflexive(bundle):
    lattice, (t,) = bundle
    g = term_to_graph(t)
    assert graph_equivalent(g, g)


# -- dot output ----------------------------------------------------------------------


def test_dot_output_mentions_every_node(sig):
    g = term_to_graph(parse_term("X: s(f -> Y: u)", sig))
    dot = graph_to_dot(g)
    assert dot.startswith("digraph")
    assert '"X"' in dot and '"Y"' in dot
    assert "peripheries=2" in dot
