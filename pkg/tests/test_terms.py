"""Term syntax: parser, printer, constraint reading, and the roundtrips."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings

import strategies
from fuzzyosf import (
    Clause,
    EqualityConstraint,
    FeatureConstraint,
    NotNormalTerm,
    NotRooted,
    SortConstraint,
    Term,
    TermSyntaxError,
    UnknownFeature,
    UnknownSort,
    build_sort_graph,
    check_normal,
    clause_to_term,
    format_clause,
    format_term,
    is_normal,
    parse_clause,
    parse_term,
    term_to_clause,
)


@pytest.fixture(scope="module")
def sig():
    return build_sort_graph(["s", "u"], ["f", "g"], [])


# -- parsing ----------------------------------------------------------------------


def test_parse_simple_term(sig):
    t = parse_term("X: s(f -> Y: u)", sig)
    assert t.tag == "X" and t.sort == "s"
    assert t.args[0][0] == "f"
    assert t.args[0][1].sort == "u"


def test_parse_untagged_nodes_get_fresh_tags(sig):
    t = parse_term("s(f -> u, g -> u)", sig)
    tags = {t.tag, t.args[0][1].tag, t.args[1][1].tag}
    assert len(tags) == 3
    assert all(tag.startswith("_Z") for tag in tags)


def test_parse_fresh_tags_avoid_user_tags(sig):
    t = parse_term("_Z0: s(f -> u)", sig)
    assert t.tag == "_Z0"
    assert t.args[0][1].tag != "_Z0"


def test_parse_bare_tag_is_a_back_reference(sig):
    t = parse_term("X: s(f -> X)", sig)
    back = t.args[0][1]
    assert back.tag == "X" and back.sort == "top" and back.args == ()


def test_parse_sortless_tag_reads_as_top(sig):
    t = parse_term("X(f -> Y: u)", sig)
    assert t.sort == "top"


@pytest.mark.parametrize(
    "text",
    [
        "",
        "X:",
        "X: s(",
        "X: s(f -> )",
        "X: s(f Y: u)",
        "X: s()",
        "X: s(f -> Y: u,)",
        "x: s",
    ],
)
def test_parse_rejects_malformed_terms(sig, text):
    with pytest.raises(TermSyntaxError):
        parse_term(text, sig)


def test_parse_rejects_unknown_names(sig):
    with pytest.raises(UnknownSort):
        parse_term("X: nosuch", sig)
    with pytest.raises(UnknownFeature):
        parse_term("X: s(nosuch -> Y: u)", sig)


def test_parse_without_signature_accepts_anything():
    t = parse_term("X: whatever(anyfeat -> Y: thing)", None)
    assert t.sort == "whatever"


# -- printing ---------------------------------------------------------------------


def test_format_explicit_roundtrips(sig):
    text = "X: s(f -> Y: u(g -> X), g -> Y)"
    t = parse_term(text, sig)
    assert format_term(t) == text


def test_format_compact_drops_noise(sig):
    t = parse_term("X: s(f -> Y: top)", sig)
    compact = format_term(t, style="compact")
    assert compact == "s(f -> top)"
    again = parse_term(compact, sig)
    assert again.sort == "s"
    assert again.args[0][1].sort == "top"


def test_term_str_matches_explicit_format(sig):
    t = parse_term("X: s(f -> Y: u)", sig)
    assert str(t) == format_term(t)


# -- normality --------------------------------------------------------------------


def test_duplicate_feature_is_not_normal(sig):
    t = parse_term("X: s(f -> Y: u, f -> Z: u)", sig)
    assert not is_normal(t)
    assert any("feature" in p for p in check_normal(t))


def test_conflicting_resort_is_not_normal(sig):
    t = Term("X", "s", (("f", Term("X", "u", ())),))
    assert not is_normal(t)


def test_repeated_structure_parses_but_is_not_normal(sig):
    t = parse_term("X: s(f -> X(g -> Y: u))", sig)
    assert any("structured" in p for p in check_normal(t))


def test_cyclic_term_is_normal(sig):
    t = parse_term("X: s(f -> Y: u(g -> X))", sig)
    assert is_normal(t)


# -- constraint reading -------------------------------------------------------------


def test_term_to_clause_frozen_example(sig):
    t = parse_term("X: s(f -> X)", sig)
    clause = term_to_clause(t)
    wanted = {SortConstraint("X", "s"), FeatureConstraint("X", "f", "X")}
    assert wanted <= set(clause.constraints)
    assert clause.root == "X"


def test_clause_to_term_frozen_example(sig):
    clause = Clause(
        (
            SortConstraint("X", "s"),
            FeatureConstraint("X", "f", "Y"),
            SortConstraint("Y", "u"),
            FeatureConstraint("Y", "g", "X"),
        ),
        root="X",
    )
    assert format_term(clause_to_term(clause)) == "X: s(f -> Y: u(g -> X))"


def test_clause_to_term_requires_root(sig):
    clause = Clause((SortConstraint("X", "s"),))
    with pytest.raises(NotRooted):
        clause_to_term(clause)


def test_clause_to_term_rejects_unreachable_tags(sig):
    clause = Clause(
        (SortConstraint("X", "s"), SortConstraint("Y", "u")), root="X"
    )
    with pytest.raises(NotRooted) as exc:
        clause_to_term(clause)
    assert "Y" in exc.value.tags


def test_parse_clause_syntax(sig):
    clause = parse_clause("X: s & X.f = Y & X = X2", sig)
    kinds = [type(c).__name__ for c in clause.constraints]
    assert kinds == ["SortConstraint", "FeatureConstraint", "EqualityConstraint"]
    assert "≐" in format_clause(clause)


def test_parse_clause_accepts_unicode_equals(sig):
    clause = parse_clause("X.f ≐ Y & X ≐ Y", sig)
    assert len(clause.constraints) == 2


def test_parse_clause_rejects_nested_terms(sig):
    with pytest.raises(TermSyntaxError):
        parse_clause("X: s(f -> Y)", sig)


# -- roundtrips on random terms ------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(strategies.lattice_and_terms(count=1))
def test_print_parse_roundtrip(bundle):
    lattice, (t,) = bundle
    assert format_term(parse_term(format_term(t), lattice.graph)) == format_term(t)


@settings(max_examples=200, deadline=None)
@given(strategies.lattice_and_terms(count=1))
def test_clause_roundtrip_is_identity(bundle):
    lattice, (t,) = bundle
    again = clause_to_term(term_to_clause(t))
    assert format_term(again) == format_term(t)
