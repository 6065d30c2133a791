"""Graded unification of feature terms.

Unification conjoins the constraint forms of the two terms with an equality
between their roots and normalizes.  An inconsistent result is the bottom
term at degree 1 (failure is certain).  Otherwise the solved part, with each
equality class renamed to a fresh representative, rebuilds the unifier term;
the degree to which each input subsumes the unifier is

    beta_i = min over tags X of term_i of degree(class sort of X, sort of X in term_i)

and the unification degree is ``min(beta1, beta2)``.  Classes whose members
are all top-sorted contribute nothing (degree 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import SignatureMismatch, SortLattice, TOP
from .normalize import Inconsistent, UnionFind, normalize
from .terms import (
    Clause,
    EqualityConstraint,
    FeatureConstraint,
    SortConstraint,
    Term,
    assert_normal,
    check_normal,
    clause_to_term,
    fresh_tags,
    rename_term,
    term_sorts,
    term_tags,
    term_to_clause,
)
from .graphs import graph_equivalent, term_to_graph


@dataclass
class UnifyResult:
    """Outcome of unifying two terms.

    ``unifier`` is None exactly when the terms are incompatible (bottom);
    then every beta is 1.  ``tag_classes`` maps each fresh representative to
    the original tags it stands for (after collision renaming of the second
    term, whose renames are listed in ``renamed``).
    """

    unifier: Term | None
    beta1: float
    beta2: float
    beta: float
    tag_classes: dict[str, tuple[str, ...]]
    renamed: dict[str, str]

    @property
    def is_bottom(self) -> bool:
        return self.unifier is None


def _disjoint_rename(t1: Term, t2: Term) -> tuple[Term, dict[str, str]]:
    tags1 = set(term_tags(t1))
    tags2 = term_tags(t2)
    clash = [tag for tag in tags2 if tag in tags1]
    if not clash:
        return t2, {}
    taken = tags1 | set(tags2)
    mapping: dict[str, str] = {}
    for tag in clash:
        candidate = tag
        while candidate in taken:
            candidate = candidate + "_"
        mapping[tag] = candidate
        taken.add(candidate)
    return rename_term(t2, mapping), mapping


def _term_constraints(t: Term) -> list:
    """Constraint form in emission order, every tag explicitly sorted."""
    return list(term_to_clause(t).constraints)


def unify(t1: Term, t2: Term, lattice: SortLattice) -> UnifyResult:
    """Unify two normal terms over a sort lattice."""
    for t in (t1, t2):
        problems = [p for p in check_normal(t, lattice.graph) if p.startswith("unknown")]
        if problems:
            raise SignatureMismatch("; ".join(problems))
        assert_normal(t)

    t2r, renamed = _disjoint_rename(t1, t2)
    constraints = _term_constraints(t1) + _term_constraints(t2r)
    constraints.append(EqualityConstraint(t1.tag, t2r.tag))
    combined = Clause(tuple(constraints), root=t1.tag)

    nf = normalize(combined, lattice)
    if isinstance(nf, Inconsistent):
        return UnifyResult(
            unifier=None, beta1=1.0, beta2=1.0, beta=1.0, tag_classes={}, renamed=renamed
        )

    # Partition of all tags (singletons included), fresh representatives in
    # first-encounter order of the combined clause.
    uf = UnionFind()
    tag_order = combined.tags()
    for tag in tag_order:
        uf.add(tag)
    for rep, member in nf.equalities:
        uf.union(rep, member)

    all_tags = set(tag_order)
    fresh = fresh_tags(all_tags, prefix="_Z")
    class_name: dict[str, str] = {}
    tag_classes: dict[str, tuple[str, ...]] = {}
    members_by_root: dict[str, list[str]] = {}
    for tag in tag_order:
        members_by_root.setdefault(uf.find(tag), []).append(tag)
    for tag in tag_order:
        root = uf.find(tag)
        if root not in class_name:
            name = next(fresh)
            class_name[root] = name
            tag_classes[name] = tuple(members_by_root[root])

    def z(tag: str) -> str:
        return class_name[uf.find(tag)]

    class_sort: dict[str, str] = {}
    renamed_constraints = []
    for c in nf.solved.constraints:
        if isinstance(c, SortConstraint):
            class_sort[z(c.tag)] = c.sort
            renamed_constraints.append(SortConstraint(z(c.tag), c.sort))
        else:
            assert isinstance(c, FeatureConstraint)
            renamed_constraints.append(FeatureConstraint(z(c.tag), c.feature, z(c.target)))
    for name in tag_classes:
        if name not in class_sort:
            class_sort[name] = TOP
            renamed_constraints.append(SortConstraint(name, TOP))

    root = z(t1.tag)
    unifier = clause_to_term(Clause(tuple(renamed_constraints), root=root))

    def beta_against(t: Term, rename: dict[str, str]) -> float:
        beta = 1.0
        for tag, sort in term_sorts(t).items():
            zsort = class_sort[z(rename.get(tag, tag))]
            d = lattice.degree(zsort, sort)
            if d < beta:
                beta = d
        return beta

    beta1 = beta_against(t1, {})
    beta2 = beta_against(t2, renamed)
    return UnifyResult(
        unifier=unifier,
        beta1=beta1,
        beta2=beta2,
        beta=min(beta1, beta2),
        tag_classes=tag_classes,
        renamed=renamed,
    )


def mutual_subsumption_via_unify(
    t1: Term, t2: Term, lattice: SortLattice
) -> tuple[int, float] | None:
    """Compare two terms through their unifier.

    Returns (index of the more specific term, unification degree) when the
    unifier is equivalent to one input (index 1 wins ties, i.e. equivalent
    terms report as 1), or None when the terms are incomparable or
    incompatible.
    """
    result = unify(t1, t2, lattice)
    if result.is_bottom:
        return None
    assert result.unifier is not None
    gu = term_to_graph(result.unifier)
    if graph_equivalent(gu, term_to_graph(t1)):
        return 1, result.beta
    if graph_equivalent(gu, term_to_graph(t2)):
        return 2, result.beta
    return None
