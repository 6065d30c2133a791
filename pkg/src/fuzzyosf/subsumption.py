"""Term subsumption: witness maps and graded degrees.

``t0`` is subsumed by ``t1`` (t0 is the more specific term) when there is a
tag mapping ``h`` from t1's tags into t0's that sends root to root and
commutes with every feature edge of t1.  The crisp check demands the edges
exist in t0; the graded check first completes t0 with fresh top-sorted nodes
at every position t1 demands (they cost nothing: degree of top below any
sort s is 0 unless s is top), then takes

    degree = min over tags X of t1 of  degree(sort_t0(h(X)), sort_t1(X))

with min over no tags = 1.  A shared-tag (coreference) demand in t1 that t0
cannot honor admits no witness at all: the graded degree is 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import SignatureMismatch, SortGraph, SortLattice, TOP
from .terms import Term, assert_normal, check_normal, fresh_tags
from .graphs import OsfGraph, term_to_graph


@dataclass
class SubsumptionWitness:
    """A witness map with its graded degree and the per-tag contributions.

    ``mapping`` sends each tag of the more general term to the tag of the
    more specific (possibly completed) term it lands on; ``per_tag`` records
    (specific sort, general sort, degree) per mapped tag.
    """

    mapping: dict[str, str]
    degree: float
    per_tag: dict[str, tuple[str, str, float]]


def _signature_check(t: Term, graph: SortGraph) -> None:
    problems = [p for p in check_normal(t, graph) if p.startswith("unknown")]
    if problems:
        raise SignatureMismatch("; ".join(problems))


def _find_witness(
    g0: OsfGraph, g1: OsfGraph, complete: bool
) -> tuple[dict[str, str], dict[str, str], dict[str, tuple[tuple[str, str], ...]]] | None:
    """Map g1's nodes into (possibly completed) g0; None if impossible.

    Returns (mapping, completed sorts, completed out-edges); the sort and
    edge dicts extend g0's when ``complete`` is set and fresh top nodes were
    materialized.
    """
    sorts0 = dict(g0.sorts)
    out0 = {n: list(e) for n, e in g0.out.items()}
    fresh = fresh_tags(set(sorts0), prefix="_T")

    mapping: dict[str, str] = {g1.root: g0.root}
    queue = [g1.root]
    while queue:
        n1 = queue.pop()
        n0 = mapping[n1]
        for f, m1 in g1.out.get(n1, ()):
            m0 = None
            for g, target in out0.get(n0, ()):
                if g == f:
                    m0 = target
                    break
            if m0 is None:
                if not complete:
                    return None
                m0 = next(fresh)
                sorts0[m0] = TOP
                out0[m0] = []
                out0.setdefault(n0, []).append((f, m0))
            known = mapping.get(m1)
            if known is None:
                mapping[m1] = m0
                queue.append(m1)
            elif known != m0:
                return None
    return mapping, sorts0, {n: tuple(e) for n, e in out0.items()}


def _witness_of(
    t0: Term, t1: Term, lattice: SortLattice, complete: bool
) -> SubsumptionWitness | None:
    _signature_check(t0, lattice.graph)
    _signature_check(t1, lattice.graph)
    assert_normal(t0)
    assert_normal(t1)
    g0 = term_to_graph(t0)
    g1 = term_to_graph(t1)
    found = _find_witness(g0, g1, complete)
    if found is None:
        return None
    mapping, sorts0, _ = found
    per_tag: dict[str, tuple[str, str, float]] = {}
    degree = 1.0
    for n1 in g1.sorts:
        s0 = sorts0[mapping[n1]]
        s1 = g1.sorts[n1]
        d = lattice.degree(s0, s1)
        per_tag[n1] = (s0, s1, d)
        if d < degree:
            degree = d
    return SubsumptionWitness(mapping=mapping, degree=degree, per_tag=per_tag)


def syntactic_subsumes(t0: Term, t1: Term, lattice: SortLattice) -> SubsumptionWitness | None:
    """Witness that t0 is (crisply shaped) below t1 — no completion, no missing edges."""
    return _witness_of(t0, t1, lattice, complete=False)


def subsumption_witness(t0: Term, t1: Term, lattice: SortLattice) -> SubsumptionWitness | None:
    """Witness after top-completion of t0; None only on a coreference conflict."""
    return _witness_of(t0, t1, lattice, complete=True)


def fuzzy_subsumption_degree(t0: Term, t1: Term, lattice: SortLattice) -> float:
    """Degree to which t0 is subsumed by t1 (0 when no witness exists)."""
    w = subsumption_witness(t0, t1, lattice)
    return 0.0 if w is None else w.degree


def crisp_subsumes(t0: Term, t1: Term, lattice: SortLattice) -> bool:
    """Support-level subsumption: holds iff the graded degree is positive."""
    return fuzzy_subsumption_degree(t0, t1, lattice) > 0.0
