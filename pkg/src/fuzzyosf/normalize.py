"""Constraint normalization: rewriting clauses to solved form.

Four rewrite rules drive a clause to either a solved form (per tag at most
one sort constraint, at most one value per feature, no equalities) or an
explicit inconsistency:

* sort intersection — two sorts on one tag collapse to their GLB;
* inconsistent sort — a bot-sorted tag collapses the whole clause;
* feature functionality — two values for one feature become an equality;
* tag elimination — an equality substitutes one tag for the other everywhere
  else (applicable only when the tags differ).

The production engine (:func:`normalize`) is a deterministic union-find
strategy: equalities merge eagerly, feature merges queue behind them, sort
intersections fold as constraints land on a class.  A small-step engine
(:func:`normalize_small_step`) applies one rule instance at a time in a
seedable random order; it exists so tests can check that every order reaches
the same normal form, and it is not the production path.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Union

from .lattice import BOT, SortLattice
from .terms import (
    Clause,
    Constraint,
    EqualityConstraint,
    FeatureConstraint,
    SortConstraint,
)


class InconsistentInput(ValueError):
    """Raised when a solved part is demanded from an inconsistent clause."""


@dataclass
class Inconsistent:
    """Normalization collapsed the clause; ``tag`` is the first witness."""

    tag: str
    trace: list[str] = field(default_factory=list)


@dataclass
class Normalized:
    """Solved constraints plus the equality bindings that were eliminated."""

    solved: Clause
    equalities: tuple[tuple[str, str], ...]  # (representative, member) pairs
    trace: list[str] = field(default_factory=list)


NormalForm = Union[Inconsistent, Normalized]


def solved_part(nf: NormalForm) -> Clause:
    """The solved clause of a normal form; raises on inconsistency."""
    if isinstance(nf, Inconsistent):
        raise InconsistentInput(f"clause is inconsistent (witness tag {nf.tag})")
    return nf.solved


class UnionFind:
    """Dict-based disjoint sets: path compression, union by rank.

    On equal rank the first argument's root wins, which keeps representative
    choice deterministic under insertion order.
    """

    def __init__(self):
        self.parent: dict[str, str] = {}
        self.rank: dict[str, int] = {}

    def add(self, x: str) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.rank[x] = 0

    def find(self, x: str) -> str:
        self.add(x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: str, y: str) -> str:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return rx
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1
        return rx

    def groups(self) -> dict[str, list[str]]:
        """Members per representative, in insertion order."""
        out: dict[str, list[str]] = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


class _Collapse(Exception):
    def __init__(self, tag: str):
        self.tag = tag


def normalize(clause: Clause, lattice: SortLattice, trace: bool = False) -> NormalForm:
    """Drive a clause to solved form (or detect inconsistency) in near-linear time.

    Inconsistency is a value, not an error.  The solved part lists sort
    constraints first, then feature constraints, each in first-occurrence
    order of the input; equalities reproduce the union-find partition as
    (representative, member) pairs.
    """
    uf = UnionFind()
    tag_order: list[str] = clause.tags()
    for tag in tag_order:
        uf.add(tag)

    sorts: dict[str, str] = {}
    feats: dict[str, dict[str, str]] = {}
    log: list[str] = []
    pending: deque[tuple[str, str]] = deque()

    def note(msg: str) -> None:
        if trace:
            log.append(msg)

    def add_sort(rep: str, sort: str) -> None:
        cur = sorts.get(rep)
        if cur is None:
            if sort == BOT:
                note(f"inconsistent-sort: {rep} is {BOT}")
                raise _Collapse(rep)
            sorts[rep] = sort
            return
        meet = lattice.glb(cur, sort)
        note(f"sort-intersection: {rep} : glb({cur}, {sort}) = {meet}")
        if meet == BOT:
            note(f"inconsistent-sort: {rep} is {BOT}")
            raise _Collapse(rep)
        sorts[rep] = meet

    def add_feat(rep: str, feature: str, target: str) -> None:
        bucket = feats.setdefault(rep, {})
        existing = bucket.get(feature)
        if existing is None:
            bucket[feature] = target
            return
        if uf.find(existing) != uf.find(target):
            note(f"feature-functionality: {rep}.{feature} forces {existing} = {target}")
            pending.append((existing, target))

    def merge(x: str, y: str) -> None:
        rx, ry = uf.find(x), uf.find(y)
        if rx == ry:
            return
        winner = uf.union(rx, ry)
        loser = ry if winner == rx else rx
        note(f"tag-elimination: {loser} -> {winner}")
        lost_sort = sorts.pop(loser, None)
        if lost_sort is not None:
            add_sort(winner, lost_sort)
        lost_feats = feats.pop(loser, None)
        if lost_feats is not None:
            for feature, target in lost_feats.items():
                add_feat(winner, feature, target)

    try:
        for c in clause.constraints:
            if isinstance(c, SortConstraint):
                add_sort(uf.find(c.tag), c.sort)
            elif isinstance(c, FeatureConstraint):
                add_feat(uf.find(c.tag), c.feature, c.target)
            else:
                pending.append((c.left, c.right))
            while pending:
                merge(*pending.popleft())
    except _Collapse as stop:
        return Inconsistent(tag=stop.tag, trace=log)

    rep_order: list[str] = []
    seen: set[str] = set()
    for tag in tag_order:
        rep = uf.find(tag)
        if rep not in seen:
            seen.add(rep)
            rep_order.append(rep)

    constraints: list[Constraint] = []
    for rep in rep_order:
        if rep in sorts:
            constraints.append(SortConstraint(rep, sorts[rep]))
    for rep in rep_order:
        for feature, target in feats.get(rep, {}).items():
            constraints.append(FeatureConstraint(rep, feature, uf.find(target)))

    members_by_rep: dict[str, list[str]] = {}
    for tag in tag_order:
        members_by_rep.setdefault(uf.find(tag), []).append(tag)
    equalities: list[tuple[str, str]] = []
    for rep in rep_order:
        for tag in members_by_rep.get(rep, ()):
            if tag != rep:
                equalities.append((rep, tag))

    root = uf.find(clause.root) if clause.root is not None else None
    return Normalized(
        solved=Clause(tuple(constraints), root=root),
        equalities=tuple(equalities),
        trace=log,
    )


# -- small-step engine (test instrumentation) --------------------------------


def step_bound(clause: Clause) -> int:
    """Upper bound on small-step rule applications: |constraints| + |tags|^2."""
    return len(clause.constraints) + len(clause.tags()) ** 2


def normalize_small_step(
    clause: Clause,
    lattice: SortLattice,
    rng: random.Random | None = None,
    max_steps: int | None = None,
) -> tuple[NormalForm, int]:
    """Apply one applicable rule instance at a time until none remains.

    ``rng`` picks the instance uniformly at random (first instance when
    None).  Returns the normal form and the number of steps taken; raises
    RuntimeError if ``max_steps`` (default: :func:`step_bound`) is exceeded,
    which would falsify the termination bound.
    """
    state: list[Constraint] = list(clause.constraints)
    limit = step_bound(clause) if max_steps is None else max_steps
    steps = 0

    def instances() -> list[tuple[str, tuple]]:
        found: list[tuple[str, tuple]] = []
        for i, c in enumerate(state):
            if isinstance(c, SortConstraint) and c.sort == BOT and len(state) > 1:
                found.append(("inconsistent-sort", (i,)))
        for i, c in enumerate(state):
            if isinstance(c, EqualityConstraint) and c.left != c.right:
                occurs = any(
                    _mentions(other, c.right) for k, other in enumerate(state) if k != i
                )
                if occurs:
                    found.append(("tag-elimination", (i,)))
        by_key: dict[tuple[str, str], list[int]] = {}
        for i, c in enumerate(state):
            if isinstance(c, FeatureConstraint):
                by_key.setdefault((c.tag, c.feature), []).append(i)
        for key, idxs in by_key.items():
            if len(idxs) > 1:
                found.append(("feature-functionality", (idxs[0], idxs[1])))
        by_tag: dict[str, list[int]] = {}
        for i, c in enumerate(state):
            if isinstance(c, SortConstraint):
                by_tag.setdefault(c.tag, []).append(i)
        for tag, idxs in by_tag.items():
            if len(idxs) > 1:
                found.append(("sort-intersection", (idxs[0], idxs[1])))
        return found

    while True:
        found = instances()
        if not found:
            break
        rule, where = found[0] if rng is None else rng.choice(found)
        steps += 1
        if steps > limit:
            raise RuntimeError(
                f"normalization exceeded its step bound ({limit}) on: {clause}"
            )
        if rule == "inconsistent-sort":
            (i,) = where
            state = [state[i]]
        elif rule == "tag-elimination":
            (i,) = where
            eq = state[i]
            assert isinstance(eq, EqualityConstraint)
            state = [
                c if k == i else _substitute(c, eq.right, eq.left)
                for k, c in enumerate(state)
            ]
        elif rule == "feature-functionality":
            i, j = where
            first, second = state[i], state[j]
            assert isinstance(first, FeatureConstraint) and isinstance(second, FeatureConstraint)
            state = [c for k, c in enumerate(state) if k != j]
            state.append(EqualityConstraint(first.target, second.target))
        else:  # sort-intersection
            i, j = where
            a, b = state[i], state[j]
            assert isinstance(a, SortConstraint) and isinstance(b, SortConstraint)
            meet = lattice.glb(a.sort, b.sort)
            state = [c for k, c in enumerate(state) if k != j]
            state[i] = SortConstraint(a.tag, meet)

    bot_tags = [c.tag for c in state if isinstance(c, SortConstraint) and c.sort == BOT]
    if bot_tags:
        return Inconsistent(tag=bot_tags[0]), steps

    solved = [c for c in state if not isinstance(c, EqualityConstraint)]
    equalities = tuple(
        (c.left, c.right) for c in state if isinstance(c, EqualityConstraint)
    )
    return (
        Normalized(solved=Clause(tuple(solved), root=clause.root), equalities=equalities),
        steps,
    )


def _mentions(c: Constraint, tag: str) -> bool:
    if isinstance(c, SortConstraint):
        return c.tag == tag
    if isinstance(c, FeatureConstraint):
        return c.tag == tag or c.target == tag
    return c.left == tag or c.right == tag


def _substitute(c: Constraint, old: str, new: str) -> Constraint:
    if isinstance(c, SortConstraint):
        return SortConstraint(new if c.tag == old else c.tag, c.sort)
    if isinstance(c, FeatureConstraint):
        return FeatureConstraint(
            new if c.tag == old else c.tag,
            c.feature,
            new if c.target == old else c.target,
        )
    return EqualityConstraint(
        new if c.left == old else c.left,
        new if c.right == old else c.right,
    )


def canonical_normal_form(
    nf: NormalForm,
) -> tuple[str, frozenset, frozenset] | tuple[str]:
    """Rename-independent fingerprint of a normal form, for confluence checks.

    Tags are canonicalized to the lexicographically least member of their
    equality class; the solved constraints become a set, the partition a set
    of sets.  Two normalization runs agree up to tag renaming iff their
    fingerprints are equal.
    """
    if isinstance(nf, Inconsistent):
        return ("inconsistent",)
    uf = UnionFind()
    for rep, member in nf.equalities:
        uf.union(rep, member)
    for c in nf.solved.constraints:
        if isinstance(c, SortConstraint):
            uf.add(c.tag)
        elif isinstance(c, FeatureConstraint):
            uf.add(c.tag)
            uf.add(c.target)

    def canon(tag: str) -> str:
        group = [t for t in uf.parent if uf.find(t) == uf.find(tag)]
        return min(group)

    constraints = []
    for c in nf.solved.constraints:
        if isinstance(c, SortConstraint):
            constraints.append(("sort", canon(c.tag), c.sort))
        elif isinstance(c, FeatureConstraint):
            constraints.append(("feat", canon(c.tag), c.feature, canon(c.target)))
    partition = frozenset(
        group
        for rep, members in _partition_of(nf.equalities).items()
        if len(group := frozenset(members + [rep])) > 1
    )
    return ("normalized", frozenset(constraints), partition)


def _partition_of(equalities: list[tuple[str, str]]) -> dict[str, list[str]]:
    uf = UnionFind()
    for a, b in equalities:
        uf.union(a, b)
    out: dict[str, list[str]] = {}
    for tag in uf.parent:
        out.setdefault(uf.find(tag), []).append(tag)
    return {rep: [t for t in members if t != rep] for rep, members in out.items()}
