"""Finite graded models: interpretations, denotation, morphisms, and the
self-check harness.

An interpretation gives every sort a graded membership function over a
finite domain and every feature a total function on that domain.  Validity:

1. top holds of everything at 1 and bot of nothing;
2. membership respects graded subsumption — being s0 to degree d forces
   being s1 to at least ``min(d, degree(s0, s1))``;
3. jointly positive sorts have a positive GLB (memberships are consistent
   with the lattice's meets);
4. features are total.

Terms denote graded sets: the degree of ``d`` under an assignment is the
min of the coreference checks, the sort memberships, and the feature-image
chain.  Clause satisfaction thresholds the same data.  Structure-preserving
maps between models (graded morphisms) carry solutions from one model to
another; the harness checks all of these interlocking claims on both fixed
sample models and randomized ones.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .lattice import BOT, TOP, NotALattice, SortGraph, SortLattice
from .terms import (
    Clause,
    EqualityConstraint,
    FeatureConstraint,
    SortConstraint,
    Term,
    term_to_clause,
)
from .normalize import Inconsistent, normalize
from .graphs import OsfGraph, clause_structure, term_to_graph, graph_to_term
from .subsumption import fuzzy_subsumption_degree


class Interpretation:
    """A finite graded model: elements, sort membership table, total features.

    ``sort_table`` holds explicit degrees per (sort, element); lookups
    default to 0, except top (always 1) and bot (always 0).  ``features``
    maps (feature, element) to an element and must be total over
    ``feature_names``.
    """

    def __init__(
        self,
        elements: list[str],
        sort_table: dict[tuple[str, str], float],
        features: dict[tuple[str, str], str],
        feature_names: list[str] | None = None,
    ):
        self.elements: list[str] = list(elements)
        self.sort_table: dict[tuple[str, str], float] = dict(sort_table)
        self.features: dict[tuple[str, str], str] = dict(features)
        if feature_names is None:
            seen: dict[str, None] = {}
            for f, _ in self.features:
                seen.setdefault(f, None)
            feature_names = list(seen)
        self.feature_names: list[str] = list(feature_names)

    def sort_degree(self, sort: str, element) -> float:
        if sort == TOP:
            return 1.0
        if sort == BOT:
            return 0.0
        return self.sort_table.get((sort, element), 0.0)

    def feature_image(self, feature: str, element):
        return self.features[(feature, element)]

    def is_trivial(self, element) -> bool:
        return False


def validate_interpretation(model: Interpretation, lattice: SortLattice) -> list[str]:
    """All validity violations, exhaustively (empty list means valid)."""
    problems: list[str] = []
    if not model.elements:
        problems.append("domain is empty")
    domain = set(model.elements)
    sorts = lattice.graph.sorts

    for (s, e), d in model.sort_table.items():
        if s not in lattice.graph._index:
            problems.append(f"unknown sort in table: {s}")
            continue
        if e not in domain:
            problems.append(f"degree given for unknown element: {e}")
            continue
        if not 0.0 <= d <= 1.0:
            problems.append(f"degree out of range: {s}({e}) = {d!r}")
        if s == TOP and d != 1.0:
            problems.append(f"top must hold of {e} at 1, not {d:g}")
        if s == BOT and d != 0.0:
            problems.append(f"bot must hold of {e} at 0, not {d:g}")

    for f in model.feature_names:
        for e in model.elements:
            img = model.features.get((f, e))
            if img is None:
                problems.append(f"feature {f} is undefined at {e}")
            elif img not in domain:
                problems.append(f"feature {f} maps {e} outside the domain: {img}")
    for (f, e) in model.features:
        if f not in model.feature_names:
            problems.append(f"feature value given for undeclared feature: {f}")
        elif e not in domain:
            problems.append(f"feature {f} defined at unknown element: {e}")

    if problems:
        return problems

    # Graded-subsumption compatibility (condition on every sort pair).
    for e in model.elements:
        for s0 in sorts:
            d0 = model.sort_degree(s0, e)
            if d0 <= 0.0:
                continue
            for s1 in sorts:
                bound = min(d0, lattice.degree(s0, s1))
                if bound > model.sort_degree(s1, e):
                    problems.append(
                        f"membership gap: {s0}({e})={d0:g} and "
                        f"degree({s0},{s1})={lattice.degree(s0, s1):g} force "
                        f"{s1}({e}) >= {bound:g}, found {model.sort_degree(s1, e):g}"
                    )
    # Meet consistency: jointly positive sorts need a positive meet.
    for e in model.elements:
        positive = [s for s in sorts if model.sort_degree(s, e) > 0.0]
        for i, s0 in enumerate(positive):
            for s1 in positive[i + 1 :]:
                try:
                    meet = lattice.glb(s0, s1)
                except NotALattice as err:
                    problems.append(str(err))
                    continue
                if model.sort_degree(meet, e) <= 0.0:
                    problems.append(
                        f"meet gap: {s0} and {s1} both hold of {e} but "
                        f"glb {meet} does not"
                    )
    return problems


# -- interpretation text format ----------------------------------------------


def load_interpretation(text: str, graph: SortGraph) -> Interpretation:
    """Parse the line-oriented interpretation format.

    Lines: ``elem <name>...``, ``deg <sort> <elem> <degree>``,
    ``fun <feature> <elem> <elem>`` and the default form
    ``fun <feature> * <elem>`` (image for every element not given one).
    Elements are declared before they are used; unstated degrees are 0;
    top/bot rows are implied and cannot be stated.
    """
    elements: dict[str, None] = {}
    sort_table: dict[tuple[str, str], float] = {}
    explicit: dict[tuple[str, str], str] = {}
    defaults: dict[str, str] = {}

    def fail(lineno: int, msg: str) -> None:
        raise ValueError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "elem":
            if len(parts) < 2:
                fail(lineno, "expected: elem <name>...")
            for name in parts[1:]:
                elements[name] = None
        elif kind == "deg":
            if len(parts) != 4:
                fail(lineno, "expected: deg <sort> <elem> <degree>")
            if not graph.has_sort(parts[1]):
                fail(lineno, f"unknown sort: {parts[1]}")
            if parts[1] in (BOT, TOP):
                fail(lineno, f"{parts[1]} rows are implied and cannot be stated")
            if parts[2] not in elements:
                fail(lineno, f"undeclared element: {parts[2]}")
            try:
                d = float(parts[3])
            except ValueError:
                fail(lineno, f"bad degree: {parts[3]!r}")
            if not 0.0 <= d <= 1.0:
                fail(lineno, f"degree must lie in [0, 1]: {parts[3]}")
            sort_table[(parts[1], parts[2])] = d
        elif kind == "fun":
            if len(parts) != 4:
                fail(lineno, "expected: fun <feature> <elem|*> <elem>")
            if not graph.has_feature(parts[1]):
                fail(lineno, f"unknown feature: {parts[1]}")
            if parts[2] != "*" and parts[2] not in elements:
                fail(lineno, f"undeclared element: {parts[2]}")
            if parts[3] not in elements:
                fail(lineno, f"undeclared element: {parts[3]}")
            if parts[2] == "*":
                defaults[parts[1]] = parts[3]
            else:
                explicit[(parts[1], parts[2])] = parts[3]
        else:
            fail(lineno, f"unknown directive: {kind!r}")

    features: dict[tuple[str, str], str] = {}
    for f in graph.features:
        for e in elements:
            img = explicit.get((f, e), defaults.get(f))
            if img is not None:
                features[(f, e)] = img
    for key, img in explicit.items():
        features[key] = img
    return Interpretation(
        elements=list(elements),
        sort_table=sort_table,
        features=features,
        feature_names=list(graph.features),
    )


# -- term-shaped models --------------------------------------------------------


def _trivial_key(feature: str, parent) -> tuple:
    return ("~", feature, parent)


class CanonicalAlgebra:
    """The model a solved clause (or graph) freely generates.

    Elements are the clause's tags; a tag belongs to sort s to the degree
    its label is graded below s.  Features are total: a missing edge yields
    a trivial element — a nested ``("~", feature, parent)`` key — that
    belongs only to top and never constrains anything.
    """

    def __init__(self, sorts: dict[str, str], out: dict[str, tuple], lattice: SortLattice):
        self.node_sorts = dict(sorts)
        self.node_out = {n: tuple(e) for n, e in out.items()}
        self.lattice = lattice
        self.elements: list[str] = list(self.node_sorts)
        self.feature_names: list[str] = list(lattice.graph.features)

    @classmethod
    def from_graph(cls, g: OsfGraph, lattice: SortLattice) -> "CanonicalAlgebra":
        return cls(g.sorts, g.out, lattice)

    @classmethod
    def from_clause(cls, clause: Clause, lattice: SortLattice) -> "CanonicalAlgebra":
        sorts, out = clause_structure(clause)
        return cls(sorts, {n: tuple(v) for n, v in out.items()}, lattice)

    def sort_degree(self, sort: str, element) -> float:
        if isinstance(element, tuple):
            return 1.0 if sort == TOP else 0.0
        return self.lattice.degree(self.node_sorts[element], sort)

    def feature_image(self, feature: str, element):
        if isinstance(element, tuple):
            return _trivial_key(feature, element)
        for f, target in self.node_out.get(element, ()):
            if f == feature:
                return target
        return _trivial_key(feature, element)

    def is_trivial(self, element) -> bool:
        return isinstance(element, tuple)


# -- denotation and satisfaction -----------------------------------------------


def denote(t: Term, model, alpha: dict[str, object], at=None) -> float:
    """Degree of an element under a total assignment (default: the root's image)."""
    try:
        d = alpha[t.tag] if at is None else at
    except KeyError:
        raise ValueError(f"assignment missing tag {t.tag}") from None
    value = 1.0
    stack = [(t, d)]
    while stack:
        node, d = stack.pop()
        bound = alpha.get(node.tag)
        if bound is None:
            raise ValueError(f"assignment missing tag {node.tag}")
        if bound != d:
            return 0.0
        sd = model.sort_degree(node.sort, d)
        if sd < value:
            value = sd
        if value == 0.0:
            return 0.0
        for f, child in node.args:
            stack.append((child, model.feature_image(f, d)))
    return value


def best_denotation(t: Term, model, element) -> float:
    """Max over assignments of the element's degree — computed by forcing.

    Feature images force every tag's assignment; a tag demanded at two
    different elements admits no assignment, so the degree is 0.
    """
    forced: dict[str, object] = {}
    value = 1.0
    stack = [(t, element)]
    while stack:
        node, d = stack.pop()
        prev = forced.get(node.tag)
        if prev is not None and prev != d:
            return 0.0
        forced[node.tag] = d
        sd = model.sort_degree(node.sort, d)
        if sd < value:
            value = sd
        if value == 0.0:
            return 0.0
        for f, child in node.args:
            stack.append((child, model.feature_image(f, d)))
    return value


def satisfies(clause: Clause, model, alpha: dict[str, object], beta: float) -> bool:
    """Threshold satisfaction; every clause holds at degree 0 or below."""
    if beta <= 0.0:
        return True
    return satisfaction_degree(clause, model, alpha) >= beta


def satisfaction_degree(clause: Clause, model, alpha: dict[str, object]) -> float:
    """The largest degree at which the assignment satisfies the clause."""
    value = 1.0
    for c in clause.constraints:
        if isinstance(c, SortConstraint):
            d = model.sort_degree(c.sort, alpha[c.tag])
            if d < value:
                value = d
        elif isinstance(c, EqualityConstraint):
            if alpha[c.left] != alpha[c.right]:
                return 0.0
        else:
            if model.feature_image(c.feature, alpha[c.tag]) != alpha[c.target]:
                return 0.0
        if value == 0.0:
            return 0.0
    return value


def generated_subalgebra(model: Interpretation, seeds: list[str]) -> Interpretation:
    """The least feature-closed submodel containing the seeds."""
    kept: dict[str, None] = {}
    queue = list(seeds)
    while queue:
        e = queue.pop(0)
        if e in kept:
            continue
        kept[e] = None
        for f in model.feature_names:
            queue.append(model.feature_image(f, e))
    elements = [e for e in model.elements if e in kept]
    sort_table = {
        (s, e): d for (s, e), d in model.sort_table.items() if e in kept
    }
    features = {
        (f, e): img for (f, e), img in model.features.items() if e in kept
    }
    return Interpretation(
        elements=elements,
        sort_table=sort_table,
        features=features,
        feature_names=list(model.feature_names),
    )


# -- graded morphisms -----------------------------------------------------------


@dataclass
class Morphism:
    """A feature-commuting map between models and the best degree it works at.

    ``max_beta`` is 1 when no sort membership drops across the map, 0 when
    some membership drops to 0 (the map exists but works at no positive
    degree), otherwise the least degree it drops to.
    """

    mapping: dict
    max_beta: float


def morphism_max_beta(model_from, model_to, mapping, lattice: SortLattice) -> float:
    """Best degree for a given feature-commuting map (1 if nothing drops)."""
    worst = 1.0
    for e, img in mapping.items():
        if model_from.is_trivial(e):
            continue
        for s in lattice.graph.sorts:
            fd = model_from.sort_degree(s, e)
            td = model_to.sort_degree(s, img)
            if fd > td and td < worst:
                worst = td
    return worst


def find_morphism(
    model_from,
    model_to,
    anchor: tuple,
    lattice: SortLattice,
) -> Morphism | None:
    """The unique graded morphism with ``anchor[0] -> anchor[1]``, if any.

    The map is forced along feature images from the anchor, so it covers the
    subalgebra the anchor generates.  Returns None when the forced images
    conflict (no feature-commuting map exists at all); otherwise the map with
    its best degree, which may be 0.
    """
    d0, d1 = anchor
    mapping: dict = {d0: d1}
    queue = [d0]
    while queue:
        e = queue.pop()
        if model_from.is_trivial(e):
            continue
        img = mapping[e]
        for f in model_from.feature_names:
            e2 = model_from.feature_image(f, e)
            i2 = model_to.feature_image(f, img)
            prev = mapping.get(e2)
            if prev is None:
                mapping[e2] = i2
                queue.append(e2)
            elif prev != i2:
                return None
    return Morphism(mapping=mapping, max_beta=morphism_max_beta(model_from, model_to, mapping, lattice))


def approximation_degree(g0: OsfGraph, g1: OsfGraph, lattice: SortLattice) -> float:
    """Degree to which g0 approximates g1 (g1 construed as the more specific)."""
    return fuzzy_subsumption_degree(graph_to_term(g1), graph_to_term(g0), lattice)


# -- random model generators (used by the harness) -------------------------------


DEGREE_PALETTE = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]


def random_lattice(rng: random.Random, max_sorts: int, max_features: int) -> SortLattice:
    """A random valid lattice: a forest of sorts, sometimes with extra edges.

    Forests are always lattices (incomparable sorts meet at bot); extra
    cross edges are kept only if the exhaustive GLB check still passes.
    """
    n = rng.randint(1, max_sorts)
    names = [f"s{i}" for i in range(n)]
    edges: list[tuple[str, str, float]] = []
    for i in range(1, n):
        if rng.random() < 0.8:
            parent = names[rng.randrange(i)]
            edges.append((names[i], parent, rng.choice(DEGREE_PALETTE)))
    features = [f"f{i}" for i in range(rng.randint(1, max_features))]
    graph = SortGraph(names, features, edges)
    lattice = SortLattice(graph).validate()

    extras = rng.randint(0, 2)
    for _ in range(extras):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        if i < j:
            i, j = j, i
        candidate = edges + [(names[i], names[j], rng.choice(DEGREE_PALETTE))]
        try:
            trial_graph = SortGraph(names, features, candidate)
            trial = SortLattice(trial_graph).validate()
        except Exception:
            continue
        edges = candidate
        graph, lattice = trial_graph, trial
    return lattice


def random_interpretation(
    rng: random.Random, lattice: SortLattice, max_domain: int
) -> Interpretation:
    """A valid interpretation built from per-element principal sorts.

    Element d gets a principal sort p and a cap c; its membership in s is
    ``min(c, degree(p, s))``.  Graded-subsumption compatibility follows from
    max-min transitivity, and meets stay positive because p lies below every
    sort d belongs to.
    """
    m = rng.randint(1, max_domain)
    elements = [f"d{i}" for i in range(m)]
    sorts = [s for s in lattice.graph.sorts if s != BOT]
    table: dict[tuple[str, str], float] = {}
    for e in elements:
        principal = rng.choice(sorts)
        cap = rng.choice(DEGREE_PALETTE)
        for s in lattice.graph.sorts:
            if s in (TOP, BOT):
                continue
            d = min(cap, lattice.degree(principal, s))
            if d > 0.0:
                table[(s, e)] = d
    features: dict[tuple[str, str], str] = {}
    for f in lattice.graph.features:
        for e in elements:
            features[(f, e)] = rng.choice(elements)
    return Interpretation(
        elements=elements,
        sort_table=table,
        features=features,
        feature_names=list(lattice.graph.features),
    )


def random_repaired_interpretation(
    rng: random.Random, lattice: SortLattice, max_domain: int
) -> Interpretation:
    """A valid interpretation of irregular shape.

    Each element seeds one positively held sort, scatters independent random
    degrees across sorts above it, then a monotone raising pass enforces
    graded-subsumption compatibility.  All positive sorts sit above the seed,
    so every pairwise meet also sits above the seed and the raising pass has
    made it positive — meets stay consistent without any dropping.
    """
    m = rng.randint(1, max_domain)
    elements = [f"d{i}" for i in range(m)]
    plain = [s for s in lattice.graph.sorts if s not in (TOP, BOT)]
    table: dict[tuple[str, str], float] = {}
    for e in elements:
        if not plain:
            break
        seed_sort = rng.choice(plain)
        table[(seed_sort, e)] = rng.choice(DEGREE_PALETTE)
        for s in plain:
            if s != seed_sort and lattice.degree(seed_sort, s) > 0.0 and rng.random() < 0.5:
                table[(s, e)] = rng.choice(DEGREE_PALETTE)

    def get(s: str, e: str) -> float:
        return table.get((s, e), 0.0)

    changed = True
    while changed:
        changed = False
        for e in elements:
            for s0 in plain:
                d0 = get(s0, e)
                if d0 <= 0.0:
                    continue
                for s1 in plain:
                    bound = min(d0, lattice.degree(s0, s1))
                    if bound > get(s1, e):
                        table[(s1, e)] = bound
                        changed = True

    features: dict[tuple[str, str], str] = {}
    for f in lattice.graph.features:
        for e in elements:
            features[(f, e)] = rng.choice(elements)
    return Interpretation(
        elements=elements,
        sort_table=table,
        features=features,
        feature_names=list(lattice.graph.features),
    )


def random_normal_term(rng: random.Random, lattice: SortLattice, max_tags: int) -> Term:
    """A random normal term: tree-shaped with back-references (cycles allowed).

    Bare references only point at tags already introduced, so the term is in
    the canonical presentation where the structured occurrence comes first.
    """
    sorts = [s for s in lattice.graph.sorts if s != BOT]
    features = lattice.graph.features
    placed: list[str] = []
    budget = rng.randint(1, max_tags)

    def gen(depth: int) -> Term:
        nonlocal budget
        tag = f"T{len(placed)}"
        placed.append(tag)
        budget -= 1
        args: list[tuple[str, Term]] = []
        k = rng.randint(0, len(features))
        for f in rng.sample(features, k):
            if budget > 0 and depth < max_tags and rng.random() < 0.6:
                args.append((f, gen(depth + 1)))
            elif rng.random() < 0.5:
                args.append((f, Term(rng.choice(placed), TOP, ())))
        return Term(tag, rng.choice(sorts), tuple(args))

    return gen(0)


def random_clause(rng: random.Random, lattice: SortLattice, max_tags: int) -> Clause:
    """An unstructured random clause: duplicate sorts/features and equalities."""
    n = rng.randint(1, max_tags)
    tags = [f"X{i}" for i in range(n)]
    sorts = [s for s in lattice.graph.sorts if s != BOT]
    features = lattice.graph.features
    constraints = []
    for _ in range(rng.randint(1, 2 * max_tags)):
        kind = rng.random()
        if kind < 0.45:
            constraints.append(SortConstraint(rng.choice(tags), rng.choice(sorts)))
        elif kind < 0.85:
            constraints.append(
                FeatureConstraint(rng.choice(tags), rng.choice(features), rng.choice(tags))
            )
        else:
            constraints.append(EqualityConstraint(rng.choice(tags), rng.choice(tags)))
    return Clause(tuple(constraints))


# -- the harness ------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class TheoremReport:
    checks: list[CheckResult] = field(default_factory=list)
    seed: int = 0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            if c.passed:
                lines.append(f"[ok]   {c.name} ({c.cases} cases)")
            else:
                lines.append(f"[FAIL] {c.name} ({len(c.failures)} failures / {c.cases} cases)")
                for f in c.failures[:3]:
                    lines.append(f"       {f}")
        verdict = "all checks passed" if self.passed else "CHECKS FAILED"
        lines.append(f"{verdict} (seed {self.seed})")
        return "\n".join(lines)


def _all_assignments(tags: list[str], elements: list[str]):
    """Every total assignment of elements to tags (elements^tags of them)."""
    if not tags:
        yield {}
        return
    for combo in itertools.product(elements, repeat=len(tags)):
        yield dict(zip(tags, combo))


def check_theorems(
    seed: int = 0,
    max_domain: int = 4,
    max_sorts: int = 5,
    max_features: int = 2,
    rounds: int = 40,
) -> TheoremReport:
    """Run every semantic self-check; see the module docstring for the claims."""
    from . import samples

    rng = random.Random(seed)
    report = TheoremReport(seed=seed)

    def check(name: str) -> CheckResult:
        result = CheckResult(name=name)
        report.checks.append(result)
        return result

    movie = samples.movie_lattice()
    interp = samples.movie_interpretation()

    # ---- fixed checks on the sample model --------------------------------

    c = check("sample interpretation is valid")
    c.cases += 1
    problems = validate_interpretation(interp, movie)
    if problems:
        c.failures.append("; ".join(problems))

    c = check("sample denotation degrees")
    t_thriller = Term(
        "X", "thriller", (("directed_by", Term("Y", "director", ())),)
    )
    for element, expected in [
        ("halloween", 0.5),
        ("psycho", 1.0),
        ("hitchcock", 0.0),
        ("null", 0.0),
    ]:
        c.cases += 1
        got = best_denotation(t_thriller, interp, element)
        if got != expected:
            c.failures.append(f"best degree at {element}: {got:g} != {expected:g}")
    c.cases += 1
    alpha = {"X": "halloween", "Y": "carpenter"}
    if denote(t_thriller, interp, alpha) != 0.5:
        c.failures.append("assignment-level degree at halloween is not 0.5")
    # A term demanding the same feature lead to both a director and a string
    # denotes 0 everywhere (the sorts share no positive member).
    t_clash = Term(
        "X",
        "movie",
        (
            ("directed_by", Term("Y", "director", ())),
            ("directed_by", Term("Y2", "string", ())),
        ),
    )
    t_clash_shared = Term(
        "X",
        "movie",
        (
            ("directed_by", Term("Y", "director", ())),
            ("directed_by", Term("Y", "string", ())),
        ),
    )
    for t in (t_clash, t_clash_shared):
        for element in interp.elements:
            c.cases += 1
            if best_denotation(t, interp, element) != 0.0:
                c.failures.append(f"clashing term has positive degree at {element}")

    c = check("sample satisfaction thresholds")
    clause = Clause((SortConstraint("X", "thriller"),))
    for beta, expected in [(0.5, True), (0.6, False), (0.0, True)]:
        c.cases += 1
        got = satisfies(clause, interp, {"X": "halloween"}, beta)
        if got != expected:
            c.failures.append(f"threshold {beta:g}: {got} != {expected}")

    c = check("sample morphism degree")
    c.cases += 1
    canon = CanonicalAlgebra.from_graph(term_to_graph(t_thriller), movie)
    m = find_morphism(canon, interp, ("X", "halloween"), movie)
    if m is None or m.max_beta != 0.5:
        c.failures.append(f"expected max degree 0.5, got {m.max_beta if m else None}")

    c = check("sample generated subalgebra")
    c.cases += 1
    sub = generated_subalgebra(interp, ["halloween"])
    if sub.elements != ["halloween", "carpenter", "halloween_title", "null"]:
        c.failures.append(f"from halloween: {sub.elements}")
    c.cases += 1
    if generated_subalgebra(interp, ["null"]).elements != ["null"]:
        c.failures.append("from null: expected just null")

    c = check("negative control: corrupted model is flagged")
    c.cases += 1
    broken_table = dict(interp.sort_table)
    broken_table[("thriller", "halloween")] = 0.3  # below the slasher-forced 0.5
    broken = Interpretation(
        interp.elements, broken_table, interp.features, interp.feature_names
    )
    if not validate_interpretation(broken, movie):
        c.failures.append("validator accepted a membership gap")

    # ---- randomized checks ------------------------------------------------

    gen_check = check("random interpretations validate")
    deno_check = check("denotation matches satisfaction threshold")
    norm_check = check("normalization preserves solutions on the support")
    canon_check = check("solved clauses hold in their own shape at degree 1")
    extend_check = check("morphisms extend solutions")
    extract_check = check("solutions extract to morphisms")
    via_check = check("denotation equals the anchored morphism degree")
    compose_check = check("morphism composition keeps the min degree")
    sub_check = check("generated subalgebras are transparent")
    final_check = check("principal-sort targets absorb every model")
    approx_check = check("approximation degree agrees across both routes")

    for _ in range(rounds):
        lattice = random_lattice(rng, max_sorts, max_features)
        models = [
            random_interpretation(rng, lattice, max_domain),
            random_repaired_interpretation(rng, lattice, max_domain),
        ]
        for model in models:
            gen_check.cases += 1
            problems = validate_interpretation(model, lattice)
            if problems:
                gen_check.failures.append(problems[0])
                continue

        model = models[rng.randrange(len(models))]

        # Denotation vs satisfaction, exact.
        for _ in range(3):
            t = random_normal_term(rng, lattice, 3)
            phi = term_to_clause(t)
            tags = phi.tags()
            if len(model.elements) ** len(tags) > 200:
                continue
            for alpha in _all_assignments(tags, model.elements):
                deno_check.cases += 1
                lhs = denote(t, model, alpha)
                rhs = satisfaction_degree(phi, model, alpha)
                if lhs != rhs:
                    deno_check.failures.append(
                        f"{t}: assignment {alpha}: {lhs:g} != {rhs:g}"
                    )

        # Normalization preserves solutions (support level).
        for _ in range(2):
            phi = random_clause(rng, lattice, 3)
            tags = phi.tags()
            if len(model.elements) ** len(tags) > 200:
                continue
            nf = normalize(phi, lattice)
            for alpha in _all_assignments(tags, model.elements):
                norm_check.cases += 1
                before = satisfaction_degree(phi, model, alpha) > 0.0
                if isinstance(nf, Inconsistent):
                    after = False
                else:
                    rebuilt = Clause(
                        nf.solved.constraints
                        + tuple(EqualityConstraint(a, b) for a, b in nf.equalities)
                    )
                    after = satisfaction_degree(rebuilt, model, alpha) > 0.0
                if before != after:
                    norm_check.failures.append(
                        f"{phi}: assignment {alpha}: {before} vs {after} after normalization"
                    )

        # A solved clause holds in its canonical shape at degree 1.
        t = random_normal_term(rng, lattice, 4)
        phi = term_to_clause(t)
        canon_check.cases += 1
        canon = CanonicalAlgebra.from_clause(phi, lattice)
        identity = {tag: tag for tag in phi.tags()}
        if satisfaction_degree(phi, canon, identity) != 1.0:
            canon_check.failures.append(f"{t} does not hold in its own shape at 1")

        # Extending and composing solutions through morphisms.
        second = random_interpretation(rng, lattice, max_domain)
        d = rng.choice(model.elements)
        sub = generated_subalgebra(model, [d])
        for d2 in second.elements:
            m = find_morphism(sub, second, (d, d2), lattice)
            if m is None or m.max_beta <= 0.0:
                continue
            t = random_normal_term(rng, lattice, 2)
            phi = term_to_clause(t)
            tags = phi.tags()
            if len(sub.elements) ** len(tags) > 100:
                break
            for alpha in _all_assignments(tags, sub.elements):
                beta = satisfaction_degree(phi, sub, alpha)
                if beta <= 0.0:
                    continue
                extend_check.cases += 1
                carried = {x: m.mapping[e] for x, e in alpha.items()}
                target = min(beta, m.max_beta)
                if not satisfies(phi, second, carried, target):
                    extend_check.failures.append(
                        f"{phi}: solution at {beta:g} did not carry at {target:g}"
                    )
            # Composition: chase a second hop when one exists.
            d3 = rng.choice(second.elements)
            mid = generated_subalgebra(second, [m.mapping[d]])
            m2 = find_morphism(mid, second, (m.mapping[d], d3), lattice)
            if m2 is not None and m2.max_beta > 0.0:
                compose_check.cases += 1
                composed = {
                    e: m2.mapping[img]
                    for e, img in m.mapping.items()
                    if not sub.is_trivial(e) and img in m2.mapping
                }
                got = morphism_max_beta(sub, second, composed, lattice)
                if got < min(m.max_beta, m2.max_beta):
                    compose_check.failures.append(
                        f"composition degree {got:g} < min({m.max_beta:g}, {m2.max_beta:g})"
                    )
            break

        # Extracting solutions: each solution of a solved clause is a morphism.
        t = random_normal_term(rng, lattice, 2)
        phi = term_to_clause(t)
        tags = phi.tags()
        canon = CanonicalAlgebra.from_clause(phi, lattice)
        if len(model.elements) ** len(tags) <= 100:
            for alpha in _all_assignments(tags, model.elements):
                beta = satisfaction_degree(phi, model, alpha)
                if beta <= 0.0:
                    continue
                extract_check.cases += 1
                got = morphism_max_beta(canon, model, dict(alpha), lattice)
                if got < beta:
                    extract_check.failures.append(
                        f"{phi}: solution at {beta:g} maps at only {got:g}"
                    )

        # Denotation equals the anchored morphism's degree.
        t = random_normal_term(rng, lattice, 3)
        canon = CanonicalAlgebra.from_graph(term_to_graph(t), lattice)
        for element in model.elements:
            via_check.cases += 1
            m = find_morphism(canon, model, (t.tag, element), lattice)
            via = m.max_beta if m is not None else 0.0
            direct = best_denotation(t, model, element)
            if via != direct:
                via_check.failures.append(
                    f"{t} at {element}: morphism {via:g} != denotation {direct:g}"
                )

        # Subalgebra transparency.
        seeds = [rng.choice(model.elements)]
        sub = generated_subalgebra(model, seeds)
        t = random_normal_term(rng, lattice, 2)
        for element in sub.elements:
            sub_check.cases += 1
            if best_denotation(t, sub, element) != best_denotation(t, model, element):
                sub_check.failures.append(f"{t} at {element}: subalgebra changed the degree")

        # Weak finality: the principal-sort target absorbs the model.
        final_check.cases += 1
        try:
            target_sorts: dict[str, str] = {}
            for e in model.elements:
                positive = [
                    s
                    for s in lattice.graph.sorts
                    if s != TOP and model.sort_degree(s, e) > 0.0
                ]
                target_sorts[e] = lattice.glb_all(positive) if positive else TOP
        except NotALattice as err:
            final_check.failures.append(str(err))
        else:
            j_elements = [f"q_{e}" for e in model.elements]
            j_table = {
                (s, f"q_{e}"): lattice.degree(target_sorts[e], s)
                for e in model.elements
                for s in lattice.graph.sorts
                if s not in (TOP, BOT) and lattice.degree(target_sorts[e], s) > 0.0
            }
            j_features = {
                (f, f"q_{e}"): f"q_{model.feature_image(f, e)}"
                for f in model.feature_names
                for e in model.elements
            }
            target = Interpretation(
                j_elements, j_table, j_features, list(model.feature_names)
            )
            problems = validate_interpretation(target, lattice)
            if problems:
                final_check.failures.append(f"target invalid: {problems[0]}")
            else:
                mapping = {e: f"q_{e}" for e in model.elements}
                commutes = all(
                    mapping[model.feature_image(f, e)]
                    == target.feature_image(f, mapping[e])
                    for f in model.feature_names
                    for e in model.elements
                )
                degree = morphism_max_beta(model, target, mapping, lattice)
                if not commutes:
                    final_check.failures.append("quotient map does not commute")
                elif degree <= 0.0:
                    final_check.failures.append("quotient map works at no positive degree")

        # Approximation degree: completion route vs morphism route.
        t0 = random_normal_term(rng, lattice, 3)
        t1 = random_normal_term(rng, lattice, 3)
        g0, g1 = term_to_graph(t0), term_to_graph(t1)
        approx_check.cases += 1
        route_a = approximation_degree(g0, g1, lattice)
        m = find_morphism(
            CanonicalAlgebra.from_graph(g0, lattice),
            CanonicalAlgebra.from_graph(g1, lattice),
            (g0.root, g1.root),
            lattice,
        )
        route_b = m.max_beta if m is not None else 0.0
        if route_a != route_b:
            approx_check.failures.append(
                f"{t0} vs {t1}: completion {route_a:g} != morphism {route_b:g}"
            )

    return report
