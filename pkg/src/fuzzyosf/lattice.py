"""Weighted sort hierarchies: graded subsumption, max-min closure, and GLBs.

A sort hierarchy is a finite set of sort names partially ordered by a graded
subsumption relation.  Declared edges ``(sub, super, degree)`` with degree in
(0, 1] form a DAG; the full relation is the max-min reflexive-transitive
closure of those edges, extended with two implicit bounds: ``bot`` lies below
every sort and ``top`` above every sort, both at degree 1, without any
materialized edges.  Degrees only ever combine through ``min`` (along a path)
and ``max`` (across paths), so every derived degree is one of the declared
edge degrees or 0/1 — comparisons stay exact.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

BOT = "bot"
TOP = "top"

_SORT_RE = re.compile(r"[a-z][A-Za-z0-9_]*\Z")
_FEATURE_RE = _SORT_RE


class OntologyError(Exception):
    """Base class for errors in sort-hierarchy construction or queries."""


class DuplicateName(OntologyError):
    """A sort or feature name was declared twice, or the namespaces collide."""


class DegreeOutOfRange(OntologyError):
    """A degree fell outside its legal range ((0, 1] for edges, [0, 1] for sims)."""


class CycleDetected(OntologyError):
    """The declared edges (plus implicit bounds) admit a directed cycle."""

    def __init__(self, cycle: list[str]):
        self.cycle = list(cycle)
        super().__init__("subsumption cycle: " + " -> ".join(self.cycle))


class NotALattice(OntologyError):
    """Two sorts have no unique greatest lower bound."""

    def __init__(self, s: str, t: str, maximal: list[str]):
        self.pair = (s, t)
        self.maximal = list(maximal)
        super().__init__(
            f"no unique greatest lower bound for ({s}, {t}); "
            f"maximal common lower bounds: {', '.join(self.maximal)}"
        )


class UnknownSort(OntologyError):
    """A sort name is not part of the hierarchy."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown sort: {name}")


class UnknownFeature(OntologyError):
    """A feature name is not part of the signature."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown feature: {name}")


class SignatureMismatch(OntologyError):
    """A term refers to sorts or features outside the signature."""


class SortGraph:
    """The declared fragment of a sort hierarchy: names plus weighted edges.

    Construction runs the linear structural checks (name syntax and
    uniqueness, degree ranges, acyclicity including the implicit bot/top
    bounds).  The exhaustive unique-GLB property is checked separately by
    :meth:`SortLattice.validate`, because it is quadratic in the number of
    sorts.
    """

    def __init__(
        self,
        sorts: list[str],
        features: list[str],
        edges: list[tuple[str, str, float]],
    ):
        declared = list(sorts)
        for name in (BOT, TOP):
            if name not in declared:
                declared.append(name)
        seen: set[str] = set()
        for name in declared:
            if not _SORT_RE.match(name):
                raise OntologyError(f"bad sort name: {name!r}")
            if name in seen:
                raise DuplicateName(f"sort declared twice: {name}")
            seen.add(name)
        self.sorts: list[str] = declared

        feats: set[str] = set()
        for name in features:
            if not _FEATURE_RE.match(name):
                raise OntologyError(f"bad feature name: {name!r}")
            if name in feats:
                raise DuplicateName(f"feature declared twice: {name}")
            if name in seen:
                raise DuplicateName(f"name used as both sort and feature: {name}")
            feats.add(name)
        self.features: list[str] = list(features)

        self._index: dict[str, int] = {name: i for i, name in enumerate(self.sorts)}
        n = len(self.sorts)
        combined: dict[tuple[int, int], float] = {}
        for sub, sup, degree in edges:
            if sub not in self._index:
                raise UnknownSort(sub)
            if sup not in self._index:
                raise UnknownSort(sup)
            if not isinstance(degree, (int, float)) or not 0.0 < degree <= 1.0:
                raise DegreeOutOfRange(
                    f"edge degree must lie in (0, 1]: {sub} -> {sup} @ {degree!r}"
                )
            if sub == sup:
                raise CycleDetected([sub, sup])
            if sup == BOT:
                # sub <= bot plus the implicit bot <= sub would force sub = bot.
                raise CycleDetected([BOT, sub, BOT])
            if sub == TOP:
                raise CycleDetected([TOP, sup, TOP])
            key = (self._index[sub], self._index[sup])
            if key not in combined or degree > combined[key]:
                combined[key] = float(degree)

        self.edges: list[tuple[str, str, float]] = [
            (self.sorts[i], self.sorts[j], d) for (i, j), d in combined.items()
        ]
        self._succ: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        self._pred: list[list[tuple[int, float]]] = [[] for _ in range(n)]
        for (i, j), d in combined.items():
            self._succ[i].append((j, d))
            self._pred[j].append((i, d))

        self._topo: list[int] = self._toposort()
        self._topo_pos: list[int] = [0] * n
        for pos, node in enumerate(self._topo):
            self._topo_pos[node] = pos

    def _toposort(self) -> list[int]:
        n = len(self.sorts)
        indeg = [0] * n
        for i in range(n):
            for j, _ in self._succ[i]:
                indeg[j] += 1
        order = [i for i in range(n) if indeg[i] == 0]
        head = 0
        while head < len(order):
            u = order[head]
            head += 1
            for v, _ in self._succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    order.append(v)
        if len(order) < n:
            leftover = {i for i in range(n) if indeg[i] > 0}
            start = min(leftover)
            trail, node = [], start
            on_trail: set[int] = set()
            while node not in on_trail:
                on_trail.add(node)
                trail.append(node)
                node = next(v for v, _ in self._succ[node] if v in leftover)
            cycle = trail[trail.index(node) :] + [node]
            raise CycleDetected([self.sorts[i] for i in cycle])
        return order

    def has_sort(self, name: str) -> bool:
        return name in self._index

    def has_feature(self, name: str) -> bool:
        return name in self.features

    def to_dot(self) -> str:
        lines = ["digraph sorts {", "  rankdir=BT;"]
        for name in self.sorts:
            lines.append(f'  "{name}";')
        for sub, sup, d in self.edges:
            lines.append(f'  "{sub}" -> "{sup}" [label="{d:g}"];')
        lines.append("}")
        return "\n".join(lines)


def build_sort_graph(
    sorts: list[str],
    features: list[str],
    edges: list[tuple[str, str, float]],
) -> SortGraph:
    """Assemble and structurally check a declared sort hierarchy."""
    return SortGraph(sorts, features, edges)


class SortLattice:
    """Query layer over a :class:`SortGraph`: closure degrees and GLBs.

    Closure degrees are computed lazily, one source at a time, by a single
    relaxation pass over the topological order — O(|sorts| + |edges|) per
    distinct source, memoized.  ``densify()`` forces every row at once.
    GLBs are computed on the crisp support (reachability ignoring degrees):
    the greatest lower bound exists iff the common-lower-bound set has a
    unique maximal element.
    """

    def __init__(self, graph: SortGraph):
        self.graph = graph
        self._rows: dict[int, list[float]] = {}
        self._down: dict[int, frozenset[int]] = {}
        self._glb: dict[tuple[int, int], int] = {}
        self._validated = False

    # -- closure ---------------------------------------------------------

    def _row(self, src: int) -> list[float]:
        row = self._rows.get(src)
        if row is not None:
            return row
        g = self.graph
        row = [0.0] * len(g.sorts)
        row[src] = 1.0
        topo = g._topo
        for pos in range(g._topo_pos[src], len(topo)):
            u = topo[pos]
            du = row[u]
            if du <= 0.0:
                continue
            for v, w in g._succ[u]:
                d = du if du < w else w
                if d > row[v]:
                    row[v] = d
        self._rows[src] = row
        return row

    def degree(self, s: str, t: str) -> float:
        """Graded subsumption s below t: max over paths of min edge degree."""
        idx = self.graph._index
        if s not in idx:
            raise UnknownSort(s)
        if t not in idx:
            raise UnknownSort(t)
        if s == t:
            return 1.0
        if s == BOT or t == TOP:
            return 1.0
        if s == TOP or t == BOT:
            return 0.0
        return self._row(idx[s])[idx[t]]

    def densify(self) -> None:
        """Materialize the full closure table (every per-source row)."""
        for i in range(len(self.graph.sorts)):
            self._row(i)

    def closure_pairs(self) -> list[tuple[str, str, float]]:
        """All positive closure entries, including implicit bounds and reflexivity."""
        names = self.graph.sorts
        out = []
        for s in names:
            for t in names:
                d = self.degree(s, t)
                if d > 0.0:
                    out.append((s, t, d))
        return out

    # -- crisp support and GLBs ------------------------------------------

    def _down_set(self, i: int) -> frozenset[int]:
        cached = self._down.get(i)
        if cached is not None:
            return cached
        g = self.graph
        name = g.sorts[i]
        if name == TOP:
            result = frozenset(range(len(g.sorts)))
        else:
            seen = {i, g._index[BOT]}
            stack = [i]
            while stack:
                u = stack.pop()
                for v, _ in g._pred[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            result = frozenset(seen)
        self._down[i] = result
        return result

    def glb(self, s: str, t: str) -> str:
        """Greatest lower bound on the crisp support; raises NotALattice."""
        idx = self.graph._index
        if s not in idx:
            raise UnknownSort(s)
        if t not in idx:
            raise UnknownSort(t)
        i, j = idx[s], idx[t]
        if i > j:
            i, j = j, i
        cached = self._glb.get((i, j))
        if cached is not None:
            return self.graph.sorts[cached]
        di, dj = self._down_set(i), self._down_set(j)
        if i in dj:
            win = i
        elif j in di:
            win = j
        else:
            cand = di & dj
            maximal = [
                u
                for u in cand
                if not any(v != u and u in self._down_set(v) for v in cand)
            ]
            if len(maximal) != 1:
                names = sorted(self.graph.sorts[u] for u in maximal)
                raise NotALattice(s, t, names)
            win = maximal[0]
        self._glb[(i, j)] = win
        return self.graph.sorts[win]

    def glb_all(self, names: list[str]) -> str:
        """Fold glb over a non-empty list of sorts."""
        if not names:
            raise ValueError("glb_all needs at least one sort")
        acc = names[0]
        for name in names[1:]:
            acc = self.glb(acc, name)
        return acc

    def validate(self) -> "SortLattice":
        """Exhaustively check that every sort pair has a unique GLB."""
        if not self._validated:
            names = self.graph.sorts
            for a in range(len(names)):
                for b in range(a + 1, len(names)):
                    self.glb(names[a], names[b])
            self._validated = True
        return self


def validate_lattice(graph: SortGraph) -> SortLattice:
    """Build the query layer and run the exhaustive unique-GLB check."""
    return SortLattice(graph).validate()


# -- similarity enrichment -------------------------------------------------


def build_similarity(pairs: list[tuple[str, str, float]]) -> dict[tuple[str, str], float]:
    """Symmetric similarity table from (a, b, degree) entries.

    Degrees must lie in [0, 1]; sim(a, a), if given, must be 1; conflicting
    degrees for the same unordered pair are an error.
    """
    table: dict[tuple[str, str], float] = {}
    for a, b, d in pairs:
        if not isinstance(d, (int, float)) or not 0.0 <= d <= 1.0:
            raise DegreeOutOfRange(f"similarity degree must lie in [0, 1]: {a} ~ {b} @ {d!r}")
        if a == b and d != 1.0:
            raise DegreeOutOfRange(f"self-similarity must be 1: {a} ~ {a} @ {d!r}")
        for key in ((a, b), (b, a)):
            if key in table and table[key] != float(d):
                raise OntologyError(
                    f"conflicting similarity degrees for ({key[0]}, {key[1]}): "
                    f"{table[key]:g} vs {d:g}"
                )
            table[key] = float(d)
    return table


@dataclass(frozen=True)
class DroppedEdge:
    """A derived edge that was rejected, with the reason why."""

    sub: str
    sup: str
    degree: float
    reason: str  # "self" or "cycle"


def enrich_from_similarity(
    graph: SortGraph, sim: dict[tuple[str, str], float]
) -> tuple[SortGraph, list[DroppedEdge]]:
    """Weave a similarity relation into a crisp hierarchy as graded edges.

    For every crisp ``s below u`` (reflexive-transitive over the declared
    edges) and every ``sim(u, s2) = b > 0`` this derives a candidate edge
    ``(s, s2, b)``.  Candidates are max-combined per pair, then added in
    sorted name order; self-edges and edges that would close a cycle against
    the working graph are dropped and reported.
    """
    for _, _, d in graph.edges:
        if d != 1.0:
            raise ValueError("similarity enrichment requires a crisp hierarchy (all edge degrees 1)")
    for a, b in sim:
        if not graph.has_sort(a) or not graph.has_sort(b):
            raise UnknownSort(a if not graph.has_sort(a) else b)

    idx = graph._index
    n = len(graph.sorts)

    # Crisp up-sets over declared edges only (reflexive; no implicit bounds).
    up: list[set[int]] = [set() for _ in range(n)]
    for i in range(n):
        seen = {i}
        stack = [i]
        while stack:
            u = stack.pop()
            for v, _ in graph._succ[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        up[i] = seen

    candidates: dict[tuple[int, int], float] = {}
    for (u, s2), beta in sim.items():
        if beta <= 0.0:
            continue
        j = idx[s2]
        ui = idx[u]
        for i in range(n):
            if ui in up[i]:
                key = (i, j)
                if candidates.get(key, 0.0) < beta:
                    candidates[key] = beta

    succ: list[set[int]] = [set(v for v, _ in graph._succ[i]) for i in range(n)]

    def reaches(a: int, b: int) -> bool:
        if a == b:
            return True
        seen = {a}
        stack = [a]
        while stack:
            u = stack.pop()
            for v in succ[u]:
                if v == b:
                    return True
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return False

    combined: dict[tuple[int, int], float] = {
        (idx[a], idx[b]): d for a, b, d in graph.edges
    }
    dropped: list[DroppedEdge] = []
    ordered = sorted(candidates.items(), key=lambda kv: (graph.sorts[kv[0][0]], graph.sorts[kv[0][1]]))
    for (i, j), beta in ordered:
        sub, sup = graph.sorts[i], graph.sorts[j]
        if i == j:
            dropped.append(DroppedEdge(sub, sup, beta, "self"))
            continue
        if sup == BOT or sub == TOP or reaches(j, i):
            dropped.append(DroppedEdge(sub, sup, beta, "cycle"))
            continue
        key = (i, j)
        if key in combined:
            if beta > combined[key]:
                combined[key] = beta
        else:
            combined[key] = beta
            succ[i].add(j)

    edges = [(graph.sorts[i], graph.sorts[j], d) for (i, j), d in combined.items()]
    enriched = SortGraph(
        [s for s in graph.sorts if s not in (BOT, TOP)], list(graph.features), edges
    )
    return enriched, dropped


# -- ontology text format ---------------------------------------------------


def load_ontology(text: str) -> tuple[SortGraph, dict[tuple[str, str], float]]:
    """Parse the line-oriented ontology format.

    Lines: ``sort <name>...``, ``feature <name>...``,
    ``edge <sub> <sup> <degree>``, ``sim <a> <b> <degree>``; ``#`` starts a
    comment; blank lines are ignored.  Sorts referenced by edges or sims are
    declared implicitly.
    """
    sorts: dict[str, None] = {}
    features: dict[str, None] = {}
    edges: list[tuple[str, str, float]] = []
    sims: list[tuple[str, str, float]] = []

    def fail(lineno: int, msg: str) -> None:
        raise OntologyError(f"line {lineno}: {msg}")

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "sort":
            if len(parts) < 2:
                fail(lineno, "expected: sort <name>...")
            for name in parts[1:]:
                sorts[name] = None
        elif kind == "feature":
            if len(parts) < 2:
                fail(lineno, "expected: feature <name>...")
            for name in parts[1:]:
                features[name] = None
        elif kind == "edge":
            if len(parts) != 4:
                fail(lineno, "expected: edge <sub> <sup> <degree>")
            try:
                d = float(parts[3])
            except ValueError:
                fail(lineno, f"bad degree: {parts[3]!r}")
            if not 0.0 < d <= 1.0:
                fail(lineno, f"edge degree must lie in (0, 1]: {parts[3]}")
            sorts.setdefault(parts[1], None)
            sorts.setdefault(parts[2], None)
            edges.append((parts[1], parts[2], d))
        elif kind == "sim":
            if len(parts) != 4:
                fail(lineno, "expected: sim <a> <b> <degree>")
            try:
                d = float(parts[3])
            except ValueError:
                fail(lineno, f"bad degree: {parts[3]!r}")
            if not 0.0 <= d <= 1.0:
                fail(lineno, f"sim degree must lie in [0, 1]: {parts[3]}")
            sorts.setdefault(parts[1], None)
            sorts.setdefault(parts[2], None)
            sims.append((parts[1], parts[2], d))
        else:
            fail(lineno, f"unknown directive: {kind!r}")

    graph = SortGraph(
        [s for s in sorts if s not in (BOT, TOP)], list(features), edges
    )
    return graph, build_similarity(sims)


def format_ontology(
    graph: SortGraph, sim: dict[tuple[str, str], float] | None = None
) -> str:
    """Render a hierarchy back into the line-oriented ontology format."""
    lines = []
    for s in graph.sorts:
        if s not in (BOT, TOP):
            lines.append(f"sort {s}")
    for f in graph.features:
        lines.append(f"feature {f}")
    for sub, sup, d in graph.edges:
        lines.append(f"edge {sub} {sup} {d:g}")
    if sim:
        for (a, b), d in sorted(sim.items()):
            if a <= b:
                lines.append(f"sim {a} {b} {d:g}")
    return "\n".join(lines) + "\n"
