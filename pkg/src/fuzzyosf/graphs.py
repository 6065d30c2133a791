"""Rooted feature graphs: the pointed-record view of terms.

A feature graph has tag-named nodes labeled with sorts and feature-labeled
edges, all nodes reachable from a root.  Terms, solved rooted clauses, and
graphs are three presentations of the same structure; this module holds the
graph side of those bijections plus the graph-level services: sort
membership at the root, feature application (total via lazily created
"trivial" placeholders), canonical forms, and equivalence.

Trivial elements stand for the top-sorted targets a graph does not mention:
applying feature ``f`` at a node with no ``f``-edge yields
``TrivialGraph((f,), g)``, and further applications extend the path.  They
carry no constraints — their sort degree is 1 exactly at ``top`` — and their
identity is the (path, origin) pair, so repeated application is stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .lattice import BOT, TOP, SortLattice
from .terms import (
    Clause,
    EqualityConstraint,
    FeatureConstraint,
    NotSolved,
    SortConstraint,
    Term,
    assert_normal,
)


@dataclass
class OsfGraph:
    """A rooted, sort-labeled, feature-edged graph.

    ``out`` keeps edge order per node (feature names unique per node).
    Equality (``==``) is representation equality; use
    :func:`graph_isomorphic` or :func:`graph_equivalent` for the semantic
    relations.
    """

    root: str
    sorts: dict[str, str]
    out: dict[str, tuple[tuple[str, str], ...]]

    def nodes(self) -> list[str]:
        return list(self.sorts)

    def successor(self, node: str, feature: str) -> str | None:
        for f, target in self.out.get(node, ()):
            if f == feature:
                return target
        return None


@dataclass(frozen=True)
class TrivialGraph:
    """A placeholder reached from ``origin`` by the unconstrained ``path``."""

    path: tuple[str, ...]
    origin: "OsfGraph" = None  # type: ignore[assignment]

    def __str__(self) -> str:
        return "~" + ".".join(self.path)


GraphElement = Union[OsfGraph, TrivialGraph]


def validate_graph(g: OsfGraph) -> list[str]:
    """Violations of graph well-formedness (empty list means valid)."""
    problems: list[str] = []
    if g.root not in g.sorts:
        problems.append(f"root {g.root} has no node")
    for node, sort in g.sorts.items():
        if sort == BOT:
            problems.append(f"node {node} is labeled {BOT}")
    for node, edges in g.out.items():
        if node not in g.sorts:
            problems.append(f"edge source {node} has no node")
        feats = [f for f, _ in edges]
        if len(set(feats)) != len(feats):
            problems.append(f"node {node} repeats a feature")
        for _, target in edges:
            if target not in g.sorts:
                problems.append(f"edge target {target} has no node")
    reach = set()
    stack = [g.root]
    while stack:
        n = stack.pop()
        if n in reach or n not in g.sorts:
            continue
        reach.add(n)
        for _, target in g.out.get(n, ()):
            stack.append(target)
    for node in g.sorts:
        if node not in reach:
            problems.append(f"node {node} is unreachable from the root")
    return problems


# -- bijections --------------------------------------------------------------


def term_to_graph(t: Term) -> OsfGraph:
    """Graph of a normal term: one node per tag, edges from the structured occurrence."""
    assert_normal(t)
    sorts: dict[str, str] = {}
    out: dict[str, tuple[tuple[str, str], ...]] = {}
    stack = [t]
    while stack:
        node = stack.pop()
        if node.sort != TOP or node.args:
            sorts[node.tag] = node.sort
            out[node.tag] = tuple((f, child.tag) for f, child in node.args)
        else:
            sorts.setdefault(node.tag, TOP)
            out.setdefault(node.tag, ())
        for _, child in reversed(node.args):
            stack.append(child)
    # Re-key in depth-first first-encounter order for stable presentation.
    ordered: dict[str, str] = {}
    ordered_out: dict[str, tuple[tuple[str, str], ...]] = {}
    walk = [t.tag]
    while walk:
        tag = walk.pop()
        if tag in ordered:
            continue
        ordered[tag] = sorts[tag]
        ordered_out[tag] = out[tag]
        for _, target in reversed(out[tag]):
            walk.append(target)
    return OsfGraph(root=t.tag, sorts=ordered, out=ordered_out)


def graph_to_term(g: OsfGraph) -> Term:
    """Term of a graph: depth-first, each node expanded at first encounter."""
    expanded: set[str] = set()
    result: Term | None = None
    frames: list[list] = []
    control: list[tuple[str, object]] = [("visit", g.root)]
    while control:
        op, payload = control.pop()
        if op == "visit":
            tag = payload  # type: ignore[assignment]
            if tag in expanded:
                node = Term(tag, TOP, ())
                if frames:
                    frames[-1][1].append(node)
                else:
                    result = node
                continue
            expanded.add(tag)
            frame = [tag, []]
            frames.append(frame)
            control.append(("close", frame))
            for _, target in reversed(g.out.get(tag, ())):
                control.append(("visit", target))
        else:
            frame = payload  # type: ignore[assignment]
            frames.pop()
            tag = frame[0]
            names = [f for f, _ in g.out.get(tag, ())]
            node = Term(tag, g.sorts[tag], tuple(zip(names, frame[1])))
            if frames:
                frames[-1][1].append(node)
            else:
                result = node
    assert result is not None
    return result


def clause_structure(clause: Clause) -> tuple[dict[str, str], dict[str, list[tuple[str, str]]]]:
    """Sort labels and ordered out-edges of a solved clause, every tag covered.

    Unsorted tags default to top.  Raises NotSolved on equalities, duplicate
    sorts, duplicate features, or bot sorts.
    """
    sorts: dict[str, str] = {}
    out: dict[str, list[tuple[str, str]]] = {}
    for c in clause.constraints:
        if isinstance(c, EqualityConstraint):
            raise NotSolved(f"clause still has an equality: {c}")
        if isinstance(c, SortConstraint):
            if c.tag in sorts:
                raise NotSolved(f"tag {c.tag} has more than one sort constraint")
            if c.sort == BOT:
                raise NotSolved(f"tag {c.tag} is sorted {BOT}")
            sorts[c.tag] = c.sort
        else:
            bucket = out.setdefault(c.tag, [])
            if any(f == c.feature for f, _ in bucket):
                raise NotSolved(f"tag {c.tag} has more than one value for feature {c.feature}")
            bucket.append((c.feature, c.target))
    for tag in clause.tags():
        sorts.setdefault(tag, TOP)
        out.setdefault(tag, [])
    return sorts, out


def clause_to_graphs(clause: Clause) -> dict[str, OsfGraph]:
    """One rooted graph per tag of a solved clause (its canonical subgraphs)."""
    sorts, out = clause_structure(clause)
    result: dict[str, OsfGraph] = {}
    for tag in sorts:
        reach: dict[str, None] = {}
        stack = [tag]
        while stack:
            n = stack.pop()
            if n in reach:
                continue
            reach[n] = None
            for _, target in reversed(out[n]):
                stack.append(target)
        result[tag] = OsfGraph(
            root=tag,
            sorts={n: sorts[n] for n in reach},
            out={n: tuple(out[n]) for n in reach},
        )
    return result


def rooted_subgraph(g: OsfGraph, node: str) -> OsfGraph:
    """The reachable slice of ``g`` re-rooted at ``node``."""
    reach: dict[str, None] = {}
    stack = [node]
    while stack:
        n = stack.pop()
        if n in reach:
            continue
        reach[n] = None
        for _, target in reversed(g.out.get(n, ())):
            stack.append(target)
    return OsfGraph(
        root=node,
        sorts={n: g.sorts[n] for n in reach},
        out={n: g.out.get(n, ()) for n in reach},
    )


# -- graph algebra operations -------------------------------------------------


def sort_membership(element: GraphElement, sort: str, lattice: SortLattice) -> float:
    """Degree to which a graph element belongs to a sort (root label vs sort)."""
    if isinstance(element, TrivialGraph):
        return lattice.degree(TOP, sort)
    return lattice.degree(element.sorts[element.root], sort)


def apply_feature(element: GraphElement, feature: str) -> GraphElement:
    """Follow a feature: the rooted subgraph if the edge exists, else a trivial element."""
    if isinstance(element, TrivialGraph):
        return TrivialGraph(element.path + (feature,), element.origin)
    target = element.successor(element.root, feature)
    if target is None:
        return TrivialGraph((feature,), element)
    return rooted_subgraph(element, target)


# -- canonical form and equivalence -------------------------------------------


def canonical_form(g: OsfGraph) -> OsfGraph:
    """Strip redundant top leaves: non-root, top-labeled, no out-edges, one in-edge.

    Removing one such node can expose another (its parent may become a
    leaf), so stripping iterates to a fixpoint; the result is independent of
    removal order because removability only grows as the fringe peels.
    """
    sorts = dict(g.sorts)
    out = {n: list(edges) for n, edges in g.out.items()}
    while True:
        indeg: dict[str, int] = {n: 0 for n in sorts}
        for n, edges in out.items():
            for _, target in edges:
                indeg[target] += 1
        victims = [
            n
            for n in sorts
            if n != g.root and sorts[n] == TOP and not out.get(n) and indeg[n] == 1
        ]
        if not victims:
            break
        doomed = set(victims)
        for n in doomed:
            del sorts[n]
            out.pop(n, None)
        for n in out:
            out[n] = [(f, t) for f, t in out[n] if t not in doomed]
    return OsfGraph(root=g.root, sorts=sorts, out={n: tuple(e) for n, e in out.items()})


def graph_isomorphic(g0: OsfGraph, g1: OsfGraph) -> bool:
    """Rooted isomorphism up to tag renaming: same sorts, same feature shape.

    Features are matched as sets per node (edge order is presentation, not
    substance); the witness map must be a bijection.
    """
    fwd: dict[str, str] = {g0.root: g1.root}
    bwd: dict[str, str] = {g1.root: g0.root}
    queue = [(g0.root, g1.root)]
    while queue:
        a, b = queue.pop()
        if g0.sorts[a] != g1.sorts[b]:
            return False
        ea = dict(g0.out.get(a, ()))
        eb = dict(g1.out.get(b, ()))
        if set(ea) != set(eb):
            return False
        for f in ea:
            ta, tb = ea[f], eb[f]
            sa, sb = fwd.get(ta), bwd.get(tb)
            if sa is None and sb is None:
                fwd[ta] = tb
                bwd[tb] = ta
                queue.append((ta, tb))
            elif sa != tb or sb != ta:
                return False
    return len(fwd) == len(g0.sorts) and len(bwd) == len(g1.sorts)


def graph_equivalent(g0: OsfGraph, g1: OsfGraph) -> bool:
    """Equality of canonical forms, up to tag renaming."""
    return graph_isomorphic(canonical_form(g0), canonical_form(g1))


def graph_to_dot(g: OsfGraph) -> str:
    """GraphViz rendering; the root is drawn with a double ellipse."""
    lines = ["digraph term {", "  rankdir=LR;"]
    for node, sort in g.sorts.items():
        extra = ", peripheries=2" if node == g.root else ""
        lines.append(f'  "{node}" [label="{node}: {sort}"{extra}];')
    for node, edges in g.out.items():
        for f, target in edges:
            lines.append(f'  "{node}" -> "{target}" [label="{f}"];')
    lines.append("}")
    return "\n".join(lines)
