"""Causal DAG model with d-separation and back-door adjustment-set search."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Union

from .errors import GraphError

NodeSet = Union[str, Iterable[str]]

CONFOUNDERS = ("C1", "C2", "C3", "C4", "C5")

# Adjustment-set search enumerates subsets of the candidate pool, so cap the
# pool size to keep the search bounded.
MAX_BACKDOOR_CANDIDATES = 16

_NODE_NAME_RE = re.compile(r"^[\w.-]+$")


@dataclass(frozen=True)
class CausalGraph:
    """A directed graph over named nodes.

    Acyclicity is checked by :func:`validate_dag`, not at construction, so
    that cycle diagnostics can be reported by the operations that need them.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for node in self.nodes:
            if not node:
                raise GraphError("node names must be non-empty")
            if node in seen:
                raise GraphError(f"duplicate node name: {node!r}")
            seen.add(node)
        edge_seen: set[tuple[str, str]] = set()
        for edge in self.edges:
            cause, effect = edge
            for endpoint in edge:
                if endpoint not in seen:
                    raise GraphError(f"edge references unknown node: {endpoint!r}")
            if cause == effect:
                raise GraphError(f"self-loop on node {cause!r}")
            if edge in edge_seen:
                raise GraphError(f"duplicate edge: {cause!r} -> {effect!r}")
            edge_seen.add(edge)

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str]],
        extra_nodes: Iterable[str] = (),
    ) -> "CausalGraph":
        """Build a graph whose node list is inferred from the edges.

        Nodes appear in first-mention order; `extra_nodes` adds isolated ones.
        """
        edge_list = tuple((str(a), str(b)) for a, b in edges)
        ordered: list[str] = []
        seen: set[str] = set()
        for cause, effect in edge_list:
            for endpoint in (cause, effect):
                if endpoint not in seen:
                    seen.add(endpoint)
                    ordered.append(endpoint)
        for node in extra_nodes:
            name = str(node)
            if name not in seen:
                seen.add(name)
                ordered.append(name)
        return cls(nodes=tuple(ordered), edges=edge_list)

    def parents_map(self) -> dict[str, tuple[str, ...]]:
        mapping: dict[str, list[str]] = {node: [] for node in self.nodes}
        for cause, effect in self.edges:
            mapping[effect].append(cause)
        return {node: tuple(parents) for node, parents in mapping.items()}

    def children_map(self) -> dict[str, tuple[str, ...]]:
        mapping: dict[str, list[str]] = {node: [] for node in self.nodes}
        for cause, effect in self.edges:
            mapping[cause].append(effect)
        return {node: tuple(children) for node, children in mapping.items()}

    def ancestors(self, nodes: NodeSet) -> frozenset[str]:
        """All strict ancestors of the given nodes (excluding the nodes
        themselves unless reachable through a longer path)."""
        parents = self.parents_map()
        frontier = list(_as_node_tuple(nodes))
        found: set[str] = set()
        while frontier:
            node = frontier.pop()
            for parent in parents[node]:
                if parent not in found:
                    found.add(parent)
                    frontier.append(parent)
        return frozenset(found)

    def descendants(self, nodes: NodeSet) -> frozenset[str]:
        """All strict descendants of the given nodes."""
        children = self.children_map()
        frontier = list(_as_node_tuple(nodes))
        found: set[str] = set()
        while frontier:
            node = frontier.pop()
            for child in children[node]:
                if child not in found:
                    found.add(child)
                    frontier.append(child)
        return frozenset(found)


def _as_node_tuple(nodes: NodeSet) -> tuple[str, ...]:
    if isinstance(nodes, str):
        return (nodes,)
    return tuple(nodes)


def _require_known(graph: CausalGraph, nodes: Iterable[str]) -> None:
    known = set(graph.nodes)
    for node in nodes:
        if node not in known:
            raise GraphError(f"unknown node name: {node!r}")


def validate_dag(graph: CausalGraph) -> None:
    """Raise GraphError listing one directed cycle if the graph has any."""
    children = graph.children_map()
    state: dict[str, int] = {}
    stack: list[str] = []

    def visit(node: str) -> list[str] | None:
        state[node] = 1
        stack.append(node)
        for child in children[node]:
            mark = state.get(child, 0)
            if mark == 1:
                return stack[stack.index(child):] + [child]
            if mark == 0:
                cycle = visit(child)
                if cycle is not None:
                    return cycle
        state[node] = 2
        stack.pop()
        return None

    for node in graph.nodes:
        if state.get(node, 0) == 0:
            cycle = visit(node)
            if cycle is not None:
                path = " -> ".join(cycle)
                raise GraphError(f"graph contains a directed cycle: {path}")


def d_separated(graph: CausalGraph, x: NodeSet, y: NodeSet, z: NodeSet = ()) -> bool:
    """Decide whether every path between x and y is blocked given z.

    Uses the linear-time reachability formulation: a node is explored in an
    "up" state (entered against an edge) or a "down" state (entered along an
    edge), and collider traversal is allowed exactly when the collider has a
    conditioned descendant.
    """
    x_nodes = frozenset(_as_node_tuple(x))
    y_nodes = frozenset(_as_node_tuple(y))
    z_nodes = frozenset(_as_node_tuple(z))
    if not x_nodes or not y_nodes:
        raise GraphError("d-separation requires non-empty x and y sets")
    _require_known(graph, x_nodes | y_nodes | z_nodes)
    if x_nodes & y_nodes or x_nodes & z_nodes or y_nodes & z_nodes:
        raise GraphError("d-separation requires disjoint x, y, and z sets")
    validate_dag(graph)

    parents = graph.parents_map()
    children = graph.children_map()
    conditioned_or_ancestor = z_nodes | graph.ancestors(z_nodes)

    up, down = 0, 1
    frontier: list[tuple[str, int]] = [(node, up) for node in sorted(x_nodes)]
    visited: set[tuple[str, int]] = set()
    while frontier:
        node, direction = frontier.pop()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node not in z_nodes and node in y_nodes:
            return False
        if direction == up and node not in z_nodes:
            for parent in parents[node]:
                frontier.append((parent, up))
            for child in children[node]:
                frontier.append((child, down))
        elif direction == down:
            if node not in z_nodes:
                for child in children[node]:
                    frontier.append((child, down))
            if node in conditioned_or_ancestor:
                for parent in parents[node]:
                    frontier.append((parent, up))
    return True


def backdoor_sets(
    graph: CausalGraph,
    treatment: str,
    outcome: str,
) -> list[tuple[str, ...]]:
    """Enumerate back-door adjustment sets for (treatment, outcome).

    Returns every minimal valid set, plus the full candidate set when it is
    itself valid, sorted by size then lexicographically. Candidates exclude
    the treatment, the outcome, and all descendants of the treatment. A set
    is valid when it d-separates treatment from outcome in the graph with the
    treatment's outgoing edges removed.
    """
    _require_known(graph, (treatment, outcome))
    if treatment == outcome:
        raise GraphError("treatment and outcome must differ")
    validate_dag(graph)

    forbidden = {treatment, outcome} | set(graph.descendants(treatment))
    candidates = tuple(sorted(node for node in graph.nodes if node not in forbidden))
    if len(candidates) > MAX_BACKDOOR_CANDIDATES:
        raise GraphError(
            f"back-door search supports at most {MAX_BACKDOOR_CANDIDATES} "
            f"candidate nodes, got {len(candidates)}"
        )

    pruned = CausalGraph(
        nodes=graph.nodes,
        edges=tuple(edge for edge in graph.edges if edge[0] != treatment),
    )

    def blocks(adjustment: tuple[str, ...]) -> bool:
        return d_separated(pruned, treatment, outcome, adjustment)

    minimal: list[tuple[str, ...]] = []
    for size in range(len(candidates) + 1):
        for combo in combinations(candidates, size):
            combo_set = set(combo)
            if any(set(found) <= combo_set for found in minimal):
                continue
            if blocks(combo):
                minimal.append(combo)

    result = list(minimal)
    if candidates and candidates not in result and blocks(candidates):
        result.append(candidates)
    result.sort(key=lambda s: (len(s), s))
    return result


def default_graph(treatment: str = "T", outcome: str = "Y") -> CausalGraph:
    """The built-in analysis graph: five confounders each pointing at both
    the treatment and the outcome, plus the direct treatment -> outcome edge.
    """
    if treatment == outcome:
        raise GraphError("treatment and outcome must differ")
    if treatment in CONFOUNDERS or outcome in CONFOUNDERS:
        raise GraphError("treatment and outcome must not collide with confounder names")
    edges: list[tuple[str, str]] = []
    for confounder in CONFOUNDERS:
        edges.append((confounder, treatment))
        edges.append((confounder, outcome))
    edges.append((treatment, outcome))
    return CausalGraph(nodes=CONFOUNDERS + (treatment, outcome), edges=tuple(edges))


def parse_edge_list(text: str) -> CausalGraph:
    """Parse a graph from text with one `A -> B` edge or bare node per line.

    Blank lines and `#` comments are ignored.
    """
    edges: list[tuple[str, str]] = []
    isolated: list[str] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            parts = [part.strip() for part in line.split("->")]
            if len(parts) != 2 or not all(parts):
                raise GraphError(f"malformed edge on line {lineno}: {raw_line.strip()!r}")
            cause, effect = parts
            for name in (cause, effect):
                if not _NODE_NAME_RE.match(name):
                    raise GraphError(f"invalid node name on line {lineno}: {name!r}")
            edges.append((cause, effect))
        else:
            if not _NODE_NAME_RE.match(line):
                raise GraphError(f"invalid node name on line {lineno}: {line!r}")
            isolated.append(line)
    if not edges and not isolated:
        raise GraphError("edge list is empty")
    return CausalGraph.from_edges(edges, extra_nodes=isolated)


def format_edge_list(graph: CausalGraph) -> str:
    """Serialize a graph to the `A -> B` per-line format."""
    lines = [f"{cause} -> {effect}" for cause, effect in graph.edges]
    linked = {node for edge in graph.edges for node in edge}
    lines.extend(node for node in graph.nodes if node not in linked)
    return "\n".join(lines) + "\n"
