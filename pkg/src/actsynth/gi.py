"""Graph isomorphism as a synthesis task.

Each graph becomes a single-step trace from the empty state whose step adds
one ``edge`` fact per directed edge.  Both traces share one label, so an
action with ``k = |V|`` parameters explains them only if its add effects,
bound through sigma1 and sigma2, reproduce both edge sets.  Without
isolated vertices sigma1 is a bijection and sigma2 . sigma1^-1 is an
isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .effects import SynthLimits, synth_num_params
from .errors import IsolatedVertexPresent, NodeCountMismatch, ParseError, TooLarge
from .model import GroundFact, PredicateSignature
from .traces import Step, Trace, decompose

EDGE = "edge"
GI_LABEL = "connect"
EDGE_SIGNATURE = PredicateSignature(EDGE, ("object", "object"))
BRUTE_FORCE_MAX = 8


@dataclass
class Graph:
    nodes: list[str]
    edges: set[tuple[str, str]] = field(default_factory=set)
    directed: bool = True

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node names")
        known = set(self.nodes)
        for u, v in self.edges:
            if u not in known or v not in known:
                raise ValueError(f"edge ({u}, {v}) uses an undeclared node")

    def arcs(self) -> set[tuple[str, str]]:
        """Directed edge set; undirected edges count in both orientations."""
        if self.directed:
            return set(self.edges)
        return set(self.edges) | {(v, u) for u, v in self.edges}

    def isolated(self) -> list[str]:
        touched = {x for e in self.edges for x in e}
        return [n for n in self.nodes if n not in touched]

    def without_isolated(self) -> "Graph":
        touched = {x for e in self.edges for x in e}
        return Graph([n for n in self.nodes if n in touched], set(self.edges), self.directed)


def parse_graph(text: str, directed: bool = True) -> Graph:
    """``nodes: a b c`` on the first content line, then one ``u v`` edge per line.

    Blank lines and ``#`` comments are ignored.
    """
    nodes: list[str] | None = None
    edges: set[tuple[str, str]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if nodes is None:
            head, sep, rest = line.partition(":")
            if not sep or head.strip() != "nodes":
                raise ParseError("expected 'nodes: ...' header", lineno, 1)
            nodes = rest.split()
            if len(set(nodes)) != len(nodes):
                raise ParseError("duplicate node name", lineno, 1)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"edge line needs two nodes, got {len(parts)}", lineno, 1)
        for p in parts:
            if p not in nodes:
                raise ParseError(f"unknown node {p!r}", lineno, raw.index(p) + 1)
        edges.add((parts[0], parts[1]))
    if nodes is None:
        raise ParseError("missing 'nodes:' header")
    return Graph(nodes, edges, directed)


@dataclass
class GiTask:
    traces: tuple[Trace, Trace]
    k: int
    # object name in the traces -> node name, per graph
    names: tuple[dict[str, str], dict[str, str]]


def _trace(g: Graph, tag: str) -> tuple[Trace, dict[str, str]]:
    obj = {n: f"{tag}_{i}" for i, n in enumerate(g.nodes)}
    added = frozenset(GroundFact(EDGE, (obj[u], obj[v])) for u, v in g.arcs())
    trace = Trace(tag, {o: "object" for o in obj.values()}, frozenset(), (Step(GI_LABEL, added),))
    return trace, {o: n for n, o in obj.items()}


def encode_gi(g1: Graph, g2: Graph) -> GiTask:
    """Two single-step traces over disjoint objects sharing one label."""
    if len(g1.nodes) != len(g2.nodes):
        raise NodeCountMismatch(f"{len(g1.nodes)} vs {len(g2.nodes)} nodes")
    for g in (g1, g2):
        iso = g.isolated()
        if iso:
            raise IsolatedVertexPresent(f"isolated vertices: {' '.join(iso)}")
    t1, n1 = _trace(g1, "g")
    t2, n2 = _trace(g2, "h")
    return GiTask((t1, t2), len(g1.nodes), (n1, n2))


def is_isomorphism(f: dict[str, str], g1: Graph, g2: Graph) -> bool:
    if set(f) != set(g1.nodes) or set(f.values()) != set(g2.nodes) or len(g1.nodes) != len(g2.nodes):
        return False
    a1, a2 = g1.arcs(), g2.arcs()
    return {(f[u], f[v]) for u, v in a1} == a2


def _pair_isolated(g1: Graph, g2: Graph, f: dict[str, str]) -> dict[str, str]:
    out = dict(f)
    for u, v in zip(g1.isolated(), g2.isolated()):
        out[u] = v
    return out


def solve_gi(g1: Graph, g2: Graph, limits: SynthLimits | None = None) -> dict[str, str] | None:
    """An isomorphism g1 -> g2 found by effect synthesis, or None."""
    if len(g1.nodes) != len(g2.nodes) or len(g1.isolated()) != len(g2.isolated()):
        return None
    c1, c2 = g1.without_isolated(), g2.without_isolated()
    if len(c1.arcs()) != len(c2.arcs()):
        return None
    task = encode_gi(c1, c2)
    if task.k == 0:
        f: dict[str, str] = {}
    else:
        group = decompose(task.traces)[GI_LABEL]
        sol = synth_num_params(group, task.k, limits)
        if sol is None:
            return None
        by_instance = {r.instance_id: sol.substitutions[r.id] for r in group.transitions}
        s1, s2 = by_instance["g"], by_instance["h"]
        if len(set(s1)) != task.k:
            raise AssertionError("substitution for the first graph is not a bijection")
        n1, n2 = task.names
        f = {n1[s1[i]]: n2[s2[i]] for i in range(task.k)}
    f = _pair_isolated(g1, g2, f)
    if not is_isomorphism(f, g1, g2):
        raise AssertionError("decoded mapping is not an isomorphism")
    return f


def brute_force_iso(g1: Graph, g2: Graph) -> dict[str, str] | None:
    """First isomorphism in permutation order of g2's nodes, or None."""
    if len(g1.nodes) != len(g2.nodes):
        return None
    if len(g1.nodes) > BRUTE_FORCE_MAX:
        raise TooLarge(f"{len(g1.nodes)} nodes exceeds the brute-force limit of {BRUTE_FORCE_MAX}")
    a1, a2 = g1.arcs(), g2.arcs()
    if len(a1) != len(a2):
        return None
    for perm in itertools.permutations(g2.nodes):
        f = dict(zip(g1.nodes, perm))
        if all((f[u], f[v]) in a2 for u, v in a1):
            return f
    return None


def format_mapping(f: dict[str, str] | None, g1: Graph | None = None) -> str:
    if f is None:
        return "not-isomorphic"
    order = g1.nodes if g1 is not None else sorted(f)
    return "iso: " + " ".join(f"{u}->{f[u]}" for u in order)
