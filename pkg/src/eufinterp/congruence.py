"""Proof-producing congruence closure and congruence-graph queries.

The closure state is an acyclic undirected graph over a subterm-closed term
set.  Edges record why two terms were merged: basic edges come from input
equalities, derived edges from congruence and carry the endpoint pairs of
their parent paths.  Since an edge is only ever added between terms that are
not yet connected, every component is a tree and paths are unique.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Literal, Side, Term


@dataclass(frozen=True, eq=False)
class Edge:
    """One merge step.  Exactly one of ``origin`` / ``parents`` is set."""

    u: Term
    v: Term
    seq: int
    origin: Literal | None = None
    side: Side | None = None
    parents: tuple[tuple[Term, Term], ...] | None = None

    @property
    def is_basic(self) -> bool:
        return self.origin is not None

    @property
    def is_derived(self) -> bool:
        return self.parents is not None

    def other(self, t: Term) -> Term:
        return self.v if t is self.u else self.u


@dataclass(frozen=True)
class PathStep:
    edge: Edge
    forward: bool

    @property
    def start(self) -> Term:
        return self.edge.u if self.forward else self.edge.v

    @property
    def end(self) -> Term:
        return self.edge.v if self.forward else self.edge.u


@dataclass(frozen=True)
class Path:
    """The unique simple path between two connected vertices; empty iff u = v."""

    start: Term
    end: Term
    steps: tuple[PathStep, ...]

    @property
    def is_empty(self) -> bool:
        return not self.steps

    def vertices(self) -> list[Term]:
        out = [self.start]
        out.extend(step.end for step in self.steps)
        return out

    def reversed(self) -> "Path":
        steps = tuple(
            PathStep(step.edge, not step.forward) for step in reversed(self.steps)
        )
        return Path(self.end, self.start, steps)

    def slice(self, lo: int, hi: int) -> "Path":
        """Subpath between vertex positions ``lo`` and ``hi`` (inclusive)."""
        verts = self.vertices()
        return Path(verts[lo], verts[hi], self.steps[lo:hi])


class ClosureInputError(ValueError):
    """A closure input term lies outside the supplied term set."""


class NotConnectedError(ValueError):
    pass


class CongruenceGraph:
    """Mutable while a closure or repair runs, then used read-only."""

    def __init__(self, vertices: Iterable[Term]):
        self.vertices: list[Term] = sorted(vertices, key=lambda t: t.id)
        self.vertex_ids: set[int] = {t.id for t in self.vertices}
        self.edges: list[Edge] = []
        self.adjacency: dict[int, list[Edge]] = {t.id: [] for t in self.vertices}
        self._parent: dict[int, int] = {t.id: t.id for t in self.vertices}
        self._members: dict[int, list[int]] = {t.id: [t.id] for t in self.vertices}
        self._next_seq = 0

    def clone(self) -> "CongruenceGraph":
        g = CongruenceGraph(self.vertices)
        g.edges = list(self.edges)
        g.adjacency = {tid: list(edges) for tid, edges in self.adjacency.items()}
        g._parent = dict(self._parent)
        g._members = {rep: list(ms) for rep, ms in self._members.items()}
        g._next_seq = self._next_seq
        return g

    def find(self, tid: int) -> int:
        parent = self._parent
        while parent[tid] != tid:
            parent[tid] = parent[parent[tid]]
            tid = parent[tid]
        return tid

    def connected(self, s: Term, t: Term) -> bool:
        return self.find(s.id) == self.find(t.id)

    def _union(self, a: int, b: int) -> tuple[int, int]:
        """Merge components; the smaller term id stays representative."""
        ra, rb = self.find(a), self.find(b)
        keep, absorbed = (ra, rb) if ra < rb else (rb, ra)
        self._parent[absorbed] = keep
        self._members[keep].extend(self._members.pop(absorbed))
        return keep, absorbed

    def add_vertex(self, t: Term) -> None:
        if t.id in self.vertex_ids:
            return
        self.vertices.append(t)
        self.vertex_ids.add(t.id)
        self.adjacency[t.id] = []
        self._parent[t.id] = t.id
        self._members[t.id] = [t.id]

    def add_edge(
        self,
        u: Term,
        v: Term,
        *,
        origin: Literal | None = None,
        side: Side | None = None,
        parents: tuple[tuple[Term, Term], ...] | None = None,
    ) -> Edge:
        if self.connected(u, v):
            raise ValueError(f"edge would close a cycle: {u!r} -- {v!r}")
        edge = Edge(u, v, self._next_seq, origin=origin, side=side, parents=parents)
        self._next_seq += 1
        self.edges.append(edge)
        self.adjacency[u.id].append(edge)
        self.adjacency[v.id].append(edge)
        self._union(u.id, v.id)
        return edge

    def remove_edge(self, edge: Edge) -> None:
        self.edges.remove(edge)
        self.adjacency[edge.u.id].remove(edge)
        self.adjacency[edge.v.id].remove(edge)
        self._rebuild_components()

    def _rebuild_components(self) -> None:
        self._parent = {t.id: t.id for t in self.vertices}
        self._members = {t.id: [t.id] for t in self.vertices}
        for edge in self.edges:
            self._union(edge.u.id, edge.v.id)

    def component_members(self, t: Term) -> list[int]:
        return self._members[self.find(t.id)]

    def components(self) -> list[list[Term]]:
        """Partition of the vertex set, ordered by smallest member id."""
        by_id = {t.id: t for t in self.vertices}
        reps = sorted(self._members)
        return [[by_id[i] for i in sorted(self._members[rep])] for rep in reps]

    def path(self, u: Term, v: Term) -> Path:
        if u.id not in self.vertex_ids or v.id not in self.vertex_ids:
            raise NotConnectedError(f"{u!r} or {v!r} is not a vertex")
        if u is v:
            return Path(u, u, ())
        prev: dict[int, PathStep] = {}
        queue = deque([u])
        seen = {u.id}
        while queue:
            cur = queue.popleft()
            if cur is v:
                break
            for edge in self.adjacency[cur.id]:
                nxt = edge.other(cur)
                if nxt.id in seen:
                    continue
                seen.add(nxt.id)
                prev[nxt.id] = PathStep(edge, forward=edge.u is cur)
                queue.append(nxt)
        if v.id not in prev:
            raise NotConnectedError(f"no path between {u!r} and {v!r}")
        steps: list[PathStep] = []
        cur = v
        while cur is not u:
            step = prev[cur.id]
            steps.append(step)
            cur = step.start
        steps.reverse()
        return Path(u, v, tuple(steps))


def parent_paths(graph: CongruenceGraph, edge: Edge) -> list[Path]:
    """Recompute the parent paths of a derived edge; empty pairs stay empty."""
    assert edge.is_derived
    return [graph.path(p, q) for p, q in edge.parents]


def close(
    equalities: Sequence[tuple[Literal, Side | None]],
    terms: Sequence[Term],
) -> CongruenceGraph:
    """Run congruence closure over the given equalities and term set.

    Input equalities are seeded in order before congruence merges; pending
    congruences are processed through one FIFO queue keyed by a signature
    table, so the resulting graph is deterministic.  Terms connected in the
    result are exactly those entailed equal by the input equalities.
    """
    term_ids = {t.id for t in terms}
    for t in terms:
        for arg in t.args:
            if arg.id not in term_ids:
                raise ClosureInputError(f"term set not subterm-closed at {t!r}")
    for lit, _ in equalities:
        if lit.lhs.id not in term_ids or lit.rhs.id not in term_ids:
            raise ClosureInputError(f"equality {lit!r} mentions a term outside T")

    graph = CongruenceGraph(terms)

    use: dict[int, list[Term]] = {t.id: [] for t in graph.vertices}
    for t in graph.vertices:
        for arg in dict.fromkeys(t.args):
            use[arg.id].append(t)

    def signature(t: Term) -> tuple:
        return (t.head, tuple(graph.find(a.id) for a in t.args))

    sig_table: dict[tuple, Term] = {}
    for t in graph.vertices:
        if t.args:
            sig_table[signature(t)] = t

    pending: deque[tuple] = deque()
    for lit, side in equalities:
        pending.append(("basic", lit, side))

    while pending:
        item = pending.popleft()
        if item[0] == "basic":
            _, lit, side = item
            s, t = lit.lhs, lit.rhs
            if graph.connected(s, t):
                continue
            graph.add_edge(s, t, origin=lit, side=side)
        else:
            _, s, t = item
            if graph.connected(s, t):
                continue
            graph.add_edge(s, t, parents=tuple(zip(s.args, t.args)))
        # Re-signature applications whose argument class changed.
        absorbed_members = sorted(graph.component_members(s))
        for member in absorbed_members:
            for app in use[member]:
                sig = signature(app)
                known = sig_table.get(sig)
                if known is None:
                    sig_table[sig] = app
                elif not graph.connected(app, known):
                    pending.append(("derived", app, known))
    return graph


def find_refuted_disequality(
    graph: CongruenceGraph, diseqs: Sequence[tuple[Literal, Side]]
) -> Literal | None:
    """First disequality whose endpoints are connected; B-side ones win."""
    for want in (Side.B, Side.A):
        for lit, side in diseqs:
            if side is want and graph.connected(lit.lhs, lit.rhs):
                return lit
    return None
