"""Polar graphs and polar assignments.

A polar graph is a multigraph plus a set of polarised edges.  A polarised
edge e=uv does not force its ends apart; instead it forbids exactly one
ordered colour pair R(e,u,v) = (c_u, c_v).  Colourings must satisfy

  (P1) phi(v) in L(v) for every vertex, and
  (P2) plain edges get distinct ends; a polarised edge e=uv only rules out
       R(e,u,v) = (phi(u), phi(v)).

Polarisation is stored once per edge in the orientation of the underlying
edge triple (eid, u, v); the symmetric view R(e,v,u) is computed, so the
symmetry requirement holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .multigraph import Multigraph, canonical_form

#: Colours are small non-negative integers.
Colour = int


@dataclass(frozen=True)
class PolarGraph:
    """Underlying multigraph plus the set of polarised edge ids."""

    underlying: Multigraph
    polarised: frozenset

    def __init__(self, underlying, polarised=()):
        polarised = frozenset(polarised)
        eids = {e for e, _, _ in underlying.edges}
        if not polarised <= eids:
            raise DomainError("polarised edge id not in underlying graph")
        object.__setattr__(self, "underlying", underlying)
        object.__setattr__(self, "polarised", polarised)

    @property
    def vertices(self):
        return self.underlying.vertices

    @property
    def edges(self):
        return self.underlying.edges

    @property
    def n(self):
        return self.underlying.n

    def is_polarised(self, eid):
        return eid in self.polarised

    def subgraph(self, g: Multigraph) -> "PolarGraph":
        """Polar subgraph induced by a subgraph of the underlying graph."""
        eids = {e for e, _, _ in g.edges}
        return PolarGraph(g, self.polarised & eids)

    def induced(self, keep) -> "PolarGraph":
        return self.subgraph(self.underlying.induced(keep))

    def delete_vertices(self, drop) -> "PolarGraph":
        return self.subgraph(self.underlying.delete_vertices(drop))

    def delete_edge(self, eid) -> "PolarGraph":
        return self.subgraph(self.underlying.delete_edge(eid))

    def canonical_key(self):
        pol = self.polarised
        return canonical_form(
            self.underlying, edge_colour=lambda e: 2 if e in pol else 1
        ).key


def plain(g: Multigraph) -> PolarGraph:
    """The polar graph with no polarised edges."""
    return PolarGraph(g, frozenset())


@dataclass(frozen=True)
class PolarAssignment:
    """Lists L plus polarisation R.

    ``lists`` maps every vertex of the polar graph to a frozenset of colours;
    ``polarisation`` maps every polarised edge id to the ordered pair
    (c_u, c_v) in the stored orientation of that edge.
    """

    lists: dict
    polarisation: dict

    def __init__(self, lists, polarisation=None):
        object.__setattr__(
            self, "lists", {v: frozenset(c) for v, c in dict(lists).items()}
        )
        object.__setattr__(
            self,
            "polarisation",
            {e: (int(a), int(b)) for e, (a, b) in dict(polarisation or {}).items()},
        )

    def __eq__(self, other):
        return (
            isinstance(other, PolarAssignment)
            and self.lists == other.lists
            and self.polarisation == other.polarisation
        )

    def __hash__(self):
        return hash(
            (
                frozenset(self.lists.items()),
                frozenset(self.polarisation.items()),
            )
        )

    def size(self, v):
        return len(self.lists[v])

    def is_uniform(self):
        distinct = set(self.lists.values())
        return len(distinct) <= 1

    def is_k_assignment(self, k):
        return all(len(c) == k for c in self.lists.values())

    def is_degree_assignment(self, q: PolarGraph):
        return all(len(self.lists[v]) >= q.underlying.degree(v) for v in q.vertices)

    def colours_used(self):
        out = set()
        for c in self.lists.values():
            out |= c
        for a, b in self.polarisation.values():
            out.add(a)
            out.add(b)
        return out

    def r(self, q: PolarGraph, eid, u, v):
        """R(e,u,v) with the symmetry rule applied."""
        a, b = q.underlying.edge_by_id(eid)
        cu, cv = self.polarisation[eid]
        if (u, v) == (a, b):
            return (cu, cv)
        if (u, v) == (b, a):
            return (cv, cu)
        raise DomainError("r(): endpoints do not match edge")

    def restrict(self, q_sub: PolarGraph) -> "PolarAssignment":
        """Restriction to a polar subgraph (lists and polarisation)."""
        return PolarAssignment(
            {v: self.lists[v] for v in q_sub.vertices},
            {e: self.polarisation[e] for e in q_sub.polarised},
        )


def validate_assignment(q: PolarGraph, gamma: PolarAssignment):
    """Domain check: lists cover V(Q) exactly, polarisation covers F(Q)."""
    if set(gamma.lists) != set(q.vertices):
        raise DomainError("assignment lists do not cover V(Q) exactly")
    if set(gamma.polarisation) != set(q.polarised):
        raise DomainError("polarisation domain is not exactly F(Q)")


#: A (partial or total) colouring is a plain dict vertex -> colour.
Colouring = dict


def check_colouring(q: PolarGraph, gamma: PolarAssignment, phi: Colouring) -> bool:
    """Whether phi is a Gamma-colouring of Q ((P1) and (P2)); phi must be
    total on V(Q)."""
    validate_assignment(q, gamma)
    if set(phi) != set(q.vertices):
        raise DomainError("check_colouring: phi not total on V(Q)")
    for v in q.vertices:
        if phi[v] not in gamma.lists[v]:
            return False
    for eid, u, v in q.edges:
        if eid in q.polarised:
            if gamma.r(q, eid, u, v) == (phi[u], phi[v]):
                return False
        elif phi[u] == phi[v]:
            return False
    return True


def check_partial(q: PolarGraph, gamma: PolarAssignment, phi: Colouring) -> bool:
    """Whether phi (partial) is a Gamma-colouring of Q[dom(phi)]."""
    dom = set(phi)
    for v in dom:
        if phi[v] not in gamma.lists[v]:
            return False
    for eid, u, v in q.edges:
        if u in dom and v in dom:
            if eid in q.polarised:
                if gamma.r(q, eid, u, v) == (phi[u], phi[v]):
                    return False
            elif phi[u] == phi[v]:
                return False
    return True


def colour_deletion(q, gamma, deleted, phi):
    """The (V',phi)-colour deletion from (Q,Gamma).

    Removes the coloured vertex set and prunes neighbour lists: a plain edge
    uv with v deleted removes phi(v) from L(u); a polarised edge removes c
    exactly when R(e,u,v) = (c, phi(v)).  Each edge removes at most one
    colour.  phi restricted to ``deleted`` must be a Gamma-colouring of
    Q[deleted].
    """
    validate_assignment(q, gamma)
    deleted = set(deleted)
    if not deleted <= set(q.vertices):
        raise DomainError("colour_deletion: deleted set outside V(Q)")
    part = {v: phi[v] for v in deleted}
    if not check_partial(q, gamma, part):
        raise DomainError("colour_deletion: phi is not a colouring of Q[V']")
    q2 = q.delete_vertices(deleted)
    lists = {}
    for u in q2.vertices:
        removed = set()
        for eid, w in q.underlying.adj[u]:
            if w not in deleted:
                continue
            if eid in q.polarised:
                c, d = gamma.r(q, eid, u, w)
                if d == phi[w]:
                    removed.add(c)
            else:
                removed.add(phi[w])
        lists[u] = gamma.lists[u] - removed
    pol = {e: gamma.polarisation[e] for e in q2.polarised}
    return q2, PolarAssignment(lists, pol)


def single_deletion(q, gamma, v, c):
    """The (v,c)-colour deletion."""
    return colour_deletion(q, gamma, {v}, {v: c})


def new_colour(gamma: PolarAssignment) -> Colour:
    """Smallest colour that is new for Gamma (absent from lists and R)."""
    used = gamma.colours_used()
    return max(used, default=-1) + 1


def colour_swap(gamma: PolarAssignment, c, c_new) -> PolarAssignment:
    """Replace c by c_new everywhere; c_new must be new for Gamma, c not."""
    used = gamma.colours_used()
    if c_new in used:
        raise DomainError("colour_swap: replacement colour is not new")
    if c not in used:
        raise DomainError("colour_swap: colour to replace is new")
    lists = {
        v: (s - {c}) | {c_new} if c in s else s for v, s in gamma.lists.items()
    }
    pol = {}
    for e, (a, b) in gamma.polarisation.items():
        pol[e] = (c_new if a == c else a, c_new if b == c else b)
    return PolarAssignment(lists, pol)


def polar_union(parts):
    """Union of (PolarGraph, PolarAssignment) pairs with disjoint edge sets.

    Vertices are shared by id; lists union pointwise on shared vertices.
    Returns (Q, Gamma, non_conflicting) where the flag reports whether the
    inputs were pairwise non-conflicting (shared-vertex lists disjoint).
    """
    parts = list(parts)
    vertices = set()
    edges = []
    eids = set()
    pol_edges = set()
    lists = {}
    pol = {}
    non_conflicting = True
    for q, gamma in parts:
        validate_assignment(q, gamma)
        vertices |= set(q.vertices)
        for t in q.edges:
            if t[0] in eids:
                raise DomainError(f"polar_union: shared edge id {t[0]}")
            eids.add(t[0])
            edges.append(t)
        pol_edges |= q.polarised
        for v, s in gamma.lists.items():
            if v in lists:
                if lists[v] & s:
                    non_conflicting = False
                lists[v] = lists[v] | s
            else:
                lists[v] = s
        pol.update(gamma.polarisation)
    q = PolarGraph(Multigraph(vertices, edges), pol_edges)
    return q, PolarAssignment(lists, pol), non_conflicting


def hajos_join(g0: Multigraph, v0, u0, g1: Multigraph, v1, u1) -> Multigraph:
    """Hajos join: delete one u0v0 edge and one u1v1 edge, identify v0 = v1,
    add one edge u0u1.

    Inputs are treated as vertex-disjoint.  g0 keeps its vertex and edge
    ids; g1's vertices are shifted past g0's (v1 maps onto v0) and its edge
    ids are shifted past g0's; the new edge id comes after all of those.
    """
    del0 = g0.edges_between(u0, v0)
    del1 = g1.edges_between(u1, v1)
    if not del0:
        raise DomainError("hajos_join: u0v0 not an edge of g0")
    if not del1:
        raise DomainError("hajos_join: u1v1 not an edge of g1")
    base = max(g0.vertices) + 1
    vmap = {}
    nxt = base
    for v in g1.vertices:
        if v == v1:
            vmap[v] = v0
        else:
            vmap[v] = nxt
            nxt += 1
    eshift = g0.next_edge_id()
    edges = [t for t in g0.edges if t[0] != del0[0]]
    for e, a, b in g1.edges:
        if e == del1[0]:
            continue
        edges.append((e + eshift, vmap[a], vmap[b]))
    new_eid = max(e for e, _, _ in edges) + 1 if edges else 0
    edges.append((new_eid, u0, vmap[u1]))
    verts = set(g0.vertices) | set(vmap.values())
    return Multigraph(verts, edges)


def top_up(
    q_base: PolarGraph, f: dict, q_plug: PolarGraph, v, k: int
) -> PolarGraph:
    """Attach k - f(u) fresh copies of q_plug at every vertex u of q_base,
    identifying each copy's v with u.

    Deterministic numbering: base vertices first, then copies in (vertex,
    copy-index) order, each copy's non-v vertices in increasing original
    order.  Copies carry the plug's polarised edges.
    """
    for u in q_base.vertices:
        if f[u] > k:
            raise DomainError(f"top_up: f({u}) = {f[u]} exceeds k = {k}")
        if f[u] < 0:
            raise DomainError(f"top_up: f({u}) negative")
    if v not in q_plug.vertices:
        raise DomainError("top_up: v not a plug vertex")
    edges = list(q_base.edges)
    pol = set(q_base.polarised)
    verts = set(q_base.vertices)
    next_v = max(q_base.vertices) + 1 if q_base.vertices else 0
    next_e = q_base.underlying.next_edge_id()
    plug_others = [w for w in q_plug.vertices if w != v]
    for u in q_base.vertices:
        for _ in range(k - f[u]):
            vmap = {v: u}
            for w in plug_others:
                vmap[w] = next_v
                next_v += 1
            emap = {}
            for e, a, b in q_plug.edges:
                emap[e] = next_e
                edges.append((next_e, vmap[a], vmap[b]))
                next_e += 1
            pol |= {emap[e] for e in q_plug.polarised}
            verts |= set(vmap.values())
    return PolarGraph(Multigraph(verts, edges), pol)
