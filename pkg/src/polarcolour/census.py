"""Exhaustive small-graph enumeration, one representative per isomorphism
class.

Graphs are grown one vertex at a time; a new vertex attaches to the existing
ones through a multiplicity vector.  Because maximum local edge-connectivity,
maximum degree, and multiplicity are all monotone under taking induced
subgraphs, those constraints prune intermediate levels, which is what keeps
the multigraph censuses (multiplicity up to 3) tractable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapacityError, DomainError
from .multigraph import (
    Multigraph,
    canonical_form,
    is_2_connected,
    max_local_edge_connectivity,
)

#: Hard cap on enumeration size.
ENUMERATION_VERTEX_BOUND = 8


@dataclass(frozen=True)
class GraphFilter:
    """Constraint set for :func:`enumerate_multigraphs`.

    ``mlec`` demands the exact maximum local edge-connectivity of the final
    graphs; intermediate levels are pruned at ``mlec`` as an upper bound.
    """

    max_multiplicity: int = 1
    connected: bool = True
    two_connected: bool = False
    max_degree: int | None = None
    mlec: int | None = None
    mlec_at_most: int | None = None

    def prune_bound(self):
        if self.mlec_at_most is not None:
            return self.mlec_at_most
        return self.mlec


def _extension_vectors(i, max_mult, need_edge):
    rng = range(max_mult + 1)
    for vec in itertools.product(rng, repeat=i):
        if need_edge and not any(vec):
            continue
        yield vec


def _passes_intermediate(g, flt):
    if flt.max_degree is not None and g.max_degree() > flt.max_degree:
        return False
    bound = flt.prune_bound()
    if bound is not None and max_local_edge_connectivity(g, limit=bound + 1) > bound:
        return False
    return True


def _passes_final(g, flt):
    if flt.connected and not g.is_connected():
        return False
    if flt.two_connected and not is_2_connected(g):
        return False
    if flt.mlec is not None:
        if max_local_edge_connectivity(g, limit=flt.mlec + 1) != flt.mlec:
            return False
    return True


def enumerate_multigraphs(n, constraints: GraphFilter = GraphFilter()):
    """Yield one representative per isomorphism class on exactly n vertices.

    Deterministic: classes are yielded sorted by canonical key.
    """
    if n < 1 or n > ENUMERATION_VERTEX_BOUND:
        raise CapacityError(
            f"enumerate_multigraphs: n={n} outside 1..{ENUMERATION_VERTEX_BOUND}"
        )
    flt = constraints
    grow_connected = flt.connected or flt.two_connected
    level = [Multigraph([0], [])]
    for i in range(1, n):
        nxt = []
        seen = set()
        for g in level:
            eid0 = g.next_edge_id()
            for vec in _extension_vectors(i, flt.max_multiplicity, grow_connected):
                edges = list(g.edges)
                eid = eid0
                for w, mult in enumerate(vec):
                    for _ in range(mult):
                        edges.append((eid, w, i))
                        eid += 1
                g2 = Multigraph(range(i + 1), edges)
                if not _passes_intermediate(g2, flt):
                    continue
                key = canonical_form(g2).key
                if key in seen:
                    continue
                seen.add(key)
                nxt.append((key, g2))
        nxt.sort(key=lambda t: t[0])
        level = [g for _, g in nxt]
    out = [(canonical_form(g).key, g) for g in level if _passes_final(g, flt)]
    out.sort(key=lambda t: t[0])
    for _, g in out:
        yield g


def enumerate_multigraphs_upto(n, constraints: GraphFilter = GraphFilter()):
    """All classes with 1..n vertices, smaller orders first."""
    for i in range(1, n + 1):
        yield from enumerate_multigraphs(i, constraints)
