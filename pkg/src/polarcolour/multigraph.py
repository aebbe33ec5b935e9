"""Loopless multigraphs with stable edge ids.

Vertices are small non-negative integers; constructors produce the dense
range 0..n-1, but subgraph operations keep the parent's vertex and edge ids
so that list assignments and polarisation keys survive deletions unchanged.

Provides block decomposition (Hopcroft-Tarjan with parallel-edge support),
local edge/vertex connectivity via augmenting paths, and canonical forms for
isomorphism-class dedup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError

#: Largest vertex count accepted by canonical_form.
CANONICAL_VERTEX_BOUND = 16

#: Largest vertex count canonicalised by brute permutation sweep (numpy path).
_BRUTE_CANON_BOUND = 8

#: Cap on within-cell labellings tried by the refinement fallback.
_CELL_LABELLING_BUDGET = 2_000_000


class Multigraph:
    """An immutable loopless multigraph.

    ``edges`` is a tuple of ``(edge_id, u, v)`` triples; edge ids are unique
    and stable, parallel edges are distinct triples with equal endpoints.
    """

    __slots__ = ("vertices", "edges", "_adj", "_mult", "_eid")

    def __init__(self, vertices, edges):
        vs = tuple(sorted(set(vertices)))
        vset = set(vs)
        seen = set()
        for eid, u, v in edges:
            if u == v:
                raise DomainError(f"loop at vertex {u} (edge {eid})")
            if u not in vset or v not in vset:
                raise DomainError(f"edge {eid} endpoint outside vertex set")
            if eid in seen:
                raise DomainError(f"duplicate edge id {eid}")
            seen.add(eid)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", tuple((e, u, v) for e, u, v in edges))
        object.__setattr__(self, "_adj", None)
        object.__setattr__(self, "_mult", None)
        object.__setattr__(self, "_eid", None)

    def __setattr__(self, name, value):
        raise AttributeError("Multigraph is immutable")

    # -- basic accessors ---------------------------------------------------

    @property
    def n(self):
        return len(self.vertices)

    @property
    def m(self):
        return len(self.edges)

    def __eq__(self, other):
        return (
            isinstance(other, Multigraph)
            and self.vertices == other.vertices
            and sorted(self.edges) == sorted(other.edges)
        )

    def __hash__(self):
        return hash((self.vertices, tuple(sorted(self.edges))))

    def __repr__(self):
        return f"Multigraph(n={self.n}, m={self.m})"

    @property
    def adj(self):
        """Map vertex -> tuple of (edge_id, other endpoint)."""
        if self._adj is None:
            adj = {v: [] for v in self.vertices}
            for eid, u, v in self.edges:
                adj[u].append((eid, v))
                adj[v].append((eid, u))
            object.__setattr__(
                self, "_adj", {v: tuple(sorted(nbrs)) for v, nbrs in adj.items()}
            )
        return self._adj

    def edge_by_id(self, eid):
        if self._eid is None:
            object.__setattr__(self, "_eid", {e: (u, v) for e, u, v in self.edges})
        try:
            return self._eid[eid]
        except KeyError:
            raise DomainError(f"no edge with id {eid}") from None

    def degree(self, v):
        return len(self.adj[v])

    def degrees(self):
        return {v: len(self.adj[v]) for v in self.vertices}

    def multiplicity(self, u, v):
        """e(u,v): the number of edges joining u and v."""
        if self._mult is None:
            mult = {}
            for _, a, b in self.edges:
                key = (a, b) if a < b else (b, a)
                mult[key] = mult.get(key, 0) + 1
            object.__setattr__(self, "_mult", mult)
        return self._mult.get((u, v) if u < v else (v, u), 0)

    def neighbours(self, v):
        return sorted({w for _, w in self.adj[v]})

    def edges_between(self, u, v):
        return [eid for eid, w in self.adj[u] if w == v]

    def parallel_classes(self):
        """Map unordered vertex pair -> list of edge ids."""
        out = {}
        for eid, u, v in self.edges:
            key = (u, v) if u < v else (v, u)
            out.setdefault(key, []).append(eid)
        return out

    def is_simple(self):
        return all(len(ids) == 1 for ids in self.parallel_classes().values())

    def max_degree(self):
        return max((self.degree(v) for v in self.vertices), default=0)

    def min_degree(self):
        return min((self.degree(v) for v in self.vertices), default=0)

    def next_edge_id(self):
        return max((e for e, _, _ in self.edges), default=-1) + 1

    # -- derived graphs ----------------------------------------------------

    def induced(self, keep):
        """Induced subgraph on ``keep``; vertex and edge ids are preserved."""
        keep = set(keep)
        if not keep <= set(self.vertices):
            raise DomainError("induced(): vertex outside graph")
        edges = [(e, u, v) for e, u, v in self.edges if u in keep and v in keep]
        return Multigraph(keep, edges)

    def delete_vertices(self, drop):
        drop = set(drop)
        return self.induced(set(self.vertices) - drop)

    def delete_edges(self, eids):
        eids = set(eids)
        missing = eids - {e for e, _, _ in self.edges}
        if missing:
            raise DomainError(f"no edge with id {sorted(missing)[0]}")
        return Multigraph(self.vertices, [t for t in self.edges if t[0] not in eids])

    def delete_edge(self, eid):
        return self.delete_edges([eid])

    def with_edge(self, u, v, eid=None):
        if eid is None:
            eid = self.next_edge_id()
        return Multigraph(self.vertices, list(self.edges) + [(eid, u, v)])

    def relabelled(self, mapping):
        """Rename vertices through ``mapping`` (must be injective on V)."""
        img = [mapping[v] for v in self.vertices]
        if len(set(img)) != len(img):
            raise DomainError("relabelled(): mapping not injective")
        return Multigraph(img, [(e, mapping[u], mapping[v]) for e, u, v in self.edges])

    def densified(self):
        """Relabel vertices onto 0..n-1 keeping relative order; return
        (graph, old->new map)."""
        mapping = {v: i for i, v in enumerate(self.vertices)}
        return self.relabelled(mapping), mapping

    # -- connectivity ------------------------------------------------------

    def components(self):
        seen = set()
        comps = []
        for start in self.vertices:
            if start in seen:
                continue
            comp = {start}
            queue = [start]
            while queue:
                v = queue.pop()
                for _, w in self.adj[v]:
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self):
        return self.n > 0 and len(self.components()) == 1


# ---------------------------------------------------------------------------
# blocks and the block-cut tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """One block of a multigraph, with the classification used downstream."""

    block_id: int
    vertices: frozenset
    edge_ids: frozenset
    is_k2: bool
    is_leaf: bool
    is_complete: bool
    is_odd_cycle: bool
    degree: int | None  # d(B) when the block is vertex-regular, else None


@dataclass(frozen=True)
class BlockCutTree:
    blocks: tuple
    cut_vertices: frozenset
    incidences: frozenset  # (cut vertex, block_id) pairs
    internal: dict = field(hash=False)  # block_id -> frozenset I(B)

    def blocks_at(self, v):
        return [b for b in self.blocks if v in b.vertices]

    def block_of_edge(self, eid):
        for b in self.blocks:
            if eid in b.edge_ids:
                return b
        raise DomainError(f"edge {eid} not in any block")


def _block_edge_sets(g):
    """Edge-id sets of the blocks (iterative Hopcroft-Tarjan).

    Parallel edges are handled by skipping only the single tree edge used to
    enter a vertex, so a parallel pair forms a 2-connected block.
    """
    disc = {}
    low = {}
    estack = []
    out = []
    time = 0
    for root in g.vertices:
        if root in disc:
            continue
        disc[root] = low[root] = time
        time += 1
        work = [(root, None, iter(g.adj[root]))]
        while work:
            v, pe, it = work[-1]
            child = None
            for eid, w in it:
                if eid == pe:
                    continue
                if w not in disc:
                    estack.append(eid)
                    disc[w] = low[w] = time
                    time += 1
                    child = (w, eid)
                    break
                if disc[w] < disc[v]:
                    estack.append(eid)
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if child is not None:
                work.append((child[0], child[1], iter(g.adj[child[0]])))
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
                if low[v] >= disc[u]:
                    comp = []
                    while True:
                        e = estack.pop()
                        comp.append(e)
                        if e == pe:
                            break
                    out.append(frozenset(comp))
    return out


def _classify_block(g, vset, eids):
    b = len(vset)
    m = len(eids)
    degs = {}
    simple = True
    pairs = set()
    for eid in eids:
        u, v = g.edge_by_id(eid)
        degs[u] = degs.get(u, 0) + 1
        degs[v] = degs.get(v, 0) + 1
        key = (u, v) if u < v else (v, u)
        if key in pairs:
            simple = False
        pairs.add(key)
    vals = set(degs.values())
    regular = len(vals) == 1
    d = vals.pop() if regular else None
    complete = simple and m == b * (b - 1) // 2 and (b < 2 or regular)
    odd_cycle = simple and b >= 3 and m == b and b % 2 == 1 and d == 2
    return complete, odd_cycle, d if regular else None


def blocks(g: Multigraph) -> BlockCutTree:
    """Block decomposition with cut vertices and block classification."""
    esets = _block_edge_sets(g)
    vsets = []
    for eids in esets:
        vs = set()
        for eid in eids:
            u, v = g.edge_by_id(eid)
            vs.add(u)
            vs.add(v)
        vsets.append(frozenset(vs))
    count = {}
    for vs in vsets:
        for v in vs:
            count[v] = count.get(v, 0) + 1
    cut = frozenset(v for v, c in count.items() if c >= 2)
    blks = []
    for i, (vs, eids) in enumerate(zip(vsets, esets)):
        complete, odd_cycle, d = _classify_block(g, vs, eids)
        n_cut = len(vs & cut)
        blks.append(
            Block(
                block_id=i,
                vertices=vs,
                edge_ids=eids,
                is_k2=(len(eids) == 1),
                is_leaf=(n_cut <= 1),
                is_complete=complete,
                is_odd_cycle=odd_cycle,
                degree=d,
            )
        )
    incid = frozenset((v, b.block_id) for b in blks for v in b.vertices & cut)
    internal = {b.block_id: frozenset(b.vertices - cut) for b in blks}
    return BlockCutTree(tuple(blks), cut, incid, internal)


def is_2_connected(g: Multigraph) -> bool:
    """Connected, at least two vertices, no cut vertex, and not a single
    edge. I_k for k >= 2 counts as 2-connected."""
    if g.n < 2 or not g.is_connected():
        return False
    bct = blocks(g)
    return len(bct.blocks) == 1 and not bct.blocks[0].is_k2


# ---------------------------------------------------------------------------
# local edge- and vertex-connectivity (augmenting paths, unit capacities)
# ---------------------------------------------------------------------------


def local_edge_connectivity(g: Multigraph, u, v, limit=None) -> int:
    """lambda(u,v): maximum number of edge-disjoint (u,v)-paths (Menger).

    ``limit`` stops augmenting once that many paths are found (used by
    census pruning, where only "exceeds the bound" matters).
    """
    if u == v:
        raise DomainError("local_edge_connectivity: u == v")
    cap = {}
    for _, a, b in g.edges:
        cap[(a, b)] = cap.get((a, b), 0) + 1
        cap[(b, a)] = cap.get((b, a), 0) + 1
    flow = 0
    while limit is None or flow < limit:
        # BFS for an augmenting path in the residual graph
        prev = {u: None}
        queue = [u]
        while queue and v not in prev:
            x = queue.pop(0)
            for _, y in g.adj[x]:
                if y not in prev and cap.get((x, y), 0) > 0:
                    prev[y] = x
                    queue.append(y)
        if v not in prev:
            return flow
        y = v
        while prev[y] is not None:
            x = prev[y]
            cap[(x, y)] -= 1
            cap[(y, x)] = cap.get((y, x), 0) + 1
            y = x
        flow += 1
    return flow


def local_vertex_connectivity(g: Multigraph, u, v) -> int:
    """kappa(u,v): maximum number of internally disjoint (u,v)-paths.

    Parallel edges count as distinct length-one paths.  Computed by max flow
    on the split-vertex digraph with unit vertex capacities.
    """
    if u == v:
        raise DomainError("local_vertex_connectivity: u == v")
    # nodes: ("in", w) and ("out", w); arcs with residual capacities
    cap = {}

    def add(a, b, c):
        cap[(a, b)] = cap.get((a, b), 0) + c

    for w in g.vertices:
        add(("in", w), ("out", w), 1 if w not in (u, v) else g.m + 1)
    for _, a, b in g.edges:
        add(("out", a), ("in", b), 1)
        add(("out", b), ("in", a), 1)
    src, snk = ("out", u), ("in", v)
    flow = 0
    while True:
        prev = {src: None}
        queue = [src]
        while queue and snk not in prev:
            x = queue.pop(0)
            for (a, b), c in list(cap.items()):
                if a == x and c > 0 and b not in prev:
                    prev[b] = x
                    queue.append(b)
        if snk not in prev:
            return flow
        y = snk
        while prev[y] is not None:
            x = prev[y]
            cap[(x, y)] -= 1
            cap[(y, x)] = cap.get((y, x), 0) + 1
            y = x
        flow += 1


def max_local_edge_connectivity(g: Multigraph, limit=None) -> int:
    """Maximum of lambda(u,v) over all vertex pairs; 0 when |V| <= 1.

    With ``limit`` set, returns early once some pair reaches it.
    """
    if g.n <= 1:
        return 0
    best = 0
    vs = g.vertices
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            # lambda(u,v) <= min degree; skip pairs that cannot beat best
            if min(g.degree(vs[i]), g.degree(vs[j])) <= best:
                continue
            lam = local_edge_connectivity(g, vs[i], vs[j], limit=limit)
            if lam > best:
                best = lam
                if limit is not None and best >= limit:
                    return best
    return best


def max_local_vertex_connectivity(g: Multigraph) -> int:
    if g.n <= 1:
        return 0
    vs = g.vertices
    return max(
        local_vertex_connectivity(g, vs[i], vs[j])
        for i in range(len(vs))
        for j in range(i + 1, len(vs))
    )


def is_k_edge_connected(g: Multigraph, k: int) -> bool:
    """At least two vertices, and lambda(u,v) >= k for all pairs."""
    if g.n < 2:
        return False
    if not g.is_connected():
        return False
    vs = g.vertices
    return all(
        local_edge_connectivity(g, vs[i], vs[j]) >= k
        for i in range(len(vs))
        for j in range(i + 1, len(vs))
    )


# ---------------------------------------------------------------------------
# canonical forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    """Isomorphism-invariant key plus one relabelling that attains it.

    ``relabelling`` maps each vertex of the input graph to its canonical
    position; two multigraphs are isomorphic iff their keys are equal.
    """

    key: bytes
    relabelling: dict = field(hash=False, compare=False)


@lru_cache(maxsize=None)
def _all_perms(n):
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64)


def _pair_codes(g, edge_colour):
    """n x n int16 matrix of pair codes over densified vertices."""
    dense, mapping = g.densified()
    n = dense.n
    codes = np.zeros((n, n), dtype=np.int16)
    for eid, u, v in dense.edges:
        c = 1 if edge_colour is None else edge_colour(eid)
        # code packs plain multiplicity in the low nibble, coloured in the next
        shift = 0 if c == 1 else 4
        codes[u, v] += 1 << shift
        codes[v, u] += 1 << shift
    return codes, mapping


def _canon_brute(codes):
    n = codes.shape[0]
    perms = _all_perms(n)
    mats = codes[perms[:, :, None], perms[:, None, :]]
    iu = np.triu_indices(n, 1)
    rows = np.ascontiguousarray(mats[:, iu[0], iu[1]])
    order = np.lexsort(rows.T[::-1])
    best = order[0]
    return rows[best].astype(np.int16).tobytes(), perms[best]


def _canon_refine(codes):
    n = codes.shape[0]
    labels = [0] * n
    while True:
        keys = []
        for v in range(n):
            prof = sorted((labels[w], int(codes[v, w])) for w in range(n) if codes[v, w])
            keys.append((labels[v], tuple(prof)))
        uniq = sorted(set(keys))
        new = [uniq.index(k) for k in keys]
        if new == labels:
            break
        labels = new
    cells = {}
    for v, lab in enumerate(labels):
        cells.setdefault(lab, []).append(v)
    ordered_cells = [cells[lab] for lab in sorted(cells)]
    total = 1
    for c in ordered_cells:
        for i in range(2, len(c) + 1):
            total *= i
        if total > _CELL_LABELLING_BUDGET:
            raise CapacityError("canonical_form: cell labelling budget exceeded")
    best_key = None
    best_perm = None
    iu = np.triu_indices(n, 1)
    for parts in itertools.product(*(itertools.permutations(c) for c in ordered_cells)):
        perm = [v for part in parts for v in part]
        arr = np.array(perm, dtype=np.int64)
        mat = codes[arr[:, None], arr[None, :]]
        key = np.ascontiguousarray(mat[iu]).astype(np.int16).tobytes()
        if best_key is None or key < best_key:
            best_key = key
            best_perm = perm
    return best_key, np.array(best_perm)


def canonical_form(g: Multigraph, edge_colour=None) -> CanonicalForm:
    """Canonical form of a multigraph, optionally with 2-coloured edges.

    ``edge_colour`` maps edge id -> 1 (plain) or 2 (marked); it is how the
    polar layer encodes polarised edges into the key.
    """
    if g.n > CANONICAL_VERTEX_BOUND:
        raise CapacityError(
            f"canonical_form: |V|={g.n} exceeds bound {CANONICAL_VERTEX_BOUND}"
        )
    if g.n == 0:
        return CanonicalForm(b"", {})
    codes, mapping = _pair_codes(g, edge_colour)
    if g.n <= _BRUTE_CANON_BOUND:
        key, perm = _canon_brute(codes)
    else:
        key, perm = _canon_refine(codes)
    # perm[i] = dense vertex placed at canonical position i
    pos = {int(perm[i]): i for i in range(len(perm))}
    relabel = {v: pos[mapping[v]] for v in g.vertices}
    return CanonicalForm(bytes([g.n]) + key, relabel)


def are_isomorphic(g1: Multigraph, g2: Multigraph) -> bool:
    if g1.n != g2.n or g1.m != g2.m:
        return False
    return canonical_form(g1).key == canonical_form(g2).key


# ---------------------------------------------------------------------------
# small constructors
# ---------------------------------------------------------------------------


def from_pairs(n, pairs):
    """Multigraph on 0..n-1 with one edge per listed pair, ids by position."""
    return Multigraph(range(n), [(i, u, v) for i, (u, v) in enumerate(pairs)])


def complete_graph(n):
    return from_pairs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle_graph(n):
    if n < 3:
        raise DomainError("cycle_graph: need n >= 3")
    return from_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n):
    return from_pairs(n, [(i, i + 1) for i in range(n - 1)])


def parallel_graph(k):
    """I_k: two vertices joined by k parallel edges."""
    if k < 1:
        raise DomainError("parallel_graph: need k >= 1")
    return Multigraph(range(2), [(i, 0, 1) for i in range(k)])


def wheel_graph(rim):
    """Wheel with ``rim`` rim vertices (0..rim-1) and hub ``rim``."""
    if rim < 3:
        raise DomainError("wheel_graph: need rim >= 3")
    pairs = [(i, (i + 1) % rim) for i in range(rim)]
    pairs += [(i, rim) for i in range(rim)]
    return from_pairs(rim + 1, pairs)
