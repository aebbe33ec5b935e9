"""Exhaustive sweeps over list/polar assignments of one graph.

The quantifier "for every k-polar assignment" is made finite in two steps:

* colours: an assignment using C distinct colours is equivalent, up to
  renaming, to one whose colours appear in first-use order over the vertex
  sequence; the sweep enumerates exactly those (a small constant factor
  above one-per-orbit, harmless for forall/exists/max questions);
* polarisation: a forbidden-pair component outside the endpoint's list can
  never match a colouring, so a single fresh sentinel per side captures all
  such choices (the pair menu for edge uv is (L(u)+fresh) x (L(v)+fresh)).

Two prunes keep the tree small; both only ever skip subtrees whose every
completion is colourable, so UNSAT witnesses and restriction maxima are
exact:

* prefix-UNSAT: if the partially-assigned subgraph already has no
  colouring, every completion is UNSAT (a full colouring restricts to one
  of the prefix);
* suffix-slack: if some prefix colouring phi leaves the unassigned suffix
  greedily orderable - repeatedly remove a suffix vertex whose remaining
  list size f(v), minus the distinct phi-colours over plain edges into the
  prefix, minus one per polar edge into the prefix, exceeds its count of
  plain parallel classes plus polar edges into the rest of the suffix -
  then every completion extends phi, whatever lists it picks.

Both prunes are cross-checked against unpruned enumeration in the tests.
"""

from __future__ import annotations

import itertools

from .errors import CapacityError
from ._kernel import Instance, enumerate_instance, solve_instance
from .polar import PolarAssignment

#: Cap on prefix colourings scanned while looking for a slack witness.
PREFIX_ENUM_CAP = 512

#: Node budget for each leaf solve.
LEAF_SOLVE_BUDGET = 10_000_000


class Budget:
    """Mutable node counter shared across a whole query."""

    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self, amount=1):
        self.used += amount
        if self.used > self.limit:
            raise CapacityError(f"search budget exceeded ({self.limit} nodes)")


class _SweepState:
    def __init__(self, q, order, sizes):
        self.q = q
        self.order = order
        self.sizes = sizes
        self.g = q.underlying
        self.pos = {v: i for i, v in enumerate(order)}
        # polar edges become choice points once both endpoints have lists;
        # plain edges never do
        self.edge_close = {i: [] for i in range(len(order))}
        for eid, u, v in q.edges:
            if eid in q.polarised:
                close_at = max(self.pos[u], self.pos[v])
                self.edge_close[close_at].append((eid, u, v))
        for lst in self.edge_close.values():
            lst.sort()
        self.lists = {}
        self.pol = {}
        self.used = 0


def _prefix_gamma(st, upto):
    """Assignment for the prefix polar subgraph after level ``upto``."""
    prefix = set(st.order[: upto + 1])
    sub = st.q.induced(prefix)
    return sub, PolarAssignment(
        {v: st.lists[v] for v in sub.vertices},
        {e: st.pol[e] for e in sub.polarised},
    )


def _suffix_orderable(st, upto, phi):
    """Greedy-orderability of the suffix given prefix colouring phi."""
    g = st.g
    prefix = set(st.order[: upto + 1])
    suffix = set(st.order[upto + 1 :])
    f = {}
    for w in suffix:
        plain_cols = set()
        polar_cnt = 0
        for eid, x in g.adj[w]:
            if x in prefix:
                if eid in st.q.polarised:
                    polar_cnt += 1
                else:
                    plain_cols.add(phi[x])
        f[w] = st.sizes[w] - len(plain_cols) - polar_cnt
    remaining = set(suffix)
    while remaining:
        peeled = None
        for w in sorted(remaining):
            classes = set()
            polar_cnt = 0
            for eid, x in g.adj[w]:
                if x in remaining and x != w:
                    if eid in st.q.polarised:
                        polar_cnt += 1
                    else:
                        classes.add(x)
            if f[w] > len(classes) + polar_cnt:
                peeled = w
                break
        if peeled is None:
            return False
        remaining.discard(peeled)
    return True


def _slack_colourings(st, upto, budget):
    """Iterate prefix colourings (capped); yields (phi, orderable)."""
    sub, gamma = _prefix_gamma(st, upto)
    inst = Instance(sub, gamma)
    budget.spend(1)
    sols, truncated = enumerate_instance(inst, PREFIX_ENUM_CAP)
    for phi in sols:
        yield phi, _suffix_orderable(st, upto, phi)
    # truncated only weakens pruning, never soundness


def _complete_canonically(st):
    """Extend the current prefix to a full assignment (used when the prefix
    is already uncolourable, so the completion's details are irrelevant)."""
    lists = dict(st.lists)
    used = st.used
    for v in st.order:
        if v not in lists:
            lists[v] = frozenset(range(used, used + st.sizes[v]))
            used += st.sizes[v]
    pol = dict(st.pol)
    fresh = used
    for eid, u, v in st.q.edges:
        if eid in st.q.polarised and eid not in pol:
            pol[eid] = (fresh, fresh)
    return PolarAssignment(lists, pol)


def _list_choices(st, v):
    """First-use normalized list choices for vertex v: any subset of the
    used colours padded with the next consecutive new ones."""
    size = st.sizes[v]
    used = st.used
    if used + size > 61:
        raise CapacityError("sweep: colour universe exceeds the kernel width")
    out = []
    for j in range(size, -1, -1):
        if size - j > used:
            continue
        new = tuple(range(used, used + j))
        for old in itertools.combinations(range(used), size - j):
            out.append((frozenset(old + new), used + j))
    out.sort(key=lambda t: tuple(sorted(t[0])))
    return out


def _pair_menu(st, u, v):
    """Polarisation menu for a polarised edge uv (stored orientation)."""
    fresh = 63  # sentinel outside every enumerable list (used < 63)
    cu = sorted(st.lists[u]) + [fresh]
    cv = sorted(st.lists[v]) + [fresh]
    return [(a, b) for a in cu for b in cv]


def sweep_unsat_witness(
    q, sizes, budget, on_leaf=None, prune_unsat_prefix=True, stop_at_witness=True
):
    """Search all assignments (up to renaming) for an uncolourable one.

    Returns (witness_assignment, solve_nodes) or None when every assignment
    is colourable.  ``on_leaf(gamma, sat)`` is invoked for every leaf that
    is actually solved (used by equivalence tests); subtree skips happen
    only when every completion is provably colourable.

    Equivalence tests set ``prune_unsat_prefix=False`` (so that every
    uncolourable assignment reaches a leaf and gets classified) and
    ``stop_at_witness=False`` (scan everything).
    """
    order = sorted(q.vertices, key=lambda v: (-q.underlying.degree(v), v))
    st = _SweepState(q, order, sizes)
    n = len(order)

    def vertex_level(i):
        if i == n:
            return leaf()
        v = order[i]
        for lst, used2 in _list_choices(st, v):
            st.lists[v] = lst
            prev_used = st.used
            st.used = used2
            res = edge_level(i, 0)
            st.used = prev_used
            del st.lists[v]
            if res is not None:
                return res
        return None

    def edge_level(i, j):
        closing = st.edge_close[i]
        if j == len(closing):
            return after_level(i)
        eid, u, v = closing[j]
        for pair in _pair_menu(st, u, v):
            st.pol[eid] = pair
            res = edge_level(i, j + 1)
            del st.pol[eid]
            if res is not None:
                return res
        return None

    def after_level(i):
        budget.spend(1)
        if i == n - 1:
            return leaf()
        if prune_unsat_prefix:
            sub, gamma = _prefix_gamma(st, i)
            status, _, _ = solve_instance(Instance(sub, gamma), LEAF_SOLVE_BUDGET)
            if status == -1:
                raise CapacityError("sweep: leaf solve budget exceeded")
            if status == 0:
                # every completion is UNSAT; report one canonical completion
                witness = _complete_canonically(st)
                return (witness, 0)
        found = None
        for _, orderable in _slack_colourings(st, i, budget):
            if orderable:
                return found  # every completion colourable; skip subtree
        return vertex_level(i + 1)

    def leaf():
        gamma = PolarAssignment(dict(st.lists), dict(st.pol))
        status, phi, nodes = solve_instance(Instance(st.q, gamma), LEAF_SOLVE_BUDGET)
        if status == -1:
            raise CapacityError("sweep: leaf solve budget exceeded")
        sat = status == 1
        if on_leaf is not None:
            on_leaf(gamma, sat)
        if not sat and stop_at_witness:
            return (gamma, nodes)
        return None

    if n == 0:
        return None
    # return semantics: None means the subtree finished without a witness
    # (exhausted or pruned as all-SAT)
    res = vertex_level(0)
    return res


def sweep_restriction(q, sizes, target, budget, early_stop=None, skip_above=None):
    """Maximum |M(v)| at ``target`` over all assignments (up to renaming).

    Returns (best, witness_assignment, witness_M).  ``early_stop`` ends the
    search once best >= early_stop.  ``skip_above`` caps the useful maximum
    (used by callers that already know a theoretical bound).
    """
    order = [target] + sorted(
        (v for v in q.vertices if v != target),
        key=lambda v: (-q.underlying.degree(v), v),
    )
    st = _SweepState(q, order, sizes)
    n = len(order)
    best = [0, None, frozenset()]
    cap = sizes[target] if skip_above is None else min(skip_above, sizes[target])

    def done():
        if early_stop is not None and best[0] >= early_stop:
            return True
        return best[0] >= cap

    def vertex_level(i):
        if i == n:
            leaf()
            return
        v = order[i]
        for lst, used2 in _list_choices(st, v):
            st.lists[v] = lst
            prev_used = st.used
            st.used = used2
            edge_level(i, 0)
            st.used = prev_used
            del st.lists[v]
            if done():
                return
        return

    def edge_level(i, j):
        closing = st.edge_close[i]
        if j == len(closing):
            after_level(i)
            return
        eid, u, v = closing[j]
        for pair in _pair_menu(st, u, v):
            st.pol[eid] = pair
            edge_level(i, j + 1)
            del st.pol[eid]
            if done():
                return
        return

    def after_level(i):
        budget.spend(1)
        if i == n - 1:
            leaf()
            return
        # bound the subtree: colours of the target that some slack prefix
        # colouring can always realize are unrestricted in every completion
        realizable = set()
        any_phi = False
        for phi, orderable in _slack_colourings(st, i, budget):
            any_phi = True
            if orderable:
                realizable.add(phi[target])
                if st.lists[target] <= realizable:
                    return
        if not any_phi:
            # prefix uncolourable: every completion is globally UNSAT, so
            # the target is restricted on its whole list
            witness = _complete_canonically(st)
            if len(st.lists[target]) > best[0]:
                best[0] = len(st.lists[target])
                best[1] = witness
                best[2] = frozenset(st.lists[target])
            return
        upper = len(st.lists[target] - realizable)
        if upper <= best[0]:
            return
        vertex_level(i + 1)

    def leaf():
        gamma = PolarAssignment(dict(st.lists), dict(st.pol))
        inst = Instance(st.q, gamma)
        m_set = set()
        for c in sorted(gamma.lists[target]):
            forced = Instance(st.q, PolarAssignment(
                {v: (s if v != target else frozenset([c])) for v, s in gamma.lists.items()},
                gamma.polarisation,
            ))
            status, _, _ = solve_instance(forced, LEAF_SOLVE_BUDGET)
            if status == -1:
                raise CapacityError("sweep: leaf solve budget exceeded")
            if status == 0:
                m_set.add(c)
        if len(m_set) > best[0]:
            best[0] = len(m_set)
            best[1] = gamma
            best[2] = frozenset(m_set)

    if n == 0:
        return 0, None, frozenset()
    vertex_level(0)
    return best[0], best[1], best[2]
