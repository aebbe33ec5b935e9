"""Backtracking kernel for Gamma-colouring, with two interchangeable
backends.

The search state lives in small numpy int64 arrays (colour lists are
bitmasks), written so the very same function body either runs as plain
Python/numpy or gets compiled by numba.  Select with the environment
variable ``POLARCOLOUR_BACKEND``:

    POLARCOLOUR_BACKEND=numba    force the numba-compiled kernels
    POLARCOLOUR_BACKEND=python   force the pure-Python/numpy fallback

Default is numba when importable, else python.  Both backends execute the
identical algorithm, so witnesses and node counts match bit for bit; the
benchmark in benchmarks/bench_backends.py compares them.

Search order (deterministic): next vertex is the unassigned one with the
fewest remaining colours, ties by index; colours in increasing order;
singleton lists are propagated eagerly.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import CapacityError, DomainError

#: Colours handled by the bitmask kernel (bit 62 is reserved as the fresh
#: sentinel used by assignment enumeration; bit 63 is the sign bit).
MAX_COLOURS = 62

_M1 = np.int64(0x5555555555555555)
_M2 = np.int64(0x3333333333333333)
_M4 = np.int64(0x0F0F0F0F0F0F0F0F)
_ONE = np.int64(1)


def _solve_impl(n, masks0, eu, ev, pcu, pcv, budget):  # pragma: no cover
    """Complete backtracking search.

    masks0[v] is the bitmask of allowed colours; (eu[e], ev[e]) are edge
    endpoints; pcu[e]/pcv[e] give the forbidden ordered pair of a polarised
    edge (or -1/-1 for a plain edge, which forbids equal ends).

    Returns (status, colours, nodes): status 1 SAT, 0 UNSAT, -1 budget hit.
    """
    m = eu.shape[0]
    masks = masks0.copy()
    colour = np.full(n, -1, np.int64)
    nodes = 0

    snap_masks = np.empty((n + 1, n), np.int64)
    snap_col = np.empty((n + 1, n), np.int64)
    dec_v = np.empty(n + 1, np.int64)
    dec_c = np.empty(n + 1, np.int64)

    # --- initial unit propagation ---
    while True:
        unit = -1
        wipe = False
        for v in range(n):
            if colour[v] < 0:
                x = masks[v]
                x = x - ((x >> 1) & _M1)
                x = (x & _M2) + ((x >> 2) & _M2)
                x = (x + (x >> 4)) & _M4
                x = x + (x >> 8)
                x = x + (x >> 16)
                x = x + (x >> 32)
                pc = x & np.int64(0x7F)
                if pc == 0:
                    wipe = True
                    break
                if pc == 1 and unit < 0:
                    unit = v
        if wipe:
            return 0, colour, nodes
        if unit < 0:
            break
        c = 0
        while (masks[unit] >> np.int64(c)) & _ONE == 0:
            c += 1
        colour[unit] = c
        nodes += 1
        if nodes > budget:
            return -1, colour, nodes
        for e in range(m):
            if eu[e] == unit:
                w = ev[e]
                if pcu[e] < 0:
                    masks[w] = masks[w] & ~(_ONE << np.int64(c))
                elif pcu[e] == c:
                    masks[w] = masks[w] & ~(_ONE << np.int64(pcv[e]))
            elif ev[e] == unit:
                w = eu[e]
                if pcu[e] < 0:
                    masks[w] = masks[w] & ~(_ONE << np.int64(c))
                elif pcv[e] == c:
                    masks[w] = masks[w] & ~(_ONE << np.int64(pcu[e]))

    done = True
    for v in range(n):
        if colour[v] < 0:
            done = False
            break
    if done:
        return 1, colour, nodes

    # --- DFS over decisions ---
    depth = 0
    # pick first decision vertex: fewest remaining colours, ties by index
    best_v = -1
    best_pc = 99
    for v in range(n):
        if colour[v] < 0:
            x = masks[v]
            x = x - ((x >> 1) & _M1)
            x = (x & _M2) + ((x >> 2) & _M2)
            x = (x + (x >> 4)) & _M4
            x = x + (x >> 8)
            x = x + (x >> 16)
            x = x + (x >> 32)
            pc = int(x & np.int64(0x7F))
            if pc < best_pc:
                best_pc = pc
                best_v = v
    dec_v[0] = best_v
    dec_c[0] = -1
    for v in range(n):
        snap_masks[0, v] = masks[v]
        snap_col[0, v] = colour[v]

    while depth >= 0:
        # restore level snapshot
        for v in range(n):
            masks[v] = snap_masks[depth, v]
            colour[v] = snap_col[depth, v]
        dv = dec_v[depth]
        c = dec_c[depth] + 1
        while c < MAX_COLOURS + 1 and (masks[dv] >> np.int64(c)) & _ONE == 0:
            c += 1
        if c >= MAX_COLOURS + 1:
            depth -= 1
            continue
        dec_c[depth] = c
        colour[dv] = c
        nodes += 1
        if nodes > budget:
            return -1, colour, nodes
        for e in range(m):
            if eu[e] == dv:
                w = ev[e]
                if pcu[e] < 0:
                    masks[w] = masks[w] & ~(_ONE << np.int64(c))
                elif pcu[e] == c:
                    masks[w] = masks[w] & ~(_ONE << np.int64(pcv[e]))
            elif ev[e] == dv:
                w = eu[e]
                if pcu[e] < 0:
                    masks[w] = masks[w] & ~(_ONE << np.int64(c))
                elif pcv[e] == c:
                    masks[w] = masks[w] & ~(_ONE << np.int64(pcu[e]))
        # unit propagation
        conflict = False
        while True:
            unit = -1
            for v in range(n):
                if colour[v] < 0:
                    x = masks[v]
                    x = x - ((x >> 1) & _M1)
                    x = (x & _M2) + ((x >> 2) & _M2)
                    x = (x + (x >> 4)) & _M4
                    x = x + (x >> 8)
                    x = x + (x >> 16)
                    x = x + (x >> 32)
                    pc = x & np.int64(0x7F)
                    if pc == 0:
                        conflict = True
                        break
                    if pc == 1 and unit < 0:
                        unit = v
            if conflict or unit < 0:
                break
            uc = 0
            while (masks[unit] >> np.int64(uc)) & _ONE == 0:
                uc += 1
            colour[unit] = uc
            nodes += 1
            if nodes > budget:
                return -1, colour, nodes
            for e in range(m):
                if eu[e] == unit:
                    w = ev[e]
                    if pcu[e] < 0:
                        masks[w] = masks[w] & ~(_ONE << np.int64(uc))
                    elif pcu[e] == uc:
                        masks[w] = masks[w] & ~(_ONE << np.int64(pcv[e]))
                elif ev[e] == unit:
                    w = eu[e]
                    if pcu[e] < 0:
                        masks[w] = masks[w] & ~(_ONE << np.int64(uc))
                    elif pcv[e] == uc:
                        masks[w] = masks[w] & ~(_ONE << np.int64(pcu[e]))
        if conflict:
            continue
        done = True
        for v in range(n):
            if colour[v] < 0:
                done = False
                break
        if done:
            return 1, colour, nodes
        # descend
        depth += 1
        best_v = -1
        best_pc = 99
        for v in range(n):
            if colour[v] < 0:
                x = masks[v]
                x = x - ((x >> 1) & _M1)
                x = (x & _M2) + ((x >> 2) & _M2)
                x = (x + (x >> 4)) & _M4
                x = x + (x >> 8)
                x = x + (x >> 16)
                x = x + (x >> 32)
                pc = int(x & np.int64(0x7F))
                if pc < best_pc:
                    best_pc = pc
                    best_v = v
        dec_v[depth] = best_v
        dec_c[depth] = -1
        for v in range(n):
            snap_masks[depth, v] = masks[v]
            snap_col[depth, v] = colour[v]

    return 0, colour, nodes


def _enum_impl(n, masks, eu, ev, pcu, pcv, out, cap):  # pragma: no cover
    """Enumerate colourings in lexicographic vertex/colour order.

    Fills ``out`` (cap x n) and returns (count, truncated) where truncated
    means at least one more colouring exists beyond the cap.
    """
    m = eu.shape[0]
    colour = np.full(n, -1, np.int64)
    nxt = np.zeros(n + 1, np.int64)
    count = 0
    level = 0
    if n == 0:
        return 0, False
    while level >= 0:
        if level == n:
            if count >= cap:
                return count, True
            for v in range(n):
                out[count, v] = colour[v]
            count += 1
            level -= 1
            continue
        found = -1
        c = nxt[level]
        while c <= MAX_COLOURS:
            if (masks[level] >> np.int64(c)) & _ONE != 0:
                ok = True
                for e in range(m):
                    a = eu[e]
                    b = ev[e]
                    if a == level and b < level:
                        if pcu[e] < 0:
                            if colour[b] == c:
                                ok = False
                                break
                        elif pcu[e] == c and pcv[e] == colour[b]:
                            ok = False
                            break
                    elif b == level and a < level:
                        if pcu[e] < 0:
                            if colour[a] == c:
                                ok = False
                                break
                        elif pcv[e] == c and pcu[e] == colour[a]:
                            ok = False
                            break
                if ok:
                    found = c
                    break
            c += 1
        if found < 0:
            colour[level] = -1
            nxt[level] = 0
            level -= 1
            if level >= 0:
                nxt[level] = colour[level] + 1
            continue
        colour[level] = found
        nxt[level] = found + 1
        level += 1
        nxt[level] = 0
    return count, False


def _compile(fn):
    from numba import njit

    return njit(cache=True)(fn)


def _resolve_backend():
    choice = os.environ.get("POLARCOLOUR_BACKEND", "").strip().lower()
    if choice not in ("", "numba", "python"):
        raise DomainError(f"POLARCOLOUR_BACKEND must be numba or python, got {choice!r}")
    if choice == "python":
        return "python"
    try:
        import numba  # noqa: F401

        return "numba"
    except ImportError:
        if choice == "numba":
            raise DomainError("POLARCOLOUR_BACKEND=numba but numba is not importable")
        return "python"


_BACKEND = _resolve_backend()

if _BACKEND == "numba":
    _solve = _compile(_solve_impl)
    _enum = _compile(_enum_impl)
else:
    _solve = _solve_impl
    _enum = _enum_impl


def backend_name():
    return _BACKEND


def get_backend(name):
    """Return (solve, enumerate) kernel pair for an explicit backend name
    (used by the benchmark)."""
    if name == "python":
        return _solve_impl, _enum_impl
    if name == "numba":
        return _compile(_solve_impl), _compile(_enum_impl)
    raise DomainError(f"unknown backend {name!r}")


# ---------------------------------------------------------------------------
# instance encoding
# ---------------------------------------------------------------------------


class Instance:
    """Dense encoding of (Q, Gamma) for the kernel.

    Vertices map to 0..n-1 in sorted order and colours to 0..C-1 in sorted
    order; witnesses are translated back on the way out.
    """

    __slots__ = ("n", "masks", "eu", "ev", "pcu", "pcv", "vmap", "vinv", "colours")

    def __init__(self, q, gamma):
        vs = list(q.vertices)
        self.vmap = {v: i for i, v in enumerate(vs)}
        self.vinv = vs
        palette = sorted(gamma.colours_used())
        if len(palette) > MAX_COLOURS:
            raise CapacityError(
                f"kernel: {len(palette)} distinct colours exceed {MAX_COLOURS}"
            )
        cmap = {c: i for i, c in enumerate(palette)}
        self.colours = palette
        self.n = len(vs)
        masks = np.zeros(self.n, np.int64)
        for v, s in gamma.lists.items():
            bits = np.int64(0)
            for c in s:
                bits |= _ONE << np.int64(cmap[c])
            masks[self.vmap[v]] = bits
        m = len(q.edges)
        eu = np.empty(m, np.int64)
        ev = np.empty(m, np.int64)
        pcu = np.full(m, -1, np.int64)
        pcv = np.full(m, -1, np.int64)
        for i, (eid, u, v) in enumerate(q.edges):
            eu[i] = self.vmap[u]
            ev[i] = self.vmap[v]
            if eid in q.polarised:
                a, b = gamma.polarisation[eid]
                # a polarised pair mentioning a colour outside every list can
                # never match a colouring; drop the constraint entirely
                if a in cmap and b in cmap:
                    pcu[i] = cmap[a]
                    pcv[i] = cmap[b]
                else:
                    pcu[i] = MAX_COLOURS
                    pcv[i] = MAX_COLOURS
        self.masks, self.eu, self.ev, self.pcu, self.pcv = masks, eu, ev, pcu, pcv

    def decode(self, colour_row):
        return {
            self.vinv[i]: self.colours[int(colour_row[i])] for i in range(self.n)
        }


def solve_instance(inst, budget):
    if inst.n == 0:
        return 1, {}, 0
    status, colours, nodes = _solve(
        inst.n, inst.masks, inst.eu, inst.ev, inst.pcu, inst.pcv, budget
    )
    if status == 1:
        return 1, inst.decode(colours), int(nodes)
    return int(status), None, int(nodes)


def enumerate_instance(inst, cap):
    if inst.n == 0:
        return [{}], False
    out = np.empty((cap, inst.n), np.int64)
    count, truncated = _enum(
        inst.n, inst.masks, inst.eu, inst.ev, inst.pcu, inst.pcv, out, cap
    )
    return [inst.decode(out[i]) for i in range(count)], bool(truncated)
