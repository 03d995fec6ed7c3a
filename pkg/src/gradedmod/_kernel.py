"""Buchberger kernel on packed module terms.

A module term (position, exponents) is packed into one Python int whose
integer order is the module order and which is additive in the exponents:
``key(m * t) == key(t) + mono_key(m)``.  Digits, most significant first:

    [shifted weighted degree][block class][-e_n] ... [-e_1][-position]

in a balanced base B.  Degree first gives a degree-compatible order, the
negated exponents give reverse lexicographic tie-breaking, and the negated
position makes the lower position win.  The block class digit is zero for a
plain term-over-position order; giving one block class 1 turns the order into
a degree-wise elimination order for that block, which is what the syzygy,
intersection and lifting routines use.  (For homogeneous elements this makes
any element with a leading term in class 0 have no class-1 terms at all.)

Elements are plain dicts {key: coeff}. Coefficients are gmpy2.mpq, or ints
reduced mod ``prime``.
"""

from __future__ import annotations

import heapq
import logging
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

_BASE_BITS = 20
_B = 1 << _BASE_BITS
_HALF = _B >> 1


class TermOrder:
    def __init__(self, weights: Sequence[int], shifts: Sequence[int], classes: Sequence[int] | None = None):
        n = len(weights)
        self.weights = tuple(weights)
        self.shifts = tuple(shifts)
        self.classes = tuple(classes) if classes is not None else (0,) * len(shifts)
        self.n = n
        self.rank = len(shifts)
        self.deg_unit = _B ** (n + 2)
        class_unit = _B ** (n + 1)
        self.var_keys = tuple(w * self.deg_unit - _B ** (k + 1) for k, w in enumerate(weights))
        self.offsets = tuple(
            s * self.deg_unit + c * class_unit - pos
            for pos, (s, c) in enumerate(zip(self.shifts, self.classes))
        )
        self._cache: dict[int, tuple[int, tuple[int, ...]]] = {}

    def mono_key(self, exps: Sequence[int]) -> int:
        return sum(e * k for e, k in zip(exps, self.var_keys))

    def key(self, pos: int, exps: Sequence[int]) -> int:
        k = self.offsets[pos] + self.mono_key(exps)
        if k not in self._cache:
            self._cache[k] = (pos, tuple(exps))
        return k

    def decode(self, key: int) -> tuple[int, tuple[int, ...]]:
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        k = key
        digits = []
        for _ in range(self.n + 1):
            d = k % _B
            if d >= _HALF:
                d -= _B
            digits.append(d)
            k = (k - d) >> _BASE_BITS
        pos = -digits[0]
        exps = tuple(-d for d in digits[1:])
        out = (pos, exps)
        self._cache[key] = out
        return out

    def degree(self, key: int) -> int:
        return (key + (self.deg_unit >> 1)) // self.deg_unit

    def block(self, key: int) -> int:
        return self.classes[self.decode(key)[0]]


def _monic(f: dict, prime: int | None) -> dict:
    lead = f[max(f)]
    if prime is None:
        if lead == 1:
            return f
        inv = 1 / lead
        return {k: v * inv for k, v in f.items()}
    inv = pow(lead, -1, prime)
    return {k: v * inv % prime for k, v in f.items()}


class _Basis:
    """Growing list of monic elements, indexed by the position of their leading term."""

    def __init__(self, order: TermOrder):
        self.order = order
        self.elems: list[dict] = []
        self.lts: list[int] = []
        self.lexps: list[tuple[int, ...]] = []
        self.by_pos: dict[int, list[int]] = {}

    def add(self, f: dict) -> int:
        lt = max(f)
        pos, exps = self.order.decode(lt)
        idx = len(self.elems)
        self.elems.append(f)
        self.lts.append(lt)
        self.lexps.append(exps)
        self.by_pos.setdefault(pos, []).append(idx)
        return idx

    def divisor(self, key: int, skip: int = -1) -> int:
        pos, exps = self.order.decode(key)
        lexps = self.lexps
        for idx in self.by_pos.get(pos, ()):
            if idx == skip:
                continue
            e = lexps[idx]
            for a, b in zip(exps, e):
                if a < b:
                    break
            else:
                return idx
        return -1


def _subtract(f: dict, g: dict, delta: int, c, prime: int | None) -> None:
    """f -= c * x^delta * g, in place."""
    get = f.get
    if prime is None:
        for k, v in g.items():
            nk = k + delta
            nv = get(nk, 0) - c * v
            if nv:
                f[nk] = nv
            else:
                del f[nk]
    else:
        for k, v in g.items():
            nk = k + delta
            nv = (get(nk, 0) - c * v) % prime
            if nv:
                f[nk] = nv
            else:
                del f[nk]


def reduce(f: dict, basis: _Basis, prime: int | None, full: bool = True, skip: int = -1) -> dict:
    """Normal form of f with respect to basis (top reduction only when full=False)."""
    f = dict(f)
    if not f:
        return f
    rem: dict = {}
    elems, lts = basis.elems, basis.lts
    # heap of candidate keys; stale entries are skipped lazily
    heap = [-k for k in f]
    heapq.heapify(heap)
    while heap:
        lt = -heapq.heappop(heap)
        c = f.get(lt)
        if c is None:
            continue
        while heap and heap[0] == -lt:
            heapq.heappop(heap)
        idx = basis.divisor(lt, skip)
        if idx < 0:
            if not full:
                rem.update(f)
                return rem
            rem[lt] = c
            del f[lt]
            continue
        g = elems[idx]
        delta = lt - lts[idx]
        _subtract(f, g, delta, c, prime)
        for k in g:
            nk = k + delta
            if nk < lt and nk in f:
                heapq.heappush(heap, -nk)
    return rem


def buchberger(
    gens: Iterable[dict],
    order: TermOrder,
    prime: int | None = None,
    product_criterion: bool = False,
    max_degree: int | None = None,
) -> list[dict]:
    """Reduced Groebner basis of homogeneous packed elements, sorted by leading term.

    Pairs are processed by the normal strategy (smallest lcm degree first) with
    the Gebauer-Moeller chain criterion.  The product criterion is only sound
    in rank one and must be requested explicitly.  With ``max_degree`` the run
    is truncated: the result is a Groebner basis up to that degree only.
    """
    pending: dict[int, list[dict]] = {}
    for g in gens:
        if g:
            pending.setdefault(order.degree(max(g)), []).append(dict(g))
    basis = _Basis(order)
    # pair queue: (degree, lcm key, i, j); live maps a pair to (position, lcm exponents)
    pairs: list[tuple[int, int, int, int]] = []
    live: dict[tuple[int, int], tuple[int, tuple[int, ...]]] = {}

    def divides(a: tuple, b: tuple) -> bool:
        for x, y in zip(a, b):
            if x > y:
                return False
        return True

    def add_element(h: dict) -> None:
        hi = basis.add(h)
        he = basis.lexps[hi]
        hpos = order.decode(basis.lts[hi])[0]
        lexps = basis.lexps
        # chain criterion on the old pairs
        for pr, (pos, L) in list(live.items()):
            if pos != hpos or not divides(he, L):
                continue
            i, j = pr
            if tuple(max(a, b) for a, b in zip(lexps[i], he)) != L and tuple(
                max(a, b) for a, b in zip(lexps[j], he)
            ) != L:
                del live[pr]
        # new pairs with h, one per minimal lcm
        groups: dict[tuple, list[int]] = {}
        for i in basis.by_pos.get(hpos, ()):
            if i != hi:
                groups.setdefault(tuple(max(a, b) for a, b in zip(lexps[i], he)), []).append(i)
        kept: list[tuple] = []
        for L in sorted(groups, key=order.mono_key):
            if any(divides(K, L) for K in kept):
                continue
            kept.append(L)
            members = groups[L]
            if product_criterion and any(
                all(a == 0 or b == 0 for a, b in zip(lexps[i], he)) for i in members
            ):
                continue
            i = min(members)
            key = order.key(hpos, L)
            live[(i, hi)] = (hpos, L)
            heapq.heappush(pairs, (order.degree(key), key, i, hi))

    def next_degree() -> int | None:
        while pairs and (pairs[0][2], pairs[0][3]) not in live:
            heapq.heappop(pairs)
        cands = []
        if pairs:
            cands.append(pairs[0][0])
        if pending:
            cands.append(min(pending))
        return min(cands) if cands else None

    while True:
        d = next_degree()
        if d is None or (max_degree is not None and d > max_degree):
            break
        todo: list[dict] = []
        while pairs and pairs[0][0] == d:
            _, key, i, j = heapq.heappop(pairs)
            if live.pop((i, j), None) is None:
                continue
            todo.append(_spair(basis, i, j, key, prime))
        todo.extend(pending.pop(d, []))
        for s in todo:
            r = reduce(s, basis, prime, full=True)
            if r:
                add_element(_monic(r, prime))
        log.debug("degree %d done, basis size %d", d, len(basis.elems))

    return _interreduce(basis.elems, order, prime)


def _spair(basis: _Basis, i: int, j: int, key: int, prime: int | None) -> dict:
    s = {k + key - basis.lts[i]: v for k, v in basis.elems[i].items()}
    _subtract(s, basis.elems[j], key - basis.lts[j], 1, prime)
    return s


def _interreduce(elems: list[dict], order: TermOrder, prime: int | None) -> list[dict]:
    """Minimalize and tail-reduce; the result is the unique reduced basis, sorted ascending."""
    elems = sorted((_monic(e, prime) for e in elems if e), key=max)
    minimal = _Basis(order)
    for e in elems:
        if minimal.divisor(max(e)) < 0:
            minimal.add(e)
    out = []
    for idx, e in enumerate(minimal.elems):
        lt = minimal.lts[idx]
        tail = dict(e)
        del tail[lt]
        r = reduce(tail, minimal, prime, full=True, skip=idx)
        r[lt] = e[lt]
        out.append(r)
    out.sort(key=max)
    return out
