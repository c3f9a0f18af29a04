"""Buchberger's algorithm and the ideal operations built on it.

Reduced bases are made canonical with :meth:`Polynomial.normalized` (monic
over F_p, primitive integer with positive leading coefficient over QQ), so two
ideals are equal exactly when their reduced bases compare equal.
"""

from __future__ import annotations

import heapq
import logging
import os
import threading
from typing import Iterable, Sequence

from .polyring import BlockOrder, Monomial, Polynomial, PolyRing, TermOrder, grevlex

log = logging.getLogger(__name__)

DEFAULT_PAIR_BUDGET = 10**6
BUDGET_ENV = "TORICSET_PAIR_BUDGET"


def default_budget() -> int:
    return int(os.environ.get(BUDGET_ENV, DEFAULT_PAIR_BUDGET))


class BudgetExceeded(RuntimeError):
    """Raised when Buchberger processes more S-pairs than allowed."""

    def __init__(self, budget: int, basis_size: int):
        super().__init__(f"S-pair budget of {budget} exhausted (partial basis has {basis_size} elements)")
        self.budget = budget
        self.basis_size = basis_size


def _divides(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


class _Reducer:
    """Term-level helpers over one coefficient domain and order."""

    def __init__(self, ring: PolyRing, order: TermOrder):
        self.dom = ring.domain
        self.key = order.key

    def lead(self, f: dict) -> Monomial:
        return max(f, key=self.key)

    def monic(self, f: dict) -> dict:
        dom = self.dom
        inv = dom.inv(f[self.lead(f)])
        return {e: dom.mul(c, inv) for e, c in f.items()}

    def sub_multiple(self, f: dict, c, mono: Monomial, g: dict) -> None:
        """f -= c * mono * g, in place."""
        dom = self.dom
        for e, v in g.items():
            ne = tuple(a + b for a, b in zip(e, mono))
            nv = dom.sub(f.get(ne, dom.zero), dom.mul(c, v))
            if nv:
                f[ne] = nv
            else:
                f.pop(ne, None)

    def reduce(self, f: dict, basis: Sequence[tuple[Monomial, dict]], full: bool = True) -> dict:
        """Normal form of f; basis elements must be monic.

        With ``full=False`` only the leading term is reduced (enough to decide
        whether an S-polynomial reduces to zero).
        """
        f = dict(f)
        rem = {}
        key = self.key
        while f:
            lm = max(f, key=key)
            lc = f[lm]
            for gm, g in basis:
                if _divides(gm, lm):
                    self.sub_multiple(f, lc, tuple(a - b for a, b in zip(lm, gm)), g)
                    break
            else:
                if not full:
                    f.update(rem)
                    return f
                rem[lm] = lc
                del f[lm]
        return rem


def buchberger(
    gens: Iterable[Polynomial],
    order: TermOrder = grevlex,
    budget: int | None = None,
    chain_criterion: bool = True,
) -> list[Polynomial]:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Pairs are handled with the normal strategy (smallest lcm degree first,
    ties broken by the lcm exponent tuple). The coprime-leading-monomial
    criterion is always applied. ``chain_criterion`` turns on the
    Gebauer-Moeller pair update, which drops pairs made redundant by the chain
    criterion when a new element arrives and stops pairing elements whose
    leading monomial has become divisible by a newer one. Returns ``[1]`` as
    soon as a nonzero constant shows up. An empty list means the zero ideal.
    """
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = gens[0].ring
    for g in gens:
        g._check(gens[0])
    budget = default_budget() if budget is None else budget
    red = _Reducer(ring, order)
    one = (0,) * ring.nvars

    basis: list[tuple[Monomial, dict]] = []
    active: list[int] = []  # indices still allowed to form new pairs
    pairs: list = []  # heap of (deg, lcm, i, j)
    live: dict[tuple[int, int], Monomial] = {}

    def add(f: dict) -> None:
        f = red.monic(f)
        lm = red.lead(f)
        k = len(basis)
        basis.append((lm, f))
        if not chain_criterion:
            for i in active:
                l = _lcm(basis[i][0], lm)
                heapq.heappush(pairs, (sum(l), l, i, k))
                live[(i, k)] = l
            active.append(k)
            return
        _gm_update(k, lm, basis, active, pairs, live)

    for g in gens:
        f = red.reduce(g.terms, basis, full=False) if basis else dict(g.terms)
        if f:
            if red.lead(f) == one:
                return [ring.one()]
            add(f)

    processed = 0
    while pairs:
        _, l, i, j = heapq.heappop(pairs)
        if (i, j) not in live:
            continue
        del live[(i, j)]
        processed += 1
        if processed > budget:
            raise BudgetExceeded(budget, len(basis))
        mi, fi = basis[i]
        mj, fj = basis[j]
        if _coprime(mi, mj):
            continue
        s = {}
        red.sub_multiple(s, red.dom.neg(red.dom.one), tuple(a - b for a, b in zip(l, mi)), fi)
        red.sub_multiple(s, red.dom.one, tuple(a - b for a, b in zip(l, mj)), fj)
        if not s:
            continue
        h = red.reduce(s, [basis[a] for a in active], full=False)
        if not h:
            continue
        if red.lead(h) == one:
            return [ring.one()]
        add(h)
    log.debug("buchberger: %d pairs, %d basis elements before reduction", processed, len(basis))
    return _reduce_basis(ring, [basis[a] for a in active], order, red)


def _gm_update(k, lm, basis, active, pairs, live) -> None:
    """Gebauer-Moeller: insert element k and prune the pair set."""
    cand = {i: _lcm(basis[i][0], lm) for i in active}
    # Among the new pairs keep one per minimal lcm. A coprime pair only
    # knocks out the others with its lcm and is then dropped itself.
    # Strict divisors have lower degree, so comparing against the minimal
    # lcms met so far is enough.
    keep = []
    minimal: list[Monomial] = []
    seen = set()
    items = sorted(cand.items(), key=lambda t: (sum(t[1]), t[1], not _coprime(basis[t[0]][0], lm), t[0]))
    for i, l in items:
        if l in seen:
            continue
        if any(_divides(m, l) for m in minimal):
            continue
        seen.add(l)
        minimal.append(l)
        if not _coprime(basis[i][0], lm):
            keep.append((i, l))
    # old pairs whose lcm is strictly covered through the new element
    for (i, j), l in list(live.items()):
        if not _divides(lm, l):
            continue
        li = cand[i] if i in cand else _lcm(basis[i][0], lm)
        if li == l:
            continue
        lj = cand[j] if j in cand else _lcm(basis[j][0], lm)
        if lj != l:
            del live[(i, j)]
    for i, l in keep:
        heapq.heappush(pairs, (sum(l), l, i, k))
        live[(i, k)] = l
    active[:] = [i for i in active if not _divides(lm, basis[i][0])]
    active.append(k)


def _reduce_basis(ring, basis, order, red) -> list[Polynomial]:
    # minimal: drop elements whose leading monomial is divisible by another's
    keep = []
    for idx, (m, f) in enumerate(basis):
        dominated = False
        for jdx, (m2, _) in enumerate(basis):
            if jdx == idx or not _divides(m2, m):
                continue
            if m2 != m or jdx < idx:
                dominated = True
                break
        if not dominated:
            keep.append((m, f))
    out = []
    for idx, (m, f) in enumerate(keep):
        others = [b for jdx, b in enumerate(keep) if jdx != idx]
        tail = {e: c for e, c in f.items() if e != m}
        tail = red.reduce(tail, others, full=True)
        tail[m] = f[m]
        out.append(Polynomial(ring, tail).normalized(order))
    key = order.key
    out.sort(key=lambda p: key(p.leading_monomial(order)), reverse=True)
    return out


class Ideal:
    """Generators plus a cache of reduced Groebner bases keyed by term order."""

    def __init__(self, gens: Iterable[Polynomial], ring: PolyRing | None = None):
        self.gens = [g for g in gens]
        if ring is None:
            if not self.gens:
                raise ValueError("ring is required for an ideal without generators")
            ring = self.gens[0].ring
        self.ring = ring
        for g in self.gens:
            if g.ring != ring:
                raise ValueError(f"generator {g} lives in {g.ring}, not {ring}")
        self._bases: dict[TermOrder, list[Polynomial]] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Ideal([{', '.join(map(str, self.gens))}])"

    def groebner_basis(self, order: TermOrder = grevlex, budget: int | None = None) -> list[Polynomial]:
        with self._lock:
            if order not in self._bases:
                self._bases[order] = buchberger(self.gens, order, budget)
            return self._bases[order]

    def is_unit(self, order: TermOrder = grevlex) -> bool:
        gb = self.groebner_basis(order)
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not any(self.gens)

    def normal_form(self, p: Polynomial, order: TermOrder = grevlex) -> Polynomial:
        gb = self.groebner_basis(order)
        red = _Reducer(self.ring, order)
        basis = [(g.leading_monomial(order), red.monic(g.terms)) for g in gb]
        return Polynomial(self.ring, red.reduce(p.terms, basis, full=True))

    def contains(self, p: Polynomial, order: TermOrder = grevlex) -> bool:
        return ideal_member(p, self, order)

    def __contains__(self, p):
        return self.contains(p)

    def __eq__(self, other):
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = None


def ideal_member(p: Polynomial, I: Ideal, order: TermOrder = grevlex) -> bool:
    if p.ring != I.ring:
        raise ValueError(f"{p} is not in the ring of {I}")
    if not p:
        return True
    return not I.normal_form(p, order)


def ideal_equal(I: Ideal, J: Ideal, order: TermOrder = grevlex) -> bool:
    if I.ring != J.ring:
        raise ValueError(f"ring mismatch: {I.ring} vs {J.ring}")
    return I.groebner_basis(order) == J.groebner_basis(order)


def _fresh_name(ring: PolyRing, stem: str) -> str:
    name, k = stem, 0
    while name in ring.index:
        k += 1
        name = f"{stem}{k}"
    return name


def eliminate(I: Ideal, drop: Iterable[str], budget: int | None = None) -> Ideal:
    """Elimination ideal ``I ∩ K[remaining variables]``.

    The result lives in the ring without the dropped variables. Its generators
    are the reduced basis elements (under the block order with ``drop``
    greatest) that avoid ``drop``.
    """
    drop = list(drop)
    idx = [I.ring.index[v] for v in drop]
    order = BlockOrder(idx)
    gb = I.groebner_basis(order, budget)
    small = I.ring.drop(drop)
    gone = set(drop)
    kept = [g.restrict(small) for g in gb if not (g.variables() & gone)]
    return Ideal(kept, small)


def saturate(I: Ideal, m: Polynomial, budget: int | None = None) -> Ideal:
    """``I : m^∞`` via an auxiliary variable t, ``I + (t*m - 1)``, eliminating t."""
    t = _fresh_name(I.ring, "t")
    big = I.ring.extend(t)
    gens = [g.change_ring(big) for g in I.gens]
    gens.append(big.var(t) * m.change_ring(big) - 1)
    return eliminate(Ideal(gens, big), [t], budget)


def radical_member(p: Polynomial, I: Ideal, budget: int | None = None) -> bool:
    """Is some power of ``p`` in ``I``?  Decided by 1 ∈ I + (1 - t*p)."""
    if p.ring != I.ring:
        raise ValueError(f"{p} is not in the ring of {I}")
    if not p:
        return True
    t = _fresh_name(I.ring, "t")
    big = I.ring.extend(t)
    gens = [g.change_ring(big) for g in I.gens]
    gens.append(1 - big.var(t) * p.change_ring(big))
    gb = buchberger(gens, BlockOrder([big.index[t]]), budget)
    return len(gb) == 1 and gb[0].is_constant()


def variables_product(ring: PolyRing) -> Polynomial:
    return ring.term((1,) * ring.nvars)
