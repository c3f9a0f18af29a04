"""Multivariate polynomials over QQ or F_p with dense exponent tuples.

A :class:`PolyRing` fixes the variable names and the coefficient domain.
The standard ring for a family member with parameter ``n`` has the ``2n``
variables ``x1..xn, y1..yn`` (see :func:`family_ring`); auxiliary variables
used by saturation and radical tests are appended at the end.

Polynomials are immutable values: a mapping from exponent tuples to nonzero
coefficients.  Term orders only matter for leading terms, division and
printing.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactmath import FieldElement, PrimeField

Monomial = tuple[int, ...]


class _Rationals:
    """The field QQ, coefficients stored as :class:`fractions.Fraction`."""

    zero = Fraction(0)
    one = Fraction(1)
    characteristic = 0

    def __repr__(self):
        return "QQ"

    def __str__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, _Rationals)

    def __hash__(self):
        return hash("QQ")

    def convert(self, value) -> Fraction:
        if isinstance(value, FieldElement):
            raise ValueError("cannot coerce a prime-field element into QQ")
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in QQ")
        return 1 / a

    def to_str(self, a) -> str:
        return str(a)


QQ = _Rationals()
Domain = _Rationals | PrimeField


def parse_field(spec: str) -> Domain:
    """``"Q"``/``"QQ"`` or ``"F7"``/``"Fp7"``/``"GF(7)"``/``"7"``."""
    s = spec.strip().upper()
    if s in ("Q", "QQ"):
        return QQ
    m = re.fullmatch(r"(?:GF\(|FP|F)?(\d+)\)?", s)
    if not m:
        raise ValueError(f"unrecognized field spec {spec!r}")
    return PrimeField(int(m.group(1)))


# ---------------------------------------------------------------- term orders


def _grevlex_key(e: Sequence[int]):
    return (sum(e), tuple(-v for v in reversed(e)))


class TermOrder:
    """A monomial order given by a sort key: bigger key means bigger monomial."""

    name = "order"

    def key(self, e: Monomial):
        raise NotImplementedError

    def less(self, a: Monomial, b: Monomial) -> bool:
        return self.key(a) < self.key(b)

    def __eq__(self, other):
        return type(self) is type(other) and self.__dict__ == other.__dict__

    def __hash__(self):
        return hash((type(self).__name__, tuple(sorted(self.__dict__.items()))))

    def __repr__(self):
        return self.name


class Lex(TermOrder):
    name = "lex"

    def key(self, e):
        return e


class GrevLex(TermOrder):
    name = "grevlex"

    def key(self, e):
        return _grevlex_key(e)


class BlockOrder(TermOrder):
    """Elimination order: variables in ``block`` beat all others, grevlex inside.

    ``block`` is a tuple of variable indices. Monomials are compared first on
    the block exponents, then on the remaining ones.
    """

    def __init__(self, block: Iterable[int]):
        self.block = tuple(sorted(block))

    @property
    def name(self):
        return f"block{list(self.block)}"

    def key(self, e):
        block = self.block
        first = [e[i] for i in block]
        rest = [v for i, v in enumerate(e) if i not in block]
        return (_grevlex_key(first), _grevlex_key(rest))


lex = Lex()
grevlex = GrevLex()


def parse_order(name: str) -> TermOrder:
    return {"lex": lex, "grevlex": grevlex}[name]


# ---------------------------------------------------------------- rings


class PolyRing:
    def __init__(self, names: Sequence[str], domain: Domain = QQ):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        self.domain = domain
        self.index = {v: i for i, v in enumerate(self.names)}

    @property
    def nvars(self) -> int:
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.names == other.names and self.domain == other.domain

    def __hash__(self):
        return hash((self.names, self.domain))

    def __repr__(self):
        return f"PolyRing({', '.join(self.names)} over {self.domain!r})"

    def extend(self, *names: str) -> "PolyRing":
        """Same ring with extra variables appended as the last slots."""
        return PolyRing(self.names + names, self.domain)

    def drop(self, names: Iterable[str]) -> "PolyRing":
        gone = set(names)
        return PolyRing([v for v in self.names if v not in gone], self.domain)

    def with_domain(self, domain: Domain) -> "PolyRing":
        return PolyRing(self.names, domain)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return self.term((0,) * self.nvars, c)

    def term(self, exp: Sequence[int], coeff=1) -> "Polynomial":
        exp = tuple(exp)
        if len(exp) != self.nvars or any(v < 0 for v in exp):
            raise ValueError(f"bad exponent vector {exp} for {self}")
        c = self.domain.convert(coeff)
        return Polynomial(self, {exp: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index[name]] = 1
        return self.term(e)

    def gens(self) -> list["Polynomial"]:
        return [self.var(v) for v in self.names]

    def from_dict(self, terms: Mapping[Monomial, object]) -> "Polynomial":
        out = {}
        for e, c in terms.items():
            c = self.domain.convert(c)
            if c:
                out[tuple(e)] = c
        return Polynomial(self, out)

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)


def family_ring(n: int, domain: Domain = QQ) -> PolyRing:
    """The ring in x1..xn, y1..yn."""
    return PolyRing([f"x{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)], domain)


# ---------------------------------------------------------------- polynomials


class RingMismatchError(ValueError):
    pass


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict[Monomial, object]):
        # terms must already be canonical: domain-converted and nonzero
        self.ring = ring
        self.terms = terms

    # -- basic queries
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def is_binomial(self) -> bool:
        """Exactly two terms, or a monomial difference after cancellation."""
        return len(self.terms) == 2

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def variables(self) -> set[str]:
        used = set()
        for e in self.terms:
            used.update(self.ring.names[i] for i, v in enumerate(e) if v)
        return used

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self, order: TermOrder = grevlex) -> list[tuple[Monomial, object]]:
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_monomial(self, order: TermOrder = grevlex) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: TermOrder = grevlex):
        return self.terms[self.leading_monomial(order)]

    # -- arithmetic
    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatchError(f"{self.ring} vs {other.ring}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._lift(other)
        dom = self.ring.domain
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = dom.add(out.get(e, dom.zero), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        dom = self.ring.domain
        return Polynomial(self.ring, {e: dom.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scalar_mul(other)
        self._check(other)
        dom = self.ring.domain
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = dom.add(out.get(e, dom.zero), dom.mul(c1, c2))
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return Polynomial(self.ring, out)

    def __rmul__(self, other):
        return self.scalar_mul(other)

    def scalar_mul(self, c) -> "Polynomial":
        dom = self.ring.domain
        c = dom.convert(c)
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: dom.mul(v, c) for e, v in self.terms.items()})

    def mul_term(self, exp: Monomial, c) -> "Polynomial":
        dom = self.ring.domain
        out = {}
        for e, v in self.terms.items():
            out[tuple(a + b for a, b in zip(e, exp))] = dom.mul(v, c)
        return Polynomial(self.ring, out)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out, base = self.ring.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- normalization
    def monic(self, order: TermOrder = grevlex) -> "Polynomial":
        if not self.terms:
            return self
        dom = self.ring.domain
        return self.scalar_mul(dom.inv(self.leading_coefficient(order)))

    def normalized(self, order: TermOrder = grevlex) -> "Polynomial":
        """Canonical scalar multiple.

        Over F_p: monic. Over QQ: integer coefficients with gcd 1 and a
        positive leading coefficient.
        """
        if not self.terms:
            return self
        if isinstance(self.ring.domain, PrimeField):
            return self.monic(order)
        from math import gcd, lcm

        den = lcm(*(c.denominator for c in self.terms.values()))
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for v in nums:
            g = gcd(g, v)
        scale = Fraction(den, g)
        if self.leading_coefficient(order) < 0:
            scale = -scale
        return self.scalar_mul(scale)

    def same_up_to_scalar(self, other: "Polynomial") -> bool:
        return self.normalized() == other.normalized()

    def change_ring(self, ring: PolyRing) -> "Polynomial":
        """Re-embed by variable name; every used variable must exist in ``ring``."""
        idx = [ring.index[v] for v in self.ring.names] if ring.names != self.ring.names else None
        out = {}
        for e, c in self.terms.items():
            if idx is None:
                ne = e
            else:
                lst = [0] * ring.nvars
                for i, v in enumerate(e):
                    if v:
                        lst[idx[i]] = v
                ne = tuple(lst)
            c = ring.domain.convert(c)
            if c:
                out[ne] = c
        return Polynomial(ring, out)

    def restrict(self, ring: PolyRing) -> "Polynomial":
        """Move into a ring lacking some variables; those must not occur."""
        missing = self.variables() - set(ring.names)
        if missing:
            raise ValueError(f"variables {sorted(missing)} occur in {self}")
        out = {}
        for e, c in self.terms.items():
            lst = [0] * ring.nvars
            for i, v in enumerate(e):
                if v:
                    lst[ring.index[self.ring.names[i]]] = v
            out[tuple(lst)] = ring.domain.convert(c)
        return Polynomial(ring, out)

    # -- evaluation
    def evaluate(self, point: Sequence) -> object:
        """Exact value at ``point`` (a sequence of field elements or numbers)."""
        if len(point) != self.ring.nvars:
            raise ValueError(f"point has {len(point)} coordinates, ring has {self.ring.nvars}")
        dom = self.ring.domain
        if isinstance(dom, PrimeField):
            vals = [dom.convert(v) for v in point]
            p = dom.p
            total = 0
            for e, c in self.terms.items():
                t = c
                for v, k in zip(vals, e):
                    if k:
                        t = t * pow(v, k, p) % p
                total += t
            return FieldElement(total % p, dom)
        vals = [dom.convert(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for v, k in zip(vals, e):
                if k:
                    t *= v**k
            total += t
        return total

    # -- text
    def to_str(self, order: TermOrder = grevlex) -> str:
        if not self.terms:
            return "0"
        dom = self.ring.domain
        parts = []
        for e, c in self.sorted_terms(order):
            if isinstance(dom, PrimeField):
                # print residues as signed representatives where shorter
                v = c if c <= dom.p // 2 else c - dom.p
                sign, mag = ("-", -v) if v < 0 else ("+", v)
                mag_s = str(mag)
            else:
                sign, mag = ("-", -c) if c < 0 else ("+", c)
                mag_s = str(mag)
            mono = "*".join(
                f"{name}^{k}" if k > 1 else name for name, k in zip(self.ring.names, e) if k
            )
            if mono:
                body = mono if mag == 1 else f"{mag_s}*{mono}"
            else:
                body = mag_s
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


_TERM_RE = re.compile(r"([+-]?)([^+-]+)")
_FACTOR_RE = re.compile(r"^(?:(\d+(?:/\d+)?)|([A-Za-z_]\w*)(?:\^(\d+))?)$")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Inverse of :meth:`Polynomial.to_str`.

    Accepts sums of terms ``c*v1^a*v2^b``; ``**`` is accepted as a power
    sign too.
    """
    s = text.replace("**", "^").replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return ring.zero()
    pos = 0
    out = ring.zero()
    dom = ring.domain
    for m in _TERM_RE.finditer(s):
        if m.start() != pos:
            raise ValueError(f"cannot parse {text!r} near position {pos}")
        pos = m.end()
        sign, body = m.groups()
        coeff = Fraction(-1 if sign == "-" else 1)
        exp = [0] * ring.nvars
        for factor in body.split("*"):
            fm = _FACTOR_RE.match(factor)
            if not fm:
                raise ValueError(f"bad factor {factor!r} in {text!r}")
            num, name, power = fm.groups()
            if num is not None:
                coeff *= Fraction(num)
            else:
                if name not in ring.index:
                    raise ValueError(f"unknown variable {name!r}")
                exp[ring.index[name]] += int(power) if power else 1
        out = out + ring.term(exp, dom.convert(coeff))
    if pos != len(s):
        raise ValueError(f"trailing garbage in {text!r}")
    return out


# ---------------------------------------------------------------- binomials


def split_vector(v: Sequence[int]) -> tuple[Monomial, Monomial]:
    pos = tuple(max(t, 0) for t in v)
    neg = tuple(max(-t, 0) for t in v)
    return pos, neg


def binomial_from_vector(v: Sequence[int], ring: PolyRing) -> Polynomial:
    """x^{v+} - x^{v-} for an integer vector v of length ``ring.nvars``."""
    if len(v) != ring.nvars:
        raise ValueError(f"vector of length {len(v)} for a ring with {ring.nvars} variables")
    if not any(v):
        raise ValueError("zero vector has no binomial")
    pos, neg = split_vector(v)
    return ring.term(pos) - ring.term(neg)


def binomial_vector(p: Polynomial) -> tuple[int, ...]:
    """Exponent vector a - b of a pure difference binomial c*(x^a - x^b)."""
    if len(p.terms) != 2:
        raise ValueError(f"{p} is not a binomial")
    (a, ca), (b, cb) = p.terms.items()
    if ca != p.ring.domain.neg(cb):
        raise ValueError(f"{p} is not of the form c*(m1 - m2)")
    return tuple(x - y for x, y in zip(a, b))


# ---------------------------------------------------------------- division


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def divide(
    p: Polynomial, divisors: Sequence[Polynomial], order: TermOrder = grevlex
) -> tuple[list[Polynomial], Polynomial]:
    """Multivariate division with remainder.

    Returns ``(quotients, r)`` with ``p == sum(q*d) + r`` and no term of ``r``
    divisible by a leading monomial of a divisor. The first divisor (in list
    order) whose leading monomial divides the current term is used.
    """
    ring = p.ring
    for d in divisors:
        p._check(d)
        if not d:
            raise ZeroDivisionError("division by the zero polynomial")
    dom = ring.domain
    leads = [(d.leading_monomial(order), d.leading_coefficient(order)) for d in divisors]
    quots: list[dict] = [{} for _ in divisors]
    rem: dict = {}
    cur = dict(p.terms)
    key = order.key
    while cur:
        lm = max(cur, key=key)
        lc = cur[lm]
        for i, (dm, dc) in enumerate(leads):
            if _divides(dm, lm):
                mono = tuple(a - b for a, b in zip(lm, dm))
                c = dom.mul(lc, dom.inv(dc))
                quots[i][mono] = dom.add(quots[i].get(mono, dom.zero), c)
                for e, v in divisors[i].terms.items():
                    ne = tuple(a + b for a, b in zip(e, mono))
                    nv = dom.sub(cur.get(ne, dom.zero), dom.mul(c, v))
                    if nv:
                        cur[ne] = nv
                    else:
                        cur.pop(ne, None)
                break
        else:
            rem[lm] = lc
            del cur[lm]
    qs = [Polynomial(ring, {e: c for e, c in q.items() if c}) for q in quots]
    return qs, Polynomial(ring, rem)
