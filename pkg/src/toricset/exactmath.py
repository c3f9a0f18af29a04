"""Exact integer, rational and prime-field arithmetic.

Integers are Python ints and rationals are :class:`fractions.Fraction`, so
everything here is exact for any input size. :class:`PrimeField` carries a
lazily built generator / discrete-log table that makes root extraction in
small fields a table lookup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

Rat = Fraction

#: discrete-log tables are only built for fields up to this size
DLOG_TABLE_LIMIT = 10_000
#: brute-force root search is refused above this size
BRUTE_FORCE_LIMIT = 1_000_000


class FieldTooLargeError(ValueError):
    pass


def gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Iterative extended Euclid.

    Returns ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b)`` and ``g >= 0``.
    The coefficients are whatever the plain iteration produces; no attempt is
    made to canonicalize the Bezout pair.
    """
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def factorize(a: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, primes in increasing order."""
    if a <= 0:
        raise ValueError(f"factorize needs a positive integer, got {a}")
    out = []
    p = 2
    while p * p <= a:
        if a % p == 0:
            k = 0
            while a % p == 0:
                a //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if a > 1:
        out.append((a, 1))
    return out


def is_prime(a: int) -> bool:
    if a < 2:
        return False
    return factorize(a) == [(a, 1)]


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v) if v else 0
    return out


class RootsOfUnity(NamedTuple):
    roots: list["FieldElement"]
    has_primitive: bool


@dataclass(frozen=True, eq=False)
class PrimeField:
    """The field F_p.

    Coefficient-level methods (``add``, ``mul``, ``inv`` ...) act on plain
    ints in ``[0, p)``; polynomial code uses those directly. Use
    :meth:`__call__` to get a :class:`FieldElement`.
    """

    p: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def __str__(self):
        return f"F{self.p}"

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    @property
    def characteristic(self) -> int:
        return self.p

    # coefficient protocol shared with QQ
    zero = 0
    one = 1

    def convert(self, value) -> int:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError(f"element of {value.field} used in {self}")
            return value.value
        if isinstance(value, Fraction):
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        return pow(a, -1, self.p)

    def to_str(self, a: int) -> str:
        return str(a)

    def elements(self):
        return [FieldElement(v, self) for v in range(self.p)]

    # multiplicative structure
    @property
    def generator(self) -> int:
        """Least primitive root modulo p."""
        if "gen" not in self._cache:
            if self.p == 2:
                self._cache["gen"] = 1
            else:
                order = self.p - 1
                primes = [q for q, _ in factorize(order)]
                g = 2
                while any(pow(g, order // q, self.p) == 1 for q in primes):
                    g += 1
                self._cache["gen"] = g
        return self._cache["gen"]

    @property
    def dlog_table(self) -> dict[int, int]:
        """Map nonzero residue -> exponent k with generator**k == residue."""
        if "dlog" not in self._cache:
            if self.p > DLOG_TABLE_LIMIT:
                raise FieldTooLargeError(f"no discrete-log table for p={self.p} > {DLOG_TABLE_LIMIT}")
            g, table, v = self.generator, {}, 1
            for k in range(self.p - 1):
                table[v] = k
                v = v * g % self.p
            self._cache["dlog"] = table
        return self._cache["dlog"]


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise ValueError(f"{self.value} not reduced mod {self.field.p}")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError(f"cannot mix {self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def _wrap(self, v: int) -> "FieldElement":
        return FieldElement(v % self.field.p, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.value * self.field.inv(o))

    def __neg__(self):
        return self._wrap(-self.value)

    def __pow__(self, e: int):
        return fp_pow(self, e)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.field.p
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"


def fp_pow(a: FieldElement, e: int) -> FieldElement:
    p = a.field.p
    if e < 0:
        if a.value == 0:
            raise ZeroDivisionError("zero base with negative exponent")
        return FieldElement(pow(pow(a.value, -1, p), -e, p), a.field)
    return FieldElement(pow(a.value, e, p), a.field)


def fp_nth_roots(a: FieldElement, r: int) -> list[FieldElement]:
    """All x in F_p with x**r == a, sorted by representative.

    Uses the discrete-log table when ``p <= DLOG_TABLE_LIMIT`` and a brute-force
    scan up to ``BRUTE_FORCE_LIMIT``; larger fields raise
    :class:`FieldTooLargeError`.
    """
    if r < 1:
        raise ValueError("root order must be >= 1")
    F = a.field
    p = F.p
    if a.value == 0:
        return [F(0)]
    if p <= DLOG_TABLE_LIMIT:
        k = F.dlog_table[a.value]
        m = p - 1
        g = gcd(r, m)
        if k % g:
            return []
        # x = gen**j with r*j == k (mod m): j0 + t*m/g for t in [0, g)
        step = m // g
        j0 = (k // g) * pow(r // g, -1, step) % step if step > 1 else 0
        gen = F.generator
        return sorted((F(pow(gen, j0 + t * step, p)) for t in range(g)), key=int)
    if p > BRUTE_FORCE_LIMIT:
        raise FieldTooLargeError(f"root extraction in F_{p} is not supported")
    return [F(x) for x in range(1, p) if pow(x, r, p) == a.value]


def roots_of_unity(r: int, F: PrimeField) -> RootsOfUnity:
    """All r-th roots of unity in F, plus whether a primitive one exists."""
    roots = fp_nth_roots(F(1), r)
    return RootsOfUnity(roots, len(roots) == r)


def primitive_root_of_unity(r: int, F: PrimeField) -> FieldElement:
    """A generator of the group of r-th roots of unity that live in F.

    This group is cyclic of order gcd(r, p-1); the returned element has exactly
    that order (a primitive r-th root when r divides p-1).
    """
    order = gcd(r, F.p - 1)
    return F(pow(F.generator, (F.p - 1) // order, F.p))


def multiplicative_order(a: FieldElement) -> int:
    if a.value == 0:
        raise ValueError("0 has no multiplicative order")
    m = a.field.p - 1
    order = m
    for q, _ in factorize(m) if m > 1 else []:
        while order % q == 0 and pow(a.value, order // q, a.field.p) == 1:
            order //= q
    return order
