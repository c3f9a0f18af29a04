"""The parametric family of toric varieties and its n+1 binomial equations.

A member is fixed by ``n >= 3`` and four vectors ``d, f, g, h`` of n-1
positive integers. The variety is the closure of the image of

    u -> (u1^d1, ..., u_{n-1}^d_{n-1}, u_n,
          u1^f1 * u_n^g1, ..., u_{n-1}^f_{n-1} * u_n^g_{n-1},
          u1^h1 * ... * u_{n-1}^h_{n-1})

in the coordinates x1..xn, y1..yn.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from math import prod
from typing import Sequence

from .exactmath import factorize, gcd
from .lattice import IntMatrix, rank
from .polyring import QQ, Domain, Polynomial, PolyRing, binomial_from_vector, family_ring

EXAMPLE_1 = {"n": 3, "d": [2, 3], "f": [3, 5], "g": [1, 1], "h": [3, 5]}


class ParamsError(ValueError):
    """Structurally malformed parameters (wrong keys, lengths or signs)."""


@dataclass(frozen=True)
class FamilyParams:
    n: int
    d: tuple[int, ...]
    f: tuple[int, ...]
    g: tuple[int, ...]
    h: tuple[int, ...]

    def __post_init__(self):
        for name in ("d", "f", "g", "h"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not isinstance(self.n, int) or self.n < 3:
            raise ParamsError(f"n must be an integer >= 3, got {self.n!r}")
        for name in ("d", "f", "g", "h"):
            vec = getattr(self, name)
            if len(vec) != self.n - 1:
                raise ParamsError(f"{name} must have n-1 = {self.n - 1} entries, got {len(vec)}")
            if any(not isinstance(v, int) or isinstance(v, bool) or v < 1 for v in vec):
                raise ParamsError(f"{name} entries must be positive integers, got {list(vec)}")

    @classmethod
    def from_dict(cls, data: dict) -> "FamilyParams":
        if not isinstance(data, dict):
            raise ParamsError("parameters must be a JSON object")
        missing = [k for k in ("n", "d", "f", "g", "h") if k not in data]
        if missing:
            raise ParamsError(f"missing field(s): {', '.join(missing)}")
        extra = set(data) - {"n", "d", "f", "g", "h"}
        if extra:
            raise ParamsError(f"unknown field(s): {', '.join(sorted(extra))}")
        for k in ("d", "f", "g", "h"):
            if not isinstance(data[k], list):
                raise ParamsError(f"field {k!r} must be a list")
        return cls(data["n"], data["d"], data["f"], data["g"], data["h"])

    @classmethod
    def from_json(cls, text: str) -> "FamilyParams":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParamsError(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def example1(cls) -> "FamilyParams":
        return cls.from_dict(EXAMPLE_1)

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self).items()}

    def ring(self, domain: Domain = QQ) -> PolyRing:
        return family_ring(self.n, domain)


@dataclass(frozen=True)
class PrimeWitness:
    p: int
    q: int
    i: int  # 1-based
    j: int


@dataclass(frozen=True)
class Violation:
    condition: str
    indices: tuple[int, ...]
    message: str

    def to_dict(self):
        return {"condition": self.condition, "indices": list(self.indices), "message": self.message}


@dataclass(frozen=True)
class Validation:
    violations: tuple[Violation, ...]
    witness: PrimeWitness | None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "witness": asdict(self.witness) if self.witness else None,
        }


class InvalidFamilyError(ValueError):
    def __init__(self, validation: Validation):
        super().__init__("; ".join(v.message for v in validation.violations))
        self.validation = validation


def prime_witness(d: Sequence[int]) -> PrimeWitness | None:
    """Two distinct primes dividing entries of d (smallest such pair)."""
    found: list[tuple[int, int]] = []
    for i, di in enumerate(d, 1):
        found.extend((p, i) for p, _ in factorize(di))
    found.sort()
    for p, i in found:
        for q, j in found:
            if q != p:
                return PrimeWitness(p, q, i, j)
    return None


def validate(params: FamilyParams) -> Validation:
    """Check every coprimality hypothesis and the two-prime hypothesis.

    All violations are reported, not just the first.
    """
    out = []
    m = params.n - 1
    for i in range(m):
        di, fi, hi = params.d[i], params.f[i], params.h[i]
        if gcd(di, fi) != 1:
            out.append(Violation("gcd(d_i,f_i)=1", (i + 1,), f"gcd(d_{i+1},f_{i+1}) = {gcd(di, fi)} != 1"))
        if gcd(di, hi) != 1:
            out.append(Violation("gcd(d_i,h_i)=1", (i + 1,), f"gcd(d_{i+1},h_{i+1}) = {gcd(di, hi)} != 1"))
    for i in range(m):
        for j in range(i + 1, m):
            g = gcd(params.d[i], params.d[j])
            if g != 1:
                out.append(
                    Violation("gcd(d_i,d_j)=1", (i + 1, j + 1), f"gcd(d_{i+1},d_{j+1}) = {g} != 1 at ({i+1},{j+1})")
                )
    witness = prime_witness(params.d)
    if witness is None:
        out.append(Violation("two-primes", (), "no two distinct primes divide the entries of d"))
    return Validation(tuple(out), witness if not out else None)


def require_valid(params: FamilyParams) -> None:
    v = validate(params)
    if not v.ok:
        raise InvalidFamilyError(v)


def exponent_matrix(params: FamilyParams) -> IntMatrix:
    """n x 2n matrix whose columns are the semigroup generators.

    Column order matches the variables x1..xn, y1..yn.
    """
    n, m = params.n, params.n - 1
    cols = []
    for i in range(m):
        c = [0] * n
        c[i] = params.d[i]
        cols.append(c)
    cols.append([0] * (n - 1) + [1])
    for i in range(m):
        c = [0] * n
        c[i] = params.f[i]
        c[n - 1] = params.g[i]
        cols.append(c)
    cols.append(list(params.h) + [0])
    return [[cols[j][r] for j in range(2 * n)] for r in range(n)]


def phi(params: FamilyParams, u: Sequence) -> list:
    """The monomial parametrization evaluated at u (field elements or ints)."""
    n, m = params.n, params.n - 1
    if len(u) != n:
        raise ValueError(f"need {n} parameters, got {len(u)}")
    xs = [u[i] ** params.d[i] for i in range(m)] + [u[n - 1]]
    ys = [u[i] ** params.f[i] * u[n - 1] ** params.g[i] for i in range(m)]
    yn = u[0] ** params.h[0]
    for i in range(1, m):
        yn = yn * u[i] ** params.h[i]
    return xs + ys + [yn]


@dataclass(frozen=True)
class BezoutPair:
    alpha: int
    beta: int


def bezout_pairs(params: FamilyParams) -> list[BezoutPair]:
    """Canonical (alpha_i, beta_i) with h_i = alpha_i d_i + beta_i f_i, 0 <= beta_i < d_i."""
    out = []
    for i, (d, f, h) in enumerate(zip(params.d, params.f, params.h), 1):
        if gcd(d, f) != 1:
            raise ValueError(f"gcd(d_{i},f_{i}) = {gcd(d, f)}: no Bezout pair")
        beta = h * pow(f, -1, d) % d if d > 1 else 0
        alpha, r = divmod(h - beta * f, d)
        assert r == 0
        out.append(BezoutPair(alpha, beta))
    return out


def Fi_vector(params: FamilyParams, i: int) -> list[int]:
    n = params.n
    if not 1 <= i <= n - 1:
        raise IndexError(f"index {i} outside 1..{n - 1}")
    v = [0] * (2 * n)
    v[n + i - 1] = params.d[i - 1]
    v[i - 1] = -params.f[i - 1]
    v[n - 1] = -params.d[i - 1] * params.g[i - 1]
    return v


def F_vector(params: FamilyParams) -> list[int]:
    n = params.n
    D = prod(params.d)
    v = [0] * (2 * n)
    v[2 * n - 1] = D
    for i in range(n - 1):
        v[i] = -params.h[i] * (D // params.d[i])
    return v


def G_vector(params: FamilyParams) -> list[int]:
    n = params.n
    bz = bezout_pairs(params)
    v = [b.alpha for b in bz]
    v.append(-sum(b.beta * g for b, g in zip(bz, params.g)))
    v.extend(b.beta for b in bz)
    v.append(-1)
    return v


def build_Fi(params: FamilyParams, i: int, domain: Domain = QQ) -> Polynomial:
    """y_i^{d_i} - x_i^{f_i} x_n^{d_i g_i} (1-based i)."""
    return binomial_from_vector(Fi_vector(params, i), params.ring(domain))


def build_F(params: FamilyParams, domain: Domain = QQ) -> Polynomial:
    """y_n^{d_1...d_{n-1}} - prod_i x_i^{h_i * prod_{k != i} d_k}."""
    return binomial_from_vector(F_vector(params), params.ring(domain))


def build_G(params: FamilyParams, domain: Domain = QQ) -> Polynomial:
    return binomial_from_vector(G_vector(params), params.ring(domain))


@dataclass(frozen=True)
class EquationSet:
    Fs: tuple[Polynomial, ...]
    F: Polynomial
    G: Polynomial

    def named(self) -> dict[str, Polynomial]:
        out = {f"F{i}": p for i, p in enumerate(self.Fs, 1)}
        out["F"] = self.F
        out["G"] = self.G
        return out

    def as_list(self) -> list[Polynomial]:
        return [*self.Fs, self.F, self.G]

    def drop(self, name: str) -> list[Polynomial]:
        named = self.named()
        if name not in named:
            raise KeyError(f"no equation named {name!r}; have {', '.join(named)}")
        return [p for k, p in named.items() if k != name]

    def __len__(self):
        return len(self.Fs) + 2


def equations(params: FamilyParams, domain: Domain = QQ) -> EquationSet:
    require_valid(params)
    n = params.n
    return EquationSet(
        tuple(build_Fi(params, i, domain) for i in range(1, n)),
        build_F(params, domain),
        build_G(params, domain),
    )


def equation_vectors(params: FamilyParams) -> dict[str, list[int]]:
    out = {f"F{i}": Fi_vector(params, i) for i in range(1, params.n)}
    out["F"] = F_vector(params)
    out["G"] = G_vector(params)
    return out


def codim(params: FamilyParams, check: bool = True) -> int:
    """Codimension n, optionally cross-checked as 2n - rank of the exponent matrix."""
    if check:
        r = rank(exponent_matrix(params))
        if 2 * params.n - r != params.n:
            raise AssertionError(f"exponent matrix has rank {r}, expected {params.n}")
    return params.n

