"""Checks that the n+1 binomials cut out the toric variety.

Three independent routes:

* :func:`radical_certificates` -- every generator of the toric ideal lies in
  the radical of the equation ideal (Rabinowitsch test, any field).
* :func:`point_set_equality` -- over a small prime field, the equations and
  the toric ideal have the same zero set (exhaustive or sampled).
* :func:`lift_point` / :func:`exhaustive_lift_audit` -- the constructive
  route: recover parameters ``u`` with ``phi(u) = w`` for a solution ``w``
  by extracting roots and correcting them with roots of unity.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Sequence

import numpy as np

from .exactmath import FieldElement, PrimeField, fp_nth_roots, is_prime, primitive_root_of_unity
from .family import FamilyParams, equations, phi, require_valid
from .groebner import BudgetExceeded, Ideal, radical_member
from .polyring import QQ, Domain, Polynomial
from .toricideal import toric_ideal

DEFAULT_POINT_BUDGET = 10**7
DEFAULT_SEED = 20240101
CHUNK = 1 << 18


class PointBudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------- radical route


@dataclass
class GeneratorCertificate:
    generator: str
    in_radical: bool | None
    seconds: float
    error: str | None = None


@dataclass
class RadicalReport:
    field: str
    equations: list[str]
    dropped: str | None
    results: list[GeneratorCertificate]
    seconds: float

    @property
    def all_true(self) -> bool:
        return all(r.in_radical is True for r in self.results)

    @property
    def budget_exhausted(self) -> bool:
        return any(r.error for r in self.results)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["all_true"] = self.all_true
        return d


def radical_certificates(
    params: FamilyParams, domain: Domain = QQ, drop: str | None = None, budget: int | None = None
) -> RadicalReport:
    """Test each toric-ideal generator for membership in the radical of the equations.

    ``drop`` names one equation (``F1``.. ``F{n-1}``, ``F``, ``G``) to leave out.
    """
    start = time.perf_counter()
    eqs = equations(params, domain)
    polys = eqs.drop(drop) if drop else eqs.as_list()
    I = Ideal(polys, params.ring(domain))
    gens = toric_ideal(params, domain, budget).generators
    results = []
    for g in gens:
        t0 = time.perf_counter()
        try:
            ok, err = radical_member(g, I, budget), None
        except BudgetExceeded as exc:
            ok, err = None, str(exc)
        results.append(GeneratorCertificate(g.to_str(), ok, round(time.perf_counter() - t0, 4), err))
    return RadicalReport(
        str(domain), [p.to_str() for p in polys], drop, results, round(time.perf_counter() - start, 4)
    )


# ---------------------------------------------------------------- point route


class CompiledSystem:
    """Polynomials over F_q prepared for vectorized evaluation on many points."""

    def __init__(self, polys: Sequence[Polynomial], q: int):
        self.q = q
        self.terms = [[(int(c) % q, e) for e, c in p.terms.items()] for p in polys]
        self._build_tables()

    def _build_tables(self):
        exps = {k for p in self.terms for _, e in p for k in e}
        self.tables = {k: np.array([pow(v, k, self.q) for v in range(self.q)], dtype=np.int64) for k in exps}

    def __getstate__(self):
        return {"q": self.q, "terms": self.terms}

    def __setstate__(self, state):
        self.q, self.terms = state["q"], state["terms"]
        self._build_tables()

    def values(self, pts: np.ndarray) -> np.ndarray:
        """Array of shape (len(polys), len(pts)) with values in [0, q)."""
        q = self.q
        out = np.zeros((len(self.terms), len(pts)), dtype=np.int64)
        for k, poly in enumerate(self.terms):
            acc = np.zeros(len(pts), dtype=np.int64)
            for c, e in poly:
                t = np.full(len(pts), c, dtype=np.int64)
                for j, a in enumerate(e):
                    if a:
                        t = t * self.tables[a][pts[:, j]] % q
                acc = (acc + t) % q
            out[k] = acc
        return out

    def vanishes(self, pts: np.ndarray) -> np.ndarray:
        if not self.terms:
            return np.ones(len(pts), dtype=bool)
        return ~self.values(pts).any(axis=0)


def _points_from_indices(idx: np.ndarray, q: int, nvars: int) -> np.ndarray:
    pts = np.empty((len(idx), nvars), dtype=np.int64)
    rest = idx.copy()
    for j in range(nvars - 1, -1, -1):
        rest, pts[:, j] = np.divmod(rest, q)
    return pts


def _scan(args):
    eq_sys, id_sys, q, nvars, lo, hi = args
    n_eq = n_id = 0
    mismatches = []
    solutions = []
    for a in range(lo, hi, CHUNK):
        pts = _points_from_indices(np.arange(a, min(a + CHUNK, hi), dtype=np.int64), q, nvars)
        e = eq_sys.vanishes(pts)
        n_eq += int(e.sum())
        if id_sys is not None:
            i = id_sys.vanishes(pts)
            n_id += int(i.sum())
            bad = np.nonzero(e != i)[0]
            mismatches.extend(tuple(int(v) for v in pts[b]) for b in bad)
        else:
            solutions.extend(tuple(int(v) for v in row) for row in pts[e])
    return n_eq, n_id, mismatches, solutions


def _exhaustive(eq_sys, id_sys, q, nvars, workers):
    total = q**nvars
    if workers <= 1:
        return _scan((eq_sys, id_sys, q, nvars, 0, total))
    bounds = np.linspace(0, total, workers + 1, dtype=np.int64)
    jobs = [(eq_sys, id_sys, q, nvars, int(bounds[k]), int(bounds[k + 1])) for k in range(workers)]
    n_eq = n_id = 0
    mism, sols = [], []
    with ProcessPoolExecutor(workers) as pool:
        for a, b, m, s in pool.map(_scan, jobs):
            n_eq += a
            n_id += b
            mism.extend(m)
            sols.extend(s)
    return n_eq, n_id, sorted(mism), sorted(sols)


@dataclass
class PointSetReport:
    q: int
    mode: str
    points_checked: int
    count_equations: int
    count_ideal: int
    mismatches: list[tuple[int, ...]]
    seed: int | None = None
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.count_equations == self.count_ideal

    def to_dict(self) -> dict:
        d = asdict(self)
        d["mismatches"] = [list(m) for m in self.mismatches]
        d["ok"] = self.ok
        return d


def _check_q(q: int) -> PrimeField:
    if not is_prime(q):
        raise ValueError(f"q = {q} is not prime")
    return PrimeField(q)


def point_set_equality(
    params: FamilyParams,
    q: int,
    mode: str = "exhaustive",
    k: int = 10_000,
    seed: int = DEFAULT_SEED,
    budget: int = DEFAULT_POINT_BUDGET,
    workers: int = 1,
) -> PointSetReport:
    """Compare the F_q-zero sets of the n+1 equations and of the toric ideal."""
    F = _check_q(q)
    start = time.perf_counter()
    eqs = equations(params, F).as_list()
    gens = toric_ideal(params, F).generators
    eq_sys, id_sys = CompiledSystem(eqs, q), CompiledSystem(gens, q)
    nvars = 2 * params.n
    if mode == "exhaustive":
        if q**nvars > budget:
            raise PointBudgetExceeded(
                f"{q}^{nvars} = {q**nvars} points exceeds the budget of {budget}; use sample mode"
            )
        n_eq, n_id, mism, _ = _exhaustive(eq_sys, id_sys, q, nvars, workers)
        checked, used_seed = q**nvars, None
    elif mode == "sample":
        rng = np.random.default_rng(seed)
        pts = rng.integers(0, q, size=(k, nvars), dtype=np.int64)
        e, i = eq_sys.vanishes(pts), id_sys.vanishes(pts)
        n_eq, n_id = int(e.sum()), int(i.sum())
        mism = sorted({tuple(int(v) for v in pts[b]) for b in np.nonzero(e != i)[0]})
        checked, used_seed = k, seed
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return PointSetReport(q, mode, checked, n_eq, n_id, sorted(mism), used_seed, round(time.perf_counter() - start, 4))


# ---------------------------------------------------------------- lifting


@dataclass
class LiftOutcome:
    """Result of :func:`lift_point`.

    ``status`` is ``lifted`` (``u`` satisfies ``phi(u) == w``),
    ``needs_extension`` (``missing`` names a coordinate without the required
    root in F_q), ``not_on_variety`` (``w`` violates an equation) or
    ``failed`` (the corrections did not reproduce ``w``; never expected).
    """

    status: str
    u: tuple[int, ...] | None = None
    missing: dict | None = None
    trace: dict = field(default_factory=dict)


def _as_residues(w: Sequence, F: PrimeField | None) -> tuple[PrimeField, list[int]]:
    for c in w:
        if isinstance(c, FieldElement):
            if F is not None and c.field != F:
                raise ValueError(f"point lives in {c.field}, expected {F}")
            F = c.field
    if F is None:
        raise ValueError("pass field elements or an explicit field")
    return F, [F.convert(c) for c in w]


def lift_point(params: FamilyParams, w: Sequence, field: PrimeField | None = None) -> LiftOutcome:
    """Find u in F_q^n with phi(u) = w, following the root-of-unity corrections.

    1. pick the least d_i-th root of each x_i, and u_n = x_n;
    2. multiply every u_i by zeta_i^s, zeta_i generating the d_i-th roots of
       unity in F_q, so that prod u_i^{h_i} hits y_n;
    3. when x_n != 0, multiply u_i by omega_i = theta_i^{f_i^{-1} mod d_i}
       so that u_i^{f_i} u_n^{g_i} hits y_i; y_n then holds by the G relation.
    """
    F, pt = _as_residues(w, field)
    n = params.n
    if len(pt) != 2 * n:
        raise ValueError(f"point must have {2 * n} coordinates, got {len(pt)}")
    p = F.p
    eqs = equations(params, F).as_list()
    if any(e.evaluate(pt).value for e in eqs):
        return LiftOutcome("not_on_variety")
    xs, ys = pt[:n], pt[n:]
    m = n - 1
    d, f, g, h = params.d, params.f, params.g, params.h

    u = []
    for i in range(m):
        roots = fp_nth_roots(F(xs[i]), d[i])
        if not roots:
            return LiftOutcome(
                "needs_extension",
                missing={"coordinate": f"x{i + 1}", "value": xs[i], "root_degree": d[i]},
            )
        u.append(roots[0].value)
    u.append(xs[m])
    trace: dict = {"initial_u": list(u)}

    prod_h = 1
    for i in range(m):
        prod_h = prod_h * pow(u[i], h[i], p) % p
    if ys[m] != prod_h:
        if prod_h == 0:
            return LiftOutcome("failed", u=tuple(u), trace={**trace, "reason": "y_n != 0 but some x_i = 0"})
        eta = ys[m] * pow(prod_h, -1, p) % p
        zetas = [primitive_root_of_unity(d[i], F).value for i in range(m)]
        eta_prime = 1
        for i in range(m):
            eta_prime = eta_prime * pow(zetas[i], h[i], p) % p
        s, acc = None, 1
        for k in range(p - 1):
            if acc == eta:
                s = k
                break
            acc = acc * eta_prime % p
        if s is None:
            return LiftOutcome("failed", u=tuple(u), trace={**trace, "reason": "eta not a power of eta'"})
        for i in range(m):
            u[i] = u[i] * pow(zetas[i], s, p) % p
        trace.update(eta=eta, eta_prime=eta_prime, s=s, zetas=zetas)
    trace["after_yn_correction"] = list(u)

    if xs[m] != 0:
        omegas = []
        for i in range(m):
            if u[i] == 0:
                omegas.append(1)
                continue
            base = pow(u[i], f[i], p) * pow(u[m], g[i], p) % p
            theta = ys[i] * pow(base, -1, p) % p
            b = pow(f[i], -1, d[i]) if d[i] > 1 else 0
            omega = pow(theta, b, p)
            omegas.append(omega)
            u[i] = u[i] * omega % p
        trace["omegas"] = omegas

    image = [c.value for c in phi(params, [F(v) for v in u])]
    if image != pt:
        return LiftOutcome("failed", u=tuple(u), trace={**trace, "image": image})
    return LiftOutcome("lifted", u=tuple(u), trace=trace)


def has_root(a: int, r: int, q: int) -> bool:
    """Brute-force existence of an r-th root of a in F_q."""
    return any(pow(x, r, q) == a % q for x in range(q))


@dataclass
class AuditSummary:
    q: int
    solutions: int
    lifted: int
    needs_extension: int
    failed: int
    not_on_variety: int
    unverified_extensions: int
    parameter_points: int
    forward_failures: int
    distinct_images: int
    seconds: float
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.failed == 0
            and self.not_on_variety == 0
            and self.unverified_extensions == 0
            and self.forward_failures == 0
            and self.lifted + self.needs_extension == self.solutions
            and self.lifted == self.distinct_images
        )

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return (
            f"{verdict} lift-audit q={self.q} solutions={self.solutions} lifted={self.lifted} "
            f"needs_extension={self.needs_extension} failed={self.failed} "
            f"forward={self.parameter_points - self.forward_failures}/{self.parameter_points}"
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        d["summary"] = self.line()
        return d


def solution_points(params: FamilyParams, q: int, budget: int = DEFAULT_POINT_BUDGET, workers: int = 1):
    """All points of F_q^{2n} where the n+1 equations vanish, by brute force."""
    F = _check_q(q)
    nvars = 2 * params.n
    if q**nvars > budget:
        raise PointBudgetExceeded(f"{q}^{nvars} = {q**nvars} points exceeds the budget of {budget}")
    eq_sys = CompiledSystem(equations(params, F).as_list(), q)
    return sorted(_exhaustive(eq_sys, None, q, nvars, workers)[3])


def exhaustive_lift_audit(
    params: FamilyParams, q: int, budget: int = DEFAULT_POINT_BUDGET, workers: int = 1
) -> AuditSummary:
    """Lift every F_q-solution and push every parameter point forward."""
    require_valid(params)
    start = time.perf_counter()
    F = _check_q(q)
    sols = solution_points(params, q, budget, workers)
    counts = {"lifted": 0, "needs_extension": 0, "failed": 0, "not_on_variety": 0}
    unverified = 0
    failures = []
    for w in sols:
        out = lift_point(params, w, F)
        counts[out.status] += 1
        if out.status == "needs_extension":
            i = int(out.missing["coordinate"][1:]) - 1
            if has_root(w[i], params.d[i], q):
                unverified += 1
                failures.append({"point": list(w), "reason": "claimed missing root exists"})
        elif out.status != "lifted":
            failures.append({"point": list(w), "status": out.status, "trace": out.trace})

    eqs = equations(params, F).as_list()
    sol_set = set(sols)
    forward_fail = 0
    images = set()
    for u in product(range(q), repeat=params.n):
        img = tuple(c.value for c in phi(params, [F(v) for v in u]))
        images.add(img)
        if any(e.evaluate(img).value for e in eqs) or img not in sol_set:
            forward_fail += 1
            failures.append({"parameter": list(u), "reason": "image violates the equations"})
    return AuditSummary(
        q,
        len(sols),
        counts["lifted"],
        counts["needs_extension"],
        counts["failed"],
        counts["not_on_variety"],
        unverified,
        q**params.n,
        forward_fail,
        len(images),
        round(time.perf_counter() - start, 4),
        failures[:20],
    )


def report_json(report) -> str:
    return json.dumps(report.to_dict(), indent=2, default=str)

