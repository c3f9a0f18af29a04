import pytest

from toricset.exactmath import PrimeField
from toricset.family import (
    FamilyParams,
    InvalidFamilyError,
    ParamsError,
    bezout_pairs,
    build_F,
    build_Fi,
    build_G,
    codim,
    equation_vectors,
    equations,
    exponent_matrix,
    phi,
    validate,
)
from toricset.lattice import check_relation, in_lattice_span, kernel_basis, rank
from toricset.polyring import family_ring

from conftest import sample_valid_params


def P(**kw):
    base = {"n": 3, "d": [2, 3], "f": [3, 5], "g": [1, 1], "h": [3, 5]}
    base.update(kw)
    return FamilyParams.from_dict(base)


def test_validate_example1(ex1):
    v = validate(ex1)
    assert v.ok
    w = v.witness
    assert (w.p, w.q, w.i, w.j) == (2, 3, 1, 2)


def test_validate_reports_all_violations():
    v = validate(P(d=[2, 4]))
    conds = [x.condition for x in v.violations]
    assert "gcd(d_i,d_j)=1" in conds and "two-primes" in conds
    assert v.violations[0].indices == (1, 2)
    assert not validate(P(d=[2, 2])).ok
    v = validate(P(d=[1, 1]))
    assert [x.condition for x in v.violations] == ["two-primes"]
    v = validate(P(d=[2, 3], f=[4, 5], h=[3, 6]))
    assert {x.condition for x in v.violations} == {"gcd(d_i,f_i)=1", "gcd(d_i,h_i)=1"}


def test_degenerate_d_one_accepted():
    assert validate(FamilyParams(4, [1, 2, 3], [1, 1, 1], [1, 1, 1], [1, 1, 1])).ok


@pytest.mark.parametrize(
    "data",
    [
        {"n": 3, "d": [2, 3], "f": [3, 5], "g": [1, 1]},
        {"n": 2, "d": [2], "f": [3], "g": [1], "h": [3]},
        {"n": 3, "d": [2, 3, 5], "f": [3, 5], "g": [1, 1], "h": [3, 5]},
        {"n": 3, "d": [2, 0], "f": [3, 5], "g": [1, 1], "h": [3, 5]},
        {"n": 3, "d": "23", "f": [3, 5], "g": [1, 1], "h": [3, 5]},
        {"n": 3, "d": [2, 3], "f": [3, 5], "g": [1, 1], "h": [3, 5], "k": 1},
    ],
)
def test_structural_errors(data):
    with pytest.raises(ParamsError):
        FamilyParams.from_dict(data)


def test_json_round_trip(ex1):
    assert FamilyParams.from_json('{"n":3, "d":[2,3], "f":[3,5], "g":[1,1], "h":[3,5]}') == ex1
    assert FamilyParams.from_dict(ex1.to_dict()) == ex1
    with pytest.raises(ParamsError):
        FamilyParams.from_json("{")


def test_exponent_matrix(ex1):
    M = exponent_matrix(ex1)
    cols = [tuple(r[j] for r in M) for j in range(6)]
    assert cols == [(2, 0, 0), (0, 3, 0), (0, 0, 1), (3, 0, 1), (0, 5, 1), (3, 5, 0)]
    ones = exponent_matrix(FamilyParams(3, [1, 1], [1, 1], [1, 1], [1, 1]))
    assert all(v in (0, 1) for r in ones for v in r)
    M4 = exponent_matrix(FamilyParams(4, [2, 3, 5], [1, 1, 1], [1, 1, 1], [1, 1, 1]))
    assert len(M4) == 4 and len(M4[0]) == 8


def test_phi_examples(ex1):
    F7 = PrimeField(7)
    assert [c.value for c in phi(ex1, [F7(1)] * 3)] == [1] * 6
    assert [c.value for c in phi(ex1, [F7(0)] * 3)] == [0] * 6
    assert [c.value for c in phi(ex1, [F7(2), F7(1), F7(3)])] == [4, 1, 3, 3, 3, 1]
    with pytest.raises(ValueError):
        phi(ex1, [F7(1)] * 2)


def test_bezout_pairs_examples(ex1):
    assert [(b.alpha, b.beta) for b in bezout_pairs(ex1)] == [(0, 1), (0, 1)]
    other = FamilyParams(3, [5, 2], [2, 3], [1, 1], [3, 3])
    b = bezout_pairs(other)[0]
    assert (b.alpha, b.beta) == (-1, 4)
    with pytest.raises(ValueError):
        bezout_pairs(FamilyParams(3, [2, 3], [4, 5], [1, 1], [3, 5]))


@pytest.mark.parametrize("params", sample_valid_params(40, seed=3))
def test_bezout_identity_and_range(params):
    for b, d, f, h in zip(bezout_pairs(params), params.d, params.f, params.h):
        assert h == b.alpha * d + b.beta * f
        assert 0 <= b.beta < d or d == 1
    assert bezout_pairs(params) == bezout_pairs(params)


def test_equations_example1(ex1, ring3):
    Q = ring3.parse
    assert build_Fi(ex1, 1) == Q("y1^2 - x1^3*x3^2")
    assert build_Fi(ex1, 2) == Q("y2^3 - x2^5*x3^3")
    assert build_F(ex1) == Q("y3^6 - x1^9*x2^10")
    assert build_G(ex1) == Q("y1*y2 - x3^2*y3")
    assert build_G(ex1).same_up_to_scalar(Q("x3^2*y3 - y1*y2"))
    with pytest.raises(IndexError):
        build_Fi(ex1, 3)


def test_equation_edge_cases():
    p = FamilyParams(3, [1, 6], [4, 5], [2, 1], [1, 1])
    R = family_ring(3)
    assert build_Fi(p, 1) == R.parse("y1 - x1^4*x3^2")
    ones = FamilyParams(3, [1, 1], [1, 1], [1, 1], [1, 1])
    assert build_F(ones) == R.parse("y3 - x1*x2")


def test_G_with_larger_g():
    p = FamilyParams(3, [2, 3], [3, 5], [2, 3], [3, 5])
    assert [(b.alpha, b.beta) for b in bezout_pairs(p)] == [(0, 1), (0, 1)]
    assert build_G(p) == family_ring(3).parse("y1*y2 - x3^5*y3")


def test_equations_refuse_invalid_family():
    with pytest.raises(InvalidFamilyError):
        equations(P(d=[2, 4]))


def test_equation_set(ex1):
    eqs = equations(ex1)
    assert len(eqs) == 4
    assert list(eqs.named()) == ["F1", "F2", "F", "G"]
    assert len(eqs.drop("G")) == 3
    with pytest.raises(KeyError):
        eqs.drop("H")


@pytest.mark.parametrize("params", sample_valid_params(30, seed=11))
def test_equation_vectors_are_relations(params):
    K = kernel_basis(exponent_matrix(params))
    for name, v in equation_vectors(params).items():
        assert check_relation(v, params), name
        assert in_lattice_span(v, K) is not None


def test_codim(ex1):
    assert codim(ex1) == 3
    assert rank(exponent_matrix(ex1)) == 3
    assert codim(FamilyParams(4, [2, 3, 5], [1, 1, 1], [1, 2, 3], [1, 1, 1])) == 4


@pytest.mark.parametrize("params", sample_valid_params(20, seed=5))
def test_forward_inclusion(params):
    import random

    rng = random.Random(0)
    F = PrimeField(11)
    eqs = equations(params, F).as_list()
    for _ in range(30):
        u = [F(rng.randrange(11)) for _ in range(params.n)]
        w = phi(params, u)
        assert all(e.evaluate(w) == 0 for e in eqs)
