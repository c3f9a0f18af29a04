import json

import pytest
import sympy

from toricset.exactmath import PrimeField
from toricset.family import FamilyParams, equations, exponent_matrix
from toricset.groebner import Ideal, ideal_equal, ideal_member, saturate, variables_product
from toricset.polyring import PolyRing, binomial_from_vector, family_ring
from toricset.toricideal import (
    contains_equation_set,
    is_saturated,
    lattice_basis_ideal,
    toric_ideal,
    toric_ideal_from_matrix,
    verify_minimal_generation,
)

from conftest import sample_valid_params


def implicitize(params):
    """Independent route: eliminate the parameters from x - phi(u) with sympy."""
    n = params.n
    u = sympy.symbols(f"u1:{n + 1}")
    R = family_ring(n)
    X = sympy.symbols(" ".join(R.names))
    M = exponent_matrix(params)
    rel = []
    for j, var in enumerate(X):
        mono = sympy.Integer(1)
        for i in range(n):
            mono *= u[i] ** M[i][j]
        rel.append(var - mono)
    G = sympy.groebner(rel, *u, *X, order="lex")
    keep = [g for g in G.exprs if not g.free_symbols & set(u)]
    return Ideal([R.parse(str(sympy.expand(g)).replace("**", "^")) for g in keep], R)


def test_example1_equals_reference_generators(ex1, ref_gens):
    res = toric_ideal(ex1)
    assert ideal_equal(res.ideal, Ideal(ref_gens))
    assert all(g.is_binomial() for g in res.generators)
    assert len(res.lattice_basis) == 3


def test_example1_matches_implicitization(ex1):
    assert ideal_equal(toric_ideal(ex1).ideal, implicitize(ex1))


@pytest.mark.parametrize("params", sample_valid_params(6, seed=21, ns=(3,), max_entry=4))
def test_random_family_matches_implicitization(params):
    assert ideal_equal(toric_ideal(params).ideal, implicitize(params))


def test_identity_matrix_gives_zero_ideal():
    res = toric_ideal_from_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert res.generators == [] and res.lattice_basis == []
    assert res.ideal.is_zero()


def test_twisted_cubic():
    R = PolyRing(["a", "b", "c", "d"])
    res = toric_ideal_from_matrix([[3, 2, 1, 0], [0, 1, 2, 3]], R)
    expect = Ideal([R.parse(s) for s in ["a*c - b^2", "b*d - c^2", "a*d - b*c"]])
    assert ideal_equal(res.ideal, expect)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_basis_shape_over_prime_fields(ex1, p):
    over_q = toric_ideal(ex1)
    over_p = toric_ideal(ex1, PrimeField(p))
    R = family_ring(3, PrimeField(p))
    # binomials with coefficients +-1 transfer verbatim; the reduced bases coincide
    assert [g.to_str() for g in over_p.generators] == [g.change_ring(R).to_str() for g in over_q.generators]


def test_verify_minimal_generation(ex1, ring3, ref_gens):
    I = toric_ideal(ex1).ideal
    assert verify_minimal_generation(ref_gens, I)
    redundant = ref_gens + [ref_gens[0] * ring3.var("x1")]
    assert not verify_minimal_generation(redundant, I)
    assert not verify_minimal_generation(ref_gens[:7], I)
    x1 = ring3.var("x1")
    assert verify_minimal_generation([x1], Ideal([x1]))


def test_contains_equation_set(ex1, ring3):
    I = toric_ideal(ex1).ideal
    eqs = equations(ex1)
    assert contains_equation_set(I, eqs)
    shifted = [eqs.Fs[0], eqs.Fs[1], eqs.F + 1, eqs.G]
    assert not contains_equation_set(I, shifted)


@pytest.mark.parametrize("params", sample_valid_params(12, seed=8, max_entry=5))
def test_random_family_invariants(params):
    res = toric_ideal(params)
    I = res.ideal
    assert contains_equation_set(I, equations(params))
    assert len(res.lattice_basis) == params.n
    lat, _ = lattice_basis_ideal(exponent_matrix(params), I.ring)
    for g in lat.gens:
        assert ideal_member(g, I)
    assert all(g.is_binomial() for g in res.generators)


def test_resaturation_is_noop(ex1):
    I = toric_ideal(ex1).ideal
    assert is_saturated(I)
    assert ideal_equal(saturate(I, variables_product(I.ring)), I)


def test_lattice_ideal_is_not_saturated(ex1, ring3):
    lat, _ = lattice_basis_ideal(exponent_matrix(ex1), ring3)
    assert not is_saturated(lat)


def test_result_serialization(ex1):
    d = json.loads(toric_ideal(ex1).to_json())
    assert d["field"] == "Q"
    assert len(d["generators"]) == 9
    assert d["lattice_basis"][0] == [-3, 0, -2, 2, 0, 0]
    assert d["certificate"]["reduced_basis_size"] == 9
    R = family_ring(3)
    assert [R.parse(s).to_str() for s in d["generators"]] == d["generators"]
