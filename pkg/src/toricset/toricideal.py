"""The defining ideal of a toric variety from its exponent matrix.

Pipeline: integer kernel of the matrix -> one binomial per basis vector ->
saturate by the product of all variables (a single auxiliary variable).
The saturated ideal is stored with its reduced grevlex basis as generators.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Sequence

from .family import EquationSet, FamilyParams, exponent_matrix, require_valid
from .groebner import Ideal, ideal_equal, ideal_member, saturate, variables_product
from .lattice import IntMatrix, kernel_basis
from .polyring import QQ, Domain, Polynomial, PolyRing, binomial_from_vector, family_ring, grevlex


@dataclass
class ToricIdealResult:
    ideal: Ideal
    lattice_basis: list[tuple[int, ...]]
    certificate: dict = field(default_factory=dict)

    @property
    def generators(self) -> list[Polynomial]:
        return self.ideal.gens

    def to_dict(self) -> dict:
        return {
            "ring": list(self.ideal.ring.names),
            "field": str(self.ideal.ring.domain),
            "generators": [g.to_str() for g in self.generators],
            "lattice_basis": [list(v) for v in self.lattice_basis],
            "certificate": self.certificate,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def lattice_basis_ideal(M: IntMatrix, ring: PolyRing) -> tuple[Ideal, list[tuple[int, ...]]]:
    basis = kernel_basis(M, ncols=ring.nvars)
    return Ideal([binomial_from_vector(v, ring) for v in basis], ring), basis


def toric_ideal_from_matrix(
    M: IntMatrix, ring: PolyRing | None = None, domain: Domain = QQ, budget: int | None = None
) -> ToricIdealResult:
    """Toric ideal of the monomial map given by the columns of ``M``."""
    ncols = len(M[0]) if M else (ring.nvars if ring else 0)
    if ring is None:
        ring = PolyRing([f"z{i}" for i in range(1, ncols + 1)], domain)
    if ring.nvars != ncols:
        raise ValueError(f"matrix has {ncols} columns, ring has {ring.nvars} variables")
    start = time.perf_counter()
    lat, basis = lattice_basis_ideal(M, ring)
    cert = {
        "lattice_rank": len(basis),
        "lattice_generators": len(lat.gens),
        "saturated_by": "product of all variables",
        "auxiliary_variable_order": "block order, auxiliary variable greatest, grevlex inside blocks",
        "output_order": "grevlex",
    }
    if not basis:
        sat = Ideal([], ring)
        cert["reduced_basis_size"] = 0
    else:
        sat = saturate(lat, variables_product(ring), budget)
        cert["elimination_basis_size"] = len(sat.gens)
        gb = sat.groebner_basis(grevlex, budget)
        cert["reduced_basis_size"] = len(gb)
        sat = Ideal(gb, ring)
    cert["seconds"] = round(time.perf_counter() - start, 4)
    return ToricIdealResult(sat, basis, cert)


def toric_ideal(params: FamilyParams, domain: Domain = QQ, budget: int | None = None) -> ToricIdealResult:
    require_valid(params)
    return toric_ideal_from_matrix(exponent_matrix(params), family_ring(params.n, domain), budget=budget)


def verify_minimal_generation(gens: Sequence[Polynomial], I: Ideal) -> bool:
    """``gens`` generate ``I`` and none of them is redundant."""
    gens = list(gens)
    if not gens:
        return not I.groebner_basis()
    if not ideal_equal(Ideal(gens, I.ring), I):
        return False
    for k in range(len(gens)):
        rest = gens[:k] + gens[k + 1 :]
        if not rest:
            if not gens[k]:
                return False
            continue
        if ideal_member(gens[k], Ideal(rest, I.ring)):
            return False
    return True


def contains_equation_set(I: Ideal, eqs: EquationSet | Sequence[Polynomial]) -> bool:
    members = eqs.as_list() if isinstance(eqs, EquationSet) else list(eqs)
    return all(ideal_member(p, I) for p in members)


def is_saturated(I: Ideal) -> bool:
    """Re-saturating by the product of all variables gives back the same ideal."""
    if I.is_zero():
        return True
    return ideal_equal(saturate(I, variables_product(I.ring)), I)

