from __future__ import annotations

import json
import pathlib

import pytest
import sympy

from catblocks.tensorrep import (
    MatrixRep,
    basis,
    build_rep,
    commutator_defect,
    corrected_identification_n2,
    is_intertwiner,
    k_relations_hold,
    n2_intertwiner_report,
    pcanonical_n2_rep,
    rep_matrices,
    solve_intertwiner,
    unit_coefficient_identification_n2,
)

ORACLE = json.loads((pathlib.Path(__file__).parent / "data" / "oracle_values.json").read_text())
q = sympy.Symbol("q")


def kron_index(v, n):
    return sum(1 << (n - i) for i in v.subset)


def as_sympy(c):
    if isinstance(c, int):
        return sympy.Integer(c)
    return sum((k * q ** e for e, k in c.coefficients.items()), sympy.Integer(0))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_q_action_matches_kronecker_oracle(n):
    rep = build_rep(n, q_deformed=True)
    frozen = ORACLE["tensor_rep"][str(n)]
    for name, op in (("e", rep.e), ("f", rep.f)):
        want = sympy.Matrix([[sympy.sympify(x) for x in row] for row in frozen[name]])
        got = sympy.zeros(2 ** n, 2 ** n)
        for src in basis(n):
            for tgt in basis(n):
                got[kron_index(tgt, n), kron_index(src, n)] = as_sympy(op.entry(tgt, src))
        assert sympy.simplify(got - want) == sympy.zeros(2 ** n, 2 ** n), name


@pytest.mark.parametrize("n", range(1, 7))
@pytest.mark.parametrize("deformed", [False, True])
def test_commutator_and_k_relations(n, deformed):
    rep = build_rep(n, deformed)
    assert commutator_defect(rep) == rep.e.scale(0)
    assert k_relations_hold(rep)


def test_basis_order_n2():
    assert [str(v) for v in basis(2)] == ["v00", "v10", "v01", "v11"]


def test_self_intertwiners_of_two_factors():
    A = rep_matrices(build_rep(2))
    assert len(solve_intertwiner(A, A)) == 2


def test_weight_mismatch_forces_zero():
    zero = MatrixRep(["x"], sympy.zeros(1), sympy.zeros(1), sympy.Matrix([[0]]))
    one = rep_matrices(build_rep(1))
    assert solve_intertwiner(zero, one) == []


def test_pcanonical_rep_is_an_sl2_rep():
    rep = pcanonical_n2_rep(7)
    assert rep.commutator_ok()
    with pytest.raises(ValueError):
        pcanonical_n2_rep(2)


def test_n2_intertwiner_report():
    rep = n2_intertwiner_report(5)
    assert rep.dimension == 2
    assert rep.invertible_member is not None and rep.invertible_member.det() != 0
    assert not rep.unit_map_intertwines
    assert rep.corrected_map_intertwines and rep.corrected_in_span
    A, B = pcanonical_n2_rep(5), rep_matrices(build_rep(2))
    assert not is_intertwiner(unit_coefficient_identification_n2(), A, B)
    assert is_intertwiner(corrected_identification_n2(), A, B)
