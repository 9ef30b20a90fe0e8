from __future__ import annotations

import json
import pathlib

import pytest
import sympy

from catblocks.exactalg import (
    LaurentScalar,
    MultiLaurent,
    quantum_integer,
    rational_reduce_to_laurent,
)
from catblocks.kgrass import (
    FAMILIES,
    FixedPoint,
    KernelSpec,
    LocalizedClass,
    ckl_kernels,
    dim_tgr,
    dim_w,
    fixed_points,
    fm_apply,
    frak_kernels,
    frak_kernels_swapped,
    kernel_op,
    line_bundle_class,
    localized_matrix,
    n2_dictionary_report,
    op_E_ckl,
    op_F_ckl,
    op_theta,
    pole_cancellation,
    skyscraper_class,
    tangent_weights_tgr,
    tangent_weights_w,
    variable_names,
    verify_commutator,
    verify_theta_intertwine,
)
from catblocks.tensorrep import basis, build_rep

ORACLE = json.loads((pathlib.Path(__file__).parent / "data" / "oracle_values.json").read_text())
q = sympy.Symbol("q")


def mono(n, exps):
    return MultiLaurent.monomial(exps, 1, variable_names(n))


def test_line_bundle_classes():
    c = line_bundle_class(2, 1, 1)
    assert c[FixedPoint.of({1}, 2)] == mono(2, (1, 0, 0))
    assert c[FixedPoint.of({2}, 2)] == mono(2, (0, 1, 0))
    c = line_bundle_class(3, 2, -1)
    assert c[FixedPoint.of({1, 2}, 3)] == mono(3, (-1, -1, 0, 0))
    assert all(v == mono(3, (0, 0, 0, 0)) for v in line_bundle_class(3, 1, 0).values.values())


def test_dimensions():
    for n in range(1, 6):
        for r in range(n):
            small, large = FixedPoint.of(range(1, r + 1), n), FixedPoint.of(range(1, r + 2), n)
            assert len(tangent_weights_w(small, large)) == dim_w(n, r)
            assert 2 * dim_w(n, r) == dim_tgr(n, r) + dim_tgr(n, r + 1)
            assert len(tangent_weights_tgr(small)) == dim_tgr(n, r)


def test_diagonal_kernel_is_identity():
    k = KernelSpec("diag", 1, 0, 0)
    for alpha in (line_bundle_class(3, 1, 2), skyscraper_class(FixedPoint.of({2}, 3))):
        out = fm_apply(k, alpha)
        assert all(out[pt] == alpha[pt] for pt in fixed_points(3, 1))


def test_zero_class_maps_to_zero():
    zero = LocalizedClass(3, 1, {})
    out = fm_apply(ckl_kernels(3, 1)[0], zero)
    assert all(not v for v in out.values.values())


def test_n1_matrices_are_monomials():
    for op in (op_E_ckl(1, 0), op_F_ckl(1, 0)):
        (entry,) = [op.entry(t, s) for t in op.codomain for s in op.domain]
        assert rational_reduce_to_laurent(entry).is_monomial()


def test_theta_examples():
    n = 2
    assert op_theta(n, 0).to_json() == {"{}": {"{}": "1"}}
    assert op_theta(n, 1).to_json() == {"{1}": {"{1}": "t1"}, "{2}": {"{2}": "t2"}}
    assert op_theta(3, 2).to_json()["{1,3}"] == {"{1,3}": "t1^2*t3^2"}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_kernel_matrix_agrees_with_fm_apply(n):
    for r in range(n):
        for k in ckl_kernels(n, r) + frak_kernels(n, r):
            loc = localized_matrix(kernel_op(k, n), n)
            for src in fixed_points(n, k.source_rank):
                img = fm_apply(k, skyscraper_class(src))
                for tgt in fixed_points(n, k.target_rank):
                    assert img[tgt] == loc[(tgt, src)] or (not img[tgt] and not loc[(tgt, src)])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pole_cancellation_small(n):
    for r in range(n):
        for fam in FAMILIES.values():
            for k in fam(n, r):
                assert pole_cancellation(k, n).ok


def test_honest_classes_push_to_honest_classes():
    n = 3
    for r in range(n):
        E, F = frak_kernels(n, r)
        fm_apply(E, line_bundle_class(n, r, 1))
        fm_apply(F, line_bundle_class(n, r + 1, -2))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_theta_intertwining(n):
    for r in range(n):
        assert verify_theta_intertwine(n, r).ok


def test_swapped_exponents_do_not_intertwine():
    assert not verify_theta_intertwine(2, 0, frak=frak_kernels_swapped).ok


def _sympy_of(ls: LaurentScalar):
    return sum((c * q ** e for e, c in ls.coefficients.items()), sympy.Integer(0))


@pytest.mark.parametrize("key", sorted(ORACLE["commutator"]))
def test_commutator_matches_sympy_oracle(key):
    n, r, family = key.split(",")
    n, r = int(n), int(r)
    rep = verify_commutator(n, r, family)
    assert rep.ok
    eps = rep.epsilon if rep.epsilon is not None else 1
    want = sympy.sympify(ORACLE["commutator"][key], locals={"q": q})
    assert sympy.simplify(eps * _sympy_of(quantum_integer(n - 2 * r)) - want) == 0


def test_n2_extreme_weights():
    assert verify_commutator(2, 0).to_json()["quantum_integer"] == "q + q^-1"
    assert verify_commutator(2, 0).epsilon == -1
    assert verify_commutator(2, 2).epsilon == -1
    assert verify_commutator(2, 1).ok and verify_commutator(2, 1).epsilon is None


def test_n4_r1_scalar():
    rep = verify_commutator(4, 1, "frak")
    assert rep.ok and rep.scalar == "q + q^-1"


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sign_against_tensor_product(n):
    """Geometric ``fe - ef`` equals ``(-1)^(n-1)`` times the algebraic one."""
    rep = build_rep(n, q_deformed=True)
    comm = rep.f @ rep.e - rep.e @ rep.f
    for r in range(n + 1):
        v = basis(n, r)[0]
        algebraic = comm.entry(v, v)
        geo = verify_commutator(n, r, "ckl")
        assert geo.ok
        if algebraic:
            assert geo.epsilon == (-1) ** (n - 1)
            assert str(algebraic) == geo.scalar


def test_restored_shifts_make_the_sign_uniform():
    signs = {verify_commutator(n, r, "shifted").epsilon for n in (1, 2, 3) for r in range(n + 1)}
    assert signs - {None} == {1}


def test_swapped_exponents_break_the_commutator():
    assert not verify_commutator(2, 0, "swapped").ok


def test_kernel_exponent_tables():
    E, F = frak_kernels(2, 0)
    assert (E.a, E.b, E.internal_shift) == (-1, 2, 1)
    assert (F.a, F.b, F.internal_shift) == (1, 0, 0)
    E, F = frak_kernels_swapped(2, 0)
    assert (E.a, E.b, E.internal_shift) == (2, -1, 1)
    assert (F.a, F.b, F.internal_shift) == (0, 1, 0)


def test_n2_dictionary():
    rep = n2_dictionary_report()
    assert rep["swapped"]["standard"]
    assert not any(rep[f][d] for f in ("ckl", "frak") for d in ("standard", "flipped"))


def test_range_guard():
    with pytest.raises(ValueError):
        op_E_ckl(5, 1)
    op_E_ckl(5, 1, allow_large=True)
    with pytest.raises(ValueError):
        op_E_ckl(6, 1, allow_large=True)
