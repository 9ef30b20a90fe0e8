"""The sl_2 (and U_q(sl_2)) representation (C^2)^{tensor n} in the subset basis,
intertwiner solving, and the n = 2 representation on irreducible classes.

``v_S`` has ``v_1`` in the positions of ``S`` and ``v_0`` elsewhere.  The
q-action uses the coproduct ``D(e) = e (x) k + 1 (x) e``,
``D(f) = f (x) 1 + k^{-1} (x) f``, ``D(k) = k (x) k``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy

from .exactalg import FormalSum, LaurentScalar, LinearOp, quantum_integer


@dataclass(frozen=True)
class SubsetBasisVector:
    subset: frozenset[int]
    n: int

    @property
    def weight(self) -> int:
        return 2 * len(self.subset) - self.n

    def sort_key(self):
        return (len(self.subset), tuple(sorted(self.subset)))

    def __str__(self) -> str:
        return "v" + "".join("1" if i in self.subset else "0" for i in range(1, self.n + 1))


def basis(n: int, r: int | None = None) -> list[SubsetBasisVector]:
    sizes = range(n + 1) if r is None else [r]
    return [SubsetBasisVector(frozenset(c), n)
            for k in sizes for c in itertools.combinations(range(1, n + 1), k)]


@dataclass
class RepOperators:
    n: int
    e: LinearOp
    f: LinearOp
    k: LinearOp
    k_inv: LinearOp
    q_deformed: bool

    def h(self) -> LinearOp:
        """Weight operator (the q = 1 shadow of k)."""
        return LinearOp.diagonal({v: LaurentScalar(v.weight) for v in basis(self.n)})


def _e_exponent(S: frozenset[int], i: int, n: int) -> int:
    # k acts on every factor to the right of position i
    return sum(1 if j in S else -1 for j in range(i + 1, n + 1))


def _f_exponent(S: frozenset[int], i: int) -> int:
    # k^{-1} acts on every factor to the left of position i
    return -sum(1 if j in S else -1 for j in range(1, i))


def build_rep(n: int, q_deformed: bool = False) -> RepOperators:
    if n < 1:
        raise ValueError("n must be at least 1")
    vs = basis(n)
    e_cols, f_cols, k_diag, kinv_diag = {}, {}, {}, {}
    for v in vs:
        S = v.subset
        e_terms, f_terms = {}, {}
        for i in range(1, n + 1):
            if i not in S:
                w = _e_exponent(S, i, n) if q_deformed else 0
                e_terms[SubsetBasisVector(S | {i}, n)] = LaurentScalar.q(w)
            else:
                w = _f_exponent(S, i) if q_deformed else 0
                f_terms[SubsetBasisVector(S - {i}, n)] = LaurentScalar.q(w)
        e_cols[v] = FormalSum(e_terms)
        f_cols[v] = FormalSum(f_terms)
        wt = v.weight if q_deformed else 0
        k_diag[v] = LaurentScalar.q(wt)
        kinv_diag[v] = LaurentScalar.q(-wt)
    return RepOperators(n, LinearOp(e_cols, vs, vs), LinearOp(f_cols, vs, vs),
                        LinearOp.diagonal(k_diag), LinearOp.diagonal(kinv_diag), q_deformed)


def commutator_defect(rep: RepOperators) -> LinearOp:
    """``ef - fe - (k - k^{-1})/(q - q^{-1})``; zero when the U_q relation holds.

    The quotient is taken weight by weight as the quantum integer of the
    weight, so no division happens.  At q = 1 it is the weight itself.
    """
    vs = basis(rep.n)
    if rep.q_deformed:
        kk = LinearOp.diagonal({v: quantum_integer(v.weight) for v in vs})
    else:
        kk = LinearOp.diagonal({v: LaurentScalar(v.weight) for v in vs})
    return rep.e @ rep.f - rep.f @ rep.e - kk


def k_relations_hold(rep: RepOperators) -> bool:
    """``k e k^{-1} = q^2 e`` and ``k f k^{-1} = q^{-2} f``."""
    q2 = LaurentScalar.q(2 if rep.q_deformed else 0)
    q2i = LaurentScalar.q(-2 if rep.q_deformed else 0)
    return (rep.k @ rep.e @ rep.k_inv == rep.e.scale(q2)
            and rep.k @ rep.f @ rep.k_inv == rep.f.scale(q2i))


# ---------------------------------------------------------------------------
# matrices and intertwiners


def to_matrix(op: LinearOp, labels: Sequence, q_value: int | Fraction = 1) -> sympy.Matrix:
    """Dense rational matrix of ``op`` in the ordered basis ``labels``."""
    def val(c):
        if isinstance(c, LaurentScalar):
            return sympy.Rational(Fraction(c.evaluate(q_value)))
        return sympy.Rational(Fraction(c))
    return sympy.Matrix([[val(op.entry(r, c)) for c in labels] for r in labels])


@dataclass
class MatrixRep:
    """An sl_2 action given by (e, f, h) matrices in a named basis."""

    labels: list
    e: sympy.Matrix
    f: sympy.Matrix
    h: sympy.Matrix

    def commutator_ok(self) -> bool:
        return self.e * self.f - self.f * self.e == self.h

    def to_json(self) -> dict:
        def m(x):
            return [[str(a) for a in row] for row in x.tolist()]
        return {"basis": [str(x) for x in self.labels], "e": m(self.e), "f": m(self.f),
                "h": m(self.h)}


def rep_matrices(rep: RepOperators) -> MatrixRep:
    """q = 1 matrices of a subset-basis representation."""
    vs = basis(rep.n)
    h = sympy.diag(*[v.weight for v in vs])
    return MatrixRep(vs, to_matrix(rep.e, vs), to_matrix(rep.f, vs), h)


def solve_intertwiner(A: MatrixRep, B: MatrixRep) -> list[sympy.Matrix]:
    """Basis of all ``T`` with ``T X_A = X_B T`` for ``X`` in ``e, f, h``.

    ``T`` is ``dim B x dim A``; its entries are the unknowns of a homogeneous
    linear system solved exactly over Q.
    """
    m, n = B.e.rows, A.e.rows
    syms = sympy.symbols(f"x0:{m * n}")
    T = sympy.Matrix(m, n, syms)
    eqs = []
    for XA, XB in ((A.e, B.e), (A.f, B.f), (A.h, B.h)):
        eqs.extend(T * XA - XB * T)
    system, _ = sympy.linear_eq_to_matrix(eqs, syms)
    return [sympy.Matrix(m, n, list(vec)) for vec in system.nullspace()]


def is_intertwiner(T: sympy.Matrix, A: MatrixRep, B: MatrixRep) -> bool:
    return all(T * XA == XB * T for XA, XB in ((A.e, B.e), (A.f, B.f), (A.h, B.h)))


# ---------------------------------------------------------------------------
# n = 2: classes of irreducibles


W_LABELS = ("w_-2", "w_0^1", "w_0^2", "w_2")


def pcanonical_n2_rep(p: int) -> MatrixRep:
    """sl_2 action on the classes ``(w_-2, w_0^1, w_0^2, w_2)`` of
    ``Z(-1)``, ``L_0``, ``L_s``, ``Z(-1)`` in the three blocks for n = 2.

    The matrices do not depend on ``p`` (any odd prime is accepted).
    """
    if p <= 2:
        raise ValueError("need an odd prime p > 2")
    # columns are images of basis vectors
    e = sympy.Matrix([
        [0, 0, 0, 0],
        [2, 0, 0, 0],
        [2, 0, 0, 0],
        [0, 0, 1, 0],
    ])
    f = sympy.Matrix([
        [0, 0, 1, 0],
        [0, 0, 0, 2],
        [0, 0, 0, 2],
        [0, 0, 0, 0],
    ])
    h = sympy.diag(-2, 0, 0, 2)
    return MatrixRep(list(W_LABELS), e, f, h)


def unit_coefficient_identification_n2() -> sympy.Matrix:
    """The unit-coefficient assignment ``w_-2 -> v00``, ``w_0^1 -> v01 - v10``,
    ``w_0^2 -> v01``, ``w_2 -> v11`` as a matrix into the subset basis
    ``(v00, v10, v01, v11)`` (``v10`` has the first factor equal to ``v_1``)."""
    return sympy.Matrix([
        [1, 0, 0, 0],
        [0, -1, 0, 0],
        [0, 1, 1, 0],
        [0, 0, 0, 1],
    ])


def corrected_identification_n2() -> sympy.Matrix:
    """``w_-2 -> -2 v00``, ``w_0^1 -> v01 - v10``, ``w_0^2 -> -2 v01``,
    ``w_2 -> -2 v11``."""
    return sympy.Matrix([
        [-2, 0, 0, 0],
        [0, -1, 0, 0],
        [0, 1, -2, 0],
        [0, 0, 0, -2],
    ])


@dataclass
class IntertwinerReport:
    dimension: int
    basis: list[sympy.Matrix]
    invertible_member: sympy.Matrix | None
    unit_map_intertwines: bool
    corrected_map_intertwines: bool
    corrected_in_span: bool

    def to_json(self) -> dict:
        def m(x):
            return None if x is None else [[str(a) for a in row] for row in x.tolist()]
        return {
            "dimension": self.dimension,
            "basis": [m(b) for b in self.basis],
            "invertible_member": m(self.invertible_member),
            "unit_coefficient_map_intertwines": self.unit_map_intertwines,
            "corrected_map": m(corrected_identification_n2()),
            "corrected_map_intertwines": self.corrected_map_intertwines,
            "corrected_map_in_solution_space": self.corrected_in_span,
            "note": ("the unit-coefficient map does not commute with e: "
                     "e(w_-2) = 2 w_0^1 + 2 w_0^2 maps to 2 v01 - 2 v10 + 2 v01, "
                     "while e(v00) = v10 + v01"),
        }


def _in_span(T: sympy.Matrix, span: list[sympy.Matrix]) -> bool:
    if not span:
        return T.is_zero_matrix
    M = sympy.Matrix.hstack(*[b.reshape(len(b), 1) for b in span])
    aug = M.row_join(T.reshape(len(T), 1))
    return M.rank() == aug.rank()


def n2_intertwiner_report(p: int = 5) -> IntertwinerReport:
    A = pcanonical_n2_rep(p)
    B = rep_matrices(build_rep(2))
    sols = solve_intertwiner(A, B)
    invertible = None
    for combo in itertools.product(range(-2, 3), repeat=len(sols)):
        if not any(combo):
            continue
        T = sum((c * s for c, s in zip(combo, sols)), sympy.zeros(4, 4))
        if T.det() != 0:
            invertible = T
            break
    unit = unit_coefficient_identification_n2()
    corrected = corrected_identification_n2()
    return IntertwinerReport(len(sols), sols, invertible, is_intertwiner(unit, A, B),
                             is_intertwiner(corrected, A, B), _in_span(corrected, sols))
