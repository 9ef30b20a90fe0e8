"""The 8-dimensional algebra A = End(P(0) + P(-2)) of the n = 2 principal block.

Basis elements ``psi^k_{i,j}`` are maps ``P(i) -> P(j)``; products compose
right to left (``x * y`` applies ``y`` first).  The multiplication table is
filled from three groups of relations and every ordered pair of basis elements
must be settled by them exactly once, up to agreement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import sympy

from .exactalg import FormalSum

VERTICES = (0, -2)


class InconsistentTable(ValueError):
    """Two relations assign different values to the same product, or none does."""


@dataclass(frozen=True)
class BasisElt:
    source: int
    target: int
    layer: int

    def sort_key(self):
        return (VERTICES.index(self.source), VERTICES.index(self.target), self.layer)

    def __str__(self) -> str:
        return f"psi{self.layer}[{self.source},{self.target}]"


BASIS = tuple(sorted((BasisElt(i, j, k) for i in VERTICES for j in VERTICES for k in (1, 2)),
                     key=BasisElt.sort_key))


def psi(k: int, i: int, j: int) -> BasisElt:
    return BasisElt(i, j, k)


def idempotent(i: int) -> BasisElt:
    return BasisElt(i, i, 1)


def _relation_values(x: BasisElt, y: BasisElt) -> list[tuple[str, FormalSum]]:
    """Every value the relation list assigns to ``x * y``."""
    out = []
    k, i, j = x.layer, x.source, x.target
    k2, i2, j2 = y.layer, y.source, y.target
    zero = FormalSum()
    # composable only when y lands where x starts
    if j2 != i:
        out.append(("composability", zero))
        return out
    # identities
    if k == 1 and i == j:
        out.append(("left unit", FormalSum.basis(y)))
    if k2 == 1 and i2 == j2:
        out.append(("right unit", FormalSum.basis(x)))
    # psi2_{jj} * psi^k_{ij} = 0 and psi^k_{ij} * psi2_{ii} = 0 unless k = 1, i = j
    if k == 2 and i == j and not (k2 == 1 and i2 == j2):
        out.append(("layer-2 left annihilation", zero))
    if k2 == 2 and i2 == j2 and not (k == 1 and i == j):
        out.append(("layer-2 right annihilation", zero))
    # cross products through the other vertex
    if i != j and i2 == j and j2 == i:
        if k == 1 and k2 == 1:
            out.append(("cross, both layer 1", zero))
        else:
            out.append(("cross", FormalSum.basis(BasisElt(j, j, 2))))
    return out


@dataclass
class AlgebraA:
    structure: dict[tuple[BasisElt, BasisElt], FormalSum]

    @property
    def dimension(self) -> int:
        return len(BASIS)

    def unit(self) -> FormalSum:
        return FormalSum({idempotent(i): 1 for i in VERTICES})

    def mul(self, a: FormalSum, b: FormalSum) -> FormalSum:
        out = FormalSum()
        for x, cx in a.items():
            for y, cy in b.items():
                out = out + self.structure[(x, y)].scale(cx * cy)
        return out

    def basis_product(self, x: BasisElt, y: BasisElt) -> FormalSum:
        return self.structure[(x, y)]

    def associativity_failures(self) -> list[tuple[BasisElt, BasisElt, BasisElt]]:
        bad = []
        for x, y, z in itertools.product(BASIS, repeat=3):
            X, Y, Z = (FormalSum.basis(e) for e in (x, y, z))
            if self.mul(self.mul(X, Y), Z) != self.mul(X, self.mul(Y, Z)):
                bad.append((x, y, z))
        return bad

    def to_json(self) -> dict:
        return {f"{x}*{y}": self.structure[(x, y)].to_json() for x in BASIS for y in BASIS}


def build_algebra_a() -> AlgebraA:
    table = {}
    for x, y in itertools.product(BASIS, repeat=2):
        values = _relation_values(x, y)
        if not values:
            raise InconsistentTable(f"no relation determines {x} * {y}")
        first = values[0][1]
        for name, v in values[1:]:
            if v != first:
                raise InconsistentTable(
                    f"{x} * {y}: '{values[0][0]}' gives {first!r}, '{name}' gives {v!r}")
        table[(x, y)] = first
    return AlgebraA(table)


# ---------------------------------------------------------------------------
# linear algebra on subspaces of A


def _vec(v: FormalSum) -> list:
    return [v[b] for b in BASIS]


def span_rank(vectors: list[FormalSum]) -> int:
    if not vectors:
        return 0
    return sympy.Matrix([_vec(v) for v in vectors]).rank()


def _span_basis(vectors: list[FormalSum]) -> list[FormalSum]:
    """Independent subset spanning the same space."""
    out: list[FormalSum] = []
    for v in vectors:
        if span_rank(out + [v]) > len(out):
            out.append(v)
    return out


def left_ideal(A: AlgebraA, generator: FormalSum) -> list[FormalSum]:
    return _span_basis([A.mul(FormalSum.basis(x), generator) for x in BASIS])


def composition_factors(A: AlgebraA, module: list[FormalSum]) -> dict[int, int]:
    """Multiplicities ``[M : L_i] = dim e_i M`` for a left submodule of A."""
    return {i: span_rank([A.mul(FormalSum.basis(idempotent(i)), m) for m in module])
            for i in VERTICES}


def radical(A: AlgebraA) -> list[FormalSum]:
    """Span of the basis elements other than the two idempotents, after
    checking that it is a two-sided ideal with zero cube."""
    rad = [FormalSum.basis(b) for b in BASIS if not (b.layer == 1 and b.source == b.target)]
    for r in rad:
        for b in BASIS:
            for prod in (A.mul(FormalSum.basis(b), r), A.mul(r, FormalSum.basis(b))):
                if span_rank(rad + [prod]) != len(rad):
                    raise InconsistentTable("candidate radical is not an ideal")
    for x, y, z in itertools.product(rad, repeat=3):
        if A.mul(A.mul(x, y), z):
            raise InconsistentTable("candidate radical is not nilpotent")
    return rad


@dataclass
class CartanData:
    cartan: list[list[int]]
    projective_dims: dict[int, int]
    dimension: int
    radical_dim: int

    def to_json(self) -> dict:
        return {"cartan": self.cartan, "projective_dims": {str(k): v for k, v in
                                                           self.projective_dims.items()},
                "dimension": self.dimension, "radical_dim": self.radical_dim}


def cartan_data(A: AlgebraA) -> CartanData:
    cart = []
    for i in VERTICES:
        row = []
        for j in VERTICES:
            ei, ej = FormalSum.basis(idempotent(i)), FormalSum.basis(idempotent(j))
            row.append(span_rank([A.mul(A.mul(ei, FormalSum.basis(b)), ej) for b in BASIS]))
        cart.append(row)
    proj = {i: len(left_ideal(A, FormalSum.basis(idempotent(i)))) for i in VERTICES}
    return CartanData(cart, proj, span_rank([FormalSum.basis(b) for b in BASIS]),
                      len(radical(A)))


# ---------------------------------------------------------------------------
# bimodule functors on Grothendieck groups


K_LABEL = "k"
L_LABELS = {0: "L_0", -2: "L_s"}


@dataclass
class KMatrices:
    E_minus1: dict[str, dict[str, int]]
    F_minus1: dict[str, dict[str, int]]
    E_1: dict[str, dict[str, int]]
    F_1: dict[str, dict[str, int]]

    def to_json(self) -> dict:
        return {"E_-1": self.E_minus1, "F_-1": self.F_minus1, "E_1": self.E_1, "F_1": self.F_1}


def _simple_action(A: AlgebraA, elt: FormalSum, i: int) -> int:
    """Rank of ``elt`` acting on the one-dimensional simple ``L_i``:
    ``e_i`` acts by 1, every other basis element by 0."""
    return 1 if elt[idempotent(i)] else 0


def bimodule_k_matrices(A: AlgebraA) -> KMatrices:
    e = FormalSum.basis(idempotent(-2))
    # E_{-1}: k -> A psi1_{-2,-2}, a left projective
    proj = left_ideal(A, e)
    facs = composition_factors(A, proj)
    E_m1 = {K_LABEL: {L_LABELS[i]: facs[i] for i in VERTICES if facs[i]}}
    # F_{-1}: L_j -> psi1_{-2,-2} . L_j
    F_m1 = {L_LABELS[j]: ({K_LABEL: _simple_action(A, e, j)} if _simple_action(A, e, j) else {})
            for j in VERTICES}
    return KMatrices(E_m1, F_m1, E_1=dict(F_m1), F_1=dict(E_m1))


def k_matrices_as_sympy(km: KMatrices) -> tuple[sympy.Matrix, sympy.Matrix]:
    """Assemble e and f on ``(w_-2, w_0^1, w_0^2, w_2) = ([k], [L_0], [L_s], [k])``."""
    idx_mid = {"L_0": 1, "L_s": 2}
    e = sympy.zeros(4, 4)
    f = sympy.zeros(4, 4)
    for lab, c in km.E_minus1[K_LABEL].items():
        e[idx_mid[lab], 0] = c
    for src, img in km.E_1.items():
        for _, c in img.items():
            e[3, idx_mid[src]] = c
    for src, img in km.F_minus1.items():
        for _, c in img.items():
            f[0, idx_mid[src]] = c
    for lab, c in km.F_1[K_LABEL].items():
        f[idx_mid[lab], 3] = c
    return e, f


@dataclass
class SequenceCheck:
    projective: dict[int, dict[int, int]]
    submodule: dict[int, dict[int, int]]
    quotient: dict[int, dict[int, int]]

    def verma_classes_ok(self) -> bool:
        """Every projective has a two-step filtration by baby Vermas, and each
        baby Verma has class ``[L_0] + [L_s]``."""
        one_each = {0: 1, -2: 1}
        return all(self.submodule[i] == one_each and self.quotient[i] == one_each
                   and self.projective[i] == {0: 2, -2: 2} for i in VERTICES)

    def to_json(self) -> dict:
        def fmt(d):
            return {f"P({i})": {L_LABELS[j]: m for j, m in d[i].items()} for i in d}
        return {"projective": fmt(self.projective), "submodule": fmt(self.submodule),
                "quotient": fmt(self.quotient)}


def verma_filtrations(A: AlgebraA) -> SequenceCheck:
    """For each projective ``A e_i`` take the submodule ``A e_j psi1_{i,j}``
    (the image of the other projective through its baby Verma) and compare
    composition factors of sub, quotient and the whole."""
    proj, sub, quo = {}, {}, {}
    for i in VERTICES:
        j = next(v for v in VERTICES if v != i)
        P = left_ideal(A, FormalSum.basis(idempotent(i)))
        gen = A.mul(FormalSum.basis(idempotent(j)), FormalSum.basis(psi(1, i, j)))
        Z = left_ideal(A, gen)
        pf = composition_factors(A, P)
        zf = composition_factors(A, Z)
        proj[i] = pf
        sub[i] = zf
        quo[i] = {v: pf[v] - zf[v] for v in VERTICES}
    return SequenceCheck(proj, sub, quo)
