"""Torus-equivariant K-theory of T*Gr(r, n) by fixed-point localization, and
Fourier-Mukai kernels supported on the Lagrangian correspondence W.

Torus: ``(t_1, ..., t_n)`` scales the coordinates of k^n and ``q`` is the
fibre dilation, acting on a cotangent vector X by ``q^2``.  A class is recorded
by its restrictions to the fixed points (coordinate subspaces), which are
Laurent polynomials for honest classes.

Kernels are ``O_W (x) det(V)^a det(V')^b`` with ``V`` of rank ``r`` and ``V'``
of rank ``r+1`` (``V < V'``), an internal shift ``{s}`` read as ``q^s`` and a
homological shift ``[h]`` read as ``(-1)^h``.  Operators are stored in the
basis of skyscraper classes ``O_S``; their entries are rational, while the
localized images of skyscrapers are Laurent polynomials.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .exactalg import (
    FormalSum,
    LinearOp,
    MultiLaurent,
    NotPolynomial,
    RationalFn,
    quantum_integer,
    rational_reduce_to_laurent,
)

FIBER_Q = 2  # t . X = t^2 X
MAX_N_DEFAULT = 4


def variable_names(n: int) -> tuple[str, ...]:
    return tuple(f"t{i}" for i in range(1, n + 1)) + ("q",)


@dataclass(frozen=True)
class FixedPoint:
    subset: tuple[int, ...]
    n: int

    @classmethod
    def of(cls, subset: Iterable[int], n: int) -> FixedPoint:
        return cls(tuple(sorted(subset)), n)

    @property
    def r(self) -> int:
        return len(self.subset)

    def sort_key(self):
        return (len(self.subset), self.subset)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.subset)) + "}"


def fixed_points(n: int, r: int) -> list[FixedPoint]:
    return [FixedPoint(c, n) for c in itertools.combinations(range(1, n + 1), r)]


# ---------------------------------------------------------------------------
# weights


def _w(n: int, t: dict[int, int] | None = None, q: int = 0) -> tuple[int, ...]:
    e = [0] * (n + 1)
    for i, x in (t or {}).items():
        e[i - 1] += x
    e[n] = q
    return tuple(e)


def tangent_weights_tgr(pt: FixedPoint) -> list[tuple[int, ...]]:
    """Weights of T(T*Gr(r, n)) at a fixed point: base ``Hom(V, k^n/V)`` and
    fibre ``Hom(k^n/V, V)`` scaled by the dilation."""
    n, S = pt.n, set(pt.subset)
    comp = [j for j in range(1, n + 1) if j not in S]
    base = [_w(n, {j: 1, i: -1}) for i in S for j in comp]
    fibre = [_w(n, {i: 1, j: -1}, FIBER_Q) for i in S for j in comp]
    return sorted(base + fibre)


def tangent_weights_w(small: FixedPoint, large: FixedPoint) -> list[tuple[int, ...]]:
    """Weights of T W at ``(S < S')``: the partial flag directions plus the
    fibre ``Hom(k^n/V', V)``."""
    n = small.n
    S, Sp = set(small.subset), set(large.subset)
    if not S < Sp or len(Sp) != len(S) + 1:
        raise ValueError(f"{small} is not a hyperplane in {large}")
    (a,) = Sp - S
    out = [_w(n, {j: 1, i: -1}) for i in S for j in range(1, n + 1) if j not in S]
    out += [_w(n, {j: 1, a: -1}) for j in range(1, n + 1) if j not in Sp]
    out += [_w(n, {i: 1, j: -1}, FIBER_Q) for i in S for j in range(1, n + 1) if j not in Sp]
    return sorted(out)


def dim_tgr(n: int, r: int) -> int:
    return 2 * r * (n - r)


def dim_w(n: int, r: int) -> int:
    """Half of ``dim T*Gr(r) + dim T*Gr(r+1)`` (W is Lagrangian)."""
    return r * (n - r) + (n - r - 1) + r * (n - r - 1)


def _lambda_factor(weight: tuple[int, ...], names) -> MultiLaurent:
    """``1 - x^{-w}``: one factor of the K-theoretic Euler class of the dual."""
    one = MultiLaurent.constant(len(weight), 1, names)
    return one - MultiLaurent.monomial(tuple(-x for x in weight), 1, names)


def euler_factors(weights: Iterable[tuple[int, ...]], names) -> list[MultiLaurent]:
    return [_lambda_factor(w, names) for w in weights]


def euler_class(weights: Iterable[tuple[int, ...]], names) -> MultiLaurent:
    weights = list(weights)
    out = None
    for f in euler_factors(weights, names):
        out = f if out is None else out * f
    if out is None:
        size = len(names)
        return MultiLaurent.constant(size, 1, names)
    return out


def det_monomial(pt: FixedPoint, power: int) -> tuple[int, ...]:
    return _w(pt.n, {i: power for i in pt.subset})


# ---------------------------------------------------------------------------
# classes


@dataclass
class LocalizedClass:
    n: int
    r: int
    values: dict[FixedPoint, object]

    def __getitem__(self, pt: FixedPoint):
        return self.values.get(pt, MultiLaurent(self.n + 1, {}, variable_names(self.n)))

    def to_json(self) -> dict[str, str]:
        return {str(pt): str(self[pt]) for pt in fixed_points(self.n, self.r)}


def line_bundle_class(n: int, r: int, a: int) -> LocalizedClass:
    names = variable_names(n)
    return LocalizedClass(n, r, {pt: MultiLaurent.monomial(det_monomial(pt, a), 1, names)
                                 for pt in fixed_points(n, r)})


def skyscraper_class(pt: FixedPoint) -> LocalizedClass:
    """Class of the structure sheaf of the fixed point (on the zero section)."""
    names = variable_names(pt.n)
    return LocalizedClass(pt.n, pt.r, {pt: euler_class(tangent_weights_tgr(pt), names)})


# ---------------------------------------------------------------------------
# kernels


@dataclass(frozen=True)
class KernelSpec:
    direction: str          # "up": r -> r+1, "down": r+1 -> r, "diag": r -> r
    r: int                  # rank of the smaller tautological bundle
    a: int                  # exponent of det V  (rank r)
    b: int                  # exponent of det V' (rank r+1)
    internal_shift: int = 0
    homological_shift: int = 0
    name: str = ""

    def __post_init__(self):
        if self.direction not in ("up", "down", "diag"):
            raise ValueError("direction must be 'up', 'down' or 'diag'")

    @property
    def source_rank(self) -> int:
        return self.r if self.direction in ("up", "diag") else self.r + 1

    @property
    def target_rank(self) -> int:
        return self.r if self.direction in ("down", "diag") else self.r + 1

    def scalar_exponent(self, small: FixedPoint, large: FixedPoint) -> tuple[int, ...]:
        n = small.n
        e = [x + y for x, y in zip(det_monomial(small, self.a), det_monomial(large, self.b))]
        e[n] += self.internal_shift
        return tuple(e)

    @property
    def sign(self) -> int:
        return -1 if self.homological_shift % 2 else 1

    def to_json(self) -> dict:
        return {"name": self.name, "direction": self.direction, "r": self.r, "a": self.a,
                "b": self.b, "internal_shift": self.internal_shift,
                "homological_shift": self.homological_shift}


def _pairs_into(kernel: KernelSpec, target: FixedPoint) -> list[tuple[FixedPoint, FixedPoint]]:
    """(small, large) fixed points of W lying over a target fixed point."""
    n = target.n
    S = set(target.subset)
    if kernel.direction == "diag":
        return [(target, target)]
    if kernel.direction == "up":
        return [(FixedPoint.of(S - {a}, n), target) for a in sorted(S)]
    return [(target, FixedPoint.of(S | {a}, n)) for a in range(1, n + 1) if a not in S]


def _w_weights(kernel: KernelSpec, small: FixedPoint, large: FixedPoint) -> list:
    if kernel.direction == "diag":
        return tangent_weights_tgr(small)
    return tangent_weights_w(small, large)


def fm_apply(kernel: KernelSpec, alpha: LocalizedClass, reduce: bool = True) -> LocalizedClass:
    """Pull back to W, twist by the kernel's line bundle and shifts, push forward.

    At a target fixed point the pushforward is the sum over fixed points of W
    above it, each weighted by the Euler class of the target tangent space over
    that of W.  With ``reduce`` every value is divided out exactly, raising
    NotPolynomial if a pole survives.
    """
    n = alpha.n
    if alpha.r != kernel.source_rank:
        raise ValueError(f"class lives on rank {alpha.r}, kernel expects {kernel.source_rank}")
    names = variable_names(n)
    out = {}
    for tgt in fixed_points(n, kernel.target_rank):
        tgt_euler = euler_class(tangent_weights_tgr(tgt), names)
        total = RationalFn(MultiLaurent(n + 1, {}, names))
        for small, large in _pairs_into(kernel, tgt):
            src = large if kernel.direction == "down" else small
            val = alpha[src]
            if not val:
                continue
            twist = MultiLaurent.monomial(kernel.scalar_exponent(small, large), kernel.sign, names)
            if isinstance(val, RationalFn):
                term = val * RationalFn(tgt_euler * twist,
                                        euler_factors(_w_weights(kernel, small, large), names))
            else:
                term = RationalFn(val * tgt_euler * twist,
                                  euler_factors(_w_weights(kernel, small, large), names))
            total = total + term
        out[tgt] = rational_reduce_to_laurent(total) if reduce else total
    return LocalizedClass(n, kernel.target_rank, out)


def _multiset_ratio(num: list, den: list) -> tuple[list, list]:
    c = Counter(num)
    c.subtract(Counter(den))
    return sorted(c.elements()), sorted((-c).elements())


def kernel_op(kernel: KernelSpec, n: int) -> LinearOp:
    """Matrix of the kernel in the skyscraper bases: ``Phi(O_S) = sum M O_S'``.

    Common Euler-class factors of source and W are cancelled symbolically, so
    entries are ``(twist) * prod(1 - x^-w) / prod(1 - x^-w')``.
    """
    names = variable_names(n)
    cols = {}
    for src in fixed_points(n, kernel.source_rank):
        col = {}
        for tgt in fixed_points(n, kernel.target_rank):
            small, large = (tgt, src) if kernel.direction == "down" else (src, tgt)
            if kernel.direction == "diag":
                if src != tgt:
                    continue
            elif not set(small.subset) < set(large.subset):
                continue
            top, bottom = _multiset_ratio(tangent_weights_tgr(src),
                                          _w_weights(kernel, small, large))
            num = MultiLaurent.monomial(kernel.scalar_exponent(small, large), kernel.sign, names)
            for f in euler_factors(top, names):
                num = num * f
            col[tgt] = RationalFn(num, euler_factors(bottom, names))
        cols[src] = FormalSum(col)
    return LinearOp(cols, fixed_points(n, kernel.source_rank),
                    fixed_points(n, kernel.target_rank))


def localized_matrix(op: LinearOp, n: int) -> dict[tuple[FixedPoint, FixedPoint], MultiLaurent]:
    """Entries ``Phi(O_S)|_{S'}``: the skyscraper matrix times the target Euler
    class, divided out exactly (NotPolynomial on a surviving pole)."""
    names = variable_names(n)
    out = {}
    for src in op.domain:
        for tgt in op.codomain:
            entry = op.entry(tgt, src)
            if not entry:
                out[(tgt, src)] = MultiLaurent(n + 1, {}, names)
                continue
            e = entry * euler_class(tangent_weights_tgr(tgt), names)
            out[(tgt, src)] = rational_reduce_to_laurent(e)
    return out


# ---------------------------------------------------------------------------
# the two kernel families and the twist


def ckl_kernels(n: int, r: int) -> tuple[KernelSpec, KernelSpec]:
    """``E: O_W det(V')^{n-2r-1} det(V)^{-(n-2r-1)} {n-r-1}`` and
    ``F: O_W det(V') det(V) {r}``."""
    m = n - 2 * r - 1
    return (KernelSpec("up", r, -m, m, n - r - 1, 0, f"E_ckl({-n + 2 * r + 1})"),
            KernelSpec("down", r, 1, 1, r, 0, f"F_ckl({-n + 2 * r + 1})"))


def frak_kernels(n: int, r: int) -> tuple[KernelSpec, KernelSpec]:
    """Regraded translation-functor kernels.  In the flag ``V' < V`` used for
    them the larger bundle carries ``n-r`` (for E) and ``-r`` (for F); here
    that is the rank ``r+1`` exponent ``b``."""
    return (KernelSpec("up", r, -(n - r - 1), n - r, n - r - 1, 0, f"E_frak({-n + 2 * r + 1})"),
            KernelSpec("down", r, r + 1, -r, r, 0, f"F_frak({-n + 2 * r + 1})"))


def frak_kernels_swapped(n: int, r: int) -> tuple[KernelSpec, KernelSpec]:
    """The same exponents with the flag roles exchanged (rank-r bundle gets
    ``n-r`` / ``-r``).  Kept only to report what it would give."""
    return (KernelSpec("up", r, n - r, -(n - r - 1), n - r - 1, 0, f"E_swapped({-n + 2 * r + 1})"),
            KernelSpec("down", r, -r, r + 1, r, 0, f"F_swapped({-n + 2 * r + 1})"))


def frak_kernels_with_shifts(n: int, r: int) -> tuple[KernelSpec, KernelSpec]:
    """The regraded kernels with homological shifts ``[n-r-1]`` and ``[r]``
    restored; a diagnostic for the sign of the commutator."""
    E, F = frak_kernels(n, r)
    return (KernelSpec("up", r, E.a, E.b, E.internal_shift, n - r - 1, f"E_shifted({-n + 2 * r + 1})"),
            KernelSpec("down", r, F.a, F.b, F.internal_shift, r, f"F_shifted({-n + 2 * r + 1})"))


FAMILIES = {"ckl": ckl_kernels, "frak": frak_kernels, "swapped": frak_kernels_swapped,
            "shifted": frak_kernels_with_shifts}


def _check_range(n: int, r: int, allow_large: bool) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_N_DEFAULT + (1 if allow_large else 0):
        raise ValueError(f"n = {n} exceeds the supported range")
    if not 0 <= r < n:
        raise ValueError(f"need 0 <= r < n, got r = {r}")


def op_E_ckl(n: int, r: int, allow_large: bool = False) -> LinearOp:
    _check_range(n, r, allow_large)
    return kernel_op(ckl_kernels(n, r)[0], n)


def op_F_ckl(n: int, r: int, allow_large: bool = False) -> LinearOp:
    _check_range(n, r, allow_large)
    return kernel_op(ckl_kernels(n, r)[1], n)


def op_E_frak(n: int, r: int, allow_large: bool = False) -> LinearOp:
    _check_range(n, r, allow_large)
    return kernel_op(frak_kernels(n, r)[0], n)


def op_F_frak(n: int, r: int, allow_large: bool = False) -> LinearOp:
    _check_range(n, r, allow_large)
    return kernel_op(frak_kernels(n, r)[1], n)


def op_theta(n: int, r: int) -> LinearOp:
    """``(x) det(V)^r``, diagonal in the skyscraper basis."""
    names = variable_names(n)
    return LinearOp.diagonal({pt: RationalFn(MultiLaurent.monomial(det_monomial(pt, r), 1, names))
                              for pt in fixed_points(n, r)})


def op_theta_inverse(n: int, r: int) -> LinearOp:
    names = variable_names(n)
    return LinearOp.diagonal({pt: RationalFn(MultiLaurent.monomial(det_monomial(pt, -r), 1, names))
                              for pt in fixed_points(n, r)})


def family_ops(family: str, n: int, r: int) -> tuple[LinearOp, LinearOp]:
    E, F = FAMILIES[family](n, r)
    return kernel_op(E, n), kernel_op(F, n)


# ---------------------------------------------------------------------------
# verification


def sl_specialize(n: int):
    """Substitution ``t_n -> (t_1 ... t_{n-1})^{-1}`` (the torus of SL_n)."""
    names = variable_names(n)
    img = MultiLaurent.monomial(tuple([-1] * (n - 1) + [0, 0]), 1, names)
    return {n - 1: img}  # for n = 1 this is t_1 -> 1


def _first_difference(lhs: LinearOp, rhs: LinearOp, subs=None) -> dict | None:
    for src in sorted(set(lhs.domain) | set(rhs.domain), key=FixedPoint.sort_key):
        for tgt in sorted(set(lhs.codomain) | set(rhs.codomain), key=FixedPoint.sort_key):
            diff = lhs.entry(tgt, src) - rhs.entry(tgt, src)
            if isinstance(diff, int):
                if diff:
                    return {"row": str(tgt), "col": str(src), "difference": str(diff)}
                continue
            if subs is not None and diff:
                diff = diff.substitute(subs)
            if diff:
                return {"row": str(tgt), "col": str(src), "difference": str(diff)}
    return None


@dataclass
class ThetaReport:
    n: int
    r: int
    E_ok: bool
    F_ok: bool
    first_difference: dict | None = None

    @property
    def ok(self) -> bool:
        return self.E_ok and self.F_ok

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "E_intertwined": self.E_ok,
                "F_intertwined": self.F_ok, "first_difference": self.first_difference}


def verify_theta_intertwine(n: int, r: int, allow_large: bool = False,
                            frak=frak_kernels) -> ThetaReport:
    """``Theta_{r+1} E_ckl = E_frak Theta_r`` and ``Theta_r F_ckl = F_frak Theta_{r+1}``."""
    _check_range(n, r, allow_large)
    Eckl, Fckl = (kernel_op(k, n) for k in ckl_kernels(n, r))
    Efr, Ffr = (kernel_op(k, n) for k in frak(n, r))
    lhs_E, rhs_E = op_theta(n, r + 1) @ Eckl, Efr @ op_theta(n, r)
    lhs_F, rhs_F = op_theta(n, r) @ Fckl, Ffr @ op_theta(n, r + 1)
    dE = _first_difference(lhs_E, rhs_E)
    dF = _first_difference(lhs_F, rhs_F)
    return ThetaReport(n, r, dE is None, dF is None, dE or dF)


@dataclass
class CommutatorReport:
    n: int
    r: int
    family: str
    epsilon: int | None
    scalar: str
    ok: bool
    defect: dict | None = None

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "family": self.family, "epsilon": self.epsilon,
                "quantum_integer": self.scalar, "relation_holds": self.ok,
                "defect": self.defect}


def commutator_op(n: int, r: int, family: str = "ckl") -> LinearOp:
    """``f e - e f`` on the skyscraper basis of ``K(T*Gr(r, n))``."""
    pts = fixed_points(n, r)
    zero = LinearOp({p: FormalSum() for p in pts}, pts, pts)
    fe = ef = zero
    if r < n:
        E, F = family_ops(family, n, r)
        fe = F @ E
    if r > 0:
        E, F = family_ops(family, n, r - 1)
        ef = E @ F
    return fe - ef


def verify_commutator(n: int, r: int, family: str = "ckl", epsilon: int | None = None,
                      allow_large: bool = False) -> CommutatorReport:
    """Check ``fe - ef = epsilon [n-2r]_q Id`` on the SL_n torus.

    With ``epsilon=None`` both signs are tried and the one that works is
    reported (None if neither does, or either does because ``[n-2r] = 0``).
    """
    if not 0 <= r <= n:
        raise ValueError("need 0 <= r <= n")
    if n > MAX_N_DEFAULT + (1 if allow_large else 0):
        raise ValueError(f"n = {n} exceeds the supported range")
    names = variable_names(n)
    pts = fixed_points(n, r)
    comm = commutator_op(n, r, family)
    qi = quantum_integer(n - 2 * r)
    qi_ml = MultiLaurent(n + 1, {_w(n, q=e): c for e, c in qi.coefficients.items()}, names)
    subs = sl_specialize(n)
    signs = [epsilon] if epsilon is not None else [1, -1]
    defect = None
    for eps in signs:
        target = LinearOp.diagonal({p: RationalFn(qi_ml * eps) for p in pts})
        defect = _first_difference(comm, target, subs)
        if defect is None:
            found = eps if qi else None
            return CommutatorReport(n, r, family, found, str(qi), True)
    return CommutatorReport(n, r, family, None, str(qi), False, defect)


@dataclass
class PoleReport:
    n: int
    r: int
    kernel: str
    ok: bool
    failure: str | None = None
    entries: dict | None = None

    def to_json(self) -> dict:
        return {"n": self.n, "r": self.r, "kernel": self.kernel, "laurent": self.ok,
                "failure": self.failure, "entries": self.entries}


def pole_cancellation(kernel: KernelSpec, n: int, with_entries: bool = False) -> PoleReport:
    """Push every skyscraper class through ``fm_apply`` and reduce exactly."""
    entries = {}
    try:
        for src in fixed_points(n, kernel.source_rank):
            img = fm_apply(kernel, skyscraper_class(src), reduce=True)
            for tgt, v in img.values.items():
                entries[f"{tgt}<-{src}"] = str(v)
    except NotPolynomial as exc:
        return PoleReport(n, kernel.r, kernel.name, False, str(exc))
    return PoleReport(n, kernel.r, kernel.name, True, None, entries if with_entries else None)


# ---------------------------------------------------------------------------
# n = 2 kernels on T*P^1 versus the listed O(+-1)


N2_LISTED = {  # functor -> (degree of O(d) on P^1, internal shift)
    "E(-1)": (1, 1),
    "F(-1)": (-1, 0),
    "E(1)": (-1, 0),
    "F(1)": (1, 1),
}


def _n2_degrees(family: str) -> dict[str, tuple[int, int]]:
    """Degree on P^1 of each kernel's line bundle, with the tautological line
    having degree -1, plus its internal shift."""
    out = {}
    for r in (0, 1):
        E, F = FAMILIES[family](2, r)
        label = -2 + 2 * r + 1
        for name, k in (("E", E), ("F", F)):
            # r = 0: W ~ P^1 carries V' (the line); r = 1: W ~ P^1 carries V
            taut_exp = k.b if r == 0 else k.a
            out[f"{name}({label})"] = (-taut_exp, k.internal_shift)
    return out


def n2_dictionary_report() -> dict:
    """Which kernel family, under which reading of O(1), gives the listed
    n = 2 kernels.  ``standard``: O(1) dual to the tautological line;
    ``flipped``: O(1) is the tautological line."""
    out = {"listed": {k: {"degree": d, "shift": s} for k, (d, s) in N2_LISTED.items()}}
    for family in FAMILIES:
        degs = _n2_degrees(family)
        out[family] = {
            "kernels": {k: {"degree": d, "shift": s} for k, (d, s) in degs.items()},
            "standard": all(degs[k] == v for k, v in N2_LISTED.items()),
            "flipped": all((-degs[k][0], degs[k][1]) == v for k, v in N2_LISTED.items()),
        }
    return out
