"""Weights of sl_n modulo p, the singular blocks mu_r, and translation functors
decategorified to box addition/removal on Weyl-module classes.

Weights are n-row partitions compared modulo the all-ones vector.  Residues use
the integral shift ``rho_hat = (n-1, ..., 1, 0)``; the half-integral part of
the usual rho is a multiple of the all-ones vector and only moves the base
residue of a block.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from .exactalg import FormalSum


class NotInSl2Block(ValueError):
    """The weight's shifted residues do not fit any block mu_r."""


class AmbiguousRank(ValueError):
    """All residues agree, so the weight sits in mu_0 and mu_n alike."""


class Weight:
    """Dominant integral weight of sl_n written as a weakly decreasing tuple.

    Two weights are equal when their consecutive differences agree, i.e.
    modulo the all-ones vector.
    """

    __slots__ = ("parts", "_key")

    def __init__(self, parts):
        parts = tuple(int(x) for x in parts)
        if not parts:
            raise ValueError("a weight needs at least one row")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"{parts} is not weakly decreasing")
        self.parts = parts
        self._key = tuple(a - b for a, b in zip(parts, parts[1:]))

    @property
    def n(self) -> int:
        return len(self.parts)

    def differences(self) -> tuple[int, ...]:
        return self._key

    def normalized(self) -> Weight:
        """Representative with every part at least 1 (adds a box to each row
        when the last row is empty)."""
        if self.parts[-1] >= 1:
            return self
        return Weight(x + 1 - self.parts[-1] for x in self.parts)

    def add_box(self, i: int) -> Weight:
        p = list(self.parts)
        p[i - 1] += 1
        return Weight(p)

    def remove_box(self, i: int) -> Weight:
        p = list(self.parts)
        p[i - 1] -= 1
        return Weight(p)

    def sort_key(self):
        return (self.n, self._key)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Weight):
            return NotImplemented
        return self._key == other._key and self.n == other.n

    def __hash__(self) -> int:
        return hash((self.n, self._key))

    def __iter__(self):
        return iter(self.parts)

    def __repr__(self) -> str:
        return f"Weight{self.parts}"

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def rho_hat(n: int) -> tuple[int, ...]:
    return tuple(range(n - 1, -1, -1))


def shifted_residues(parts, p: int) -> tuple[int, ...]:
    n = len(parts)
    return tuple((x + r) % p for x, r in zip(parts, rho_hat(n)))


@dataclass(frozen=True)
class BlockData:
    """Block mu_r containing a weight, with the weight's marked rows.

    ``marked`` rows have shifted residue ``base + 1``, the others ``base``.
    ``ambiguous`` is set when every residue agrees (r in {0, n}).
    """

    p: int
    r: int
    marked: frozenset[int]
    base: int
    ambiguous: bool = field(default=False, compare=False)
    n: int = field(default=0, compare=False)

    @property
    def unmarked(self) -> frozenset[int]:
        return frozenset(range(1, self.n + 1)) - self.marked

    def to_json(self) -> dict:
        return {"p": self.p, "r": self.r, "marked": sorted(self.marked), "base": self.base}


def _check_prime(p: int, n: int) -> None:
    if p <= n:
        raise ValueError(f"need p > n, got p={p}, n={n}")
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")


def block_of(lam: Weight, p: int, r_hint: int | None = None) -> BlockData:
    n = lam.n
    _check_prime(p, n)
    res = shifted_residues(lam.parts, p)
    values = sorted(set(res))
    if len(values) == 1:
        c = values[0]
        if r_hint is None:
            raise AmbiguousRank(f"{lam} has constant residues mod {p}; pass r_hint 0 or {n}")
        if r_hint == 0:
            return BlockData(p, 0, frozenset(), c, True, n)
        if r_hint == n:
            return BlockData(p, n, frozenset(range(1, n + 1)), (c - 1) % p, True, n)
        raise AmbiguousRank(f"r_hint must be 0 or {n} for {lam}, got {r_hint}")
    if len(values) > 2:
        raise NotInSl2Block(f"{lam}: residues {res} mod {p} take {len(values)} values")
    a, b = values
    if (a + 1) % p == b:
        low, high = a, b
    elif (b + 1) % p == a:
        low, high = b, a
    else:
        raise NotInSl2Block(f"{lam}: residues {a} and {b} mod {p} are not adjacent")
    marked = frozenset(i + 1 for i, x in enumerate(res) if x == high)
    bd = BlockData(p, len(marked), marked, low, False, n)
    if r_hint is not None and r_hint != bd.r:
        raise NotInSl2Block(f"{lam} lies in mu_{bd.r}, not mu_{r_hint}")
    return bd


def typical_rows(lam: Weight, bd: BlockData) -> tuple[set[int], set[int]]:
    """Unmarked rows that accept a box and marked rows that can lose one."""
    parts = lam.parts
    if parts[-1] < 1:
        raise ValueError("normalize the weight first (all parts must be >= 1)")
    n = lam.n
    addable = {i for i in range(1, n + 1)
               if i not in bd.marked and (i == 1 or parts[i - 2] > parts[i - 1])}
    ext = parts + (0,)
    removable = {i for i in bd.marked if ext[i - 1] > ext[i]}
    return addable, removable


def _next_block(lam: Weight, bd: BlockData, step: int) -> BlockData:
    r = bd.r + step
    hint = r if r in (0, lam.n) else None
    return block_of(lam, bd.p, hint)


def translate_E(lam: Weight, bd: BlockData) -> FormalSum:
    lam = lam.normalized()
    addable, _ = typical_rows(lam, bd)
    return FormalSum({lam.add_box(i): 1 for i in addable})


def translate_F(lam: Weight, bd: BlockData) -> FormalSum:
    lam = lam.normalized()
    _, removable = typical_rows(lam, bd)
    return FormalSum({lam.remove_box(i): 1 for i in removable})


def _apply(op, v: FormalSum, p: int, r: int) -> FormalSum:
    out = FormalSum()
    for mu, c in v.items():
        bd = block_of(mu, p, r if r in (0, mu.n) else None)
        out = out + op(mu, bd).scale(c)
    return out


def atypical_pairing_check(lam: Weight, bd: BlockData) -> bool:
    """True iff ``i -> i+1`` maps atypical marked rows onto atypical unmarked rows."""
    lam = lam.normalized()
    addable, removable = typical_rows(lam, bd)
    atyp_marked = set(bd.marked) - removable
    atyp_unmarked = set(bd.unmarked) - addable
    return {i + 1 for i in atyp_marked} == atyp_unmarked


@dataclass
class RelationReport:
    lam: Weight
    block: BlockData
    E: FormalSum
    F: FormalSum
    FE_side: FormalSum
    EF_side: FormalSum
    relation_holds: bool
    c1: int
    c2: int
    Q: list[Weight]
    comb_ok: bool
    pairing_ok: bool

    def to_json(self) -> dict:
        return {
            "lambda": list(self.lam.parts),
            "p": self.block.p,
            "r": self.block.r,
            "marked": sorted(self.block.marked),
            "E": [list(w.parts) for w in self.E],
            "F": [list(w.parts) for w in self.F],
            "relation_holds": self.relation_holds,
            "c1": self.c1,
            "c2": self.c2,
            "Q": [list(w.parts) for w in self.Q],
        }


def verify_sl2_relation(lam: Weight, p: int, r_hint: int | None = None) -> RelationReport:
    """Check ``[FE V(lam)] + r[V(lam)] == [EF V(lam)] + (n-r)[V(lam)]``.

    Both sides are built by actually applying the box rules (with block
    recomputation on every intermediate weight); the ``c1``/``c2``/``Q``
    decomposition is computed separately from the typical rows and compared.
    """
    lam = lam.normalized()
    n = lam.n
    bd = block_of(lam, p, r_hint)
    r = bd.r
    E = translate_E(lam, bd) if r < n else FormalSum()
    F = translate_F(lam, bd) if r > 0 else FormalSum()
    FE = _apply(translate_F, E, p, r + 1) if r < n else FormalSum()
    EF = _apply(translate_E, F, p, r - 1) if r > 0 else FormalSum()
    left = FE + FormalSum.basis(lam, r)
    right = EF + FormalSum.basis(lam, n - r)

    addable, removable = typical_rows(lam, bd)
    c1, c2 = len(addable), len(removable)
    Q = sorted({lam.add_box(i).remove_box(j) for i in addable for j in removable},
               key=Weight.sort_key)
    q_sum = FormalSum({mu: 1 for mu in Q})
    comb_ok = (FE == q_sum + FormalSum.basis(lam, c1)) and (EF == q_sum + FormalSum.basis(lam, c2))
    return RelationReport(lam, bd, E, F, left, right, left == right, c1, c2, Q, comb_ok,
                          atypical_pairing_check(lam, bd))


# ---------------------------------------------------------------------------
# Casimir scalars


@dataclass(frozen=True)
class CasimirValue:
    b: int
    c: dict[int, int]
    p: int


def casimir_b(parts) -> int:
    n = len(parts)
    return (sum(x * x for x in parts)
            + sum(parts[i] - parts[j] for i in range(n) for j in range(i + 1, n)))


def casimir(parts, p: int) -> CasimirValue:
    """Scalar of the Casimir on the baby Verma of ``parts`` and the
    eigenvalues ``c_i = (b(lam+e_i) - b(lam) - b(e_1)) / 2`` in F_p."""
    if p <= 2:
        raise ValueError("need p > 2 to halve")
    parts = tuple(parts)
    n = len(parts)
    b = casimir_b(parts)
    e1 = (1,) + (0,) * (n - 1)
    b_e1 = casimir_b(e1)
    half = pow(2, -1, p)
    cs = {}
    for i in range(n):
        bumped = tuple(x + (k == i) for k, x in enumerate(parts))
        cs[i + 1] = ((casimir_b(bumped) - b - b_e1) * half) % p
    return CasimirValue(b, cs, p)


def same_orbit_mod_shift(u, v, p: int) -> bool:
    """Residue multisets of ``u`` and ``v`` agree up to a uniform shift mod p."""
    mv = sorted(x % p for x in v)
    return any(sorted((x + d) % p for x in u) == mv for d in range(p))


@dataclass
class SeparationReport:
    n: int
    p: int
    checked: int
    counterexamples: list[dict]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def casimir_separation_check(n: int, p: int, sample=None) -> SeparationReport:
    """For every weight and row pair, ``c_i == c_j`` iff ``lam+e_i`` and
    ``lam+e_j`` are rho-shifted conjugate.  The default sample is every
    residue class ``[0, p)^n``."""
    if p <= 2:
        raise ValueError("need p > 2")
    if sample is None:
        sample = itertools.product(range(p), repeat=n)
    rh = rho_hat(n)
    bad = []
    count = 0
    for lam in sample:
        lam = tuple(lam)
        cv = casimir(lam, p)
        for i, j in itertools.combinations(range(n), 2):
            count += 1
            u = [x + (k == i) + rh[k] for k, x in enumerate(lam)]
            v = [x + (k == j) + rh[k] for k, x in enumerate(lam)]
            equal_c = cv.c[i + 1] == cv.c[j + 1]
            conj = same_orbit_mod_shift(u, v, p)
            if equal_c != conj:
                bad.append({"lambda": list(lam), "i": i + 1, "j": j + 1,
                            "c_i": cv.c[i + 1], "c_j": cv.c[j + 1], "conjugate": conj})
    return SeparationReport(n, p, count, bad)


# ---------------------------------------------------------------------------
# corpus generation


def enumerate_block_weights(n: int, p: int, r: int, max_first_part: int,
                            all_shifts: bool = False) -> list[Weight]:
    """Dominant weights with parts in ``[1, max_first_part]`` lying in mu_r.

    By default one representative (smallest parts) is kept per class mod the
    all-ones vector.  With ``all_shifts`` every such tuple is returned, so
    translates of the same class appear side by side.
    """
    if not 0 <= r <= n:
        raise ValueError(f"r must lie in [0, {n}]")
    _check_prime(p, n)
    if max_first_part < 1:
        return []
    seen: set = set()
    out: list[Weight] = []
    if all_shifts:
        tuples = itertools.combinations_with_replacement(range(max_first_part, 0, -1), n)
    else:
        # last part 1 gives the smallest representative of each class
        tuples = (t + (1,) for t in
                  itertools.combinations_with_replacement(range(max_first_part, 0, -1), n - 1))
    for parts in tuples:
        lam = Weight(parts)
        key = parts if all_shifts else lam
        if key in seen:
            continue
        try:
            bd = block_of(lam, p, r if r in (0, n) else None)
        except (NotInSl2Block, AmbiguousRank):
            continue
        if bd.r != r:
            continue
        seen.add(key)
        out.append(lam)
    if all_shifts:
        return sorted(out, key=lambda w: (w.sort_key(), w.parts))
    return sorted(out, key=Weight.sort_key)


def marked_sets(n: int, p: int, r: int, weights) -> set[frozenset[int]]:
    return {block_of(w, p, r if r in (0, n) else None).marked for w in weights}


def expected_rank(n: int, r: int) -> int:
    return comb(n, r)
