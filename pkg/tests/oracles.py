"""Independent brute-force reimplementations used to produce frozen expected
values.  Nothing here imports the package under test; everything is either
plain Python or sympy.
"""

from __future__ import annotations

import itertools
from collections import Counter

import sympy


# ---------------------------------------------------------------------------
# blocks by residue multisets


def normalize(parts):
    parts = list(parts)
    if parts[-1] < 1:
        shift = 1 - parts[-1]
        parts = [x + shift for x in parts]
    return tuple(parts)


def shape_key(parts):
    return tuple(a - b for a, b in zip(parts, parts[1:]))


def residue_type(parts, p):
    """``r`` for the block mu_r containing ``parts`` (``"const"`` when all
    shifted residues agree), or None outside every mu_r."""
    n = len(parts)
    res = Counter((x + n - 1 - i) % p for i, x in enumerate(parts))
    if len(res) == 1:
        return "const"
    if len(res) != 2:
        return None
    (a, ma), (b, mb) = sorted(res.items())
    if (a + 1) % p == b:
        return mb
    if (b + 1) % p == a:
        return ma
    return None


def in_block(parts, p, r):
    t = residue_type(parts, p)
    n = len(parts)
    if t == "const":
        return r in (0, n)
    return t == r


def oracle_E(parts, p, r):
    """All dominant ``lam + e_i`` whose residues sit in mu_{r+1}."""
    out = set()
    for i in range(len(parts)):
        mu = list(parts)
        mu[i] += 1
        if i > 0 and mu[i] > mu[i - 1]:
            continue
        if in_block(mu, p, r + 1):
            out.add(shape_key(normalize(mu)))
    return out


def oracle_F(parts, p, r):
    """All dominant ``lam - e_i`` (no negative rows) whose residues sit in mu_{r-1}."""
    out = set()
    n = len(parts)
    for i in range(n):
        mu = list(parts)
        mu[i] -= 1
        if mu[i] < 0 or (i + 1 < n and mu[i] < mu[i + 1]):
            continue
        if in_block(mu, p, r - 1):
            out.add(shape_key(normalize(mu)))
    return out


def oracle_block_table(n, p, max_part):
    """Per weight (last part 1): block index and E/F image shapes."""
    table = []
    for tail in itertools.combinations_with_replacement(range(max_part, 0, -1), n - 1):
        parts = tail + (1,)
        t = residue_type(parts, p)
        if t is None:
            continue
        rs = [0, n] if t == "const" else [t]
        for r in rs:
            table.append({
                "parts": list(parts), "r": r,
                "E": sorted(map(list, oracle_E(parts, p, r))) if r < n else [],
                "F": sorted(map(list, oracle_F(parts, p, r))) if r > 0 else [],
            })
    return table


# ---------------------------------------------------------------------------
# Casimir


def oracle_casimir_counterexamples(n, p):
    """Closed form ``c_i = lam_i - i + 1`` against permutation conjugacy."""
    bad = 0
    for lam in itertools.product(range(p), repeat=n):
        for i, j in itertools.combinations(range(n), 2):
            ci = (lam[i] - (i + 1) + 1) % p
            cj = (lam[j] - (j + 1) + 1) % p
            u = [(x + (k == i) + n - 1 - k) % p for k, x in enumerate(lam)]
            v = [(x + (k == j) + n - 1 - k) % p for k, x in enumerate(lam)]
            conj = any(sorted((x + d) % p for x in u) == sorted(v) for d in range(p))
            bad += (ci == cj) != conj
    return bad


# ---------------------------------------------------------------------------
# tensor representation by Kronecker products

q = sympy.Symbol("q")
E1 = sympy.Matrix([[0, 0], [1, 0]])   # v0 -> v1
F1 = sympy.Matrix([[0, 1], [0, 0]])   # v1 -> v0
K1 = sympy.diag(q ** -1, q)


def kron_all(mats):
    out = mats[0]
    for m in mats[1:]:
        out = sympy.kronecker_product(out, m)
    return out


def oracle_tensor_rep(n):
    """(e, f) on ``(C^2)^{tensor n}``, index bits b_1 ... b_n (b_1 most significant)."""
    I2 = sympy.eye(2)
    e = sympy.zeros(2 ** n, 2 ** n)
    f = sympy.zeros(2 ** n, 2 ** n)
    for pos in range(n):
        e += kron_all([I2] * pos + [E1] + [K1] * (n - pos - 1))
        f += kron_all([K1 ** -1] * pos + [F1] + [I2] * (n - pos - 1))
    return e, f


def index_of(subset, n):
    return sum(1 << (n - i) for i in subset)


# ---------------------------------------------------------------------------
# K-theory of T*Gr(r, n) in sympy


def _syms(n):
    return sympy.symbols(" ".join(f"t{i}" for i in range(1, n + 1)), seq=True), sympy.Symbol("q")


def _euler(chars):
    out = sympy.Integer(1)
    for c in chars:
        out *= 1 - 1 / c
    return out


def _tangent_gr(S, n, t, qq):
    comp = [j for j in range(1, n + 1) if j not in S]
    base = [t[j - 1] / t[i - 1] for i in S for j in comp]
    fib = [qq ** 2 * t[i - 1] / t[j - 1] for i in S for j in comp]
    return base + fib


def _tangent_w(S, Sp, n, t, qq):
    (a,) = set(Sp) - set(S)
    out = [t[j - 1] / t[i - 1] for i in S for j in range(1, n + 1) if j not in S]
    out += [t[j - 1] / t[a - 1] for j in range(1, n + 1) if j not in Sp]
    out += [qq ** 2 * t[i - 1] / t[j - 1] for i in S for j in range(1, n + 1) if j not in Sp]
    return out


def _det(S, t):
    out = sympy.Integer(1)
    for i in S:
        out *= t[i - 1]
    return out


def oracle_kernel_matrix(n, r, up, a, b, s):
    """Skyscraper-basis matrix of the kernel, as a dict (target, source) -> expr."""
    t, qq = _syms(n)
    small = list(itertools.combinations(range(1, n + 1), r))
    large = list(itertools.combinations(range(1, n + 1), r + 1))
    out = {}
    for S in small:
        for Sp in large:
            if not set(S) < set(Sp):
                continue
            twist = _det(S, t) ** a * _det(Sp, t) ** b * qq ** s
            src = S if up else Sp
            val = twist * _euler(_tangent_gr(src, n, t, qq)) / _euler(_tangent_w(S, Sp, n, t, qq))
            out[(Sp, S) if up else (S, Sp)] = val
    return out


def _compose(outer, inner, n, r_src, r_mid):
    src = list(itertools.combinations(range(1, n + 1), r_src))
    mid = list(itertools.combinations(range(1, n + 1), r_mid))
    out = {}
    for s0 in src:
        for s2 in src:
            out[(s2, s0)] = sum((outer.get((s2, m), 0) * inner.get((m, s0), 0) for m in mid),
                                sympy.Integer(0))
    return out


def oracle_commutator_diagonal(n, r, family):
    """``fe - ef`` on weight space r, SL_n-specialized; returns the diagonal
    value (as a q-polynomial string) if the operator is scalar, else None."""
    t, qq = _syms(n)

    def kernels(rr):
        m = n - 2 * rr - 1
        if family == "ckl":
            return (-m, m, n - rr - 1), (1, 1, rr)
        return (-(n - rr - 1), n - rr, n - rr - 1), (rr + 1, -rr, rr)

    pts = list(itertools.combinations(range(1, n + 1), r))
    total = {(x, y): sympy.Integer(0) for x in pts for y in pts}
    if r < n:
        (ea, eb, es), (fa, fb, fs) = kernels(r)
        E = oracle_kernel_matrix(n, r, True, ea, eb, es)
        F = oracle_kernel_matrix(n, r, False, fa, fb, fs)
        for k, v in _compose(F, E, n, r, r + 1).items():
            total[k] += v
    if r > 0:
        (ea, eb, es), (fa, fb, fs) = kernels(r - 1)
        E = oracle_kernel_matrix(n, r - 1, True, ea, eb, es)
        F = oracle_kernel_matrix(n, r - 1, False, fa, fb, fs)
        for k, v in _compose(E, F, n, r, r - 1).items():
            total[k] -= v
    sl_subs = {t[n - 1]: 1 / sympy.prod(t[: n - 1])} if n > 1 else {t[0]: 1}
    diag = set()
    for (x, y), v in total.items():
        v = sympy.cancel(sympy.together(v.subs(sl_subs)))
        if x != y:
            if v != 0:
                return None
        else:
            diag.add(sympy.expand(v))
    if len(diag) != 1:
        return None
    return str(diag.pop())
