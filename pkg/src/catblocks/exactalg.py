"""Exact coefficient rings and finite linear algebra.

Everything here is integer-exact: Laurent polynomials in ``q``, multivariate
Laurent polynomials in ``(t_1, ..., t_n, q)``, rational functions kept with a
factored denominator, and finitely supported formal sums with linear maps
between them.  Values are immutable once built.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping


class NotPolynomial(ArithmeticError):
    """A rational function whose denominator does not divide its numerator."""


def _clean(items: Iterable[tuple[Any, int]]) -> dict:
    out: dict = {}
    for k, v in items:
        out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _fmt_term(coeff: int, mono: str) -> str:
    if not mono:
        return str(coeff)
    if coeff == 1:
        return mono
    if coeff == -1:
        return "-" + mono
    return f"{coeff}*{mono}"


def _join_terms(terms: list[str]) -> str:
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


# ---------------------------------------------------------------------------
# single-variable Laurent polynomials


class LaurentScalar:
    """Laurent polynomial in one variable ``q`` with integer coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coefficients: Mapping[int, int] | int | None = None):
        if coefficients is None:
            coefficients = {}
        elif isinstance(coefficients, int):
            coefficients = {0: coefficients}
        self._c = {int(k): int(v) for k, v in coefficients.items() if v}
        self._hash = None

    @classmethod
    def q(cls, power: int = 1) -> LaurentScalar:
        return cls({power: 1})

    @property
    def coefficients(self) -> dict[int, int]:
        return dict(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def _coerce(self, other) -> LaurentScalar | None:
        if isinstance(other, LaurentScalar):
            return other
        if isinstance(other, int):
            return LaurentScalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return LaurentScalar(_clean([*self._c.items(), *o._c.items()]))

    __radd__ = __add__

    def __neg__(self) -> LaurentScalar:
        return LaurentScalar({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[int, int] = {}
        for a, x in self._c.items():
            for b, y in o._c.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return LaurentScalar(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentScalar:
        if k < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials can be inverted")
            ((e, c),) = self._c.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials can be inverted")
            return LaurentScalar({-e * -k: c ** -k})
        out = LaurentScalar(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._c == o._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def evaluate(self, value: int | Fraction) -> Fraction | int:
        """Substitute a number for ``q``."""
        value = Fraction(value)
        total = sum(c * value**e for e, c in self._c.items())
        total = Fraction(total)
        return int(total) if total.denominator == 1 else total

    def bar(self) -> LaurentScalar:
        """The involution ``q -> q^{-1}``."""
        return LaurentScalar({-e: c for e, c in self._c.items()})

    def __str__(self) -> str:
        terms = []
        for e in sorted(self._c, reverse=True):
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            terms.append(_fmt_term(self._c[e], mono))
        return _join_terms(terms)

    def __repr__(self) -> str:
        return f"LaurentScalar({self})"


def quantum_integer(m: int) -> LaurentScalar:
    """``[m]_q = q^{m-1} + q^{m-3} + ... + q^{1-m}``, odd in ``m``."""
    if m < 0:
        return -quantum_integer(-m)
    return LaurentScalar({m - 1 - 2 * k: 1 for k in range(m)})


# ---------------------------------------------------------------------------
# multivariate Laurent polynomials


class MultiLaurent:
    """Sparse Laurent polynomial in a fixed number of variables.

    Exponent vectors are tuples of length ``arity``.  In the geometric module
    the variables are ``(t_1, ..., t_n, q)``.
    """

    __slots__ = ("arity", "_c", "_hash", "names")

    def __init__(self, arity: int, coefficients: Mapping[tuple, int] | None = None,
                 names: tuple[str, ...] | None = None):
        self.arity = arity
        self._c = {}
        for k, v in (coefficients or {}).items():
            if v:
                if len(k) != arity:
                    raise ValueError(f"exponent {k} does not have arity {arity}")
                self._c[tuple(k)] = int(v)
        self._hash = None
        self.names = names

    # constructors -----------------------------------------------------------
    @classmethod
    def constant(cls, arity: int, c: int = 1, names=None) -> MultiLaurent:
        return cls(arity, {(0,) * arity: c}, names)

    @classmethod
    def monomial(cls, exponent: Iterable[int], c: int = 1, names=None) -> MultiLaurent:
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: c}, names)

    @classmethod
    def variable(cls, arity: int, index: int, power: int = 1, names=None) -> MultiLaurent:
        e = [0] * arity
        e[index] = power
        return cls(arity, {tuple(e): 1}, names)

    def _new(self, coefficients) -> MultiLaurent:
        return MultiLaurent(self.arity, coefficients, self.names)

    # basic protocol -----------------------------------------------------------
    @property
    def coefficients(self) -> dict[tuple, int]:
        return dict(self._c)

    def terms(self) -> Iterator[tuple[tuple, int]]:
        return iter(self._c.items())

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def _coerce(self, other) -> MultiLaurent | None:
        if isinstance(other, MultiLaurent):
            if other.arity != self.arity:
                raise ValueError("arity mismatch")
            return other
        if isinstance(other, int):
            return MultiLaurent.constant(self.arity, other, self.names)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._c)
        for k, v in o._c.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return self._new(out)

    __radd__ = __add__

    def __neg__(self) -> MultiLaurent:
        return self._new({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[tuple, int] = {}
        for a, x in self._c.items():
            for b, y in o._c.items():
                k = tuple(i + j for i, j in zip(a, b))
                out[k] = out.get(k, 0) + x * y
        return self._new(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> MultiLaurent:
        if k < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials can be inverted")
            ((e, c),) = self._c.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials can be inverted")
            return self._new({tuple(-x * -k for x in e): c ** -k})
        out = MultiLaurent.constant(self.arity, 1, self.names)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MultiLaurent.constant(self.arity, other)
        if not isinstance(other, MultiLaurent):
            return NotImplemented
        return self.arity == other.arity and self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self._c.items())))
        return self._hash

    # substitutions ----------------------------------------------------------
    def substitute(self, images: Mapping[int, MultiLaurent]) -> MultiLaurent:
        """Replace variable ``i`` by ``images[i]`` (a unit monomial or any
        polynomial when the exponent is non-negative)."""
        out = MultiLaurent(self.arity, {}, self.names)
        for e, c in self._c.items():
            kept = [0 if i in images else x for i, x in enumerate(e)]
            term = MultiLaurent.monomial(kept, c, self.names)
            for i, img in images.items():
                if e[i]:
                    term = term * img ** e[i]
            out = out + term
        return out

    def evaluate(self, values: Mapping[int, int | Fraction]) -> Fraction:
        total = Fraction(0)
        for e, c in self._c.items():
            term = Fraction(c)
            for i, x in enumerate(e):
                if x:
                    term *= Fraction(values[i]) ** x
            total += term
        return total

    def to_laurent_scalar(self, q_index: int | None = None) -> LaurentScalar:
        """Read off a one-variable polynomial; all other exponents must be 0."""
        q_index = self.arity - 1 if q_index is None else q_index
        out: dict[int, int] = {}
        for e, c in self._c.items():
            if any(x for i, x in enumerate(e) if i != q_index):
                raise ValueError(f"{self} depends on variables other than index {q_index}")
            out[e[q_index]] = out.get(e[q_index], 0) + c
        return LaurentScalar(out)

    def min_exponents(self) -> tuple[int, ...]:
        if not self._c:
            return (0,) * self.arity
        return tuple(min(e[i] for e in self._c) for i in range(self.arity))

    def shift(self, exponent: Iterable[int]) -> MultiLaurent:
        """Multiply by the monomial with the given exponent vector."""
        exponent = tuple(exponent)
        return self._new({tuple(a + b for a, b in zip(e, exponent)): c
                          for e, c in self._c.items()})

    # printing -----------------------------------------------------------------
    def _names(self) -> tuple[str, ...]:
        if self.names:
            return self.names
        return tuple(f"x{i + 1}" for i in range(self.arity))

    def __str__(self) -> str:
        names = self._names()
        terms = []
        for e in sorted(self._c, reverse=True):
            factors = []
            for name, x in zip(names, e):
                if x == 1:
                    factors.append(name)
                elif x:
                    factors.append(f"{name}^{x}")
            terms.append(_fmt_term(self._c[e], "*".join(factors)))
        return _join_terms(terms)

    def __repr__(self) -> str:
        return f"MultiLaurent({self})"


def _grlex_key(e: tuple) -> tuple:
    return (sum(e), e)


def divide_exact(numerator: MultiLaurent, divisor: MultiLaurent) -> MultiLaurent:
    """Return ``numerator / divisor`` when it is a Laurent polynomial.

    Monomial factors are cleared first, so both operands become honest
    polynomials and the divisor has no monomial content; the quotient is then
    a polynomial (up to the cleared monomial) and ordinary multivariate
    division in graded-lex order terminates.  Raises :class:`NotPolynomial`
    when a remainder survives.
    """
    if not divisor:
        raise ZeroDivisionError("division by the zero polynomial")
    if not numerator:
        return numerator
    if divisor.is_monomial():
        ((e, c),) = divisor.terms()
        out = {}
        for k, v in numerator.terms():
            if v % c:
                raise NotPolynomial(f"{numerator} is not divisible by {divisor}")
            out[tuple(a - b for a, b in zip(k, e))] = v // c
        return MultiLaurent(numerator.arity, out, numerator.names)
    dmin = divisor.min_exponents()
    nmin = numerator.min_exponents()
    d = divisor.shift(-x for x in dmin)
    r = dict(numerator.shift(-x for x in nmin).terms())
    lead_e = max(d._c, key=_grlex_key)
    lead_c = d._c[lead_e]
    d_items = list(d.terms())
    quotient: dict[tuple, int] = {}
    while r:
        e = max(r, key=_grlex_key)
        c = r[e]
        qe = tuple(a - b for a, b in zip(e, lead_e))
        if any(x < 0 for x in qe) or c % lead_c:
            raise NotPolynomial(f"{numerator} is not divisible by {divisor}")
        qc = c // lead_c
        quotient[qe] = quotient.get(qe, 0) + qc
        for de, dc in d_items:
            k = tuple(a + b for a, b in zip(qe, de))
            v = r.get(k, 0) - qc * dc
            if v:
                r[k] = v
            else:
                r.pop(k, None)
    q = MultiLaurent(numerator.arity, quotient, numerator.names)
    return q.shift(a - b for a, b in zip(nmin, dmin))


# ---------------------------------------------------------------------------
# rational functions


def _normalize_factor(f: MultiLaurent) -> tuple[MultiLaurent, MultiLaurent]:
    """Split ``f = unit * g`` with ``g`` canonical: lowest-degree monomial
    content removed and leading coefficient positive.  Returns ``(unit, g)``."""
    mins = f.min_exponents()
    g = f.shift(-x for x in mins)
    sign = 1 if g._c[max(g._c)] > 0 else -1
    if sign < 0:
        g = -g
    return MultiLaurent.monomial(mins, sign, f.names), g


class RationalFn:
    """Quotient of multivariate Laurent polynomials.

    The denominator is stored as a multiset of canonical factors so sums can
    use a least common multiple of factors instead of multiplying full
    denominators together.  No gcd is ever taken; two values are equal when
    their cross products agree.
    """

    __slots__ = ("numerator", "_den", "arity")

    def __init__(self, numerator: MultiLaurent,
                 denominator: MultiLaurent | Iterable[MultiLaurent] | None = None):
        self.arity = numerator.arity
        factors: Counter = Counter()
        if denominator is None:
            denominator = []
        elif isinstance(denominator, MultiLaurent):
            denominator = [denominator]
        for f in denominator:
            if not f:
                raise ZeroDivisionError("zero denominator")
            unit, g = _normalize_factor(f)
            # unit is +-monomial; move its inverse to the numerator
            numerator = numerator * unit ** -1
            if len(g) > 1:
                factors[g] += 1
            else:
                ((_, c),) = g.terms()
                if c != 1:
                    factors[g] += 1
        self.numerator = numerator
        self._den = factors

    @classmethod
    def _raw(cls, numerator: MultiLaurent, factors: Counter) -> RationalFn:
        out = cls.__new__(cls)
        out.numerator = numerator
        out._den = +factors
        out.arity = numerator.arity
        return out

    @classmethod
    def from_int(cls, arity: int, c: int) -> RationalFn:
        return cls(MultiLaurent.constant(arity, c))

    @property
    def denominator(self) -> MultiLaurent:
        out = MultiLaurent.constant(self.arity, 1, self.numerator.names)
        for f, m in self._den.items():
            out = out * f ** m
        return out

    @property
    def denominator_factors(self) -> Counter:
        return Counter(self._den)

    def __bool__(self) -> bool:
        return bool(self.numerator)

    def _coerce(self, other) -> RationalFn | None:
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, MultiLaurent):
            return RationalFn(other)
        if isinstance(other, int):
            return RationalFn.from_int(self.arity, other)
        return None

    def _lift(self, target: Counter) -> MultiLaurent:
        out = self.numerator
        for f, m in (target - self._den).items():
            out = out * f ** m
        return out

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.numerator:
            return self
        if not self.numerator:
            return o
        lcm = self._den | o._den
        return RationalFn._raw(self._lift(lcm) + o._lift(lcm), lcm)

    __radd__ = __add__

    def __neg__(self) -> RationalFn:
        return RationalFn._raw(-self.numerator, self._den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.numerator or not o.numerator:
            return RationalFn(MultiLaurent(self.arity, {}, self.numerator.names))
        return RationalFn._raw(self.numerator * o.numerator, self._den + o._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.numerator:
            raise ZeroDivisionError("division by zero rational function")
        num = self.numerator
        for f, m in o._den.items():
            num = num * f ** m
        return RationalFn(num, [o.numerator, *self._den.elements()])

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # a/B == c/D  iff  a*(D/g) == c*(B/g), g the shared factors
        lcm = self._den | o._den
        return self._lift(lcm) == o._lift(lcm)

    def __hash__(self):
        raise TypeError("RationalFn equality is cross-multiplication; not hashable")

    def substitute(self, images: Mapping[int, MultiLaurent]) -> RationalFn:
        return RationalFn(self.numerator.substitute(images),
                          [f.substitute(images) for f in self._den.elements()])

    def __str__(self) -> str:
        if not self._den:
            return str(self.numerator)
        den = " * ".join(f"({f})" + (f"^{m}" if m > 1 else "") for f, m in sorted(
            self._den.items(), key=lambda kv: str(kv[0])))
        return f"({self.numerator}) / ({den})"

    def __repr__(self) -> str:
        return f"RationalFn({self})"


def rational_reduce_to_laurent(f: RationalFn) -> MultiLaurent:
    """The Laurent polynomial equal to ``f``; :class:`NotPolynomial` if none."""
    num = f.numerator
    # dividing by the largest factors first keeps intermediate sizes down
    for g, m in sorted(f.denominator_factors.items(), key=lambda kv: -len(kv[0])):
        for _ in range(m):
            num = divide_exact(num, g)
    return num


def as_laurent(value: Any) -> MultiLaurent:
    if isinstance(value, MultiLaurent):
        return value
    if isinstance(value, RationalFn):
        return rational_reduce_to_laurent(value)
    raise TypeError(f"cannot read {type(value).__name__} as a Laurent polynomial")


# ---------------------------------------------------------------------------
# formal sums and linear maps


def _sort_key(label: Hashable):
    key = getattr(label, "sort_key", None)
    if callable(key):
        return key()
    return label


class FormalSum:
    """Finitely supported combination ``sum c_L [L]`` of basis labels."""

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping | Iterable[tuple] | None = None):
        items = terms.items() if isinstance(terms, Mapping) else (terms or [])
        t: dict = {}
        for label, c in items:
            if label in t:
                c = t[label] + c
            t[label] = c
        self._t = {k: v for k, v in t.items() if v}

    @classmethod
    def basis(cls, label, coeff=1) -> FormalSum:
        return cls({label: coeff})

    def __iter__(self):
        return iter(sorted(self._t, key=_sort_key))

    def items(self) -> list[tuple]:
        return [(k, self._t[k]) for k in self]

    def labels(self) -> list:
        return list(self)

    def __getitem__(self, label):
        return self._t.get(label, 0)

    def __contains__(self, label) -> bool:
        return label in self._t

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def __add__(self, other: FormalSum) -> FormalSum:
        if not isinstance(other, FormalSum):
            return NotImplemented
        return FormalSum([*self._t.items(), *other._t.items()])

    def __neg__(self) -> FormalSum:
        return FormalSum({k: -v for k, v in self._t.items()})

    def __sub__(self, other: FormalSum) -> FormalSum:
        return self + (-other)

    def scale(self, c) -> FormalSum:
        return FormalSum({k: c * v for k, v in self._t.items()})

    def __rmul__(self, c) -> FormalSum:
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self._t
        if not isinstance(other, FormalSum):
            return NotImplemented
        return not (self - other)._t

    def map_coefficients(self, fn: Callable) -> FormalSum:
        return FormalSum({k: fn(v) for k, v in self._t.items()})

    def to_json(self, label_fn: Callable = str) -> dict[str, str]:
        return {label_fn(k): str(self._t[k]) for k in self}

    def __repr__(self) -> str:
        if not self._t:
            return "0"
        return " + ".join(f"({v})*[{k}]" for k, v in self.items())


class LinearOp:
    """Linear map given by the images of basis labels (its columns)."""

    __slots__ = ("columns", "domain", "codomain")

    def __init__(self, columns: Mapping, domain: Iterable | None = None,
                 codomain: Iterable | None = None):
        self.columns = {k: v for k, v in columns.items()}
        self.domain = sorted(domain if domain is not None else self.columns, key=_sort_key)
        if codomain is None:
            labels = set()
            for v in self.columns.values():
                labels.update(v.labels())
            codomain = labels
        self.codomain = sorted(codomain, key=_sort_key)

    def column(self, label) -> FormalSum:
        return self.columns.get(label, FormalSum())

    def entry(self, row, col):
        return self.column(col)[row]

    def __call__(self, v: FormalSum) -> FormalSum:
        out = FormalSum()
        for label, c in v.items():
            out = out + self.column(label).scale(c)
        return out

    def __matmul__(self, other: LinearOp) -> LinearOp:
        """``self @ other`` applies ``other`` first."""
        return LinearOp({k: self(other.column(k)) for k in other.domain},
                        other.domain, self.codomain)

    def __add__(self, other: LinearOp) -> LinearOp:
        dom = set(self.domain) | set(other.domain)
        return LinearOp({k: self.column(k) + other.column(k) for k in dom}, dom,
                        set(self.codomain) | set(other.codomain))

    def __neg__(self) -> LinearOp:
        return LinearOp({k: -v for k, v in self.columns.items()}, self.domain, self.codomain)

    def __sub__(self, other: LinearOp) -> LinearOp:
        return self + (-other)

    def scale(self, c) -> LinearOp:
        return LinearOp({k: v.scale(c) for k, v in self.columns.items()},
                        self.domain, self.codomain)

    def map_coefficients(self, fn: Callable) -> LinearOp:
        return LinearOp({k: v.map_coefficients(fn) for k, v in self.columns.items()},
                        self.domain, self.codomain)

    @classmethod
    def identity(cls, labels: Iterable, one=1) -> LinearOp:
        labels = list(labels)
        return cls({k: FormalSum.basis(k, one) for k in labels}, labels, labels)

    @classmethod
    def diagonal(cls, entries: Mapping) -> LinearOp:
        return cls({k: FormalSum.basis(k, v) for k, v in entries.items()},
                   entries.keys(), entries.keys())

    def matrix(self, rows: list | None = None, cols: list | None = None) -> list[list]:
        rows = self.codomain if rows is None else rows
        cols = self.domain if cols is None else cols
        return [[self.entry(r, c) for c in cols] for r in rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearOp):
            return NotImplemented
        dom = set(self.domain) | set(other.domain)
        return all(self.column(k) == other.column(k) for k in dom)

    def to_json(self, label_fn: Callable = str) -> dict[str, dict[str, str]]:
        return {label_fn(k): self.column(k).to_json(label_fn) for k in self.domain}

    def __repr__(self) -> str:
        return f"LinearOp({len(self.domain)} -> {len(self.codomain)})"
