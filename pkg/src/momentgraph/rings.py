"""Exact arithmetic over a lattice of fixed rank.

Three coefficient rings, all with arbitrary-precision coefficients:

* ``LaurentPolynomial`` -- the group ring of the lattice, spanned by
  exponentials ``e^lam``; the distinguished elements are
  ``x(lam) = 1 - e^(-lam)``.
* ``GradedPolynomial`` -- the symmetric algebra on the lattice, with
  integer or rational coefficients.
* ``TruncatedSeries`` -- the symmetric algebra over Q modulo all terms
  of total degree above a fixed bound.

The exact-division primitives (``exact_divide_laurent``,
``exact_divide_linear``, ``exact_divide_general``) are the workhorses of
every divisibility check downstream.  No floating point anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NotDivisible, NotUnimodular, RankMismatch, ZeroVector

Vec = tuple[int, ...]


# ---------------------------------------------------------------------------
# lattice vectors


def as_vec(coords) -> Vec:
    return tuple(int(c) for c in coords)


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vec_sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vec_neg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def vec_scale(k: int, a: Vec) -> Vec:
    return tuple(k * x for x in a)


def is_zero_vec(a: Vec) -> bool:
    return all(x == 0 for x in a)


def content(a: Vec) -> int:
    """gcd of the coordinates (0 for the zero vector)."""
    return math.gcd(*a) if a else 0


def integer_multiple(d: Vec, gamma: Vec):
    """Return k with d == k*gamma, or None if no integer k exists."""
    k = None
    for di, gi in zip(d, gamma, strict=True):
        if gi == 0:
            if di != 0:
                return None
            continue
        q, r = divmod(di, gi)
        if r != 0:
            return None
        if k is None:
            k = q
        elif k != q:
            return None
    if k is None:  # gamma == 0: only d == 0 qualifies
        return 0 if is_zero_vec(d) else None
    return k


def proportional(a: Vec, b: Vec) -> bool:
    """Rational proportionality, checked by vanishing 2x2 minors."""
    n = len(a)
    return all(a[i] * b[j] == a[j] * b[i] for i in range(n) for j in range(i + 1, n))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with g = gcd >= 0 and s*a + t*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# lattice automorphisms


@dataclass(frozen=True)
class LatticeAutomorphism:
    """Unimodular integer matrix acting on coordinate columns."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise RankMismatch("matrix is not square")
        if abs(self.det()) != 1:
            raise NotUnimodular(f"determinant {self.det()} is not +-1")

    @staticmethod
    def identity(n: int) -> "LatticeAutomorphism":
        return LatticeAutomorphism(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @staticmethod
    def from_rows(rows) -> "LatticeAutomorphism":
        return LatticeAutomorphism(tuple(tuple(int(x) for x in row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def det(self) -> int:
        return _int_det([list(row) for row in self.matrix])

    def apply(self, v: Vec) -> Vec:
        if len(v) != self.rank:
            raise RankMismatch(f"vector of length {len(v)} under rank-{self.rank} map")
        return tuple(sum(row[j] * v[j] for j in range(self.rank)) for row in self.matrix)

    def compose(self, other: "LatticeAutomorphism") -> "LatticeAutomorphism":
        """self after other (matrix product self * other)."""
        if self.rank != other.rank:
            raise RankMismatch("rank mismatch in composition")
        n = self.rank
        rows = tuple(
            tuple(sum(self.matrix[i][k] * other.matrix[k][j] for k in range(n)) for j in range(n))
            for i in range(n)
        )
        return LatticeAutomorphism(rows)

    def inverse(self) -> "LatticeAutomorphism":
        n = self.rank
        d = self.det()
        cof = [
            [((-1) ** (i + j)) * _int_det(_minor(self.matrix, i, j)) for j in range(n)]
            for i in range(n)
        ]
        # adjugate transpose divided by det (+-1)
        rows = tuple(tuple(d * cof[j][i] for j in range(n)) for i in range(n))
        return LatticeAutomorphism(rows)

    def is_identity(self) -> bool:
        return self == LatticeAutomorphism.identity(self.rank)


def _minor(m, i, j):
    return [[row[jj] for jj in range(len(row)) if jj != j] for ii, row in enumerate(m) if ii != i]


def _int_det(m) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return sum(((-1) ** j) * m[0][j] * _int_det(_minor(m, 0, j)) for j in range(n) if m[0][j])


def complete_to_unimodular(gamma: Vec) -> tuple[LatticeAutomorphism, int]:
    """Unimodular U with U*gamma = m*e1, m the content of gamma.

    Built by an extended-gcd cascade on the coordinates (the row-operation
    form of the Hermite normal form of a single column).
    """
    if is_zero_vec(gamma):
        raise ZeroVector("cannot complete the zero vector")
    n = len(gamma)
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    a = list(gamma)
    for i in range(1, n):
        if a[i] == 0:
            continue
        g, s, t = _xgcd(a[0], a[i])
        q0, qi = a[0] // g, a[i] // g
        r0 = [s * rows[0][j] + t * rows[i][j] for j in range(n)]
        ri = [-qi * rows[0][j] + q0 * rows[i][j] for j in range(n)]
        rows[0], rows[i] = r0, ri
        a[0], a[i] = g, 0
    if a[0] < 0:
        rows[0] = [-x for x in rows[0]]
        a[0] = -a[0]
    return LatticeAutomorphism.from_rows(rows), a[0]


# ---------------------------------------------------------------------------
# term-order helpers (graded-lex; canonical everywhere for determinism)


def grlex_key(exp: Vec):
    return (sum(exp), exp)


def sorted_terms(terms: dict) -> list:
    return sorted(terms.items(), key=lambda kv: grlex_key(kv[0]))


# ---------------------------------------------------------------------------
# Laurent polynomials: the group ring of the lattice


class LaurentPolynomial:
    """Sparse Laurent polynomial with integer coefficients.

    Terms map exponent vectors (arbitrary integers) to nonzero ints.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: dict[Vec, int] | None = None):
        self.rank = rank
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if len(e) != rank:
                    raise RankMismatch("exponent length differs from rank")
                if c:
                    self.terms[tuple(e)] = c

    @staticmethod
    def zero(rank: int) -> "LaurentPolynomial":
        return LaurentPolynomial(rank)

    @staticmethod
    def one(rank: int) -> "LaurentPolynomial":
        return LaurentPolynomial(rank, {(0,) * rank: 1})

    @staticmethod
    def exp(lam: Vec, coeff: int = 1) -> "LaurentPolynomial":
        """The monomial coeff * e^lam."""
        return LaurentPolynomial(len(lam), {tuple(lam): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def constant_coefficient(self) -> int:
        return self.terms.get((0,) * self.rank, 0)

    def augmentation(self) -> int:
        """Image under e^lam -> 1 (sum of coefficients)."""
        return sum(self.terms.values())

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.rank != self.rank:
                raise RankMismatch("rank mismatch")
            return other
        if isinstance(other, int):
            return LaurentPolynomial(self.rank, {(0,) * self.rank: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPolynomial(self.rank, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.rank, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPolynomial.zero(self.rank)
            return LaurentPolynomial(self.rank, {e: other * c for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Vec, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = vec_add(e1, e2)
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return LaurentPolynomial(self.rank, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        result = LaurentPolynomial.one(self.rank)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial(self.rank, {(0,) * self.rank: other})
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __hash__(self):
        return hash((self.rank, tuple(sorted_terms(self.terms))))

    def min_exponents(self) -> Vec:
        """Componentwise minimum over the support (zero vector if empty)."""
        if not self.terms:
            return (0,) * self.rank
        return tuple(min(e[i] for e in self.terms) for i in range(self.rank))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = [f"{c}*e{list(e)}" for e, c in sorted_terms(self.terms)]
        return " + ".join(bits)


def x_laurent(lam: Vec) -> LaurentPolynomial:
    """x(lam) = 1 - e^(-lam)."""
    n = len(lam)
    return LaurentPolynomial(n, {(0,) * n: 1}) - LaurentPolynomial.exp(vec_neg(lam))


# ---------------------------------------------------------------------------
# graded polynomials: the symmetric algebra


class GradedPolynomial:
    """Sparse polynomial with nonnegative exponents; int or Fraction coefficients."""

    __slots__ = ("rank", "terms", "rational")

    def __init__(self, rank: int, terms=None, rational: bool = False):
        self.rank = rank
        self.rational = rational
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if len(e) != rank:
                    raise RankMismatch("exponent length differs from rank")
                if any(x < 0 for x in e):
                    raise ValueError("graded polynomial with negative exponent")
                if isinstance(c, Fraction) and not rational:
                    raise ValueError("Fraction coefficient in integer-domain polynomial")
                if c:
                    self.terms[tuple(e)] = Fraction(c) if rational else c

    @staticmethod
    def zero(rank: int, rational: bool = False) -> "GradedPolynomial":
        return GradedPolynomial(rank, rational=rational)

    @staticmethod
    def one(rank: int, rational: bool = False) -> "GradedPolynomial":
        c = Fraction(1) if rational else 1
        return GradedPolynomial(rank, {(0,) * rank: c}, rational)

    @staticmethod
    def linear(lam: Vec, rational: bool = False) -> "GradedPolynomial":
        """The vector lam as a degree-1 form."""
        n = len(lam)
        terms = {}
        for i, c in enumerate(lam):
            if c:
                e = tuple(int(i == j) for j in range(n))
                terms[e] = Fraction(c) if rational else c
        return GradedPolynomial(n, terms, rational)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_coefficient(self):
        return self.terms.get((0,) * self.rank, Fraction(0) if self.rational else 0)

    def augmentation(self):
        """Image under lam -> 0 (the constant term)."""
        return self.constant_coefficient()

    def to_rational(self) -> "GradedPolynomial":
        if self.rational:
            return self
        return GradedPolynomial(self.rank, {e: Fraction(c) for e, c in self.terms.items()}, True)

    def max_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def homogeneous(self, d: int) -> "GradedPolynomial":
        return GradedPolynomial(
            self.rank, {e: c for e, c in self.terms.items() if sum(e) == d}, self.rational
        )

    def truncate(self, bound: int) -> "GradedPolynomial":
        return GradedPolynomial(
            self.rank, {e: c for e, c in self.terms.items() if sum(e) <= bound}, self.rational
        )

    def _coerce(self, other):
        if isinstance(other, GradedPolynomial):
            if other.rank != self.rank:
                raise RankMismatch("rank mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            rational = self.rational or isinstance(other, Fraction)
            return GradedPolynomial(self.rank, {(0,) * self.rank: other}, rational)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        rational = self.rational or other.rational
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return GradedPolynomial(self.rank, out, rational)

    __radd__ = __add__

    def __neg__(self):
        return GradedPolynomial(self.rank, {e: -c for e, c in self.terms.items()}, self.rational)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return GradedPolynomial.zero(self.rank, self.rational or isinstance(other, Fraction))
            rational = self.rational or isinstance(other, Fraction)
            return GradedPolynomial(
                self.rank, {e: c * other for e, c in self.terms.items()}, rational
            )
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        rational = self.rational or other.rational
        out: dict[Vec, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = vec_add(e1, e2)
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return GradedPolynomial(self.rank, out, rational)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        result = GradedPolynomial.one(self.rank, self.rational)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = GradedPolynomial(
                self.rank, {(0,) * self.rank: other}, self.rational or isinstance(other, Fraction)
            )
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        if self.rank != other.rank or len(self.terms) != len(other.terms):
            return False
        return all(other.terms.get(e) == c for e, c in self.terms.items())

    def __hash__(self):
        return hash((self.rank, tuple(sorted_terms(self.terms))))

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = [f"{c}*m{list(e)}" for e, c in sorted_terms(self.terms)]
        return " + ".join(bits)


class TruncatedSeries:
    """Rational graded polynomial with all terms above ``bound`` discarded."""

    __slots__ = ("poly", "bound")

    def __init__(self, poly: GradedPolynomial, bound: int):
        if bound < 0:
            raise ValueError("negative truncation bound")
        self.bound = bound
        self.poly = poly.to_rational().truncate(bound)

    @property
    def rank(self) -> int:
        return self.poly.rank

    @staticmethod
    def zero(rank: int, bound: int) -> "TruncatedSeries":
        return TruncatedSeries(GradedPolynomial.zero(rank, True), bound)

    @staticmethod
    def one(rank: int, bound: int) -> "TruncatedSeries":
        return TruncatedSeries(GradedPolynomial.one(rank, True), bound)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def constant_coefficient(self) -> Fraction:
        return self.poly.constant_coefficient()

    def homogeneous(self, d: int) -> GradedPolynomial:
        return self.poly.homogeneous(d)

    def truncate(self, bound: int) -> "TruncatedSeries":
        return TruncatedSeries(self.poly, min(bound, self.bound))

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            if other.rank != self.rank:
                raise RankMismatch("rank mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(
                GradedPolynomial(self.rank, {(0,) * self.rank: Fraction(other)}, True), self.bound
            )
        if isinstance(other, GradedPolynomial):
            return TruncatedSeries(other, self.bound)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return TruncatedSeries(self.poly + other.poly, min(self.bound, other.bound))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.poly, self.bound)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.poly * Fraction(other), self.bound)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return TruncatedSeries(self.poly * other.poly, min(self.bound, other.bound))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = TruncatedSeries.one(self.rank, self.bound)
        base = self
        if k < 0:
            raise ValueError("negative powers are not defined")
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.poly == Fraction(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.bound == other.bound and self.poly == other.poly

    def __hash__(self):
        return hash((self.bound, self.poly))

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        c0 = self.poly.constant_coefficient()
        if c0 == 0:
            raise NotDivisible("series with zero constant term has no inverse")
        inv0 = Fraction(1) / c0
        comps = {0: GradedPolynomial(self.rank, {(0,) * self.rank: inv0}, True)}
        a = [self.poly.homogeneous(d) for d in range(self.bound + 1)]
        for d in range(1, self.bound + 1):
            acc = GradedPolynomial.zero(self.rank, True)
            for j in range(1, d + 1):
                if not a[j].is_zero():
                    acc = acc + a[j] * comps[d - j]
            comps[d] = acc * (-inv0)
        total = GradedPolynomial.zero(self.rank, True)
        for comp in comps.values():
            total = total + comp
        return TruncatedSeries(total, self.bound)

    def __repr__(self):
        return f"({self.poly!r} ; <= {self.bound})"


# ---------------------------------------------------------------------------
# automorphism action


def apply_automorphism(phi: LatticeAutomorphism, z):
    """Induced ring map: e^lam -> e^(phi lam) and lam -> phi(lam)."""
    if isinstance(z, LaurentPolynomial):
        if phi.rank != z.rank:
            raise RankMismatch("rank mismatch")
        out: dict[Vec, int] = {}
        for e, c in z.terms.items():
            img = phi.apply(e)
            out[img] = out.get(img, 0) + c
        return LaurentPolynomial(z.rank, out)
    if isinstance(z, GradedPolynomial):
        if phi.rank != z.rank:
            raise RankMismatch("rank mismatch")
        n = z.rank
        images = [
            GradedPolynomial.linear(tuple(phi.matrix[i][j] for i in range(n)), z.rational)
            for j in range(n)
        ]
        result = GradedPolynomial.zero(n, z.rational)
        for e, c in z.terms.items():
            term = GradedPolynomial(n, {(0,) * n: c}, z.rational)
            for j, k in enumerate(e):
                if k:
                    term = term * images[j] ** k
            result = result + term
        return result
    if isinstance(z, TruncatedSeries):
        return TruncatedSeries(apply_automorphism(phi, z.poly), z.bound)
    raise TypeError(f"cannot apply automorphism to {type(z).__name__}")


# ---------------------------------------------------------------------------
# exact division


def exact_divide_laurent(z: LaurentPolynomial, gamma: Vec) -> LaurentPolynomial:
    """Exact quotient of z by x(gamma) = 1 - e^(-gamma).

    Change basis so gamma becomes m*e1, divide by (1 - t1^-m) as a
    univariate polynomial over the remaining Laurent variables, change
    back.  Raises NotDivisible (with the remainder) when x(gamma) does
    not divide z.
    """
    if is_zero_vec(gamma):
        raise ZeroVector("division by x(0)")
    if len(gamma) != z.rank:
        raise RankMismatch("rank mismatch")
    if z.is_zero():
        return z
    u, m = complete_to_unimodular(gamma)
    w = apply_automorphism(u, z)
    rows: dict[int, dict[Vec, int]] = {}
    for e, c in w.terms.items():
        rows.setdefault(e[0], {})[e[1:]] = c
    lo, hi = min(rows), max(rows)
    qrows: dict[int, dict[Vec, int]] = {}
    for k in range(hi, lo + m - 1, -1):
        row = dict(rows.get(k, {}))
        for e, c in qrows.get(k + m, {}).items():
            s = row.get(e, 0) + c
            if s:
                row[e] = s
            else:
                row.pop(e, None)
        if row:
            qrows[k] = row
    qterms = {(k, *e): c for k, row in qrows.items() for e, c in row.items()}
    q = LaurentPolynomial(z.rank, qterms)
    divisor = LaurentPolynomial(
        z.rank, {(0,) * z.rank: 1, (-m,) + (0,) * (z.rank - 1): -1}
    )
    remainder = w - q * divisor
    uinv = u.inverse()
    if not remainder.is_zero():
        raise NotDivisible(
            f"x({list(gamma)}) does not divide exactly",
            remainder=apply_automorphism(uinv, remainder),
        )
    return apply_automorphism(uinv, q)


def _lead(terms: dict) -> Vec:
    return max(terms, key=grlex_key)


def _poly_divide(num: dict, den: dict, rational: bool) -> tuple[dict, dict]:
    """Greedy single-divisor division on nonnegative-exponent term dicts.

    Returns (quotient, remainder); the remainder collects every leading
    term that the divisor's leading term cannot absorb.
    """
    lt_d = _lead(den)
    lc_d = den[lt_d]
    work = dict(num)
    quot: dict[Vec, object] = {}
    rem: dict[Vec, object] = {}
    while work:
        lt = _lead(work)
        c = work.pop(lt)
        e = vec_sub(lt, lt_d)
        if any(x < 0 for x in e):
            rem[lt] = c
            continue
        if rational:
            cq = Fraction(c) / Fraction(lc_d)
        else:
            cq, r = divmod(c, lc_d)
            if r != 0:
                rem[lt] = c
                continue
        quot[e] = quot.get(e, 0) + cq
        for ed, cd in den.items():
            if ed == lt_d:
                continue
            key = vec_add(e, ed)
            s = work.get(key, 0) - cq * cd
            if s:
                work[key] = s
            else:
                work.pop(key, None)
    return quot, rem


def exact_divide_general(num, den):
    """Exact quotient num/den for two Laurent or two graded polynomials.

    Independent of the basis-change route: plain leading-term elimination
    under the graded-lex order (Laurent inputs are first shifted into the
    polynomial range).
    """
    if isinstance(num, LaurentPolynomial) and isinstance(den, LaurentPolynomial):
        if den.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if num.is_zero():
            return num
        mn, md = num.min_exponents(), den.min_exponents()
        nshift = {vec_sub(e, mn): c for e, c in num.terms.items()}
        dshift = {vec_sub(e, md): c for e, c in den.terms.items()}
        quot, rem = _poly_divide(nshift, dshift, rational=False)
        if rem:
            raise NotDivisible(
                "general Laurent division has a remainder",
                remainder=LaurentPolynomial(num.rank, {vec_add(e, mn): c for e, c in rem.items()}),
            )
        shift = vec_sub(mn, md)
        return LaurentPolynomial(num.rank, {vec_add(e, shift): c for e, c in quot.items()})
    if isinstance(num, GradedPolynomial) and isinstance(den, GradedPolynomial):
        if den.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if num.is_zero():
            return num
        rational = num.rational or den.rational
        quot, rem = _poly_divide(dict(num.terms), dict(den.terms), rational)
        if rem:
            raise NotDivisible(
                "polynomial division has a remainder",
                remainder=GradedPolynomial(num.rank, rem, rational),
            )
        return GradedPolynomial(num.rank, quot, rational)
    raise TypeError("mixed or unsupported operand types")


def exact_divide_linear(p, gamma: Vec):
    """Exact quotient of p by the degree-1 form gamma.

    For a GradedPolynomial the identity q*gamma == p holds exactly; for a
    TruncatedSeries with bound D it holds through degree D and q carries
    bound D-1.
    """
    if is_zero_vec(gamma):
        raise ZeroVector("division by the zero form")
    if isinstance(p, TruncatedSeries):
        if len(gamma) != p.rank:
            raise RankMismatch("rank mismatch")
        if p.bound == 0:
            if p.poly.constant_coefficient() != 0:
                raise NotDivisible("nonzero constant term", remainder=p.poly)
            raise ValueError("cannot divide a bound-0 series: no degrees remain")
        q = _divide_linear_graded(p.poly, gamma, upto=p.bound)
        return TruncatedSeries(q, p.bound - 1)
    if isinstance(p, GradedPolynomial):
        if len(gamma) != p.rank:
            raise RankMismatch("rank mismatch")
        return _divide_linear_graded(p, gamma, upto=None)
    raise TypeError(f"cannot divide {type(p).__name__} by a linear form")


def _divide_linear_graded(p: GradedPolynomial, gamma: Vec, upto):
    form_terms = GradedPolynomial.linear(gamma, p.rational).terms
    c0 = p.constant_coefficient()
    if c0 != 0:
        raise NotDivisible(
            "nonzero constant term", remainder=GradedPolynomial(p.rank, {(0,) * p.rank: c0}, p.rational)
        )
    top = p.max_degree() if upto is None else upto
    out: dict[Vec, object] = {}
    bad: dict[Vec, object] = {}
    for d in range(1, top + 1):
        comp = p.homogeneous(d)
        if comp.is_zero():
            continue
        quot, rem = _poly_divide(dict(comp.terms), form_terms, p.rational)
        bad.update(rem)
        out.update(quot)
    if bad:
        raise NotDivisible(
            "linear form does not divide exactly",
            remainder=GradedPolynomial(p.rank, bad, p.rational),
        )
    return GradedPolynomial(p.rank, out, p.rational)


# ---------------------------------------------------------------------------
# exponential and Todd series


def truncated_exp(lam: Vec, bound: int) -> TruncatedSeries:
    """exp(lam) = sum_j lam^j / j! through total degree ``bound``."""
    if bound < 0:
        raise ValueError("negative truncation bound")
    n = len(lam)
    form = GradedPolynomial.linear(lam, rational=True)
    total = GradedPolynomial.one(n, rational=True)
    power = GradedPolynomial.one(n, rational=True)
    fact = 1
    for j in range(1, bound + 1):
        power = power * form
        fact *= j
        if power.is_zero():
            break
        total = total + power * Fraction(1, fact)
    return TruncatedSeries(total, bound)


def todd_series(lam: Vec, bound: int) -> TruncatedSeries:
    """Q(lam) = lam / (1 - exp(-lam)) through total degree ``bound``.

    Computed by inverting (1 - exp(-lam))/lam = sum_j (-1)^j lam^j/(j+1)!,
    whose constant term is 1.
    """
    if is_zero_vec(lam):
        raise ZeroVector("Todd series of the zero vector")
    if bound < 0:
        raise ValueError("negative truncation bound")
    n = len(lam)
    form = GradedPolynomial.linear(lam, rational=True)
    total = GradedPolynomial.one(n, rational=True)
    power = GradedPolynomial.one(n, rational=True)
    fact = 1
    for j in range(1, bound + 1):
        power = power * form
        fact *= j + 1
        total = total + power * Fraction((-1) ** j, fact)
    return TruncatedSeries(total, bound).inverse()
