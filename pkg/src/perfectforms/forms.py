"""Quadratic forms with exact rational entries.

A :class:`QuadForm` stores its Gram matrix as an integer matrix ``num`` over a
single positive denominator ``den``; ``Q = num / den``. All arithmetic that
decides anything is exact. Floating point only appears in
:func:`packing_density`, which is for display.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import mpmath

from . import linalg
from .errors import DimensionMismatch, NotPositiveDefinite, NotSymmetric, FormatError


class QuadForm:
    """Immutable symmetric ``d x d`` matrix with rational entries."""

    __slots__ = ("_num", "_den", "_hash")

    def __init__(self, entries):
        rows = [[Fraction(v) for v in row] for row in entries]
        d = len(rows)
        if d < 1 or any(len(r) != d for r in rows):
            raise DimensionMismatch("a quadratic form needs a non-empty square matrix")
        for i in range(d):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise NotSymmetric(f"entry ({i},{j}) differs from ({j},{i})")
        den = 1
        for r in rows:
            for v in r:
                den = lcm(den, v.denominator)
        self._set(tuple(tuple(int(v * den) for v in r) for r in rows), den)

    def _set(self, num, den):
        g = den
        for r in num:
            for v in r:
                g = gcd(g, v)
        if g > 1:
            num = tuple(tuple(v // g for v in r) for r in num)
            den //= g
        self._num = num
        self._den = den
        self._hash = None

    @classmethod
    def from_int(cls, num, den=1):
        """Build from an integer matrix and a positive denominator (no checks)."""
        obj = cls.__new__(cls)
        obj._set(tuple(tuple(r) for r in num), den)
        return obj

    @property
    def dim(self):
        return len(self._num)

    @property
    def num(self):
        return self._num

    @property
    def den(self):
        return self._den

    @property
    def entries(self):
        return tuple(tuple(Fraction(v, self._den) for v in r) for r in self._num)

    def __getitem__(self, ij):
        i, j = ij
        return Fraction(self._num[i][j], self._den)

    def diagonal(self):
        return tuple(Fraction(self._num[i][i], self._den) for i in range(self.dim))

    def __eq__(self, other):
        if not isinstance(other, QuadForm):
            return NotImplemented
        return self._den == other._den and self._num == other._num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._num, self._den))
        return self._hash

    def __repr__(self):
        return f"QuadForm({[[str(v) for v in r] for r in self.entries]})"

    def _combine(self, other, sign):
        if self.dim != other.dim:
            raise DimensionMismatch("forms of different dimension")
        den = lcm(self._den, other._den)
        a, b = den // self._den, den // other._den
        num = tuple(tuple(a * x + sign * b * y for x, y in zip(r, s))
                    for r, s in zip(self._num, other._num))
        return QuadForm.from_int(num, den)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return QuadForm.from_int(tuple(tuple(-v for v in r) for r in self._num), self._den)

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return QuadForm.from_int(tuple(tuple(0 for _ in r) for r in self._num), 1)
        num = tuple(tuple(v * c.numerator for v in r) for r in self._num)
        den = self._den * c.denominator
        if den < 0:
            num = tuple(tuple(-v for v in r) for r in num)
            den = -den
        return QuadForm.from_int(num, den)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def transform(self, u):
        """``U^t Q U`` for an integer (or rational) matrix ``U``."""
        d = self.dim
        if len(u) != d:
            raise DimensionMismatch("transformation has wrong size")
        if all(isinstance(v, int) for r in u for v in r):
            qu = [[sum(self._num[i][k] * u[k][j] for k in range(d)) for j in range(d)]
                  for i in range(d)]
            num = tuple(tuple(sum(u[k][i] * qu[k][j] for k in range(d)) for j in range(d))
                        for i in range(d))
            return QuadForm.from_int(num, self._den)
        ut = linalg.transpose(u)
        return QuadForm(linalg.matmul(linalg.matmul(ut, self.entries), u))

    def value_num(self, x):
        """``den * Q[x]`` as an integer (``x`` integral)."""
        n = self._num
        return sum(xi * sum(r[j] * x[j] for j in range(len(x)) if x[j]) for xi, r in zip(x, n) if xi)

    def to_text(self):
        lines = [str(self.dim)]
        for r in self.entries:
            lines.append(" ".join(str(v) for v in r))
        return "\n".join(lines) + "\n"


def identity(d):
    return QuadForm.from_int(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))


def zero(d):
    return QuadForm.from_int(tuple(tuple(0 for _ in range(d)) for _ in range(d)))


def diag(values):
    d = len(values)
    return QuadForm([[values[i] if i == j else 0 for j in range(d)] for i in range(d)])


def outer(x):
    """Rank-one form ``x x^t``."""
    return QuadForm.from_int(tuple(tuple(a * b for b in x) for a in x))


def evaluate(q, x):
    """``x^t Q x`` exactly."""
    if len(x) != q.dim:
        raise DimensionMismatch(f"vector of length {len(x)} for a form of dimension {q.dim}")
    if all(isinstance(v, int) for v in x):
        return Fraction(q.value_num(x), q.den)
    x = [Fraction(v) for v in x]
    e = q.entries
    return sum(x[i] * e[i][j] * x[j] for i in range(q.dim) for j in range(q.dim))


def inner_product(q, p):
    """Trace inner product ``sum_ij q_ij p_ij``."""
    if q.dim != p.dim:
        raise DimensionMismatch("forms of different dimension")
    s = sum(a * b for r, t in zip(q.num, p.num) for a, b in zip(r, t))
    return Fraction(s, q.den * p.den)


def determinant(q):
    return Fraction(linalg.det_int(q.num), q.den ** q.dim)


def leading_minors(q):
    return linalg.bareiss_minors(q.num)


def is_positive_definite(q):
    """Sylvester's criterion on the leading principal minors."""
    return all(m is not None and m > 0 for m in leading_minors(q))


def charpoly(q):
    """Coefficients ``c`` of ``det(tI - Q) = sum c[k] t^(d-k)`` (rational)."""
    c = linalg.charpoly_int(q.num)
    return [Fraction(v, q.den ** k) for k, v in enumerate(c)]


def is_positive_semidefinite(q):
    """True iff every elementary symmetric function of the eigenvalues is >= 0.

    ``e_k = (-1)^k c_k``; the eigenvalues of a real symmetric matrix are real,
    so non-negative ``e_k`` for all ``k`` is equivalent to non-negative
    eigenvalues.
    """
    c = linalg.charpoly_int(q.num)
    return all((-1) ** k * ck >= 0 for k, ck in enumerate(c))


@dataclass(frozen=True)
class LagrangeExpansion:
    """``Q[x] = sum_i outer[i] * (x_i - sum_{j>i} inner[i][j] x_j)^2``.

    ``inner[i]`` is a full-length tuple; entries with ``j <= i`` are zero.
    """

    outer: tuple
    inner: tuple

    def evaluate(self, x):
        d = len(self.outer)
        total = Fraction(0)
        for i in range(d):
            t = x[i] - sum(self.inner[i][j] * x[j] for j in range(i + 1, d))
            total += self.outer[i] * t * t
        return total

    def to_form(self):
        """Rebuild the Gram matrix from the coefficients."""
        d = len(self.outer)
        m = [[Fraction(0)] * d for _ in range(d)]
        for i in range(d):
            # linear form l_i(x) = x_i - sum_j inner_ij x_j
            coeff = [Fraction(0)] * d
            coeff[i] = Fraction(1)
            for j in range(i + 1, d):
                coeff[j] = -self.inner[i][j]
            for a in range(d):
                for b in range(d):
                    m[a][b] += self.outer[i] * coeff[a] * coeff[b]
        return QuadForm(m)


def lagrange_expansion(q):
    if not is_positive_definite(q):
        raise NotPositiveDefinite("Lagrange expansion needs a positive definite form")
    d = q.dim
    m = [list(r) for r in q.entries]
    outer_c = []
    inner_c = []
    for i in range(d):
        a = m[i][i]
        outer_c.append(a)
        row = [Fraction(0)] * d
        for j in range(i + 1, d):
            row[j] = -m[i][j] / a
        inner_c.append(tuple(row))
        for j in range(i + 1, d):
            if m[i][j] == 0:
                continue
            f = m[i][j] / a
            for k in range(i + 1, d):
                m[j][k] -= f * m[i][k]
    return LagrangeExpansion(tuple(outer_c), tuple(inner_c))


def lll_reduce(q, delta=Fraction(3, 4)):
    """LLL-reduced equivalent form: returns ``(R, B)`` with ``R = B^t Q B``.

    Exact rational Gram-Schmidt; ``B`` is unimodular. Only used to speed up
    enumeration, so ``delta`` is the textbook 3/4.
    """
    if not is_positive_definite(q):
        raise NotPositiveDefinite("LLL reduction needs a positive definite form")
    d = q.dim
    g = [list(r) for r in q.num]
    b = [[int(i == j) for j in range(d)] for i in range(d)]  # columns are basis vectors

    def col_op(k, j, r):
        # b_k -= r b_j, applied to the Gram matrix and the basis
        for i in range(d):
            g[k][i] -= r * g[j][i]
        for i in range(d):
            g[i][k] -= r * g[i][j]
        for i in range(d):
            b[i][k] -= r * b[i][j]

    def swap(k):
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]
        for row in b:
            row[k], row[k - 1] = row[k - 1], row[k]

    def gso():
        mu = [[Fraction(0)] * d for _ in range(d)]
        bstar = [Fraction(0)] * d
        for i in range(d):
            for j in range(i):
                mu[i][j] = (g[i][j] - sum(mu[j][t] * mu[i][t] * bstar[t] for t in range(j))) / bstar[j]
            bstar[i] = g[i][i] - sum(mu[i][t] ** 2 * bstar[t] for t in range(i))
        return mu, bstar

    k = 1
    while k < d:
        mu, bstar = gso()
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                col_op(k, j, r)
                mu, bstar = gso()
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            swap(k)
            k = max(k - 1, 1)
    return QuadForm.from_int(g, q.den), tuple(tuple(r) for r in b)


def hermite_invariant_pow(q, minimum):
    """``H(Q)^d = lambda^d / det Q`` as an exact rational."""
    if not is_positive_definite(q):
        raise NotPositiveDefinite("Hermite invariant needs a positive definite form")
    return Fraction(minimum) ** q.dim / determinant(q)


def packing_density(q, minimum, digits=50):
    """Lattice packing density ``(lambda/4)^(d/2) vol(B^d) / sqrt(det Q)``.

    Returned as an ``mpmath.mpf`` computed with ``digits`` significant digits.
    """
    if not is_positive_definite(q):
        raise NotPositiveDefinite("packing density needs a positive definite form")
    d = q.dim
    with mpmath.workdps(digits + 10):
        lam = mpmath.mpf(Fraction(minimum).numerator) / Fraction(minimum).denominator
        dt = determinant(q)
        det_f = mpmath.mpf(dt.numerator) / dt.denominator
        vol = mpmath.pi ** (mpmath.mpf(d) / 2) / mpmath.gamma(mpmath.mpf(d) / 2 + 1)
        return +((lam / 4) ** (mpmath.mpf(d) / 2) * vol / mpmath.sqrt(det_f))


def truncate_decimal(value, places=4):
    """Decimal string of ``value`` truncated (not rounded) to ``places`` digits."""
    with mpmath.workdps(60):
        scaled = mpmath.floor(value * mpmath.mpf(10) ** places)
    s = str(int(scaled)).rjust(places + 1, "0")
    return f"{s[:-places]}.{s[-places:]}" if places else s


# -- text format -------------------------------------------------------------

def parse_form(text):
    """Parse ``d`` followed by ``d`` rows of ``d`` rationals."""
    tokens = text.split()
    if not tokens:
        raise FormatError("empty form text")
    try:
        d = int(tokens[0])
    except ValueError as exc:
        raise FormatError(f"bad dimension {tokens[0]!r}") from exc
    if d < 1 or len(tokens) != 1 + d * d:
        raise FormatError(f"expected {d * d} entries after dimension {d}, got {len(tokens) - 1}")
    try:
        vals = [Fraction(t) for t in tokens[1:]]
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(str(exc)) from exc
    rows = [vals[i * d:(i + 1) * d] for i in range(d)]
    try:
        return QuadForm(rows)
    except NotSymmetric as exc:
        raise FormatError(str(exc)) from exc


def read_form(path):
    with open(path) as fh:
        return parse_form(fh.read())


def write_form(q, path):
    with open(path, "w") as fh:
        fh.write(q.to_text())
