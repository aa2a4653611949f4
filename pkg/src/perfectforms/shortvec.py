"""Short vector enumeration (Fincke-Pohst) and the arithmetical minimum.

The enumeration runs entirely in integer arithmetic. With the Lagrange
expansion ``Q[x] = sum A_i (x_i - sum_{j>i} alpha_ij x_j)^2`` we put all
``A_i`` over a common denominator ``e`` and all ``alpha_ij`` over a common
denominator ``D``, so that with ``y_i = D x_i - sum (D alpha_ij) x_j``

    den * e * D^2 * Q[x] = sum a_i y_i^2        (a_i = e * A_i, integers)

and the coordinate bounds become ``a_i y_i^2 <= remaining budget`` which is
decided with :func:`math.isqrt`. No square roots, no floating point.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

from .errors import NonpositiveBound, NotPositiveDefinite
from .forms import QuadForm, is_positive_definite, lagrange_expansion, lll_reduce


@dataclass(frozen=True)
class MinData:
    """Arithmetical minimum and one representative per antipodal pair of Min Q."""

    min_value: Fraction
    vectors: tuple

    @property
    def pairs(self):
        return len(self.vectors)

    def vector_set(self):
        return frozenset(self.vectors)


def canonical_sign(x):
    """Flip ``x`` so that its first nonzero coordinate is positive."""
    for v in x:
        if v > 0:
            return tuple(x)
        if v < 0:
            return tuple(-c for c in x)
    return tuple(x)


class _Enumerator:
    """Integer data of the Lagrange expansion of one form."""

    def __init__(self, q):
        if not is_positive_definite(q):
            raise NotPositiveDefinite("short vector enumeration needs a positive definite form")
        self.d = d = q.dim
        self.den = q.den
        # enumerate on an LLL-reduced basis and map the vectors back
        red, basis = lll_reduce(q)
        ident = all(basis[i][j] == (i == j) for i in range(d) for j in range(d))
        self.basis = None if ident else basis
        self.reduced_diag_min = min(red.diagonal())
        lag = lagrange_expansion(QuadForm.from_int(red.num))
        e = 1
        for a in lag.outer:
            e = lcm(e, a.denominator)
        D = 1
        for row in lag.inner:
            for v in row:
                D = lcm(D, v.denominator)
        self.e, self.D = e, D
        self.a = [int(a * e) for a in lag.outer]
        self.beta = [[(j, int(lag.inner[i][j] * D)) for j in range(i + 1, d) if lag.inner[i][j]]
                     for i in range(d)]
        # den * Q[x] = total / scale
        self.scale = e * D * D

    def budget(self, c):
        """Largest integer total compatible with ``Q[x] <= c``."""
        k = Fraction(c) * self.den * self.scale
        return k.numerator // k.denominator

    def run(self, limit, shrink=False):
        """All ``(x, total)`` with ``total <= limit``; one vector per +-pair.

        With ``shrink`` the limit drops to the best total found so far and
        only vectors attaining the final limit are returned.
        """
        d, a, beta, D = self.d, self.a, self.beta, self.D
        x = [0] * d
        out = []
        state = [limit]

        def rec(i, used, top_zero):
            s = 0
            for j, b in beta[i]:
                s += b * x[j]
            rem = state[0] - used
            if rem < 0:
                return
            r = isqrt(rem // a[i])
            lo = -((r - s) // D)
            hi = (s + r) // D
            if top_zero and lo < 0:
                lo = 0
            for t in range(lo, hi + 1):
                y = D * t - s
                cost = used + a[i] * y * y
                if cost > state[0]:
                    continue
                x[i] = t
                zero_here = top_zero and t == 0
                if i == 0:
                    if zero_here:
                        continue
                    if shrink and cost < state[0]:
                        state[0] = cost
                        out.clear()
                    out.append((tuple(x), cost))
                else:
                    rec(i - 1, cost, zero_here)
            x[i] = 0

        rec(d - 1, 0, True)
        if shrink:
            out = [(v, c) for v, c in out if c == state[0]]
        if self.basis is not None:
            bm = self.basis
            out = [(tuple(sum(r[j] * v[j] for j in range(d)) for r in bm), c) for v, c in out]
        return out

    def value(self, total):
        return Fraction(total, self.den * self.scale)


def vectors_below(q, c):
    """All nonzero ``x`` with ``Q[x] <= c``, one per antipodal pair, sorted."""
    c = Fraction(c)
    if c <= 0:
        raise NonpositiveBound(f"bound must be positive, got {c}")
    en = _Enumerator(q)
    found = en.run(en.budget(c))
    return sorted(canonical_sign(v) for v, _ in found)


def vectors_below_with_values(q, c):
    """Like :func:`vectors_below` but yields ``(x, Q[x])`` pairs."""
    c = Fraction(c)
    if c <= 0:
        raise NonpositiveBound(f"bound must be positive, got {c}")
    en = _Enumerator(q)
    found = en.run(en.budget(c))
    return sorted((canonical_sign(v), en.value(t)) for v, t in found)


def minimum(q):
    """Certified arithmetical minimum and minimal vectors.

    The search starts from the smallest diagonal entry of the reduced form
    (some basis vector attains it) and tightens the bound whenever a shorter
    vector turns up.
    """
    en = _Enumerator(q)
    c = en.reduced_diag_min
    found = en.run(en.budget(c), shrink=True)
    vecs = tuple(sorted(canonical_sign(v) for v, _ in found))
    return MinData(en.value(found[0][1]), vecs)


def arithmetical_minimum(q):
    return minimum(q).min_value
