"""Polyhedral cones in the coefficient space of quadratic forms.

Cones are ``{y : <a_i, y> >= 0}`` in the coordinates of a :class:`CoordMap`.
Extreme rays are computed with the double description method: rows are
inserted in lexicographic order and ray adjacency is decided by the
combinatorial test on tight sets (see :mod:`perfectforms._kernels`).
Everything is exact; rays and normals are primitive integer vectors.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from operator import mul

from . import _kernels, linalg
from .errors import ConeBudgetExceeded, FormatError, NoHRep, NotInT, NotPointed
from .forms import QuadForm

DEFAULT_RAY_BUDGET = 100_000


class CoordMap:
    """Coordinates on a subspace of symmetric matrices given by a basis.

    The full-space chart uses ``E_ii`` and ``E_ij + E_ji`` (``i < j``) in
    row-major upper-triangular order, so the coordinates of ``Q`` are its upper
    triangular entries and ``<Q, x x^t>`` has coefficient 1 on diagonal and 2
    on off-diagonal coordinates.
    """

    def __init__(self, d, basis, full=False):
        self.d = d
        self.basis = tuple(basis)
        self.full = full
        self._pos = [(i, j) for i in range(d) for j in range(i, d)]
        if not full:
            mat = [[b[i, j] for (i, j) in self._pos] for b in self.basis]
            # pivot columns = entry positions on which the basis is invertible
            _, pivots = linalg.rref(mat, len(self._pos))
            if len(pivots) != len(self.basis):
                raise ValueError("chart basis is linearly dependent")
            self._pivot_pos = [self._pos[k] for k in pivots]
            block = [[b[i, j] for (i, j) in self._pivot_pos] for b in self.basis]
            self._block_inv = linalg.inverse(block)

    @classmethod
    def full_space(cls, d):
        basis = []
        for i in range(d):
            for j in range(i, d):
                m = [[0] * d for _ in range(d)]
                m[i][j] = m[j][i] = 1
                basis.append(QuadForm.from_int(m))
        return cls(d, basis, full=True)

    @property
    def n(self):
        return len(self.basis)

    def normal(self, x):
        """Coordinates of the linear functional ``Q' -> Q'[x]``."""
        if self.full:
            d = self.d
            return tuple(x[i] * x[j] * (1 if i == j else 2) for i in range(d) for j in range(i, d))
        return tuple(Fraction(b.value_num(x), b.den) for b in self.basis)

    def to_coords(self, q):
        if self.full:
            return tuple(q[i, j] for (i, j) in self._pos)
        vals = [q[i, j] for (i, j) in self._pivot_pos]
        c = tuple(sum(v * self._block_inv[k][m] for k, v in enumerate(vals))
                  for m in range(self.n))
        if self.from_coords(c) != q:
            raise NotInT("form is not in the span of the chart")
        return c

    def contains(self, q):
        try:
            self.to_coords(q)
        except NotInT:
            return False
        return True

    def from_coords(self, c):
        d = self.d
        if self.full:
            m = [[Fraction(0)] * d for _ in range(d)]
            for v, (i, j) in zip(c, self._pos):
                m[i][j] = m[j][i] = Fraction(v)
            return QuadForm(m)
        c = [Fraction(v) for v in c]
        # common denominator over coefficients and basis entries
        den = 1
        for v, b in zip(c, self.basis):
            if v:
                den = lcm(den, v.denominator * b.den)
        m = [[0] * d for _ in range(d)]
        for v, b in zip(c, self.basis):
            if v:
                f = v * den / b.den
                f = f.numerator  # integral by the choice of den
                for i, row in enumerate(b.num):
                    mi = m[i]
                    for j, x in enumerate(row):
                        if x:
                            mi[j] += f * x
        return QuadForm.from_int(m, den)

    def action_matrix(self, u):
        """Integer matrix ``A`` and ``D > 0`` with ``coords(U^t Q U) = A coords(Q) / D``."""
        cols = [self.to_coords(b.transform(u)) for b in self.basis]
        den = 1
        for col in cols:
            for v in col:
                den = lcm(den, Fraction(v).denominator)
        n = self.n
        return [[int(Fraction(cols[m][k]) * den) for m in range(n)] for k in range(n)], den


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone with optional H- and V-descriptions.

    ``h_rep`` rows ``a`` mean ``<a, y> >= 0``; ``v_rep`` are generating rays;
    ``lineality`` is a basis of the largest linear subspace in the cone.
    """

    ambient_dim: int
    h_rep: tuple = None
    v_rep: tuple = None
    lineality: tuple = field(default=())

    @property
    def is_pointed(self):
        return len(self.lineality) == 0


def _canonical_rows(rows):
    return tuple(sorted({linalg.primitive(r) for r in rows if any(r)}))


def make_cone(n, rows):
    """Cone from inequality normals; duplicates and zero rows are dropped."""
    h = _canonical_rows(rows)
    return Cone(n, h, None, tuple(linalg.nullspace(list(h), n)))


def support_cone(min_data, chart):
    """``{Q' : Q'[x] >= 0 for all x in Min Q}`` in chart coordinates."""
    return make_cone(chart.n, [chart.normal(x) for x in min_data.vectors])


def lineality_space(cone):
    if cone.h_rep is None:
        raise NoHRep("lineality needs an H-description")
    return list(linalg.nullspace(list(cone.h_rep), cone.ambient_dim))


def _dot(a, b):
    return sum(map(mul, a, b))


def _initial_basis(rows, n):
    """Indices of the first ``n`` linearly independent rows (greedy, in order)."""
    chosen = []
    echelon = []  # (pivot column, normalized row) pairs
    for idx, r in enumerate(rows):
        v = [Fraction(x) for x in r]
        for col, er in echelon:
            if v[col]:
                f = v[col]
                v = [a - f * b for a, b in zip(v, er)]
        col = next((c for c in range(n) if v[c]), None)
        if col is None:
            continue
        inv = 1 / v[col]
        echelon.append((col, [a * inv for a in v]))
        chosen.append(idx)
        if len(chosen) == n:
            break
    return chosen


def double_description(rows, n, ray_budget=DEFAULT_RAY_BUDGET, backend=None):
    """Extreme rays of the pointed cone ``{y : rows @ y >= 0}``.

    ``rows`` must be integer vectors of rank ``n``. Returns rays as primitive
    integer tuples in lexicographic order.
    """
    rows = [tuple(int(v) for v in r) for r in rows]
    m = len(rows)
    basis = _initial_basis(rows, n)
    if len(basis) < n:
        raise NotPointed("constraint matrix does not have full rank")
    inv = linalg.inverse([rows[i] for i in basis])
    rays = []
    tight = []
    full_mask = 0
    for i in basis:
        full_mask |= 1 << i
    for k in range(n):
        col = [inv[r][k] for r in range(n)]
        rays.append(linalg.primitive(col))
        tight.append(full_mask & ~(1 << basis[k]))
    in_basis = set(basis)
    for ri in range(m):
        if ri in in_basis:
            continue
        a = rows[ri]
        bit = 1 << ri
        s = [_dot(a, r) for r in rays]
        pos = [k for k, v in enumerate(s) if v > 0]
        neg = [k for k, v in enumerate(s) if v < 0]
        zero = [k for k, v in enumerate(s) if v == 0]
        if not neg:
            for k in zero:
                tight[k] |= bit
            continue
        new_rays, new_tight = [], []
        if pos:
            packed = _kernels.pack_bits(tight, m)
            pairs = _kernels.adjacent_pairs(packed, pos, neg, n - 2, backend=backend)
            for p, q in pairs:
                p, q = int(p), int(q)
                sp, sq = s[p], s[q]
                r = linalg.primitive_int([sp * y - sq * x for x, y in zip(rays[p], rays[q])])
                new_rays.append(r)
                new_tight.append((tight[p] & tight[q]) | bit)
        keep = pos + zero
        rays = [rays[k] for k in keep] + new_rays
        tight = [tight[k] | (bit if s[k] == 0 else 0) for k in keep] + new_tight
        if len(rays) > ray_budget:
            raise ConeBudgetExceeded(f"double description exceeded {ray_budget} intermediate rays")
    return sorted(rays)


def extreme_rays(cone, ray_budget=DEFAULT_RAY_BUDGET, backend=None):
    """Complete, irredundant, sorted list of extreme rays of a pointed cone."""
    if cone.h_rep is None:
        raise NoHRep("extreme rays need an H-description")
    if cone.lineality:
        raise NotPointed(f"cone has a {len(cone.lineality)}-dimensional lineality space")
    if cone.ambient_dim == 0:
        return []
    return double_description(cone.h_rep, cone.ambient_dim, ray_budget, backend)


def facet_description(rays, n, ray_budget=DEFAULT_RAY_BUDGET):
    """Irredundant H-description of ``cone(rays)`` in an ``n``-dimensional space.

    When the rays do not span the space the implicit equalities ``<l, y> = 0``
    appear as the pair of rows ``l`` and ``-l``.
    """
    rays = [linalg.primitive(r) for r in rays if any(r)]
    if not rays:
        eq = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        rows = eq + [tuple(-v for v in e) for e in eq]
        return Cone(n, tuple(sorted(rows)), (), ())
    eqs = linalg.nullspace(rays, n) if linalg.rank(rays, n) < n else []
    # parametrise span(rays) by an independent subset of the rays
    span = [rays[i] for i in _initial_basis(rays, n)]
    k = len(span)
    # dual cone inside span: c with <sum c_j b_j, r> >= 0 for every ray r
    gram_rows = [tuple(_dot(b, r) for b in span) for r in rays]
    gram_rows = list(_canonical_rows(gram_rows))
    if k == 1:
        dual = [(1,)] if all(g[0] > 0 for g in gram_rows) else []
    else:
        dual = double_description(gram_rows, k, ray_budget)
    facets = set()
    for c in dual:
        a = [sum(cj * b[i] for cj, b in zip(c, span)) for i in range(n)]
        facets.add(linalg.primitive(a))
    rows = sorted(facets) + sorted(set(eqs) | {tuple(-v for v in e) for e in eqs})
    return Cone(n, tuple(rows), tuple(sorted(rays_extreme(rays, n))), ())


def rays_extreme(rays, n):
    """Drop generators that are not extreme (exact, via facet incidence)."""
    rays = sorted(set(linalg.primitive(r) for r in rays if any(r)))
    if len(rays) <= 1:
        return rays
    out = []
    for i, r in enumerate(rays):
        others = rays[:i] + rays[i + 1:]
        if not _in_cone(r, others):
            out.append(r)
    return out


def _in_cone(v, gens):
    """Exact test ``v in cone(gens)`` via a small LP."""
    from .simplex import feasible_nonnegative

    if not gens:
        return not any(v)
    cols = [list(g) for g in gens]
    rows = linalg.transpose(cols)
    return feasible_nonnegative(rows, list(v))


def contains(cone, y, strict=False):
    """Whether ``y`` satisfies every row (strictly for ``strict``)."""
    for a in cone.h_rep:
        v = _dot(a, y)
        if v < 0 or (strict and v == 0):
            return False
    return True


# -- debug dump format --------------------------------------------------------

def dump_cone(cone):
    """Text dump: ``n m`` followed by ``m`` inequality rows of ``n`` rationals."""
    rows = cone.h_rep or ()
    lines = [f"{cone.ambient_dim} {len(rows)}"]
    lines += [" ".join(str(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def load_cone(text):
    tokens = text.split()
    try:
        n, m = int(tokens[0]), int(tokens[1])
        vals = [Fraction(t) for t in tokens[2:]]
    except (IndexError, ValueError) as exc:
        raise FormatError(f"bad cone dump: {exc}") from exc
    if len(vals) != n * m:
        raise FormatError(f"expected {n * m} numbers, got {len(vals)}")
    return make_cone(n, [vals[i * n:(i + 1) * n] for i in range(m)])
