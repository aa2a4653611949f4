"""Linear subspaces T of symmetric matrices and spaces of invariant forms.

A :class:`TSpace` carries a canonical basis (reduced row echelon form of the
upper-triangular coordinates, denominators cleared), the coordinate chart on
T, a positive definite element and optionally the finite unimodular group
whose invariant forms make up T.
"""

from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import comb

from . import linalg
from .cones import CoordMap, lineality_space, support_cone
from .errors import (ClosureBudgetExceeded, DimensionNotMultipleOf4, EmptyPositivePart,
                     FormatError, NoIndefiniteDirection, NotInT, OddDimension)
from .forms import QuadForm, is_positive_definite, is_positive_semidefinite, parse_form
from .isometry import apply, common_automorphisms, group_closure, identity_matrix
from .shortvec import minimum

CLOSURE_BUDGET = 100_000


class TSpace:
    """Subspace of ``S^d`` with a positive definite witness."""

    def __init__(self, d, basis, group=None, witness=None):
        basis = canonical_basis(d, basis)
        if not basis:
            raise EmptyPositivePart("T is the zero space")
        self.d = d
        self.basis = basis
        self.group = tuple(tuple(tuple(r) for r in g) for g in group) if group else None
        self.chart = CoordMap(d, basis)
        if witness is None:
            witness = find_witness(self)
        elif not is_positive_definite(witness):
            raise EmptyPositivePart("witness is not positive definite")
        self.chart.to_coords(witness)  # raises NotInT
        self.witness = witness

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, q):
        return self.chart.contains(q)

    def is_stable(self):
        """Exact check that every generator maps T into itself."""
        if not self.group:
            return True
        return all(self.chart.contains(b.transform(g)) for g in self.group for b in self.basis)

    def pointwise_stabilizer(self):
        return self._stabilizer

    @cached_property
    def _stabilizer(self):
        """All ``U`` with ``U^t B U = B`` for every ``B`` in T (a finite group)."""
        return tuple(common_automorphisms([self.witness] + list(self.basis)))

    def to_text(self):
        lines = [str(self.d), str(self.dim)]
        for b in self.basis:
            # rows only: the file header already gives the dimension
            lines.extend(b.to_text().splitlines()[1:])
        return "\n".join(lines) + "\n"


def canonical_basis(d, forms):
    """RREF basis of ``span(forms)`` with each row scaled to a primitive integer row."""
    pos = [(i, j) for i in range(d) for j in range(i, d)]
    rows = [[f[i, j] for (i, j) in pos] for f in forms]
    r, pivots = linalg.rref(rows, len(pos))
    out = []
    for k in range(len(pivots)):
        prim = linalg.primitive(r[k])
        m = [[0] * d for _ in range(d)]
        for v, (i, j) in zip(prim, pos):
            m[i][j] = m[j][i] = v
        out.append(QuadForm.from_int(m))
    return tuple(out)


def find_witness(tspace, max_coeff=2):
    """Some positive definite element of T from small integer combinations."""
    basis = tspace.basis
    k = len(basis)
    rng = range(-max_coeff, max_coeff + 1)
    # try combinations in order of increasing coefficient size
    combos = sorted(product(rng, repeat=k), key=lambda c: (sum(abs(x) for x in c), c)) if k <= 6 else None
    if combos is None:
        combos = [tuple(int(i == j) for j in range(k)) for i in range(k)]
        combos += [tuple(1 for _ in range(k))]
    for c in combos:
        if not any(c):
            continue
        q = tspace.chart.from_coords(c)
        if is_positive_definite(q):
            return q
    raise EmptyPositivePart("no positive definite element found in T")


def invariant_space(generators, closure_budget=CLOSURE_BUDGET):
    """The space of forms fixed by every generator, with an averaged witness."""
    gens = [tuple(tuple(int(v) for v in r) for r in g) for g in generators]
    d = len(gens[0])
    full = CoordMap.full_space(d)
    n = full.n
    rows = []
    for g in gens:
        images = [full.to_coords(b.transform(g)) for b in full.basis]
        # coordinate k of (U^t Q U - Q) as a linear function of the coordinates of Q
        for k in range(n):
            rows.append([images[m][k] - (1 if m == k else 0) for m in range(n)])
    ns = linalg.nullspace(rows, n)
    basis = [full.from_coords(v) for v in ns]
    try:
        elements = group_closure(gens, d, closure_budget)
    except ClosureBudgetExceeded:
        raise
    acc = [[0] * d for _ in range(d)]
    for u in elements:
        for i in range(d):
            for j in range(d):
                acc[i][j] += sum(u[t][i] * u[t][j] for t in range(d))
    witness = QuadForm.from_int(acc)
    if not is_positive_definite(witness):
        raise EmptyPositivePart("group average is not positive definite")
    return TSpace(d, basis, group=gens, witness=witness)


def _block(d, block):
    k = len(block)
    return tuple(tuple(int(v) for v in r) for r in linalg.kron(linalg.identity(d // k), block))


def eisenstein_group(d):
    """Order-3 generator ``id_{d/2} (x) [[0,-1],[1,-1]]``."""
    if d % 2:
        raise OddDimension(f"Eisenstein forms need even dimension, got {d}")
    return [_block(d, [[0, -1], [1, -1]])]


def gaussian_group(d):
    """Order-4 generator ``id_{d/2} (x) [[0,-1],[1,0]]``."""
    if d % 2:
        raise OddDimension(f"Gaussian forms need even dimension, got {d}")
    return [_block(d, [[0, -1], [1, 0]])]


# -- Hurwitz quaternions --------------------------------------------------------

def _qmul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


_HALF = Fraction(1, 2)
# Z-basis 1, i, j, (1+i+j+k)/2 of the Hurwitz order
_HURWITZ_BASIS = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (_HALF, _HALF, _HALF, _HALF))


def _hurwitz_coords(q):
    t = 2 * q[3]
    c = (q[0] - t / 2, q[1] - t / 2, q[2] - t / 2, t)
    if any(Fraction(v).denominator != 1 for v in c):
        raise ValueError(f"{q} is not a Hurwitz integer")
    return tuple(int(v) for v in c)


def _left_mult(u):
    cols = [_hurwitz_coords(_qmul(u, b)) for b in _HURWITZ_BASIS]
    return tuple(tuple(cols[j][i] for j in range(4)) for i in range(4))


def hurwitz_group(d):
    """Left multiplication by the units ``i`` and ``(-1+i+j+k)/2`` on ``H^{d/4}``.

    The matrices act blockwise; the generated group is the unit group of the
    Hurwitz order (binary tetrahedral, order 24). The construction is
    validated: order 24, no nonzero fixed vectors, and the expected dimension
    of the invariant space.
    """
    if d % 4:
        raise DimensionNotMultipleOf4(f"Hurwitz forms need 4 | d, got {d}")
    gens = [_block(d, _left_mult(u)) for u in ((0, 1, 0, 0), (-_HALF, _HALF, _HALF, _HALF))]
    elements = group_closure(gens, d)
    if len(elements) != 24:
        raise AssertionError(f"Hurwitz unit group has order {len(elements)}, expected 24")
    ident = identity_matrix(d)
    for g in elements:
        if g == ident:
            continue
        fix = [[g[i][j] - int(i == j) for j in range(d)] for i in range(d)]
        if linalg.nullspace(fix, d):
            raise AssertionError("Hurwitz group action has fixed points")
    return gens


def builtin_tspace(name, d):
    groups = {"eisenstein": eisenstein_group, "gaussian": gaussian_group, "hurwitz": hurwitz_group}
    if name not in groups:
        raise ValueError(f"unknown T-space {name!r}")
    t = invariant_space(groups[name](d))
    expected = comb(d // 2, 2) if name == "hurwitz" else (d // 2) ** 2
    if t.dim != expected:
        raise AssertionError(f"{name} invariant space has dimension {t.dim}, expected {expected}")
    return t


def fixed_point_free(elements, radius=3):
    """Sampled check: no nonidentity element fixes a vector with entries up to ``radius``."""
    d = len(elements[0])
    ident = identity_matrix(d)
    rng = range(-radius, radius + 1)
    vecs = [v for v in product(rng, repeat=d) if any(v)] if d <= 4 else None
    for g in elements:
        if g == ident:
            continue
        if vecs is None:
            fix = [[g[i][j] - int(i == j) for j in range(d)] for i in range(d)]
            if linalg.nullspace(fix, d):
                return False
            continue
        if any(apply(g, v) == v for v in vecs):
            return False
    return True


# -- file format -----------------------------------------------------------------

def parse_tspace(text):
    """``d``, then ``k``, then ``k`` forms in the plain form format."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    try:
        d = int(lines[0])
        k = int(lines[1])
    except (IndexError, ValueError) as exc:
        raise FormatError(f"bad T-space header: {exc}") from exc
    forms = []
    body = lines[2:]
    for i in range(k):
        chunk = body[i * d:(i + 1) * d]
        if len(chunk) != d:
            raise FormatError(f"T-space file ends inside form {i + 1}")
        forms.append(parse_form("\n".join([str(d)] + chunk)))
    if len(body) != k * d:
        raise FormatError("trailing data after the last form")
    if linalg.rank([[f[i, j] for i in range(d) for j in range(i, d)] for f in forms],
                   d * (d + 1) // 2) != k:
        raise FormatError("T-space basis is linearly dependent")
    return TSpace(d, forms)


def read_tspace(path):
    with open(path) as fh:
        return parse_tspace(fh.read())


# -- descent to a T-perfect form -------------------------------------------------

def _indefinite_direction(chart, lineality):
    forms = [chart.from_coords(v) for v in lineality]
    cands = list(forms)
    for a, b in combinations(forms, 2):
        cands.append(a + b)
        cands.append(a - b)
    for r in cands:
        if not is_positive_semidefinite(r) and not is_positive_semidefinite(-r):
            return r
    return None


def descend_to_t_perfect(q0, tspace, max_steps=None):
    """Walk from ``q0`` inside T to a T-perfect form with the same minimum."""
    from .voronoi import neighbor

    if not tspace.contains(q0):
        raise NotInT("start form is not in T")
    q = q0
    steps = max_steps if max_steps is not None else tspace.dim + 1
    for _ in range(steps):
        md = minimum(q)
        cone = support_cone(md, tspace.chart)
        lin = lineality_space(cone)
        if not lin:
            return q
        r = _indefinite_direction(tspace.chart, lin)
        if r is None:
            raise NoIndefiniteDirection("every tried direction in the lineality space is semidefinite",
                                        lineality=tuple(lin))
        _, q = neighbor(q, r, md.min_value)
    raise NoIndefiniteDirection("descent did not reach a T-perfect form")
