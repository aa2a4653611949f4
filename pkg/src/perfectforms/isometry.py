"""Isometries and automorphisms of positive definite forms.

Everything is built on one backtracking search for integer matrices ``U``
with ``U^t F_k U = F'_k`` for a list of form pairs (the first pair positive
definite). Column ``u_j`` must satisfy ``F_0[u_j] = F'_0[j, j]``, so the
candidates come from one short-vector enumeration; after every placement the
remaining columns are filtered by the Gram conditions (forward checking) and
the most constrained column is placed next.

Optional linear side conditions ``U g' = g U`` restrict the search to
matrices conjugating ``g'`` into ``g``; they are used to look for isometries
that preserve a space of invariant forms.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from . import linalg
from .errors import BudgetExceeded, DimensionMismatch, NotPositiveDefinite
from .forms import determinant, is_positive_definite, lll_reduce
from .shortvec import minimum, vectors_below

DEFAULT_NODE_BUDGET = 5_000_000


def matmul_int(a, b):
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def apply(u, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in u)


def identity_matrix(d):
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def inverse_int(u):
    inv = linalg.inverse(u)
    return tuple(tuple(int(v) for v in row) for row in inv)


def from_columns(cols):
    d = len(cols)
    return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))


@dataclass(frozen=True)
class IsometryGroup:
    generators: tuple
    order: int = None


class _Search:
    """Backtracking over columns of ``U`` for ``U^t F_k U = F'_k`` (all k).

    Candidates are indices into one array of short vectors; the Gram filter
    after each placement is a vectorised matrix-vector product.
    """

    def __init__(self, src, dst, constraints=(), node_budget=DEFAULT_NODE_BUDGET):
        d = src[0].dim
        if any(f.dim != d for f in list(src) + list(dst)):
            raise DimensionMismatch("forms of different dimension")
        if not (is_positive_definite(src[0]) and is_positive_definite(dst[0])):
            raise NotPositiveDefinite("isometry search needs positive definite forms")
        self.d = d
        self.K = len(src)
        # condition for (i, j): (N_k u_j) . u_i * dst_k.den == dst_k.num[i][j] * src_k.den
        self.mult = [g.den for g in dst]
        self.tgt = [[[g.num[i][j] * f.den for j in range(d)] for i in range(d)]
                    for f, g in zip(src, dst)]
        self.budget = node_budget
        self.nodes = 0
        bound = max(dst[0].diagonal())
        reps = vectors_below(src[0], bound)
        vecs = reps + [tuple(-c for c in v) for v in reps]
        self.vectors = vecs
        self.index = {v: k for k, v in enumerate(vecs)}
        big = max([abs(x) for v in vecs for x in v] + [1])
        peak = max(abs(x) for f in src for r in f.num for x in r) * big * big * d * max(self.mult)
        dtype = np.int64 if peak < 2 ** 62 else object
        self.vec_arr = np.array(vecs, dtype=dtype).reshape(len(vecs), d)
        self.nv = [self.vec_arr @ np.array(f.num, dtype=dtype).T for f in src]
        diag = [(self.nv[k] * self.vec_arr).sum(axis=1) * self.mult[k] for k in range(self.K)]
        self.cands = []
        for j in range(d):
            mask = np.ones(len(vecs), dtype=bool)
            for k in range(self.K):
                mask &= diag[k] == self.tgt[k][j][j]
            self.cands.append(np.nonzero(mask)[0])
        self.eqs = []
        for g, gp in constraints:
            for k in range(d):
                coeffs = {l: gp[l][k] for l in range(d) if gp[l][k]}
                cols = set(coeffs) | {k}
                self.eqs.append((g, coeffs, k, frozenset(cols)))

    def _eq_value(self, eq, placed, skip=None):
        g, coeffs, k, _ = eq
        d = self.d
        acc = [0] * d
        for l, c in coeffs.items():
            if l == skip:
                continue
            u = self.vectors[placed[l]]
            for i in range(d):
                acc[i] += c * u[i]
        gu = apply(g, self.vectors[placed[k]])
        return acc, gu

    def _propagate(self, placed, cands, col):
        """Filter remaining columns after placing ``col``; ``None`` on dead end."""
        u = self.vec_arr[placed[col]]
        new = {}
        for c2, idx in cands.items():
            if c2 == col:
                continue
            mask = None
            for k in range(self.K):
                m = (self.nv[k][idx] @ u) * self.mult[k] == self.tgt[k][c2][col]
                mask = m if mask is None else mask & m
            t = idx[mask]
            if not len(t):
                return None
            new[c2] = t
        for eq in self.eqs:
            cols = eq[3]
            if col not in cols:
                continue
            unplaced = [c for c in cols if c not in placed]
            if not unplaced:
                acc, gu = self._eq_value(eq, placed)
                if tuple(acc) != gu:
                    return None
            elif len(unplaced) == 1:
                m = unplaced[0]
                coeffs, k = eq[1], eq[2]
                if m == k or coeffs.get(m) not in (1, -1):
                    continue
                acc, gu = self._eq_value(eq, placed, skip=m)
                cm = coeffs[m]
                forced = self.index.get(tuple((x - y) * cm for x, y in zip(gu, acc)))
                if forced is None:
                    return None
                t = new[m][new[m] == forced]
                if not len(t):
                    return None
                new[m] = t
        return new

    def solutions(self, fixed=None):
        """Yield every solution ``U`` (row-major int tuple) extending ``fixed``."""
        placed = {}
        cands = dict(enumerate(self.cands))
        if any(not len(c) for c in cands.values()):
            return
        for col, v in (fixed or {}).items():
            k = self.index.get(tuple(v))
            if k is None or k not in set(cands[col].tolist()):
                return
            placed[col] = k
            cands = self._propagate(placed, cands, col)
            if cands is None:
                return
        yield from self._rec(placed, cands)

    def _rec(self, placed, cands):
        if not cands:
            yield from_columns([self.vectors[placed[j]] for j in range(self.d)])
            return
        col = min(cands, key=lambda c: (len(cands[c]), c))
        for k in cands[col].tolist():
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceeded(f"isometry search exceeded {self.budget} nodes")
            placed[col] = k
            rest = self._propagate(placed, cands, col)
            if rest is not None:
                yield from self._rec(placed, rest)
            del placed[col]


def _check(q, q2, u):
    return q.transform(u) == q2 and abs(linalg.det_int(u)) == 1


def min_profile(q, md):
    """Multiset of ``|x^t Q y|`` over pairs of minimal vectors, as sorted counts."""
    d = q.dim
    qv = [tuple(sum(r[t] * x[t] for t in range(d)) for r in q.num) for x in md.vectors]
    vals = []
    for a, b in combinations(range(len(md.vectors)), 2):
        vals.append(abs(sum(p * s for p, s in zip(qv[a], md.vectors[b]))))
    counts = Counter(vals)
    return tuple((Fraction(v, q.den), counts[v]) for v in sorted(counts))


def invariant_key(q, md=None):
    """Equivalence invariants: determinant, minimum, pairs, pair profile."""
    md = md or minimum(q)
    return (determinant(q), md.min_value, md.pairs, min_profile(q, md))


def iter_isometries(q, q2, constraints=(), node_budget=DEFAULT_NODE_BUDGET):
    """Every ``U`` in GL_d(Z) with ``U^t Q U = Q'`` (and the side conditions)."""
    if q.dim != q2.dim:
        raise DimensionMismatch("forms of different dimension")
    if determinant(q) != determinant(q2):
        return
    # search between reduced forms: U = B1 W B2^-1 with W^t R1 W = R2
    r1, b1 = lll_reduce(q)
    r2, b2 = lll_reduce(q2)
    b1i, b2i = inverse_int(b1), inverse_int(b2)
    conj = [(matmul_int(matmul_int(b1i, g), b1), matmul_int(matmul_int(b2i, h), b2))
            for g, h in constraints]
    search = _Search([r1], [r2], conj, node_budget)
    for w in search.solutions():
        u = matmul_int(matmul_int(b1, w), b2i)
        if abs(linalg.det_int(u)) == 1:
            yield u


def find_isometry(q, q2, keys=None, node_budget=DEFAULT_NODE_BUDGET):
    """Some ``U`` with ``U^t Q U = Q'`` or ``None``.

    ``keys`` may carry precomputed invariant keys of both forms.
    """
    if q.dim != q2.dim:
        raise DimensionMismatch("forms of different dimension")
    if not (is_positive_definite(q) and is_positive_definite(q2)):
        raise NotPositiveDefinite("isometry test needs positive definite forms")
    if determinant(q) != determinant(q2):
        return None
    k1, k2 = keys if keys else (invariant_key(q), invariant_key(q2))
    if k1 != k2:
        return None
    for u in iter_isometries(q, q2, node_budget=node_budget):
        return u
    return None


def are_equivalent(q, q2):
    return find_isometry(q, q2) is not None


def find_isometry_minsets(q, q2, md=None, md2=None):
    """Isometry search through minimal vectors only (perfect forms).

    Looks for ``V`` with ``V Min Q' = Min Q`` and ``V^t Q V = Q'`` by mapping a
    basis of ``R^d`` made of minimal vectors of ``Q'`` onto minimal vectors of
    ``Q`` with the same Gram matrix. Only complete for forms whose minimal
    vectors span ``R^d`` (all perfect forms).
    """
    md = md or minimum(q)
    md2 = md2 or minimum(q2)
    d = q.dim
    if md.min_value != md2.min_value or md.pairs != md2.pairs or determinant(q) != determinant(q2):
        return None
    src = list(md2.vectors)
    basis_idx = _independent(src, d)
    if len(basis_idx) < d:
        return None
    b2 = [src[i] for i in basis_idx]
    targets = list(md.vectors) + [tuple(-c for c in v) for v in md.vectors]
    e2 = q2.entries
    gram2 = [[sum(b2[a][i] * e2[i][j] * b2[b][j] for i in range(d) for j in range(d))
              for b in range(d)] for a in range(d)]
    b2_inv = linalg.inverse(linalg.transpose(b2))
    min_set = set(targets)

    def gram(x, y):
        return sum(x[i] * q[i, j] * y[j] for i in range(d) for j in range(d))

    chosen = []

    def rec(k):
        if k == d:
            img = linalg.transpose(chosen)
            v = linalg.matmul(img, b2_inv)
            if any(Fraction(x).denominator != 1 for r in v for x in r):
                return None
            vi = tuple(tuple(int(x) for x in r) for r in v)
            if abs(linalg.det_int(vi)) != 1:
                return None
            if all(apply(vi, y) in min_set for y in md2.vectors) and q.transform(vi) == q2:
                return vi
            return None
        for t in targets:
            if all(gram(t, chosen[a]) == gram2[k][a] for a in range(k)) and gram(t, t) == gram2[k][k]:
                chosen.append(t)
                found = rec(k + 1)
                chosen.pop()
                if found is not None:
                    return found
        return None

    return rec(0)


def _independent(vecs, d):
    rows = []
    idx = []
    for i, v in enumerate(vecs):
        if linalg.rank(rows + [list(v)], d) > len(rows):
            rows.append(list(v))
            idx.append(i)
            if len(rows) == d:
                break
    return idx


def _stabilizer_chain(q, extra=(), combos=((),), accept=None, node_budget=DEFAULT_NODE_BUDGET):
    """Generators and order of ``{U in Aut Q : side conditions, accept(U)}``.

    ``combos`` is a list of alternative side-condition sets ``[(g, g'), ...]``;
    an element qualifies if it satisfies one of them and passes ``accept``.
    The set must be a group. Levels fix ``e_1, ..., e_k`` of an LLL-reduced
    basis; the order is the product of the basic orbit lengths.
    """
    if not is_positive_definite(q):
        raise NotPositiveDefinite("automorphism group needs a positive definite form")
    d = q.dim
    red, b = lll_reduce(q)
    bi = inverse_int(b)
    forms = [red] + [f.transform(b) for f in extra]

    def conj(g):
        return matmul_int(matmul_int(bi, g), b)

    searches = [_Search(forms, forms, [(conj(g), conj(h)) for g, h in combo], node_budget)
                for combo in combos]
    base = searches[0]
    unit = [tuple(int(i == j) for i in range(d)) for j in range(d)]
    gens = []
    order = 1

    def back(w):
        return matmul_int(matmul_int(b, w), bi)

    def find(fixed):
        for search in searches:
            for w in search.solutions(fixed):
                if accept is None or accept(back(w)):
                    return w
        return None

    try:
        for k in range(d - 1, -1, -1):
            fixed = {i: unit[i] for i in range(k)}
            level_gens = list(gens)
            orbit = {unit[k]}
            frontier = [unit[k]]

            def grow():
                while frontier:
                    v = frontier.pop()
                    for g in level_gens:
                        w = apply(g, v)
                        if w not in orbit:
                            orbit.add(w)
                            frontier.append(w)

            grow()
            for ci in base.cands[k].tolist():
                v = base.vectors[ci]
                if v in orbit:
                    continue
                found = find({**fixed, k: v})
                if found is None:
                    continue
                gens.append(found)
                level_gens.append(found)
                frontier.extend(orbit)
                grow()
            order *= len(orbit)
    except BudgetExceeded as exc:
        raise BudgetExceeded(str(exc), partial=IsometryGroup(tuple(back(g) for g in gens))) from exc
    return IsometryGroup(tuple(back(g) for g in gens), order)


def automorphism_group(q, node_budget=DEFAULT_NODE_BUDGET, extra=()):
    """Generators and exact order of ``Aut Q`` (stabiliser chain on e_1..e_d).

    ``extra`` lists further forms that every automorphism must fix, giving the
    common automorphism group of ``Q`` and those forms.
    """
    return _stabilizer_chain(q, extra, node_budget=node_budget)


def _conjugation_options(tspace):
    """Side-condition sets whose union is the set of T-preserving matrices.

    ``U`` preserves ``T = T_G`` iff ``U^{-1} g U`` lies in the pointwise
    stabiliser of T for every generator ``g`` of ``G``. Candidates for the
    conjugate are filtered by order and characteristic polynomial.
    """
    stab = tspace.pointwise_stabilizer()
    options = []
    for g in tspace.group:
        g = tuple(tuple(r) for r in g)
        cp = linalg.charpoly_int(g)
        og = element_order(g)
        opts = [h for h in stab if element_order(h) == og and linalg.charpoly_int(h) == cp]
        options.append([(g, h) for h in opts])
    return list(product(*options))


def t_automorphism_group(q, tspace, node_budget=DEFAULT_NODE_BUDGET):
    """Automorphisms of ``Q`` that map T onto itself."""
    def accept(u):
        return preserves_space(u, tspace)

    combos = _conjugation_options(tspace) if tspace.group else ((),)
    return _stabilizer_chain(q, combos=combos, accept=accept, node_budget=node_budget)


def group_closure(gens, d, budget=100_000):
    """All elements of the group generated by ``gens`` (breadth first)."""
    from .errors import ClosureBudgetExceeded

    ident = identity_matrix(d)
    seen = {ident}
    frontier = [ident]
    gens = [tuple(tuple(r) for r in g) for g in gens]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = matmul_int(a, g)
                if b not in seen:
                    seen.add(b)
                    if len(seen) > budget:
                        raise ClosureBudgetExceeded(f"group order exceeds {budget}")
                    nxt.append(b)
        frontier = nxt
    return sorted(seen)


def element_order(g, limit=1000):
    d = len(g)
    ident = identity_matrix(d)
    p = g
    for k in range(1, limit + 1):
        if p == ident:
            return k
        p = matmul_int(p, g)
    return None


# -- T-restricted equivalence ---------------------------------------------------

def preserves_space(u, tspace):
    """Whether ``U^t B U`` lies in the span of T for every basis element ``B``."""
    return all(tspace.chart.contains(b.transform(u)) for b in tspace.basis)


def t_equivalent(q, q2, tspace, keys=None, quick=64, node_budget=DEFAULT_NODE_BUDGET):
    """Some ``U`` with ``Q' = U^t Q U`` and ``U^t T U = T``, or ``None``.

    First a handful of unconstrained isometries are tried; without a defining
    group that scan simply runs over every isometry. With a group the search
    is then restricted to ``U`` with ``U^{-1} g U`` in the pointwise stabiliser
    of T for each generator ``g`` (necessary for preserving T). Every hit is
    verified against the basis of T.
    """
    if q.dim != q2.dim:
        raise DimensionMismatch("forms of different dimension")
    if not (is_positive_definite(q) and is_positive_definite(q2)):
        raise NotPositiveDefinite("isometry test needs positive definite forms")
    if determinant(q) != determinant(q2):
        return None
    k1, k2 = keys if keys else (invariant_key(q), invariant_key(q2))
    if k1 != k2:
        return None
    tried = 0
    for u in iter_isometries(q, q2, node_budget=node_budget):
        if preserves_space(u, tspace):
            return u
        tried += 1
        if tried >= quick and tspace.group:
            break
    else:
        return None
    for combo in _conjugation_options(tspace):
        for u in iter_isometries(q, q2, constraints=combo, node_budget=node_budget):
            if preserves_space(u, tspace):
                return u
    return None


def common_automorphisms(forms, limit=100_000, node_budget=DEFAULT_NODE_BUDGET):
    """All ``U`` fixing every form in ``forms`` (the first must be definite)."""
    red, b = lll_reduce(forms[0])
    bi = inverse_int(b)
    moved = [red] + [f.transform(b) for f in forms[1:]]
    search = _Search(moved, moved, node_budget=node_budget)
    out = []
    for w in search.solutions():
        out.append(matmul_int(matmul_int(b, w), bi))
        if len(out) > limit:
            raise BudgetExceeded(f"more than {limit} common automorphisms")
    return sorted(out)
