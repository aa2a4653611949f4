"""Voronoi's algorithm: neighbours of perfect forms and the graph traversal.

Classes are explored breadth first. For each class the support cone of its
minimal vectors (in the working chart) is split into extreme rays; every
indefinite ray leads to a contiguous perfect form, which is either matched to
a known class (with an explicit unimodular witness) or appended as a new one.
Positive semidefinite rays only occur in restricted runs and are recorded as
dead ends.

Rays in one orbit of the automorphism group of the class representative (in
restricted runs: the automorphisms that also map T onto itself) have
equivalent neighbours, so only one ray per orbit goes through the neighbour
step; the others reuse its result transported by the group element. The
witnesses stay explicit and are rechecked by :func:`verify_graph`.
"""

import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import linalg
from .cones import CoordMap, extreme_rays, support_cone
from .errors import (BudgetExceeded, ConeBudgetExceeded, InternalError, NotPointed,
                     NotPositiveDefinite, RayPSD)
from .eutaxy import is_eutactic
from .forms import (QuadForm, hermite_invariant_pow, is_positive_definite,
                    is_positive_semidefinite, lll_reduce)
from .isometry import (automorphism_group, find_isometry, inverse_int, invariant_key,
                       matmul_int, t_automorphism_group, t_equivalent)
from .shortvec import minimum

COMPLETE = "complete"
BUDGET_EXCEEDED = "budget_exceeded"
IN_PROGRESS = "in_progress"


# -- neighbour step ------------------------------------------------------------

def _neighbor(q, r, lam):
    """``(rho, Q + rho R, minimum data of Q + rho R)``."""
    if is_positive_semidefinite(r):
        raise RayPSD("direction is positive semidefinite; no neighbour on this ray")
    if not is_positive_definite(q):
        raise NotPositiveDefinite("neighbour search needs a positive definite form")
    lam = Fraction(lam)
    min_q = minimum(q)
    if min_q.min_value != lam:
        raise ValueError(f"lam = {lam} but the form has minimum {min_q.min_value}")
    old = min_q.vector_set()

    def at(t):
        return q + r.scale(t)

    # phase I: bracket rho between l (minimum kept) and u (minimum dropped)
    l, u = Fraction(0), Fraction(1)
    while True:
        qu = at(u)
        if not is_positive_definite(qu):
            u = (l + u) / 2
        elif minimum(qu).min_value == lam:
            l, u = u, 2 * u
        else:
            break
    # phase II: sharpened bisection
    md_l = minimum(at(l))
    while md_l.vector_set() <= old:
        gamma = (l + u) / 2
        md = minimum(at(gamma))
        if md.min_value >= lam:
            l = gamma
            md_l = md
        else:
            cands = [(lam - q.value_num(v) / Fraction(q.den)) / (Fraction(r.value_num(v), r.den))
                     for v in md.vectors if r.value_num(v) < 0]
            u = min(cands + [gamma])
            # once u is exactly rho the plain update would only creep towards it
            md_u = minimum(at(u))
            if md_u.min_value >= lam:
                l = u
                md_l = md_u
    return l, at(l), md_l


def neighbor(q, r, lam):
    """Smallest ``rho > 0`` where ``Q + rho R`` gains a minimal vector.

    Returns ``(rho, Q + rho R)``; the minimum of the new form equals ``lam``.
    """
    rho, qn, _ = _neighbor(q, r, lam)
    return rho, qn


def first_perfect(d):
    """The A_d form: 2 on the diagonal, -1 next to it."""
    m = [[0] * d for _ in range(d)]
    for i in range(d):
        m[i][i] = 2
        if i:
            m[i][i - 1] = m[i - 1][i] = -1
    return QuadForm.from_int(m)


# -- graph data ----------------------------------------------------------------

@dataclass
class FormClass:
    representative: QuadForm
    min_data: object
    invariant_key: tuple
    is_perfect_classical: bool
    eutaxy_status: str = "unknown"
    aut_order: int = None
    n_rays: int = None
    t_aut_order: int = None

    @property
    def hermite_pow(self):
        return hermite_invariant_pow(self.representative, self.min_data.min_value)


@dataclass(frozen=True)
class Edge:
    source: int
    ray_index: int
    target: int
    witness: tuple  # U with U^t rep_target U = rep_source + rho R
    rho: Fraction


@dataclass(frozen=True)
class DeadEnd:
    source: int
    ray_index: int
    ray: tuple


@dataclass
class VoronoiGraph:
    dim: int
    tspace: object = None
    classes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    dead_ends: list = field(default_factory=list)
    status: str = IN_PROGRESS
    note: str = ""

    @property
    def chart(self):
        return self.tspace.chart if self.tspace is not None else CoordMap.full_space(self.dim)


# -- orbits of rays --------------------------------------------------------------

def _ray_orbits(rays, gens, chart):
    """Orbit representative, transport matrix and scale for every ray.

    For ray ``k`` with representative ``r``: ``R_k = s_k M_k^t R_r M_k`` where
    ``M_k`` is a product of generators and ``s_k > 0`` compensates for the
    primitive normalisation of ray coordinates.
    """
    n = len(rays)
    index = {r: k for k, r in enumerate(rays)}
    big = max((abs(v) for r in rays for v in r), default=1)
    perms = []
    for g in gens:
        a, den = chart.action_matrix(g)
        peak = max(abs(v) for row in a for v in row) * big * chart.n
        if peak < 2 ** 62:
            img = np.asarray(rays, dtype=np.int64) @ np.asarray(a, dtype=np.int64).T
            cont = np.gcd.reduce(np.abs(img), axis=1)
            prim = img // cont[:, None]
            perm = [index[tuple(int(v) for v in row)] for row in prim]
            scale = [Fraction(int(c), den) for c in cont]
        else:
            perm, scale = [], []
            for r in rays:
                img = [sum(x * y for x, y in zip(row, r)) for row in a]
                prim = tuple(linalg.primitive_int(img))
                perm.append(index[prim])
                nz = next(i for i, v in enumerate(prim) if v)
                scale.append(Fraction(img[nz], prim[nz] * den))
        perms.append((perm, scale))
    rep = [-1] * n
    transport = [None] * n
    factor = [None] * n
    ident = tuple(tuple(int(i == j) for j in range(chart.d)) for i in range(chart.d))
    for start in range(n):
        if rep[start] >= 0:
            continue
        rep[start] = start
        transport[start] = ident
        factor[start] = Fraction(1)
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for g, (perm, scale) in zip(gens, perms):
                b = perm[a]
                if rep[b] < 0:
                    rep[b] = start
                    transport[b] = matmul_int(transport[a], g)
                    factor[b] = factor[a] / scale[a]
                    queue.append(b)
    return rep, transport, factor


# -- traversal -----------------------------------------------------------------

def _neighbor_job(args):
    q, r, lam = args
    try:
        rho, qn, md = _neighbor(q, r, lam)
    except RayPSD:
        return None
    return rho, qn, md


class _Engine:
    def __init__(self, d, tspace, max_classes, ray_budget, time_budget, jobs, backend,
                 orbit_reduction):
        self.d = d
        self.tspace = tspace
        self.chart = tspace.chart if tspace is not None else CoordMap.full_space(d)
        self.max_classes = max_classes
        self.ray_budget = ray_budget
        self.deadline = time.monotonic() + time_budget if time_budget else None
        self.jobs = jobs
        self.backend = backend
        self.orbit_reduction = orbit_reduction
        self.graph = VoronoiGraph(d, tspace)
        self.buckets = {}
        self.lam = None

    def _make_class(self, q, md):
        key = invariant_key(q, md)
        perfect = len(md.vectors) >= self.d * (self.d + 1) // 2 and linalg.rank(
            [CoordMap.full_space(self.d).normal(x) for x in md.vectors], self.d * (self.d + 1) // 2
        ) == self.d * (self.d + 1) // 2
        cls = FormClass(q, md, key, perfect)
        cls.eutaxy_status = is_eutactic(q, md).status
        cls.aut_order = automorphism_group(q).order
        return cls

    def add_class(self, q, md):
        cls = self._make_class(q, md)
        self.graph.classes.append(cls)
        idx = len(self.graph.classes) - 1
        self.buckets.setdefault(cls.invariant_key, []).append(idx)
        return idx

    def identify(self, qn, md):
        """``(class index, W)`` with ``W^t rep W = qn``; adds a class when new."""
        key = invariant_key(qn, md)
        for j in self.buckets.get(key, ()):
            rep = self.graph.classes[j].representative
            keys = (self.graph.classes[j].invariant_key, key)
            if self.tspace is None:
                w = find_isometry(rep, qn, keys=keys)
            else:
                w = t_equivalent(rep, qn, self.tspace, keys=keys)
            if w is not None:
                return j, w
        if self.max_classes is not None and len(self.graph.classes) >= self.max_classes:
            raise BudgetExceeded(f"more than {self.max_classes} classes")
        if self.tspace is None:
            # store a reduced representative; qn = B^-t red B^-1
            red, b = lll_reduce(qn)
            rep_md = minimum(red)
            j = self.add_class(red, rep_md)
            return j, inverse_int(b)
        j = self.add_class(qn, md)
        return j, tuple(tuple(int(i == k) for k in range(self.d)) for i in range(self.d))

    def _check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded("wall-clock budget exhausted")

    def explore(self, i, pool):
        cls = self.graph.classes[i]
        q = cls.representative
        cone = support_cone(cls.min_data, self.chart)
        if not cone.is_pointed:
            raise InternalError(f"class {i} is not perfect in the working space")
        rays = extreme_rays(cone, self.ray_budget, self.backend)
        cls.n_rays = len(rays)
        if self.orbit_reduction and rays:
            if self.tspace is None:
                gens = automorphism_group(q).generators
            else:
                group = t_automorphism_group(q, self.tspace)
                cls.t_aut_order = group.order
                gens = group.generators
            rep, transport, factor = _ray_orbits(rays, gens, self.chart)
        else:
            rep = list(range(len(rays)))
            transport = factor = None
        todo = sorted(set(rep))
        args = [(q, self.chart.from_coords(rays[k]), self.lam) for k in todo]
        if pool is not None:
            results = list(pool.map(_neighbor_job, args))
        else:
            results = []
            for a in args:
                self._check_time()
                results.append(_neighbor_job(a))
        found = {}
        for k, res in zip(todo, results):
            self._check_time()
            if res is None:
                found[k] = None
                continue
            rho, qn, md = res
            j, w = self.identify(qn, md)
            found[k] = (rho, j, w)
        for k, ray in enumerate(rays):
            res = found[rep[k]]
            if res is None:
                if self.tspace is None:
                    raise InternalError("semidefinite extreme ray in a classical run")
                self.graph.dead_ends.append(DeadEnd(i, k, ray))
                continue
            rho, j, w = res
            if rep[k] != k:
                w = matmul_int(w, transport[k])
                rho = rho / factor[k]
            self.graph.edges.append(Edge(i, k, j, w, rho))

    def run(self, start):
        g = self.graph
        md = minimum(start)
        self.lam = md.min_value
        cone = support_cone(md, self.chart)
        if not cone.is_pointed:
            raise NotPointed("start form is not perfect in the working space")
        self.add_class(start, md)
        pool = ProcessPoolExecutor(self.jobs) if self.jobs and self.jobs > 1 else None
        try:
            i = 0
            while i < len(g.classes):
                self.explore(i, pool)
                i += 1
            g.status = COMPLETE
        except (BudgetExceeded, ConeBudgetExceeded) as exc:
            g.status = BUDGET_EXCEEDED
            g.note = str(exc)
        finally:
            if pool is not None:
                pool.shutdown()
        return g


def enumerate_forms(d, tspace=None, max_classes=None, ray_budget=100_000, time_budget=None,
                    jobs=1, start=None, backend=None, orbit_reduction=True):
    """Complete list of (T-)inequivalent (T-)perfect forms and their graph."""
    if start is None:
        if tspace is None:
            start = first_perfect(d)
        else:
            from .tspaces import descend_to_t_perfect

            start = descend_to_t_perfect(tspace.witness, tspace)
    engine = _Engine(d, tspace, max_classes, ray_budget, time_budget, jobs, backend,
                     orbit_reduction)
    return engine.run(start)


# -- independent re-check ---------------------------------------------------------

@dataclass
class VerifyReport:
    items: list = field(default_factory=list)

    def add(self, name, ok, detail=""):
        self.items.append((name, bool(ok), detail))

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.items)

    @property
    def failures(self):
        return [it for it in self.items if not it[1]]


def verify_graph(graph):
    """Recheck perfection, minima, ray coverage and every edge witness."""
    report = VerifyReport()
    chart = graph.chart
    classes = graph.classes
    if not classes:
        report.add("nonempty", False, "graph has no classes")
        return report
    lam = minimum(classes[0].representative).min_value
    covered = {}
    for e in graph.edges:
        covered.setdefault(e.source, []).append(e.ray_index)
    for e in graph.dead_ends:
        covered.setdefault(e.source, []).append(e.ray_index)
    for i, cls in enumerate(classes):
        q = cls.representative
        if not is_positive_definite(q):
            report.add(f"class {i} positive definite", False)
            continue
        md = minimum(q)
        report.add(f"class {i} minimum", md.min_value == lam, f"{md.min_value} vs {lam}")
        if graph.tspace is not None:
            report.add(f"class {i} in T", chart.contains(q))
        cone = support_cone(md, chart)
        report.add(f"class {i} perfect", cone.is_pointed)
        if not cone.is_pointed:
            continue
        rays = extreme_rays(cone)
        seen = sorted(covered.get(i, []))
        report.add(f"class {i} ray coverage", seen == list(range(len(rays))),
                   f"{len(seen)} records for {len(rays)} rays")
        for e in graph.edges:
            if e.source != i or e.ray_index >= len(rays):
                continue
            r = chart.from_coords(rays[e.ray_index])
            qn = q + r.scale(e.rho)
            w = e.witness
            ok = abs(linalg.det_int(w)) == 1 and classes[e.target].representative.transform(w) == qn
            report.add(f"edge {i}:{e.ray_index}->{e.target} witness", ok)
        for e in graph.dead_ends:
            if e.source == i and e.ray_index < len(rays):
                r = chart.from_coords(rays[e.ray_index])
                report.add(f"dead end {i}:{e.ray_index} semidefinite",
                           tuple(e.ray) == tuple(rays[e.ray_index]) and is_positive_semidefinite(r))
    return report
