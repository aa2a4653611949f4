"""Eutaxy and extremality.

``Q`` is eutactic when ``Q^{-1} = sum alpha_x x x^t`` over its minimal vectors
with every ``alpha_x > 0``. We maximise the smallest weight with an exact
simplex; the optimum is positive exactly for eutactic forms. Perfect and
eutactic together characterise local maxima of the Hermite invariant.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .cones import CoordMap, support_cone
from .errors import InternalError, NotPositiveDefinite, Singular
from .forms import QuadForm, is_positive_definite
from .shortvec import minimum
from .simplex import solve_lp

EUTACTIC = "eutactic"
NOT_EUTACTIC = "not_eutactic"


@dataclass(frozen=True)
class EutaxyCertificate:
    """LP outcome. ``weights`` maps each minimal-vector representative to ``alpha_x``."""

    status: str
    weights: dict = None
    objective: Fraction = None

    @property
    def eutactic(self):
        return self.status == EUTACTIC

    def per_vector_weights(self):
        """Weights with ``x`` and ``-x`` counted separately (each gets half)."""
        out = {}
        for x, w in (self.weights or {}).items():
            out[x] = out[tuple(-c for c in x)] = w / 2
        return out


def inverse(q):
    try:
        inv = linalg.inverse(q.entries)
    except ZeroDivisionError as exc:
        raise Singular("form is singular") from exc
    return QuadForm(inv)


def is_eutactic(q, md=None):
    if not is_positive_definite(q):
        raise NotPositiveDefinite("eutaxy needs a positive definite form")
    md = md or minimum(q)
    d = q.dim
    qi = inverse(q)
    vecs = md.vectors
    m = len(vecs)
    pos = [(i, j) for i in range(d) for j in range(i, d)]
    # variables: s_1..s_m >= 0, t1, t2 >= 0 with alpha_x = s_x + t1 - t2
    a, b = [], []
    for i, j in pos:
        row = [x[i] * x[j] for x in vecs]
        tot = sum(row)
        a.append(row + [tot, -tot])
        b.append(qi[i, j])
    c = [0] * m + [1, -1]
    res = solve_lp(a, b, c)
    if res.status == "infeasible":
        return EutaxyCertificate(NOT_EUTACTIC)
    if res.status != "optimal":
        raise InternalError("eutaxy LP is unbounded")
    t = res.x[m] - res.x[m + 1]
    bound = Fraction(d) / (md.min_value * m)
    if t > bound:
        raise InternalError("eutaxy optimum violates the trace bound")
    if t <= 0:
        return EutaxyCertificate(NOT_EUTACTIC, objective=t)
    weights = {x: res.x[k] + t for k, x in enumerate(vecs)}
    # re-substitute the certificate
    for i, j in pos:
        if sum(w * x[i] * x[j] for x, w in weights.items()) != qi[i, j]:
            raise InternalError("eutaxy certificate does not reproduce the inverse")
    if min(weights.values()) < t:
        raise InternalError("eutaxy weights below the optimum")
    return EutaxyCertificate(EUTACTIC, weights, t)


def is_perfect(q, md=None):
    """Perfect iff the support cone in the full space is pointed."""
    md = md or minimum(q)
    cone = support_cone(md, CoordMap.full_space(q.dim))
    return cone.is_pointed


def classify_extreme(q):
    """``"extreme"``, ``"perfect_not_extreme"`` or ``"not_perfect"``."""
    md = minimum(q)
    if not is_perfect(q, md):
        return "not_perfect"
    return "extreme" if is_eutactic(q, md).eutactic else "perfect_not_extreme"
