from fractions import Fraction

import pytest

import oracles
from conftest import random_unimodular
from perfectforms import forms
from perfectforms.errors import NotPositiveDefinite, Singular
from perfectforms.eutaxy import classify_extreme, inverse, is_eutactic, is_perfect
from perfectforms.forms import QuadForm
from perfectforms.lattices import a_form, d_form, e_form
from perfectforms.shortvec import minimum


def oracle_eutaxy_objective(q):
    """max t with Q^-1 = sum (s_x + t) x x^t, s >= 0, by vertex enumeration."""
    vecs = minimum(q).vectors
    d = q.dim
    inv = oracles.inverse(q.entries)
    a, b = [], []
    for i in range(d):
        for j in range(i, d):
            row = [x[i] * x[j] for x in vecs]
            a.append(row + [sum(row), -sum(row)])
            b.append(inv[i][j])
    return oracles.lp_vertex_optimum(a, b, [0] * len(vecs) + [1, -1])


def test_inverse_of_a2():
    assert inverse(a_form(2)) == QuadForm([[Fraction(2, 3), Fraction(1, 3)],
                                           [Fraction(1, 3), Fraction(2, 3)]])
    with pytest.raises(Singular):
        inverse(forms.diag([1, 0]))


def test_identity_weights():
    cert = is_eutactic(forms.identity(2))
    assert cert.eutactic
    assert cert.weights == {(0, 1): 1, (1, 0): 1}
    assert cert.per_vector_weights()[(-1, 0)] == Fraction(1, 2)


@pytest.mark.parametrize("q", [a_form(2), a_form(3), d_form(4)])
def test_objective_against_oracle(q):
    cert = is_eutactic(q)
    assert cert.eutactic
    assert cert.objective == oracle_eutaxy_objective(q)


def test_a2_objective_value():
    # frozen from the vertex-enumeration oracle
    assert is_eutactic(a_form(2)).objective == Fraction(1, 3)


def test_certificate_reproduces_inverse():
    for q in (a_form(4), d_form(5), e_form(6)):
        cert = is_eutactic(q)
        assert cert.eutactic
        inv = inverse(q)
        d = q.dim
        for i in range(d):
            for j in range(d):
                assert sum(w * x[i] * x[j] for x, w in cert.weights.items()) == inv[i, j]
        assert all(w > 0 for w in cert.weights.values())


def test_not_eutactic():
    # minimal vectors e1, e2 only; the inverse needs a negative off-diagonal weight
    q = QuadForm([[2, 1], [1, 3]])
    assert not is_eutactic(q).eutactic
    q = QuadForm([[1, 0], [0, 2]])
    assert not is_eutactic(q).eutactic


def test_invariance(rng):
    for q in (a_form(3), d_form(4)):
        base = is_eutactic(q)
        for _ in range(3):
            q2 = q.transform(random_unimodular(rng, q.dim))
            assert is_eutactic(q2).objective == base.objective


def test_perfect_and_classification():
    assert is_perfect(a_form(3))
    assert not is_perfect(forms.identity(2))
    assert classify_extreme(a_form(2)) == "extreme"
    assert classify_extreme(e_form(6)) == "extreme"
    assert classify_extreme(forms.identity(3)) == "not_perfect"
    with pytest.raises(NotPositiveDefinite):
        is_eutactic(QuadForm([[1, 2], [2, 1]]))
