from fractions import Fraction

import pytest

import oracles
from conftest import random_pd_form, random_unimodular
from perfectforms import forms
from perfectforms.errors import NonpositiveBound, NotPositiveDefinite
from perfectforms.forms import QuadForm
from perfectforms.lattices import a_form, d_form, e_form, e6_dual
from perfectforms.shortvec import (arithmetical_minimum, canonical_sign, minimum, vectors_below,
                                   vectors_below_with_values)


def test_a2_minimum():
    md = minimum(a_form(2))
    assert md.min_value == 2
    assert md.vectors == ((0, 1), (1, 0), (1, 1))


@pytest.mark.parametrize("q, lam, pairs", [
    (a_form(3), 2, 6),
    (d_form(4), 2, 12),
    (d_form(5), 2, 20),
    (e_form(6), 2, 36),
    (e_form(7), 2, 63),
    (e_form(8), 2, 120),
    (e6_dual(), 4, 27),
    (forms.identity(5), 1, 5),
])
def test_kissing_numbers(q, lam, pairs):
    md = minimum(q)
    assert md.min_value == lam
    assert md.pairs == pairs


def test_vectors_below_identity():
    assert vectors_below(forms.identity(2), 1) == [(0, 1), (1, 0)]
    assert vectors_below(forms.identity(2), 2) == [(0, 1), (1, -1), (1, 0), (1, 1)]


def test_values_are_exact():
    q = QuadForm([[Fraction(3, 2), Fraction(1, 3)], [Fraction(1, 3), 2]])
    for x, v in vectors_below_with_values(q, 5):
        assert v == forms.evaluate(q, x)
        assert v <= 5


def test_bound_must_be_positive():
    with pytest.raises(NonpositiveBound):
        vectors_below(a_form(2), 0)
    with pytest.raises(NotPositiveDefinite):
        vectors_below(QuadForm([[1, 2], [2, 1]]), 1)


def test_canonical_sign():
    assert canonical_sign((0, -1, 2)) == (0, 1, -2)
    assert canonical_sign((3, -1)) == (3, -1)


def test_against_box_oracle(rng):
    for _ in range(60):
        d = rng.randint(1, 4)
        q = random_pd_form(rng, d)
        c = Fraction(rng.randint(1, 30), rng.randint(1, 3))
        assert vectors_below(q, c) == oracles.short_vectors(q.entries, c)


def test_rational_forms_against_oracle(rng):
    for _ in range(30):
        d = rng.randint(1, 3)
        q = random_pd_form(rng, d).scale(Fraction(1, rng.randint(2, 7)))
        c = Fraction(rng.randint(1, 20), 3)
        assert vectors_below(q, c) == oracles.short_vectors(q.entries, c)


def test_minimum_against_oracle(rng):
    for _ in range(40):
        d = rng.randint(1, 4)
        q = random_pd_form(rng, d)
        lam, vecs = oracles.arithmetic_minimum(q.entries)
        md = minimum(q)
        assert md.min_value == lam == arithmetical_minimum(q)
        assert list(md.vectors) == vecs


def test_minimum_is_invariant(rng):
    for _ in range(20):
        d = rng.randint(2, 6)
        q = a_form(d)
        u = random_unimodular(rng, d, steps=20)
        md = minimum(q.transform(u))
        assert md.min_value == 2
        assert md.pairs == d * (d + 1) // 2
