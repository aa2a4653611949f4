"""Gram matrices of a few named lattices, used for labelling classes."""

from . import linalg
from .forms import QuadForm


def _from_edges(d, edges):
    m = [[2 if i == j else 0 for j in range(d)] for i in range(d)]
    for i, j in edges:
        m[i][j] = m[j][i] = -1
    return QuadForm.from_int(m)


def a_form(d):
    """Root lattice A_d: tridiagonal with 2 on the diagonal and -1 beside it."""
    return _from_edges(d, [(i, i + 1) for i in range(d - 1)])


def d_form(d):
    """Root lattice D_d (d >= 3): a chain with the last node attached to d-3."""
    edges = [(i, i + 1) for i in range(d - 2)] + [(d - 3, d - 1)]
    return _from_edges(d, edges)


def e_form(d):
    """Root lattices E_6, E_7, E_8 (Bourbaki labelling, node 2 on node 4)."""
    if d not in (6, 7, 8):
        raise ValueError("E_d only exists for d = 6, 7, 8")
    # nodes 1..d with chain 1-3-4-5-...-d and 2 attached to 4
    chain = [1] + list(range(3, d + 1))
    edges = [(a - 1, b - 1) for a, b in zip(chain, chain[1:])] + [(1, 3)]
    return _from_edges(d, edges)


def e6_dual():
    """``3 * E_6^{-1}``, an integral Gram matrix of the dual lattice E_6*."""
    inv = linalg.inverse(e_form(6).entries)
    return QuadForm([[3 * v for v in row] for row in inv])


def integer_lattice(d):
    return QuadForm.from_int(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))


def named_forms(d):
    """``(name, form)`` pairs available in dimension ``d``."""
    out = []
    if d >= 1:
        out.append((f"Z{d}", integer_lattice(d)))
        out.append((f"A{d}", a_form(d)))
    if d >= 4:
        out.append((f"D{d}", d_form(d)))
    if d in (6, 7, 8):
        out.append((f"E{d}", e_form(d)))
    if d == 6:
        out.append(("E6*", e6_dual()))
    return out
