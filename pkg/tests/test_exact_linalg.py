from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zarkit.errors import InputError
from zarkit.exact_linalg import (
    DefinitenessClass,
    SymMatrix,
    as_fraction,
    classify_definiteness,
    determinant,
    fraction_to_json,
    leading_minors,
    nullspace,
    signature,
    solve_linear,
)


def sym_matrices(max_n=5, lo=-5, hi=5):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = draw(st.integers(lo, hi))
        return SymMatrix(rows)

    return build()


def leibniz_det(rows):
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def test_as_fraction_accepts_exact_inputs():
    assert as_fraction(3) == 3
    assert as_fraction("3/6") == Fraction(1, 2)
    assert as_fraction(Fraction(2, 4)) == Fraction(1, 2)


@pytest.mark.parametrize("bad", [0.5, True, "x/y", None, [1]])
def test_as_fraction_rejects_inexact_or_garbage(bad):
    with pytest.raises(InputError):
        as_fraction(bad)


def test_fraction_to_json():
    assert fraction_to_json(Fraction(4, 2)) == 2
    assert fraction_to_json(Fraction(-3, 4)) == "-3/4"


def test_symmatrix_rejects_asymmetric_and_ragged():
    with pytest.raises(InputError):
        SymMatrix([[1, 2], [3, 4]])
    with pytest.raises(InputError):
        SymMatrix([[1, 2], [2]])


@given(sym_matrices())
def test_determinant_matches_leibniz(m):
    assert determinant(m) == leibniz_det(m.rows)


@given(sym_matrices())
def test_solve_linear_solutions_satisfy_system(m):
    b = [Fraction(i + 1) for i in range(m.n)]
    x = solve_linear(m, b)
    if determinant(m) != 0:
        assert x is not None
    if x is not None:
        assert list(m.mul_vec(x)) == b


@given(sym_matrices())
def test_nullspace_dimension_is_corank(m):
    basis = nullspace(m)
    for v in basis:
        assert all(c == 0 for c in m.mul_vec(v))
    n_plus, n_zero, n_minus = signature(m)
    assert len(basis) == n_zero
    assert n_plus + n_zero + n_minus == m.n


@given(sym_matrices())
def test_signature_matches_float_eigenvalues(m):
    ev = np.linalg.eigvalsh(np.array(m.rows, dtype=float))
    # only compare when every eigenvalue is clearly away from zero or clearly zero
    if np.any((np.abs(ev) > 1e-9) & (np.abs(ev) < 1e-6)):
        return
    expected = (int((ev > 1e-9).sum()), int((np.abs(ev) <= 1e-9).sum()), int((ev < -1e-9).sum()))
    assert signature(m) == expected


@given(sym_matrices())
def test_definiteness_agrees_with_signature(m):
    n_plus, n_zero, _ = signature(m)
    cls = classify_definiteness(m)
    if n_plus:
        assert cls is DefinitenessClass.NOT_NEGATIVE_SEMIDEFINITE
    elif n_zero:
        assert cls is DefinitenessClass.NEGATIVE_SEMIDEFINITE_DEGENERATE
    else:
        assert cls is DefinitenessClass.NEGATIVE_DEFINITE


@given(sym_matrices(max_n=4))
def test_negative_definite_iff_alternating_minors(m):
    minors = leading_minors(m)
    sylvester = all((-1) ** (k + 1) * minor > 0 for k, minor in enumerate(minors))
    assert sylvester == (classify_definiteness(m) is DefinitenessClass.NEGATIVE_DEFINITE)


def test_known_signatures():
    assert signature(SymMatrix([[0, 1], [1, 0]])) == (1, 0, 1)
    assert signature(SymMatrix([[-2, 1, 0], [1, -2, 1], [0, 1, -2]])) == (0, 0, 3)
    assert signature(SymMatrix([[-2, 2], [2, -2]])) == (0, 1, 1)


@given(sym_matrices(max_n=4))
def test_against_sympy_exact(m):
    sympy = pytest.importorskip("sympy")
    sm = sympy.Matrix(m.n, m.n, lambda i, j: sympy.Rational(m[i, j].numerator, m[i, j].denominator))
    assert determinant(m) == Fraction(int(sm.det()))
    assert m.n - len(nullspace(m)) == sm.rank()
    t = sympy.Symbol("t")
    roots = sympy.Poly(sm.charpoly(t).as_expr(), t).real_roots()  # all real for a symmetric matrix
    expected = (sum(1 for r in roots if r > 0), sum(1 for r in roots if r == 0), sum(1 for r in roots if r < 0))
    assert signature(m) == expected
