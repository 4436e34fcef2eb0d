"""Exact rational linear algebra over :class:`fractions.Fraction`.

Everything here is exact: no floating point is used for any decision.
Matrices are tuples of row tuples; vectors are tuples.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import InputError

Vector = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: a float has already lost exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational number: {value!r}") from exc
    raise InputError(f"not a rational number: {value!r} ({type(value).__name__})")


def fraction_to_json(x: Fraction) -> str | int:
    """Serialize as a bare int when integral, otherwise as ``"p/q"``."""
    x = Fraction(x)
    if x.denominator == 1:
        return x.numerator
    return f"{x.numerator}/{x.denominator}"


class SymMatrix:
    """An immutable symmetric matrix with rational entries."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(as_fraction(v) for v in row) for row in rows)
        n = len(data)
        for row in data:
            if len(row) != n:
                raise InputError("matrix is not square")
        for i in range(n):
            for j in range(i + 1, n):
                if data[i][j] != data[j][i]:
                    raise InputError(f"matrix is not symmetric at ({i}, {j})")
        self._rows = data

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> Matrix:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def __len__(self) -> int:
        return len(self._rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in self._rows)
        return f"SymMatrix([{body}])"

    def principal(self, indices: Sequence[int]) -> "SymMatrix":
        return SymMatrix([[self._rows[i][j] for j in indices] for i in indices])

    def permuted(self, perm: Sequence[int]) -> "SymMatrix":
        return self.principal(perm)

    def mul_vec(self, x: Sequence[Fraction]) -> Vector:
        if len(x) != self.n:
            raise InputError("dimension mismatch")
        return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in self._rows)

    def quad(self, x: Sequence[Fraction], y: Sequence[Fraction] | None = None) -> Fraction:
        """The bilinear form x^T M y (y defaults to x)."""
        y = x if y is None else y
        return sum((a * b for a, b in zip(x, self.mul_vec(y))), Fraction(0))

    def to_json(self) -> list[list]:
        return [[fraction_to_json(v) for v in row] for row in self._rows]


def _integral_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = lcm(*(Fraction(v).denominator for v in row)) if row else 1
        out.append([int(Fraction(v) * den) for v in row])
    return out


def solve_linear(m: SymMatrix | Sequence[Sequence], b: Sequence) -> Vector | None:
    """Solve ``m x = b`` exactly.

    Uses fraction-free (Bareiss) elimination on the integer-scaled augmented
    matrix. Singular consistent systems get one solution with free variables
    set to zero; inconsistent systems return ``None``.
    """
    rows = m.rows if isinstance(m, SymMatrix) else tuple(tuple(as_fraction(v) for v in r) for r in m)
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    if len(b) != n_rows:
        raise InputError(f"right-hand side has length {len(b)}, expected {n_rows}")
    if any(len(r) != n_cols for r in rows):
        raise InputError("ragged matrix")
    aug = _integral_rows([list(r) + [as_fraction(v)] for r, v in zip(rows, b)])

    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        piv = aug[r][c]
        for i in range(r + 1, n_rows):
            aug[i] = [(piv * aug[i][k] - aug[i][c] * aug[r][k]) // prev for k in range(n_cols + 1)]
        prev = piv
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if aug[i][n_cols] != 0:
            return None

    x = [Fraction(0)] * n_cols
    for i in reversed(range(r)):
        c = pivots[i]
        acc = Fraction(aug[i][n_cols])
        for k in range(c + 1, n_cols):
            if aug[i][k]:
                acc -= aug[i][k] * x[k]
        x[c] = acc / aug[i][c]
    return tuple(x)


def nullspace(m: SymMatrix | Sequence[Sequence]) -> list[Vector]:
    """A basis of the right kernel of ``m`` (reduced row echelon form)."""
    rows = [list(map(as_fraction, r)) for r in (m.rows if isinstance(m, SymMatrix) else m)]
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n_cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(tuple(v))
    return basis


def signature(m: SymMatrix) -> tuple[int, int, int]:
    """Exact inertia ``(n_plus, n_zero, n_minus)`` by congruence diagonalization.

    A zero diagonal with a non-zero off-diagonal entry ``b`` at (k, l) is
    handled as the hyperbolic block [[0, b], [b, 0]], contributing (1, 0, 1),
    followed by the Schur-complement elimination of both rows.
    """
    a = [list(row) for row in m.rows]
    active = list(range(m.n))
    n_plus = n_zero = n_minus = 0
    while active:
        k = next((i for i in active if a[i][i] != 0), None)
        if k is not None:
            piv = a[k][k]
            if piv > 0:
                n_plus += 1
            else:
                n_minus += 1
            rest = [i for i in active if i != k]
            for i in rest:
                if a[i][k] == 0:
                    continue
                f = a[i][k] / piv
                for j in rest:
                    a[i][j] -= f * a[k][j]
            active = rest
            continue
        pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
        if pair is None:
            n_zero += len(active)
            break
        k, l = pair
        bkl = a[k][l]
        n_plus += 1
        n_minus += 1
        rest = [i for i in active if i not in (k, l)]
        new = {}
        for i in rest:
            for j in rest:
                new[i, j] = a[i][j] - (a[i][k] * a[l][j] + a[i][l] * a[k][j]) / bkl
        for (i, j), v in new.items():
            a[i][j] = v
        active = rest
    return n_plus, n_zero, n_minus


class DefinitenessClass(str, enum.Enum):
    NEGATIVE_DEFINITE = "NegativeDefinite"
    NEGATIVE_SEMIDEFINITE_DEGENERATE = "NegativeSemidefiniteDegenerate"
    NOT_NEGATIVE_SEMIDEFINITE = "NotNegativeSemidefinite"

    @property
    def is_negative_semidefinite(self) -> bool:
        return self is not DefinitenessClass.NOT_NEGATIVE_SEMIDEFINITE


def classify_definiteness(m: SymMatrix) -> DefinitenessClass:
    n_plus, n_zero, _ = signature(m)
    if n_plus > 0:
        return DefinitenessClass.NOT_NEGATIVE_SEMIDEFINITE
    if n_zero > 0:
        return DefinitenessClass.NEGATIVE_SEMIDEFINITE_DEGENERATE
    return DefinitenessClass.NEGATIVE_DEFINITE


def is_negative_definite(m: SymMatrix) -> bool:
    return m.n > 0 and classify_definiteness(m) is DefinitenessClass.NEGATIVE_DEFINITE


def leading_minors(m: SymMatrix) -> list[Fraction]:
    """Leading principal minors, computed by exact Gaussian elimination."""
    out = []
    for k in range(1, m.n + 1):
        out.append(determinant(m.principal(range(k))))
    return out


def determinant(m: SymMatrix | Sequence[Sequence]) -> Fraction:
    rows = [list(map(as_fraction, r)) for r in (m.rows if isinstance(m, SymMatrix) else m)]
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        piv = rows[c][c]
        det *= piv
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] / piv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det
