"""Curve configurations, divisors and the elementary numerical predicates.

A :class:`CurveConfiguration` is the ambient "surface model": finitely many
named prime curves together with their exact intersection matrix. Every
statement computed from it is a statement *within the model*; the true
numerical group of a surface may be larger than the span of the listed
curves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Iterable, Mapping, Sequence

from .errors import InputError, PreconditionError
from .exact_linalg import (
    DefinitenessClass,
    SymMatrix,
    as_fraction,
    classify_definiteness,
    nullspace,
    signature,
    solve_linear,
)

ZERO = Fraction(0)


@dataclass(frozen=True, eq=True)
class CurveConfiguration:
    """Named prime curves with their intersection form.

    ``exceptional`` holds the indices of f-exceptional curves; an absolute
    model (the surface maps to a point) flags every curve. ``fiber_class``
    is the class of a fibre for models fibred over a curve.
    """

    curves: tuple[str, ...]
    gram: SymMatrix
    exceptional: frozenset[int]
    canonical: tuple[Fraction, ...] | None = None
    fiber_class: tuple[Fraction, ...] | None = None
    degrees: tuple[int, ...] = ()
    allow_negative_offdiagonal: bool = field(default=False, compare=False)

    def __post_init__(self):
        n = len(self.curves)
        if len(set(self.curves)) != n:
            raise InputError("curve names must be distinct")
        if not isinstance(self.gram, SymMatrix):
            object.__setattr__(self, "gram", SymMatrix(self.gram))
        if self.gram.n != n:
            raise InputError(f"gram is {self.gram.n}x{self.gram.n} but there are {n} curves")
        if not self.allow_negative_offdiagonal:
            for i in range(n):
                for j in range(i + 1, n):
                    if self.gram[i, j] < 0:
                        raise InputError(
                            f"distinct curves {self.curves[i]} and {self.curves[j]} "
                            f"meet negatively ({self.gram[i, j]})"
                        )
        exc = frozenset(int(i) for i in self.exceptional)
        if any(not 0 <= i < n for i in exc):
            raise InputError("exceptional index out of range")
        object.__setattr__(self, "exceptional", exc)
        for name in ("canonical", "fiber_class"):
            vec = getattr(self, name)
            if vec is not None:
                vec = tuple(as_fraction(v) for v in vec)
                if len(vec) != n:
                    raise InputError(f"{name} has length {len(vec)}, expected {n}")
                object.__setattr__(self, name, vec)
        degrees = tuple(int(d) for d in self.degrees) if self.degrees else (1,) * n
        if len(degrees) != n or any(d < 1 for d in degrees):
            raise InputError("degrees must be positive integers, one per curve")
        object.__setattr__(self, "degrees", degrees)

    # construction helpers

    @classmethod
    def build(
        cls,
        curves: Sequence[str],
        gram: Sequence[Sequence],
        exceptional: Iterable[str | int] | None = None,
        **kwargs,
    ) -> "CurveConfiguration":
        """Convenience constructor: ``exceptional`` may name curves; ``None``
        means an absolute model (every curve exceptional)."""
        curves = tuple(curves)
        if exceptional is None:
            exc = frozenset(range(len(curves)))
        else:
            exc = frozenset(curves.index(e) if isinstance(e, str) else int(e) for e in exceptional)
        return cls(curves, SymMatrix(gram), exc, **kwargs)

    @property
    def n(self) -> int:
        return len(self.curves)

    @property
    def is_absolute(self) -> bool:
        return len(self.exceptional) == self.n

    def index(self, name: str) -> int:
        try:
            return self.curves.index(name)
        except ValueError:
            raise InputError(f"unknown curve {name!r}") from None

    def zero(self) -> "Divisor":
        return Divisor(self, (ZERO,) * self.n)

    def curve(self, name_or_index: str | int) -> "Divisor":
        i = self.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        coeffs = [ZERO] * self.n
        coeffs[i] = Fraction(1)
        return Divisor(self, tuple(coeffs))

    def divisor(self, coeffs: Mapping[str, object] | Sequence) -> "Divisor":
        if isinstance(coeffs, Mapping):
            vec = [ZERO] * self.n
            for name, v in coeffs.items():
                vec[self.index(name)] = as_fraction(v)
            return Divisor(self, tuple(vec))
        return Divisor(self, tuple(as_fraction(v) for v in coeffs))

    def reduced(self, subset: Iterable[int]) -> "Divisor":
        subset = set(subset)
        return Divisor(self, tuple(Fraction(int(i in subset)) for i in range(self.n)))

    def fiber(self) -> "Divisor":
        if self.fiber_class is None:
            raise PreconditionError("configuration carries no fiber_class")
        return Divisor(self, self.fiber_class)

    def canonical_divisor(self) -> "Divisor":
        """The canonical class as a divisor; only available when ``canonical``
        numbers determine it uniquely (non-degenerate gram)."""
        if self.canonical is None:
            raise PreconditionError("configuration carries no canonical data")
        x = solve_linear(self.gram, self.canonical)
        if x is None or nullspace(self.gram):
            raise PreconditionError("canonical class is not determined by the model")
        return Divisor(self, x)

    def dual_graph_components(self, subset: Iterable[int]) -> list[list[int]]:
        """Connected components of the graph on ``subset`` whose edges are
        positive intersections."""
        todo = sorted(set(subset))
        seen: set[int] = set()
        comps = []
        for start in todo:
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in todo:
                    if j not in seen and self.gram[i, j] > 0:
                        seen.add(j)
                        stack.append(j)
            comps.append(sorted(comp))
        return comps


@dataclass(frozen=True)
class Divisor:
    """A rational linear combination of the curves of one configuration."""

    config: CurveConfiguration
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(as_fraction(c) for c in self.coeffs)
        if len(coeffs) != self.config.n:
            raise InputError(f"divisor has {len(coeffs)} coefficients, configuration has {self.config.n} curves")
        object.__setattr__(self, "coeffs", coeffs)

    def _check(self, other: "Divisor"):
        if self.config != other.config:
            raise InputError("divisors live on different configurations")

    def __add__(self, other: "Divisor") -> "Divisor":
        self._check(other)
        return Divisor(self.config, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Divisor") -> "Divisor":
        self._check(other)
        return Divisor(self.config, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Divisor":
        return Divisor(self.config, tuple(-a for a in self.coeffs))

    def __mul__(self, scalar) -> "Divisor":
        s = as_fraction(scalar)
        return Divisor(self.config, tuple(s * a for a in self.coeffs))

    __rmul__ = __mul__

    def __getitem__(self, key: int | str) -> Fraction:
        if isinstance(key, str):
            key = self.config.index(key)
        return self.coeffs[key]

    def __le__(self, other: "Divisor") -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self.coeffs, other.coeffs))

    def __lt__(self, other: "Divisor") -> bool:
        return self <= other and self != other

    def __repr__(self) -> str:
        terms = [f"{c}*{n}" for n, c in zip(self.config.curves, self.coeffs) if c]
        return "Divisor(" + (" + ".join(terms) or "0") + ")"

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coeffs) if c != 0)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_exceptional(self) -> bool:
        return set(self.support) <= self.config.exceptional

    def dot(self, other: "Divisor") -> Fraction:
        return intersect(self, other)

    def dot_curve(self, i: int) -> Fraction:
        row = self.config.gram.rows[i]
        return sum((a * g for a, g in zip(self.coeffs, row)), ZERO)

    def intersection_vector(self) -> tuple[Fraction, ...]:
        """``(D.C_1, ..., D.C_n)``."""
        return self.config.gram.mul_vec(self.coeffs)

    def square(self) -> Fraction:
        return self.config.gram.quad(self.coeffs)

    def mapping(self) -> dict[str, Fraction]:
        return {n: c for n, c in zip(self.config.curves, self.coeffs) if c != 0}


def intersect(d1: Divisor, d2: Divisor) -> Fraction:
    d1._check(d2)
    return d1.config.gram.quad(d1.coeffs, d2.coeffs)


def round_down(d: Divisor) -> Divisor:
    return Divisor(d.config, tuple(Fraction(floor(c)) for c in d.coeffs))


def round_up(d: Divisor) -> Divisor:
    return Divisor(d.config, tuple(Fraction(ceil(c)) for c in d.coeffs))


def fractional_part(d: Divisor) -> Divisor:
    return d - round_down(d)


def componentwise_min(a: Divisor, b: Divisor) -> Divisor:
    a._check(b)
    return Divisor(a.config, tuple(min(x, y) for x, y in zip(a.coeffs, b.coeffs)))


def componentwise_max(a: Divisor, b: Divisor) -> Divisor:
    a._check(b)
    return Divisor(a.config, tuple(max(x, y) for x, y in zip(a.coeffs, b.coeffs)))


def is_nef_over(d: Divisor, b: Divisor) -> bool:
    """True iff ``d.C >= 0`` for each prime component ``C`` of ``b``."""
    if not b.is_effective:
        raise InputError("is_nef_over needs an effective divisor to test against")
    return all(d.dot_curve(i) >= 0 for i in b.support)


def is_f_nef(d: Divisor, among: Iterable[int] | None = None) -> bool:
    """Nef against every exceptional curve (or against ``among``)."""
    idx = d.config.exceptional if among is None else among
    return all(d.dot_curve(i) >= 0 for i in idx)


def is_nef(d: Divisor) -> bool:
    """Nef against every curve of the model."""
    return all(d.dot_curve(i) >= 0 for i in range(d.config.n))


def _subset(cfg: CurveConfiguration, subset: Iterable[int | str]) -> list[int]:
    idx = sorted({cfg.index(s) if isinstance(s, str) else int(s) for s in subset})
    if not idx:
        raise InputError("subset must be non-empty")
    return idx


def definiteness_of_subconfig(cfg: CurveConfiguration, subset: Iterable[int | str]) -> DefinitenessClass:
    return classify_definiteness(cfg.gram.principal(_subset(cfg, subset)))


def is_negative_definite_support(d: Divisor) -> bool:
    sup = d.support
    return bool(sup) and definiteness_of_subconfig(d.config, sup) is DefinitenessClass.NEGATIVE_DEFINITE


def subconfig_signature(cfg: CurveConfiguration, subset: Iterable[int | str] | None = None):
    idx = list(range(cfg.n)) if subset is None else _subset(cfg, subset)
    return signature(cfg.gram.principal(idx))


def _embed(cfg: CurveConfiguration, idx: Sequence[int], values: Sequence[Fraction]) -> Divisor:
    vec = [ZERO] * cfg.n
    for i, v in zip(idx, values):
        vec[i] = Fraction(v)
    return Divisor(cfg, tuple(vec))


def linalg_witness(cfg: CurveConfiguration, subset: Iterable[int | str]) -> Divisor:
    """A divisor ``Z`` with positive rational coefficients on all of a
    connected ``subset`` whose intersection with every member has one sign:
    negative, zero or positive according to the subset's definiteness class.
    """
    idx = _subset(cfg, subset)
    if len(cfg.dual_graph_components(idx)) != 1:
        raise InputError("linalg_witness needs a connected subset")
    m = cfg.gram.principal(idx)
    cls = classify_definiteness(m)
    k = len(idx)
    if cls is DefinitenessClass.NEGATIVE_DEFINITE:
        # -M is an irreducible M-matrix, so its inverse is entrywise positive.
        z = solve_linear(m, [Fraction(-1)] * k)
    elif cls is DefinitenessClass.NEGATIVE_SEMIDEFINITE_DEGENERATE:
        (z,) = nullspace(m)  # Perron kernel of a connected semidefinite form is a line
        if z[0] < 0:
            z = tuple(-v for v in z)
    else:
        z = _positive_witness(m)
    out = _embed(cfg, idx, z)
    vals = [out.dot_curve(i) for i in idx]
    ok = {
        DefinitenessClass.NEGATIVE_DEFINITE: all(v < 0 for v in vals),
        DefinitenessClass.NEGATIVE_SEMIDEFINITE_DEGENERATE: all(v == 0 for v in vals),
        DefinitenessClass.NOT_NEGATIVE_SEMIDEFINITE: all(v > 0 for v in vals),
    }[cls]
    if not ok or any(c <= 0 for c in z):
        raise AssertionError(f"witness construction failed for {cls}")  # pragma: no cover
    return out


def _positive_witness(m: SymMatrix) -> tuple[Fraction, ...]:
    """For a connected form that is not negative semidefinite, find z > 0
    with m z > 0.

    For t above the top eigenvalue a, ``tI - m`` is a non-singular M-matrix
    and ``z = (tI - m)^{-1} 1`` is positive with ``m z = t z - 1``, which is
    positive once t is close enough to a. t is located by exact bisection
    on positive definiteness of ``tI - m``.
    """
    k = m.n
    ones = [Fraction(1)] * k

    def shifted(t: Fraction) -> SymMatrix:
        return SymMatrix([[(t if i == j else 0) - m[i, j] for j in range(k)] for i in range(k)])

    def above_top(t: Fraction) -> bool:
        n_plus, _, _ = signature(shifted(t))
        return n_plus == k

    lo = Fraction(0)
    hi = max(sum(abs(v) for v in row) for row in m.rows) + 1
    for _ in range(400):
        z = solve_linear(shifted(hi), ones)
        if z is not None and all(v > 0 for v in z):
            if all(v > 0 for v in m.mul_vec(z)):
                return z
        mid = (lo + hi) / 2
        if above_top(mid):
            hi = mid
        else:
            lo = mid
    raise AssertionError("positive witness search did not converge")  # pragma: no cover


def fundamental_cycle(cfg: CurveConfiguration, subset: Iterable[int | str]) -> Divisor:
    """Laufer's iteration: start from the reduced cycle and add any curve
    meeting the running cycle positively until none remains."""
    idx = _subset(cfg, subset)
    if len(cfg.dual_graph_components(idx)) != 1:
        raise InputError("fundamental_cycle needs a connected subset")
    if definiteness_of_subconfig(cfg, idx) is not DefinitenessClass.NEGATIVE_DEFINITE:
        raise PreconditionError("fundamental cycle needs a negative definite configuration")
    z = cfg.reduced(idx)
    while True:
        bad = next((i for i in idx if z.dot_curve(i) > 0), None)
        if bad is None:
            return z
        z = z + cfg.curve(bad)
