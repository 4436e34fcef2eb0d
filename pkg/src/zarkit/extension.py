"""Extension thresholds and small calculators for surfaces of Picard number
one, weighted projective planes, Hirzebruch and ruled surfaces.

Gonality-type quantities are always inputs here; nothing computes the
gonality of a curve.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import InputError
from .exact_linalg import as_fraction, fraction_to_json


def _positive_int(name: str, v) -> int:
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise InputError(f"{name} must be a positive integer (got {v!r})")
    return v


def q_xd(x, d: int) -> Fraction:
    return min(as_fraction(x), Fraction(_positive_int("d", d)))


def phi(x, d: int) -> Fraction:
    """``q (d/q + 1)^2`` with ``q = min(x, d)``."""
    x = as_fraction(x)
    if x <= 0:
        raise InputError("x must be positive")
    q = q_xd(x, d)
    return q * (d / q + 1) ** 2


class Verdict(str, enum.Enum):
    EXTENDS = "ExtendsAsMorphism"
    BOUNDARY_PENCIL = "BoundaryPencil"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ThresholdInput:
    d_squared: Fraction
    q: Fraction
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "d_squared", as_fraction(self.d_squared))
        object.__setattr__(self, "q", as_fraction(self.q))
        if self.q <= 0:
            raise InputError("q must be positive")
        _positive_int("degree", self.degree)


@dataclass(frozen=True)
class ExtensionReport:
    inp: ThresholdInput
    q_xd: Fraction
    phi: Fraction
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "D^2": fraction_to_json(self.inp.d_squared),
            "q": fraction_to_json(self.inp.q),
            "d": self.inp.degree,
            "q_xd": fraction_to_json(self.q_xd),
            "phi": fraction_to_json(self.phi),
            "verdict": self.verdict.value,
        }


def check_extension(inp: ThresholdInput) -> ExtensionReport:
    """A degree-d morphism from D to the line extends when ``D^2 > phi``; at
    equality with ``q < d`` the obstruction is a pencil with ``F^2 = q``."""
    value = phi(inp.q, inp.degree)
    if inp.d_squared > value:
        verdict = Verdict.EXTENDS
    elif inp.d_squared == value and inp.q < inp.degree:
        verdict = Verdict.BOUNDARY_PENCIL
    else:
        verdict = Verdict.INCONCLUSIVE
    return ExtensionReport(inp, q_xd(inp.q, inp.degree), value, verdict)


def cone_fixture(e: int, d: int) -> ThresholdInput:
    """Cone over the degree-e rational normal curve: the generator has square
    ``1/e`` and ``D = (de + 1)`` times it carries a degree-d pencil."""
    _positive_int("e", e)
    _positive_int("d", d)
    q = Fraction(1, e)
    return ThresholdInput((d * e + 1) ** 2 * q, q, d)


# weighted projective planes


@lru_cache(maxsize=4096)
def poincare_coefficient(weights: tuple[int, int, int], n: int) -> int:
    """Number of ``(i, j, k) >= 0`` with ``i a0 + j a1 + k a2 = n``."""
    if n < 0:
        return 0
    a0, a1, a2 = weights
    count = 0
    for k in range(n // a2 + 1):
        rest = n - k * a2
        for j in range(rest // a1 + 1):
            if (rest - j * a1) % a0 == 0:
                count += 1
    return count


@dataclass(frozen=True)
class WpsInvariants:
    weights: tuple[int, int, int]
    q_x: Fraction
    m: int
    q_x_inf: Fraction

    def poincare(self, n: int) -> int:
        return poincare_coefficient(self.weights, n)

    def p_a(self, degree: int) -> int:
        """Arithmetic genus of a degree-``degree`` curve."""
        return self.poincare(degree - sum(self.weights))

    @property
    def product(self) -> int:
        a0, a1, a2 = self.weights
        return a0 * a1 * a2

    def to_json(self) -> dict:
        return {
            "weights": list(self.weights),
            "q_X": fraction_to_json(self.q_x),
            "m": self.m,
            "q_X_inf": fraction_to_json(self.q_x_inf),
        }


def wps_invariants(a0: int, a1: int, a2: int) -> WpsInvariants:
    ws = [_positive_int("weight", a) for a in (a0, a1, a2)]
    for i in range(3):
        for j in range(i + 1, 3):
            if gcd(ws[i], ws[j]) != 1:
                raise InputError(f"weights {ws[i]} and {ws[j]} are not coprime")
    w = tuple(sorted(ws))
    m = 1
    while poincare_coefficient(w, m) < 2:
        m += 1
    p = w[0] * w[1] * w[2]
    return WpsInvariants(w, Fraction(w[0], w[1] * w[2]), m, Fraction(m * m, p))


@dataclass(frozen=True)
class GonalityCases:
    case_i: tuple[Fraction, Fraction]  # lower <= pgon <= upper
    case_ii_lower: Fraction  # pgon >= this
    case_ii_strict: Fraction  # pgon > this
    non_hyperelliptic_threshold: Fraction | None = None

    @property
    def case_i_possible(self) -> bool:
        lo, hi = self.case_i
        return lo <= hi

    def admits(self, pgon: int) -> bool:
        lo, hi = self.case_i
        return lo <= pgon <= hi or (pgon >= self.case_ii_lower and pgon > self.case_ii_strict)

    def to_json(self) -> dict:
        out = {
            "case_i": {"lower": fraction_to_json(self.case_i[0]), "upper": fraction_to_json(self.case_i[1]),
                       "possible": self.case_i_possible},
            "case_ii": {"lower": fraction_to_json(self.case_ii_lower), "strict_lower": fraction_to_json(self.case_ii_strict)},
        }
        if self.non_hyperelliptic_threshold is not None:
            out["non_hyperelliptic_if_m_exceeds"] = fraction_to_json(self.non_hyperelliptic_threshold)
        return out


def wps_gonality_cases(weights: tuple[int, int, int], degree_m: int) -> GonalityCases:
    inv = wps_invariants(*weights)
    p, ma = inv.product, inv.m
    m = _positive_int("degree", degree_m)
    return GonalityCases(
        (Fraction(m * m, 4 * p), Fraction(ma * ma, p)),
        Fraction(ma * (m - ma), p),
        Fraction(ma * ma, p),
        Fraction(2 * p, ma) + ma,
    )


def pic1_bounds(h2, dh, d2) -> GonalityCases:
    """Dichotomy for ``D`` on a Picard-number-one surface with minimal class
    ``H``: ``(i) D^2/4 <= pgon <= H^2`` or ``(ii) pgon >= H(D-H), pgon > H^2``."""
    h2, dh, d2 = as_fraction(h2), as_fraction(dh), as_fraction(d2)
    if h2 <= 0:
        raise InputError("H^2 must be positive")
    if d2 * h2 > dh * dh:
        raise InputError("inconsistent data: D^2 H^2 > (D.H)^2 violates the Hodge index inequality")
    return GonalityCases((d2 / 4, h2), dh - h2, h2)


# ruled surfaces


class Parity(str, enum.Enum):
    EVEN = "Even"
    ODD = "Odd"


def ruled_threshold(gon_c: int, e_parity: Parity | str) -> Fraction:
    """Above this invariant ``e`` the pseudo-gonality of curves with positive
    components is ``deg(p|_D) gon(C)``."""
    g = Fraction(_positive_int("gon_c", gon_c))
    if Parity(e_parity) is Parity.EVEN:
        return g * g / 2 + g / 2 + Fraction(1, 8)
    return g * g


def ruled_pgon_guaranteed(e: int, gon_c: int) -> bool:
    if isinstance(e, bool) or not isinstance(e, int) or e < 0:
        raise InputError("e must be a non-negative integer")
    return e > ruled_threshold(gon_c, Parity.EVEN if e % 2 == 0 else Parity.ODD)


def hirzebruch_q(e: int) -> Fraction:
    """Minimal positive square of an effective divisor on the e-th
    Hirzebruch surface: 1 for odd e, 2 for even e."""
    if isinstance(e, bool) or not isinstance(e, int) or e < 0:
        raise InputError("e must be a non-negative integer")
    return Fraction(1 if e % 2 else 2)


def hirzebruch_q_search(e: int, bound: int = 12) -> Fraction:
    """Independent check of :func:`hirzebruch_q`: minimise ``(a C0 + b F)^2 =
    -e a^2 + 2ab`` over effective classes with ``0 <= a, b <= bound``."""
    best = None
    for a in range(bound + 1):
        for b in range(bound + 1):
            sq = -e * a * a + 2 * a * b
            if sq > 0 and (best is None or sq < best):
                best = sq
    return Fraction(best)


class ConditionVariant(str, enum.Enum):
    C = "C"
    C_INF = "C_inf"


def invariance_condition_C(pgon_d: int, q, l2, variant: ConditionVariant | str = ConditionVariant.C) -> bool:
    """``q <= pgon < sqrt(q L^2) - q`` or ``pgon < min(q, L^2/4)``; for
    ``variant="C_inf"`` pass ``q_{X,inf}`` as ``q``. The square root is
    compared exactly by squaring both (positive) sides."""
    ConditionVariant(variant)
    q, l2 = as_fraction(q), as_fraction(l2)
    if q <= 0 or l2 <= 0:
        raise InputError("q and L^2 must be positive")
    p = Fraction(_positive_int("pgon", pgon_d))
    first = q <= p and (p + q) ** 2 < q * l2
    second = p < min(q, l2 / 4)
    return first or second
