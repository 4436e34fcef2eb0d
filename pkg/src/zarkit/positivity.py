"""Bigness, the reflection ``P - N``, connectedness notions and the audit of
the implications between them."""

from __future__ import annotations

import dataclasses
import enum
import random
from dataclasses import dataclass
from math import lcm, prod

import numpy as np

from .errors import CapExceededError, InputError, PreconditionError, UndecidableError
from .exact_linalg import DefinitenessClass, classify_definiteness, signature
from .surface_model import CurveConfiguration, Divisor, is_nef
from .zariski import is_z_positive, zariski_decompose

DEFAULT_SPLIT_CAP = 1_000_000


class BigMode(str, enum.Enum):
    ABSOLUTE = "absolute"
    RELATIVE = "relative"
    BIRATIONAL = "birational"


def absolute_view(cfg: CurveConfiguration) -> CurveConfiguration:
    """The same curves viewed over a point: every curve exceptional."""
    if cfg.is_absolute:
        return cfg
    return dataclasses.replace(cfg, exceptional=frozenset(range(cfg.n)))


def to_absolute(d: Divisor) -> Divisor:
    return Divisor(absolute_view(d.config), d.coeffs)


def _find_nef_class(cfg: CurveConfiguration) -> Divisor | None:
    # a curve with non-negative self-intersection meets every curve non-negatively
    for i in range(cfg.n):
        if cfg.gram[i, i] >= 0:
            return cfg.curve(i)
    return None


def is_big(
    d: Divisor,
    mode: BigMode | str = BigMode.ABSOLUTE,
    *,
    nef_class: Divisor | None = None,
    assume_pseudo_effective: bool = False,
) -> bool:
    """Bigness within the model.

    absolute: ``P^2 > 0`` for the positive part of the absolute Zariski
    decomposition. A non-effective ``d`` with ``d^2 > 0`` is decided by the
    sign of ``d.F`` for a nef class ``F`` (caller-supplied or a curve of
    non-negative square). relative: ``d.F > 0`` for the fibre class.
    birational: always true.
    """
    mode = BigMode(mode)
    if mode is BigMode.BIRATIONAL:
        return True
    if mode is BigMode.RELATIVE:
        if d.config.fiber_class is None:
            raise UndecidableError("relative bigness needs fiber_class")
        return d.dot(d.config.fiber()) > 0
    if d.is_effective or assume_pseudo_effective:
        p = zariski_decompose(to_absolute(d), assume_pseudo_effective=assume_pseudo_effective).positive
        return p.square() > 0
    return is_big_by_nef_class(d, nef_class)


def is_big_by_nef_class(d: Divisor, nef_class: Divisor | None = None) -> bool:
    """For ``d^2 > 0`` exactly one of ``d`` and ``-d`` is big, and the big one
    meets a non-zero nef class positively."""
    if d.square() <= 0:
        raise UndecidableError("cannot decide bigness of a non-effective class with d^2 <= 0 within the model")
    f = nef_class if nef_class is not None else _find_nef_class(d.config)
    if f is None:
        raise UndecidableError("no nef class available in the model; supply one")
    if not is_nef(f):
        raise InputError("supplied nef_class is not nef within the model")
    s = d.dot(f)
    if s == 0:
        raise UndecidableError("d.F = 0 for the available nef class")
    return s > 0


def reflection(d: Divisor, *, assume_pseudo_effective: bool = False) -> Divisor:
    """``P - N`` for the absolute decomposition ``d = P + N``; it has the same
    square as ``d`` and is big."""
    if not d.is_effective and not assume_pseudo_effective:
        raise PreconditionError("reflection needs a pseudo-effective divisor")
    if d.square() <= 0:
        raise PreconditionError(f"reflection needs d^2 > 0 (got {d.square()})")
    dec = zariski_decompose(to_absolute(d), assume_pseudo_effective=assume_pseudo_effective)
    out = Divisor(d.config, (dec.positive - dec.negative).coeffs)
    if out.square() != d.square():  # pragma: no cover - P.N = 0
        raise AssertionError("reflection changed the square")
    if dec.positive.square() <= 0:  # pragma: no cover
        raise AssertionError("reflection is not big")
    return out


# connectedness


@dataclass(frozen=True)
class Split:
    first: Divisor
    second: Divisor


@dataclass(frozen=True)
class ConnectednessVerdict:
    numerically_connected: bool
    chain_connected: bool
    numerical_witness: Split | None = None
    chain_witness: Split | None = None

    def to_json(self) -> dict:
        from .serialize import divisor_to_json

        out: dict = {
            "numerically_connected": self.numerically_connected,
            "chain_connected": self.chain_connected,
        }
        for key, w in (("numerical_witness", self.numerical_witness), ("chain_witness", self.chain_witness)):
            if w is not None:
                out[key] = {"D1": divisor_to_json(w.first), "D2": divisor_to_json(w.second)}
        return out


def _integral_coeffs(d: Divisor) -> list[int]:
    if not d.is_effective or not d.is_integral:
        raise PreconditionError("connectedness needs an effective integral divisor")
    if d.is_zero:
        raise PreconditionError("connectedness needs a non-zero divisor")
    return [int(c) for c in d.coeffs]


def _scaled_gram(cfg: CurveConfiguration) -> np.ndarray:
    # a positive rescaling preserves every sign we test
    den = lcm(*(v.denominator for row in cfg.gram.rows for v in row))
    return np.array([[int(v * den) for v in row] for row in cfg.gram.rows], dtype=np.int64)


def _subdivisors(coeffs: list[int], cap: int) -> np.ndarray:
    size = prod(c + 1 for c in coeffs)
    if size > cap:
        raise CapExceededError(f"{size} subdivisors exceed cap {cap}", size=size, cap=cap)
    grids = np.meshgrid(*(np.arange(c + 1, dtype=np.int64) for c in coeffs), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def connectedness(d: Divisor, cap: int = DEFAULT_SPLIT_CAP) -> ConnectednessVerdict:
    """Exhaustive test over all splits ``d = D1 + D2`` with ``D1, D2 > 0``."""
    coeffs = _integral_coeffs(d)
    g = _scaled_gram(d.config)
    total = np.array(coeffs, dtype=np.int64)
    sub = _subdivisors(coeffs, cap)
    keep = sub.any(axis=1) & (sub != total).any(axis=1)
    d1 = sub[keep]
    d2 = total - d1
    i1 = d1 @ g  # D1.C_j
    cross = (i1 * d2).sum(axis=1)
    num_bad = np.flatnonzero(cross <= 0)
    # -D1 nef over D2: D1.C <= 0 on every component of D2
    chain_bad = np.flatnonzero(np.all((i1 <= 0) | (d2 == 0), axis=1))

    def split(k) -> Split:
        a = d.config.divisor([int(v) for v in d1[k]])
        return Split(a, d - a)

    nc = num_bad.size == 0
    cc = chain_bad.size == 0
    return ConnectednessVerdict(
        nc,
        cc,
        None if nc else split(num_bad[0]),
        None if cc else split(chain_bad[0]),
    )


def chain_connected_by_chains(d: Divisor, cap: int = DEFAULT_SPLIT_CAP) -> bool:
    """Chain-connectedness via connecting chains: from every subdivisor
    ``0 < D0 <= d`` the greedy chain must reach ``d``."""
    coeffs = _integral_coeffs(d)
    g = _scaled_gram(d.config)
    total = np.array(coeffs, dtype=np.int64)
    for row in _subdivisors(coeffs, cap):
        if not row.any():
            continue
        cur = row.copy()
        while True:
            rest = total - cur
            if not rest.any():
                break
            meets = cur @ g
            ok = np.flatnonzero((rest > 0) & (meets > 0))
            if ok.size == 0:
                return False
            cur[ok[0]] += 1
    return True


@dataclass(frozen=True)
class AuditReport:
    nef_and_big: bool
    numerically_connected: bool
    chain_connected: bool
    z_positive: bool
    chain_connected_by_chains: bool

    @property
    def implications_hold(self) -> bool:
        return (
            (not self.nef_and_big or self.numerically_connected)
            and (not self.numerically_connected or self.chain_connected)
            and (not self.chain_connected or self.z_positive)
        )

    @property
    def algorithms_agree(self) -> bool:
        return self.chain_connected == self.chain_connected_by_chains

    def to_json(self) -> dict:
        return {
            "nef_and_big": self.nef_and_big,
            "numerically_connected": self.numerically_connected,
            "chain_connected": self.chain_connected,
            "z_positive": self.z_positive,
            "implications_hold": self.implications_hold,
            "chain_algorithms_agree": self.algorithms_agree,
        }


def implication_audit(d: Divisor, cap: int = DEFAULT_SPLIT_CAP) -> AuditReport:
    """Evaluate nef-and-big, numerical connectedness, chain-connectedness and
    Z-positivity of an effective integral ``d`` whose support is not
    negative definite."""
    _integral_coeffs(d)
    cls = classify_definiteness(d.config.gram.principal(d.support))
    if cls is DefinitenessClass.NEGATIVE_DEFINITE:
        raise PreconditionError("implication audit needs a divisor whose support is not negative definite")
    verdict = connectedness(d, cap)
    report = AuditReport(
        nef_and_big=is_nef(d) and d.square() > 0,
        numerically_connected=verdict.numerically_connected,
        chain_connected=verdict.chain_connected,
        z_positive=is_z_positive(d).positive,
        chain_connected_by_chains=chain_connected_by_chains(d, cap),
    )
    return report


def random_hodge_config(rng: random.Random, *, max_curves: int = 6, tries: int = 50) -> CurveConfiguration | None:
    """A random configuration (entries in [-5, 5], off-diagonals >= 0) that
    can sit inside the numerical group of a projective surface: at most one
    positive eigenvalue, and no radical once a positive class exists (a
    vector orthogonal to a class of positive square has negative square or
    is numerically trivial)."""
    from .sweep import random_config

    for _ in range(tries):
        cfg = random_config(rng, max_curves=max_curves, absolute_probability=1.0)
        n_plus, n_zero, _ = signature(cfg.gram)
        if n_plus == 0 or (n_plus == 1 and n_zero == 0):
            return cfg
    return None


def random_audit_instance(rng: random.Random, tries: int = 200) -> Divisor | None:
    """A random effective integral divisor (coefficients <= 2) on a surface-like
    configuration whose support is not negative definite."""
    for _ in range(tries):
        cfg = random_hodge_config(rng)
        if cfg is None:
            continue
        d = cfg.divisor([rng.randint(0, 2) for _ in range(cfg.n)])
        if d.is_zero:
            continue
        if classify_definiteness(cfg.gram.principal(d.support)) is DefinitenessClass.NEGATIVE_DEFINITE:
            continue
        return d
    return None


def run_audit_case(cs: int, report) -> None:
    d = random_audit_instance(random.Random(cs))
    if d is None:
        report.record("implication_chain", None, cs)
        return
    audit = implication_audit(d)
    report.record("implication_chain", audit.implications_hold, cs, str(audit.to_json()))
    report.record("chain_connectedness_algorithms", audit.algorithms_agree, cs)
