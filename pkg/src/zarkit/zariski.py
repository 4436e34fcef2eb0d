"""Zariski and integral Zariski decompositions with checkable certificates.

The classical decomposition ``D = P + N`` is computed by an exact active-set
iteration. The integral one ``D = P_Z + N_Z`` starts from ``D - floor(N)``
and moves prime curves out of ``floor(N)`` one at a time while they meet the
running divisor positively; the recorded moves form a connecting chain.
"""

from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence

from .errors import CapExceededError, InputError, NotPseudoEffectiveError, PreconditionError
from .exact_linalg import DefinitenessClass, classify_definiteness, solve_linear
from .surface_model import (
    ZERO,
    CurveConfiguration,
    Divisor,
    componentwise_max,
    is_f_nef,
    is_nef_over,
    round_down,
)

DEFAULT_ORACLE_CAP = 1_000_000


class Kind(str, enum.Enum):
    CLASSICAL = "Classical"
    INTEGRAL = "Integral"


@dataclass(frozen=True)
class Check:
    label: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        out = {"label": self.label, "passed": self.passed}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class Certificate:
    checks: tuple[Check, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_json() for c in self.checks]}


@dataclass(frozen=True)
class ConnectingChain:
    """``start = D_0 < D_1 < ... < D_m = end`` where each step adds one prime
    curve meeting the previous divisor positively."""

    start: Divisor
    steps: tuple[int, ...]
    end: Divisor

    def divisors(self) -> list[Divisor]:
        cfg = self.start.config
        out = [self.start]
        for i in self.steps:
            out.append(out[-1] + cfg.curve(i))
        return out

    def is_valid(self) -> bool:
        cfg = self.start.config
        running = self.start
        for i in self.steps:
            if running.dot_curve(i) <= 0:
                return False
            running = running + cfg.curve(i)
        return running == self.end

    def to_json(self) -> dict:
        from .serialize import divisor_to_json

        names = self.start.config.curves
        return {
            "start": divisor_to_json(self.start),
            "steps": [names[i] for i in self.steps],
            "end": divisor_to_json(self.end),
        }


@dataclass(frozen=True)
class Decomposition:
    divisor: Divisor
    positive: Divisor
    negative: Divisor
    kind: Kind
    certificate: Certificate
    chain: ConnectingChain | None = None
    classical: "Decomposition | None" = field(default=None, repr=False)

    def to_json(self) -> dict:
        from .serialize import divisor_to_json

        out = {
            "kind": self.kind.value,
            "divisor": divisor_to_json(self.divisor),
            "positive": divisor_to_json(self.positive),
            "negative": divisor_to_json(self.negative),
            "certificate": self.certificate.to_json(),
        }
        if self.chain is not None:
            out["chain"] = self.chain.to_json()
        if self.classical is not None:
            out["classical"] = {
                "positive": divisor_to_json(self.classical.positive),
                "negative": divisor_to_json(self.classical.negative),
            }
        return out


def _candidates(cfg: CurveConfiguration, allowed: Iterable[int] | None) -> list[int]:
    exc = cfg.exceptional
    if allowed is not None:
        exc = exc & set(allowed)
    return sorted(exc)


def _require_pseudo_effective(d: Divisor, assume_pseudo_effective: bool):
    if not d.is_effective and not assume_pseudo_effective:
        raise PreconditionError(
            "divisor is not effective; pass assume_pseudo_effective=True to assert "
            "pseudo-effectivity within the model"
        )


def _solve_on_support(d: Divisor, support: Sequence[int]) -> Divisor:
    """The divisor ``N`` on ``support`` with ``(d - N).C = 0`` for every C there."""
    cfg = d.config
    m = cfg.gram.principal(support)
    rhs = [d.dot_curve(j) for j in support]
    sol = solve_linear(m, rhs)
    if sol is None:  # pragma: no cover - excluded by negative definiteness
        raise NotPseudoEffectiveError("singular system on the active support")
    vec = [ZERO] * cfg.n
    for i, v in zip(support, sol):
        vec[i] = v
    return Divisor(cfg, tuple(vec))


def zariski_decompose(
    d: Divisor,
    *,
    assume_pseudo_effective: bool = False,
    allowed: Iterable[int] | None = None,
) -> Decomposition:
    """Classical Zariski decomposition within the model.

    ``allowed`` restricts the curves that may enter the negative part (a
    property imposed on negative-part components); by default every
    exceptional curve may.
    """
    _require_pseudo_effective(d, assume_pseudo_effective)
    cfg = d.config
    cand = _candidates(cfg, allowed)
    support: list[int] = []
    n = cfg.zero()
    while True:
        p = d - n
        new = [i for i in cand if i not in support and p.dot_curve(i) < 0]
        if not new:
            break
        support = sorted(support + new)
        cls = classify_definiteness(cfg.gram.principal(support))
        if cls is not DefinitenessClass.NEGATIVE_DEFINITE:
            names = [cfg.curves[i] for i in support]
            raise NotPseudoEffectiveError(
                f"active support {names} is {cls.value}: divisor is not pseudo-effective within the model"
            )
        n = _solve_on_support(d, support)
        if not n.is_effective:
            raise NotPseudoEffectiveError(
                "negative part acquired a negative coefficient: divisor is not pseudo-effective within the model"
            )
    p = d - n
    cert = classical_certificate(d, p, n, allowed=allowed)
    return Decomposition(d, p, n, Kind.CLASSICAL, cert)


def classical_certificate(d: Divisor, p: Divisor, n: Divisor, *, allowed=None) -> Certificate:
    cfg = d.config
    cand = _candidates(cfg, allowed)
    checks = [
        Check("reconstruction", p + n == d, "positive + negative == divisor"),
        Check("positive_part_f_nef", is_f_nef(p, cand)),
    ]
    if n.is_zero:
        checks.append(Check("negative_part_definite", True, "negative part is zero"))
    else:
        cls = classify_definiteness(cfg.gram.principal(n.support))
        checks.append(
            Check(
                "negative_part_definite",
                n.is_effective and set(n.support) <= set(cand) and cls is DefinitenessClass.NEGATIVE_DEFINITE,
                f"support class {cls.value}",
            )
        )
    checks.append(
        Check("positive_orthogonal_to_negative", all(p.dot_curve(i) == 0 for i in n.support))
    )
    return Certificate(tuple(checks))


def enu_contains(d: Divisor, b: Divisor, ring: str = "R", *, allowed=None) -> bool:
    """Membership of ``b`` in the set of negative definite exceptional
    ``b > 0`` (integral when ``ring == "Z"``) with ``b - d`` nef over ``b``."""
    if b.is_zero or not b.is_effective:
        return False
    if ring == "Z" and not b.is_integral:
        return False
    if not set(b.support) <= set(_candidates(d.config, allowed)):
        return False
    if classify_definiteness(d.config.gram.principal(b.support)) is not DefinitenessClass.NEGATIVE_DEFINITE:
        return False
    return is_nef_over(b - d, b)


@dataclass(frozen=True)
class ZPositivity:
    """Verdict of :func:`is_z_positive`: a connecting chain from
    ``d - floor(N)`` to ``d`` or a blocking divisor."""

    positive: bool
    chain: ConnectingChain | None = None
    blocker: Divisor | None = None

    def to_json(self) -> dict:
        from .serialize import divisor_to_json

        out: dict = {"z_positive": self.positive}
        if self.chain is not None:
            out["chain"] = self.chain.to_json()
        if self.blocker is not None:
            out["blocker"] = divisor_to_json(self.blocker)
        return out


def _greedy_chain(start: Divisor, target: Divisor, rng: random.Random | None = None):
    """Greedily add curves from ``target - start`` meeting the running divisor
    positively. Returns (steps, stopping divisor)."""
    cfg = start.config
    running = start
    remaining = list((target - start).coeffs)
    steps = []
    while any(remaining):
        ok = [i for i, r in enumerate(remaining) if r > 0 and running.dot_curve(i) > 0]
        if not ok:
            break
        i = rng.choice(ok) if rng is not None else ok[0]
        steps.append(i)
        running = running + cfg.curve(i)
        remaining[i] -= 1
    return steps, running


def is_z_positive(
    d: Divisor,
    *,
    assume_pseudo_effective: bool = False,
    allowed: Iterable[int] | None = None,
    classical: Decomposition | None = None,
    rng: random.Random | None = None,
) -> ZPositivity:
    cl = classical or zariski_decompose(d, assume_pseudo_effective=assume_pseudo_effective, allowed=allowed)
    start = d - round_down(cl.negative)
    steps, stop = _greedy_chain(start, d, rng)
    if stop == d:
        return ZPositivity(True, chain=ConnectingChain(start, tuple(steps), d))
    return ZPositivity(False, blocker=d - stop)


def int_zariski_decompose(
    d: Divisor,
    *,
    assume_pseudo_effective: bool = False,
    allowed: Iterable[int] | None = None,
    rng: random.Random | None = None,
) -> Decomposition:
    """Integral Zariski decomposition.

    Ties among curves eligible to move are broken by lowest index, or at
    random when ``rng`` is given; the result does not depend on the choice.
    """
    cl = zariski_decompose(d, assume_pseudo_effective=assume_pseudo_effective, allowed=allowed)
    cfg = d.config
    n0 = round_down(cl.negative)
    p0 = d - n0
    running, rest = p0, list(n0.coeffs)
    steps = []
    while True:
        ok = [i for i, r in enumerate(rest) if r >= 1 and running.dot_curve(i) > 0]
        if not ok:
            break
        i = rng.choice(ok) if rng is not None else ok[0]
        steps.append(i)
        running = running + cfg.curve(i)
        rest[i] -= 1
    pz = running
    nz = Divisor(cfg, tuple(rest))
    chain = ConnectingChain(p0, tuple(steps), pz)
    cert = integral_certificate(d, pz, nz, allowed=allowed, classical=cl)
    return Decomposition(d, pz, nz, Kind.INTEGRAL, cert, chain=chain, classical=cl)


def integral_certificate(d: Divisor, pz: Divisor, nz: Divisor, *, allowed=None, classical=None) -> Certificate:
    cfg = d.config
    cand = _candidates(cfg, allowed)
    checks = [Check("reconstruction", pz + nz == d, "positive + negative == divisor")]
    zpos = _z_positive_of_positive_part(pz, classical, nz, allowed)
    checks.append(Check("positive_part_z_positive", zpos.positive, "" if zpos.positive else f"blocker {zpos.blocker}"))
    checks.append(Check("negative_part_integral", nz.is_integral))
    if nz.is_zero:
        checks.append(Check("negative_part_definite", True, "negative part is zero"))
    else:
        cls = classify_definiteness(cfg.gram.principal(nz.support))
        checks.append(
            Check(
                "negative_part_definite",
                nz.is_effective and set(nz.support) <= set(cand) and cls is DefinitenessClass.NEGATIVE_DEFINITE,
                f"support class {cls.value}",
            )
        )
    checks.append(
        Check(
            "minus_positive_nef_over_negative",
            nz.is_effective and is_nef_over(-pz, nz),
        )
    )
    if classical is not None:
        checks.append(Check("negative_below_classical", nz <= classical.negative))
    return Certificate(tuple(checks))


def _z_positive_of_positive_part(pz: Divisor, classical, nz: Divisor, allowed) -> ZPositivity:
    # the classical decomposition of P_Z is P + (N - N_Z) whenever N_Z <= N
    cl_pz = None
    if classical is not None and nz <= classical.negative:
        neg = classical.negative - nz
        cl_pz = Decomposition(pz, classical.positive, neg, Kind.CLASSICAL,
                              classical_certificate(pz, classical.positive, neg, allowed=allowed))
        if not cl_pz.certificate.passed:
            cl_pz = None
    return is_z_positive(pz, assume_pseudo_effective=True, allowed=allowed, classical=cl_pz)


def enu_max(
    d: Divisor,
    ring: str = "R",
    *,
    assume_pseudo_effective: bool = False,
    allowed: Iterable[int] | None = None,
) -> Divisor | None:
    """The maximum element of the R- or Z-version of the blocking set, or
    ``None`` when the set is empty."""
    if ring not in ("R", "Z"):
        raise InputError("ring must be 'R' or 'Z'")
    if ring == "R":
        n = zariski_decompose(d, assume_pseudo_effective=assume_pseudo_effective, allowed=allowed).negative
    else:
        n = int_zariski_decompose(d, assume_pseudo_effective=assume_pseudo_effective, allowed=allowed).negative
    return None if n.is_zero else n


def _box(upper: Sequence[int], cap: int, what: str):
    size = prod(u + 1 for u in upper)
    if size > cap:
        raise CapExceededError(f"{what}: search space {size} exceeds cap {cap}", size=size, cap=cap)
    return itertools.product(*(range(u + 1) for u in upper))


def oracle_int_zariski(
    d: Divisor,
    *,
    assume_pseudo_effective: bool = False,
    allowed: Iterable[int] | None = None,
    cap: int = DEFAULT_ORACLE_CAP,
) -> Decomposition:
    """Brute-force integral decomposition: enumerate every integral
    ``0 < B <= floor(N)`` and keep the members of the Z-blocking set."""
    cl = zariski_decompose(d, assume_pseudo_effective=assume_pseudo_effective, allowed=allowed)
    cfg = d.config
    upper = [int(c) for c in round_down(cl.negative).coeffs]
    members = []
    for vec in _box(upper, cap, "oracle_int_zariski"):
        if not any(vec):
            continue
        b = Divisor(cfg, tuple(Fraction(v) for v in vec))
        if enu_contains(d, b, "Z", allowed=allowed):
            members.append(b)
    if not members:
        nz = cfg.zero()
    else:
        nz = members[0]
        for b in members[1:]:
            nz = componentwise_max(nz, b)
        if nz not in members:  # pragma: no cover - the set is closed under max
            raise AssertionError("componentwise max of the blocking set is not a member")
    pz = d - nz
    cert = integral_certificate(d, pz, nz, allowed=allowed, classical=cl)
    return Decomposition(d, pz, nz, Kind.INTEGRAL, cert, classical=cl)


def classical_candidates(d: Divisor, *, allowed: Iterable[int] | None = None) -> list[tuple[Divisor, Divisor]]:
    """Uniqueness oracle: for every subset ``S`` of candidate curves with a
    negative definite form, solve the orthogonality system on ``S`` and keep
    the distinct ``(P, N)`` satisfying all three classical axioms."""
    cfg = d.config
    cand = _candidates(cfg, allowed)
    found: list[tuple[Divisor, Divisor]] = []
    for r in range(len(cand) + 1):
        for sub in itertools.combinations(cand, r):
            if sub:
                if classify_definiteness(cfg.gram.principal(sub)) is not DefinitenessClass.NEGATIVE_DEFINITE:
                    continue
                n = _solve_on_support(d, sub)
            else:
                n = cfg.zero()
            p = d - n
            if classical_certificate(d, p, n, allowed=allowed).passed and (p, n) not in found:
                found.append((p, n))
    return found
