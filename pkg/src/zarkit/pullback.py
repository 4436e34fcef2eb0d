"""Birational morphisms between curve configurations and the Mumford
pull-back / push-forward calculus."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InputError, PreconditionError
from .exact_linalg import DefinitenessClass, classify_definiteness, solve_linear
from .surface_model import ZERO, CurveConfiguration, Divisor, round_up


@dataclass(frozen=True)
class BirationalModel:
    """``pi: source -> target``.

    ``proper_transform[i]`` is the source index of the proper transform of
    target curve ``i``; the remaining source curves are ``pi``-exceptional.
    ``anticanonical`` is ``pi^*K - K'`` as a source divisor supported on the
    exceptional set, when known.
    """

    source: CurveConfiguration
    target: CurveConfiguration
    proper_transform: tuple[int, ...]
    anticanonical: Divisor | None = None
    _images: tuple[Divisor, ...] = field(default=(), init=False, repr=False, compare=False)

    def __post_init__(self):
        pt = tuple(int(i) for i in self.proper_transform)
        object.__setattr__(self, "proper_transform", pt)
        if len(pt) != self.target.n:
            raise InputError("proper_transform needs one source curve per target curve")
        if len(set(pt)) != len(pt) or any(not 0 <= i < self.source.n for i in pt):
            raise InputError("proper_transform must be injective into the source curves")
        exc = self.exceptional_set
        if exc:
            cls = classify_definiteness(self.source.gram.principal(exc))
            if cls is not DefinitenessClass.NEGATIVE_DEFINITE:
                raise InputError(f"exceptional set is {cls.value}, expected NegativeDefinite")
        if not set(exc) <= self.source.exceptional:
            raise InputError("pi-exceptional curves must be flagged exceptional on the source")
        for i in self.target.exceptional:
            if pt[i] not in self.source.exceptional:
                raise InputError("proper transforms of exceptional target curves must be exceptional")
        if self.anticanonical is not None:
            if self.anticanonical.config != self.source:
                raise InputError("anticanonical cycle must live on the source")
            if not set(self.anticanonical.support) <= set(exc):
                raise InputError("anticanonical cycle must be supported on the exceptional set")
        images = tuple(self._solve(self.target.curve(i)) for i in range(self.target.n))
        object.__setattr__(self, "_images", images)
        self._validate_projection_formula()

    @property
    def exceptional_set(self) -> tuple[int, ...]:
        image = set(self.proper_transform)
        return tuple(i for i in range(self.source.n) if i not in image)

    def exceptional_curves(self) -> list[Divisor]:
        return [self.source.curve(i) for i in self.exceptional_set]

    def proper_transform_of(self, d: Divisor) -> Divisor:
        if d.config != self.target:
            raise InputError("divisor does not live on the target")
        vec = [ZERO] * self.source.n
        for i, c in enumerate(d.coeffs):
            vec[self.proper_transform[i]] = c
        return Divisor(self.source, tuple(vec))

    def _solve(self, d: Divisor) -> Divisor:
        hat = self.proper_transform_of(d)
        exc = self.exceptional_set
        if not exc:
            return hat
        sol = solve_linear(self.source.gram.principal(exc), [-hat.dot_curve(j) for j in exc])
        if sol is None:  # pragma: no cover - excluded by negative definiteness
            raise AssertionError("singular pull-back system")
        vec = list(hat.coeffs)
        for j, a in zip(exc, sol):
            vec[j] = a
        return Divisor(self.source, tuple(vec))

    def _validate_projection_formula(self):
        n = self.target.n
        for i in range(n):
            for j in range(i, n):
                if self._images[i].dot(self._images[j]) != self.target.gram[i, j]:
                    raise InputError(
                        f"projection formula fails for {self.target.curves[i]}, {self.target.curves[j]}: "
                        "the source gram is not a blow-up of the target gram"
                    )

    def pullback(self, d: Divisor) -> Divisor:
        return mumford_pullback(self, d)

    def pushforward(self, d: Divisor) -> Divisor:
        return pushforward(self, d)


def mumford_pullback(m: BirationalModel, d: Divisor) -> Divisor:
    """``D-hat + sum a_i E_i`` with ``(D-hat + sum a_i E_i).E_j = 0`` for all j."""
    if d.config != m.target:
        raise InputError("divisor does not live on the target")
    out = [ZERO] * m.source.n
    for c, img in zip(d.coeffs, m._images):
        if c:
            out = [a + c * b for a, b in zip(out, img.coeffs)]
    return Divisor(m.source, tuple(out))


def pushforward(m: BirationalModel, d: Divisor) -> Divisor:
    if d.config != m.source:
        raise InputError("divisor does not live on the source")
    return Divisor(m.target, tuple(d.coeffs[j] for j in m.proper_transform))


def compose(outer: BirationalModel, inner: BirationalModel) -> BirationalModel:
    """``inner: X1 -> X0`` followed by ``outer: X2 -> X1`` gives ``X2 -> X0``;
    the anticanonical cycles add as ``outer^* Delta_inner + Delta_outer``."""
    if outer.target != inner.source:
        raise InputError("outer.target must equal inner.source")
    pt = tuple(outer.proper_transform[j] for j in inner.proper_transform)
    delta = None
    if inner.anticanonical is not None and outer.anticanonical is not None:
        delta = outer.pullback(inner.anticanonical) + outer.anticanonical
    composite = BirationalModel(outer.source, inner.target, pt, delta)
    for i in range(inner.target.n):
        c = inner.target.curve(i)
        if composite.pullback(c) != outer.pullback(inner.pullback(c)):  # pragma: no cover
            raise AssertionError("composite pull-back disagrees with the chained pull-back")
    return composite


class Basis(str, enum.Enum):
    TOTAL = "total"
    PRIME = "prime"


@dataclass(frozen=True)
class BlowupPoint:
    """A point on ``curve`` blown up ``multiplicity`` times along successive
    infinitely near points off the proper transform of the curve, with
    residue degree ``degree``."""

    curve: str | int
    multiplicity: int = 1
    degree: int = 1


def blowup_chain_builder(
    target: CurveConfiguration,
    points: Sequence[BlowupPoint | tuple],
    *,
    basis: Basis | str = Basis.TOTAL,
    prefix: str | None = None,
) -> BirationalModel:
    """Blow up each point ``multiplicity`` times as in the transverse local
    model: the proper transform of the base curve meets only the first
    exceptional divisor, and every point lies on no other listed curve.

    TOTAL basis: classes ``E^k`` (total transforms), pairwise orthogonal with
    ``(E^k)^2 = -degree``; the base curve meets ``E^1`` with multiplicity
    ``degree``. PRIME basis: the prime curves ``F_k = E^k - E^{k+1}``.
    Either way the anticanonical cycle is ``-sum_k E^k``.

    New curves are named ``{prefix}{j}.{k}``; ``prefix`` defaults to ``E``
    or ``F`` by basis (pass another one when blowing up a blow-up).
    """
    basis = Basis(basis)
    pts = [p if isinstance(p, BlowupPoint) else BlowupPoint(*p) for p in points]
    for p in pts:
        if isinstance(p.multiplicity, bool) or not isinstance(p.multiplicity, int) or p.multiplicity < 1:
            raise InputError(f"invalid multiplicity {p.multiplicity!r}")
        if isinstance(p.degree, bool) or not isinstance(p.degree, int) or p.degree < 1:
            raise InputError(f"invalid degree {p.degree!r}")
    base = [target.index(p.curve) if isinstance(p.curve, str) else int(p.curve) for p in pts]
    if any(not 0 <= b < target.n for b in base):
        raise InputError("base curve index out of range")

    if prefix is None:
        prefix = "E" if basis is Basis.TOTAL else "F"
    n0 = target.n
    names = list(target.curves)
    blocks = []  # (start index, multiplicity, degree, base)
    for j, (p, b) in enumerate(zip(pts, base), start=1):
        start = len(names)
        names += [f"{prefix}{j}.{k}" for k in range(1, p.multiplicity + 1)]
        blocks.append((start, p.multiplicity, p.degree, b))
    if len(set(names)) != len(names):
        raise InputError("exceptional curve names clash with target curve names")

    n = len(names)
    g = [[ZERO] * n for _ in range(n)]
    for i in range(n0):
        for k in range(n0):
            g[i][k] = target.gram[i, k]
    for start, m, deg, b in blocks:
        g[b][b] -= deg
        g[b][start] = g[start][b] = Fraction(deg)
        for k in range(m):
            idx = start + k
            if basis is Basis.TOTAL:
                g[idx][idx] = Fraction(-deg)
            else:
                g[idx][idx] = Fraction(-2 * deg if k < m - 1 else -deg)
                if k < m - 1:
                    g[idx][idx + 1] = g[idx + 1][idx] = Fraction(deg)

    exc_new = list(range(n0, n))
    delta = [ZERO] * n
    for start, m, _, _ in blocks:
        for k in range(m):
            delta[start + k] = Fraction(-1) if basis is Basis.TOTAL else Fraction(-(k + 1))

    canonical = None
    if target.canonical is not None:
        canonical = list(target.canonical)
        for start, m, deg, b in blocks:
            canonical[b] += deg
        for start, m, deg, _ in blocks:
            for k in range(m):
                canonical.append(Fraction(-deg) if basis is Basis.TOTAL or k == m - 1 else ZERO)
    source = CurveConfiguration(
        tuple(names),
        g,
        frozenset(set(target.exceptional) | set(exc_new)),
        canonical=tuple(canonical) if canonical is not None else None,
        degrees=tuple(target.degrees) + tuple(deg for _, m, deg, _ in blocks for _ in range(m)),
    )
    model = BirationalModel(source, target, tuple(range(n0)), Divisor(source, tuple(delta)))
    if target.fiber_class is not None:
        f = model.pullback(target.fiber())
        source = CurveConfiguration(
            source.curves, source.gram, source.exceptional, source.canonical, f.coeffs, source.degrees
        )
        model = BirationalModel(source, target, model.proper_transform, Divisor(source, tuple(delta)))
    return model


def cluster_cycle(model: BirationalModel) -> Divisor:
    """``Z = sum_k E^k`` (that is ``-Delta``) for a builder model."""
    if model.anticanonical is None:
        raise PreconditionError("model carries no anticanonical cycle")
    return -model.anticanonical


# sweep support


def random_blowup(rng: random.Random, target: CurveConfiguration, basis: Basis = Basis.PRIME) -> BirationalModel:
    k = rng.randint(1, 3)
    pts = [BlowupPoint(rng.randrange(target.n), rng.randint(1, 3), rng.randint(1, 2)) for _ in range(k)]
    return blowup_chain_builder(target, pts, basis=basis)


def random_fractional_exceptional(rng: random.Random, model: BirationalModel) -> Divisor:
    vec = [ZERO] * model.source.n
    for j in model.exceptional_set:
        den = rng.randint(1, 4)
        vec[j] = Fraction(rng.randrange(den), den)
    return Divisor(model.source, tuple(vec))


def run_pullback_case(cs: int, report) -> None:
    from .sweep import random_config, random_integral_effective
    from .zariski import int_zariski_decompose, is_z_positive, zariski_decompose

    rng = random.Random(cs)
    target = random_config(rng, max_curves=4)
    model = random_blowup(rng, target)
    d1 = random_integral_effective(rng, target)
    d2 = random_integral_effective(rng, target)
    p1, p2 = model.pullback(d1), model.pullback(d2)
    report.record("projection_formula", p1.dot(p2) == d1.dot(d2), cs)
    report.record("pullback_orthogonal", all(p1.dot_curve(j) == 0 for j in model.exceptional_set), cs)
    report.record("pushforward_pullback", model.pushforward(p1) == d1, cs)

    dz = int_zariski_decompose(d1).positive
    pulled = model.pullback(dz)
    for name, z in (
        ("z_positive_round_up", round_up(pulled) - pulled),
        ("z_positive_fractional", random_fractional_exceptional(rng, model)),
    ):
        verdict = is_z_positive(pulled + z, assume_pseudo_effective=True)
        report.record(name, verdict.positive, cs, str(verdict.blocker))

    cl = zariski_decompose(d1)
    z = random_fractional_exceptional(rng, model)
    lifted = zariski_decompose(model.pullback(d1) + z, assume_pseudo_effective=True)
    report.record(
        "pullback_classical_compatibility",
        lifted.positive == model.pullback(cl.positive) and lifted.negative == model.pullback(cl.negative) + z,
        cs,
    )
