"""Cluster invariants and the numerical side of Reider-type statements.

Nothing here decides surjectivity of a restriction map. The checks report
which numerical hypotheses hold and enumerate the curves ``B`` that could
obstruct separation, within an explicit coefficient cap.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceededError, InputError, PreconditionError, UndecidableError
from .exact_linalg import DefinitenessClass, as_fraction, classify_definiteness, fraction_to_json
from .positivity import BigMode, is_big, to_absolute
from .pullback import BirationalModel, BlowupPoint, blowup_chain_builder, cluster_cycle
from .surface_model import CurveConfiguration, Divisor, is_nef
from .zariski import int_zariski_decompose, zariski_decompose

DEFAULT_CAP = 16
DEFAULT_Q_CAP = 4
DEFAULT_ENUMERATION_LIMIT = 2_000_000


def delta_of(model: BirationalModel, z: Divisor) -> Fraction:
    """``-(Delta - Z)^2`` when ``Delta - Z`` is not effective, else 0."""
    if model.anticanonical is None:
        raise PreconditionError("model carries no anticanonical cycle")
    if z.config != model.source:
        raise InputError("Z must live on the source of the model")
    if not (z.is_integral and z.is_effective and set(z.support) <= set(model.exceptional_set)):
        raise InputError("Z must be integral, effective and exceptional")
    diff = model.anticanonical - z
    return Fraction(0) if diff.is_effective else -diff.square()


class PointKind(str, enum.Enum):
    REGULAR = "Regular"
    LOG_TERMINAL = "LogTerminal"
    OTHER = "Other"


def delta_point_bound(kind: PointKind | str, degree: int = 1) -> Fraction:
    """Upper bound for the invariant of a reduced point of the given type."""
    kind = PointKind(kind)
    if degree < 1:
        raise InputError("degree must be >= 1")
    factor = {PointKind.REGULAR: 4, PointKind.LOG_TERMINAL: 2, PointKind.OTHER: 0}[kind]
    return Fraction(factor * degree)


def delta_transverse(d: int, base_degree: int = 1) -> Fraction:
    """Bound ``4 d [k(lambda):k]`` for a reduced fibre of a pencil of degree d."""
    if d < 1 or base_degree < 1:
        raise InputError("d and base_degree must be >= 1")
    return Fraction(4 * d * base_degree)


def delta_prime(delta: Fraction, q: Fraction) -> Fraction:
    """``q (delta / 4q + 1)^2``; zero when ``delta`` is zero."""
    delta, q = Fraction(delta), Fraction(q)
    if delta == 0:
        return Fraction(0)
    if q <= 0:
        raise InputError("q must be positive")
    return q * (delta / (4 * q) + 1) ** 2


def _lattice_points(k: int, cap: int, limit: int) -> np.ndarray:
    size = (cap + 1) ** k
    if size > limit:
        raise CapExceededError(
            f"enumeration of {size} coefficient vectors exceeds limit {limit}; lower the cap", size=size, cap=limit
        )
    grids = np.meshgrid(*(np.arange(cap + 1, dtype=np.int64) for _ in range(k)), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1) if k else np.zeros((1, 0), dtype=np.int64)
    return pts[pts.any(axis=1)]


def _scale(values: Iterable[Fraction]) -> int:
    return lcm(*(Fraction(v).denominator for v in values)) or 1


def search_q(
    cfg: CurveConfiguration,
    delta: Fraction,
    *,
    incident: Sequence[int | str] | None = None,
    cap: int = DEFAULT_Q_CAP,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> tuple[Fraction, dict]:
    """``min(E^2, delta/4)`` over integral effective ``E`` with ``E^2 > 0`` and
    coefficients ``<= cap``. ``incident`` restricts to ``E`` containing one of
    the listed curves (the curves known to meet the cluster); without it all
    ``E`` count, which can only lower ``q``."""
    delta = Fraction(delta)
    inc = None
    if incident is not None:
        inc = sorted({cfg.index(c) if isinstance(c, str) else int(c) for c in incident})
    pts = _lattice_points(cfg.n, cap, limit)
    s = _scale(v for row in cfg.gram.rows for v in row)
    g = np.array([[int(v * s) for v in row] for row in cfg.gram.rows], dtype=np.int64)
    sq = np.einsum("ij,jk,ik->i", pts, g, pts)
    mask = sq > 0
    if inc is not None:
        mask &= (pts[:, inc] > 0).any(axis=1)
    best = Fraction(int(sq[mask].min()), s) if mask.any() else None
    candidates = [x for x in (best, delta / 4) if x is not None and x > 0]
    info = {"cap": cap, "incident": None if inc is None else [cfg.curves[i] for i in inc], "found": best}
    if not candidates:
        return Fraction(0), info
    return min(candidates), info


class ClusterKind(str, enum.Enum):
    EXPLICIT = "Explicit"
    TRANSVERSE = "Transverse"
    GIVEN = "Given"


@dataclass(frozen=True)
class ClusterModel:
    kind: ClusterKind
    delta: Fraction
    q: Fraction
    delta_label: str
    q_info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "delta", as_fraction(self.delta))
        object.__setattr__(self, "q", as_fraction(self.q))
        if self.delta < 0:
            raise InputError("delta must be >= 0")
        if self.delta > 0 and self.q <= 0:
            raise InputError("q must be positive")
        if self.q > self.delta / 4:
            raise InputError("q never exceeds delta/4")

    @property
    def delta_prime(self) -> Fraction:
        return delta_prime(self.delta, self.q)

    @classmethod
    def given(cls, delta, q=None) -> "ClusterModel":
        delta = as_fraction(delta)
        return cls(ClusterKind.GIVEN, delta, delta / 4 if q is None else as_fraction(q), "given")

    @classmethod
    def explicit(
        cls,
        model: BirationalModel,
        z: Divisor,
        *,
        q=None,
        incident=None,
        q_cap: int = DEFAULT_Q_CAP,
    ) -> "ClusterModel":
        delta = delta_of(model, z)
        return cls._with_q(ClusterKind.EXPLICIT, delta, "delta(pi, Z) of the explicit model", model.target, q, incident, q_cap)

    @classmethod
    def transverse(
        cls,
        target: CurveConfiguration | None,
        d: int,
        base_degree: int = 1,
        *,
        q=None,
        incident=None,
        q_cap: int = DEFAULT_Q_CAP,
    ) -> "ClusterModel":
        delta = delta_transverse(d, base_degree)
        return cls._with_q(ClusterKind.TRANSVERSE, delta, "upper bound 4 d [k(lambda):k]", target, q, incident, q_cap)

    @classmethod
    def _with_q(cls, kind, delta, label, cfg, q, incident, q_cap):
        if q is not None:
            return cls(kind, delta, min(as_fraction(q), delta / 4) if delta else Fraction(0), label, {"source": "given"})
        if cfg is None:
            return cls(kind, delta, delta / 4, label, {"source": "delta/4 (no configuration)"})
        value, info = search_q(cfg, delta, incident=incident, cap=q_cap)
        info["source"] = "search"
        return cls(kind, delta, value, label, info)

    def to_json(self) -> dict:
        info = {k: (fraction_to_json(v) if isinstance(v, Fraction) else v) for k, v in self.q_info.items()}
        return {
            "kind": self.kind.value,
            "delta": fraction_to_json(self.delta),
            "delta_label": self.delta_label,
            "q": fraction_to_json(self.q),
            "q_info": info,
            "delta_prime": fraction_to_json(self.delta_prime),
        }


def transverse_cluster(target: CurveConfiguration, points: Sequence[BlowupPoint | tuple]) -> tuple[BirationalModel, Fraction]:
    """Build the blow-up model of a transverse cluster and return it with
    its ``delta(pi, Z)`` for ``Z = sum E^k``."""
    model = blowup_chain_builder(target, points)
    return model, delta_of(model, cluster_cycle(model))


# candidate enumeration


@dataclass(frozen=True)
class Candidate:
    b: Divisor
    value: Fraction  # (d - B).B
    support_class: DefinitenessClass
    tags: tuple[str, ...] = ()

    def to_json(self) -> dict:
        from .serialize import divisor_to_json

        return {
            "B": divisor_to_json(self.b),
            "(D-B).B": fraction_to_json(self.value),
            "B^2": fraction_to_json(self.b.square()),
            "D.B": fraction_to_json(self.value + self.b.square()),
            "support_class": self.support_class.value,
            "tags": list(self.tags),
        }


def _enumerate(
    d: Divisor,
    curves: Sequence[int],
    cap: int,
    limit: int,
    lower: Fraction | None,
    upper: Fraction,
) -> list[tuple[Divisor, Fraction]]:
    """Integral ``B > 0`` on ``curves`` with coefficients ``<= cap`` and
    ``lower < (d - B).B <= upper``; vectorised over a scaled integer gram."""
    cfg = d.config
    curves = list(curves)
    pts = _lattice_points(len(curves), cap, limit)
    if pts.size == 0:
        return []
    sub = cfg.gram.principal(curves)
    dv = [d.dot_curve(j) for j in curves]
    bounds = [upper] + ([lower] if lower is not None else [])
    s = _scale([v for row in sub.rows for v in row] + dv + bounds)
    g = np.array([[int(v * s) for v in row] for row in sub.rows], dtype=np.int64)
    dvec = np.array([int(v * s) for v in dv], dtype=np.int64)
    val = pts @ dvec - np.einsum("ij,jk,ik->i", pts, g, pts)
    mask = val <= int(upper * s)
    if lower is not None:
        mask &= val > int(lower * s)
    out = []
    for row, v in zip(pts[mask], val[mask]):
        vec = [Fraction(0)] * cfg.n
        for j, c in zip(curves, row):
            vec[j] = Fraction(int(c))
        out.append((Divisor(cfg, tuple(vec)), Fraction(int(v), s)))
    out.sort(key=lambda t: t[0].coeffs)
    return out


def _support_class(b: Divisor) -> DefinitenessClass:
    return classify_definiteness(b.config.gram.principal(b.support))


def _bigness(d: Divisor) -> bool | None:
    try:
        return is_big(d)
    except UndecidableError:
        return None


@dataclass
class ReiderReport:
    variant: str
    hypotheses: dict
    regime: str
    candidates: list[Candidate] = field(default_factory=list)
    excluded: list[Candidate] = field(default_factory=list)
    undecided: list[Candidate] = field(default_factory=list)
    cluster: ClusterModel | None = None
    cap: int = DEFAULT_CAP
    notes: list[str] = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "hypotheses": self.hypotheses,
            "hypotheses_hold": self.hypotheses_hold,
            "regime": self.regime,
            "cluster": self.cluster.to_json() if self.cluster else None,
            "search": {"cap": self.cap, "complete_within_cap_only": True},
            "candidates": [c.to_json() for c in self.candidates],
            "excluded": [c.to_json() for c in self.excluded],
            "undecided": [c.to_json() for c in self.undecided],
            "incidence_with_cluster": "user-verifiable",
            "notes": list(self.notes),
        }


def check_reider_I(
    d: Divisor,
    cluster: ClusterModel,
    *,
    mode: BigMode | str = BigMode.ABSOLUTE,
    part: str = "P",
    cap: int = DEFAULT_CAP,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    context: BpfContext | str | None = None,
) -> ReiderReport:
    """Hypotheses and obstruction candidates for the first Reider-type
    statement. ``part`` is ``"P"`` (classical positive part) or ``"PZ"``
    (integral positive part, which adds the bigness of ``d + N_Z - 2B``).
    With a ``context``, each candidate is tagged with its case label from
    :func:`classify_bpf_case` (or ``"no case"``)."""
    if part not in ("P", "PZ"):
        raise InputError("part must be 'P' or 'PZ'")
    mode = BigMode(mode)
    delta = cluster.delta
    hyp: dict = {}
    notes: list[str] = []
    nz = None
    if mode is BigMode.ABSOLUTE:
        if not d.is_effective:
            raise PreconditionError("absolute check needs an effective divisor")
        dec = zariski_decompose(to_absolute(d)) if part == "P" else int_zariski_decompose(to_absolute(d))
        pos_sq = dec.positive.square()
        hyp["big"] = dec.classical.positive.square() > 0 if dec.classical else pos_sq > 0
        hyp[f"{part}^2 > delta"] = pos_sq > delta
        if part == "PZ":
            nz = Divisor(d.config, dec.negative.coeffs)
    else:
        hyp["big"] = is_big(d, mode)
        if part == "PZ":
            nz = int_zariski_decompose(d).negative
    report = ReiderReport("I", hyp, "", cluster=cluster, cap=cap, notes=notes)
    if not report.hypotheses_hold:
        report.regime = "hypothesis fails"
        return report
    report.regime = "search"
    curves = sorted(d.config.exceptional)
    for b, v in _enumerate(d, curves, cap, limit, None, delta / 4):
        tags: tuple[str, ...] = ()
        if context is not None:
            label = classify_bpf_case(d.dot(b), b.square(), context)
            tags = (f"case ({label})" if label else "no case",)
        cand = Candidate(b, v, _support_class(b), tags)
        if part == "PZ":
            big = _bigness(d + nz - 2 * b)
            if big is None:
                report.undecided.append(cand)
                continue
            if not big:
                report.excluded.append(cand)
                continue
        report.candidates.append(cand)
    if not report.candidates and not report.undecided:
        notes.append("no obstruction within the cap: the restriction map is surjective if the cap bounds every obstruction")
    return report


class Regime(str, enum.Enum):
    ALWAYS = "separation always holds"
    STRICT = "D^2 > delta'"
    BOUNDARY = "D^2 = delta'"
    INTERMEDIATE = "delta < D^2 < delta'"
    FAILS = "hypothesis fails"


_SEMIDEFINITE = {DefinitenessClass.NEGATIVE_DEFINITE, DefinitenessClass.NEGATIVE_SEMIDEFINITE_DEGENERATE}


def check_reider_II(
    d: Divisor,
    cluster: ClusterModel,
    *,
    cap: int = DEFAULT_CAP,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> ReiderReport:
    """Candidates for the second Reider-type statement: ``B > 0`` with
    ``0 < (d - B).B <= delta/4`` and ``d - 2B`` big, filtered by the regime
    of ``d^2`` against ``delta`` and ``delta'``."""
    delta, q, dp = cluster.delta, cluster.q, cluster.delta_prime
    d2 = d.square()
    hyp = {"nef": is_nef(d), "big": d2 > 0, "D^2 > delta": d2 > delta}
    report = ReiderReport("II", hyp, "", cluster=cluster, cap=cap)
    if not report.hypotheses_hold:
        report.regime = Regime.FAILS.value
        return report
    if delta == 0:
        report.regime = Regime.ALWAYS.value
        return report
    if d2 > dp:
        regime = Regime.STRICT
    elif d2 == dp:
        regime = Regime.BOUNDARY
    else:
        regime = Regime.INTERMEDIATE
    report.regime = regime.value
    lam = delta / (4 * q) + 1
    cfg = d.config
    for b, v in _enumerate(d, range(cfg.n), cap, limit, Fraction(0), delta / 4):
        cls = _support_class(b)
        big = _bigness(d - 2 * b)
        tags = []
        if cls in _SEMIDEFINITE:
            tags.append("NegativeSemidefinite")
        boundary = b.square() == q and all((d - lam * b).dot_curve(i) == 0 for i in range(cfg.n))
        if boundary:
            tags.append("Boundary")
        cand = Candidate(b, v, cls, tuple(tags))
        if big is None:
            report.undecided.append(cand)
            continue
        if not big:
            report.excluded.append(cand)
            continue
        if regime is Regime.STRICT:
            admitted = cls in _SEMIDEFINITE
        elif regime is Regime.BOUNDARY:
            admitted = cls in _SEMIDEFINITE or (boundary and q < delta / 4)
        else:
            admitted = True
        (report.candidates if admitted else report.excluded).append(cand)
    return report


class BpfContext(str, enum.Enum):
    FIBER_SPACE = "FiberSpace"
    RESOLUTION = "Resolution"
    VERY_AMPLE_FIBER = "VeryAmpleFiber"
    VERY_AMPLE_RESOLUTION = "VeryAmpleResolution"


_BPF_TABLES: dict[BpfContext, list[tuple[str, int, set[int]]]] = {
    BpfContext.FIBER_SPACE: [("i", 0, {-1}), ("ii", 1, {0})],
    BpfContext.RESOLUTION: [("i", 0, {-1})],
    BpfContext.VERY_AMPLE_FIBER: [("i", 0, {-2, -1}), ("ii", 1, {-1, 0}), ("iii", 2, {0})],
    BpfContext.VERY_AMPLE_RESOLUTION: [("i", 0, {-2, -1}), ("ii", 1, {-1})],
}


def classify_bpf_case(db, b2, context: BpfContext | str) -> str | None:
    """The case label of ``(D.B, B^2)`` in the table for ``context``, or
    ``None`` when that pair cannot obstruct."""
    context = BpfContext(context)
    db, b2 = as_fraction(db), as_fraction(b2)
    for label, want_db, want_b2 in _BPF_TABLES[context]:
        if db == want_db and b2 in want_b2:
            return label
    return None
