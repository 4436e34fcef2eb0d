"""Seeded random configurations and the invariant suite run by ``sweep``."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapExceededError, NotPseudoEffectiveError
from .surface_model import CurveConfiguration, Divisor, round_up
from .zariski import (
    classical_candidates,
    int_zariski_decompose,
    is_z_positive,
    oracle_int_zariski,
    zariski_decompose,
)


def random_config(
    rng: random.Random,
    *,
    max_curves: int = 6,
    lo: int = -5,
    hi: int = 5,
    absolute_probability: float = 0.5,
    negative_bias: float = 0.5,
) -> CurveConfiguration:
    """Random symmetric integer gram with entries in [lo, hi] and
    non-negative off-diagonals; every curve or a random subset exceptional.

    With probability ``negative_bias`` a case is drawn from the sub-box with
    negative diagonal and off-diagonals in [0, 2], where negative parts and
    non-trivial connecting chains are common.
    """
    n = rng.randint(1, max_curves)
    biased = rng.random() < negative_bias
    gram = [[0] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = rng.randint(lo, -1) if biased and lo < 0 else rng.randint(lo, hi)
        for j in range(i + 1, n):
            top = min(hi, 2) if biased else hi
            gram[i][j] = gram[j][i] = rng.randint(max(lo, 0), max(top, 0))
    names = [f"C{i + 1}" for i in range(n)]
    if rng.random() < absolute_probability:
        exc = None
    else:
        exc = [i for i in range(n) if rng.random() < 0.6]
    return CurveConfiguration.build(names, gram, exc)


def random_effective(rng: random.Random, cfg: CurveConfiguration, *, max_coeff: int = 4, denominators=(1, 1, 2, 3)) -> Divisor:
    den = rng.choice(denominators)
    return cfg.divisor([Fraction(rng.randint(0, max_coeff * den), den) for _ in range(cfg.n)])


def random_integral_effective(rng: random.Random, cfg: CurveConfiguration, *, max_coeff: int = 4) -> Divisor:
    return cfg.divisor([rng.randint(0, max_coeff) for _ in range(cfg.n)])


@dataclass
class SweepReport:
    seed: int
    cases: int
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def record(self, name: str, ok: bool | None, case_seed: int, detail: str = ""):
        passed, failed, skipped = self.counts.get(name, (0, 0, 0))
        if ok is None:
            skipped += 1
        elif ok:
            passed += 1
        else:
            failed += 1
            self.failures.append({"check": name, "seed": case_seed, "detail": detail})
        self.counts[name] = (passed, failed, skipped)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "cases": self.cases,
            "checks": {
                k: {"passed": p, "failed": f, "skipped": s} for k, (p, f, s) in sorted(self.counts.items())
            },
            "failures": sorted(self.failures, key=lambda x: (x["check"], x["seed"])),
            "ok": self.ok,
        }


def case_seed(seed: int, k: int) -> int:
    """Per-case seed so every case can be replayed on its own."""
    return (seed * 1_000_003 + k) % (2**63)


def run_decomposition_case(cs: int, report: SweepReport, *, oracle_cap: int = 20_000, uniqueness_max_curves: int = 4):
    rng = random.Random(cs)
    cfg = random_config(rng)
    d = random_effective(rng, cfg)
    try:
        cl = zariski_decompose(d)
    except NotPseudoEffectiveError as exc:
        report.record("classical_axioms", False, cs, str(exc))
        return
    report.record("classical_axioms", cl.certificate.passed, cs, str(cl.certificate.failures()))
    if cfg.n <= uniqueness_max_curves:
        found = classical_candidates(d)
        report.record("classical_uniqueness", found == [(cl.positive, cl.negative)], cs, f"{len(found)} candidates")
    else:
        report.record("classical_uniqueness", None, cs)
    report.record("idempotence_classical", zariski_decompose(cl.positive, assume_pseudo_effective=True).negative.is_zero, cs)

    di = random_integral_effective(rng, cfg)
    iz = int_zariski_decompose(di)
    report.record("integral_axioms", iz.certificate.passed, cs, str(iz.certificate.failures()))
    report.record("chain_replays", iz.chain.is_valid(), cs)
    shuffled = int_zariski_decompose(di, rng=random.Random(cs + 1))
    report.record("order_independence", shuffled.negative == iz.negative, cs)
    try:
        orc = oracle_int_zariski(di, cap=oracle_cap)
        report.record("integral_oracle", orc.negative == iz.negative, cs, f"{orc.negative} vs {iz.negative}")
    except CapExceededError:
        report.record("integral_oracle", None, cs)
    again = int_zariski_decompose(iz.positive, assume_pseudo_effective=True)
    report.record("idempotence_integral", again.negative.is_zero, cs)

    # round-ups of f-nef classes are Z-positive
    m = cl.positive
    report.record("round_up_z_positive", is_z_positive(round_up(m), assume_pseudo_effective=True).positive, cs)


def run_sweep(seed: int, cases: int, *, include=("decomposition", "audit", "pullback")) -> SweepReport:
    from .positivity import run_audit_case
    from .pullback import run_pullback_case

    report = SweepReport(seed, cases)
    runners = {
        "decomposition": run_decomposition_case,
        "audit": run_audit_case,
        "pullback": run_pullback_case,
    }
    for k in range(cases):
        cs = case_seed(seed, k)
        for name in include:
            runners[name](cs, report)
    return report
