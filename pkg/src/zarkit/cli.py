"""Command-line front end: JSON in, deterministic JSON out.

Exit codes: 0 success, 1 a certificate or oracle check failed, 2 malformed
input, 3 a mathematical precondition failed, 4 an enumeration cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable

from . import extension, positivity, pullback, reider, zariski
from .errors import CapExceededError, InputError, PreconditionError
from .exact_linalg import as_fraction, fraction_to_json, signature
from .serialize import config_from_json, config_to_json, divisor_from_json, divisor_to_json, dumps
from .surface_model import CurveConfiguration, Divisor

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_PRECONDITION, EXIT_CAP = 0, 1, 2, 3, 4


def _load(arg: str) -> Any:
    """Inline JSON (starting with ``{`` or ``[``) or a path to a JSON file."""
    text = arg.strip()
    if not text.startswith(("{", "[")):
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {arg[:40]!r}: {exc.msg}") from None


def _config(args) -> CurveConfiguration:
    if not args.config:
        raise InputError("--config is required")
    return config_from_json(_load(args.config))


def _divisor(args, cfg: CurveConfiguration) -> Divisor:
    if not args.divisor:
        raise InputError("--divisor is required")
    return divisor_from_json(cfg, _load(args.divisor))


def _cap(args, default: int) -> int:
    return default if args.cap is None else args.cap


def _check_ok(out: dict) -> bool:
    cert = out.get("certificate")
    if cert is not None and not cert["passed"]:
        return False
    return out.get("agreement", True) is not False


# subcommands


def cmd_zariski(args) -> tuple[dict, bool]:
    cfg = _config(args)
    d = _divisor(args, cfg)
    dec = zariski.zariski_decompose(d, assume_pseudo_effective=args.assume_pseudo_effective)
    out = dec.to_json()
    if args.oracle:
        if 2 ** len(cfg.exceptional) > _cap(args, zariski.DEFAULT_ORACLE_CAP):
            raise CapExceededError("support enumeration exceeds cap", size=2 ** len(cfg.exceptional), cap=args.cap)
        found = zariski.classical_candidates(d)
        out["oracle"] = {"candidates": len(found)}
        out["agreement"] = found == [(dec.positive, dec.negative)]
    return out, _check_ok(out)


def cmd_int_zariski(args) -> tuple[dict, bool]:
    cfg = _config(args)
    d = _divisor(args, cfg)
    dec = zariski.int_zariski_decompose(d, assume_pseudo_effective=args.assume_pseudo_effective)
    out = dec.to_json()
    if args.oracle:
        orc = zariski.oracle_int_zariski(
            d, assume_pseudo_effective=args.assume_pseudo_effective, cap=_cap(args, zariski.DEFAULT_ORACLE_CAP)
        )
        out["oracle"] = {"negative": divisor_to_json(orc.negative)}
        out["agreement"] = orc.negative == dec.negative
    return out, _check_ok(out)


def cmd_zpos(args) -> tuple[dict, bool]:
    cfg = _config(args)
    d = _divisor(args, cfg)
    verdict = zariski.is_z_positive(d, assume_pseudo_effective=args.assume_pseudo_effective)
    out = verdict.to_json()
    ok = True
    if args.oracle:
        orc = zariski.oracle_int_zariski(d, assume_pseudo_effective=args.assume_pseudo_effective,
                                         cap=_cap(args, zariski.DEFAULT_ORACLE_CAP))
        out["agreement"] = orc.negative.is_zero == verdict.positive
        ok = out["agreement"]
    return out, ok


def cmd_classify(args) -> tuple[dict, bool]:
    cfg = _config(args)
    d = _divisor(args, cfg)
    cap = _cap(args, positivity.DEFAULT_SPLIT_CAP)
    n_plus, n_zero, n_minus = signature(cfg.gram)
    out: dict = {
        "signature": [n_plus, n_zero, n_minus],
        "D^2": fraction_to_json(d.square()),
    }
    try:
        out["big"] = positivity.is_big(d, assume_pseudo_effective=args.assume_pseudo_effective)
    except PreconditionError as exc:
        out["big"] = None
        out["big_note"] = str(exc)
    out["connectedness"] = positivity.connectedness(d, cap).to_json()
    audit = positivity.implication_audit(d, cap)
    out["audit"] = audit.to_json()
    return out, audit.implications_hold and audit.algorithms_agree


def _model_from_doc(doc: dict) -> pullback.BirationalModel:
    if not isinstance(doc, dict):
        raise InputError("model must be a JSON object")
    if "points" in doc:
        target = config_from_json(doc.get("target"))
        pts = []
        for p in doc["points"]:
            if not isinstance(p, dict) or "curve" not in p:
                raise InputError("each point needs a 'curve'")
            pts.append(pullback.BlowupPoint(p["curve"], p.get("multiplicity", 1), p.get("degree", 1)))
        return pullback.blowup_chain_builder(target, pts, basis=doc.get("basis", "total"))
    for key in ("source", "target", "proper_transform"):
        if key not in doc:
            raise InputError(f"model is missing {key!r}")
    source = config_from_json(doc["source"])
    target = config_from_json(doc["target"])
    pt_doc = doc["proper_transform"]
    if not isinstance(pt_doc, dict):
        raise InputError("proper_transform must map target curve names to source curve names")
    pt = tuple(source.index(pt_doc[name]) for name in target.curves if name in pt_doc)
    if len(pt) != target.n:
        raise InputError("proper_transform must cover every target curve")
    delta = divisor_from_json(source, doc["anticanonical"]) if "anticanonical" in doc else None
    return pullback.BirationalModel(source, target, pt, delta)


def cmd_pullback(args) -> tuple[dict, bool]:
    if not args.model:
        raise InputError("--model is required")
    model = _model_from_doc(_load(args.model))
    out: dict = {"source": config_to_json(model.source)}
    if model.anticanonical is not None:
        out["anticanonical"] = divisor_to_json(model.anticanonical)
    ok = True
    if args.divisor:
        d = divisor_from_json(model.target, _load(args.divisor))
        p = model.pullback(d)
        checks = {
            "pullback_orthogonal_to_exceptional": all(p.dot_curve(j) == 0 for j in model.exceptional_set),
            "pushforward_recovers": model.pushforward(p) == d,
            "square_preserved": p.square() == d.square(),
        }
        out["pullback"] = divisor_to_json(p)
        out["checks"] = checks
        ok = all(checks.values())
    if model.anticanonical is not None and args.delta_z:
        z = divisor_from_json(model.source, _load(args.delta_z))
        out["delta"] = fraction_to_json(reider.delta_of(model, z))
    return out, ok


def _cluster(args, cfg: CurveConfiguration) -> reider.ClusterModel:
    if args.delta is None:
        raise InputError("--delta is required")
    incident = args.incident.split(",") if args.incident else None
    return reider.ClusterModel._with_q(
        reider.ClusterKind.GIVEN, as_fraction(args.delta), "given", cfg, args.q, incident, args.q_cap
    )


def cmd_reider_check(args) -> tuple[dict, bool]:
    cfg = _config(args)
    d = _divisor(args, cfg)
    cluster = _cluster(args, cfg)
    cap = _cap(args, reider.DEFAULT_CAP)
    if args.variant == "I":
        mode = {"abs": "absolute", "rel": "relative", "birational": "birational"}[args.mode]
        report = reider.check_reider_I(d, cluster, mode=mode, part=args.part, cap=cap, context=args.context)
    else:
        report = reider.check_reider_II(d, cluster, cap=cap)
    return report.to_json(), True


def cmd_extend_check(args) -> tuple[dict, bool]:
    if args.cone:
        inp = extension.cone_fixture(*args.cone)
    else:
        if args.d2 is None or args.q is None or args.degree is None:
            raise InputError("give --d2, --q and --degree, or --cone E D")
        inp = extension.ThresholdInput(as_fraction(args.d2), as_fraction(args.q), args.degree)
    return extension.check_extension(inp).to_json(), True


def cmd_wps(args) -> tuple[dict, bool]:
    inv = extension.wps_invariants(*args.weights)
    out: dict = {"m": inv.m, "q_X": fraction_to_json(inv.q_x)}
    if args.pa is not None:
        out["p_a"] = inv.p_a(args.pa)
    if args.full:
        out.update(inv.to_json())
        if args.pa is not None:
            out["gonality_cases"] = extension.wps_gonality_cases(inv.weights, args.pa).to_json()
    return out, True


def cmd_ruled(args) -> tuple[dict, bool]:
    out: dict = {
        "gon_C": args.gon,
        "parity": args.parity,
        "threshold": fraction_to_json(extension.ruled_threshold(args.gon, args.parity)),
    }
    if args.e is not None:
        if (args.e % 2 == 0) != (args.parity == "Even"):
            raise InputError("--e does not have the stated parity")
        out["e"] = args.e
        out["pgon_equals_deg_times_gon"] = extension.ruled_pgon_guaranteed(args.e, args.gon)
    return out, True


def cmd_pic1(args) -> tuple[dict, bool]:
    cases = extension.pic1_bounds(args.h2, args.dh, args.d2)
    out = cases.to_json()
    if args.pgon is not None:
        out["pgon"] = args.pgon
        out["admissible"] = cases.admits(args.pgon)
    return out, True


def cmd_sweep(args) -> tuple[dict, bool]:
    from .sweep import run_sweep

    include = tuple(args.include.split(",")) if args.include else ("decomposition", "audit", "pullback")
    unknown = set(include) - {"decomposition", "audit", "pullback"}
    if unknown:
        raise InputError(f"unknown sweep suites: {sorted(unknown)}")
    report = run_sweep(0 if args.seed is None else args.seed, args.cases, include=include)
    return report.to_json(), report.ok


COMMANDS: dict[str, Callable] = {
    "zariski": cmd_zariski,
    "int-zariski": cmd_int_zariski,
    "zpos": cmd_zpos,
    "classify": cmd_classify,
    "pullback": cmd_pullback,
    "reider-check": cmd_reider_check,
    "extend-check": cmd_extend_check,
    "wps": cmd_wps,
    "ruled": cmd_ruled,
    "pic1": cmd_pic1,
    "sweep": cmd_sweep,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--oracle", "--verify", dest="oracle", action="store_true", default=argparse.SUPPRESS,
                        help="cross-check against the brute-force oracle")
    common.add_argument("--cap", type=int, default=argparse.SUPPRESS, help="enumeration cap")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized sweeps")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="pretty", action="store_false", default=argparse.SUPPRESS,
                     help="compact JSON (default)")
    fmt.add_argument("--pretty", dest="pretty", action="store_true", default=argparse.SUPPRESS,
                     help="indented JSON")

    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--config", help="configuration JSON (file or inline)")
    io.add_argument("--divisor", help="divisor JSON (file or inline)")
    io.add_argument("--assume-pseudo-effective", action="store_true",
                    help="accept a non-effective divisor as pseudo-effective within the model")

    parser = argparse.ArgumentParser(prog="zarkit", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("zariski", parents=[common, io], help="classical Zariski decomposition")
    sub.add_parser("int-zariski", parents=[common, io], help="integral Zariski decomposition")
    sub.add_parser("zpos", parents=[common, io], help="Z-positivity: connecting chain or blocker")
    sub.add_parser("classify", parents=[common, io], help="bigness, connectedness and implication audit")

    p = sub.add_parser("pullback", parents=[common], help="Mumford pull-back through a birational model")
    p.add_argument("--model", help="model JSON: {source, target, proper_transform} or {target, points}")
    p.add_argument("--divisor", help="target divisor to pull back")
    p.add_argument("--delta-z", help="source divisor Z; report delta(pi, Z)")

    p = sub.add_parser("reider-check", parents=[common, io], help="Reider-type hypotheses and obstruction candidates")
    p.add_argument("--variant", choices=["I", "II"], default="I")
    p.add_argument("--mode", choices=["abs", "rel", "birational"], default="abs")
    p.add_argument("--part", choices=["P", "PZ"], default="P")
    p.add_argument("--delta", help="cluster invariant delta")
    p.add_argument("--q", help="cluster invariant q (default: searched)")
    p.add_argument("--q-cap", type=int, default=reider.DEFAULT_Q_CAP)
    p.add_argument("--incident", help="comma-separated curves known to meet the cluster")
    p.add_argument("--context", choices=[c.value for c in reider.BpfContext])

    p = sub.add_parser("extend-check", parents=[common], help="extension threshold verdict")
    p.add_argument("--d2")
    p.add_argument("--q")
    p.add_argument("--degree", type=int)
    p.add_argument("--cone", type=int, nargs=2, metavar=("E", "D"), help="cone over the degree-E rational normal curve")

    p = sub.add_parser("wps", parents=[common], help="weighted projective plane invariants")
    p.add_argument("weights", type=int, nargs=3)
    p.add_argument("--pa", type=int, help="report p_a of a curve of this degree")
    p.add_argument("--full", action="store_true", help="also report q_X_inf and the gonality dichotomy")

    p = sub.add_parser("ruled", parents=[common], help="ruled-surface gonality threshold")
    p.add_argument("--gon", type=int, required=True)
    p.add_argument("--parity", choices=["Even", "Odd"], required=True)
    p.add_argument("--e", type=int)

    p = sub.add_parser("pic1", parents=[common], help="Picard-number-one gonality dichotomy")
    p.add_argument("--h2", required=True)
    p.add_argument("--dh", required=True)
    p.add_argument("--d2", required=True)
    p.add_argument("--pgon", type=int)

    p = sub.add_parser("sweep", parents=[common], help="seeded randomized invariant sweep")
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--include", help="comma-separated suites: decomposition,audit,pullback")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("oracle", False), ("cap", None), ("seed", None), ("pretty", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        out, ok = COMMANDS[args.command](args)
        code = EXIT_OK if ok else EXIT_CHECK_FAILED
    except InputError as exc:
        out, code = {"error": "input", "message": str(exc)}, EXIT_INPUT
    except CapExceededError as exc:
        out, code = {"error": "cap_exceeded", "message": str(exc), "size": exc.size, "cap": exc.cap}, EXIT_CAP
    except PreconditionError as exc:
        out, code = {"error": "precondition", "kind": type(exc).__name__, "message": str(exc)}, EXIT_PRECONDITION
    sys.stdout.write(dumps(out, pretty=args.pretty) + "\n")
    return code


def main_entry() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_entry()
