"""Batch runner: ``grmlab <subcommand> [flags]``.

Every subcommand prints a one-line summary on stdout and writes tables with
``--out``. Exit status is 0 on success, 1 when ``verify`` finds a failing
check, and 2 for usage or input errors.
"""

import argparse
import csv
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import __version__
from . import channel as ch
from .area import area_check, exit_curve
from .config import get_settings
from .exceptions import AppError, ConfigError
from .gf import field_of_size
from .grm import puncture_check, rate
from .logging_config import configure_logging
from .models import (
    ChannelName,
    ChannelPayload,
    CodePayload,
    ExperimentConfig,
    SuiteConfig,
    SuiteResult,
    load_experiment,
)
from .numeric import format_matrix, format_number
from .scan import SCAN_COLUMNS, ScanMode, coset_scan, exact_scan
from .verify import adversarial_search, run_suite, suite_json

logger = logging.getLogger("grmlab")

EXACT_POLYNOMIAL = "exact-polynomial"


# --- Argument parsing ---


def _code_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, help="alphabet size (prime power)")
    p.add_argument("--r", type=int, help="total degree bound")
    p.add_argument("--m", type=int, help="number of variables")


def _channel_flag(p: argparse.ArgumentParser, required: bool = False) -> None:
    p.add_argument(
        "--channel",
        required=required,
        help="channel JSON file, or builtin[:param] such as qsc:1/10, bec:1/4, identity, "
        "additive:1/2,0,1/2,0",
    )


def _run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--t-grid", help='comma-separated t values, or "exact-polynomial"')
    p.add_argument("--mode", choices=[m.value for m in ScanMode])
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--config", help="experiment JSON file; flags override its fields")
    p.add_argument("--out", help="output path (.csv or .json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grmlab", description="Generalized Reed-Muller code laboratory"
    )
    parser.add_argument("--version", action="version", version=f"grmlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="exact rate, normal approximation and Berry-Esseen envelope")
    _code_flags(p)
    p.add_argument("--out")

    p = sub.add_parser("overlap", help="overlap matrix and PICs of a channel")
    _channel_flag(p, required=True)
    p.add_argument("--q", type=int, help="input size for builtin channels")
    p.add_argument("--out")

    p = sub.add_parser("symmetry", help="symmetry group and trace constraint of a channel")
    _channel_flag(p, required=True)
    p.add_argument("--q", type=int, help="input size for builtin channels")
    p.add_argument("--out")

    p = sub.add_parser("coset-scan", help="per-t table of the coset channel")
    _code_flags(p)
    _channel_flag(p)
    _run_flags(p)

    p = sub.add_parser("exit-curve", help="EXIT curve and area check")
    _code_flags(p)
    _channel_flag(p)
    _run_flags(p)

    p = sub.add_parser("verify", help="run the property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--q-list", default="2,3,4,5")
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--code-instances", type=int, default=4)
    p.add_argument("--checks", help="comma-separated check names (default: all)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--search", metavar="CHECK", help="adversarial search on one check instead")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--out")

    p = sub.add_parser("puncture-check", help="puncture RM_q(r, m) to its first q^(m-k) positions")
    _code_flags(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out")
    return parser


# --- Inputs ---


def _is_file(value: str) -> bool:
    return Path(value).suffix == ".json" or Path(value).is_file()


def parse_channel(value: str, q: Optional[int] = None) -> ch.DiscreteChannel:
    """A JSON file path, or ``name[:param]`` for the builtin families."""
    if _is_file(value):
        return ChannelPayload(file=value).to_channel(q)
    name, _, param = value.partition(":")
    try:
        builtin = ChannelName(name.lower())
    except ValueError:
        raise ConfigError(f"unknown channel {value!r}") from None
    if builtin is ChannelName.ADDITIVE:
        return ChannelPayload(builtin=builtin, noise=param.split(",")).to_channel(q)
    return ChannelPayload(builtin=builtin, param=param or None, q=q).to_channel(q)


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise ConfigError(f"missing {', '.join(missing)}")


def _experiment(args: argparse.Namespace) -> ExperimentConfig:
    data: Dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    if args.q is not None or args.r is not None or args.m is not None:
        code = dict(data.get("code") or {})
        code.update({k: getattr(args, k) for k in ("q", "r", "m") if getattr(args, k) is not None})
        data["code"] = code
    if args.t_grid is not None:
        data["t_grid"] = args.t_grid if args.t_grid == EXACT_POLYNOMIAL else args.t_grid.split(",")
    for flag in ("mode", "samples", "seed", "workers", "out"):
        if getattr(args, flag) is not None:
            data[flag] = getattr(args, flag)
    if args.channel is not None:
        data["channel"] = {"file": args.channel}
    if "code" not in data or "channel" not in data:
        raise ConfigError("a code (--q --r --m) and a --channel are required")
    cfg = load_experiment(data)
    if args.channel is not None and not _is_file(args.channel):
        return cfg.model_copy(update={"channel": _builtin_payload(args.channel, cfg.code)})
    return cfg


def _builtin_payload(value: str, code: CodePayload) -> ChannelPayload:
    w = parse_channel(value, code.q)
    return ChannelPayload(q=w.q, outputs=list(w.outputs), matrix=format_matrix(w.matrix))


# --- Outputs ---


def _emit(summary: Dict[str, Any]) -> None:
    print(json.dumps(summary, sort_keys=True, default=str))


def _write_json(path: str, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, sort_keys=True, default=str)
        f.write("\n")


def write_scan_csv(path: str, records: Sequence[Dict[str, Any]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(SCAN_COLUMNS), lineterminator="\n")
        writer.writeheader()
        for record in records:
            writer.writerow(record)


# --- Subcommands ---


def cmd_rate(args: argparse.Namespace) -> int:
    _require(args, "q", "r", "m")
    field_of_size(args.q)
    rep = rate(args.q, args.r, args.m)
    summary = {
        "q": args.q,
        "r": args.r,
        "m": args.m,
        "exact": format_number(rep.exact),
        "gaussian": rep.gaussian,
        "be_bound": rep.be_bound,
        "error": rep.error,
    }
    if args.out:
        _write_json(args.out, summary)
    _emit(summary)
    return 0


def cmd_overlap(args: argparse.Namespace) -> int:
    w = parse_channel(args.channel, args.q)
    rep = ch.overlap(w)
    body = rep.to_dict()
    body["lambda_min"] = rep.lambda_min
    if args.out:
        _write_json(args.out, body)
    _emit(body)
    return 0


def cmd_symmetry(args: argparse.Namespace) -> int:
    w = parse_channel(args.channel, args.q)
    group = ch.symmetry_group(w)
    rep = ch.trace_constraint_check(w, group)
    body = {
        "order": group.order,
        "elements": [list(s.images) for s in group.elements],
        "transitivity": rep.transitivity.value,
        "trace": format_number(rep.trace),
        "delta": format_number(rep.delta),
        "trace_case": rep.case.value,
        "distance": format_number(rep.distance),
        "bound": format_number(rep.bound),
        "inequality_holds": rep.inequality_holds,
    }
    if args.out:
        _write_json(args.out, body)
    _emit({k: v for k, v in body.items() if k != "elements"})
    return 0


def cmd_coset_scan(args: argparse.Namespace) -> int:
    cfg = _experiment(args)
    code = cfg.code.to_code()
    w = cfg.channel.to_channel(code.q)
    if cfg.t_grid == EXACT_POLYNOMIAL:
        if cfg.mode is not ScanMode.EXACT:
            raise ConfigError('"exact-polynomial" needs exact mode')
        result = exact_scan(code, w, [])
    else:
        result = coset_scan(
            code, w, cfg.grid(), cfg.mode, samples=cfg.samples, seed=cfg.seed, workers=cfg.workers
        )
    out = cfg.out
    if out:
        if out.endswith(".json"):
            _write_json(out, result.to_dict())
        else:
            write_scan_csv(out, [row.as_record() for row in result.rows])
    _emit(
        {
            "command": "coset-scan",
            "mode": result.mode.value,
            "rows": len(result.rows),
            "delta_avg": None if result.delta_avg is None else format_number(result.delta_avg),
            "warnings": len(result.warnings),
        }
    )
    return 0


def cmd_exit_curve(args: argparse.Namespace) -> int:
    cfg = _experiment(args)
    code = cfg.code.to_code()
    w = cfg.channel.to_channel(code.q)
    curve = exit_curve(code, w)
    area = area_check(code, w)
    grid = [] if cfg.t_grid == EXACT_POLYNOMIAL else cfg.grid()
    if cfg.out:
        if cfg.out.endswith(".json"):
            payload = curve.to_json()
            payload["integral"] = area.integral
            payload["rhs"] = area.rhs
            _write_json(cfg.out, payload)
        else:
            with open(cfg.out, "w", encoding="utf-8", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(["t", "exit"])
                for t in grid:
                    writer.writerow([format_number(t), float(curve(float(t)))])
    _emit(
        {
            "command": "exit-curve",
            "degree": curve.degree,
            "integral": area.integral,
            "rhs": area.rhs,
            "holds": area.holds,
        }
    )
    return 0


def _int_list(value: str) -> List[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {value!r}") from None


def cmd_verify(args: argparse.Namespace) -> int:
    if args.search:
        found = adversarial_search(args.search, args.budget, args.seed, _int_list(args.q_list))
        body = {
            "check": found.check,
            "margin": None if found.margin is None else format_number(found.margin),
            "evaluations": found.evaluations,
            "passed": found.passed,
            "instance": found.instance,
        }
        if args.out:
            _write_json(args.out, body)
        _emit({k: v for k, v in body.items() if k != "instance"})
        return 0 if found.passed else 1
    config = SuiteConfig(
        q_list=_int_list(args.q_list),
        instances=args.instances,
        code_instances=args.code_instances,
        seed=args.seed,
        checks=args.checks.split(",") if args.checks else None,
    )
    result = SuiteResult(reports=run_suite(config, workers=args.workers))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(suite_json(result.reports))
    failed = [r.check for r in result.reports if not r.passed]
    _emit({"command": "verify", "checks": len(result.reports), "failed": failed, "seed": args.seed})
    return 0 if result.passed else 1


def cmd_puncture_check(args: argparse.Namespace) -> int:
    _require(args, "q", "r", "m")
    rep = puncture_check(field_of_size(args.q), args.r, args.m, args.k)
    body = {
        "q": rep.q,
        "r": rep.r,
        "m": rep.m,
        "k": rep.k,
        "row_space_equal": rep.row_space_equal,
        "expected_multiplicity": rep.expected_multiplicity,
        "multiplicities": {str(k): v for k, v in rep.multiplicities.items()},
        "passed": rep.passed,
    }
    if args.out:
        _write_json(args.out, body)
    _emit(body)
    return 0 if rep.passed else 1


COMMANDS = {
    "rate": cmd_rate,
    "overlap": cmd_overlap,
    "symmetry": cmd_symmetry,
    "coset-scan": cmd_coset_scan,
    "exit-curve": cmd_exit_curve,
    "verify": cmd_verify,
    "puncture-check": cmd_puncture_check,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    configure_logging(get_settings().log_level, sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except AppError as exc:
        logger.error(json.dumps({"event": "error", "code": exc.code, "message": exc.message}))
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
