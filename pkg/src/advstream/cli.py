"""Command-line interface.

Subcommands:
  run       one game -> summary JSON on stdout, optional CSV/JSON files
  attack    repeated attacker trials with per-trial metrics and aggregates
  sweep     multi-m scaling experiment with log-log exponent fits
  validate  invariant suites (net, order invariance, amplification)
  copies    print the amplification / tau / robust copy-count formulas

Exit codes: 0 success, 1 game failure (the algorithm erred), 2 configuration
error, 3 protocol violation.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import validate as validate_mod
from .arena import (
    GameConfig,
    metrics_csv,
    read_config,
    render_json,
    run_game,
    run_trials,
    scaling_sweep,
    summary_json,
    write_transcript,
)
from .core import ConfigError, ProtocolError
from .net import EstimateNet
from .oblivious import amplification_copies
from .robust import robust_copies, tau_for_bounded_memory

EXIT_OK = 0
EXIT_GAME_FAILED = 1
EXIT_CONFIG = 2
EXIT_PROTOCOL = 3


def _add_game_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--m", type=int, help="stream length")
    p.add_argument("--n", type=int, help="universe size")
    p.add_argument("--eps", type=float, help="approximation parameter")
    p.add_argument("--delta", type=float, help="failure budget")
    p.add_argument("--c", type=float, help="attacker exponent")
    p.add_argument("--k", type=int, help="adversary persistent bits")
    p.add_argument("--alg", choices=("tracker", "robust", "oblivious-amplified"))
    p.add_argument(
        "--adv",
        choices=("toggle", "esthash", "onebit", "memoryless", "taustream", "oblivious"),
    )
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--alpha", type=float, help="range ceiling (default m^p)")
    p.add_argument("--p", type=int, choices=(1, 2), help="moment exponent")
    p.add_argument("--tau", type=int, help="pre-generated stream count")
    p.add_argument("--policy", choices=("round_robin", "greedy"))
    p.add_argument("--out", help="output path prefix")


def _build_config(args: argparse.Namespace) -> GameConfig:
    if args.config:
        base = read_config(args.config)
        kwargs = {f: getattr(base, f) for f in base.__dataclass_fields__}
    else:
        kwargs = {}
    overrides = {
        "m": args.m,
        "n": args.n,
        "epsilon": args.eps,
        "delta": args.delta,
        "c": args.c,
        "k": args.k,
        "algorithm": args.alg,
        "adversary": args.adv,
        "master_seed": args.seed,
        "alpha": args.alpha,
        "p": args.p,
        "tau": args.tau,
        "policy": args.policy,
    }
    for key, value in overrides.items():
        if value is not None:
            kwargs[key] = value
    for required in ("m", "n", "epsilon"):
        if required not in kwargs:
            raise ConfigError(f"missing required parameter {required!r}")
    return GameConfig(**kwargs)


def _cmd_run(args) -> int:
    config = _build_config(args)
    transcript = run_game(config)
    sys.stdout.write(summary_json(transcript))
    if args.out:
        write_transcript(transcript, args.out)
    return EXIT_OK if transcript.success else EXIT_GAME_FAILED


def _cmd_attack(args) -> int:
    config = _build_config(args)
    if args.adv is None and not args.config:
        raise ConfigError("attack needs --adv (onebit or memoryless)")
    rows = run_trials(config, args.trials, workers=args.workers)
    report = {
        "trials": args.trials,
        "success_fraction": float(np.mean([r["success"] for r in rows])),
        "median_flip_number": float(np.median([r["flip_number"] for r in rows])),
        "median_min_density": float(
            np.median([r["min_density_after_burnin"] for r in rows])
        ),
        "median_type1_count": float(np.median([r["type1_count"] for r in rows])),
    }
    sys.stdout.write(render_json(report) + "\n")
    if args.out:
        with open(args.out + ".csv", "w", encoding="utf-8", newline="\n") as f:
            f.write(metrics_csv(rows))
        with open(args.out + ".json", "w", encoding="utf-8", newline="\n") as f:
            f.write(render_json(report) + "\n")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = _build_config(args)
    m_values = [int(x) for x in args.m_list.split(",")]
    report = scaling_sweep(config, m_values, args.trials, workers=args.workers)
    rows = report.pop("per_trial")
    sys.stdout.write(render_json(report) + "\n")
    if args.out:
        with open(args.out + ".csv", "w", encoding="utf-8", newline="\n") as f:
            f.write(metrics_csv(rows))
        with open(args.out + ".json", "w", encoding="utf-8", newline="\n") as f:
            report["per_trial"] = rows
            f.write(render_json(report) + "\n")
    return EXIT_OK


def _cmd_validate(args) -> int:
    failed = 0
    for name, ok, detail in validate_mod.run_all():
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        if not ok:
            failed += 1
    return EXIT_OK if failed == 0 else EXIT_GAME_FAILED


def _cmd_copies(args) -> int:
    printed = False
    tau = args.tau
    if args.k is not None and args.alpha is not None and args.eps is not None:
        net = EstimateNet(args.alpha, args.eps)
        tau = tau_for_bounded_memory(args.k, net)
        print(f"tau={tau}")
        printed = True
    if args.delta is not None and args.m is None:
        print(f"amplification_copies={amplification_copies(args.delta)}")
        printed = True
    if args.m is not None and args.delta is not None:
        if tau is None:
            raise ConfigError("robust copy count needs --tau or (--k --alpha --eps)")
        print(f"robust_copies={robust_copies(args.m, tau, args.delta)}")
        printed = True
    if not printed:
        raise ConfigError(
            "copies needs --delta (amplification), --k --alpha --eps (tau), "
            "or --m --tau --delta (robust copies)"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="advstream",
        description="Adversarial turnstile-streaming arena",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="play one game")
    _add_game_flags(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_attack = sub.add_parser("attack", help="attacker experiment with metrics")
    _add_game_flags(p_attack)
    p_attack.add_argument("--trials", type=int, default=10)
    p_attack.add_argument("--workers", type=int, default=None)
    p_attack.set_defaults(func=_cmd_attack)

    p_sweep = sub.add_parser("sweep", help="multi-m scaling fit")
    _add_game_flags(p_sweep)
    p_sweep.add_argument(
        "--m-list", required=True, help="comma-separated stream lengths (>= 3)"
    )
    p_sweep.add_argument("--trials", type=int, default=10)
    p_sweep.add_argument("--workers", type=int, default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_val = sub.add_parser("validate", help="run invariant suites")
    p_val.set_defaults(func=_cmd_validate)

    p_cop = sub.add_parser("copies", help="print copy-count formulas")
    p_cop.add_argument("--delta", type=float)
    p_cop.add_argument("--m", type=int)
    p_cop.add_argument("--tau", type=int)
    p_cop.add_argument("--k", type=int)
    p_cop.add_argument("--alpha", type=float)
    p_cop.add_argument("--eps", type=float)
    p_cop.set_defaults(func=_cmd_copies)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ProtocolError as exc:
        print(f"protocol violation: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL


if __name__ == "__main__":
    sys.exit(main())
