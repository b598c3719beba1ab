"""Command-line interface.

Subcommands: trajectory, channel, montecarlo, classical, oracle,
convergence, horizon, envelope. All emit deterministic CSV (to --out, or
stdout when --out is omitted). Exit codes: 0 success, 1 usage error,
2 numerical failure, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .. import oracles
from ..dynamics import recorded_steps
from ..graph import graph_from_spec
from .csvio import load_config, render_csv, write_csv
from .experiments import (
    EnvelopeFitError,
    ExperimentSpec,
    base_meta,
    channel_curve,
    classical_oracle_curve,
    classical_trajectory_curve,
    exp_convergence,
    exp_epsilon_horizon,
    exp_longtime_finite_tau,
    montecarlo_curve,
    quantum_oracle_curve,
    quantum_trajectory_curve,
    resolve_timing,
)

ORACLE_CHOICES = ("rescaled", "complete-q", "complete-c", "ring4-c", "flat")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage().rstrip()}")


_CONFIG_KEYS = {
    "graph": ("graph", str),
    "lambda": ("lam", float),
    "tau": ("tau", float),
    "steps": ("steps", int),
    "time": ("total_time", float),
    "start": ("start", int),
    "target": ("target", int),
    "seed": ("seed", int),
    "stride": ("stride", int),
    "out": ("out", str),
    "format": ("fmt", str),
    "trajectories": ("trajectories", int),
    "which": ("which", str),
    "steps-list": ("steps_list", str),
    "epsilons": ("epsilons", str),
    "traj-steps": ("traj_steps", int),
}


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="ring:N | lattice2d:WxH | complete:N | file:PATH")
    p.add_argument("--lambda", dest="lam", type=float, help="edge-keep probability in [0, 1]")
    p.add_argument("--tau", type=float, help="step size")
    p.add_argument("--steps", type=int, help="number of percolation steps")
    p.add_argument("--time", dest="total_time", type=float, help="total evolution time")
    p.add_argument("--start", type=int, help="starting node (0-indexed)")
    p.add_argument("--seed", type=int, help="RNG seed (PCG64)")
    p.add_argument("--stride", type=int, help="record every stride-th step")
    p.add_argument("--out", help="output CSV path (stdout when omitted)")
    p.add_argument("--format", dest="fmt", choices=["csv"], help="output format")
    p.add_argument("--config", help="key=value config file; flags override it")


def build_parser() -> _Parser:
    parser = _Parser(prog="percwalk", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, descr in [
        ("trajectory", "one stochastic quantum trajectory, return probability vs rescaled reference"),
        ("channel", "exact realization-averaged channel, return probability vs rescaled reference"),
        ("montecarlo", "trajectory-ensemble channel estimate with standard errors"),
        ("classical", "one stochastic classical trajectory vs rescaled classical reference"),
        ("oracle", "evaluate a closed-form reference curve on a time grid"),
        ("convergence", "max deviation from the rescaled reference for a ladder of step counts"),
        ("horizon", "time horizon where the rescaled reference holds within relative error"),
        ("envelope", "long-run channel curve with exponential envelope fit"),
    ]:
        p = sub.add_parser(name, help=descr)
        _common_flags(p)
        if name == "montecarlo":
            p.add_argument("--trajectories", type=int, help="ensemble size (default 100)")
        if name == "oracle":
            p.add_argument("--which", choices=ORACLE_CHOICES, help="which reference curve")
            p.add_argument("--target", type=int, help="target node for rescaled (default: start)")
        if name in ("convergence", "horizon"):
            p.add_argument("--steps-list", dest="steps_list", help="comma-separated step counts")
        if name == "horizon":
            p.add_argument("--epsilons", help="comma-separated relative-error thresholds")
        if name == "envelope":
            p.add_argument("--traj-steps", dest="traj_steps", type=int,
                           help="steps of the companion trajectory (default 3000)")
    return parser


def _apply_config(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    conf = load_config(args.config)
    known = set()
    for key, (dest, typ) in _CONFIG_KEYS.items():
        if hasattr(args, dest):
            known.add(key)
            if key in conf and getattr(args, dest) is None:
                setattr(args, dest, typ(conf[key]))
    unknown = set(conf) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")


def _fill(args, **defaults) -> None:
    for dest, value in defaults.items():
        if getattr(args, dest, None) is None:
            setattr(args, dest, value)


def _require(args, dest, flag) -> None:
    if getattr(args, dest, None) is None:
        raise UsageError(f"missing required flag {flag}")


def _spec_from_args(args) -> ExperimentSpec:
    _require(args, "graph", "--graph")
    return ExperimentSpec(
        graph_spec=args.graph,
        lam=args.lam,
        tau=args.tau,
        steps=args.steps,
        total_time=args.total_time,
        start=args.start,
        seed=args.seed,
        stride=args.stride,
        trajectories=getattr(args, "trajectories", None) or 100,
    )


def _emit(out: str | None, meta: dict, columns) -> None:
    if out is None:
        sys.stdout.write(render_csv(meta, columns))
    else:
        write_csv(Path(out), meta, columns)


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"bad {flag} value {text!r}: {exc}") from exc


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise UsageError(f"bad {flag} value {text!r}: {exc}") from exc


def _cmd_trajectory(args) -> int:
    _fill(args, lam=0.5)
    spec = _spec_from_args(args)
    times, p_sim = quantum_trajectory_curve(spec)
    p_oracle = quantum_oracle_curve(spec, times)
    _emit(args.out, base_meta(spec, "trajectory"),
          [("t", times), ("p_sim", p_sim), ("p_oracle", p_oracle)])
    return 0


def _cmd_classical(args) -> int:
    _fill(args, lam=0.5)
    spec = _spec_from_args(args)
    times, p_sim = classical_trajectory_curve(spec)
    p_oracle = classical_oracle_curve(spec, times)
    _emit(args.out, base_meta(spec, "classical"),
          [("t", times), ("p_sim", p_sim), ("p_oracle", p_oracle)])
    return 0


def _cmd_channel(args) -> int:
    _fill(args, lam=0.5)
    spec = _spec_from_args(args)
    times, p_sim = channel_curve(spec)
    p_oracle = quantum_oracle_curve(spec, times)
    _emit(args.out, base_meta(spec, "channel"),
          [("t", times), ("p_sim", p_sim), ("p_oracle", p_oracle)])
    return 0


def _cmd_montecarlo(args) -> int:
    _fill(args, lam=0.5)
    spec = _spec_from_args(args)
    times, p_mean, p_stderr = montecarlo_curve(spec)
    p_oracle = quantum_oracle_curve(spec, times)
    _emit(args.out, base_meta(spec, "montecarlo", trajectories=spec.trajectories),
          [("t", times), ("p_mean", p_mean), ("p_stderr", p_stderr), ("p_oracle", p_oracle)])
    return 0


def _cmd_oracle(args) -> int:
    _require(args, "which", "--which")
    _require(args, "graph", "--graph")
    _fill(args, lam=0.5)
    g = graph_from_spec(args.graph)
    tau, steps, _ = resolve_timing(args.tau, args.steps, args.total_time)
    times = recorded_steps(steps, args.stride) * tau
    target = args.target if args.target is not None else args.start
    if args.which == "rescaled":
        curve = oracles.rescaled_reference(g, None, args.lam, args.start, target)
        p = np.asarray(curve.evaluate(times))
    elif args.which == "complete-q":
        p = np.asarray(oracles.complete_graph_quantum_return(g.node_count, times))
    elif args.which == "complete-c":
        p = np.asarray(oracles.complete_graph_classical_return(g.node_count, times))
    elif args.which == "ring4-c":
        p = np.asarray(oracles.ring4_classical_return(args.lam, times))
    else:  # flat
        p = np.full(times.shape, oracles.flat_limit(g.node_count))
    meta = {
        "tool": "percwalk",
        "experiment": f"oracle:{args.which}",
        "graph": args.graph,
        "lambda": args.lam,
        "tau": tau,
        "steps": steps,
        "start": args.start,
        "target": target,
        "stride": args.stride,
    }
    _emit(args.out, meta, [("t", times), ("p_oracle", p)])
    return 0


def _cmd_convergence(args) -> int:
    _fill(args, graph="ring:10", lam=0.5)
    if args.tau is None and args.steps is None and args.total_time is None:
        args.total_time = 10.0
    spec = _spec_from_args(args)
    s_list = _parse_int_list(args.steps_list, "--steps-list") if args.steps_list else None
    points = exp_convergence(spec, s_list) if s_list else exp_convergence(spec)
    meta = base_meta(spec, "convergence",
                     s_list=",".join(str(p.steps) for p in points))
    _emit(args.out, meta, [
        ("S", np.array([p.steps for p in points])),
        ("tau", np.array([p.tau for p in points])),
        ("max_abs_error", np.array([p.max_abs_error for p in points])),
    ])
    return 0


def _cmd_horizon(args) -> int:
    _fill(args, graph="ring:5", lam=0.5)
    if args.tau is None and args.steps is None and args.total_time is None:
        args.total_time = 10.0
    spec = _spec_from_args(args)
    kwargs = {}
    if args.steps_list:
        kwargs["s_list"] = _parse_int_list(args.steps_list, "--steps-list")
    if args.epsilons:
        kwargs["epsilon_list"] = _parse_float_list(args.epsilons, "--epsilons")
    points = exp_epsilon_horizon(spec, **kwargs)
    meta = base_meta(spec, "epsilon_horizon",
                     s_list=",".join(sorted({str(p.steps) for p in points}, key=int)),
                     epsilon_list=",".join(f"{e:g}" for e in dict.fromkeys(p.epsilon for p in points)))
    _emit(args.out, meta, [
        ("S", np.array([p.steps for p in points])),
        ("epsilon", np.array([p.epsilon for p in points])),
        ("horizon", np.array([p.horizon for p in points])),
    ])
    return 0


def _cmd_envelope(args) -> int:
    _fill(args, graph="ring:4", lam=0.2, traj_steps=3000)
    if args.tau is None and args.steps is None and args.total_time is None:
        args.tau, args.steps = 0.1, 1000
    spec = _spec_from_args(args)
    result = exp_longtime_finite_tau(spec, trajectory_steps=args.traj_steps)
    g = spec.graph()
    meta = base_meta(spec, "longtime_finite_tau", trajectory_steps=args.traj_steps,
                     envelope_asymptote=oracles.flat_limit(g.node_count))
    if result.fit is not None:
        meta.update(envelope_a=result.fit.a, envelope_b=result.fit.b,
                    envelope_residual=result.fit.residual)
    else:
        meta.update(envelope_error=result.fit_error)
    _emit(args.out, meta, [
        ("t", result.times),
        ("p_channel", result.p_channel),
        ("p_trajectory", result.p_trajectory),
        ("p_quantum_oracle", result.p_quantum_oracle),
        ("p_classical_oracle", result.p_classical_oracle),
    ])
    if result.fit is None:
        print(f"envelope fit failed: {result.fit_error}", file=sys.stderr)
        return 2
    return 0


_COMMANDS = {
    "trajectory": _cmd_trajectory,
    "channel": _cmd_channel,
    "montecarlo": _cmd_montecarlo,
    "classical": _cmd_classical,
    "oracle": _cmd_oracle,
    "convergence": _cmd_convergence,
    "horizon": _cmd_horizon,
    "envelope": _cmd_envelope,
}


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    if args.command is None:
        print(parser.format_usage().rstrip(), file=sys.stderr)
        return 1
    try:
        _apply_config(args)
        _fill(args, start=0, seed=0, stride=1, fmt="csv")
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except ValueError as exc:  # includes CapacityError and bad parameters
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (np.linalg.LinAlgError, FloatingPointError, EnvelopeFitError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
