"""Command-line front-end.

Exit codes: 0 success, 1 usage error, 2 analytic request at the critical
point, 3 exact solver failed to converge.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .exceptions import CriticalPoint, InvalidParameters, NoConvergence, StepTooLarge
from .model import DickeParams, ProbeAtom, critical_coupling, dispersive_shift
from .polariton import loschmidt_echo_gaussian, photon_variance, polariton_frame
from .sweep import (
    DEFAULT_SKIP_BAND,
    EXACT_BUDGET,
    AxisRange,
    AxisValues,
    Fixed,
    SweepSpec,
    compare_engines,
    format_value,
    preset,
    run_sweep,
    write_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_CRITICAL, EXIT_NO_CONVERGENCE = 0, 1, 2, 3
THREADS_ENV = "DICKE_ECHO_THREADS"
BOOL_KEYS = ("force", "deterministic")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common():
    common = _Parser(add_help=False)
    phys = common.add_argument_group("physical parameters (units of omega)")
    phys.add_argument("--omega", type=float, default=1.0)
    phys.add_argument("--omega0", type=float, default=1.44)
    phys.add_argument("--g", type=float, default=0.3)
    phys.add_argument("--n-atoms", type=int, default=100)
    shift = phys.add_mutually_exclusive_group()
    shift.add_argument("--delta-tilde", type=float, default=None,
                       help="cavity shift; default 0.001 when no probe is given")
    shift.add_argument("--g-s", type=float, default=None, help="probe-cavity coupling")
    phys.add_argument("--delta-s", type=float, default=None, help="probe detuning")
    phys.add_argument("--omega-s", type=float, default=None,
                      help="probe transition frequency (default omega + delta_s)")

    out = common.add_argument_group("output")
    out.add_argument("--output", "-o", default=None, help="write here instead of stdout")
    out.add_argument("--format", choices=("csv", "json"), default=None)
    out.add_argument("--threads", type=int, default=None,
                     help=f"worker threads (env {THREADS_ENV})")
    out.add_argument("--deterministic", action="store_true",
                     help="omit timestamps from JSON output")
    common.add_argument("--config", default=None, help="flat key=value defaults file")
    return common


def _time_args(p, start=0.0, stop=100.0, count=101):
    p.add_argument("--times", type=_float_list, default=None, help="comma-separated times")
    p.add_argument("--t-start", type=float, default=start)
    p.add_argument("--t-stop", type=float, default=stop)
    p.add_argument("--t-count", type=int, default=count)


def build_parser():
    common = _common()
    parser = _Parser(prog="dicke-echo", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("spectrum", parents=[common], help="polariton frequencies and coefficients")
    sub.add_parser("variance", parents=[common], help="ground-state photon-number variance")

    echo = sub.add_parser("echo", parents=[common], help="Gaussian echo curve")
    _time_args(echo)
    echo.add_argument("--gamma", type=float, default=None,
                      help="use this variance instead of the closed form")

    oracle = sub.add_parser("oracle", parents=[common], help="exact finite-N ground state")
    oracle.add_argument("--tol", type=float, default=1e-10)
    oracle.add_argument("--n-max", type=int, default=None, help="initial photon cutoff")
    oracle.add_argument("--budget", type=int, default=EXACT_BUDGET)
    oracle.add_argument("--force", action="store_true", help="allow N above the budget")
    oracle.add_argument("--echo-output", default=None, help="CSV path for t,L,ReD,ImD")
    _time_args(oracle, 0.0, 100.0, 11)

    sweep = sub.add_parser("sweep", parents=[common], help="figure grids")
    sweep.add_argument("--preset", choices=("fig2", "fig3", "fig4", "custom"), default="fig2")
    sweep.add_argument("--engine", choices=("analytic", "exact"), default="analytic")
    sweep.add_argument("--g-start", type=float, default=0.01)
    sweep.add_argument("--g-stop", type=float, default=1.2)
    sweep.add_argument("--g-count", type=int, default=120)
    sweep.add_argument("--axis2", choices=("t", "N"), default="t")
    sweep.add_argument("--second-start", type=float, default=0.0)
    sweep.add_argument("--second-stop", type=float, default=100.0)
    sweep.add_argument("--second-count", type=int, default=101)
    sweep.add_argument("--spacing", choices=("linear", "log"), default="linear")
    sweep.add_argument("--time", type=float, default=100.0)
    sweep.add_argument("--skip-band", type=float, default=DEFAULT_SKIP_BAND)

    compare = sub.add_parser("compare", parents=[common], help="analytic vs exact engine")
    compare.add_argument("--g-values", type=_float_list, default=[0.0, 0.3])
    compare.add_argument("--n-values", type=_float_list, default=[10, 20, 40])
    compare.add_argument("--time", type=float, default=10.0)
    compare.add_argument("--budget", type=int, default=EXACT_BUDGET)
    compare.add_argument("--force", action="store_true")
    return parser, sub


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key in BOOL_KEYS:
                out[key] = value.lower() in ("1", "true", "yes", "on")
            else:
                out[key] = value
    return out


def _apply_config(parser, sub, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    known_dests = {a.dest for sp in sub.choices.values() for a in sp._actions}
    unknown = set(cfg) - known_dests
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    for sp in sub.choices.values():
        dests = {a.dest: a for a in sp._actions}
        converted = {}
        for key, value in cfg.items():
            if key not in dests:
                continue
            action = dests[key]
            if isinstance(value, str) and action.type is not None:
                value = action.type(value)
            converted[key] = value
        sp.set_defaults(**converted)


def params_from_args(args) -> tuple:
    """``(DickeParams, ProbeAtom or None)`` from parsed arguments."""
    probe = None
    if args.g_s is not None or args.delta_s is not None:
        if args.g_s is None or args.delta_s is None:
            raise UsageError("the probe needs both --g-s and --delta-s")
        omega_s = args.omega_s if args.omega_s is not None else args.omega + args.delta_s
        probe = ProbeAtom(omega_s=omega_s, g_s=args.g_s, delta_s=args.delta_s)
        delta_tilde = abs(dispersive_shift(probe))
    elif args.delta_tilde is not None:
        delta_tilde = args.delta_tilde
    else:
        delta_tilde = 0.001
    p = DickeParams(omega=args.omega, omega0=args.omega0, g=args.g,
                    n_atoms=args.n_atoms, delta_tilde=delta_tilde)
    return p, probe


def _times(args):
    if args.times:
        return np.asarray(args.times, dtype=float)
    if args.t_count < 1:
        raise UsageError("--t-count must be positive")
    return np.linspace(args.t_start, args.t_stop, args.t_count)


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return 1


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def _kv_csv(record: dict) -> str:
    buf = io.StringIO()
    write_csv(buf, ("quantity", "value"), record.items())
    return buf.getvalue()


def cmd_spectrum(args):
    p, _ = params_from_args(args)
    frame = polariton_frame(p)
    record = {
        "phase": frame.phase.value,
        "g_c": critical_coupling(p),
        "omega_minus": frame.omega_minus,
        "omega_plus": frame.omega_plus,
        "theta": frame.theta,
        "f1": frame.f[0],
        "f2": frame.f[1],
        "f3": frame.f[2],
        "f4": frame.f[3],
        "symplectic_residual": frame.symplectic_residual,
        "near_critical": frame.near_critical,
    }
    if frame.mu is not None:
        record.update(mu=frame.mu, alpha=frame.alpha_disp, beta=frame.beta_disp)
    _emit(args, _kv_csv(record) if args.format == "csv" else _dump_json(record))


def cmd_variance(args):
    p, _ = params_from_args(args)
    report = photon_variance(polariton_frame(p))
    record = {
        "phase": report.phase.value,
        "gamma": report.gamma,
        "n_term": report.n_term,
        "fluctuation_term": report.fluctuation_term,
        "condition": report.condition,
    }
    _emit(args, _kv_csv(record) if args.format == "csv" else _dump_json(record))


def cmd_echo(args):
    p, _ = params_from_args(args)
    gamma = args.gamma if args.gamma is not None else photon_variance(polariton_frame(p)).gamma
    curve = loschmidt_echo_gaussian(p, gamma, _times(args))
    if args.format == "json":
        text = _dump_json({"method": curve.method, "gamma": gamma, "params": p.to_dict(),
                           "t": curve.times.tolist(), "L": curve.values.tolist()})
    else:
        buf = io.StringIO()
        write_csv(buf, ("t", "L"), zip(curve.times.tolist(), curve.values.tolist()))
        text = buf.getvalue()
    _emit(args, text)


def cmd_oracle(args):
    from .oracle import echo_exact, oracle_report, photon_statistics, solve_ground_state

    p, probe = params_from_args(args)
    if p.n_atoms > args.budget and not args.force:
        raise UsageError(f"N={p.n_atoms} exceeds the exact budget {args.budget}; use --force")
    gs = solve_ground_state(p, tol=args.tol, n_max=args.n_max)
    report = oracle_report(p, gs, photon_statistics(gs))
    if args.echo_output:
        curve = echo_exact(p, _times(args), probe=probe, gs=gs)
        buf = io.StringIO()
        d = curve.decoherence
        write_csv(buf, ("t", "L", "ReD", "ImD"),
                  zip(curve.times.tolist(), curve.values.tolist(), d.real.tolist(), d.imag.tolist()))
        with open(args.echo_output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        report["echo"] = {"path": args.echo_output, **{k: v for k, v in curve.metadata.items()}}
    if args.format == "csv":
        scalars = {k: v for k, v in report.items() if k not in ("params", "distribution", "echo")}
        _emit(args, _kv_csv(scalars))
    else:
        _emit(args, _dump_json(report))


def _sweep_spec(args) -> SweepSpec:
    if args.preset != "custom":
        spec = preset(args.preset)
        return SweepSpec(spec.base, spec.axis1, spec.axis2, engine=args.engine,
                         skip_band=args.skip_band, time=spec.time)
    p, _ = params_from_args(args)
    axis1 = AxisRange("g", args.g_start, args.g_stop, args.g_count)
    if args.second_count == 1:
        axis2 = Fixed(args.axis2, args.second_start)
    else:
        axis2 = AxisRange(args.axis2, args.second_start, args.second_stop,
                          args.second_count, args.spacing)
    return SweepSpec(p, axis1, axis2, engine=args.engine, skip_band=args.skip_band,
                     time=args.time)


def cmd_sweep(args):
    spec = _sweep_spec(args)
    result = run_sweep(spec, workers=_threads(args))
    if args.format == "json":
        provenance = dict(result.provenance)
        if args.deterministic:
            provenance.pop("timestamp", None)
        rows = [dict(zip(result.columns, row)) for row in result.rows()]
        text = _dump_json({"provenance": provenance, "spec": spec.to_dict(),
                           "skipped": result.skipped, "rows": rows})
    else:
        text = result.csv_body()
    _emit(args, text)


def cmd_compare(args):
    p, _ = params_from_args(args)
    spec = SweepSpec(
        p,
        tuple(Fixed("g", g) for g in args.g_values),
        AxisValues("N", tuple(args.n_values)),
        engine="both",
        time=args.time,
    )
    table = compare_engines(spec, workers=_threads(args), budget=args.budget, force=args.force)
    _emit(args, table.csv_body() if args.format == "csv" else table.to_json() + "\n")


COMMANDS = {
    "spectrum": (cmd_spectrum, "json"),
    "variance": (cmd_variance, "json"),
    "echo": (cmd_echo, "csv"),
    "oracle": (cmd_oracle, "json"),
    "sweep": (cmd_sweep, "csv"),
    "compare": (cmd_compare, "json"),
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser, sub = build_parser()
    try:
        _apply_config(parser, sub, argv)
    except (UsageError, OSError, ValueError) as exc:
        print(f"dicke-echo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fn, default_format = COMMANDS[args.command]
    if args.format is None:
        args.format = default_format
    try:
        fn(args)
    except BrokenPipeError:
        sys.stdout = open(os.devnull, "w")
        return EXIT_OK
    except CriticalPoint as exc:
        print(f"dicke-echo: critical point g_c={format_value(exc.g_c)}: {exc}", file=sys.stderr)
        return EXIT_CRITICAL
    except (NoConvergence, StepTooLarge) as exc:
        print(f"dicke-echo: no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (UsageError, InvalidParameters) as exc:
        print(f"dicke-echo: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
