"""Command-line entry point: ``fblgeom <subcommand> [flags]``.

Exit codes: 0 success, 1 usage error, 2 numeric or convergence failure,
3 validation FAIL, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__, harq
from .numerics import DomainError, NumericError, SeedSpec
from .outage import Method, derive_code_params, error_support, outage
from .sinr import SinrParams
from .spatial import FieldConfig, empirical_outage, sample_field
from .sweep import (DEFAULTS, FIGURE_IDS, MICRO_OP_XI, McSettings, Scenario, SweepSpec,
                    default_chart, emit_chart, emit_csv, figure_preset, format_value,
                    load_config, mc_validate, parse_axis, run_sweep, spec_from_mapping)

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_FAIL, EXIT_IO = 0, 1, 2, 3, 4

# CLI flag -> sweep parameter name
_PARAM_FLAGS = {"alpha": "alpha", "lambda_density": "lambda", "d": "d", "wp": "w_p",
                "ws": "w_s", "eta": "eta", "n": "n", "k": "k", "rate": "r", "m": "m",
                "nu": "nu", "symbol_time": "symbol_time"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser, grids: bool):
    kind = str if grids else float
    g = p.add_argument_group("model parameters")
    g.add_argument("--alpha", type=kind, help="path-loss exponent (> 2)")
    g.add_argument("--lambda", dest="lambda_density", type=kind, help="interferer density")
    g.add_argument("--d", type=kind, help="link distance")
    g.add_argument("--wp", type=kind, help="interferer transmit power")
    g.add_argument("--ws", type=kind, help="reference transmit power")
    g.add_argument("--eta", type=kind, help="noise power")
    g.add_argument("--n", type=kind, help="blocklength")
    g.add_argument("--k", type=kind, help="information bits")
    g.add_argument("--rate", type=kind, help="coding rate k/n")
    g.add_argument("--m", type=kind, help="maximum transmission attempts")
    g.add_argument("--nu", type=kind, help="feedback channel uses per attempt")
    g.add_argument("--symbol-time", dest="symbol_time", type=kind, help="seconds per channel use")
    p.add_argument("--method", help="evaluation method(s), comma separated: auto, "
                   + ", ".join(m.value for m in Method))
    p.add_argument("--seed", type=int, help="Monte Carlo master seed")
    p.add_argument("--samples", type=int, help="Monte Carlo realizations")
    p.add_argument("--out", help="output path (a .csv/.svg suffix is replaced as needed)")
    p.add_argument("--format", choices=("csv", "svg", "both"), help="output format")
    p.add_argument("--config", help="JSON sweep configuration file")
    p.add_argument("--scenario", choices=[s.value for s in Scenario], help="scenario preset")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.add_argument("--error-log", help="append failed grid points here (JSON lines)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fblgeom", description="Finite-blocklength outage in Poisson fields")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("outage", help="outage probability at one parameter point")
    _common(p, grids=False)

    p = sub.add_parser("sweep", help="evaluate a parameter grid")
    _common(p, grids=True)

    p = sub.add_parser("figure", help="reproduce a figure's sweep")
    p.add_argument("figure_id", help="one of " + ", ".join(FIGURE_IDS))
    _common(p, grids=True)

    p = sub.add_parser("mc-validate", help="spatial Monte Carlo against the analytic law")
    _common(p, grids=False)
    p.add_argument("--reference-lambda", type=float,
                   help="density used for the analytic side (negative control)")
    p.add_argument("--delta-max", type=float, default=0.04)

    p = sub.add_parser("delay", help="retransmission reliability and delay")
    _common(p, grids=False)
    p.add_argument("--eps", type=float, help="per-attempt outage (else computed from the model)")
    p.add_argument("--budget", type=float, help="delay budget in seconds")
    p.add_argument("--target", type=float, help="target residual outage")

    sub.add_parser("version", help="print the package version")
    return parser


def _supplied(args) -> dict:
    return {name: getattr(args, flag) for flag, name in _PARAM_FLAGS.items()
            if getattr(args, flag, None) is not None}


def _scalar_point(args) -> tuple:
    vals = _supplied(args)
    vals.setdefault("alpha", DEFAULTS["alpha"])
    scenario = Scenario(args.scenario or "custom")
    for need in ("lambda", "n"):
        if need not in vals:
            raise UsageError(f"--{need} is required")
    if scenario is Scenario.DSA:
        vals["eta"] = 0.0
    elif scenario is Scenario.MICRO_OP and "eta" not in vals:
        vals["eta"] = MICRO_OP_XI * vals.get("w_s", 1.0) / vals.get("d", 1.0) ** vals["alpha"]
    p = SinrParams(vals["alpha"], vals["lambda"], vals.get("d", 1.0), vals.get("w_p", 1.0),
                   vals.get("w_s", 1.0), vals.get("eta", 0.0))
    n = vals["n"]
    if n != int(n):
        raise DomainError("--n must be an integer")
    k = vals.get("k")
    if k is not None and k != int(k):
        raise DomainError("--k must be an integer")
    c = derive_code_params(int(n), k=None if k is None else int(k), r=vals.get("r"))
    return vals, p, c


def _methods(args) -> List[str]:
    return [m.strip() for m in (args.method or "auto").split(",") if m.strip()]


def _cmd_outage(args) -> int:
    _, p, c = _scalar_point(args)
    lines = ["method,value,error_bound,clamped_rho"]
    for m in _methods(args):
        if m != "auto" and Method(m) is Method.MONTE_CARLO:
            cfg = FieldConfig.for_params(p, args.samples or 100_000, SeedSpec(args.seed or 1),
                                         z_max=error_support(c))
            est = empirical_outage(sample_field(cfg, args.workers or 1), c)
        else:
            est = outage(p, c, m)
        lines.append(",".join([est.method.value, format_value(est.value),
                               format_value(est.error_bound), format_value(c.rho < 0)]))
    print("\n".join(lines))
    return EXIT_OK


def _spec_from_args(args, base: Optional[SweepSpec]) -> SweepSpec:
    """Merge a config file and flags (flags win) into a SweepSpec."""
    cfg = load_config(args.config) if args.config else {}
    spec = base if base is not None else spec_from_mapping(cfg)
    if base is not None and cfg:
        raise UsageError("--config cannot be combined with a figure preset")
    fixed = dict(spec.fixed)
    axes = dict(spec.axes)
    order = [a[0] for a in spec.axes]
    if base is None:
        for name, raw in _supplied(args).items():
            grid = parse_axis(raw)
            if len(grid) == 1:
                fixed[name] = grid[0]
                axes.pop(name, None)
            else:
                axes[name] = grid
                fixed.pop(name, None)
                if name not in order:
                    order.append(name)
    order = [o for o in order if o in axes]
    mc = spec.mc
    if args.samples is not None or args.seed is not None:
        mc = McSettings(args.samples or (mc.samples if mc else 100_000),
                        args.seed if args.seed is not None else (mc.seed if mc else 1))
    return SweepSpec(
        scenario=Scenario(args.scenario) if args.scenario and base is None else spec.scenario,
        axes=tuple((o, axes[o]) for o in order),
        fixed=fixed,
        methods=tuple(_methods(args)) if args.method else spec.methods,
        output=args.out or spec.output,
        output_format=args.format or spec.output_format,
        mc=mc,
        workers=args.workers or spec.workers,
        chart=spec.chart,
        also=spec.also,
        per_scenario=spec.per_scenario,
    )


def _write_outputs(spec: SweepSpec, result, default_stem: Optional[str], title: str) -> None:
    target = spec.output or default_stem
    if target is None:
        if spec.output_format != "csv":
            raise UsageError("--out is required for SVG output")
        sys.stdout.write(_csv_text(result.rows))
        return
    stem = Path(target)
    if stem.suffix in (".csv", ".svg"):
        stem = stem.with_suffix("")
    if spec.output_format in ("csv", "both"):
        emit_csv(result.rows, stem.with_suffix(".csv"))
        print(f"wrote {stem.with_suffix('.csv')}", file=sys.stderr)
    if spec.output_format in ("svg", "both"):
        emit_chart(result.rows, default_chart(spec), stem.with_suffix(".svg"), title)
        print(f"wrote {stem.with_suffix('.svg')}", file=sys.stderr)


def _csv_text(rows) -> str:
    lines = [",".join(rows[0].columns)]
    lines += [",".join(format_value(v) for v in r.values) for r in rows]
    return "\n".join(lines) + "\n"


def _run(spec: SweepSpec, args, default_stem, title) -> int:
    result = run_sweep(spec, error_log=args.error_log)
    for e in result.errors:
        print(f"error at {e['params']}: {e['error']}: {e['message']}", file=sys.stderr)
    if not result.rows:
        print("every grid point failed", file=sys.stderr)
        return EXIT_NUMERIC
    _write_outputs(spec, result, default_stem, title)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    spec = _spec_from_args(args, None)
    if not spec.axes and not spec.fixed:
        raise UsageError("nothing to sweep: give parameter flags or --config")
    return _run(spec, args, None, "")


def _cmd_figure(args) -> int:
    base = figure_preset(args.figure_id, _supplied(args))
    spec = _spec_from_args(args, base)
    return _run(spec, args, args.figure_id, args.figure_id)


def _cmd_mc_validate(args) -> int:
    _, p, c = _scalar_point(args)
    ref = p.replace(lambda_density=args.reference_lambda) if args.reference_lambda is not None else None
    report = mc_validate(p, c, args.samples or 100_000, SeedSpec(args.seed or 1), reference=ref,
                         delta_max=args.delta_max, workers=args.workers or 1)
    print("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_delay(args) -> int:
    vals = _supplied(args)
    if "n" not in vals:
        raise UsageError("--n is required")
    n = int(vals["n"])
    if args.eps is not None:
        eps = args.eps
    else:
        _, p, c = _scalar_point(args)
        eps = outage(p, c, _methods(args)[0]).value
    nu = int(vals.get("nu", 0))
    ts = vals.get("symbol_time", harq.SYMBOL_TIME_5G)
    cfg = harq.ArqConfig(int(vals.get("m", 1)), nu, ts)
    worst = harq.worst_case_delay(cfg, n)
    mean = harq.expected_delay(eps, cfg, n)
    print(f"per-attempt outage   {eps:.9g}")
    print(f"residual outage      {harq.arq_outage(eps, cfg.m):.9g}")
    print(f"reliability          {mean.reliability:.9g}")
    print(f"worst-case delay     {worst.channel_uses} channel uses, {worst.milliseconds:.9g} ms")
    print(f"expected delay       {mean.channel_uses:.9g} channel uses, {mean.milliseconds:.9g} ms")
    if args.budget is not None:
        target = args.target if args.target is not None else 1e-3
        res = harq.max_attempts_within_budget(eps, n, args.budget, target, nu, ts)
        if not res.feasible:
            print("budget               infeasible: one attempt exceeds it")
        else:
            met = "met" if res.target_met else "not met"
            print(f"budget               m = {res.m}, residual {res.outage:.9g}, target {target:g} {met}")
    return EXIT_OK


_COMMANDS = {"outage": _cmd_outage, "sweep": _cmd_sweep, "figure": _cmd_figure,
             "mc-validate": _cmd_mc_validate, "delay": _cmd_delay}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "version":
            print(__version__)
            return EXIT_OK
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
