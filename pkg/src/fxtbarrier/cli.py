"""Command line entry point: ``fxtbarrier {run,compare,check,bound}``.

Exit status is 0 on success, 2 when a workspace constraint is breached in
strict mode, and 1 for any other failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import checks, lemmas
from .config import load_config
from .control import ControllerKind, ControllerVariant, fixed_time_coefficients, tmax_bound
from .errors import ConstraintBreach, FxtBarrierError
from .harness import (
    compute_metrics,
    export_comparison,
    run_comparison,
    save_trace_plots,
    write_comparison_csv,
    write_trace_csv,
)
from .sim import run_scenario

EXIT_OK, EXIT_ERROR, EXIT_BREACH = 0, 1, 2

log = logging.getLogger("fxtbarrier")


def _scenario_args(sp):
    sp.add_argument("--config", type=Path, help="TOML scenario file (defaults reproduce the benchmark)")
    sp.add_argument("--dt", type=float, help="integration step (s)")
    sp.add_argument("--horizon", type=float, help="simulated duration (s)")


def _variant_args(sp):
    sp.add_argument("--variant", choices=[k.value for k in ControllerKind], help="controller family")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--model-free", dest="model_free", action="store_true", default=None,
                   help="replace the model terms with the RBF network")
    g.add_argument("--model-based", dest="model_free", action="store_false",
                   help="use the known rigid-body model")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fxtbarrier", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one scenario and export its trace and figures")
    _scenario_args(run)
    _variant_args(run)
    run.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    mode = run.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strict", action="store_true", default=None,
                      help="abort on the first constraint breach (default)")
    mode.add_argument("--tolerant", dest="strict", action="store_false", help="log breaches and continue")

    cmp_ = sub.add_parser("compare", help="run the 3 x 2 controller comparison")
    _scenario_args(cmp_)
    cmp_.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    cmp_.add_argument("--save-traces", action="store_true", help="also write one trace CSV per variant")

    chk = sub.add_parser("check", help="model identities, barrier oracles and lemma suite")
    chk.add_argument("--seed", type=int, default=0, help="seed for the randomized suites")
    chk.add_argument("--samples", type=int, default=1000, help="samples per identity check")
    chk.add_argument("--lemma-samples", type=int, default=10_000, help="samples per lemma")

    bnd = sub.add_parser("bound", help="print the fixed-time settling bound for the configured gains")
    bnd.add_argument("--config", type=Path, help="TOML scenario file")
    g = bnd.add_mutually_exclusive_group()
    g.add_argument("--model-free", dest="model_free", action="store_true", default=None)
    g.add_argument("--model-based", dest="model_free", action="store_false")
    bnd.add_argument("--v", type=float, default=1.0, help="bound parameter v in (0, 1]")
    return ap


def _load(args):
    cfg = load_config(args.config)
    over = {k: getattr(args, k) for k in ("dt", "horizon") if getattr(args, k, None) is not None}
    if getattr(args, "strict", None) is not None:
        over["strict"] = args.strict
    variant = cfg.variant
    if getattr(args, "variant", None) is not None:
        variant = replace(variant, kind=ControllerKind(args.variant))
    if getattr(args, "model_free", None) is not None:
        variant = replace(variant, model_free=args.model_free)
    return replace(cfg, variant=ControllerVariant(variant.kind, variant.model_free), **over)


def cmd_run(args) -> int:
    cfg = _load(args)
    trace = run_scenario(cfg)
    rep = compute_metrics(trace, cfg)
    out = args.out
    write_trace_csv(trace, out / "trace.csv")
    write_comparison_csv([rep], out / "metrics.csv")
    save_trace_plots(trace, out)
    print(f"{rep.label}: rmse {rep.rmse[0]:.4e} {rep.rmse[1]:.4e} m, margin {rep.margin[0]:.4f} "
          f"{rep.margin[1]:.4f} m, settling {rep.settling_time:.3g} s, {trace.wall_time:.1f} s wall")
    if rep.aborted:
        print(f"stopped early: {rep.aborted}", file=sys.stderr)
    return EXIT_BREACH if rep.breaches and cfg.strict else EXIT_OK


def cmd_compare(args) -> int:
    cfg = _load(args)
    matrix = run_comparison(cfg)
    export_comparison(matrix, args.out, save_traces=args.save_traces)
    print(matrix.format_table())
    return EXIT_BREACH if matrix.any_breach and cfg.strict else EXIT_OK


def cmd_check(args) -> int:
    results = (
        checks.dynamics_checks(n=args.samples, seed=args.seed)
        + checks.barrier_checks(n=args.samples, seed=args.seed)
        + [checks.integrator_order_check()]
        + lemmas.lemma_suite(args.lemma_samples, args.seed)
    )
    for r in results:
        print(r)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_ERROR if failed else EXIT_OK


def cmd_bound(args) -> int:
    cfg = load_config(args.config)
    model_free = cfg.variant.model_free if args.model_free is None else args.model_free
    c = fixed_time_coefficients(cfg.gains, cfg.robot, model_free)
    for name, value in c.lambdas.items():
        print(f"{name} = {value:.6g}")
    print(f"lambda_max(M) = {c.inertia_max:.6g}")
    print(f"alpha = {c.alpha:.6g}, beta = {c.beta:.6g}")
    tmax = tmax_bound(c.alpha, c.beta, args.v, cfg.gains.p_c, cfg.gains.q_c)
    print(f"Tmax = {tmax:.6g} s ({'model-free' if model_free else 'model-based'})")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "compare": cmd_compare, "check": cmd_check, "bound": cmd_bound}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConstraintBreach as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BREACH
    except (FxtBarrierError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
