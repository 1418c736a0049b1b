# -*- coding: utf-8 -*-
"""
Command-line entry point.
Verbs: validate, run, sweep, summarize, oracle.
"""
import argparse
import logging
import sys
from typing import List, Optional

import numpy as np

from config import EXIT_CODES, LOG_CONFIG, VALIDATION_CONFIG
from cvar import loss_local, minimize_block_value, two_point_worst_case_cvar, worst_case_cvar_closed_form
from decomposition import AssignmentSlot, assignment_slot, enumerate_slot_assignment, solve_slot_assignment
from driver import STATUS_INFEASIBLE
from errors import InfeasibleSubproblem, OffloadError, exit_code_for
from experiments import base_scenario, load_preset, run_experiment, run_scenario
from link_model import link_state
from reporting import summarize
from scenario import Scenario, desk_scenario, load_scenario_file, straight_line_init, validate_scenario

ORACLE_GUS = 6


def setup_logging(verbose: bool = False):
    logging.basicConfig(
        filename=LOG_CONFIG["log_file"],
        level=getattr(logging, LOG_CONFIG["level"]),
        format=LOG_CONFIG["log_format"],
    )
    if verbose:
        console = logging.StreamHandler()
        console.setLevel(logging.DEBUG)
        console.setFormatter(logging.Formatter(LOG_CONFIG["log_format"]))
        root = logging.getLogger()
        root.setLevel(logging.DEBUG)
        root.addHandler(console)


def load_input_scenario(path: Optional[str], seed: Optional[int]) -> Scenario:
    """Scenario file or the desk scenario; --seed re-seeds every random draw."""
    if seed is not None:
        return base_scenario(path, seed)
    if path is None:
        return desk_scenario()
    return load_scenario_file(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uav-offload",
        description="Robust secure computation offloading for multi-UAV edge networks",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", help="scenario JSON document (default: desk scenario)")
    common.add_argument("--seed", type=int, help="seed for every random draw of the scenario")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--max-rounds", type=int, dest="max_rounds", help="BCD round cap")
    common.add_argument("--zeta", type=float, help="BCD stopping threshold (J)")
    common.add_argument("--tol", type=float, help="accepted duality gap of the cone solver")
    common.add_argument("--verbose", action="store_true", help="log to the console at DEBUG")

    verbs = parser.add_subparsers(dest="verb", required=True)
    verbs.add_parser("validate", parents=[common], help="check a scenario document")
    verbs.add_parser("run", parents=[common], help="optimize one scenario")
    sweep = verbs.add_parser("sweep", parents=[common], help="run a parameter sweep")
    sweep.add_argument("--preset", required=True, help="built-in preset name or preset JSON file")
    verbs.add_parser("summarize", parents=[common], help="aggregate the results.csv of --out")
    verbs.add_parser("oracle", parents=[common], help="compare solvers against brute-force references")
    return parser


def cmd_validate(args) -> int:
    s = load_input_scenario(args.scenario, args.seed)
    validate_scenario(s)
    print(f"scenario ok: I={s.I} GUs, M={s.M} S-UAVs, T={s.T} slots, seed={s.seed}")
    return EXIT_CODES["success"]


def cmd_run(args) -> int:
    s = load_input_scenario(args.scenario, args.seed)
    outputs = run_scenario(s, args.out, max_rounds=args.max_rounds, zeta=args.zeta, tol=args.tol)
    print(f"status {outputs['status']}; result written to {outputs['result']}")
    if outputs["status"] == STATUS_INFEASIBLE:
        return EXIT_CODES["infeasible"]
    return EXIT_CODES["success"]


def cmd_sweep(args) -> int:
    seeds = [args.seed] if args.seed is not None else None
    preset = load_preset(args.preset, out_dir=args.out, scenario_path=args.scenario, seeds=seeds)
    paths = run_experiment(preset, jobs=args.jobs, max_rounds=args.max_rounds, zeta=args.zeta, tol=args.tol)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return EXIT_CODES["success"]


def cmd_summarize(args) -> int:
    summary = summarize(args.out)
    print(summary.text())
    return EXIT_CODES["success"]


def cmd_oracle(args) -> int:
    """Closed-form vs two-point vs cone-program CVaR, then min-cost flow vs
    enumeration on every slot restricted to the first few GUs."""
    s = load_input_scenario(args.scenario, args.seed)
    p = s.params
    tasks = s.tasks
    worst = 0.0
    print("worst-case CVaR of the all-local latency (closed form / two-point / cone program):")
    for i in range(min(s.I, 3)):
        t = 0
        loss = loss_local(0.0, tasks.L[i, t], tasks.c_bar[i, t], tasks.mu[i, t], max(tasks.sigma[i, t], 1e-3), p)
        closed = worst_case_cvar_closed_form(loss, p.alpha)
        two_point = two_point_worst_case_cvar(loss, p.alpha)
        conic = minimize_block_value(loss, p.alpha, tol=args.tol)
        scale = max(1.0, abs(closed))
        worst = max(worst, abs(closed - conic) / scale, abs(closed - two_point) / scale)
        print(f"  GU {i}: {closed:.9g}  {two_point:.9g}  {conic:.9g}")

    d = straight_line_init(s)
    r_sec = link_state(s, d.w_s).r_sec
    rho = np.full((s.I, s.T), 0.5)
    mismatches = 0
    k = min(s.I, ORACLE_GUS)
    print(f"assignment cost per slot over the first {k} GUs (min-cost flow / enumeration):")
    for t in range(s.T):
        full = assignment_slot(s, r_sec, rho, t)
        cost = full.cost[:k]
        slot = AssignmentSlot(t=t, cost=cost, mandatory=np.isfinite(cost).any(axis=1), capacity=full.capacity)
        try:
            lam_flow, cost_flow = solve_slot_assignment(slot)
        except InfeasibleSubproblem:
            lam_flow, cost_flow = None, float("nan")
        try:
            lam_enum, cost_enum = enumerate_slot_assignment(slot)
        except InfeasibleSubproblem:
            lam_enum, cost_enum = None, float("nan")
        if lam_flow is None or lam_enum is None:
            same = lam_flow is None and lam_enum is None
        else:
            same = np.array_equal(lam_flow, lam_enum)
        mismatches += not same
        print(f"  slot {t}: {cost_flow:.9g}  {cost_enum:.9g}  {'same' if same else 'DIFFERENT'}")
    print(f"largest CVaR disagreement {worst:.3g}; assignment mismatches {mismatches}")
    if mismatches or worst > VALIDATION_CONFIG["oracle_tol"]:
        return EXIT_CODES["internal"]
    return EXIT_CODES["success"]


COMMANDS = {
    "validate": cmd_validate,
    "run": cmd_run,
    "sweep": cmd_sweep,
    "summarize": cmd_summarize,
    "oracle": cmd_oracle,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose)
    logger = logging.getLogger(__name__)
    try:
        return COMMANDS[args.verb](args)
    except OffloadError as e:
        logger.error(f"{args.verb} failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)


if __name__ == "__main__":
    sys.exit(main())
