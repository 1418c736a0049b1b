# -*- coding: utf-8 -*-
"""
Parameter sweeps.
A preset names one sweep axis, its values and the replication seeds. Each
(axis value, seed) run optimizes the robust and ideal pipelines, checks the
robustness of both decisions and stores a JSON record under <out>/runs/;
the records are merged into results.csv, trajectories.csv and
violations.csv once every run has finished.
"""
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from config import CSV_COLUMNS, EXPERIMENT_CONFIG, PRESETS, VALIDATION_CONFIG
from driver import STATUS_INFEASIBLE, fixed_trajectory_baseline, ideal_baseline, optimize, validate_robustness
from energy_model import offloaded_bits
from errors import OffloadError, PresetError, ReportError, ScenarioParseError
from scenario import Scenario, build_scenario, desk_config, straight_line_init

AXES = ("sigma_multiplier", "alpha", "p0", "f_g", "L_scale")
FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True)
class ExperimentPreset:
    name: str
    axis: str
    values: tuple
    seeds: tuple
    scenario_path: Optional[str] = None  # None: desk scenario
    out_dir: str = "out"

    def __post_init__(self):
        if self.axis not in AXES:
            raise PresetError(f"unknown sweep axis '{self.axis}', choose one of {', '.join(AXES)}")
        if len(self.values) < 2:
            raise PresetError("a sweep needs at least two axis values")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise PresetError("axis values must be strictly increasing")
        if len(self.seeds) < 1:
            raise PresetError("a sweep needs at least one seed")
        if self.scenario_path is not None and not os.path.isfile(self.scenario_path):
            raise PresetError(f"scenario file '{self.scenario_path}' does not exist")


def load_preset(name_or_path: str, out_dir: Optional[str] = None, scenario_path: Optional[str] = None,
                seeds: Optional[List[int]] = None) -> ExperimentPreset:
    """Built-in preset by name, or a JSON preset file with the same fields."""
    if name_or_path in PRESETS:
        raw = dict(PRESETS[name_or_path], name=name_or_path)
    elif os.path.isfile(name_or_path):
        try:
            with open(name_or_path, "r", encoding="utf-8") as f:
                raw = json.load(f)
        except json.JSONDecodeError as e:
            raise PresetError(f"malformed preset file '{name_or_path}': {e}")
        raw.setdefault("name", os.path.splitext(os.path.basename(name_or_path))[0])
    else:
        raise PresetError(f"unknown preset '{name_or_path}', choose one of {', '.join(PRESETS)} or a file")
    unknown = set(raw) - {"name", "axis", "values", "seeds", "scenario", "out"}
    if unknown:
        raise PresetError(f"unknown preset fields: {', '.join(sorted(unknown))}")
    try:
        return ExperimentPreset(
            name=raw["name"],
            axis=raw.get("axis", ""),
            values=tuple(float(v) for v in raw.get("values", [])),
            seeds=tuple(int(v) for v in (seeds if seeds is not None else raw.get("seeds", [0]))),
            scenario_path=scenario_path or raw.get("scenario"),
            out_dir=out_dir or raw.get("out", "out"),
        )
    except (TypeError, ValueError) as e:
        raise PresetError(f"invalid preset: {e}")


def base_scenario(scenario_path: Optional[str], seed: int) -> Scenario:
    """Scenario for one replication; the seed drives every random draw of the document."""
    if scenario_path is None:
        raw = desk_config(seed)
    else:
        with open(scenario_path, "r", encoding="utf-8") as f:
            try:
                raw = json.load(f)
            except json.JSONDecodeError as e:
                raise ScenarioParseError(f"malformed scenario document: {e}")
        raw["seed"] = seed
    return build_scenario(raw)


def apply_axis(s: Scenario, axis: str, value: float) -> Scenario:
    if axis == "sigma_multiplier":
        return s.with_tasks(sigma=s.tasks.sigma * value)
    if axis == "L_scale":
        return s.with_tasks(L=s.tasks.L * value)
    if axis in ("alpha", "p0", "f_g"):
        return replace(s, params=replace(s.params, **{axis: value}))
    raise PresetError(f"unknown sweep axis '{axis}'")


class RunRecorder:
    """Per-run JSON records of a sweep directory, one file per (axis, value, seed)."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.runs_dir = os.path.join(out_dir, EXPERIMENT_CONFIG["runs_dir"])
        self.ensure_runs_dir()

    def ensure_runs_dir(self):
        os.makedirs(self.runs_dir, exist_ok=True)

    def record_path(self, axis: str, axis_value: float, seed: int) -> str:
        return os.path.join(self.runs_dir, f"run_{axis}_{axis_value:.17g}_{seed}.json")

    def save_record(self, record: Dict[str, Any]) -> str:
        path = self.record_path(record["axis"], record["axis_value"], record["seed"])
        with open(path, "w", encoding="utf-8") as f:
            json.dump(record, f, indent=2, default=float)
        return path

    def clear(self, axis: str) -> int:
        """Removes the records of an earlier sweep over the same axis."""
        removed = 0
        for name in os.listdir(self.runs_dir):
            if name.startswith(f"run_{axis}_") and name.endswith(".json"):
                os.remove(os.path.join(self.runs_dir, name))
                removed += 1
        return removed

    def load_records(self, axis: Optional[str] = None) -> List[Dict[str, Any]]:
        records = []
        for name in sorted(os.listdir(self.runs_dir)):
            if not name.endswith(".json"):
                continue
            path = os.path.join(self.runs_dir, name)
            try:
                with open(path, "r", encoding="utf-8") as f:
                    record = json.load(f)
            except json.JSONDecodeError as e:
                raise ReportError(path, e.lineno, f"corrupt run record: {e.msg}")
            if axis is None or record.get("axis") == axis:
                records.append(record)
        records.sort(key=lambda r: (r["axis_value"], r["seed"]))
        return records


def _trajectory_rows(w_s, kind: str) -> List[Dict[str, Any]]:
    return [
        {"kind": kind, "m": m, "t": t, "x": float(w_s[m, t, 0]), "y": float(w_s[m, t, 1])}
        for m in range(w_s.shape[0])
        for t in range(w_s.shape[1])
    ]


def run_job(job: Dict[str, Any]) -> str:
    """Runs one (axis value, seed) replication and stores its record."""
    logger = logging.getLogger(__name__)
    started = time.perf_counter()
    record: Dict[str, Any] = {
        "axis": job["axis"], "axis_value": job["axis_value"], "seed": job["seed"],
        "status": "error", "ideal_status": "error", "trajectories": [], "violations": [],
    }
    options = {k: job.get(k) for k in ("max_rounds", "zeta", "tol")}
    try:
        s = apply_axis(base_scenario(job["scenario_path"], job["seed"]), job["axis"], job["axis_value"])
        record["trajectories"] += _trajectory_rows(straight_line_init(s).w_s, "init")
        robust = optimize(s, **options)
        ideal = ideal_baseline(s, **options)
        record.update(
            status=robust.status, ideal_status=ideal.status,
            robust_gamma=robust.gamma, ideal_gamma=ideal.gamma,
            rounds=robust.rounds, gamma_trace=robust.gamma_trace,
            diagnosis=robust.diagnosis + ideal.diagnosis,
        )
        if job.get("with_fixed"):
            record["fixed_gamma"] = fixed_trajectory_baseline(s, **options).gamma
        for mode, result in (("robust", robust), ("ideal", ideal)):
            if result.status == STATUS_INFEASIBLE:
                continue
            record[f"{mode}_offloaded_bits"] = offloaded_bits(s, result.decision)
            record["trajectories"] += _trajectory_rows(result.decision.w_s, mode)
            for sampler in job["samplers"]:
                report = validate_robustness(s, result, sampler, job["samples"], job["seed"])
                record[f"{mode}_max_violation_{sampler}"] = report.max_violation
                record["violations"] += [
                    {"mode": mode, "sampler": sampler, "i": i, "t": t, "local": lo, "edge": ed}
                    for i, t, lo, ed in report.rows()
                ]
        if robust.breakdown is not None:
            record.update(robust.breakdown.totals())
    except OffloadError as e:
        logger.error(f"Run axis={job['axis_value']} seed={job['seed']} failed: {e}")
        record["diagnosis"] = [str(e)]
    record["wall_time"] = time.perf_counter() - started
    return RunRecorder(job["out_dir"]).save_record(record)


def merge_records(out_dir: str, axis: Optional[str] = None) -> Dict[str, str]:
    """Writes results.csv, trajectories.csv and violations.csv from the run
    records, restricted to one sweep axis when given."""
    records = RunRecorder(out_dir).load_records(axis)
    results, trajectories, violations = [], [], []
    for r in records:
        samplers_seen = sorted(k.split("robust_max_violation_")[1] for k in r if k.startswith("robust_max_violation_"))
        worst = max((r[f"robust_max_violation_{name}"] for name in samplers_seen), default=np.nan)
        results.append(
            {
                "axis": r["axis"], "axis_value": r["axis_value"], "seed": r["seed"],
                "status": r["status"], "ideal_status": r["ideal_status"],
                "robust_gamma": r.get("robust_gamma", np.nan), "ideal_gamma": r.get("ideal_gamma", np.nan),
                "fixed_gamma": r.get("fixed_gamma", np.nan),
                "offloaded_bits": r.get("robust_offloaded_bits", np.nan),
                "ideal_offloaded_bits": r.get("ideal_offloaded_bits", np.nan),
                "e_local": r.get("e_local", np.nan), "e_tx": r.get("e_tx", np.nan),
                "e_edge": r.get("e_edge", np.nan), "e_fly": r.get("e_fly", np.nan),
                "rounds": r.get("rounds", 0), "max_violation": worst, "wall_time": r["wall_time"],
            }
        )
        trajectories += [dict(row, axis_value=r["axis_value"], seed=r["seed"]) for row in r["trajectories"]]
        violations += [dict(row, axis_value=r["axis_value"], seed=r["seed"]) for row in r["violations"]]

    paths = {}
    for name, rows in (("results", results), ("trajectories", trajectories), ("violations", violations)):
        path = os.path.join(out_dir, f"{name}.csv")
        pd.DataFrame(rows, columns=CSV_COLUMNS[name]).to_csv(path, index=False, float_format=FLOAT_FORMAT)
        paths[name] = path
    logging.getLogger(__name__).info(f"Merged {len(records)} run records into {out_dir}")
    return paths


def run_experiment(
    preset: ExperimentPreset,
    jobs: int = 1,
    max_rounds: Optional[int] = None,
    zeta: Optional[float] = None,
    tol: Optional[float] = None,
    samples: Optional[int] = None,
    samplers: Optional[List[str]] = None,
) -> Dict[str, str]:
    """Runs every axis value x seed of a preset and merges the CSV outputs."""
    logger = logging.getLogger(__name__)
    recorder = RunRecorder(preset.out_dir)
    stale = recorder.clear(preset.axis)
    if stale:
        logger.info(f"Removed {stale} records of an earlier {preset.axis} sweep")
    with open(os.path.join(preset.out_dir, "preset.json"), "w", encoding="utf-8") as f:
        json.dump(asdict(preset), f, indent=2)
    job_list = [
        {
            "axis": preset.axis, "axis_value": value, "seed": seed,
            "scenario_path": preset.scenario_path, "out_dir": preset.out_dir,
            "max_rounds": max_rounds, "zeta": zeta, "tol": tol,
            "samples": samples or VALIDATION_CONFIG["samples"],
            "samplers": list(samplers or EXPERIMENT_CONFIG["samplers"]),
            "with_fixed": EXPERIMENT_CONFIG["with_fixed_trajectory"],
        }
        for value in preset.values
        for seed in preset.seeds
    ]
    logger.info(f"Sweep '{preset.name}': {len(job_list)} runs over {preset.axis} with {jobs} workers")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            paths = list(pool.map(run_job, job_list))
    else:
        paths = [run_job(job) for job in job_list]
    logger.info(f"{len(paths)} run records written to {recorder.runs_dir}")
    return merge_records(preset.out_dir, preset.axis)


def run_scenario(
    s: Scenario,
    out_dir: str,
    max_rounds: Optional[int] = None,
    zeta: Optional[float] = None,
    tol: Optional[float] = None,
) -> Dict[str, str]:
    """Single robust optimization: result.json plus trajectories.csv."""
    os.makedirs(out_dir, exist_ok=True)
    result = optimize(s, max_rounds=max_rounds, zeta=zeta, tol=tol)
    payload = result.to_dict()
    payload["offloaded_bits"] = result.offloaded_bits(s)
    result_path = os.path.join(out_dir, "result.json")
    with open(result_path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2, default=float)
    rows = [dict(row, axis_value=np.nan, seed=s.seed) for row in _trajectory_rows(straight_line_init(s).w_s, "init")]
    if result.decision is not None:
        rows += [dict(row, axis_value=np.nan, seed=s.seed) for row in _trajectory_rows(result.decision.w_s, "robust")]
    traj_path = os.path.join(out_dir, "trajectories.csv")
    pd.DataFrame(rows, columns=CSV_COLUMNS["trajectories"]).to_csv(traj_path, index=False, float_format=FLOAT_FORMAT)
    return {"result": result_path, "trajectories": traj_path, "status": result.status}
