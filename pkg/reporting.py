# -*- coding: utf-8 -*-
"""
Sweep summaries.
Aggregates results.csv per axis value and checks the robust/ideal energy
ratio at the reference row against the headline band.
"""
import logging
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from config import CSV_COLUMNS, HEADLINE, REFERENCE_AXIS_VALUES
from errors import ReportError

SOLVED_STATUSES = ("converged", "max_rounds")


@dataclass
class SweepSummary:
    table: pd.DataFrame
    axis: str
    reference_ratio: Optional[float]
    in_band: Optional[bool]
    path: str

    def text(self) -> str:
        lines = [f"sweep over {self.axis}: {len(self.table)} axis values"]
        for row in self.table.itertuples(index=False):
            lines.append(
                f"  {self.axis}={row.axis_value:g}  runs={row.runs}  "
                f"robust={row.robust_gamma:.6g} J  ideal={row.ideal_gamma:.6g} J  ratio={row.ratio:.4f}"
            )
        if self.reference_ratio is None:
            lines.append("robust/ideal energy ratio: n/a (no reference row in this sweep)")
        else:
            low, high = HEADLINE["band"]
            verdict = "inside" if self.in_band else "OUTSIDE"
            lines.append(f"robust/ideal energy ratio: {self.reference_ratio:.4f}")
            lines.append(
                f"target {HEADLINE['target_ratio']:.2f}, band [{low:.2f}, {high:.2f}]: {verdict}"
            )
        return "\n".join(lines)


def read_results(results_dir: str) -> pd.DataFrame:
    path = os.path.join(results_dir, "results.csv")
    if not os.path.isfile(path):
        raise ReportError(path, 0, "results file not found")
    try:
        frame = pd.read_csv(path)
    except pd.errors.ParserError as e:
        raise ReportError(path, _parser_line(str(e)), f"malformed CSV: {e}")
    missing = [c for c in CSV_COLUMNS["results"] if c not in frame.columns]
    if missing:
        raise ReportError(path, 1, f"missing columns: {', '.join(missing)}")
    for column in ("axis_value", "robust_gamma", "ideal_gamma"):
        bad = pd.to_numeric(frame[column], errors="coerce").isna() & frame[column].notna()
        if bad.any():
            # header is line 1
            raise ReportError(path, int(np.flatnonzero(bad.to_numpy())[0]) + 2, f"non-numeric value in '{column}'")
    return frame


def _parser_line(message: str) -> int:
    marker = "line "
    if marker in message:
        digits = message.split(marker, 1)[1].split(",", 1)[0].strip()
        if digits.isdigit():
            return int(digits)
    return 0


def summarize(results_dir: str) -> SweepSummary:
    """Writes summary.csv next to results.csv and returns the summary."""
    logger = logging.getLogger(__name__)
    frame = read_results(results_dir)
    if frame.empty:
        raise ReportError(os.path.join(results_dir, "results.csv"), 1, "no runs recorded")
    axis = str(frame["axis"].iloc[0])
    solved = frame[frame["status"].isin(SOLVED_STATUSES) & frame["ideal_status"].isin(SOLVED_STATUSES)].copy()
    if len(solved) < len(frame):
        logger.warning(f"{len(frame) - len(solved)} of {len(frame)} runs excluded (infeasible or failed)")
    solved["ratio"] = solved["robust_gamma"] / solved["ideal_gamma"]

    table = (
        solved.groupby("axis_value", sort=True)
        .agg(
            runs=("seed", "count"),
            robust_gamma=("robust_gamma", "mean"),
            ideal_gamma=("ideal_gamma", "mean"),
            ratio=("ratio", "mean"),
            offloaded_bits=("offloaded_bits", "mean"),
            ideal_offloaded_bits=("ideal_offloaded_bits", "mean"),
            rounds=("rounds", "mean"),
        )
        .reset_index()
    )
    table = table[CSV_COLUMNS["summary"]]
    path = os.path.join(results_dir, "summary.csv")
    table.to_csv(path, index=False, float_format="%.17g")

    reference = REFERENCE_AXIS_VALUES.get(axis)
    reference_ratio, in_band = None, None
    if reference is not None:
        row = table[np.isclose(table["axis_value"], reference)]
        if not row.empty:
            reference_ratio = float(row["ratio"].iloc[0])
            low, high = HEADLINE["band"]
            in_band = bool(low <= reference_ratio <= high)
    summary = SweepSummary(table=table, axis=axis, reference_ratio=reference_ratio, in_band=in_band, path=path)
    logger.info(f"Summary written to {path}")
    return summary


