"""Inference-time calibration: group averaging, thresholding, metrics.

A group's prediction is the arithmetic mean of its members' probability
rows (an original plus its paraphrase variants). The decision threshold is
picked by exhaustive grid search over 0.0..0.9 in steps of 0.005, and
predictions are scored with micro/macro-F1 plus per-label breakdowns.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .dataset import Taxonomy
from .errors import DataError

THRESHOLD_GRID = np.arange(181) * 0.005
THRESHOLD_GRID.flags.writeable = False

TUNING_METRICS = ("micro", "macro")


@dataclass(frozen=True)
class MetricsReport:
    micro_f1: float
    macro_f1: float
    per_label: tuple[tuple[float, float, float], ...]  # (precision, recall, f1)
    support: tuple[int, ...]


def average_groups(probs, groups: Iterable[str]) -> tuple[np.ndarray, list[str]]:
    """Collapse member rows to one mean row per group.

    Output rows follow first-appearance order of the group ids. The mean
    is anchored at the column minimum and sums sorted residuals, so it is
    bit-exact for identical members and invariant to member order.
    """
    probs = np.asarray(probs, dtype=np.float64)
    groups = list(groups)
    if probs.ndim != 2 or probs.shape[0] == 0:
        raise DataError("empty probability matrix")
    if len(groups) != probs.shape[0]:
        raise DataError(f"{len(groups)} group ids for {probs.shape[0]} rows")

    member_rows: dict[str, list[int]] = {}
    for row, gid in enumerate(groups):
        member_rows.setdefault(gid, []).append(row)
    out = np.empty((len(member_rows), probs.shape[1]))
    for i, rows in enumerate(member_rows.values()):
        block = probs[rows]
        anchor = block.min(axis=0)
        out[i] = anchor + np.sort(block - anchor, axis=0).sum(axis=0) / len(rows)
    return out, list(member_rows)


def apply_threshold(probs, threshold: float) -> np.ndarray:
    """Binary predictions: 1 where probability is strictly above threshold."""
    return (np.asarray(probs, dtype=np.float64) > threshold).astype(np.float64)


def f1_scores(pred, gold) -> MetricsReport:
    """Micro/macro-F1 with per-label precision/recall/F1 and support.

    Any ratio with a zero denominator is defined as 0; macro-F1 averages
    over all labels, including those with no support.
    """
    pred = np.asarray(pred) != 0
    gold = np.asarray(gold) != 0
    if pred.shape != gold.shape or pred.ndim != 2:
        raise DataError(f"prediction shape {pred.shape} != gold shape {gold.shape}")

    tp = (pred & gold).sum(axis=0).astype(np.float64)
    fp = (pred & ~gold).sum(axis=0).astype(np.float64)
    fn = (~pred & gold).sum(axis=0).astype(np.float64)

    def ratio(num, den):
        return num / den if den > 0 else 0.0

    per_label = tuple(
        (
            ratio(tp[j], tp[j] + fp[j]),
            ratio(tp[j], tp[j] + fn[j]),
            ratio(2.0 * tp[j], 2.0 * tp[j] + fp[j] + fn[j]),
        )
        for j in range(pred.shape[1])
    )
    micro = ratio(2.0 * tp.sum(), 2.0 * tp.sum() + fp.sum() + fn.sum())
    macro = float(np.mean([f1 for _, _, f1 in per_label]))
    support = tuple(int(s) for s in gold.sum(axis=0))
    return MetricsReport(micro_f1=micro, macro_f1=macro, per_label=per_label, support=support)


def tune_threshold(probs, gold, metric: str = "micro") -> float:
    """Grid-search the decision threshold over 0.0..0.9 step 0.005.

    Returns the candidate maximizing the chosen metric; ties break toward
    the smallest threshold.
    """
    if metric not in TUNING_METRICS:
        raise ValueError(f"metric must be one of {TUNING_METRICS}, got {metric!r}")
    probs = np.asarray(probs, dtype=np.float64)
    gold = np.asarray(gold)
    if probs.ndim != 2 or probs.shape[0] == 0:
        raise DataError("empty probability matrix")
    if probs.shape != gold.shape:
        raise DataError(f"probability shape {probs.shape} != gold shape {gold.shape}")

    best_t, best_score = 0.0, -1.0
    for t in THRESHOLD_GRID:
        report = f1_scores(apply_threshold(probs, t), gold)
        score = report.micro_f1 if metric == "micro" else report.macro_f1
        if score > best_score:
            best_t, best_score = float(t), score
    return best_t


def cooccurrence(gold) -> np.ndarray:
    """L x L matrix of pairwise label probabilities; diagonal = marginals."""
    gold = (np.asarray(gold) != 0).astype(np.float64)
    if gold.ndim != 2 or gold.shape[0] == 0:
        raise DataError("empty gold matrix")
    return (gold.T @ gold) / gold.shape[0]


def format_report(report: MetricsReport, taxonomy: Taxonomy) -> str:
    """Flat key/value text rendering of a metrics report."""
    lines = [
        f"micro_f1 = {report.micro_f1:.17g}",
        f"macro_f1 = {report.macro_f1:.17g}",
    ]
    for name, (precision, recall, f1), support in zip(
        taxonomy.labels, report.per_label, report.support
    ):
        lines.append(f"precision[{name}] = {precision:.17g}")
        lines.append(f"recall[{name}] = {recall:.17g}")
        lines.append(f"f1[{name}] = {f1:.17g}")
        lines.append(f"support[{name}] = {support}")
    return "\n".join(lines) + "\n"


def write_report(report: MetricsReport, taxonomy: Taxonomy, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_report(report, taxonomy))


def write_cooccurrence_csv(matrix: np.ndarray, taxonomy: Taxonomy, path) -> None:
    """CSV with label-name headers; names containing commas are quoted."""
    names: Sequence[str] = taxonomy.labels
    if matrix.shape != (len(names), len(names)):
        raise DataError(f"matrix shape {matrix.shape} does not match {len(names)} labels")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", *names])
        for name, row in zip(names, matrix):
            writer.writerow([name, *(format(v, ".17g") for v in row)])
