"""Threshold clustering and the evaluation protocol around it.

Given one centroid's similarity records and a labeled reference set, this
module covers: inclusive threshold clusters, the full-inclusion
feasibility triple, seeded top-k review sampling with a tie cap, ROC /
precision-recall / F1 sweeps, macro-averaging over centroids on a shared
grid, and Cohen's kappa between two binary labelings.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np

from .errors import ContractError, FormatError
from .measures import MeasureId, SimilarityRecord, format_score, parse_measure

SOURCE_TAGS = ("SMQ", "HLGT", "AUTOLIST", "SSM_ONLY")
STANDARDS = ("expert", "smq", "hlgt")


@dataclass(frozen=True)
class ReferenceSet:
    """A centroid plus labeled candidate terms."""

    centroid: str
    candidates: tuple[tuple[str, str], ...]  # (concept id, source tag)
    expert_positive: frozenset[str]

    @property
    def candidate_ids(self) -> tuple[str, ...]:
        return tuple(cid for cid, _src in self.candidates)

    def positives(self, standard: str = "expert") -> frozenset[str]:
        """Positive ids under one reference standard."""
        if standard == "expert":
            return self.expert_positive
        if standard == "smq":
            return frozenset(c for c, s in self.candidates if s == "SMQ")
        if standard == "hlgt":
            return frozenset(c for c, s in self.candidates if s == "HLGT")
        raise ContractError(
            f"unknown standard {standard!r}, expected one of {STANDARDS}")


@dataclass(frozen=True)
class SweepResult:
    measure: MeasureId
    thresholds: np.ndarray          # ascending float64
    tp: np.ndarray | None           # counts are None for macro-averaged results
    fp: np.ndarray | None
    tn: np.ndarray | None
    fn: np.ndarray | None
    tpr: np.ndarray
    fpr: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray


@dataclass(frozen=True)
class KappaResult:
    p_observed: float
    p_expected: float
    kappa: float


def _check_single_group(records: Sequence[SimilarityRecord]) -> None:
    if not records:
        raise ContractError("empty record set")
    centroids = {r.centroid for r in records}
    measures = {r.measure for r in records}
    if len(centroids) > 1 or len(measures) > 1:
        raise ContractError(
            f"records mix centroids {sorted(centroids)} / measures "
            f"{sorted(m.value for m in measures)}; one of each expected")
    ids = [r.candidate for r in records]
    if len(set(ids)) != len(ids):
        raise ContractError("records contain duplicate candidate ids")


def _scores(records: Sequence[SimilarityRecord], scale: str) -> dict[str, float]:
    if scale == "raw":
        return {r.candidate: r.raw for r in records}
    if scale == "rescaled":
        for r in records:
            if r.rescaled is None:
                raise ContractError(
                    f"record ({r.centroid},{r.candidate},{r.measure.value}) "
                    f"has no rescaled score; run rescaling first")
        return {r.candidate: r.rescaled for r in records}
    raise ContractError(f"unknown scale {scale!r}, expected raw|rescaled")


def threshold_cluster(records: Sequence[SimilarityRecord], threshold: float,
                      scale: str = "raw") -> set[str]:
    """Candidates whose score clears the threshold (inclusive)."""
    _check_single_group(records)
    scores = _scores(records, scale)
    return {cid for cid, s in scores.items() if s >= threshold}


def full_inclusion_threshold(
    records: Sequence[SimilarityRecord],
    target_set: Iterable[str],
    scale: str = "raw",
) -> tuple[float, int, float]:
    """Largest threshold whose cluster still holds the whole target set.

    Returns (threshold, external count, external proportion): the minimum
    target score, how many non-target candidates reach it, and that count
    over the number of non-target candidates (0 when there are none).
    """
    _check_single_group(records)
    targets = set(target_set)
    if not targets:
        raise ContractError("empty target set")
    scores = _scores(records, scale)
    missing = targets - scores.keys()
    if missing:
        raise ContractError(
            "target ids missing from records: " + ", ".join(sorted(missing)))
    threshold = min(scores[t] for t in targets)
    external = [cid for cid in scores if cid not in targets]
    count = sum(1 for cid in external if scores[cid] >= threshold)
    proportion = count / len(external) if external else 0.0
    return threshold, count, proportion


def build_review_sample(
    records: Sequence[SimilarityRecord],
    excluded: Iterable[str] = (),
    k: int = 200,
    tie_cap: int = 50,
    seed: int = 0,
    scale: str = "raw",
) -> list[str]:
    """Top-k ranked candidates with seeded sampling of oversized tie blocks.

    Candidates are ranked by descending score (ties in ascending id order).
    If the score at rank k is shared by more than ``tie_cap`` candidates,
    the result is every strictly-higher-scored candidate followed by
    exactly ``tie_cap`` uniformly sampled members of the tied block, in
    sampled order. Fewer than k eligible candidates returns them all.
    """
    _check_single_group(records)
    if k < 1 or tie_cap < 1:
        raise ContractError("k and tie_cap must be >= 1")
    scores = _scores(records, scale)
    banned = set(excluded)
    eligible = [cid for cid in scores if cid not in banned]
    if not eligible:
        raise ContractError("no eligible candidates after exclusion")
    ranked = sorted(eligible, key=lambda cid: (-scores[cid], cid))
    if len(ranked) <= k:
        return ranked
    boundary = scores[ranked[k - 1]]
    tied = [cid for cid in ranked if scores[cid] == boundary]
    if len(tied) <= tie_cap:
        return ranked[:k]
    head = [cid for cid in ranked if scores[cid] > boundary]
    rng = random.Random(seed)
    sampled = rng.sample(tied, tie_cap)
    return head + sampled


def _confusion_at(scores: np.ndarray, labels: np.ndarray,
                  thresholds: np.ndarray):
    """Vectorized inclusive-threshold confusion counts per threshold."""
    predicted = scores[None, :] >= thresholds[:, None]
    pos = labels[None, :]
    tp = (predicted & pos).sum(axis=1)
    fp = (predicted & ~pos).sum(axis=1)
    fn = (~predicted & pos).sum(axis=1)
    tn = (~predicted & ~pos).sum(axis=1)
    return tp, fp, tn, fn


def _rates(tp, fp, tn, fn):
    p = tp + fn
    n = fp + tn
    tpr = tp / p
    fpr = fp / n
    called = tp + fp
    precision = np.divide(tp, called, out=np.zeros_like(tpr), where=called > 0)
    recall = tpr
    pr = precision + recall
    f1 = np.divide(2.0 * precision * recall, pr,
                   out=np.zeros_like(tpr), where=pr > 0)
    return tpr, fpr, precision, recall, f1


def roc_pr_sweep(
    records: Sequence[SimilarityRecord],
    positives: Iterable[str],
    thresholds: Sequence[float] | None = None,
    scale: str = "raw",
) -> SweepResult:
    """Confusion counts and rates across thresholds (score >= t predicts in).

    Default thresholds are the distinct scores plus a sentinel above the
    maximum, which contributes the empty-prediction (0,0) ROC point.
    """
    _check_single_group(records)
    scores_by_id = _scores(records, scale)
    pos = set(positives)
    unknown = pos - scores_by_id.keys()
    if unknown:
        raise ContractError(
            "positive ids missing from records: " + ", ".join(sorted(unknown)))
    ids = [r.candidate for r in records]
    scores = np.array([scores_by_id[c] for c in ids], dtype=np.float64)
    labels = np.array([c in pos for c in ids], dtype=bool)
    if labels.all() or not labels.any():
        raise ContractError(
            "labels are all one class; rates are undefined")
    if thresholds is None:
        grid = np.unique(scores)
        grid = np.append(grid, grid[-1] + 1.0)  # sentinel above the maximum
    else:
        grid = np.unique(np.asarray(list(thresholds), dtype=np.float64))
        if grid.size == 0:
            raise ContractError("empty threshold list")
    tp, fp, tn, fn = _confusion_at(scores, labels, grid)
    tpr, fpr, precision, recall, f1 = _rates(tp, fp, tn, fn)
    return SweepResult(
        measure=records[0].measure, thresholds=grid,
        tp=tp, fp=fp, tn=tn, fn=fn,
        tpr=tpr, fpr=fpr, precision=precision, recall=recall, f1=f1)


def f1_sweep(
    records: Sequence[SimilarityRecord],
    positives: Iterable[str],
    thresholds: Sequence[float] | None = None,
    scale: str = "raw",
) -> tuple[SweepResult, float, float]:
    """roc_pr_sweep plus (smallest threshold attaining the best F1, best F1)."""
    sweep = roc_pr_sweep(records, positives, thresholds, scale)
    best_f1 = float(sweep.f1.max())
    best_threshold = float(sweep.thresholds[np.argmax(sweep.f1)])
    return sweep, best_threshold, best_f1


_EMPTY_RATES = (0.0, 0.0, 0.0, 0.0, 0.0)  # tpr fpr precision recall f1


def _step_at(sweep: SweepResult, grid: np.ndarray) -> np.ndarray:
    """Rates at each grid threshold by step lookup (next sample at/above).

    Above the sweep's last threshold the prediction set is empty, giving
    the all-zero rate vector.
    """
    idx = np.searchsorted(sweep.thresholds, grid, side="left")
    rates = np.stack([sweep.tpr, sweep.fpr, sweep.precision,
                      sweep.recall, sweep.f1], axis=1)
    rates = np.vstack([rates, np.array(_EMPTY_RATES)])
    return rates[np.minimum(idx, len(sweep.thresholds))]


def macro_average(sweeps: Sequence[SweepResult],
                  grid: Sequence[float]) -> SweepResult:
    """Average per-sweep rates on a shared ascending threshold grid."""
    if not sweeps:
        raise ContractError("no sweeps to average")
    measures = {s.measure for s in sweeps}
    if len(measures) > 1:
        raise ContractError(
            "sweeps mix measures: " + ", ".join(sorted(m.value for m in measures)))
    grid = np.asarray(list(grid), dtype=np.float64)
    if grid.size == 0:
        raise ContractError("empty grid")
    if not np.all(np.diff(grid) > 0):
        raise ContractError("grid must be strictly ascending")
    acc = np.zeros((grid.size, 5))
    for sweep in sweeps:
        acc += _step_at(sweep, grid)
    acc /= len(sweeps)
    return SweepResult(
        measure=next(iter(measures)), thresholds=grid,
        tp=None, fp=None, tn=None, fn=None,
        tpr=acc[:, 0], fpr=acc[:, 1], precision=acc[:, 2],
        recall=acc[:, 3], f1=acc[:, 4])


def cohens_kappa(labels_a: Mapping[str, bool],
                 labels_b: Mapping[str, bool]) -> KappaResult:
    """Two-rater two-category kappa from the 2x2 contingency table."""
    if labels_a.keys() != labels_b.keys():
        only_a = sorted(labels_a.keys() - labels_b.keys())
        only_b = sorted(labels_b.keys() - labels_a.keys())
        raise ContractError(
            f"label id sets differ (only in A: {only_a[:5]}, "
            f"only in B: {only_b[:5]})")
    n = len(labels_a)
    if n == 0:
        raise ContractError("empty labelings")
    yy = yn = ny = nn = 0
    for cid, a in labels_a.items():
        b = labels_b[cid]
        if a and b:
            yy += 1
        elif a:
            yn += 1
        elif b:
            ny += 1
        else:
            nn += 1
    p_o = (yy + nn) / n
    p_e = ((yy + yn) * (yy + ny) + (ny + nn) * (yn + nn)) / (n * n)
    if p_e == 1.0:
        kappa = 1.0
    else:
        kappa = (p_o - p_e) / (1.0 - p_e)
    return KappaResult(p_observed=p_o, p_expected=p_e, kappa=kappa)


REFERENCE_CSV_HEADER = ("concept_id", "source", "expert_label")


def load_reference_set(stream: TextIO, centroid: str) -> ReferenceSet:
    """Parse a labeled candidate CSV for one centroid.

    Header ``concept_id,source,expert_label`` with source in SMQ | HLGT |
    AUTOLIST | SSM_ONLY and expert_label in {0,1}. The centroid must
    appear among the candidates.
    """
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or tuple(h.strip().lstrip("﻿") for h in header) \
            != REFERENCE_CSV_HEADER:
        raise FormatError(
            f"reference CSV header must be {','.join(REFERENCE_CSV_HEADER)}")
    candidates: list[tuple[str, str]] = []
    positives: set[str] = set()
    seen: set[str] = set()
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise FormatError(
                f"reference CSV line {lineno}: expected 3 columns")
        cid, source, label = (x.strip() for x in row)
        if source not in SOURCE_TAGS:
            raise FormatError(
                f"reference CSV line {lineno}: unknown source {source!r}")
        if label not in ("0", "1"):
            raise FormatError(
                f"reference CSV line {lineno}: expert_label must be 0 or 1")
        if cid in seen:
            raise FormatError(
                f"reference CSV line {lineno}: duplicate concept id {cid!r}")
        seen.add(cid)
        candidates.append((cid, source))
        if label == "1":
            positives.add(cid)
    if centroid not in seen:
        raise FormatError(
            f"reference set has no row for its centroid {centroid!r}")
    return ReferenceSet(centroid=centroid, candidates=tuple(candidates),
                        expert_positive=frozenset(positives))


def records_for(records: Sequence[SimilarityRecord],
                ids: Iterable[str]) -> list[SimilarityRecord]:
    """Restrict records to the given candidate ids, erroring on gaps."""
    wanted = set(ids)
    subset = [r for r in records if r.candidate in wanted]
    missing = wanted - {r.candidate for r in subset}
    if missing:
        raise ContractError(
            "no similarity record for labeled candidates: "
            + ", ".join(sorted(missing)[:10]))
    return subset


SWEEP_CSV_HEADER = ("measure", "threshold", "tp", "fp", "tn", "fn",
                    "tpr", "fpr", "precision", "recall", "f1")


def write_sweep_csv(sweeps: Iterable[SweepResult], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    for sweep in sweeps:
        for i, t in enumerate(sweep.thresholds):
            counts = ("", "", "", "")
            if sweep.tp is not None:
                counts = (int(sweep.tp[i]), int(sweep.fp[i]),
                          int(sweep.tn[i]), int(sweep.fn[i]))
            writer.writerow((
                sweep.measure.value, format_score(float(t)), *counts,
                format_score(float(sweep.tpr[i])),
                format_score(float(sweep.fpr[i])),
                format_score(float(sweep.precision[i])),
                format_score(float(sweep.recall[i])),
                format_score(float(sweep.f1[i]))))


KAPPA_CSV_HEADER = ("centroid", "standardA", "standardB", "po", "pe", "kappa")


def write_kappa_csv(rows: Iterable[tuple[str, str, str, KappaResult]],
                    stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(KAPPA_CSV_HEADER)
    for centroid, std_a, std_b, result in rows:
        writer.writerow((centroid, std_a, std_b,
                         format_score(result.p_observed),
                         format_score(result.p_expected),
                         format_score(result.kappa)))


LABELS_CSV_HEADER = ("concept_id", "label")


def load_labels_csv(stream: TextIO) -> dict[str, bool]:
    """Parse a binary labeling CSV (header ``concept_id,label``)."""
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or tuple(h.strip().lstrip("﻿") for h in header) \
            != LABELS_CSV_HEADER:
        raise FormatError(
            f"labels CSV header must be {','.join(LABELS_CSV_HEADER)}")
    labels: dict[str, bool] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 2:
            raise FormatError(f"labels CSV line {lineno}: expected 2 columns")
        cid, value = (x.strip() for x in row)
        if value not in ("0", "1"):
            raise FormatError(
                f"labels CSV line {lineno}: label must be 0 or 1")
        if cid in labels:
            raise FormatError(
                f"labels CSV line {lineno}: duplicate concept id {cid!r}")
        labels[cid] = value == "1"
    return labels
