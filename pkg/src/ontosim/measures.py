"""The six similarity measures, batch sweeps and min-max rescaling.

Path-based:

    lch(c1,c2)       = -ln( path_nodes(c1,c2) / (2 * max_depth) )
    wu_palmer(c1,c2) = 2 * depth(lca) / (depth(c1) + depth(c2))

Information-content based (intrinsic ic from the index):

    resnik(c1,c2)        = ic(lca)
    lin(c1,c2)           = 2 * ic(lca) / (ic(c1) + ic(c2))
    intrinsic_lch(c1,c2) = -ln( (ic(c1)+ic(c2)-2*ic(lca)+1) / (2*max_ic) ),
                           clamped at 0
    sokal(c1,c2)         = ic(lca) / (2*(ic(c1)+ic(c2)) - 3*ic(lca))

All are symmetric; wu_palmer, lin and sokal live in [0,1], the rest are
unbounded above and min-max rescaling maps them onto [0,1] per group.
"""

from __future__ import annotations

import csv
import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence, TextIO

from .errors import ContractError, FormatError, UnknownConceptError, UnknownMeasureError
from .index import OntologyIndex, pair_stats

_BATCH_CHUNK = 4096


class MeasureId(enum.Enum):
    LCH = "LCH"
    WUPALMER = "WUPALMER"
    INTRINSIC_RESNIK = "INTRINSIC_RESNIK"
    INTRINSIC_LIN = "INTRINSIC_LIN"
    INTRINSIC_LCH = "INTRINSIC_LCH"
    SOKAL = "SOKAL"


ALL_MEASURES: tuple[MeasureId, ...] = tuple(MeasureId)

# the intrinsic variants answer to their classic short names as well
_ALIASES = {
    "LIN": MeasureId.INTRINSIC_LIN,
    "RESNIK": MeasureId.INTRINSIC_RESNIK,
}


def parse_measure(name: str) -> MeasureId:
    """Case-insensitive measure lookup; rejects anything but the six."""
    key = name.strip().upper()
    try:
        return MeasureId(key)
    except ValueError:
        pass
    try:
        return _ALIASES[key]
    except KeyError:
        raise UnknownMeasureError(name) from None


@dataclass(frozen=True)
class SimilarityRecord:
    centroid: str
    candidate: str
    measure: MeasureId
    raw: float
    rescaled: float | None = None


def _score(index: OntologyIndex, measure: MeasureId, o1: int, o2: int,
           lca_ord: int, path: int) -> float:
    ic1 = float(index.ic[o1])
    ic2 = float(index.ic[o2])
    ic_a = float(index.ic[lca_ord])
    if measure is MeasureId.LCH:
        return -math.log(path / (2.0 * index.max_depth))
    if measure is MeasureId.WUPALMER:
        # min-over-parents depths let an LCA sit deeper than an argument on
        # multi-parent shapes; the [0,1] bound is part of the contract
        value = 2.0 * float(index.depth[lca_ord]) / (
            float(index.depth[o1]) + float(index.depth[o2]))
        return value if value < 1.0 else 1.0
    if measure is MeasureId.INTRINSIC_RESNIK:
        return ic_a
    if measure is MeasureId.INTRINSIC_LIN:
        denom = ic1 + ic2
        if denom <= 0.0:
            return 0.0
        value = 2.0 * ic_a / denom
        return value if value < 1.0 else 1.0
    if measure is MeasureId.INTRINSIC_LCH:
        value = -math.log((ic1 + ic2 - 2.0 * ic_a + 1.0) / (2.0 * index.max_ic))
        return value if value > 0.0 else 0.0
    if measure is MeasureId.SOKAL:
        if ic_a == 0.0:
            return 0.0
        if o1 == o2:
            return 1.0  # denominator reduces to ic algebraically
        value = ic_a / (2.0 * (ic1 + ic2) - 3.0 * ic_a)
        return value if value < 1.0 else 1.0
    raise UnknownMeasureError(measure)


def similarity(index: OntologyIndex, measure: MeasureId,
               c1: str, c2: str) -> float:
    """Dispatch one pair to one measure."""
    o1, o2 = index.ordinal(c1), index.ordinal(c2)
    lca_ord, path = pair_stats(index, o1, o2)
    return _score(index, measure, o1, o2, lca_ord, path)


def lch(index, c1, c2):
    return similarity(index, MeasureId.LCH, c1, c2)


def wu_palmer(index, c1, c2):
    return similarity(index, MeasureId.WUPALMER, c1, c2)


def resnik(index, c1, c2):
    return similarity(index, MeasureId.INTRINSIC_RESNIK, c1, c2)


def lin(index, c1, c2):
    return similarity(index, MeasureId.INTRINSIC_LIN, c1, c2)


def intrinsic_lch(index, c1, c2):
    return similarity(index, MeasureId.INTRINSIC_LCH, c1, c2)


def sokal(index, c1, c2):
    return similarity(index, MeasureId.SOKAL, c1, c2)


def pair_scores(index: OntologyIndex, c1: str, c2: str,
                measures: Sequence[MeasureId]) -> list[float]:
    """All requested measures for one pair, lca/path computed once."""
    o1, o2 = index.ordinal(c1), index.ordinal(c2)
    lca_ord, path = pair_stats(index, o1, o2)
    return [_score(index, m, o1, o2, lca_ord, path) for m in measures]


def _ordered_measures(measures: Iterable[MeasureId]) -> list[MeasureId]:
    wanted = set(measures)
    if not wanted:
        raise ContractError("empty measure set")
    return [m for m in ALL_MEASURES if m in wanted]


def batch_centroid_sweep(
    index: OntologyIndex,
    centroid: str,
    universe: Sequence[str],
    measures: Iterable[MeasureId] = ALL_MEASURES,
    workers: int = 1,
) -> list[SimilarityRecord]:
    """Score the centroid against every universe member.

    Output order is universe order crossed with the fixed measure order
    and does not depend on ``workers``.
    """
    ordered = _ordered_measures(measures)
    if not universe:
        raise ContractError("empty universe")
    o_c = index.ordinal(centroid)
    for pos, cid in enumerate(universe):
        if not index.has_concept(cid):
            raise UnknownConceptError(f"{cid} (universe position {pos})")

    def run_chunk(chunk: Sequence[str]) -> list[SimilarityRecord]:
        out = []
        for cid in chunk:
            o = index.ordinal(cid)
            lca_ord, path = pair_stats(index, o_c, o)
            for m in ordered:
                out.append(SimilarityRecord(
                    centroid=centroid, candidate=cid, measure=m,
                    raw=_score(index, m, o_c, o, lca_ord, path)))
        return out

    if workers <= 1 or len(universe) <= _BATCH_CHUNK:
        return run_chunk(universe)
    chunks = [universe[i:i + _BATCH_CHUNK]
              for i in range(0, len(universe), _BATCH_CHUNK)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run_chunk, chunks))
    return [record for part in parts for record in part]


def rescale_minmax(records: Sequence[SimilarityRecord],
                   grouping: str = "centroid") -> list[SimilarityRecord]:
    """Populate ``rescaled`` with (raw-min)/(max-min) within each group.

    ``grouping`` is "centroid" (one group per centroid+measure, the
    default) or "global" (one group per measure across all centroids).
    Flat groups (max == min) rescale to 0.
    """
    if grouping not in ("centroid", "global"):
        raise ContractError(f"unknown rescale grouping {grouping!r}")
    lo: dict[tuple, float] = {}
    hi: dict[tuple, float] = {}
    def key(r):
        return (r.centroid, r.measure) if grouping == "centroid" else (r.measure,)
    for r in records:
        k = key(r)
        if k not in lo:
            lo[k], hi[k] = r.raw, r.raw
        else:
            lo[k] = min(lo[k], r.raw)
            hi[k] = max(hi[k], r.raw)
    out = []
    for r in records:
        k = key(r)
        span = hi[k] - lo[k]
        value = (r.raw - lo[k]) / span if span > 0.0 else 0.0
        out.append(replace(r, rescaled=value))
    return out


def format_score(value: float) -> str:
    """Fixed 12-significant-digit float serialization for CSV output."""
    if value == 0.0:
        return "0"
    return format(value, ".12g")


BATCH_CSV_HEADER = ("centroid", "candidate", "measure", "raw", "rescaled")


def write_batch_csv(records: Iterable[SimilarityRecord], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(BATCH_CSV_HEADER)
    for r in records:
        writer.writerow((
            r.centroid, r.candidate, r.measure.value, format_score(r.raw),
            "" if r.rescaled is None else format_score(r.rescaled)))


def read_batch_csv(stream: TextIO) -> list[SimilarityRecord]:
    reader = csv.reader(stream)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != BATCH_CSV_HEADER:
        raise FormatError(
            f"batch CSV header must be {','.join(BATCH_CSV_HEADER)}")
    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 5:
            raise FormatError(f"batch CSV line {lineno}: expected 5 columns")
        centroid, candidate, measure, raw, rescaled = row
        try:
            records.append(SimilarityRecord(
                centroid=centroid, candidate=candidate,
                measure=parse_measure(measure), raw=float(raw),
                rescaled=float(rescaled) if rescaled != "" else None))
        except ValueError as exc:
            raise FormatError(f"batch CSV line {lineno}: {exc}") from None
    return records
