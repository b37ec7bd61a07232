"""Command-line entry point.

Subcommands wrap the library over its CSV interfaces:

    build    parse + merge + index + serialize
    sim      one pair, one measure
    sweep    centroid vs universe batch scores
    cluster  concepts at or above a similarity threshold
    sample   top-k review sampling with tie cap
    eval     ROC/PR/F1 sweeps against a reference set (optionally macro)
    kappa    Cohen's kappa between two labelings

Every run is deterministic given identical inputs and --seed. Exit codes:
0 success, 2 format error, 3 graph error, 4 lookup error, 5 contract error.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from . import evaluation, measures, ontology
from .errors import ContractError, FormatError, OntosimError
from .index import build_index, load_index, save_index

DEFAULT_SEED = 42
DEFAULT_GRID = 201


def _open_read(path: str):
    try:
        return open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise FormatError(f"cannot open {path!r}: {exc}") from exc


def _read_id_lines(path: str) -> list[str]:
    with _open_read(path) as f:
        return [line.strip() for line in f if line.strip()]


def _parse_concepts_arg(value: str) -> tuple[str, str]:
    path, sep, vocab = value.rpartition(":")
    if not sep or not path or not vocab:
        raise FormatError(
            f"--concepts expects PATH:VOCAB, got {value!r}")
    return path, vocab


def cmd_build(args) -> int:
    concept_lists = []
    for arg in args.concepts:
        path, vocab = _parse_concepts_arg(arg)
        with _open_read(path) as f:
            concept_lists.append(ontology.parse_concepts(f, vocab))
    edge_lists = []
    for path in args.relations:
        with _open_read(path) as f:
            edges, _dups = ontology.parse_relations(f)
            edge_lists.append(edges)
    mappings = []
    for path in args.mappings:
        with _open_read(path) as f:
            mappings.extend(ontology.parse_mappings(f))
    view = ontology.merge_views(concept_lists, edge_lists, mappings)
    index = build_index(view)
    save_index(index, args.out)
    print(f"concepts {index.concept_count}")
    print(f"edges {len(view.edges)}")
    print(f"leaves {int(index.leaf_count[index.root])}")
    print(f"max_depth {index.max_depth}")
    print(f"max_ic {measures.format_score(index.max_ic)}")
    print(f"index written to {args.out}")
    return 0


def cmd_sim(args) -> int:
    index = load_index(args.index)
    measure = measures.parse_measure(args.measure)
    score = measures.similarity(index, measure, args.c1, args.c2)
    print(f"{score:.6f}")
    return 0


def _resolve_universe(index, selector: str) -> list[str]:
    if selector == "ALL" or selector.startswith("ALL:"):
        _, _, vocab = selector.partition(":")
        if vocab:
            # the virtual root carries no user vocabulary, so it drops out
            ordinals = index.ordinals_for_vocabulary(vocab)
            if not ordinals:
                raise ContractError(f"no concepts carry vocabulary {vocab!r}")
        else:
            ordinals = range(index.concept_count)
        return [index.ids[i] for i in ordinals]
    return _read_id_lines(selector)


def cmd_sweep(args) -> int:
    index = load_index(args.index)
    selected = [measures.parse_measure(m) for m in args.measure] \
        if args.measure else list(measures.ALL_MEASURES)
    universe = _resolve_universe(index, args.universe)
    records = measures.batch_centroid_sweep(
        index, args.centroid, universe, selected, workers=args.workers)
    if args.rescale:
        records = measures.rescale_minmax(records)
    by_measure: dict = {}
    for r in records:
        lo, hi = by_measure.get(r.measure, (r.raw, r.raw))
        by_measure[r.measure] = (min(lo, r.raw), max(hi, r.raw))
    for m in measures.ALL_MEASURES:
        if m in by_measure:
            lo, hi = by_measure[m]
            print(f"{m.value} min={measures.format_score(lo)} "
                  f"max={measures.format_score(hi)}")
    with open(args.out, "w", encoding="utf-8", newline="") as f:
        measures.write_batch_csv(records, f)
    print(f"{len(records)} records written to {args.out}")
    return 0


def _load_records(path: str):
    with _open_read(path) as f:
        return measures.read_batch_csv(f)


def cmd_sample(args) -> int:
    records = _load_records(args.records)
    if args.measure:
        wanted = measures.parse_measure(args.measure)
        records = [r for r in records if r.measure is wanted]
        if not records:
            raise ContractError(
                f"no records for measure {wanted.value} in {args.records!r}")
    excluded = _read_id_lines(args.excluded) if args.excluded else []
    sample = evaluation.build_review_sample(
        records, excluded, k=args.k, tie_cap=args.tie_cap, seed=args.seed,
        scale=args.scale)
    scores = {r.candidate: (r.raw if args.scale == "raw" else r.rescaled)
              for r in records}
    with open(args.out, "w", encoding="utf-8", newline="") as f:
        f.write("concept_id,score\n")
        for cid in sample:
            f.write(f"{cid},{measures.format_score(scores[cid])}\n")
    print(f"{len(sample)} candidates written to {args.out}")
    return 0


def cmd_cluster(args) -> int:
    records = _load_records(args.records)
    wanted = measures.parse_measure(args.measure)
    records = [r for r in records if r.measure is wanted]
    if not records:
        raise ContractError(
            f"no records for measure {wanted.value} in {args.records!r}")
    members = evaluation.threshold_cluster(records, args.threshold,
                                           scale=args.scale)
    scores = {r.candidate: (r.raw if args.scale == "raw" else r.rescaled)
              for r in records}
    ranked = sorted(members, key=lambda cid: (-scores[cid], cid))
    with open(args.out, "w", encoding="utf-8", newline="") as f:
        f.write("concept_id,score\n")
        for cid in ranked:
            f.write(f"{cid},{measures.format_score(scores[cid])}\n")
    print(f"{len(ranked)} concepts at threshold "
          f"{measures.format_score(args.threshold)} written to {args.out}")
    return 0


def _split_by_measure(records):
    groups: dict = {}
    for r in records:
        groups.setdefault(r.measure, []).append(r)
    return [(m, groups[m]) for m in measures.ALL_MEASURES if m in groups]


def _eval_one(records, reference, standard, scale):
    """Per-measure (sweep, best threshold, best F1) for one reference set."""
    positives = reference.positives(standard)
    results = []
    for measure, group in _split_by_measure(records):
        subset = evaluation.records_for(group, reference.candidate_ids)
        sweep, best_t, best_f1 = evaluation.f1_sweep(
            subset, positives, scale=scale)
        results.append((measure, sweep, best_t, best_f1))
    return results


def cmd_eval(args) -> int:
    if args.manifest:
        return _eval_macro(args)
    if not (args.records and args.reference and args.centroid):
        raise ContractError(
            "eval needs --records, --reference and --centroid "
            "(or --manifest for macro runs)")
    records = _load_records(args.records)
    with _open_read(args.reference) as f:
        reference = evaluation.load_reference_set(f, args.centroid)
    results = _eval_one(records, reference, args.standard, args.scale)
    out_path = f"{args.out}_sweep.csv"
    with open(out_path, "w", encoding="utf-8", newline="") as f:
        evaluation.write_sweep_csv([s for _, s, _, _ in results], f)
    for measure, _sweep, best_t, best_f1 in results:
        print(f"{measure.value} best_f1={measures.format_score(best_f1)} "
              f"at_threshold={measures.format_score(best_t)}")
    print(f"sweep curves written to {out_path}")
    return 0


def _read_manifest(path: str) -> list[tuple[str, str, str]]:
    base = os.path.dirname(os.path.abspath(path))
    rows = []
    with _open_read(path) as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != \
                ["centroid", "records", "reference"]:
            raise FormatError(
                "manifest header must be centroid,records,reference")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise FormatError(f"manifest line {lineno}: expected 3 columns")
            centroid, rec_path, ref_path = (x.strip() for x in row)
            if not os.path.isabs(rec_path):
                rec_path = os.path.join(base, rec_path)
            if not os.path.isabs(ref_path):
                ref_path = os.path.join(base, ref_path)
            rows.append((centroid, rec_path, ref_path))
    if not rows:
        raise ContractError("manifest lists no reference sets")
    return rows


def _eval_macro(args) -> int:
    sets = _read_manifest(args.manifest)
    per_measure_sweeps: dict = {}
    per_measure_best: dict = {}
    best_rows = []
    for centroid, rec_path, ref_path in sets:
        records = _load_records(rec_path)
        with _open_read(ref_path) as f:
            reference = evaluation.load_reference_set(f, centroid)
        for measure, sweep, best_t, best_f1 in _eval_one(
                records, reference, args.standard, args.scale):
            per_measure_sweeps.setdefault(measure, []).append(sweep)
            per_measure_best.setdefault(measure, []).append(best_f1)
            best_rows.append((centroid, measure, best_t, best_f1))

    if args.scale == "rescaled":
        grid = np.linspace(0.0, 1.0, args.grid)
    else:
        lo = min(float(s.thresholds[0])
                 for sweeps in per_measure_sweeps.values() for s in sweeps)
        hi = max(float(s.thresholds[-1])
                 for sweeps in per_measure_sweeps.values() for s in sweeps)
        grid = np.linspace(lo, hi, args.grid)

    macro_path = f"{args.out}_macro.csv"
    macros = []
    for measure in measures.ALL_MEASURES:
        if measure in per_measure_sweeps:
            macros.append(evaluation.macro_average(
                per_measure_sweeps[measure], grid))
    with open(macro_path, "w", encoding="utf-8", newline="") as f:
        evaluation.write_sweep_csv(macros, f)

    best_path = f"{args.out}_best.csv"
    with open(best_path, "w", encoding="utf-8", newline="") as f:
        f.write("centroid,measure,best_threshold,best_f1\n")
        for centroid, measure, best_t, best_f1 in best_rows:
            f.write(f"{centroid},{measure.value},"
                    f"{measures.format_score(best_t)},"
                    f"{measures.format_score(best_f1)}\n")

    for macro in macros:
        bests = per_measure_best[macro.measure]
        mean_best = sum(bests) / len(bests)
        print(f"{macro.measure.value} "
              f"mean_best_f1={measures.format_score(mean_best)} "
              f"macro_curve_max_f1="
              f"{measures.format_score(float(macro.f1.max()))}")
    print(f"macro curves written to {macro_path}; "
          f"per-set best F1 written to {best_path}")
    return 0


def cmd_kappa(args) -> int:
    with _open_read(args.labels_a) as f:
        labels_a = evaluation.load_labels_csv(f)
    with _open_read(args.labels_b) as f:
        labels_b = evaluation.load_labels_csv(f)
    result = evaluation.cohens_kappa(labels_a, labels_b)
    with open(args.out, "w", encoding="utf-8", newline="") as f:
        evaluation.write_kappa_csv(
            [(args.centroid, args.standard_a, args.standard_b, result)], f)
    print(f"kappa={measures.format_score(result.kappa)} "
          f"po={measures.format_score(result.p_observed)} "
          f"pe={measures.format_score(result.p_expected)}")
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontosim",
        description="Semantic similarity over merged concept hierarchies.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="parse, merge and index ontologies")
    p.add_argument("--concepts", action="append", required=True,
                   metavar="PATH:VOCAB")
    p.add_argument("--relations", action="append", required=True)
    p.add_argument("--mappings", action="append", default=[])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sim", help="similarity of one concept pair")
    p.add_argument("--index", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("c1")
    p.add_argument("c2")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("sweep", help="centroid vs universe batch scores")
    p.add_argument("--index", required=True)
    p.add_argument("--centroid", required=True)
    p.add_argument("--universe", required=True,
                   help="id-list file, ALL, or ALL:VOCAB")
    p.add_argument("--measure", action="append",
                   help="repeatable; default all six")
    p.add_argument("--rescale", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("cluster", help="concepts at or above a threshold")
    p.add_argument("--records", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--scale", choices=("raw", "rescaled"), default="raw")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("sample", help="top-k review sample with tie cap")
    p.add_argument("--records", required=True)
    p.add_argument("--measure")
    p.add_argument("--excluded")
    p.add_argument("--k", type=int, default=200)
    p.add_argument("--tie-cap", type=int, default=50)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--scale", choices=("raw", "rescaled"), default="raw")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("eval", help="ROC/PR/F1 sweeps against a reference set")
    p.add_argument("--records")
    p.add_argument("--reference")
    p.add_argument("--centroid")
    p.add_argument("--manifest",
                   help="centroid,records,reference CSV for macro runs")
    p.add_argument("--standard", choices=evaluation.STANDARDS,
                   default="expert")
    p.add_argument("--scale", choices=("raw", "rescaled"), default="raw")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("kappa", help="Cohen's kappa between two labelings")
    p.add_argument("--labels-a", required=True)
    p.add_argument("--labels-b", required=True)
    p.add_argument("--centroid", default="-")
    p.add_argument("--standard-a", default="A")
    p.add_argument("--standard-b", default="B")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_kappa)

    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except OntosimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
