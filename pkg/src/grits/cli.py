"""Command-line interface.

Subcommands: eval, corrupt, experiment scheme|sweep, oracle-check,
convert. Exit codes: 0 success, 1 processing error, 2 usage error.
Set GRITS_THREADS to cap worker threads in batch sections.
"""
from __future__ import annotations

import argparse
import string
import sys
from pathlib import Path
from typing import List, Sequence, Tuple

from . import __version__
from ._util import derived_rng, parallel_map
from .alignment import Score, exact_2dmss, factored_2dmss
from .corruption import (
    Axis,
    CorruptionSpec,
    Scheme,
    corrupt_table,
    run_scheme_experiment,
    run_sweep_experiment,
    synthetic_dataset,
    emit_plot_data,
)
from .errors import EmptyDatasetError, GritsError
from .io import (
    TableDocument,
    document_from_grid,
    dumps_canonical,
    pair_directories,
    parse_html_table,
    parse_pascal_voc,
    parse_table_json,
    load_dataset_dir,
    serialize_table_json,
    to_html,
)
from .metrics import METRIC_NAMES, aggregate_values, evaluate_metric
from .similarity import exact_match, normalized_lcs_similarity


def _parse_metrics(text: str) -> Tuple[str, ...]:
    if text.strip() == "all":
        return METRIC_NAMES
    names = tuple(t.strip() for t in text.split(",") if t.strip())
    for name in names:
        if name not in METRIC_NAMES:
            raise GritsError(
                f"unknown metric {name!r}; choose from {', '.join(METRIC_NAMES)}"
            )
    if not names:
        raise GritsError("no metrics selected")
    return names


def _parse_p_values(text: str) -> List[float]:
    if ":" in text:
        try:
            start, stop, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise GritsError(f"bad p grid {text!r}, expected start:stop:step") from None
        if step <= 0:
            raise GritsError("p grid step must be positive")
        count = int(round((stop - start) / step))
        return [round(start + i * step, 10) for i in range(count + 1)]
    try:
        return [float(x) for x in text.split(",")]
    except ValueError:
        raise GritsError(f"bad p list {text!r}") from None


def _load_tables(source: str, seed: int) -> List[TableDocument]:
    """Dataset argument: a directory of table JSON files, or synthetic:N."""
    if source.startswith("synthetic:"):
        try:
            n = int(source.split(":", 1)[1])
        except ValueError:
            raise GritsError(f"bad synthetic dataset spec {source!r}") from None
        return [
            document_from_grid(grid, tid)
            for tid, grid in synthetic_dataset(n, seed=seed)
        ]
    return load_dataset_dir(source, layout="flat-json")


def _load_eval_pairs(args):
    if any(str(s).startswith("synthetic:") for s in (args.gt, args.pred)):
        gt_docs = _load_tables(args.gt, seed=0)
        pred_docs = _load_tables(args.pred, seed=0)
        if len(gt_docs) != len(pred_docs):
            raise EmptyDatasetError(
                f"gt has {len(gt_docs)} tables but pred has {len(pred_docs)}"
            )
        return list(zip(gt_docs, pred_docs))
    return pair_directories(args.gt, args.pred, skip_missing=args.skip_missing)


def _cmd_eval(args) -> int:
    metrics = _parse_metrics(args.metrics)
    pairs = _load_eval_pairs(args)
    if not pairs:
        raise EmptyDatasetError("no table pairs found")
    options = {"strict_location": not args.lenient_location}
    if args.iou_thresholds:
        options["iou_thresholds"] = tuple(
            float(x) for x in args.iou_thresholds.split(",")
        )

    def score_pair(pair):
        gt_doc, pred_doc = pair
        gt = gt_doc.to_grid()
        pred = pred_doc.to_grid()
        return {m: evaluate_metric(m, gt, pred, **options) for m in metrics}

    rows = parallel_map(score_pair, pairs)
    tables = [
        {
            "id": gt_doc.table_id,
            "metrics": {
                m: (list(v) if isinstance(v, Score) else v)
                for m, v in row.items()
            },
        }
        for (gt_doc, _), row in zip(pairs, rows)
    ]
    aggregate = {}
    for m in metrics:
        values = [row[m] for row in rows]
        agg = aggregate_values(values)
        if args.weighted:
            weights = [float(gt.n_rows * gt.n_cols) for gt, _ in pairs]
            agg["fscore_cell_weighted"] = aggregate_values(values, weights)["fscore"]
        aggregate[m] = agg
    report = {
        "version": __version__,
        "metrics": list(metrics),
        "config": {
            "gt": str(args.gt),
            "pred": str(args.pred),
            "lenient_location": bool(args.lenient_location),
            "weighted": bool(args.weighted),
        },
        "tables": tables,
        "aggregate": aggregate,
    }
    payload = dumps_canonical(report) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(payload)
    return 0


def _cmd_corrupt(args) -> int:
    docs = _load_tables(args.dataset, args.seed)
    spec = CorruptionSpec(Axis(args.axis), Scheme(args.scheme), args.p, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    skipped = 0
    for doc in docs:
        grid = doc.to_grid()
        if grid.has_spanning_cells:
            skipped += 1
            continue
        corrupted = corrupt_table(grid, spec, doc.table_id)
        target = out / f"{doc.table_id}.json"
        target.write_bytes(serialize_table_json(document_from_grid(corrupted, doc.table_id)))
        written += 1
    note = f", skipped {skipped} with spanning cells" if skipped else ""
    print(f"wrote {written} corrupted tables to {out}{note}")
    if written == 0:
        raise EmptyDatasetError("no spanning-cell-free tables in the dataset")
    return 0


def _cmd_experiment(args) -> int:
    metrics = _parse_metrics(args.metrics)
    docs = _load_tables(args.dataset, args.seed)
    dataset = [(doc.table_id, doc.to_grid()) for doc in docs]
    if args.mode == "scheme":
        report = run_scheme_experiment(
            dataset,
            metrics,
            seed=args.seed,
            p=args.p,
            alternating_both=args.alternating_both,
        )
    else:
        report = run_sweep_experiment(
            dataset, metrics, _parse_p_values(args.p_values), seed=args.seed
        )
    paths = emit_plot_data(report, args.out)
    print(f"wrote {len(paths)} files to {args.out}")
    return 0


def _random_matrix(rng, max_dim: int, alphabet: Sequence[str]):
    rows = rng.randint(1, max_dim)
    cols = rng.randint(1, max_dim)
    return [[rng.choice(alphabet) for _ in range(cols)] for _ in range(rows)]


def _cmd_oracle_check(args) -> int:
    """Random sweep asserting heuristic lower <= exact <= heuristic upper."""
    rng = derived_rng("oracle-check", args.seed)
    symbols = list(string.ascii_lowercase[:3])
    words = ["", "a", "ab", "abc", "bc", "ca", "abca"]
    failures = 0
    for trial in range(args.trials):
        for f, alphabet in ((exact_match, symbols), (normalized_lcs_similarity, words)):
            a = _random_matrix(rng, args.max_dim, alphabet)
            b = _random_matrix(rng, args.max_dim, alphabet)
            res = factored_2dmss(a, b, f)
            exact = exact_2dmss(a, b, f, limit=args.max_dim)
            if not (res.lower_bound <= exact + 1e-9 and exact <= res.upper_bound + 1e-9):
                failures += 1
                print(
                    f"trial {trial} ({f.__name__}): lower={res.lower_bound!r} "
                    f"exact={exact!r} upper={res.upper_bound!r}",
                    file=sys.stderr,
                )
    if failures:
        print(f"{failures} bound violations in {args.trials} trials", file=sys.stderr)
        return 1
    print(f"ok: {args.trials} trials, bounds hold")
    return 0


def _cmd_convert(args) -> int:
    if args.pascal_voc:
        parse_pascal_voc(args.input)
    src = Path(args.input)
    dst = Path(args.output)
    src_kind = src.suffix.lower()
    dst_kind = dst.suffix.lower()
    if src_kind in (".html", ".htm") and dst_kind == ".json":
        doc = parse_html_table(src.read_text(encoding="utf-8"), table_id=src.stem)
        dst.write_bytes(serialize_table_json(doc))
    elif src_kind == ".json" and dst_kind in (".html", ".htm"):
        doc = parse_table_json(src.read_text(encoding="utf-8"), table_id=src.stem)
        dst.write_text(to_html(doc), encoding="utf-8", newline="\n")
    else:
        raise GritsError(
            f"cannot convert {src.name} -> {dst.name}; "
            "supported: .html->.json and .json->.html"
        )
    print(f"wrote {dst}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grits",
        description="Grid-based table structure recognition metrics",
        epilog="GRITS_THREADS caps worker threads for batch sections.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="score predictions against ground truth")
    p.add_argument("--gt", required=True, help="directory of ground-truth table JSON")
    p.add_argument("--pred", required=True, help="directory of predicted table JSON")
    p.add_argument("--metrics", default="all",
                   help=f"comma list from: {', '.join(METRIC_NAMES)} (default all)")
    p.add_argument("--out", help="report path (default stdout)")
    p.add_argument("--skip-missing", action="store_true",
                   help="skip unpaired files instead of failing")
    p.add_argument("--lenient-location", action="store_true",
                   help="treat missing boxes as absent instead of failing grits-loc")
    p.add_argument("--iou-thresholds",
                   help="comma list of dar-loc matching thresholds")
    p.add_argument("--weighted", action="store_true",
                   help="also aggregate with per-table cell-count weights")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("corrupt", help="write corrupted copies of a dataset")
    p.add_argument("--dataset", required=True,
                   help="directory of table JSON, or synthetic:N")
    p.add_argument("--out", required=True)
    p.add_argument("--axis", choices=[a.value for a in Axis], required=True)
    p.add_argument("--scheme", choices=[s.value for s in Scheme], required=True)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_corrupt)

    p = sub.add_parser("experiment", help="run corruption experiments")
    modes = p.add_subparsers(dest="mode", required=True)
    for mode in ("scheme", "sweep"):
        m = modes.add_parser(
            mode,
            help="six scheme x axis conditions at one p" if mode == "scheme"
            else "Bernoulli deletion sweep over p",
        )
        m.add_argument("--dataset", required=True,
                       help="directory of table JSON, or synthetic:N")
        m.add_argument("--out", required=True, help="plot-data output directory")
        m.add_argument("--metrics", default="all")
        m.add_argument("--seed", type=int, default=0)
        if mode == "scheme":
            m.add_argument("--p", type=float, default=0.5)
            m.add_argument("--alternating-both", action="store_true",
                           help="average both alternating variants per table")
        else:
            m.add_argument("--p", "--p-values", dest="p_values", default="0:1:0.1",
                           help="start:stop:step or comma list")
        m.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("oracle-check",
                       help="verify alignment bounds against the exact oracle")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--max-dim", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("convert", help="convert between table JSON and HTML")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--pascal-voc", action="store_true",
                   help="treat input as PASCAL-VOC annotations (unimplemented)")
    p.set_defaults(func=_cmd_convert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0
    try:
        return args.func(args)
    except (GritsError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
