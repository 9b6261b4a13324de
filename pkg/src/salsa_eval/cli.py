"""The ``salsa`` command line: batch entry points over every module.

Exit codes: 0 success, 1 validation or domain failure, 2 usage error.
All outputs are deterministic: stable orderings, sorted JSON keys, and floats
formatted to 9 significant digits so golden-file comparisons are portable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from .analytics import (
    DEFAULT_LENGTH_BUCKETS,
    composite_breakdown,
    edit_size_stats,
    split_frequency,
    system_report,
)
from .errors import SalsaError
from .model import Family, Polarity
from .qe import export_records
from .reports import agreement_report, error_agreement_report, score_report
from .scoring import default_weights, fit_weights
from .serialization import (
    canonical_json,
    parse_annotations,
    parse_corpus,
    parse_weight_scheme,
    round_floats,
    weight_scheme_to_dict,
)
from .typology import default_typology, load_typology_file
from .validation import validate_edits

FLOAT_FORMAT = ".9g"


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    return str(value)


def _load_json(path: str):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _tsv(rows: list[dict], columns: list[str]) -> str:
    lines = ["\t".join(columns)]
    for row in rows:
        lines.append("\t".join(_fmt(row.get(col)) for col in columns))
    return "\n".join(lines) + "\n"


def _load_corpus(path: str):
    corpus = parse_corpus(_load_json(path))
    return corpus, {p.id: p for p in corpus.pairs}


def _load_records(path: str, pair_index: dict):
    records = parse_annotations(_load_json(path))
    for record in records:
        if record.pair not in pair_index:
            raise SalsaError(f"annotations reference unknown pair '{record.pair}'")
    return records


def _load_weights(path: str | None):
    if path is None:
        return default_weights()
    return parse_weight_scheme(_load_json(path))


def _load_typology(path: str | None):
    if path is None:
        return default_typology()
    return load_typology_file(path)


def _score_dataset(records, pair_index):
    return [(pair_index[r.pair], list(r.edits), r.annotator) for r in records]


# ---------------------------------------------------------------------------
# Subcommands


def cmd_validate(args) -> int:
    corpus, pair_index = _load_corpus(args.corpus)
    typology = _load_typology(args.typology)
    problems = []
    if args.annotations:
        for i, record in enumerate(_load_records(args.annotations, pair_index)):
            for violation in validate_edits(record.edits, pair_index[record.pair], typology):
                problems.append(
                    {
                        "record": i,
                        "pair": record.pair,
                        "annotator": record.annotator,
                        **violation.to_dict(),
                    }
                )
    report = {"corpus": corpus.id, "pairs": len(corpus.pairs), "violations": problems}
    _emit(canonical_json(report), args.out)
    return 1 if problems else 0


def cmd_score(args) -> int:
    _, pair_index = _load_corpus(args.corpus)
    records = _load_records(args.annotations, pair_index)
    weights = _load_weights(args.weights)
    typology = _load_typology(args.typology)
    rows = score_report(
        _score_dataset(records, pair_index), weights, typology, include_per_edit=args.per_edit
    )
    if args.format == "json":
        _emit(canonical_json({"rows": rows}), args.out)
    else:
        columns = [
            "pair",
            "annotator",
            "system",
            "total",
            "conceptual",
            "syntactic",
            "lexical",
            "quality",
            "error",
            "n_edits",
        ]
        _emit(_tsv(round_floats(rows), columns), args.out)
    return 0


def _parse_gold(path: str) -> dict[str, float]:
    if path.endswith(".json"):
        obj = _load_json(path)
        return {str(k): float(v) for k, v in obj.items()}
    gold: dict[str, float] = {}
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise SalsaError(f"{path}:{line_number}: expected 'pair<TAB>score'")
            gold[parts[0]] = float(parts[1])
    return gold


def cmd_fit_weights(args) -> int:
    _, pair_index = _load_corpus(args.corpus)
    records = _load_records(args.annotations, pair_index)
    typology = _load_typology(args.typology)
    gold = _parse_gold(args.gold)
    dataset = []
    for record in records:
        if record.pair not in gold:
            raise SalsaError(f"no gold score for pair '{record.pair}'")
        dataset.append((pair_index[record.pair], list(record.edits), gold[record.pair]))
    fixed = {}
    for spec in args.fix or []:
        key, _, value = spec.partition("=")
        family_name, _, polarity_name = key.partition(".")
        fixed[(Family(family_name), Polarity(polarity_name))] = float(value)
    scheme, diagnostics = fit_weights(dataset, typology, fixed=fixed or None)
    document = weight_scheme_to_dict(scheme, diagnostics=round_floats(diagnostics.to_dict()))
    _emit(canonical_json(document), args.out)
    return 0


def cmd_agreement(args) -> int:
    from .agreement import confusion

    _, pair_index = _load_corpus(args.corpus)
    records = _load_records(args.annotations, pair_index)
    typology = _load_typology(args.typology)
    pairs = list(pair_index.values())
    if args.confusion:
        result = confusion(records, pairs, expand_composites=args.expand_composites)
        if args.format == "json":
            _emit(canonical_json(result.to_dict()), args.out)
        else:
            rows = [
                {"majority": maj, "minority": mino, "count": n}
                for (maj, mino), n in sorted(result.counts.items())
            ]
            rows.append({"majority": "(none)", "minority": "(none)", "count": result.no_majority})
            _emit(_tsv(rows, ["majority", "minority", "count"]), args.out)
        return 0
    if args.errors:
        rows = error_agreement_report(records, pairs, typology)
        columns = ["type", "frequency", "alpha", "pairs"]
    else:
        rows = agreement_report(records, pairs, args.cls or None, args.expand_composites)
        columns = ["class", "alpha", "pct_two", "pct_three", "units"]
    if args.format == "json":
        _emit(canonical_json({"rows": rows}), args.out)
    else:
        _emit(_tsv(round_floats(rows), columns), args.out)
    return 0


def cmd_stats(args) -> int:
    _, pair_index = _load_corpus(args.corpus)
    records = _load_records(args.annotations, pair_index)
    weights = _load_weights(args.weights)
    typology = _load_typology(args.typology)
    dataset = [(pair_index[r.pair], list(r.edits)) for r in records]
    buckets = (
        tuple(int(b) for b in args.buckets.split(",")) if args.buckets else DEFAULT_LENGTH_BUCKETS
    )
    report = {
        "edit_sizes": edit_size_stats(dataset),
        "split_frequency": split_frequency(dataset, buckets),
        "composite_breakdown": composite_breakdown(dataset),
        "systems": system_report(dataset, weights, typology)["systems"],
    }
    if args.plot_data:
        _write_plot_data(report, args.plot_data)
    if args.format == "tsv":
        _emit(_stats_tsv(report), args.out)
    else:
        _emit(canonical_json(report), args.out)
    return 0


def _stats_tsv(report: dict) -> str:
    sections = []
    size_rows = [
        {"type": type_id, "side": side, "count": stats["count"], **stats["sides"][side]}
        for type_id, stats in report["edit_sizes"].items()
        for side in ("complex", "simplified")
    ]
    sections.append("# edit_sizes")
    sections.append(
        _tsv(
            round_floats(size_rows),
            ["type", "side", "count", "mean_tokens", "sd_tokens", "mean_chars", "sd_chars"],
        ).rstrip("\n")
    )
    sections.append("# split_frequency")
    sections.append(
        _tsv(
            round_floats(report["split_frequency"]["buckets"]),
            ["min", "max", "pairs", "with_split", "proportion"],
        ).rstrip("\n")
    )
    sections.append("# composite_breakdown")
    composite_rows = [
        {"composite": name, "operation": op, "percent": pct}
        for name in ("split", "structure")
        for op, pct in report["composite_breakdown"][name]["percent"].items()
    ]
    sections.append(
        _tsv(round_floats(composite_rows), ["composite", "operation", "percent"]).rstrip("\n")
    )
    sections.append("# systems")
    system_rows = [
        {
            "system": name,
            "pairs": stats["pairs"],
            "mean": stats["score"]["mean"],
            "variance": stats["score"]["variance"],
        }
        for name, stats in report["systems"].items()
    ]
    sections.append(
        _tsv(round_floats(system_rows), ["system", "pairs", "mean", "variance"]).rstrip("\n")
    )
    return "\n".join(sections) + "\n"


def _write_plot_data(report: dict, directory: str) -> None:
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    lines = ["bucket_min,bucket_max,pairs,proportion"]
    for bucket in report["split_frequency"]["buckets"]:
        hi = "" if bucket["max"] is None else bucket["max"]
        lines.append(f"{bucket['min']},{hi},{bucket['pairs']},{_fmt(bucket['proportion'])}")
    (out_dir / "split_frequency.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    lines = ["composite,operation,percent"]
    for name in ("split", "structure"):
        for op, pct in report["composite_breakdown"][name]["percent"].items():
            lines.append(f"{name},{op},{_fmt(pct)}")
    (out_dir / "composite_breakdown.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_export_qe(args) -> int:
    _, pair_index = _load_corpus(args.corpus)
    records = _load_records(args.annotations, pair_index)
    weights = _load_weights(args.weights)
    typology = _load_typology(args.typology)
    dataset = [(pair_index[r.pair], list(r.edits)) for r in records]
    lines = [
        json.dumps(round_floats(record), sort_keys=True, ensure_ascii=False)
        for record in export_records(dataset, weights, typology, args.include_complex)
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_import(args) -> int:
    from .store import Store

    store = Store(_store_dir(args))
    corpus_id = store.import_corpus(_load_json(args.corpus))
    _emit(canonical_json({"id": corpus_id, "pairs": len(store.corpus(corpus_id).pairs)}), args.out)
    return 0


def cmd_export_dataset(args) -> int:
    from .store import Store

    store = Store(_store_dir(args))
    _emit(canonical_json(store.export_dataset(args.corpus_id)), args.out)
    return 0


def cmd_serve(args) -> int:
    from .service.app import serve

    host, _, port = args.bind.rpartition(":")
    serve(_store_dir(args), host=host or "127.0.0.1", port=int(port))
    return 0


def _store_dir(args) -> str:
    store = getattr(args, "store", None) or os.environ.get("SALSA_STORE")
    if not store:
        raise SalsaError("no store directory: pass --store or set SALSA_STORE")
    return store


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="salsa",
        description="Edit-based text simplification evaluation workbench",
    )
    parser.add_argument("--config", help="JSON file whose keys mirror the flags")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, annotations=True, weights=False):
        p.add_argument("--corpus", required=True, help="corpus JSON file")
        if annotations:
            p.add_argument("--annotations", required=True, help="annotations JSON file")
        p.add_argument("--typology", help="typology catalog JSON (default: built-in)")
        if weights:
            p.add_argument("--weights", help="weight scheme JSON (default: built-in)")
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("validate", help="validate a corpus and optional annotations")
    p.add_argument("--corpus", required=True)
    p.add_argument("--annotations")
    p.add_argument("--typology")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("score", help="score annotated sentence pairs")
    add_common(p, weights=True)
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.add_argument("--per-edit", action="store_true", dest="per_edit")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("fit-weights", help="fit the weight scheme against gold ratings")
    add_common(p)
    p.add_argument("--gold", required=True, help="TSV (pair<TAB>score) or JSON mapping")
    p.add_argument(
        "--fix",
        action="append",
        metavar="family.polarity=VALUE",
        help="pin a weight key instead of fitting it (repeatable)",
    )
    p.set_defaults(func=cmd_fit_weights)

    p = sub.add_parser("agreement", help="token-level inter-annotator agreement")
    add_common(p)
    p.add_argument(
        "--class",
        dest="cls",
        action="append",
        help="edit class, e.g. 'deletion' or 'substitution/same' (repeatable)",
    )
    p.add_argument("--expand-composites", action="store_true", dest="expand_composites")
    p.add_argument("--errors", action="store_true", help="report error-presence agreement instead")
    p.add_argument(
        "--confusion", action="store_true", help="report the majority/minority confusion matrix"
    )
    p.add_argument("--format", choices=("tsv", "json"), default="tsv")
    p.set_defaults(func=cmd_agreement)

    p = sub.add_parser("stats", help="corpus and per-system statistics")
    add_common(p, weights=True)
    p.add_argument("--buckets", help="comma-separated input-length bucket edges")
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--plot-data", dest="plot_data", help="directory for per-figure CSV files")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export-qe", help="word-level quality estimation export (JSON Lines)")
    add_common(p, weights=True)
    p.add_argument("--include-complex", action="store_true", dest="include_complex")
    p.set_defaults(func=cmd_export_qe)

    p = sub.add_parser("import", help="import a corpus into a store")
    p.add_argument("--store", help="store directory (or SALSA_STORE)")
    p.add_argument("--out")
    p.add_argument("corpus", help="corpus JSON file")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("export-dataset", help="export a store's corpora and annotations")
    p.add_argument("--store", help="store directory (or SALSA_STORE)")
    p.add_argument("--corpus", dest="corpus_id", help="restrict to one corpus id")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dataset)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    p.add_argument("--store", help="store directory (or SALSA_STORE)")
    p.add_argument("--bind", default="127.0.0.1:8040", help="host:port to bind")
    p.set_defaults(func=cmd_serve)

    return parser


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if not getattr(args, "config", None):
        return
    config = _load_json(args.config)
    if not isinstance(config, dict):
        raise SalsaError("config file must hold a JSON object")
    for key, value in config.items():
        dest = key.replace("-", "_")
        if getattr(args, dest, None) in (None, [], False):
            setattr(args, dest, value)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser)
        return args.func(args)
    except SalsaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
