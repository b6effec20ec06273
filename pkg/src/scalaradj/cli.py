"""Command-line entry points tying the pipeline together.

Four subcommands: validate (dataset stats), gen-contexts (sentence
sampling + substitution), rank (intensity ranking + evaluation reports),
classify (scalar-vs-relational experiments).  Every randomized step takes
an explicit seed and every report is byte-reproducible from the same
config; run_meta.json records the resolved config, its hash, the dump
manifest, and the decision flags that affect numbers.

Exit codes: 0 success, 1 validation failure, 2 missing data.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import baselines, datagen, scalrel
from .dump import EmbeddingDump, PoolingMode
from .errors import (
    CoverageError,
    DataError,
    EmptyReferenceSetError,
    FormatError,
    InsufficientCorpusError,
    MissingDataError,
    ParseError,
    ScalarAdjError,
    SplitError,
    SubsampleError,
)
from .evaluation import AggregateMetrics, RankingReport, ScalePrediction, aggregate
from .intensity import (
    ReferencePair,
    build_intensity_direction,
    rank_scale,
    select_reference_pairs,
)
from .scales import Adjective, ScaleDataset, dataset_stats, load_scale_file

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_MISSING = 2

METHODS = ("dv1", "dv-dm", "dv-wk", "freq", "sense", "static")
# methods whose scores come from an embedding dump
_PAIR_METHODS = {"dv1", "dv-dm", "dv-wk", "static"}


def load_config_file(path) -> dict[str, str]:
    """key=value lines; # comments and blanks ignored."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def resolve_config(args: argparse.Namespace, keys) -> dict:
    """Merge precedence: flag > config file > parser default."""
    file_values = load_config_file(args.config) if args.config else {}
    resolved = {}
    for key, default in keys.items():
        flag_value = getattr(args, key.replace("-", "_"), None)
        if flag_value is not None:
            resolved[key] = flag_value
        elif key in file_values:
            resolved[key] = file_values[key]
        else:
            resolved[key] = default
    unknown = set(file_values) - set(keys)
    if unknown:
        raise ParseError(f"unknown config key(s): {sorted(unknown)}")
    return resolved


def config_hash(resolved: dict) -> str:
    text = json.dumps(resolved, sort_keys=True, default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _require_file(path, what: str) -> Path:
    if path is None:
        raise ParseError(f"{what} is required but not configured")
    p = Path(path)
    if not p.is_file():
        raise MissingDataError(f"{what} not found: {p}")
    return p


def _parse_layers(raw, num_layers: int) -> list[int]:
    if raw in (None, "", "all"):
        return list(range(num_layers + 1))
    layers = []
    for part in str(raw).split(","):
        layer = int(part)
        if not 0 <= layer <= num_layers:
            raise ParseError(
                f"layer {layer} out of range 0..{num_layers} for this dump"
            )
        layers.append(layer)
    return layers


def _parse_modes(raw) -> list[PoolingMode]:
    raw = raw or "both"
    if raw == "both":
        return [PoolingMode.WP, PoolingMode.WP_MINUS_1]
    return [PoolingMode(raw)]


def _parse_pair(raw, language: str) -> ReferencePair:
    parts = (raw or "good:perfect").split(":")
    if len(parts) != 2 or not all(parts):
        raise ParseError(f"pair must be 'mild:extreme', got {raw!r}")
    return ReferencePair(
        mild=Adjective(parts[0].lower(), language),
        extreme=Adjective(parts[1].lower(), language),
    )


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_meta(out_dir: Path, command: str, resolved: dict,
                dump_manifest, decisions: dict) -> None:
    meta = {
        "command": command,
        "config": {k: (str(v) if isinstance(v, Path) else v)
                   for k, v in resolved.items()},
        "config_sha256": config_hash(resolved),
        "dump_manifest": dump_manifest,
        "decisions": decisions,
    }
    _write(out_dir / "run_meta.json",
           json.dumps(meta, sort_keys=True, indent=2) + "\n")


# ---------------------------------------------------------------- validate

def cmd_validate(args) -> int:
    path = _require_file(args.scales, "scale file")
    ds = load_scale_file(path, language=args.language)
    stats = dataset_stats(ds)
    print(f"dataset: {ds.name} (language {ds.language})")
    print(f"scales: {len(ds.scales)}")
    print(f"pairs: {stats.pairs} ({stats.unique_pairs} unique)")
    print(f"adjectives: {stats.adjectives} ({stats.unique_adjectives} unique)")
    return EXIT_OK


# ------------------------------------------------------------ gen-contexts

def cmd_gen_contexts(args) -> int:
    scales_path = _require_file(args.scales, "scale file")
    corpus_path = _require_file(args.corpus, "corpus file")
    if args.out is None:
        raise ParseError("--out is required")
    ds = load_scale_file(scales_path, language=args.language)
    constraints = datagen.SamplingConstraints(
        min_tokens=args.min_tokens, max_tokens=args.max_tokens
    )
    all_contexts = []
    for scale in ds.scales:
        sampled = datagen.sample_contexts(
            datagen.read_corpus(corpus_path),
            scale,
            n=args.n,
            seed=args.seed,
            constraints=constraints,
        )
        expanded = datagen.substitute_all(sampled, scale)
        all_contexts.extend(expanded)
        print(
            f"{scale.scale_id}: {len(sampled)} sampled -> "
            f"{len(expanded)} contexts ({len(scale.surfaces)} adjectives)"
        )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    datagen.save_contexts_jsonl(all_contexts, out)
    print(f"wrote {len(all_contexts)} records to {out}")
    return EXIT_OK


# ------------------------------------------------------------------- rank

_RANK_KEYS = {
    "scales": None,
    "ref-scales": None,
    "dump": None,
    "method": "dv1",
    "pooling": "both",
    "layers": "all",
    "pair": "good:perfect",
    "freq-table": None,
    "sense-table": None,
    "tie-eps": "0",
    "per-context": "false",
    "out": "rank_out",
}


def _table_cell(ds, scores_by_scale, tie_eps) -> AggregateMetrics:
    preds = [
        ScalePrediction(scale.scale_id, scores_by_scale[scale.scale_id])
        for scale in ds.scales
    ]
    return aggregate(ds, preds, tie_eps=tie_eps)


def cmd_rank(args) -> int:
    cfg = resolve_config(args, _RANK_KEYS)
    method = cfg["method"]
    if method not in METHODS:
        raise ParseError(f"method must be one of {METHODS}, got {method!r}")
    tie_eps = float(cfg["tie-eps"])
    per_context = str(cfg["per-context"]).lower() in ("true", "1", "yes")
    out_dir = Path(cfg["out"])

    scales_path = _require_file(cfg["scales"], "scale file")
    ds = load_scale_file(scales_path)
    report = RankingReport(dataset=ds.name, tie_eps=tie_eps)
    score_rows = ["scale_id,adjective,layer,mode,method,score"]
    dump_manifest = None
    decisions = {
        "tie_eps": tie_eps,
        "tau_variant": "b",
        "per_context": per_context,
        "rho_aggregation": "mean per-scale, undefined excluded and counted",
        "tau_aggregation": "micro over pooled pair statistics",
    }

    if method in ("freq", "sense"):
        if method == "freq":
            table = baselines.load_frequency_table(
                _require_file(cfg["freq-table"], "frequency table"))
            scorer = lambda scale: baselines.freq_rank(scale, table)
        else:
            table = baselines.load_sense_table(
                _require_file(cfg["sense-table"], "sense table"))
            default = baselines.mean_sense_default(ds, table)
            decisions["sense_default"] = default
            scorer = lambda scale: baselines.sense_rank(scale, table, default)
        scores_by_scale = {s.scale_id: scorer(s) for s in ds.scales}
        report.add(method, 0, "none", _table_cell(ds, scores_by_scale, tie_eps))
        for scale in ds.scales:
            for surface in scale.surfaces:
                score = scores_by_scale[scale.scale_id][surface]
                score_rows.append(
                    f"{scale.scale_id},{surface},0,none,{method},{score:.10g}"
                )
    else:
        dump = EmbeddingDump.load(_require_file(cfg["dump"], "embedding dump"))
        dump_manifest = json.loads(dump.manifest.to_json())
        layers = _parse_layers(cfg["layers"], dump.num_layers)
        modes = _parse_modes(cfg["pooling"])

        if method in ("dv1", "static"):
            pairs = [_parse_pair(cfg["pair"], ds.language)]
            decisions["reference"] = f"single pair {cfg['pair']}"
        else:
            ref_path = _require_file(cfg["ref-scales"], "reference scale file")
            if ref_path.resolve() == scales_path.resolve():
                raise ParseError(
                    "reference and evaluation scale files are identical; "
                    "refusing to leak gold pairs into the direction"
                )
            ref_ds = load_scale_file(ref_path)
            if ref_ds.name == ds.name:
                raise ParseError(
                    f"reference dataset {ref_ds.name!r} is the evaluation "
                    "dataset; refusing to leak gold pairs into the direction"
                )
            pairs = select_reference_pairs(ref_ds, exclude=ds)
            decisions["reference"] = (
                f"{len(pairs)} endpoint pairs from {ref_ds.name}, "
                f"excluding pairs present in {ds.name}"
            )

        covered = [s for s in ds.scales
                   if dump.shared_contexts(s.surfaces)]
        skipped = sorted(s.scale_id for s in ds.scales if s not in covered)
        decisions["scales_ranked"] = len(covered)
        decisions["scales_skipped"] = skipped
        if not covered:
            raise MissingDataError(
                f"dump covers no scale of {ds.name!r} completely"
            )
        eval_ds = ScaleDataset(name=ds.name, language=ds.language,
                               scales=tuple(covered))

        tag = method if method in ("dv1", "dv-dm", "dv-wk") else "dv1"
        for mode in modes:
            direction = build_intensity_direction(
                dump, pairs, layers=layers, pooling=mode, method=tag
            )
            for layer in layers:
                scores_by_scale = {
                    s.scale_id: rank_scale(
                        s, direction, dump, layer, per_context=per_context
                    )
                    for s in covered
                }
                report.add(
                    method, layer, mode.value,
                    _table_cell(eval_ds, scores_by_scale, tie_eps),
                )
                for scale in covered:
                    for surface in scale.surfaces:
                        score = scores_by_scale[scale.scale_id][surface]
                        score_rows.append(
                            f"{scale.scale_id},{surface},{layer},"
                            f"{mode.value},{method},{score:.10g}"
                        )

    _write(out_dir / "report.csv", report.to_csv())
    _write(out_dir / "report.md", report.to_markdown())
    _write(out_dir / "scores.csv", "\n".join(score_rows) + "\n")
    _write_meta(out_dir, "rank", cfg, dump_manifest, decisions)
    print(report.to_markdown())
    print(f"reports written to {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------- classify

_CLASSIFY_KEYS = {
    "scalrel": None,
    "scales": None,
    "pertainyms": None,
    "dump": None,
    "freq-table": None,
    "sense-table": None,
    "regimes": "adj-rep,proto-sim,dv1-abs,freq,sense",
    "pooling": "wp",
    "prototype": "good",
    "pair": "good:perfect",
    "n-freq": "222",
    "n-rare": "221",
    "fractions": "0.65,0.10,0.25",
    "seed": "0",
    "l2": "0.0001",
    "lr": "0.1",
    "max-iter": "5000",
    "tol": "1e-8",
    "out": "classify_out",
}


def _assemble_scalrel(cfg, language: str):
    """Scalar side from the scale file, relational side subsampled from the
    pertainym pool, then stratified split."""
    ds = load_scale_file(_require_file(cfg["scales"], "scale file"))
    scalars = sorted({a.surface for s in ds.scales for a in s.adjectives})
    freq = baselines.load_frequency_table(
        _require_file(cfg["freq-table"], "frequency table"))
    pool = []
    with open(_require_file(cfg["pertainyms"], "pertainym list"),
              encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word and not word.startswith("#"):
                pool.append(Adjective(word, language))
    # adjectives on gold scales stay scalar even if they are pertainyms
    pool = [a for a in pool if a.surface not in set(scalars)]
    relational = scalrel.subsample_relational(
        pool, freq,
        n_freq=int(cfg["n-freq"]), n_rare=int(cfg["n-rare"]),
        seed=cfg["seed"],
    )
    items = [
        scalrel.LabeledAdjective(Adjective(s, language), scalrel.Label.SCALAR)
        for s in scalars
    ] + [
        scalrel.LabeledAdjective(a, scalrel.Label.RELATIONAL)
        for a in relational
    ]
    fractions = tuple(float(f) for f in cfg["fractions"].split(","))
    return scalrel.make_split(items, fractions=fractions, seed=cfg["seed"])


def _classify_markdown(all_results) -> str:
    lines = [
        "## Classification results",
        "",
        "| regime | mode | dev | test |",
        "| --- | --- | --- | --- |",
    ]
    for mode_value in sorted(all_results):
        results = all_results[mode_value]
        for name in sorted(results):
            r = results[name]
            sub = "" if r.best_layer is None else f"_{r.best_layer}"
            lines.append(
                f"| {r.regime} | {r.mode} | {r.dev_acc:.3f}{sub} "
                f"| {r.test_acc:.3f}{sub} |"
            )
    lines.append("")
    lines.append("Subscripts denote the layer chosen on dev accuracy.")
    return "\n".join(lines) + "\n"


def cmd_classify(args) -> int:
    cfg = resolve_config(args, _CLASSIFY_KEYS)
    out_dir = Path(cfg["out"])
    language = "en"

    if cfg["scalrel"]:
        items = scalrel.load_scalrel_tsv(
            _require_file(cfg["scalrel"], "scal-rel file"), language)
        assembled = False
    else:
        items = _assemble_scalrel(cfg, language)
        out_dir.mkdir(parents=True, exist_ok=True)
        scalrel.save_scalrel_tsv(items, out_dir / "scalrel.tsv")
        assembled = True

    regime_names = [r.strip() for r in cfg["regimes"].split(",") if r.strip()]
    regimes = []
    for name in regime_names:
        kind = scalrel.RegimeKind(name)
        if kind is scalrel.RegimeKind.PROTO_SIM:
            regimes.append(scalrel.FeatureRegime(
                kind, prototype=Adjective(cfg["prototype"].lower(), language)))
        elif kind is scalrel.RegimeKind.DV1_ABS:
            regimes.append(scalrel.FeatureRegime(
                kind, pair=_parse_pair(cfg["pair"], language)))
        else:
            regimes.append(scalrel.FeatureRegime(kind))

    needs_dump = any(r.layer_dependent for r in regimes)
    dump = None
    dump_manifest = None
    if needs_dump:
        dump = EmbeddingDump.load(_require_file(cfg["dump"], "embedding dump"))
        dump_manifest = json.loads(dump.manifest.to_json())

    freq = senses = sense_default = None
    if any(r.kind is scalrel.RegimeKind.FREQ for r in regimes):
        freq = baselines.load_frequency_table(
            _require_file(cfg["freq-table"], "frequency table"))
    if any(r.kind is scalrel.RegimeKind.SENSE for r in regimes):
        senses = baselines.load_sense_table(
            _require_file(cfg["sense-table"], "sense table"))
        covered = [senses.senses[it.surface] for it in items
                   if it.surface in senses]
        if not covered:
            raise CoverageError("sense table covers no classification item")
        sense_default = sum(covered) / len(covered)
    tables = scalrel.FeatureTables(
        freq=freq, senses=senses, sense_default=sense_default)

    hp = {"l2": float(cfg["l2"]), "lr": float(cfg["lr"]),
          "max_iter": int(cfg["max-iter"]), "tol": float(cfg["tol"])}
    modes = _parse_modes(cfg["pooling"])

    all_results = {}
    for mode in modes:
        all_results[mode.value] = scalrel.select_layer_and_evaluate(
            items, regimes, dump, mode=mode, tables=tables, hp=hp
        )

    csv_lines = ["regime,mode,best_layer,dev_acc,test_acc"]
    for mode_value in sorted(all_results):
        body = scalrel.results_csv(all_results[mode_value]).splitlines()[1:]
        csv_lines.extend(body)
    _write(out_dir / "results.csv", "\n".join(csv_lines) + "\n")
    _write(out_dir / "results.md", _classify_markdown(all_results))

    decisions = {
        "hyperparams": hp,
        "freq_transform": scalrel.FREQ_TRANSFORM,
        "sense_default": sense_default,
        "prototype": cfg["prototype"],
        "pair": cfg["pair"],
        "assembled": assembled,
        "layer_selection": "argmax dev accuracy, ties to lowest layer",
        "counts": {
            "scalar": sum(1 for it in items
                          if it.label is scalrel.Label.SCALAR),
            "relational": sum(1 for it in items
                              if it.label is scalrel.Label.RELATIONAL),
        },
    }
    if senses is not None:
        decisions["mean_senses_by_label"] = {
            label.value: round(value, 4)
            for label, value in scalrel.mean_senses_by_label(
                items, senses).items()
        }
    _write_meta(out_dir, "classify", cfg, dump_manifest, decisions)
    print(_classify_markdown(all_results))
    print(f"reports written to {out_dir}")
    return EXIT_OK


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scalaradj",
        description="Rank scalar adjectives by intensity and separate them "
                    "from relational adjectives, from embedding dumps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a scale file and print stats")
    p.add_argument("--scales", required=True)
    p.add_argument("--language", default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("gen-contexts",
                       help="sample sentences and build substituted contexts")
    p.add_argument("--scales", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--language", default=None)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--seed", default="0")
    p.add_argument("--min-tokens", type=int, default=10)
    p.add_argument("--max-tokens", type=int, default=100)
    p.set_defaults(func=cmd_gen_contexts)

    p = sub.add_parser("rank", help="rank scales and evaluate against gold")
    p.add_argument("--config", default=None)
    for key in _RANK_KEYS:
        p.add_argument(f"--{key}", default=None)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("classify",
                       help="scalar-vs-relational classification experiments")
    p.add_argument("--config", default=None)
    for key in _CLASSIFY_KEYS:
        p.add_argument(f"--{key}", default=None)
    p.set_defaults(func=cmd_classify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MissingDataError, InsufficientCorpusError, CoverageError) as exc:
        print(f"error (missing data): {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (ParseError, FormatError, DataError, SplitError, SubsampleError,
            EmptyReferenceSetError, ScalarAdjError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
