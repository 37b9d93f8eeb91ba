"""Command-line pipeline: train, extract, dominance, keyness, report.

Every subcommand is deterministic given its inputs, flags, and seed, and
echoes its effective configuration (with input hashes) to a run-manifest
file so any published table can be re-derived.  On failure, outputs
written so far are removed and the exit code is nonzero.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import sys
from pathlib import Path

from .corpus import (
    Corpus,
    Pos,
    Subgroup,
    assemble_pu_dataset,
    load_corpus,
    select_subjects,
)
from .features import DEFAULT_HASHED_DIM, FeaturizerConfig
from .lexstats import (
    Lexicon,
    build_stats,
    dominance_table,
    keyness_g2,
    load_demo_lexicon,
    load_lexicon,
    write_dominance_csv,
    write_keyness_csv,
)
from .pulearn import (
    ConvergenceError,
    ExtractedMoment,
    ExtractionResult,
    SvmHyperparams,
    elkanoto_fit,
    extract_moments,
    load_model,
    save_model,
)

log = logging.getLogger("momentminer")

EXTRACTION_HEADER = ["record_id", "subgroup", "probability", "text"]


class _OutputGuard:
    """Tracks files written by one run so failures leave nothing behind."""

    def __init__(self):
        self.paths: list[Path] = []

    def track(self, path: str | Path) -> Path:
        path = Path(path)
        self.paths.append(path)
        return path

    def cleanup(self) -> None:
        for path in self.paths:
            try:
                path.unlink(missing_ok=True)
            except OSError:
                pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_manifest(path: Path, command: str, inputs: dict, outputs: list,
                    config: dict, guard: _OutputGuard) -> None:
    doc = {
        "tool": "momentminer",
        "command": command,
        "inputs": {
            label: {"path": str(p), "sha256": _sha256(p)}
            for label, p in inputs.items()
        },
        "outputs": [str(p) for p in outputs],
        "config": config,
    }
    guard.track(path)
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def write_extraction_csv(result: ExtractionResult, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(EXTRACTION_HEADER)
        for row in result.rows:
            writer.writerow([row.record_id, row.subgroup,
                             repr(row.probability), row.text])


def read_extraction_csv(path: str | Path) -> ExtractionResult:
    path = Path(path)
    with path.open("r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != EXTRACTION_HEADER:
            raise ValueError(f"{path}: not an extraction file (bad header)")
        rows = [
            ExtractedMoment(record_id=rid, subgroup=subgroup,
                            probability=float(prob), text=text)
            for rid, subgroup, prob, text in reader
        ]
    threshold = min((r.probability for r in rows), default=0.0)
    return ExtractionResult(rows=rows, threshold=threshold)


def _load_lexicon_arg(lexicon_path) -> tuple[Lexicon, str]:
    if lexicon_path is None:
        return load_demo_lexicon(), "bundled demo lexicon"
    return load_lexicon(lexicon_path), str(lexicon_path)


def _subgroup_stats(extraction: ExtractionResult, corpus: Corpus,
                    name: str):
    subgroup = Subgroup(name)
    stats = build_stats(extraction, corpus, subgroup)
    if stats.token_count == 0:
        raise ValueError(f"no extracted happy moments for subgroup {name!r}")
    return stats


# ----------------------------------------------------------------------
# Subcommands.
# ----------------------------------------------------------------------

def cmd_train(args, guard: _OutputGuard) -> None:
    positives = load_corpus(args.positives)
    unlabeled = load_corpus(args.unlabeled)
    if args.subjects_per_class > 0:
        unlabeled = select_subjects(unlabeled, args.subjects_per_class)
        log.info("kept %d unlabeled sentences from the first %d subjects per class",
                 len(unlabeled), args.subjects_per_class)

    have_embeddings = (positives.embedding_dim is not None
                       and unlabeled.embedding_dim is not None)
    kind = args.featurizer
    if kind == "auto":
        kind = "embedding" if have_embeddings else "hashed"
    if kind == "embedding":
        if not have_embeddings:
            raise ValueError("corpora carry no embeddings; use --featurizer hashed")
        config = FeaturizerConfig.precomputed(
            dim=positives.embedding_dim, l2_normalize=not args.no_l2_normalize
        )
    else:
        config = FeaturizerConfig.hashed(
            dim=args.hash_dim, ngram_min=args.ngram_min,
            ngram_max=args.ngram_max, hash_seed=args.hash_seed,
            l2_normalize=not args.no_l2_normalize,
        )

    data = assemble_pu_dataset(positives, unlabeled, args.cap_pos,
                               args.cap_unl, args.seed, config)
    hp = SvmHyperparams(C=args.C, tol=args.tol, max_iter=args.max_iter,
                        seed=args.seed)
    model = elkanoto_fit(data, hp, holdout_frac=args.holdout_frac,
                         seed=args.seed)
    model.data_hash = hashlib.sha256(
        (positives.manifest.content_hash + unlabeled.manifest.content_hash).encode()
    ).hexdigest()

    out = guard.track(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_model(model, out)
    log.info("trained on %d rows (%d labeled positive); c=%.4f%s",
             data.s_labels.size, int(data.s_labels.sum()), model.c,
             "" if model.base.converged else " [not converged]")
    _write_manifest(
        out.with_name(out.name + ".manifest.json"), "train",
        inputs={"positives": args.positives, "unlabeled": args.unlabeled},
        outputs=[out],
        config={
            "seed": args.seed, "cap_pos": args.cap_pos, "cap_unl": args.cap_unl,
            "subjects_per_class": args.subjects_per_class,
            "featurizer": config.to_dict(), "hyperparams": hp.to_dict(),
            "holdout_frac": args.holdout_frac,
            "training_rows": int(data.s_labels.size),
            "labeled_positive_rows": int(data.s_labels.sum()),
        },
        guard=guard,
    )


def cmd_extract(args, guard: _OutputGuard) -> None:
    model = load_model(args.model)
    corpus = load_corpus(args.corpus)
    result = extract_moments(model, corpus, threshold=args.threshold)
    out = guard.track(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_extraction_csv(result, out)
    log.info("extracted %d of %d sentences at threshold %g",
             len(result.rows), len(corpus), args.threshold)
    _write_manifest(
        out.with_name(out.name + ".manifest.json"), "extract",
        inputs={"model": args.model, "corpus": args.corpus},
        outputs=[out],
        config={"threshold": args.threshold, "seed": args.seed},
        guard=guard,
    )


def cmd_dominance(args, guard: _OutputGuard) -> None:
    extraction = read_extraction_csv(args.extraction)
    corpus = load_corpus(args.corpus)
    lexicon, lexicon_source = _load_lexicon_arg(args.lexicon)
    fg = _subgroup_stats(extraction, corpus, args.foreground)
    bg = _subgroup_stats(extraction, corpus, args.background)
    rows = dominance_table(fg, bg, lexicon)
    out = guard.track(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_dominance_csv(rows, out)
    log.info("dominance of %s over %s: %d categories -> %s",
             args.foreground, args.background, len(rows), out)
    _write_manifest(
        out.with_name(out.name + ".manifest.json"), "dominance",
        inputs={"extraction": args.extraction, "corpus": args.corpus},
        outputs=[out],
        config={"foreground": args.foreground, "background": args.background,
                "lexicon": lexicon_source},
        guard=guard,
    )


def cmd_keyness(args, guard: _OutputGuard) -> None:
    extraction = read_extraction_csv(args.extraction)
    corpus = load_corpus(args.corpus)
    target = _subgroup_stats(extraction, corpus, args.target)
    reference = _subgroup_stats(extraction, corpus, args.reference)
    pos_filter = Pos(args.pos) if args.pos else None
    rows = keyness_g2(target, reference, pos_filter=pos_filter,
                      min_freq=args.min_freq)
    out = guard.track(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_keyness_csv(rows, out)
    log.info("keyness %s vs %s (%s): %d lemmas -> %s", args.target,
             args.reference, args.pos or "all POS", len(rows), out)
    _write_manifest(
        out.with_name(out.name + ".manifest.json"), "keyness",
        inputs={"extraction": args.extraction, "corpus": args.corpus},
        outputs=[out],
        config={"target": args.target, "reference": args.reference,
                "pos": args.pos, "min_freq": args.min_freq},
        guard=guard,
    )


def cmd_report(args, guard: _OutputGuard) -> None:
    from .plots import keyness_chart

    extraction = read_extraction_csv(args.extraction)
    corpus = load_corpus(args.corpus)
    lexicon, lexicon_source = _load_lexicon_arg(args.lexicon)
    depression = _subgroup_stats(extraction, corpus, Subgroup.DEPRESSION.value)
    control = _subgroup_stats(extraction, corpus, Subgroup.CONTROL.value)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []

    for name, fg, bg in (("depression", depression, control),
                         ("control", control, depression)):
        path = guard.track(out_dir / f"dominance_{name}.csv")
        write_dominance_csv(dominance_table(fg, bg, lexicon), path)
        outputs.append(path)

    for pos, plural in ((Pos.NOUN, "nouns"), (Pos.VERB, "verbs")):
        rows = keyness_g2(depression, control, pos_filter=pos,
                          min_freq=args.min_freq)
        csv_path = guard.track(out_dir / f"keyness_{plural}.csv")
        write_keyness_csv(rows, csv_path)
        chart_path = guard.track(out_dir / f"keyness_{plural}.svg")
        keyness_chart(rows, target_label="depression",
                      reference_label="control",
                      title=f"Top {plural} by keyness in extracted happy moments",
                      path=chart_path, top_n=args.top_n)
        outputs.extend([csv_path, chart_path])

    log.info("report written to %s (%d files)", out_dir, len(outputs))
    _write_manifest(
        out_dir / "run_manifest.json", "report",
        inputs={"extraction": args.extraction, "corpus": args.corpus},
        outputs=outputs,
        config={"lexicon": lexicon_source, "min_freq": args.min_freq,
                "top_n": args.top_n, "seed": args.seed},
        guard=guard,
    )


# ----------------------------------------------------------------------
# Argument parsing.
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="PRNG seed for every stochastic step (default 0)")
    common.add_argument("--out-dir", default=".",
                        help="directory for default output paths")
    common.add_argument("--quiet", action="store_true",
                        help="only print warnings and errors")

    parser = argparse.ArgumentParser(
        prog="momentminer",
        description="Extract happy-moment sentences with PU learning and "
                    "contrast subcorpora via lexicon and keyness statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", parents=[common],
                       help="fit the PU model from a positive corpus and an "
                            "unlabeled corpus")
    p.add_argument("--positives", required=True, help="labeled-positive corpus (jsonl)")
    p.add_argument("--unlabeled", required=True, help="unlabeled corpus (jsonl)")
    p.add_argument("--out", default=None, help="model file (default OUT_DIR/model.json)")
    p.add_argument("--cap-pos", type=int, default=50000,
                   help="max positive sentences to sample (default 50000)")
    p.add_argument("--cap-unl", type=int, default=50000,
                   help="max unlabeled sentences to sample (default 50000)")
    p.add_argument("--subjects-per-class", type=int, default=0,
                   help="keep only the first N user_ids per subgroup of the "
                        "unlabeled corpus (0 = all)")
    p.add_argument("--featurizer", choices=("auto", "embedding", "hashed"),
                   default="auto",
                   help="sentence features: precomputed embeddings, hashed "
                        "n-grams, or auto-detect (default)")
    p.add_argument("--hash-dim", type=int, default=DEFAULT_HASHED_DIM)
    p.add_argument("--ngram-min", type=int, default=1)
    p.add_argument("--ngram-max", type=int, default=2)
    p.add_argument("--hash-seed", type=int, default=0)
    p.add_argument("--no-l2-normalize", action="store_true",
                   help="skip L2 normalization of feature rows")
    p.add_argument("--C", type=float, default=0.1,
                   help="inverse regularization strength (default 0.1)")
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--holdout-frac", type=float, default=0.2,
                   help="fraction of labeled positives held out to estimate "
                        "the labeling frequency (default 0.2)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("extract", parents=[common],
                       help="score a corpus and keep sentences above the "
                            "probability threshold")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", default=None,
                   help="extraction CSV (default OUT_DIR/extracted.csv)")
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("dominance", parents=[common],
                       help="per-category coverage ratio between two subgroups")
    p.add_argument("--extraction", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", default=None,
                   help="lexicon file (default: bundled demo lexicon)")
    p.add_argument("--foreground", default=Subgroup.DEPRESSION.value,
                   choices=[s.value for s in Subgroup])
    p.add_argument("--background", default=Subgroup.CONTROL.value,
                   choices=[s.value for s in Subgroup])
    p.add_argument("--out", default=None,
                   help="dominance CSV (default OUT_DIR/dominance.csv)")
    p.set_defaults(func=cmd_dominance)

    p = sub.add_parser("keyness", parents=[common],
                       help="rank lemmas by log-likelihood keyness between "
                            "two subgroups")
    p.add_argument("--extraction", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--pos", choices=[pos.value for pos in Pos], default=None,
                   help="restrict to one POS tag")
    p.add_argument("--min-freq", type=int, default=5,
                   help="minimum combined frequency (default 5)")
    p.add_argument("--target", default=Subgroup.DEPRESSION.value,
                   choices=[s.value for s in Subgroup])
    p.add_argument("--reference", default=Subgroup.CONTROL.value,
                   choices=[s.value for s in Subgroup])
    p.add_argument("--out", default=None,
                   help="keyness CSV (default OUT_DIR/keyness.csv)")
    p.set_defaults(func=cmd_keyness)

    p = sub.add_parser("report", parents=[common],
                       help="full two-sided dominance tables plus noun/verb "
                            "keyness tables and charts")
    p.add_argument("--extraction", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicon", default=None,
                   help="lexicon file (default: bundled demo lexicon)")
    p.add_argument("--min-freq", type=int, default=5)
    p.add_argument("--top-n", type=int, default=20,
                   help="lemmas per side in the charts (default 20)")
    p.set_defaults(func=cmd_report)

    return parser


_DEFAULT_OUT = {
    cmd_train: ("out", "model.json"),
    cmd_extract: ("out", "extracted.csv"),
    cmd_dominance: ("out", "dominance.csv"),
    cmd_keyness: ("out", "keyness.csv"),
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(message)s")
    default_out = _DEFAULT_OUT.get(args.func)
    if default_out is not None:
        attr, filename = default_out
        if getattr(args, attr) is None:
            setattr(args, attr, str(Path(args.out_dir) / filename))
        setattr(args, attr, Path(getattr(args, attr)))

    guard = _OutputGuard()
    try:
        args.func(args, guard)
    except (ValueError, OSError, ConvergenceError) as exc:
        guard.cleanup()
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
