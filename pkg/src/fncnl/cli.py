"""Batch command-line interface.

    fncnl train     --corpus C --registry R --stage target|fe [--frame F] --out DIR
    fncnl parse     --model DIR --registry R --corpus C --out OUT.jsonl
    fncnl ingest    --annotations A.jsonl --corpus C --registry R --gazetteer G --store S.jsonl
    fncnl query     --store S.jsonl --at YYYY-MM-DD
    fncnl profile   --store S.jsonl --entity ID --lang L --registry R
    fncnl verbalize --store S.jsonl --lang L --registry R
    fncnl eval      --gold G --pred P [--per-frame]
    fncnl roundtrip --registry R --lang L [--instances-per-frame N]

Failures print one ``error: <class>: <message>`` line and exit non-zero:
2 for I/O, 3 for format problems, 4 for referential integrity.
"""

from __future__ import annotations

import argparse
import datetime
import json
import os
import sys
from pathlib import Path

from . import akr, c60, corpus, evaluation, nel, parser, registry, verbalizer
from .errors import FormatError, IntegrityError

EXIT_IO, EXIT_FORMAT, EXIT_INTEGRITY = 2, 3, 4


def _registry(paths):
    """First ``--registry`` is the base; later ones add frames to it."""
    if not paths:
        return registry.default_registry()
    reg = registry.load_registry(paths[0])
    for extra in paths[1:]:
        reg = registry.load_registry(extra, base=reg)
    return reg


def _config(args):
    defaults = c60.LearnerConfig()
    return c60.LearnerConfig(
        max_literals=args.max_literals if args.max_literals is not None else defaults.max_literals,
        min_laplace=args.min_laplace if args.min_laplace is not None else defaults.min_laplace,
        min_coverage=args.min_coverage if args.min_coverage is not None else defaults.min_coverage,
        set_merge=not args.no_set_merge)


def cmd_train(args, out):
    reg = _registry(args.registry)
    sentences = corpus.load_corpus(args.corpus)
    for s in sentences:
        for ann in s.gold_annotations:
            reg.check_annotation(ann)
    frames = [args.frame] if args.frame else reg.frame_names()
    if args.frame:
        reg[args.frame]
    config = _config(args)
    outdir = Path(args.out)
    if args.stage == "target":
        results = parser.train_target_rulesets(sentences, frames, config, args.jobs)
        (outdir / "target").mkdir(parents=True, exist_ok=True)
        for frame, (rs, uncovered) in results.items():
            c60.save_ruleset(rs, outdir / "target" / f"{frame}.rules")
            print(f"{frame}\trules={len(rs)}\tuncovered={uncovered}", file=out)
    else:
        results = parser.train_fe_rulesets(sentences, frames, config, args.jobs)
        (outdir / "fe").mkdir(parents=True, exist_ok=True)
        for (frame, fe), (rs, uncovered) in results.items():
            c60.save_ruleset(rs, outdir / "fe" / parser._fe_filename(frame, fe))
            print(f"{parser.fe_label(frame, fe)}\trules={len(rs)}\tuncovered={uncovered}", file=out)


def cmd_parse(args, out):
    reg = _registry(args.registry)
    model = parser.load_model(args.model, reg)
    sentences = corpus.load_corpus(args.corpus)
    parsed = parser.parse_corpus(sentences, model, args.jobs)
    n = parser.write_annotations(parsed, sentences, args.out)
    print(f"sentences={len(sentences)}\tannotations={n}", file=out)


def cmd_ingest(args, out):
    reg = _registry(args.registry)
    sentences = corpus.load_corpus(args.corpus)
    gaz = nel.load_gazetteer(args.gazetteer)
    store = akr.load_store(args.store, reg) if os.path.exists(args.store) else akr.TemporalStore(reg)
    before_log, before_n = len(store.log), len(store)
    for doc_id, idx, ann in parser.read_annotations(args.annotations):
        if not 0 <= idx < len(sentences) or sentences[idx].doc_id != doc_id:
            raise IntegrityError(f"annotation refers to sentence {idx} of {doc_id!r}, not in the corpus")
        store.ingest(ann, sentences[idx], gaz, idx)
    akr.append_store(store, args.store, before_log)
    added = len(store.log) - before_log
    new = len(store) - before_n
    print(f"ingested={added}\tnew={new}\tmerged={added - new}", file=out)


def cmd_query(args, out):
    store = akr.load_store(args.store)
    try:
        day = datetime.date.fromisoformat(args.at)
    except ValueError:
        raise FormatError(f"bad date {args.at!r}") from None
    for inst in sorted(store.facts_at(day), key=lambda i: akr._id_order(i.id)):
        print(json.dumps(akr.instance_record(inst, store.entities), ensure_ascii=False), file=out)


def cmd_profile(args, out):
    reg = _registry(args.registry)
    store = akr.load_store(args.store, reg)
    prof = akr.entity_profile(store, args.entity)
    if args.json:
        for rec in verbalizer.profile_records(prof, args.lang, reg, store.entities):
            print(json.dumps(rec, ensure_ascii=False), file=out)
    else:
        out.write(verbalizer.render_profile(prof, args.lang, reg, store.entities))


def cmd_verbalize(args, out):
    reg = _registry(args.registry)
    store = akr.load_store(args.store, reg)
    sentences = [verbalizer.verbalize(i, args.lang, reg, store.entities) for i in store.instances()]
    text = corpus.format_corpus(sentences)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def _annotations_by_sentence(path):
    """Per-sentence annotation lists from a corpus TSV or a JSONL record file."""
    with open(path, encoding="utf-8") as fh:
        head = fh.read(1)
    if head == "{":
        recs = parser.read_annotations(path)
        keyed = {}
        for doc_id, idx, ann in recs:
            keyed.setdefault((idx, doc_id), []).append(ann)
        return keyed, False
    sents = corpus.load_corpus(path)
    return {(i, s.doc_id): list(s.gold_annotations) for i, s in enumerate(sents)}, True


def cmd_eval(args, out):
    gold, gold_is_corpus = _annotations_by_sentence(args.gold)
    pred, _ = _annotations_by_sentence(args.pred)
    if gold_is_corpus:
        stray = set(pred) - set(gold)
        if stray:
            raise IntegrityError(f"predictions for sentence {sorted(stray)[0]} which is not in the gold corpus")
    keys = sorted(set(gold) | set(pred))
    g = [gold.get(k, []) for k in keys]
    p = [pred.get(k, []) for k in keys]
    rows = [("Target identification", evaluation.score_targets(g, p)),
            ("FE identification", evaluation.score_frame_elements(g, p))]
    out.write(evaluation.render_table(rows))
    if args.per_frame:
        out.write("\n" + evaluation.render_per_frame(evaluation.per_frame_report(g, p)))


def cmd_roundtrip(args, out):
    reg = _registry(args.registry)
    _, report = verbalizer.roundtrip_model(reg, args.lang, args.instances_per_frame)
    out.write(report.render())
    return 0 if report.all_exact else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    ap = argparse.ArgumentParser(prog="fncnl", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def command(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    p = command("train", "learn rule files from a gold corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--registry", action="append")
    p.add_argument("--stage", choices=("target", "fe"), required=True)
    p.add_argument("--frame")
    p.add_argument("--out", required=True)
    p.add_argument("--max-literals", type=int)
    p.add_argument("--min-laplace", type=float)
    p.add_argument("--min-coverage", type=int)
    p.add_argument("--no-set-merge", action="store_true")
    p.set_defaults(func=cmd_train)

    p = command("parse", "parse a corpus with a model directory")
    p.add_argument("--model", required=True)
    p.add_argument("--registry", action="append")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_parse)

    p = command("ingest", "link and append parsed frames to a store")
    p.add_argument("--annotations", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--registry", action="append")
    p.add_argument("--gazetteer", required=True)
    p.add_argument("--store", required=True)
    p.set_defaults(func=cmd_ingest)

    p = command("query", "facts valid on one day")
    p.add_argument("--store", required=True)
    p.add_argument("--at", required=True)
    p.set_defaults(func=cmd_query)

    p = command("profile", "entity profile report")
    p.add_argument("--store", required=True)
    p.add_argument("--entity", required=True)
    p.add_argument("--lang", required=True)
    p.add_argument("--registry", action="append")
    p.add_argument("--json", action="store_true", help="emit structured records")
    p.set_defaults(func=cmd_profile)

    p = command("verbalize", "verbalize the store as a featurized corpus")
    p.add_argument("--store", required=True)
    p.add_argument("--lang", required=True)
    p.add_argument("--registry", action="append")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verbalize)

    p = command("eval", "precision/recall/F1 against gold")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--per-frame", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = command("roundtrip", "verbalize, parse and re-ingest coverage instances")
    p.add_argument("--registry", action="append")
    p.add_argument("--lang", required=True)
    p.add_argument("--instances-per-frame", type=int, default=5)
    p.set_defaults(func=cmd_roundtrip)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out) or 0
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return EXIT_IO
    except FormatError as exc:
        print(f"error: format: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (IntegrityError, KeyError) as exc:
        print(f"error: integrity: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except ValueError as exc:
        print(f"error: format: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
