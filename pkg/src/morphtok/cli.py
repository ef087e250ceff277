"""Single command-line entry point for all pipelines.

Subcommands: build-lexicon, build-merges, label, train-bpe, sweep,
gen-challenge, slice, score, adversarial, audit-sample.  Exit status is 0
on success, 1 on input errors, 2 on internal errors.  Logs go to stderr;
data only ever goes to files (or stdout when "-" is an explicit output).

A config file of flat ``key = value`` lines can pre-set any flag of the
invoked subcommand (underscores or dashes both work); explicit flags win.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from contextlib import nullcontext
from pathlib import Path

from . import __version__
from .bpe import (
    BPE_FORMAT_VERSION,
    BpeModel,
    count_words,
    read_word_table,
    train_bpe,
    write_word_table,
)
from .challenge import (
    DEFAULT_SIZES,
    RelationPool,
    canonical_json,
    gen_wad,
    gen_wam,
    gen_waw,
    load_morph_dump,
    load_sense_dump,
    load_subword_ranks,
    load_tokenizations,
    load_word_frequencies,
    write_challenge_files,
)
from .errors import InputError
from .harness import (
    GroupAssignment,
    adversarial_swap,
    assign_groups,
    audit_sample,
    load_dataset,
    load_predictions,
    score,
    write_audit_tsv,
    write_swaps,
)
from .labeller import Labeller, normalize_subwords
from .lexicon import LEXICON_FORMAT_VERSION, MorphLexicon, build_lexicon
from .merges import MergeCache, build_merge_list
from .records import parse_records, write_reject_report
from .sweep import sweep_stats, write_distribution_csv
from .vocab import SCHEMES, load_vocab

log = logging.getLogger("morphtok")


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 (input error) instead of 2 on bad usage."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _existing(path: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise argparse.ArgumentTypeError(f"path does not exist: {path}")
    return p


def _sizes(text: str) -> tuple[int, int, int]:
    parts = [int(x) for x in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected train,dev,test sizes")
    return tuple(parts)  # type: ignore[return-value]


def _file_sha256_of(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _log_checksums(*paths) -> None:
    for p in paths:
        if p is None or str(p) == "-":
            continue
        log.info("input %s sha256=%s", p, _file_sha256_of(p))


def _read_config(path: Path) -> dict:
    """Flat TOML-like key = value lines; # starts a comment."""
    out = {}
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{line_no}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip().strip("\"'")
        if value.lower() in ("true", "false"):
            parsed: object = value.lower() == "true"
        else:
            try:
                parsed = int(value)
            except ValueError:
                parsed = value
        out[key] = parsed
    return out


def _open_out(path: str):
    if path == "-":
        return nullcontext(sys.stdout)
    return open(path, "w", encoding="utf-8")


def _read_lines(path: str):
    if path == "-":
        return sys.stdin.read().splitlines()
    return Path(path).read_text(encoding="utf-8").splitlines()


# ---------------------------------------------------------------------------
# handlers

def _cmd_build_lexicon(args) -> int:
    _log_checksums(*args.inflections, *args.derivations, *args.compounds)
    records = []
    rejects = []
    for path in args.inflections:
        res = parse_records([path], "unimorph-tsv", kind="inflection")
        records += res.records
        rejects += res.rejects
    for path in args.derivations:
        res = parse_records([path], "unimorph-tsv", kind="derivation")
        records += res.records
        rejects += res.rejects
    for path in args.compounds:
        res = parse_records([path], "compound-tsv")
        records += res.records
        rejects += res.rejects
    if args.reject_report:
        write_reject_report(rejects, args.reject_report)
        log.info("%d rejected lines reported to %s", len(rejects), args.reject_report)
    if not records:
        raise InputError("no valid records parsed")
    lexicon = build_lexicon(
        records, case_policy=args.case_policy, depth_cap=args.depth_cap
    )
    lexicon.save(args.out)
    log.info("lexicon with %d words written to %s", len(lexicon), args.out)
    return 0


def _cmd_build_merges(args) -> int:
    _log_checksums(args.lexicon, args.words)
    lexicon = MorphLexicon.load(args.lexicon)
    if args.words:
        words = [w.strip() for w in _read_lines(args.words) if w.strip()]
    else:
        words = sorted(lexicon.words())
    with _open_out(args.out) as fh:
        for word in words:
            entries: dict[str, str] = {}
            for seg in lexicon.segmentations(word):
                entries.update(build_merge_list(word, seg, lexicon).entries)
            if not entries:
                log.warning("no merge list for %r (not in lexicon)", word)
                continue
            fh.write(canonical_json({"word": word, "entries": entries}) + "\n")
    return 0


def _cmd_label(args) -> int:
    _log_checksums(args.lexicon, args.vocab)
    lexicon = MorphLexicon.load(args.lexicon)
    vocabulary = load_vocab(args.vocab, format=args.vocab_format, scheme=args.vocab_scheme)
    labeller = Labeller(lexicon, vocabulary)
    lines = _read_lines(getattr(args, "in"))
    with _open_out(args.out) as fh:
        for line_no, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            if args.format == "tsv":
                parts = line.rstrip("\n").split("\t")
                if len(parts) < 2:
                    raise InputError(f"line {line_no}: expected word<TAB>subwords...")
                word, raw = parts[0], parts[1:]
            else:
                try:
                    row = json.loads(line)
                    word, raw = row["word"], list(row["subwords"])
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise InputError(f"line {line_no}: bad row: {exc}") from exc
            subwords = normalize_subwords(raw, args.scheme)
            label = labeller.label(word, subwords)
            fh.write(
                canonical_json(
                    {
                        "word": word,
                        "subwords": list(subwords.tokens),
                        "label": label.value,
                        "mu": label.mu,
                    }
                )
                + "\n"
            )
    return 0


def _cmd_train_bpe(args) -> int:
    _log_checksums(args.corpus)
    counts = count_words(args.corpus, lowercase=args.lowercase)
    if not counts:
        raise InputError(f"no words found in {args.corpus}")
    log.info("counted %d distinct words", len(counts))
    model = train_bpe(
        counts, max_size=args.max_size, checkpoint_step=args.step,
        lowercase=args.lowercase,
    )
    model.save(args.out)
    log.info(
        "model with %d merges and %d checkpoints written to %s",
        len(model.merges),
        len(model.checkpoints),
        args.out,
    )
    if args.words_out:
        write_word_table(counts, args.words_out, n=args.top_words)
    return 0


def _cmd_sweep(args) -> int:
    _log_checksums(args.model, args.words, args.lexicon)
    model = BpeModel.load(args.model)
    lexicon = MorphLexicon.load(args.lexicon)
    words = [w for w, _ in read_word_table(args.words)]
    if args.top:
        words = words[:args.top]
    sizes = [size for size, _ in model.checkpoints]
    if args.checkpoints:
        sizes = [int(x) for x in args.checkpoints.split(",")]
    rows = sweep_stats(
        model,
        sizes,
        words,
        lexicon,
        threads=args.threads,
        model_path=args.model,
        lexicon_path=args.lexicon,
    )
    write_distribution_csv(rows, args.out)
    log.info("%d distribution rows written to %s", len(rows), args.out)
    return 0


def _cmd_gen_challenge(args) -> int:
    task_names = {"wad": "WaD", "wam": "WaM", "waw": "WaW"}
    sizes = args.sizes or DEFAULT_SIZES[task_names[args.task]]
    inputs: dict[str, Path] = {}
    if args.task == "wad":
        if not args.senses:
            raise InputError("--senses is required for task wad")
        inputs["senses"] = args.senses
        if args.word_freq:
            inputs["word_freq"] = args.word_freq
        _log_checksums(*inputs.values())
        senses = load_sense_dump(args.senses)
        freqs = load_word_frequencies(args.word_freq) if args.word_freq else None
        instances = gen_wad(
            senses,
            sizes=sizes,
            seed=args.seed,
            word_frequencies=freqs,
            held_fraction=args.held_fraction,
        )
    elif args.task == "wam":
        for flag in ("morph", "tokenizations", "subword_freq"):
            if not getattr(args, flag):
                raise InputError(f"--{flag.replace('_', '-')} is required for task wam")
        inputs = {
            "morph": args.morph,
            "tokenizations": args.tokenizations,
            "subword_freq": args.subword_freq,
        }
        _log_checksums(*inputs.values())
        instances = gen_wam(
            load_morph_dump(args.morph),
            load_tokenizations(args.tokenizations),
            load_subword_ranks(args.subword_freq),
            sizes=sizes,
            seed=args.seed,
            shared_top=args.shared_top,
        )
    else:
        if not args.pairs:
            raise InputError("--pairs is required for task waw")
        inputs["pairs"] = args.pairs
        _log_checksums(args.pairs)
        instances = gen_waw(
            RelationPool.load(args.pairs),
            sizes=sizes,
            seed=args.seed,
            held_fraction=args.held_fraction,
        )
    written = write_challenge_files(
        instances, args.out_dir, seed=args.seed, sizes=sizes, input_paths=inputs
    )
    for path in written:
        log.info("wrote %s", path)
    return 0


def _labeller_from_args(args) -> Labeller:
    lexicon = MorphLexicon.load(args.lexicon)
    vocabulary = load_vocab(args.vocab, format=args.vocab_format, scheme=args.vocab_scheme)
    return Labeller(lexicon, vocabulary, merge_cache=MergeCache(lexicon))


def _cmd_slice(args) -> int:
    _log_checksums(args.dataset, args.tokenizations, args.lexicon, args.vocab)
    dataset = load_dataset(args.dataset)
    tokenizations = load_tokenizations(args.tokenizations)
    labeller = _labeller_from_args(args)
    assignments, excluded = assign_groups(dataset, tokenizations, labeller)
    with _open_out(args.out) as fh:
        for a in assignments:
            fh.write(canonical_json({"id": a.instance_id, "group": a.group}) + "\n")
        for iid in excluded:
            fh.write(canonical_json({"id": iid, "group": "excluded"}) + "\n")
    log.info("%d assigned, %d excluded", len(assignments), len(excluded))
    return 0


def _cmd_score(args) -> int:
    _log_checksums(args.dataset, args.groups, *args.pred)
    dataset = load_dataset(args.dataset)
    gold = {row["id"]: bool(row["label"]) for row in dataset}
    assignments = []
    excluded = []
    for row in load_dataset(args.groups):
        if row["group"] == "excluded":
            excluded.append(row["id"])
        else:
            assignments.append(GroupAssignment(row["id"], row["group"]))
    predictions = [load_predictions(p) for p in args.pred]
    report = score(
        assignments,
        gold,
        predictions,
        excluded=excluded,
        metadata={
            "model": args.model_name,
            "tokenizer": args.tokenizer_name,
            "dataset": str(args.dataset),
            "dataset_sha256": _file_sha256_of(args.dataset),
            "prediction_files": [str(p) for p in args.pred],
            "tool_version": __version__,
        },
    )
    with _open_out(args.out_json) as fh:
        fh.write(report.to_json() + "\n")
    if args.out_md:
        with _open_out(args.out_md) as fh:
            fh.write(report.to_markdown())
    log.info(
        "total accuracy %.2f ± %.2f over %d seeds",
        report.total.accuracy_mean,
        report.total.accuracy_std,
        len(args.pred),
    )
    return 0


def _cmd_adversarial(args) -> int:
    _log_checksums(getattr(args, "in"), args.tokenizations, args.lexicon, args.vocab, args.candidates)
    instances = load_dataset(getattr(args, "in"))
    tokenizations = load_tokenizations(args.tokenizations)
    labeller = _labeller_from_args(args)
    candidates = [w.strip() for w in _read_lines(args.candidates) if w.strip()]
    results, dropped = adversarial_swap(
        instances, tokenizations, labeller, candidates, seed=args.seed
    )
    write_swaps(results, args.out)
    log.info("%d adversarial instances written, %d dropped", len(results), dropped)
    return 0


def _cmd_audit_sample(args) -> int:
    _log_checksums(args.labels)
    rows = load_dataset(args.labels)
    classes = [c.strip() for c in args.classes.split(",") if c.strip()]
    sample = audit_sample(rows, k=args.k, classes=classes, seed=args.seed)
    write_audit_tsv(sample, args.out)
    log.info("%d audit rows written to %s", len(sample), args.out)
    return 0


# ---------------------------------------------------------------------------
# parser

def build_parser() -> _Parser:
    parser = _Parser(prog="morphtok", description=__doc__)
    parser.add_argument(
        "--version",
        action="version",
        version=(
            f"morphtok {__version__} "
            f"(lexicon format v{LEXICON_FORMAT_VERSION}, bpe format v{BPE_FORMAT_VERSION})"
        ),
    )
    parser.add_argument("--config", type=_existing, help="flat key=value config file")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-lexicon", help="parse record TSVs into a lexicon snapshot")
    p.add_argument("--inflections", type=_existing, action="append", default=[])
    p.add_argument("--derivations", type=_existing, action="append", default=[])
    p.add_argument("--compounds", type=_existing, action="append", default=[])
    p.add_argument("--out", required=True)
    p.add_argument("--reject-report")
    p.add_argument("--case-policy", default="lower-fallback",
                   choices=("exact", "lower-fallback", "lower"))
    p.add_argument("--depth-cap", type=int, default=16)
    p.set_defaults(func=_cmd_build_lexicon)

    p = sub.add_parser("build-merges", help="emit per-word merge lists as JSONL")
    p.add_argument("--lexicon", type=_existing, required=True)
    p.add_argument("--words", help="word list file (default: whole lexicon)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_build_merges)

    p = sub.add_parser("label", help="classify (word, subwords) rows")
    p.add_argument("--lexicon", type=_existing, required=True)
    p.add_argument("--vocab", type=_existing, required=True)
    p.add_argument("--vocab-format", default="token-per-line",
                   choices=("token-per-line", "tokenizer-json"))
    p.add_argument("--vocab-scheme", default="plain", choices=SCHEMES)
    p.add_argument("--scheme", default="plain", choices=SCHEMES,
                   help="marker scheme of the input subwords")
    p.add_argument("--in", dest="in", required=True, help="JSONL/TSV rows, - for stdin")
    p.add_argument("--out", required=True, help="output JSONL, - for stdout")
    p.add_argument("--format", default="jsonl", choices=("jsonl", "tsv"))
    p.set_defaults(func=_cmd_label)

    p = sub.add_parser("train-bpe", help="train a BPE model with checkpoints")
    p.add_argument("--corpus", type=_existing, required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--step", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--words-out", help="also write the word frequency table")
    p.add_argument("--top-words", type=int, help="limit for --words-out")
    p.set_defaults(func=_cmd_train_bpe)

    p = sub.add_parser("sweep", help="label distribution across BPE checkpoints")
    p.add_argument("--model", type=_existing, required=True)
    p.add_argument("--words", type=_existing, required=True,
                   help="word<TAB>count table sorted by frequency")
    p.add_argument("--lexicon", type=_existing, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--top", type=int, help="use only the N most frequent words")
    p.add_argument("--checkpoints", help="comma-separated sizes (default: model's)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("gen-challenge", help="generate WaD/WaM/WaW datasets")
    p.add_argument("--task", required=True, choices=("wad", "wam", "waw"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sizes", type=_sizes, help="train,dev,test (default: paper sizes)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--senses", type=_existing, help="wad: word<TAB>definition TSV")
    p.add_argument("--word-freq", type=_existing, help="wad: word<TAB>count TSV")
    p.add_argument("--morph", type=_existing, help="wam: word<TAB>category TSV")
    p.add_argument("--tokenizations", type=_existing, help="wam: {word, subwords} JSONL")
    p.add_argument("--subword-freq", type=_existing,
                   help="wam: frequency-ranked subword list")
    p.add_argument("--shared-top", type=int, default=5000)
    p.add_argument("--pairs", type=_existing, help="waw: a<TAB>b<TAB>relation TSV")
    p.add_argument("--held-fraction", type=float, default=0.4)
    p.set_defaults(func=_cmd_gen_challenge)

    p = sub.add_parser("slice", help="assign labeller groups to dataset instances")
    p.add_argument("--dataset", type=_existing, required=True)
    p.add_argument("--tokenizations", type=_existing, required=True)
    p.add_argument("--lexicon", type=_existing, required=True)
    p.add_argument("--vocab", type=_existing, required=True)
    p.add_argument("--vocab-format", default="token-per-line",
                   choices=("token-per-line", "tokenizer-json"))
    p.add_argument("--vocab-scheme", default="plain", choices=SCHEMES)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_slice)

    p = sub.add_parser("score", help="per-group accuracy over seed predictions")
    p.add_argument("--dataset", type=_existing, required=True)
    p.add_argument("--groups", type=_existing, required=True)
    p.add_argument("--pred", type=_existing, action="append", required=True,
                   help="prediction CSV (repeat per seed)")
    p.add_argument("--out-json", required=True)
    p.add_argument("--out-md")
    p.add_argument("--model-name", default="")
    p.add_argument("--tokenizer-name", default="")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("adversarial", help="alien-swap adversarial instances")
    p.add_argument("--in", dest="in", required=True, help="JSONL text instances")
    p.add_argument("--tokenizations", type=_existing, required=True)
    p.add_argument("--lexicon", type=_existing, required=True)
    p.add_argument("--vocab", type=_existing, required=True)
    p.add_argument("--vocab-format", default="token-per-line",
                   choices=("token-per-line", "tokenizer-json"))
    p.add_argument("--vocab-scheme", default="plain", choices=SCHEMES)
    p.add_argument("--candidates", type=_existing, required=True,
                   help="candidate word list, one per line")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_adversarial)

    p = sub.add_parser("audit-sample", help="stratified sample for manual validation")
    p.add_argument("--labels", type=_existing, required=True,
                   help="labelled JSONL (output of the label subcommand)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--classes", default="morph,alien")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_audit_sample)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    # Apply config-file defaults before the real parse so flags override.
    if "--config" in argv:
        try:
            cfg_path = Path(argv[argv.index("--config") + 1])
            defaults = _read_config(cfg_path)
        except (IndexError, OSError, InputError) as exc:
            sys.stderr.write(f"morphtok: bad --config: {exc}\n")
            return 1
        for action in parser._subparsers._group_actions:  # noqa: SLF001
            for sp in action.choices.values():
                for sp_action in sp._actions:  # noqa: SLF001
                    if sp_action.dest in defaults:
                        value = defaults[sp_action.dest]
                        if sp_action.type is not None:
                            value = sp_action.type(str(value))
                        sp.set_defaults(**{sp_action.dest: value})
                        sp_action.required = False
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    log.info("morphtok %s: %s", __version__, args.command)
    try:
        return args.func(args)
    except (InputError, FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        log.error("%s", exc)
        return 1
    except SystemExit:
        raise
    except Exception:
        log.exception("internal error")
        return 2


if __name__ == "__main__":
    sys.exit(main())
