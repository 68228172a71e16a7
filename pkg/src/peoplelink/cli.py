"""Command-line entry point for batch detection, linking, and evaluation.

Commands: ``detect`` (mention detection only), ``run`` (end-to-end with
scoring), ``eval`` (score existing prediction files), ``iaa``
(inter-annotator agreement), ``cache`` (response-cache maintenance).
Diagnostics go to stderr; data goes to files or stdout.  Exit code is 0
only when no per-file diagnostics were emitted, 2 otherwise.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .coref import PronounLexicon, default_pronoun_lexicon, load_pronoun_lexicon
from .corpus import GoldDocument, parse_gold_tsv, write_gold_tsv
from .errors import ClientUnavailableError, PipelineError
from .linker import (
    CachingSearchClient,
    CachingTagmeClient,
    DEFAULT_LENGTH_LIMIT,
    DEFAULT_SEARCH_URL,
    DEFAULT_TAGME_URL,
    FixtureSearchClient,
    FixtureTagmeClient,
    OnlineSearchClient,
    OnlineTagmeClient,
    RateLimiter,
    ResponseCache,
)
from .mentions import default_title_list, load_title_list
from .pipeline import detect_document, list_corpus_titles, load_bundle, run_document
from .reporting import render_figures, render_report
from .scoring import EvalStages, build_report, iaa, score_document

CACHE_ENV = "PEOPLELINK_CACHE"
_DEFAULT_CACHE = "~/.cache/peoplelink/responses.log"


@dataclass
class RunConfig:
    """Resolved configuration for the detect/run commands."""

    corpus_dir: Path
    profiles_dir: Path
    standoff_dir: Path | None
    gold_dir: Path | None
    out_dir: Path
    linker: str = "wikisearch"
    mode: str = "offline"
    fixtures: Path | None = None
    length_limit: int = DEFAULT_LENGTH_LIMIT
    average: str = "both"
    report_format: str = "text"
    figures_dir: Path | None = None
    cache_path: Path | None = None
    titles: frozenset[str] | None = None
    lexicon: PronounLexicon | None = None
    workers: int = 0
    search_url: str | None = None
    tagme_url: str | None = None
    rps: float = 5.0


def _diag(message: str) -> None:
    print(f"peoplelink: {message}", file=sys.stderr)


def _workers(n: int) -> int:
    return n if n > 0 else (os.cpu_count() or 1)


def _resolve_cache_path(arg: str | None) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get(CACHE_ENV, os.path.expanduser(_DEFAULT_CACHE)))


def _build_clients(config: RunConfig):
    """Search/TagMe clients per mode; online clients go through the cache."""
    if config.mode == "offline":
        search = tagme = None
        if config.linker == "wikisearch":
            path = config.fixtures / "wikisearch.json"
            search = FixtureSearchClient.from_file(path)
        else:
            path = config.fixtures / "tagme.json"
            tagme = FixtureTagmeClient.from_file(path)
        return search, tagme
    cache = ResponseCache(config.cache_path)
    limiter = RateLimiter(config.rps)
    if config.linker == "wikisearch":
        online = OnlineSearchClient(
            base_url=config.search_url or DEFAULT_SEARCH_URL,
            rate_limiter=limiter,
        )
        return CachingSearchClient(online, cache), None
    online = OnlineTagmeClient(
        base_url=config.tagme_url or DEFAULT_TAGME_URL,
        rate_limiter=limiter,
        cache=cache,
    )
    return None, CachingTagmeClient(online, cache)


def _load_rule_data(args) -> tuple[frozenset[str], PronounLexicon]:
    titles = load_title_list(args.titles) if args.titles else default_title_list()
    lexicon = (
        load_pronoun_lexicon(args.pronouns) if args.pronouns else default_pronoun_lexicon()
    )
    return titles, lexicon


def _config_from_args(args) -> RunConfig:
    titles, lexicon = _load_rule_data(args)
    config = RunConfig(
        corpus_dir=Path(args.corpus),
        profiles_dir=Path(args.profiles),
        standoff_dir=Path(args.standoff) if args.standoff else None,
        gold_dir=Path(args.gold) if args.gold else None,
        out_dir=Path(args.out),
        linker=args.linker,
        mode=args.mode,
        fixtures=Path(args.fixtures) if args.fixtures else None,
        length_limit=args.length_limit,
        average=args.average,
        report_format=args.report,
        figures_dir=Path(args.figures) if args.figures else None,
        cache_path=_resolve_cache_path(args.cache),
        titles=titles,
        lexicon=lexicon,
        workers=args.workers,
        search_url=args.search_url,
        tagme_url=args.tagme_url,
        rps=args.rps,
    )
    if config.mode == "offline" and config.fixtures is None:
        raise SystemExit("peoplelink: --mode offline requires --fixtures")
    return config


def _spans_payload(spans) -> list[dict]:
    return [
        {
            "start": s.start,
            "end": s.end,
            "kind": s.kind.value,
            "source": s.source.value,
            "subject_hint": s.subject_hint,
        }
        for s in sorted(spans, key=lambda s: (s.start, s.end))
    ]


def cmd_detect(args) -> int:
    titles, lexicon = _load_rule_data(args)
    corpus_titles = list_corpus_titles(args.corpus)
    if not corpus_titles:
        _diag(f"no documents found in {args.corpus}")
        return 2
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    failures = 0

    def work(title: str):
        bundle = load_bundle(title, args.corpus, args.profiles, args.standoff)
        names, pronouns = detect_document(bundle, titles, lexicon)
        payload = {
            "page_title": bundle.profile.wiki_title,
            "mentions": _spans_payload(names + pronouns),
        }
        path = out_dir / f"{title}.json"
        path.write_text(
            json.dumps(payload, ensure_ascii=False, sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )

    with ThreadPoolExecutor(max_workers=_workers(args.workers)) as pool:
        futures = {title: pool.submit(work, title) for title in corpus_titles}
    for title, future in sorted(futures.items()):
        try:
            future.result()
        except (PipelineError, OSError) as exc:
            _diag(f"{title}: {exc}")
            failures += 1
    return 2 if failures else 0


def cmd_run(args) -> int:
    config = _config_from_args(args)
    corpus_titles = list_corpus_titles(config.corpus_dir)
    if not corpus_titles:
        _diag(f"no documents found in {config.corpus_dir}")
        return 2
    if config.gold_dir is None:
        _diag("run requires --gold for evaluation")
        return 2
    search_client, tagme_client = _build_clients(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    failures = 0
    per_doc: dict[str, EvalStages] = {}

    def work(title: str) -> EvalStages:
        bundle = load_bundle(
            title,
            config.corpus_dir,
            config.profiles_dir,
            config.standoff_dir,
            config.gold_dir,
        )
        rows = run_document(
            bundle,
            config.linker,
            search_client=search_client,
            tagme_client=tagme_client,
            length_limit=config.length_limit,
            titles=config.titles,
            lexicon=config.lexicon,
        )
        prediction = GoldDocument(title, tuple(rows))
        (config.out_dir / f"{title}.tsv").write_bytes(write_gold_tsv(prediction))
        return score_document(bundle.gold, rows)

    with ThreadPoolExecutor(max_workers=_workers(config.workers)) as pool:
        futures = {title: pool.submit(work, title) for title in corpus_titles}
    for title, future in sorted(futures.items()):
        try:
            per_doc[title] = future.result()
        except ClientUnavailableError as exc:
            _diag(f"{title}: aborted: {exc}")
            failures += 1
        except (PipelineError, OSError) as exc:
            _diag(f"{title}: {exc}")
            failures += 1

    if per_doc:
        report = build_report(per_doc, config.average)
        sys.stdout.write(render_report(report, config.report_format))
        if config.figures_dir is not None:
            render_figures(report, config.figures_dir)
    return 2 if failures else 0


def cmd_eval(args) -> int:
    gold_dir, pred_dir = Path(args.gold), Path(args.pred)
    gold_files = sorted(gold_dir.glob("*.tsv"))
    if not gold_files:
        _diag(f"no gold files found in {gold_dir}")
        return 2
    failures = 0
    per_doc: dict[str, EvalStages] = {}
    for gold_path in gold_files:
        title = gold_path.stem
        try:
            gold = parse_gold_tsv(gold_path.read_bytes())
            pred = parse_gold_tsv((pred_dir / gold_path.name).read_bytes())
            per_doc[title] = score_document(gold, list(pred.rows))
        except (PipelineError, OSError) as exc:
            _diag(f"{title}: {exc}")
            failures += 1
    if per_doc:
        report = build_report(per_doc, args.average)
        sys.stdout.write(render_report(report, args.report))
        if args.figures:
            render_figures(report, args.figures)
    return 2 if failures else 0


def cmd_iaa(args) -> int:
    dir_a, dir_b = Path(args.gold_a), Path(args.gold_b)
    files = sorted(dir_a.glob("*.tsv"))
    if not files:
        _diag(f"no gold files found in {dir_a}")
        return 2
    failures = 0
    per_doc: dict[str, EvalStages] = {}
    for path_a in files:
        title = path_a.stem
        try:
            gold_a = parse_gold_tsv(path_a.read_bytes())
            gold_b = parse_gold_tsv((dir_b / path_a.name).read_bytes())
            per_doc[title] = iaa(gold_a, gold_b)
        except (PipelineError, OSError) as exc:
            _diag(f"{title}: {exc}")
            failures += 1
    if per_doc:
        report = build_report(per_doc, args.average)
        sys.stdout.write(render_report(report, args.report))
    return 2 if failures else 0


def cmd_cache(args) -> int:
    cache = ResponseCache(_resolve_cache_path(args.cache))
    if args.action == "stats":
        for key, value in sorted(cache.stats().items()):
            print(f"{key}\t{value}")
    elif args.action == "list":
        for key in cache.keys():
            print(key)
    elif args.action == "clear":
        cache.clear()
    return 0


def _add_rule_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--titles", help="override the honorific title list file")
    parser.add_argument("--pronouns", help="override the pronoun lexicon file")
    parser.add_argument(
        "--workers", type=int, default=0, help="worker threads (0 = available parallelism)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peoplelink",
        description="Detect and link person mentions on Wikipedia people pages.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    detect = sub.add_parser("detect", help="mention detection only (rule-based model)")
    detect.add_argument("--corpus", required=True, help="directory of <title>.txt pages")
    detect.add_argument("--profiles", required=True, help="directory of <title>.xml profiles")
    detect.add_argument("--standoff", help="directory of <title>.json base annotations")
    detect.add_argument("--out", required=True, help="output directory for mention files")
    _add_rule_flags(detect)
    detect.set_defaults(func=cmd_detect)

    run = sub.add_parser("run", help="detect, link, score, and write predictions")
    run.add_argument("--corpus", required=True)
    run.add_argument("--profiles", required=True)
    run.add_argument("--standoff")
    run.add_argument("--gold", required=True, help="directory of gold <title>.tsv files")
    run.add_argument("--out", required=True, help="output directory for prediction TSVs")
    run.add_argument(
        "--linker", choices=("wikisearch", "tagme", "baseline"), default="wikisearch"
    )
    run.add_argument("--mode", choices=("online", "offline"), default="offline")
    run.add_argument("--fixtures", help="fixture directory (offline mode)")
    run.add_argument("--length-limit", dest="length_limit", type=int, default=DEFAULT_LENGTH_LIMIT)
    run.add_argument("--average", choices=("macro", "micro", "both"), default="both")
    run.add_argument("--report", choices=("text", "json", "tsv"), default="text")
    run.add_argument("--figures", help="also render score figures into this directory")
    run.add_argument("--cache", help=f"response cache path (or ${CACHE_ENV})")
    run.add_argument("--search-url", dest="search_url", help="MediaWiki API base URL")
    run.add_argument("--tagme-url", dest="tagme_url", help="TagMe API base URL")
    run.add_argument("--rps", type=float, default=5.0, help="online requests per second")
    _add_rule_flags(run)
    run.set_defaults(func=cmd_run)

    evaluate = sub.add_parser("eval", help="score prediction files against gold files")
    evaluate.add_argument("--gold", required=True)
    evaluate.add_argument("--pred", required=True)
    evaluate.add_argument("--average", choices=("macro", "micro", "both"), default="both")
    evaluate.add_argument("--report", choices=("text", "json", "tsv"), default="text")
    evaluate.add_argument("--figures")
    evaluate.set_defaults(func=cmd_eval)

    agreement = sub.add_parser("iaa", help="inter-annotator agreement between gold dirs")
    agreement.add_argument("--gold-a", dest="gold_a", required=True)
    agreement.add_argument("--gold-b", dest="gold_b", required=True)
    agreement.add_argument("--average", choices=("macro", "micro", "both"), default="both")
    agreement.add_argument("--report", choices=("text", "json", "tsv"), default="text")
    agreement.set_defaults(func=cmd_iaa)

    cache = sub.add_parser("cache", help="inspect or clear the response cache")
    cache.add_argument("action", choices=("list", "stats", "clear"))
    cache.add_argument("--cache", help=f"response cache path (or ${CACHE_ENV})")
    cache.set_defaults(func=cmd_cache)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
