"""Command-line interface.

    cookiesweep analyze <domain> --driver URL [--region LABEL] [--out DB]
    cookiesweep measure --domains FILE --report out.json [--csv out.csv]
                        [--figures DIR] [--driver URL] [--db DB]
    cookiesweep export --region LABEL --bundle out.json --db DB
    cookiesweep fixtures serve|driver|render|bundle ...

Exit codes: 0 success, 2 partial failures, 3 configuration error.
"""

from __future__ import annotations

import argparse
import functools
import http.server
import json
import logging
import sys
import tempfile
from pathlib import Path

from .analyzer import ExploreConfig
from .db import EnforcementDb, RecordStatus
from .errors import CookiesweepError
from .measure import measure as run_measure
from .pipeline import PipelineConfig, run_pipeline

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARTIAL = 2
EXIT_CONFIG = 3


def _pipeline_config(args) -> PipelineConfig:
    return PipelineConfig(
        driver_endpoint=args.driver,
        region=args.region,
        url_scheme=args.scheme,
        settle_delay_ms=args.settle_ms,
        page_load_timeout_ms=args.timeout_ms,
        explore=ExploreConfig(
            click_budget=args.budget, probe_click_gap_ms=args.gap_ms
        ),
        audit_path=Path(args.audit) if args.audit else None,
        english_only=getattr(args, "english_only", False),
    )


def _add_driver_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--driver", default="http://127.0.0.1:9515", help="WebDriver endpoint URL")
    parser.add_argument("--region", default="unspecified", help="region label for records")
    parser.add_argument("--scheme", default="https", choices=["http", "https"])
    parser.add_argument("--settle-ms", type=int, default=2000, dest="settle_ms")
    parser.add_argument("--timeout-ms", type=int, default=30000, dest="timeout_ms")
    parser.add_argument("--budget", type=int, default=120, help="click budget per domain")
    parser.add_argument("--gap-ms", type=int, default=500, dest="gap_ms", help="delay between probe clicks")
    parser.add_argument("--audit", default=None, help="JSON-lines audit log path")


def cmd_analyze(args) -> int:
    config = _pipeline_config(args)
    record = run_pipeline(args.domain, config)
    if record is None:
        print(f"{args.domain}: skipped", file=sys.stderr)
        return EXIT_PARTIAL
    if args.out:
        db = EnforcementDb(args.out)
        db.put(record)
        db.close()
    print(json.dumps(record.to_json(), indent=2, ensure_ascii=False))
    return EXIT_OK if record.status is not RecordStatus.ERROR else EXIT_PARTIAL


def cmd_measure(args) -> int:
    domains_path = Path(args.domains)
    if not domains_path.exists():
        print(f"domains file not found: {domains_path}", file=sys.stderr)
        return EXIT_CONFIG
    domains = [line.strip() for line in domains_path.read_text().splitlines() if line.strip()]
    config = _pipeline_config(args)
    db = EnforcementDb(args.db) if args.db else None
    report = run_measure(domains, config, db=db, workers=args.workers)
    Path(args.report).write_text(report.to_json_str(), encoding="utf-8")
    if args.csv:
        Path(args.csv).write_text(report.to_csv_str(), encoding="utf-8")
    if args.figures:
        from .report_plots import render_report_figures

        render_report_figures(report, Path(args.figures))
    if db is not None:
        db.close()
    errors = sum(1 for row in report.per_domain if row["status"] == "ERROR")
    print(
        f"analyzed {report.domains_analyzed}/{report.domains_total}: "
        f"M1={report.m1_with_notice} M2={report.m2_no_choice} M3={report.m3_default_enabled}"
    )
    return EXIT_PARTIAL if errors else EXIT_OK


def cmd_export(args) -> int:
    db = EnforcementDb(args.db)
    try:
        text = db.export_bundle(args.region, args.bundle)
    except CookiesweepError as exc:
        print(f"export failed: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        db.close()
    print(f"wrote {args.bundle} ({len(text.encode())} bytes)")
    return EXIT_OK


def cmd_fixtures_serve(args) -> int:
    from .fixtures import load_corpus
    from .fixtures.html_render import render_corpus

    if args.dir:
        directory = Path(args.dir)
    else:
        directory = Path(tempfile.mkdtemp(prefix="cookiesweep-corpus-"))
        render_corpus(load_corpus(), directory)
        if args.bundle:
            (directory / "bundle.json").write_bytes(Path(args.bundle).read_bytes())
    handler = functools.partial(
        http.server.SimpleHTTPRequestHandler, directory=str(directory)
    )
    server = http.server.ThreadingHTTPServer(("127.0.0.1", args.port), handler)
    print(f"serving fixture corpus from {directory} on http://127.0.0.1:{args.port}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def cmd_fixtures_driver(args) -> int:
    from .fixtures import load_corpus
    from .fixtures.server import FixtureDriverServer

    server = FixtureDriverServer(load_corpus(), port=args.port)
    print(f"fixture WebDriver at {server.endpoint} "
          f"({len(server.corpus)} sites; use --scheme http)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def cmd_fixtures_render(args) -> int:
    from .fixtures import load_corpus
    from .fixtures.html_render import render_corpus

    written = render_corpus(load_corpus(), Path(args.out))
    print(f"rendered {len(written)} pages under {args.out}")
    return EXIT_OK


def cmd_fixtures_bundle(args) -> int:
    from .fixtures.harness import analyze_corpus

    db = EnforcementDb()
    analyze_corpus(db=db, region=args.region)
    db.export_bundle(args.region, args.out)
    db.close()
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cookiesweep", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="analyze one domain")
    p_analyze.add_argument("domain")
    p_analyze.add_argument("--out", default=None, help="enforcement db path")
    _add_driver_options(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_measure = sub.add_parser("measure", help="measure a domain list")
    p_measure.add_argument("--domains", required=True, help="file with one domain per line")
    p_measure.add_argument("--report", required=True, help="report JSON output path")
    p_measure.add_argument("--csv", default=None, help="per-domain CSV output path")
    p_measure.add_argument("--figures", default=None, help="directory for report figures")
    p_measure.add_argument("--db", default=None, help="enforcement db path (reused when present)")
    p_measure.add_argument("--workers", type=int, default=4)
    p_measure.add_argument("--english-only", action="store_true", dest="english_only")
    _add_driver_options(p_measure)
    p_measure.set_defaults(func=cmd_measure)

    p_export = sub.add_parser("export", help="export a region bundle")
    p_export.add_argument("--region", required=True)
    p_export.add_argument("--bundle", required=True)
    p_export.add_argument("--db", required=True)
    p_export.set_defaults(func=cmd_export)

    p_fixtures = sub.add_parser("fixtures", help="fixture corpus utilities")
    fix_sub = p_fixtures.add_subparsers(dest="fixtures_command", required=True)

    p_serve = fix_sub.add_parser("serve", help="serve the corpus as static HTML")
    p_serve.add_argument("--port", type=int, default=8321)
    p_serve.add_argument("--dir", default=None, help="serve this directory instead of rendering")
    p_serve.add_argument("--bundle", default=None, help="bundle.json to serve alongside")
    p_serve.set_defaults(func=cmd_fixtures_serve)

    p_driver = fix_sub.add_parser("driver", help="run the simulated WebDriver server")
    p_driver.add_argument("--port", type=int, default=9515)
    p_driver.set_defaults(func=cmd_fixtures_driver)

    p_render = fix_sub.add_parser("render", help="render the corpus to HTML files")
    p_render.add_argument("--out", required=True)
    p_render.set_defaults(func=cmd_fixtures_render)

    p_bundle = fix_sub.add_parser("bundle", help="analyze the corpus and export its bundle")
    p_bundle.add_argument("--out", required=True)
    p_bundle.add_argument("--region", default="test")
    p_bundle.set_defaults(func=cmd_fixtures_bundle)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except CookiesweepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
