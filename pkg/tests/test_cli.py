"""CLI subcommands against the in-process fixture driver."""

import json

import pytest

from cookiesweep.cli import EXIT_CONFIG, EXIT_OK, main


@pytest.fixture
def driver_url(corpus_server):
    return corpus_server.endpoint


def _common(driver_url):
    return ["--driver", driver_url, "--scheme", "http", "--settle-ms", "60",
            "--gap-ms", "2", "--region", "test"]


class TestAnalyze:
    def test_analyze_plan_domain(self, driver_url, tmp_path, capsys):
        rc = main(["analyze", "reject-first.example", "--out", str(tmp_path / "db.sqlite")]
                  + _common(driver_url))
        assert rc == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["status"] == "PLAN"
        assert payload["plan_text"] == "Click button0."

    def test_analyze_no_notice(self, driver_url, capsys):
        rc = main(["analyze", "no-notice.example"] + _common(driver_url))
        assert rc == EXIT_OK
        assert json.loads(capsys.readouterr().out)["status"] == "NO_NOTICE"


class TestMeasure:
    def test_measure_writes_report_csv_figures(self, driver_url, tmp_path):
        domains = tmp_path / "domains.txt"
        domains.write_text("reject-first.example\naccept-only.example\nno-notice.example\n")
        report = tmp_path / "report.json"
        csv_path = tmp_path / "report.csv"
        figures = tmp_path / "figs"
        rc = main([
            "measure", "--domains", str(domains), "--report", str(report),
            "--csv", str(csv_path), "--figures", str(figures),
            "--db", str(tmp_path / "db.sqlite"), "--workers", "2",
        ] + _common(driver_url))
        assert rc == EXIT_OK
        payload = json.loads(report.read_text())
        assert payload["domains_total"] == 3
        assert payload["m1_with_notice"] == 2
        assert csv_path.read_text().splitlines()[0] == "domain,status,m1,m2,m3"
        assert (figures / "m_counts.png").exists()
        assert (figures / "status_breakdown.png").exists()

    def test_missing_domains_file_is_config_error(self, driver_url, tmp_path):
        rc = main([
            "measure", "--domains", str(tmp_path / "nope.txt"),
            "--report", str(tmp_path / "r.json"),
        ] + _common(driver_url))
        assert rc == EXIT_CONFIG

    def test_report_byte_deterministic_across_runs(self, driver_url, tmp_path):
        domains = tmp_path / "domains.txt"
        domains.write_text("reject-first.example\naccept-only.example\n")
        outs = []
        for name in ("r1.json", "r2.json"):
            report = tmp_path / name
            rc = main([
                "measure", "--domains", str(domains), "--report", str(report),
            ] + _common(driver_url))
            assert rc == EXIT_OK
            outs.append(report.read_bytes())
        assert outs[0] == outs[1]


class TestExport:
    def test_export_after_analyze(self, driver_url, tmp_path):
        db = tmp_path / "db.sqlite"
        assert main(["analyze", "reject-first.example", "--out", str(db)] + _common(driver_url)) == EXIT_OK
        bundle = tmp_path / "bundle.json"
        rc = main(["export", "--region", "test", "--db", str(db), "--bundle", str(bundle)])
        assert rc == EXIT_OK
        from cookiesweep.db import verify_bundle

        records = verify_bundle(bundle.read_text())
        assert records[0].domain == "reject-first.example"

    def test_export_empty_region_is_config_error(self, tmp_path):
        db = tmp_path / "db.sqlite"
        from cookiesweep.db import EnforcementDb

        EnforcementDb(db).close()
        rc = main(["export", "--region", "void", "--db", str(db),
                   "--bundle", str(tmp_path / "b.json")])
        assert rc == EXIT_CONFIG


class TestFixtures:
    def test_render_corpus(self, tmp_path):
        rc = main(["fixtures", "render", "--out", str(tmp_path / "corpus")])
        assert rc == EXIT_OK
        rendered = list((tmp_path / "corpus").glob("*/index.html"))
        assert len(rendered) >= 25
        html = (tmp_path / "corpus" / "reject-first.example" / "index.html").read_text()
        assert "cookie-banner" in html and "__FIXTURE__" in html


class TestAuditAndFilters:
    def test_audit_file_written(self, driver_url, tmp_path):
        audit_path = tmp_path / "audit.jsonl"
        rc = main(["analyze", "reject-first.example", "--audit", str(audit_path)]
                  + _common(driver_url))
        assert rc == EXIT_OK
        lines = [json.loads(l) for l in audit_path.read_text().splitlines()]
        assert lines, "audit log is empty"
        probes = [l for l in lines if l["action"] == "probe"]
        assert probes and all(
            set(l) == {"domain", "view", "tag", "action", "outcome", "reason"}
            for l in lines
        )
        # probe records carry the click-twice evidence
        evidence = json.loads(probes[0]["reason"])
        assert "first_click" in evidence and "second_click" in evidence

    def test_english_only_skips_via_hook(self, corpus_server):
        from cookiesweep.fixtures.harness import corpus_pipeline_config
        from cookiesweep.pipeline import run_pipeline

        config = corpus_pipeline_config(corpus_server.endpoint)
        config.english_only = True
        config.language_hook = lambda page: False
        assert run_pipeline("reject-first.example", config) is None
        config.language_hook = lambda page: True
        record = run_pipeline("reject-first.example", config)
        assert record is not None and record.status.value == "PLAN"
