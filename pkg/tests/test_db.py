"""Record validation, upsert semantics, and bundle export/verify."""

import pytest

from cookiesweep import dom
from cookiesweep.db import (
    EnforcementDb,
    EnforcementRecord,
    EnforcementStep,
    RecordStatus,
    verify_bundle,
)
from cookiesweep.errors import EmptyRegion, StaleWrite, ValidationFailed


def sel(css):
    return dom.SelectorPath(css=css, strategy=dom.SelectorStrategy.BY_ID)


def plan_record(domain="shop.example", region="eu", at="2024-05-01T00:00:00.000000Z"):
    return EnforcementRecord(
        domain=domain,
        region=region,
        status=RecordStatus.PLAN,
        generated_at=at,
        notice_selector=sel("#banner"),
        steps=[
            EnforcementStep(0, "button0", sel("#reject"), None, 1000),
        ],
        serialized_notice="button0 - reject || button1 - accept all <end>",
        plan_text="Click button0.",
    )


class TestPutGet:
    def test_round_trip(self):
        db = EnforcementDb()
        record = plan_record()
        db.put(record)
        got = db.get("shop.example", "eu")
        assert got == record

    def test_plan_requires_steps(self):
        record = plan_record()
        record.steps = []
        with pytest.raises(ValidationFailed):
            EnforcementDb().put(record)

    def test_upsert_newer_wins(self):
        db = EnforcementDb()
        db.put(plan_record(at="2024-05-01T00:00:00.000000Z"))
        newer = plan_record(at="2024-06-01T00:00:00.000000Z")
        newer.plan_text = "Click button0."
        db.put(newer)
        assert db.get("shop.example", "eu").generated_at == "2024-06-01T00:00:00.000000Z"

    def test_stale_write_rejected(self):
        db = EnforcementDb()
        db.put(plan_record(at="2024-06-01T00:00:00.000000Z"))
        with pytest.raises(StaleWrite):
            db.put(plan_record(at="2024-05-01T00:00:00.000000Z"))

    def test_region_is_part_of_key(self):
        db = EnforcementDb()
        db.put(plan_record(region="eu"))
        db.put(plan_record(region="us"))
        assert db.get("shop.example", "eu") is not None
        assert db.get("shop.example", "us") is not None

    def test_uppercase_domain_rejected(self):
        record = plan_record(domain="Shop.example")
        with pytest.raises(ValidationFailed):
            EnforcementDb().put(record)


class TestExportBundle:
    def _db(self):
        db = EnforcementDb()
        for i, domain in enumerate(["c.example", "a.example", "b.example"]):
            db.put(plan_record(domain=domain, at=f"2024-05-0{i + 1}T00:00:00.000000Z"))
        return db

    def test_bundle_contents(self):
        text = self._db().export_bundle("eu")
        records = verify_bundle(text)
        assert [r.domain for r in records] == ["a.example", "b.example", "c.example"]

    def test_reexport_is_byte_identical(self):
        db = self._db()
        assert db.export_bundle("eu") == db.export_bundle("eu")

    def test_fresh_db_same_content_same_bytes(self):
        assert self._db().export_bundle("eu") == self._db().export_bundle("eu")

    def test_single_byte_tamper_detected(self):
        text = self._db().export_bundle("eu")
        flipped = text.replace("Click button0.", "Click button1.", 1)
        assert flipped != text
        with pytest.raises(ValidationFailed):
            verify_bundle(flipped)

    def test_record_count_tamper_detected(self):
        import json

        obj = json.loads(self._db().export_bundle("eu"))
        obj["records"].pop()
        with pytest.raises(ValidationFailed):
            verify_bundle(json.dumps(obj))

    def test_empty_region_raises(self):
        with pytest.raises(EmptyRegion):
            self._db().export_bundle("nowhere")

    def test_lf_line_endings_and_trailing_newline(self):
        text = self._db().export_bundle("eu")
        assert "\r" not in text and text.endswith("\n")

    def test_no_visited_urls_in_bundle(self):
        # privacy contract: domain names and instructions only
        text = self._db().export_bundle("eu")
        assert "://" not in text

    def test_corpus_bundle_round_trip(self, corpus_results):
        db = corpus_results["db"]
        text = db.export_bundle("test")
        records = verify_bundle(text)
        by_domain = {r.domain: r for r in records}
        for domain, original in corpus_results["records"].items():
            assert by_domain[domain] == original
