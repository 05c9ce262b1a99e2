"""Measurement fold over per-domain records (M1/M2/M3) and report writers.

The fold is pure: rerunning it over stored records reproduces the identical
report, and the JSON/CSV writers are byte-deterministic (sorted rows, no
timestamps).
"""

from __future__ import annotations

import csv
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from .db import EnforcementDb, EnforcementRecord, RecordStatus
from .decision import parse_serialized
from .errors import NoticeSyntaxError
from .pipeline import PipelineConfig, run_pipeline

logger = logging.getLogger(__name__)

DEFAULT_WORKERS = 4
PER_DOMAIN_TIMEOUT_S = 120.0

_M1_STATUSES = (RecordStatus.PLAN, RecordStatus.ACCEPT_ONLY, RecordStatus.DEDICATED_PAGE)


@dataclass
class MeasurementReport:
    region: str
    domains_total: int = 0
    domains_analyzed: int = 0
    m1_with_notice: int = 0
    m2_no_choice: int = 0
    m3_default_enabled: int = 0
    per_domain: list[dict] = field(default_factory=list)
    # DEDICATED_PAGE sites count toward M1; flagged so readers know.
    counts_dedicated_in_m1: bool = True

    def to_json(self) -> dict:
        return {
            "region": self.region,
            "domains_total": self.domains_total,
            "domains_analyzed": self.domains_analyzed,
            "m1_with_notice": self.m1_with_notice,
            "m2_no_choice": self.m2_no_choice,
            "m3_default_enabled": self.m3_default_enabled,
            "counts_dedicated_in_m1": self.counts_dedicated_in_m1,
            "per_domain": self.per_domain,
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    def to_csv_str(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["domain", "status", "m1", "m2", "m3"])
        for row in self.per_domain:
            flags = row["m_flags"]
            writer.writerow(
                [row["domain"], row["status"], int(flags["m1"]), int(flags["m2"]), int(flags["m3"])]
            )
        return buf.getvalue()


def record_m_flags(record: EnforcementRecord) -> dict[str, bool]:
    """Per-domain measurement flags, derived from the stored record alone.

    M1: a notice was found (including accept-only and dedicated-page ones).
    M2: the notice offers exactly one interactable element — no real choice.
    M3: the plan changes the initial state of at least one switch, i.e. a
    non-essential cookie was enabled by default.
    """
    m1 = record.status in _M1_STATUSES
    m2 = False
    if m1 and record.serialized_notice:
        try:
            m2 = parse_serialized(record.serialized_notice).entry_count() == 1
        except NoticeSyntaxError:
            m2 = False
    m3 = any(step.tag_rendered.startswith("switch") for step in record.steps)
    return {"m1": m1, "m2": m2, "m3": m3}


def fold_records(
    region: str,
    records: list[Optional[EnforcementRecord]],
    domains: list[str],
    skipped: Optional[set[str]] = None,
) -> MeasurementReport:
    """Aggregate records into the report. ``records`` aligns with
    ``domains``; None entries were skipped (language filter)."""
    skipped = skipped or set()
    report = MeasurementReport(region=region, domains_total=len(domains))
    rows = []
    for domain, record in zip(domains, records):
        if record is None:
            rows.append(
                {
                    "domain": domain.lower(),
                    "status": "SKIPPED_NON_ENGLISH",
                    "m_flags": {"m1": False, "m2": False, "m3": False},
                }
            )
            continue
        flags = record_m_flags(record)
        rows.append(
            {"domain": record.domain, "status": record.status.value, "m_flags": flags}
        )
        if record.status is not RecordStatus.ERROR:
            report.domains_analyzed += 1
        report.m1_with_notice += flags["m1"]
        report.m2_no_choice += flags["m2"]
        report.m3_default_enabled += flags["m3"]
    report.per_domain = sorted(rows, key=lambda r: r["domain"])
    return report


def measure(
    domains: list[str],
    config: PipelineConfig,
    db: Optional[EnforcementDb] = None,
    workers: int = DEFAULT_WORKERS,
) -> MeasurementReport:
    """Run (or reuse) the pipeline for every domain, then fold.

    Stored records win over re-analysis; fresh records are persisted when a
    db is provided. Domains run concurrently on independent sessions."""
    domains = [d.strip().lower() for d in domains if d.strip()]
    if not domains:
        return MeasurementReport(region=config.region)

    def one(domain: str) -> Optional[EnforcementRecord]:
        if db is not None:
            stored = db.get(domain, config.region)
            if stored is not None:
                return stored
        record = run_pipeline(domain, config)
        if record is not None and db is not None:
            db.put(record)
        return record

    if workers <= 1 or len(domains) == 1:
        records = [one(d) for d in domains]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {d: pool.submit(one, d) for d in domains}
            records = []
            for d in domains:
                try:
                    records.append(futures[d].result(timeout=PER_DOMAIN_TIMEOUT_S))
                except Exception as exc:  # timeout or worker crash
                    logger.warning("%s: measurement failed: %s", d, exc)
                    records.append(
                        EnforcementRecord(
                            domain=d,
                            region=config.region,
                            status=RecordStatus.ERROR,
                            error_stage="measure",
                        )
                    )
    return fold_records(config.region, records, domains)
