"""Per-domain enforcement records and the bundle the extension syncs.

Storage is a single-writer embedded store (sqlite) keyed by
(domain, region); the interchange format is one JSON bundle per region,
canonically serialized so re-exports are byte-identical and the extension
can hash-verify what it downloads. Bundles carry only domain names and click
instructions — never visited URLs or user data.
"""

from __future__ import annotations

import hashlib
import json
import sqlite3
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from .dom import SelectorPath
from .errors import EmptyRegion, StaleWrite, ValidationFailed

SCHEMA_VERSION = 1


class RecordStatus(str, Enum):
    PLAN = "PLAN"
    ACCEPT_ONLY = "ACCEPT_ONLY"
    NO_NOTICE = "NO_NOTICE"
    DEDICATED_PAGE = "DEDICATED_PAGE"
    ERROR = "ERROR"


@dataclass(frozen=True)
class EnforcementStep:
    view_index: int
    tag_rendered: str
    selector: SelectorPath
    expected_state_before: Optional[str] = None  # "selected" | "not selected"
    delay_after_ms: int = 1000

    def to_json(self) -> dict:
        return {
            "view_index": self.view_index,
            "tag_rendered": self.tag_rendered,
            "selector": self.selector.to_json(),
            "expected_state_before": self.expected_state_before,
            "delay_after_ms": self.delay_after_ms,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EnforcementStep":
        return cls(
            view_index=obj["view_index"],
            tag_rendered=obj["tag_rendered"],
            selector=SelectorPath.from_json(obj["selector"]),
            expected_state_before=obj.get("expected_state_before"),
            delay_after_ms=obj.get("delay_after_ms", 1000),
        )


@dataclass
class EnforcementRecord:
    domain: str
    region: str
    status: RecordStatus
    generated_at: str = ""
    notice_selector: Optional[SelectorPath] = None
    steps: list[EnforcementStep] = field(default_factory=list)
    serialized_notice: str = ""
    plan_text: str = ""
    error_stage: Optional[str] = None
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if not self.generated_at:
            self.generated_at = utc_now()

    def validate(self) -> None:
        if not self.domain or self.domain != self.domain.lower():
            raise ValidationFailed(f"domain must be non-empty lowercase: {self.domain!r}")
        if self.status is RecordStatus.PLAN:
            if not self.steps:
                raise ValidationFailed("PLAN record needs at least one step")
            if self.notice_selector is None:
                raise ValidationFailed("PLAN record needs a notice selector")
            if len(self.steps) > 1:
                for step in self.steps[:-1]:
                    if step.selector.css == self.notice_selector.css:
                        raise ValidationFailed(
                            "step selector equals notice selector in a multi-step plan"
                        )
        for step in self.steps:
            if step.delay_after_ms < 0:
                raise ValidationFailed("delay_after_ms must be >= 0")

    def to_json(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "domain": self.domain,
            "region": self.region,
            "generated_at": self.generated_at,
            "status": self.status.value,
            "notice_selector": self.notice_selector.to_json() if self.notice_selector else None,
            "steps": [s.to_json() for s in self.steps],
            "serialized_notice": self.serialized_notice,
            "plan_text": self.plan_text,
            "error_stage": self.error_stage,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EnforcementRecord":
        sel = obj.get("notice_selector")
        return cls(
            schema_version=obj.get("schema_version", SCHEMA_VERSION),
            domain=obj["domain"],
            region=obj["region"],
            generated_at=obj["generated_at"],
            status=RecordStatus(obj["status"]),
            notice_selector=SelectorPath.from_json(sel) if sel else None,
            steps=[EnforcementStep.from_json(s) for s in obj.get("steps", [])],
            serialized_notice=obj.get("serialized_notice", ""),
            plan_text=obj.get("plan_text", ""),
            error_stage=obj.get("error_stage"),
        )


def utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


def canonical_records_bytes(records_json: list[dict]) -> bytes:
    """Canonical byte form the content hash covers: compact separators,
    recursively sorted keys, raw UTF-8. Mirrors JSON.stringify over
    key-sorted objects on the extension side."""
    return json.dumps(
        records_json, separators=(",", ":"), sort_keys=True, ensure_ascii=False
    ).encode("utf-8")


def content_hash(records_json: list[dict]) -> str:
    return hashlib.sha256(canonical_records_bytes(records_json)).hexdigest()


class EnforcementDb:
    """Embedded record store. Writes go through one pipeline process;
    reads and exports take consistent snapshots."""

    def __init__(self, path: Union[str, Path] = ":memory:"):
        self.path = str(path)
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._conn.execute(
            """
            CREATE TABLE IF NOT EXISTS records (
                domain TEXT NOT NULL,
                region TEXT NOT NULL,
                generated_at TEXT NOT NULL,
                payload TEXT NOT NULL,
                PRIMARY KEY (domain, region)
            )
            """
        )
        self._conn.commit()

    def close(self) -> None:
        self._conn.close()

    def put(self, record: EnforcementRecord) -> None:
        record.validate()
        cur = self._conn.execute(
            "SELECT generated_at FROM records WHERE domain=? AND region=?",
            (record.domain, record.region),
        )
        row = cur.fetchone()
        if row is not None and record.generated_at < row[0]:
            raise StaleWrite(
                f"{record.domain}/{record.region}: {record.generated_at} < {row[0]}"
            )
        self._conn.execute(
            "INSERT OR REPLACE INTO records (domain, region, generated_at, payload) VALUES (?,?,?,?)",
            (
                record.domain,
                record.region,
                record.generated_at,
                json.dumps(record.to_json(), ensure_ascii=False),
            ),
        )
        self._conn.commit()

    def get(self, domain: str, region: str) -> Optional[EnforcementRecord]:
        cur = self._conn.execute(
            "SELECT payload FROM records WHERE domain=? AND region=?", (domain, region)
        )
        row = cur.fetchone()
        return EnforcementRecord.from_json(json.loads(row[0])) if row else None

    def list_region(self, region: str) -> list[EnforcementRecord]:
        cur = self._conn.execute(
            "SELECT payload FROM records WHERE region=? ORDER BY domain", (region,)
        )
        return [EnforcementRecord.from_json(json.loads(r[0])) for r in cur.fetchall()]

    def export_bundle(self, region: str, path: Optional[Union[str, Path]] = None) -> str:
        """Bundle text for the region: manifest + records sorted by domain,
        UTF-8, LF line endings. Byte-identical across re-exports of the same
        content (the manifest timestamp derives from the records)."""
        records = self.list_region(region)
        if not records:
            raise EmptyRegion(f"no records for region {region!r}")
        records_json = [r.to_json() for r in records]
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "record_count": len(records_json),
            "generated_at": max(r["generated_at"] for r in records_json),
            "content_hash": content_hash(records_json),
        }
        text = json.dumps(
            {"manifest": manifest, "records": records_json},
            indent=2,
            ensure_ascii=False,
        )
        text = text.replace("\r\n", "\n") + "\n"
        if path is not None:
            Path(path).write_bytes(text.encode("utf-8"))
        return text


def verify_bundle(text: str) -> list[EnforcementRecord]:
    """Parse a bundle and verify its hash; raises ValidationFailed on
    tampering or malformed structure."""
    try:
        obj = json.loads(text)
        manifest = obj["manifest"]
        records_json = obj["records"]
    except (ValueError, KeyError) as exc:
        raise ValidationFailed(f"malformed bundle: {exc}") from exc
    if manifest.get("record_count") != len(records_json):
        raise ValidationFailed("record_count does not match records")
    if manifest.get("content_hash") != content_hash(records_json):
        raise ValidationFailed("content hash mismatch")
    return [EnforcementRecord.from_json(r) for r in records_json]
