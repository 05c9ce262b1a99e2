"""JSON-lines audit trail for probes and filtering decisions."""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Optional


class AuditLog:
    """Appends one JSON object per line; in-memory when no path is given."""

    def __init__(self, path: Optional[Path] = None):
        self.path = Path(path) if path else None
        self.records: list[dict] = []
        self._lock = threading.Lock()

    def record(self, domain: str, view: int, tag: str, action: str, outcome: str, reason: str = "") -> None:
        entry = {
            "domain": domain,
            "view": view,
            "tag": tag,
            "action": action,
            "outcome": outcome,
            "reason": reason,
        }
        with self._lock:
            self.records.append(entry)
            if self.path:
                with open(self.path, "a", encoding="utf-8") as fh:
                    fh.write(json.dumps(entry) + "\n")


NULL_AUDIT = AuditLog()
