"""Convenience harness: run the real pipeline against the packaged corpus
through an in-process wire server. Shared by the CLI and the test suite."""

from __future__ import annotations

from typing import Optional

from ..analyzer import ExploreConfig
from ..db import EnforcementDb, EnforcementRecord
from ..notice import NoticeModel
from ..pipeline import PipelineConfig, run_pipeline_detailed
from .server import FixtureDriverServer, serve_driver
from .sim import SimSite, load_corpus

# Simulated pages settle instantly; fixture appear_after delays stay well
# under this.
SIM_SETTLE_MS = 60
SIM_CLICK_GAP_MS = 2


def corpus_pipeline_config(endpoint: str, **overrides) -> PipelineConfig:
    config = PipelineConfig(
        driver_endpoint=endpoint,
        region=overrides.pop("region", "test"),
        url_scheme="http",
        settle_delay_ms=SIM_SETTLE_MS,
        page_load_timeout_ms=5000,
        explore=ExploreConfig(probe_click_gap_ms=SIM_CLICK_GAP_MS),
    )
    for key, value in overrides.items():
        setattr(config, key, value)
    return config


def analyze_corpus(
    corpus: Optional[dict[str, SimSite]] = None,
    db: Optional[EnforcementDb] = None,
    region: str = "test",
    server: Optional[FixtureDriverServer] = None,
    keep_models: bool = False,
):
    """Pipeline every corpus site; returns records keyed by domain (and the
    probed models too when keep_models is set), storing records when a db is
    given."""
    corpus = corpus or load_corpus()
    own_server = server is None
    if server is None:
        server = serve_driver(corpus)
    try:
        config = corpus_pipeline_config(server.endpoint, region=region)
        records: dict[str, EnforcementRecord] = {}
        models: dict[str, Optional[NoticeModel]] = {}
        for domain in sorted(corpus):
            record, model = run_pipeline_detailed(domain, config)
            assert record is not None
            records[domain] = record
            models[domain] = model
            if db is not None:
                db.put(record)
        if keep_models:
            return records, models
        return records
    finally:
        if own_server:
            server.shutdown()
