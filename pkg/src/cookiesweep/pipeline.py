"""End-to-end per-domain pipeline: navigate, detect, explore, probe, decide,
and persist the enforcement record. Stage failures never raise — they come
back as ERROR records naming the failed stage."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from . import analyzer, decision, dom, prober
from .audit import NULL_AUDIT, AuditLog
from .db import EnforcementRecord, EnforcementStep, RecordStatus
from .detector import ClassifierHandle, NoticeCandidate, detect_notice
from .driver import ElementState, Session, open_session
from .notice import NoticeModel, Role

logger = logging.getLogger(__name__)

IFRAME_MIN_VIEWPORT_FRACTION = 0.10


@dataclass
class PipelineConfig:
    driver_endpoint: str
    region: str = "unspecified"
    url_scheme: str = "https"
    headless: bool = True
    page_load_timeout_ms: int = 30_000
    settle_delay_ms: int = 2000
    step_delay_ms: int = 1000
    classifier: ClassifierHandle = field(default_factory=ClassifierHandle)
    explore: analyzer.ExploreConfig = field(default_factory=analyzer.ExploreConfig)
    audit_path: Optional[Path] = None
    plan_provider: decision.PlanProvider = decision.PlanProvider.RULES
    plan_endpoint: Optional[str] = None
    # Returns True when the page is in a language we should analyze; only
    # consulted when english_only is set. Detection itself is external.
    english_only: bool = False
    language_hook: Callable[[dom.PageSnapshot], bool] = lambda page: True


def _find_notice(
    session: Session, page: dom.PageSnapshot, h: ClassifierHandle
) -> tuple[Optional[NoticeCandidate], Optional[dom.SelectorPath]]:
    """Detect on the top document first; then retry inside same-origin
    iframes covering more than 10% of the viewport (notices are routinely
    served out of CMP iframes)."""
    candidate = detect_notice(page, h)
    if candidate is not None:
        return candidate, None
    viewport = page.elements[0].bbox.area if page.elements else 0
    if not viewport:
        return None, None
    for el in page.elements:
        if el.tag_name != "iframe" or not dom.is_visible(el):
            continue
        if el.bbox.area / viewport < IFRAME_MIN_VIEWPORT_FRACTION:
            continue
        if el.selector_path is None:
            continue
        try:
            session.switch_frame(el.selector_path)
            frame_page = session.snapshot()
            candidate = detect_notice(frame_page, h)
        except Exception:
            candidate = None
        finally:
            if candidate is None:
                session.switch_frame(None)
        if candidate is not None:
            return candidate, el.selector_path
    return None, None


def model_status(model: NoticeModel) -> RecordStatus:
    """PLAN when anything is configurable or opt-out-flavored; otherwise the
    notice offers nothing but consent, which we never click on the user's
    behalf."""
    elements = model.all_elements()
    if not elements:
        return (
            RecordStatus.DEDICATED_PAGE
            if model.dedicated_page_filtered
            else RecordStatus.NO_NOTICE
        )
    roles = {el.role for el in elements}
    if roles & {Role.TYPE_A, Role.TYPE_B, Role.TYPE_C}:
        return RecordStatus.PLAN
    optout_semantics = {
        decision.LabelSemantics.REJECT_ALL,
        decision.LabelSemantics.ESSENTIAL_ONLY_POSITIVE,
        decision.LabelSemantics.NEGATED_CONSENT,
    }
    for el in elements:
        if el.role is Role.UNKNOWN:
            continue
        if decision.classify_label_semantics(el.label) in optout_semantics:
            return RecordStatus.PLAN
    return (
        RecordStatus.DEDICATED_PAGE
        if model.dedicated_page_filtered
        else RecordStatus.ACCEPT_ONLY
    )


def _steps_from_plan(
    model: NoticeModel, produced: decision.ClickPlan, delay_ms: int
) -> list[EnforcementStep]:
    steps = []
    for view_index, tag in produced.steps:
        element = model.element_by_index(tag.index)
        if element is None:
            continue
        expected = None
        if element.role is Role.TYPE_A:
            expected = (
                "selected" if element.state is ElementState.SELECTED else "not selected"
            )
        steps.append(
            EnforcementStep(
                view_index=view_index,
                tag_rendered=tag.rendered,
                selector=element.selector,
                expected_state_before=expected,
                delay_after_ms=delay_ms,
            )
        )
    return steps


def run_pipeline(
    domain: str,
    config: PipelineConfig,
    session: Optional[Session] = None,
    audit: Optional[AuditLog] = None,
) -> Optional[EnforcementRecord]:
    """Analyze one domain into an EnforcementRecord.

    Returns None when the english-only filter skips the page. Every other
    outcome is a record; failures carry status=ERROR plus the stage name.
    """
    record, _ = run_pipeline_detailed(domain, config, session=session, audit=audit)
    return record


def run_pipeline_detailed(
    domain: str,
    config: PipelineConfig,
    session: Optional[Session] = None,
    audit: Optional[AuditLog] = None,
) -> tuple[Optional[EnforcementRecord], Optional[NoticeModel]]:
    """run_pipeline, but also hands back the probed model for callers that
    inspect roles or views (measurement notebooks, the test oracle)."""
    audit = audit or (AuditLog(config.audit_path) if config.audit_path else NULL_AUDIT)
    url = f"{config.url_scheme}://{domain}/"
    owns_session = session is None
    stage = "open_session"
    try:
        if session is None:
            session = open_session(
                config.driver_endpoint,
                headless=config.headless,
                page_load_timeout_ms=config.page_load_timeout_ms,
                settle_delay_ms=config.settle_delay_ms,
            )
    except Exception as exc:
        logger.warning("%s: %s failed: %s", domain, stage, exc)
        return _error_record(domain, config, stage), None

    try:
        stage = "navigate"
        page = session.navigate(url)

        if config.english_only and not config.language_hook(page):
            logger.info("%s: skipped by language filter", domain)
            return None, None

        stage = "detect"
        candidate, frame_sel = _find_notice(session, page, config.classifier)
        if candidate is None:
            return _record(domain, config, RecordStatus.NO_NOTICE), None

        stage = "analyze"
        model = analyzer.explore_views(
            session,
            url,
            candidate,
            config.classifier,
            config=config.explore,
            audit=audit,
            frame_selector=frame_sel,
        )

        stage = "probe"
        probe_config = prober.ProbeConfig(
            probe_click_gap_ms=config.explore.probe_click_gap_ms,
            max_view_depth=config.explore.max_view_depth,
            click_budget=config.explore.click_budget,
        )
        prober.probe_all(session, model, config.classifier, url, probe_config, audit)

        stage = "decide"
        status = model_status(model)
        if status is not RecordStatus.PLAN:
            serialized_text = _serialize_or_empty(model)
            return (
                _record(
                    domain,
                    config,
                    status,
                    notice_selector=model.notice_selector,
                    serialized=serialized_text,
                ),
                model,
            )
        sn = decision.serialize(model)
        produced = decision.plan(
            sn, provider=config.plan_provider, endpoint=config.plan_endpoint
        )
        if produced.status is decision.PlanStatus.NO_OPT_OUT:
            return (
                _record(
                    domain,
                    config,
                    RecordStatus.ACCEPT_ONLY,
                    notice_selector=model.notice_selector,
                    serialized=sn.text,
                ),
                model,
            )
        return (
            _record(
                domain,
                config,
                RecordStatus.PLAN,
                notice_selector=model.notice_selector,
                serialized=sn.text,
                plan_text=produced.rendered,
                steps=_steps_from_plan(model, produced, config.step_delay_ms),
            ),
            model,
        )
    except Exception as exc:
        logger.warning("%s: stage %s failed: %s", domain, stage, exc)
        return _error_record(domain, config, stage), None
    finally:
        if owns_session and session is not None:
            session.close()


def _serialize_or_empty(model: NoticeModel) -> str:
    try:
        return decision.serialize(model).text
    except Exception:
        return ""


def _record(
    domain: str,
    config: PipelineConfig,
    status: RecordStatus,
    notice_selector=None,
    serialized: str = "",
    plan_text: str = "",
    steps: Optional[list[EnforcementStep]] = None,
) -> EnforcementRecord:
    return EnforcementRecord(
        domain=domain.lower(),
        region=config.region,
        status=status,
        notice_selector=notice_selector,
        steps=steps or [],
        serialized_notice=serialized,
        plan_text=plan_text,
    )


def _error_record(domain: str, config: PipelineConfig, stage: str) -> EnforcementRecord:
    return EnforcementRecord(
        domain=domain.lower(),
        region=config.region,
        status=RecordStatus.ERROR,
        error_stage=stage,
    )
