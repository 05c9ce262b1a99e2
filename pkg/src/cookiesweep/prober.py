"""Execution-role probing: click each control twice and watch what happens.

The criteria are a pure function of the gathered evidence, applied in fixed
priority order (A > B > C > D); statefulness is the strongest signal and the
criteria are not mutually exclusive as written, so the order matters.
UNKNOWN is the escape hatch for buggy notices — real pages have them.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from typing import Optional

from . import dom
from .audit import NULL_AUDIT, AuditLog
from .detector import ClassifierHandle, detect_notice
from .driver import ClickOutcome, ElementState, Session
from .errors import ExplorationBudgetExceeded, ProbeAborted
from .notice import InteractiveElement, NoticeModel, Role, View


@dataclass
class ProbeConfig:
    probe_click_gap_ms: int = 500
    max_view_depth: int = 2
    click_budget: int = 120


class Budget:
    """Counts every click the pipeline spends on a domain."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise ExplorationBudgetExceeded(
                f"click budget exhausted ({self.used}/{self.limit})"
            )


class Clicker:
    """Budgeted click wrapper with the inter-click settle gap."""

    def __init__(self, session: Session, budget: Budget, gap_ms: int):
        self.session = session
        self.budget = budget
        self.gap_ms = gap_ms

    def click(self, selector: dom.SelectorPath) -> ClickOutcome:
        self.budget.spend()
        outcome = self.session.click(selector)
        if self.gap_ms:
            time.sleep(self.gap_ms / 1000.0)
        return outcome

    def click_css(self, css: str) -> ClickOutcome:
        return self.click(dom.SelectorPath(css=css, strategy=dom.SelectorStrategy.BY_ATTR_COMBO))


@dataclass
class RoleEvidence:
    first_click: ClickOutcome
    second_click: ClickOutcome
    state_before: ElementState
    state_after_first: ElementState
    state_after_second: ElementState
    notice_gone_after_first: bool
    new_notice_detected: bool
    element_visible_after: bool
    new_notice_selector: Optional[str] = None
    low_confidence: bool = False

    @property
    def url_changed(self) -> bool:
        return self.first_click.url_changed or self.second_click.url_changed

    def to_dict(self) -> dict:
        return {
            "first_click": {
                "clicked": self.first_click.clicked,
                "error_kind": self.first_click.error_kind.value,
                "url_changed": self.first_click.url_changed,
                "new_tab_opened": self.first_click.new_tab_opened,
            },
            "second_click": {
                "clicked": self.second_click.clicked,
                "error_kind": self.second_click.error_kind.value,
                "url_changed": self.second_click.url_changed,
                "new_tab_opened": self.second_click.new_tab_opened,
            },
            "state_before": self.state_before.value,
            "state_after_first": self.state_after_first.value,
            "state_after_second": self.state_after_second.value,
            "notice_gone_after_first": self.notice_gone_after_first,
            "new_notice_detected": self.new_notice_detected,
            "new_notice_selector": self.new_notice_selector,
            "element_visible_after": self.element_visible_after,
            "low_confidence": self.low_confidence,
        }


def classify_evidence(ev: RoleEvidence) -> Role:
    """Map click-twice evidence to an execution role. Pure: replaying
    recorded evidence reproduces the assignment."""
    states = (ev.state_before, ev.state_after_first, ev.state_after_second)
    toggles = (
        all(s in (ElementState.SELECTED, ElementState.NOT_SELECTED) for s in states)
        and ev.state_before != ev.state_after_first
        and ev.state_after_first != ev.state_after_second
    )
    if ev.element_visible_after and toggles:
        return Role.TYPE_A
    if ev.notice_gone_after_first and ev.new_notice_detected:
        return Role.TYPE_B
    if ev.url_changed or ev.first_click.new_tab_opened:
        # Navigation is not one of the four roles; leave for the caller.
        return Role.UNKNOWN
    state_constant = ev.state_before == ev.state_after_first == ev.state_after_second
    if (
        ev.first_click.clicked
        and ev.second_click.clicked
        and state_constant
        and not ev.new_notice_detected
    ):
        return Role.TYPE_C
    if ev.first_click.clicked and not ev.second_click.clicked and not ev.new_notice_detected:
        return Role.TYPE_D
    return Role.UNKNOWN


def evidence_destructive(ev: RoleEvidence) -> bool:
    """Did the probe change page state in a way that needs restoration?"""
    return (
        ev.notice_gone_after_first
        or ev.new_notice_detected
        or not ev.second_click.clicked
        or ev.url_changed
        or ev.first_click.new_tab_opened
    )


def _notice_visible(session: Session, notice: dom.SelectorPath) -> tuple[bool, Optional[str]]:
    """(visible, node_id) for the notice container right now."""
    page = session.snapshot()
    for el in page.elements:
        if el.selector_path and el.selector_path.css == notice.css:
            return dom.is_visible(el), el.node_id
    # Selector may no longer regenerate identically; fall back to state query.
    state = session.query_state(notice)
    return state is not ElementState.GONE, None


def gather_evidence(
    session: Session,
    element: InteractiveElement,
    notice: dom.SelectorPath,
    detector: ClassifierHandle,
    gap_ms: int = 500,
) -> RoleEvidence:
    """Run the click-twice protocol on one element.

    Both clicks are always attempted, even when the first one already opened
    a new notice; the criteria are evaluated over the full evidence.
    """
    sel = element.selector
    state_before = session.query_state(sel)
    if state_before is ElementState.GONE:
        raise ProbeAborted(f"{sel.css!r} vanished before probing")

    pre_page = session.snapshot()
    original_notice_id = None
    for el in pre_page.elements:
        if el.selector_path and el.selector_path.css == notice.css:
            original_notice_id = el.node_id
            break

    first = session.click(sel)
    if gap_ms:
        time.sleep(gap_ms / 1000.0)
    post_page = session.snapshot()
    notice_el = next(
        (e for e in post_page.elements if e.node_id == original_notice_id), None
    )
    notice_gone = notice_el is None or not dom.is_visible(notice_el)
    new_notice_selector = None
    new_notice = False
    if not first.url_changed:
        try:
            candidate = detect_notice(post_page, detector)
        except Exception:
            candidate = None
        if candidate is not None and candidate.element.node_id != original_notice_id:
            new_notice = True
            new_notice_selector = (
                candidate.element.selector_path.css if candidate.element.selector_path else None
            )
    state_after_first = session.query_state(sel)

    second = session.click(sel)
    state_after_second = session.query_state(sel)

    return RoleEvidence(
        first_click=first,
        second_click=second,
        state_before=state_before,
        state_after_first=state_after_first,
        state_after_second=state_after_second,
        notice_gone_after_first=notice_gone,
        new_notice_detected=new_notice,
        new_notice_selector=new_notice_selector,
        element_visible_after=state_after_second is not ElementState.GONE,
    )


def restore_view(session: Session, url: str, view: View, model: NoticeModel, clicker: Clicker) -> None:
    """Fresh reset, then replay the click chain that opens this view."""
    session.reset(url)
    if model.frame_selector is not None:
        session.switch_frame(model.frame_selector)
    for css in view.replay_chain:
        clicker.click_css(css)


def restore_element(
    session: Session,
    url: str,
    element: InteractiveElement,
    view: View,
    model: NoticeModel,
    clicker: Clicker,
) -> None:
    restore_view(session, url, view, model, clicker)
    for css in element.reveal_chain:
        clicker.click_css(css)


def probe_role(
    session: Session,
    element: InteractiveElement,
    detector: ClassifierHandle,
    notice: dom.SelectorPath,
    gap_ms: int = 500,
) -> tuple[Role, RoleEvidence]:
    """Probe one element in place; the caller is responsible for having
    positioned the session at the element's view."""
    ev = gather_evidence(session, element, notice, detector, gap_ms)
    role = classify_evidence(ev)
    if role is Role.TYPE_C and ev.state_before is ElementState.STATELESS:
        # A decorative button matches the C criteria too; flag it.
        ev.low_confidence = True
    return role, ev


def probe_all(
    session: Session,
    model: NoticeModel,
    detector: ClassifierHandle,
    url: str,
    config: Optional[ProbeConfig] = None,
    audit: AuditLog = NULL_AUDIT,
) -> NoticeModel:
    """Annotate every element with a role; elements probed during
    exploration keep their recorded evidence. Ends with a reset so the
    session never stays in a consented state."""
    config = config or ProbeConfig()
    budget = Budget(config.click_budget)
    clicker = Clicker(session, budget, config.probe_click_gap_ms)
    for view in model.views:
        for element in view.elements:
            if element.role is not None:
                continue
            restore_element(session, url, element, view, model, clicker)
            budget.spend(2)
            role, ev = probe_role(session, element, detector, view.notice_selector, config.probe_click_gap_ms)
            element.role = role
            element.evidence = ev.to_dict()
            audit.record(
                domain=model.domain,
                view=element.view_index,
                tag=element.tag.rendered,
                action="probe",
                outcome=role.value,
                reason=json.dumps(element.evidence, sort_keys=True),
            )
    session.reset(url)
    return model
