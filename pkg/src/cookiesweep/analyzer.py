"""Notice analysis: mimic a user to enumerate every control across views.

Interactive elements come from the accessibility tab order, supplemented
with hidden input/button/anchor descendants (styled-switch markup hides the
real checkbox). Clicking each discovered element uncovers views (Type B)
and dynamically injected settings (Type C); outbound links are filtered so
the model only contains controls that stay on the page.

State restoration between destructive probes is reset-plus-replay of the
click chain that opened the element's view: the only strategy that stays
correct for consent-keyed banners.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Optional
from urllib.parse import urljoin, urlparse

from . import decision, dom, prober
from .audit import NULL_AUDIT, AuditLog
from .detector import ClassifierHandle, NoticeCandidate, detect_notice
from .driver import ElementState, Session
from .errors import ContainerGone, ProbeAborted
from .notice import Discovery, InteractiveElement, NoticeModel, Role, View

LABEL_MAX_CHARS = 120

_SUPPLEMENT_TAGS = ("input", "button", "a")


@dataclass
class ExploreConfig:
    max_view_depth: int = 2
    click_budget: int = 120
    probe_click_gap_ms: int = 500


def extract_label(page: dom.PageSnapshot, el: dom.ElementSnapshot) -> str:
    """Text describing a control: aria-label when present, otherwise the
    text-bearing element nearest on screen within the closest text-holding
    ancestor. Lowercased, whitespace-collapsed, capped at 120 chars."""
    if page.get(el.node_id) is None:
        raise ValueError(f"element {el.node_id} not in page")
    aria = el.attr("aria-label").strip()
    if aria:
        return _clean_label(aria)

    ancestor: Optional[dom.ElementSnapshot] = el
    while ancestor is not None:
        bearers = [
            node
            for node in page.subtree(ancestor)
            if node.own_text.strip() and (dom.is_visible(node) or node is el)
        ]
        if bearers:
            cx, cy = el.bbox.center
            best = min(
                bearers,
                key=lambda n: math.hypot(n.bbox.center[0] - cx, n.bbox.center[1] - cy),
            )
            return _clean_label(best.own_text)
        ancestor = page.parent_of(ancestor)
    return ""


def _clean_label(text: str) -> str:
    cleaned = " ".join(text.split()).lower()
    return cleaned[:LABEL_MAX_CHARS]


def _raw_controls(
    session: Session, notice: dom.SelectorPath, page: dom.PageSnapshot
) -> list[tuple[dom.ElementSnapshot, Discovery]]:
    """Tab-order elements plus hidden input/button/anchor descendants,
    deduplicated by node id, discovery order preserved."""
    container = next(
        (
            e
            for e in page.elements
            if e.selector_path and e.selector_path.css == notice.css
        ),
        None,
    )
    if container is None or not dom.is_visible(container):
        raise ContainerGone(f"notice {notice.css!r} is gone")

    tabbed = session.tab_cycle(notice)
    out: list[tuple[dom.ElementSnapshot, Discovery]] = []
    seen: set[str] = set()
    for el in tabbed:
        if el.node_id not in seen:
            seen.add(el.node_id)
            out.append((el, Discovery.TABBED))
    for el in page.descendants_of(container):
        if el.node_id in seen:
            continue
        if el.tag_name not in _SUPPLEMENT_TAGS:
            continue
        if el.tag_name == "input" and el.attr("type") == "hidden":
            continue  # form data, not a control
        if dom.is_visible(el):
            continue
        seen.add(el.node_id)
        out.append((el, Discovery.HIDDEN_SUPPLEMENT))
    return out


def discover_elements(
    session: Session,
    notice: dom.SelectorPath,
    page: Optional[dom.PageSnapshot] = None,
    view_index: int = 0,
    counter: Optional[itertools.count] = None,
    reveal_chain: Optional[list[str]] = None,
    skip_css: Optional[set[str]] = None,
) -> list[InteractiveElement]:
    """Build InteractiveElements for every control currently reachable in
    the notice, each with its live state and extracted label. Controls whose
    selector is in ``skip_css`` are already known and consume no tag index."""
    page = page or session.snapshot()
    counter = counter if counter is not None else itertools.count()
    skip_css = skip_css or set()
    elements: list[InteractiveElement] = []
    for snapshot_el, discovery in _raw_controls(session, notice, page):
        if snapshot_el.selector_path is None:
            continue
        if snapshot_el.selector_path.css in skip_css:
            continue
        state = session.query_state(snapshot_el.selector_path)
        if state is ElementState.GONE and discovery is Discovery.TABBED:
            continue
        if state is ElementState.GONE:
            state = ElementState.STATELESS
        elements.append(
            InteractiveElement(
                snapshot=snapshot_el,
                label=extract_label(page, snapshot_el),
                state=state,
                view_index=view_index,
                discovery=discovery,
                tag_index=next(counter),
                reveal_chain=list(reveal_chain or []),
            )
        )
    return elements


def _same_document(href: str, base_url: str) -> bool:
    resolved = urljoin(base_url, href)
    a, b = urlparse(resolved), urlparse(base_url)
    return (a.scheme, a.netloc, a.path.rstrip("/")) == (b.scheme, b.netloc, b.path.rstrip("/"))


def filter_outbound(
    session: Session,
    elements: list[InteractiveElement],
    *,
    url: str,
    view: View,
    model: NoticeModel,
    clicker: prober.Clicker,
    audit: AuditLog = NULL_AUDIT,
) -> list[InteractiveElement]:
    """Drop controls that leave the page: statically for anchors with
    resolvable hrefs and target=_blank, by probe click for the rest.
    Stateful settings are never outbound and are never touched."""
    kept: list[InteractiveElement] = []
    needs_restore = False
    for el in elements:
        if el.stateful:
            kept.append(el)
            continue
        tag = el.snapshot.tag_name
        target_blank = el.snapshot.attr("target") == "_blank"
        href = el.snapshot.attr("href")
        if target_blank:
            _audit_removed(audit, model, el, "target=_blank")
            continue
        if tag == "a" and href and not href.startswith(("#", "javascript:")):
            if _same_document(href, url):
                kept.append(el)
            else:
                _audit_removed(audit, model, el, f"href to {href}")
            continue
        # Ambiguous: probe one click and watch for navigation.
        if needs_restore:
            prober.restore_element(session, url, el, view, model, clicker)
        outcome = clicker.click(el.selector)
        needs_restore = True
        if outcome.url_changed or outcome.new_tab_opened:
            reason = "opened new tab" if outcome.new_tab_opened else "navigated away"
            _audit_removed(audit, model, el, reason)
            if decision.classify_label_semantics(el.label) is decision.LabelSemantics.MORE_OPTIONS:
                model.dedicated_page_filtered = True
            prober.restore_view(session, url, view, model, clicker)
            needs_restore = False
            continue
        kept.append(el)
    if needs_restore:
        prober.restore_view(session, url, view, model, clicker)
    return kept


def _audit_removed(audit: AuditLog, model: NoticeModel, el: InteractiveElement, reason: str) -> None:
    audit.record(
        domain=model.domain,
        view=el.view_index,
        tag=f"#{el.tag_index}",
        action="filter_outbound",
        outcome="removed",
        reason=reason,
    )


def explore_views(
    session: Session,
    url: str,
    notice: NoticeCandidate,
    h: ClassifierHandle,
    config: Optional[ExploreConfig] = None,
    audit: AuditLog = NULL_AUDIT,
    frame_selector: Optional[dom.SelectorPath] = None,
) -> NoticeModel:
    """Build the full multi-view model by probing every element.

    Type B elements open new views (explored recursively up to
    max_view_depth); Type C elements merge the settings they reveal into
    their own view with discovery=DYNAMIC. Every element leaves with a role
    and evidence attached, so a later probe_all pass is a no-op."""
    config = config or ExploreConfig()
    if notice.element.selector_path is None:
        raise ContainerGone("detected notice carries no selector")
    budget = prober.Budget(config.click_budget)
    clicker = prober.Clicker(session, budget, config.probe_click_gap_ms)
    model = NoticeModel(
        domain=domain_of(url),
        views=[],
        notice_selector=notice.element.selector_path,
        frame_selector=frame_selector,
    )
    counter = itertools.count()
    seen_css: set[str] = set()
    _explore_one_view(
        session=session,
        url=url,
        model=model,
        notice_sel=notice.element.selector_path,
        opened_by=None,
        replay_chain=[],
        depth=0,
        h=h,
        config=config,
        audit=audit,
        clicker=clicker,
        budget=budget,
        counter=counter,
        seen_css=seen_css,
    )
    return model


def _explore_one_view(
    *,
    session: Session,
    url: str,
    model: NoticeModel,
    notice_sel: dom.SelectorPath,
    opened_by: Optional[tuple[int, int]],
    replay_chain: list[str],
    depth: int,
    h: ClassifierHandle,
    config: ExploreConfig,
    audit: AuditLog,
    clicker: prober.Clicker,
    budget: prober.Budget,
    counter: itertools.count,
    seen_css: set[str],
) -> None:
    view = View(
        elements=[],
        notice_selector=notice_sel,
        opened_by=opened_by,
        replay_chain=list(replay_chain),
    )
    model.views.append(view)
    view_index = len(model.views) - 1

    page = session.snapshot()
    fresh = discover_elements(
        session,
        notice_sel,
        page=page,
        view_index=view_index,
        counter=counter,
        skip_css=seen_css,
    )
    for el in fresh:
        seen_css.add(el.selector.css)
    view.elements = filter_outbound(
        session, fresh, url=url, view=view, model=model, clicker=clicker, audit=audit
    )

    i = 0
    while i < len(view.elements):
        element = view.elements[i]
        i += 1
        if element.role is not None:
            continue
        prober.restore_element(session, url, element, view, model, clicker)
        budget.spend(2)
        try:
            role, ev = prober.probe_role(
                session, element, h, notice_sel, config.probe_click_gap_ms
            )
        except ProbeAborted:
            # Element vanished between discovery and probing; keep it out of
            # planning but keep exploring.
            element.role = Role.UNKNOWN
            element.evidence = {"aborted": True}
            audit.record(
                domain=model.domain,
                view=view_index,
                tag=element.tag.rendered,
                action="probe",
                outcome="ABORTED",
                reason="element vanished",
            )
            continue
        element.role = role
        element.evidence = ev.to_dict()
        audit.record(
            domain=model.domain,
            view=view_index,
            tag=element.tag.rendered,
            action="probe",
            outcome=role.value,
            reason=json.dumps(element.evidence, sort_keys=True),
        )

        if role is Role.TYPE_B and depth < config.max_view_depth:
            prober.restore_element(session, url, element, view, model, clicker)
            clicker.click(element.selector)
            post = session.snapshot()
            candidate = detect_notice(post, h)
            if candidate is not None and candidate.element.selector_path is not None:
                new_sel = candidate.element.selector_path
                if new_sel.css != notice_sel.css:
                    _explore_one_view(
                        session=session,
                        url=url,
                        model=model,
                        notice_sel=new_sel,
                        opened_by=(view_index, element.tag_index),
                        replay_chain=replay_chain
                        + element.reveal_chain
                        + [element.selector.css],
                        depth=depth + 1,
                        h=h,
                        config=config,
                        audit=audit,
                        clicker=clicker,
                        budget=budget,
                        counter=counter,
                        seen_css=seen_css,
                    )
        elif role is Role.TYPE_C:
            prober.restore_element(session, url, element, view, model, clicker)
            clicker.click(element.selector)
            post = session.snapshot()
            revealed = discover_elements(
                session,
                notice_sel,
                page=post,
                view_index=view_index,
                counter=counter,
                reveal_chain=element.reveal_chain + [element.selector.css],
                skip_css=seen_css,
            )
            merged = []
            for el2 in revealed:
                seen_css.add(el2.selector.css)
                el2.discovery = Discovery.DYNAMIC
                merged.append(el2)
            if merged:
                merged = filter_outbound(
                    session,
                    merged,
                    url=url,
                    view=view,
                    model=model,
                    clicker=clicker,
                    audit=audit,
                )
                view.elements.extend(merged)


def domain_of(url: str) -> str:
    return urlparse(url).netloc.split(":")[0].lower()
