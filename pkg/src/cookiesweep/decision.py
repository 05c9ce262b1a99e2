"""Decision engine: serialize a probed notice model to the single-line text
form, decide the clicks that disable non-essential cookies, and parse plans
back into executable steps.

Input grammar (one line per notice):

    input := view (" ** " view)* " <end>"
    view  := entry (" || " entry)*
    entry := rendered_tag " - " label (", " state)?     # state iff switch
    state := "selected" | "not selected"

Output grammar:

    output := viewplan (" ** " viewplan)* "."
    viewplan := "Click " tag (" | " "Click " tag)*

The default provider is a deterministic rule procedure; an external
sequence-to-sequence service can be plugged in via ``PlanProvider.EXTERNAL``
and the same wire contract the serializer feeds.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import requests

from .errors import (
    EmptyModel,
    NoticeSyntaxError,
    PlanRejected,
    PlanSyntaxError,
    UnknownTag,
)
from .notice import ElementTag, NoticeModel, Role, TagKind
from .driver import ElementState


class LabelSemantics(str, Enum):
    REJECT_ALL = "REJECT_ALL"
    ACCEPT_ALL = "ACCEPT_ALL"
    SAVE_CONFIRM = "SAVE_CONFIRM"
    MORE_OPTIONS = "MORE_OPTIONS"
    ESSENTIAL_ONLY_POSITIVE = "ESSENTIAL_ONLY_POSITIVE"
    NEGATED_CONSENT = "NEGATED_CONSENT"
    NEUTRAL = "NEUTRAL"


class PlanProvider(str, Enum):
    RULES = "RULES"
    EXTERNAL = "EXTERNAL"


class PlanStatus(str, Enum):
    PLAN = "PLAN"
    NO_OPT_OUT = "NO_OPT_OUT"


# --- label semantics -------------------------------------------------

_ESSENTIAL_WORDS = ("strictly necessary", "necessary", "essential", "required")

_NEGATION_RE = re.compile(r"\b(do not|don'?t|never)\b.{0,40}\b(allow|sell|share|track|use|accept|enable)\b")

_REJECT_MARKERS = (
    "reject",
    "decline",
    "refuse",
    "deny",
    "disagree",
    "opt out",
    "opt-out",
    "no thanks",
    "no, thanks",
    "sorry",
    "on a diet",
    "without accepting",
    "without agreeing",
    "disable all",
    "turn off all",
)

_SAVE_VERBS = ("save", "confirm", "submit", "apply")
_SAVE_QUALIFIED = re.compile(
    r"\b(accept|allow)\b.{0,24}\b(selection|selected|choices|preferences|current)\b"
)

_MORE_MARKERS = (
    "more information",
    "more options",
    "more choices",
    "learn more",
    "show purposes",
    "select purposes",
    "manage",
    "customize",
    "customise",
    "configure",
    "personalize",
    "personalise",
    "settings",
    "options",
    "preferences",
    "let me choose",
    "adjust",
)

_ACCEPT_RE = re.compile(
    r"\b(accept|agree|allow|consent|yes|ok|okay|sure|sweet|understood|enable all|got it|sounds good|i'?m in)\b"
)
_ACCEPT_MAX_TOKENS = 5


def classify_label_semantics(label: str) -> LabelSemantics:
    """Deterministic lexicon classification of a (lowercased) control label.

    NEGATED_CONSENT covers "do not allow/sell ..." phrasings where SELECTED
    means cookies disabled; ESSENTIAL_ONLY_POSITIVE covers "only necessary"
    phrasings. Order matters: negated and essential-only phrasings contain
    accept vocabulary.
    """
    text = " ".join(label.lower().split())
    tokens = text.split(" ") if text else []
    if not tokens:
        return LabelSemantics.NEUTRAL

    if "only" in text and any(w in text for w in _ESSENTIAL_WORDS):
        return LabelSemantics.ESSENTIAL_ONLY_POSITIVE
    if _NEGATION_RE.search(text):
        return LabelSemantics.NEGATED_CONSENT
    if any(marker in text for marker in _REJECT_MARKERS):
        return LabelSemantics.REJECT_ALL
    if any(re.search(rf"\b{v}\b", text) for v in _SAVE_VERBS) or _SAVE_QUALIFIED.search(text):
        return LabelSemantics.SAVE_CONFIRM
    if any(marker in text for marker in _MORE_MARKERS):
        return LabelSemantics.MORE_OPTIONS
    if len(tokens) <= _ACCEPT_MAX_TOKENS and _ACCEPT_RE.search(text):
        return LabelSemantics.ACCEPT_ALL
    return LabelSemantics.NEUTRAL


def is_essential_category(label: str) -> bool:
    """Switches for strictly-necessary cookies are never toggled."""
    text = label.lower()
    sem = classify_label_semantics(label)
    if sem in (LabelSemantics.NEGATED_CONSENT, LabelSemantics.ESSENTIAL_ONLY_POSITIVE):
        return False
    return any(w in text for w in _ESSENTIAL_WORDS) and "non-essential" not in text


# --- serialized form --------------------------------------------------


@dataclass(frozen=True)
class Entry:
    tag: ElementTag
    label: str
    selected: Optional[bool] = None  # present iff switch

    def render(self) -> str:
        if self.tag.kind is TagKind.SWITCH:
            state = "selected" if self.selected else "not selected"
            return f"{self.tag.rendered} - {self.label}, {state}"
        return f"{self.tag.rendered} - {self.label}"


@dataclass
class SerializedNotice:
    text: str
    entry_views: list[list[Entry]]
    model_ref: Optional[NoticeModel] = None

    def entry_count(self) -> int:
        return sum(len(v) for v in self.entry_views)


def serialize(model: NoticeModel) -> SerializedNotice:
    """Render the probed model in discovery order. Switch entries carry
    their state; UNKNOWN-role elements are left out entirely."""
    views_out: list[list[Entry]] = []
    for view in model.views:
        entries: list[Entry] = []
        for el in view.elements:
            if el.role is None:
                raise PlanRejected(f"element #{el.tag_index} has no role; probe first")
            if el.role is Role.UNKNOWN:
                continue
            selected = None
            if el.role is Role.TYPE_A:
                selected = el.state is ElementState.SELECTED
            entries.append(Entry(tag=el.tag, label=el.label.lower(), selected=selected))
        if entries:
            views_out.append(entries)
    if not views_out:
        raise EmptyModel(f"nothing to serialize for {model.domain}")
    text = " ** ".join(
        " || ".join(entry.render() for entry in entries) for entries in views_out
    )
    return SerializedNotice(text=f"{text} <end>", entry_views=views_out, model_ref=model)


_ENTRY_RE = re.compile(r"^(button\d+|switch\d+)\s*-\s*(.*)$", re.DOTALL)
_STATE_RE = re.compile(r"^(.*?)\s*,\s*(selected|not selected)\s*$", re.DOTALL)


def parse_serialized(text: str) -> SerializedNotice:
    """Parse input-grammar text back into entries. Tolerates duplicated
    spaces and a missing terminator; strict about tags and switch states."""
    body = text.strip()
    if body.endswith("<end>"):
        body = body[: -len("<end>")].strip()
    if not body:
        raise NoticeSyntaxError("empty serialized notice")
    entry_views: list[list[Entry]] = []
    for view_text in body.split("**"):
        entries: list[Entry] = []
        for raw in view_text.split("||"):
            raw = raw.strip()
            if not raw:
                raise NoticeSyntaxError(f"empty entry in {view_text!r}")
            m = _ENTRY_RE.match(raw)
            if not m:
                raise NoticeSyntaxError(f"bad entry: {raw!r}")
            tag = ElementTag.parse(m.group(1))
            rest = " ".join(m.group(2).split())
            selected: Optional[bool] = None
            if tag.kind is TagKind.SWITCH:
                sm = _STATE_RE.match(rest)
                if not sm:
                    raise NoticeSyntaxError(f"switch entry lacks state: {raw!r}")
                rest = sm.group(1)
                selected = sm.group(2) == "selected"
            entries.append(Entry(tag=tag, label=rest, selected=selected))
        if not entries:
            raise NoticeSyntaxError("empty view")
        entry_views.append(entries)
    return SerializedNotice(text=text, entry_views=entry_views, model_ref=None)


# --- click plans -------------------------------------------------------


@dataclass
class ClickPlan:
    steps: list[tuple[int, ElementTag]] = field(default_factory=list)
    status: PlanStatus = PlanStatus.PLAN

    @property
    def rendered(self) -> str:
        if not self.steps:
            return ""
        by_view: dict[int, list[ElementTag]] = {}
        for view_index, tag in self.steps:
            by_view.setdefault(view_index, []).append(tag)
        parts = [
            " | ".join(f"Click {tag.rendered}" for tag in by_view[v])
            for v in sorted(by_view)
        ]
        return " ** ".join(parts) + "."

    def switch_clicks(self) -> list[ElementTag]:
        return [tag for _, tag in self.steps if tag.kind is TagKind.SWITCH]


def parse_plan(text: str, model: Union[NoticeModel, SerializedNotice]) -> ClickPlan:
    """Strict output-grammar parse; tolerates a trailing period and repeated
    spaces. Tags bind by index within the viewplan's position-aligned view —
    kind-leniently, since published plans are sloppy about button/switch."""
    cleaned = text.strip()
    if cleaned.endswith("."):
        cleaned = cleaned[:-1]
    cleaned = cleaned.strip()
    if not cleaned:
        raise PlanSyntaxError("empty plan text")
    entry_views = _views_of(model)
    steps: list[tuple[int, ElementTag]] = []
    viewplans = cleaned.split("**")
    if len(viewplans) > len(entry_views):
        raise UnknownTag(
            f"plan has {len(viewplans)} viewplans but model has {len(entry_views)} views"
        )
    for view_index, viewplan in enumerate(viewplans):
        for raw in viewplan.split("|"):
            raw = " ".join(raw.split())
            if not raw:
                raise PlanSyntaxError(f"empty step in viewplan {view_index}")
            if not raw.lower().startswith("click "):
                raise PlanSyntaxError(f"step does not start with Click: {raw!r}")
            tag_text = raw[len("click ") :].strip()
            try:
                parsed = ElementTag.parse(tag_text)
            except ValueError as exc:
                raise PlanSyntaxError(str(exc)) from exc
            bound = _bind_tag(entry_views[view_index], parsed)
            if bound is None:
                raise UnknownTag(f"{tag_text} not in view {view_index}")
            steps.append((view_index, bound))
    return ClickPlan(steps=steps)


def _views_of(model: Union[NoticeModel, SerializedNotice]) -> list[list[Entry]]:
    if isinstance(model, SerializedNotice):
        return model.entry_views
    return serialize(model).entry_views


def _bind_tag(entries: list[Entry], parsed: ElementTag) -> Optional[ElementTag]:
    for entry in entries:
        if entry.tag.index == parsed.index:
            return entry.tag
    return None


# --- planning ----------------------------------------------------------


def plan(
    sn: SerializedNotice,
    provider: PlanProvider = PlanProvider.RULES,
    endpoint: Optional[str] = None,
    timeout_s: float = 10.0,
) -> ClickPlan:
    """Compute the click sequence that disables non-essential cookies.

    An accept-only notice yields an empty plan with NO_OPT_OUT status:
    accepting on the user's behalf is never the right default, so the
    notice is left alone.
    """
    if _accept_only(sn):
        return ClickPlan(steps=[], status=PlanStatus.NO_OPT_OUT)
    if provider is PlanProvider.EXTERNAL:
        produced = _external_plan(sn, endpoint, timeout_s)
    else:
        produced = _rules_plan(sn)
    if produced.status is PlanStatus.NO_OPT_OUT:
        return produced
    _validate(produced, sn)
    return produced


_OPTOUT_SEMANTICS = (
    LabelSemantics.REJECT_ALL,
    LabelSemantics.ESSENTIAL_ONLY_POSITIVE,
    LabelSemantics.NEGATED_CONSENT,
)


def _accept_only(sn: SerializedNotice) -> bool:
    """Nothing configurable and nothing opt-out-flavored: all the notice
    offers is consent."""
    if sn.model_ref is not None:
        roles = {el.role for el in sn.model_ref.all_elements()}
        if not roles & {Role.TYPE_A, Role.TYPE_B, Role.TYPE_C}:
            return not any(
                classify_label_semantics(entry.label) in _OPTOUT_SEMANTICS
                for entries in sn.entry_views
                for entry in entries
            )
    if sn.entry_count() == 1:
        only = sn.entry_views[0][0]
        if only.tag.kind is TagKind.BUTTON and classify_label_semantics(only.label) in (
            LabelSemantics.ACCEPT_ALL,
            LabelSemantics.NEUTRAL,
        ):
            return True
    return False


def _view_buttons(entries: list[Entry], wanted: LabelSemantics) -> Optional[Entry]:
    for e in entries:
        if e.tag.kind is TagKind.BUTTON and classify_label_semantics(e.label) is wanted:
            return e
    return None


def _view_actions(sn: SerializedNotice, view_index: int) -> list[ElementTag]:
    """Toggle and objection clicks this view needs, reveal clicks included."""
    out: list[ElementTag] = []
    for entry in sn.entry_views[view_index]:
        if entry.tag.kind is TagKind.SWITCH:
            if _switch_needs_click(sn, entry):
                out.extend(t for t in _reveal_steps(sn, view_index, entry, out) if t not in out)
                out.append(entry.tag)
        elif "object to legitimate interest" in entry.label:
            out.append(entry.tag)
    return out


def _rules_plan(sn: SerializedNotice) -> ClickPlan:
    views = sn.entry_views
    view0 = views[0]
    buttons0 = [e for e in view0 if e.tag.kind is TagKind.BUTTON]
    switches0 = [e for e in view0 if e.tag.kind is TagKind.SWITCH]
    sem0 = {e.tag.index: classify_label_semantics(e.label) for e in view0}

    # Direct opt-out on the first view wins: a user offered "reject" there
    # would never open more options.
    for entry in buttons0:
        if sem0[entry.tag.index] in (
            LabelSemantics.REJECT_ALL,
            LabelSemantics.ESSENTIAL_ONLY_POSITIVE,
            LabelSemantics.NEGATED_CONSENT,
        ):
            return ClickPlan(steps=[(0, entry.tag)])

    # Two-button banner with one accept: click the other one.
    if len(buttons0) == 2 and not switches0:
        accepts = [e for e in buttons0 if sem0[e.tag.index] is LabelSemantics.ACCEPT_ALL]
        if len(accepts) == 1:
            other = next(e for e in buttons0 if e is not accepts[0])
            if sem0[other.tag.index] not in (
                LabelSemantics.MORE_OPTIONS,
                LabelSemantics.SAVE_CONFIRM,
            ):
                return ClickPlan(steps=[(0, other.tag)])

    # Walk views front to back. Each view gets its toggles and objections;
    # we continue through a MORE_OPTIONS opener only while a later view is
    # worth reaching, and close with the save of the view we stop in. This
    # never leaves a gap in the viewplan sequence, which the output grammar
    # could not express.
    steps: list[tuple[int, ElementTag]] = []
    any_action = False
    for view_index in range(len(views)):
        entries = views[view_index]
        view_steps = _view_actions(sn, view_index)
        if view_steps:
            any_action = True
        opener = _view_buttons(entries, LabelSemantics.MORE_OPTIONS)
        save = _view_buttons(entries, LabelSemantics.SAVE_CONFIRM)
        later_worth_it = opener is not None and any(
            _view_actions(sn, j) or _view_buttons(views[j], LabelSemantics.SAVE_CONFIRM)
            for j in range(view_index + 1, len(views))
        )
        if later_worth_it:
            view_steps.append(opener.tag)
            steps.extend((view_index, tag) for tag in view_steps)
            continue
        has_switches = any(e.tag.kind is TagKind.SWITCH for e in entries)
        if save is not None and (view_steps or has_switches or view_index > 0):
            # Confirm even when every switch already sits in its disabled
            # state: defaults are not persisted until saved.
            view_steps.append(save.tag)
        steps.extend((view_index, tag) for tag in view_steps)
        break

    if not steps:
        return ClickPlan(steps=[], status=PlanStatus.NO_OPT_OUT)
    return ClickPlan(steps=steps)


def _switch_needs_click(sn: SerializedNotice, entry: Entry) -> bool:
    """Should this switch be toggled to reach its disabled semantic state?

    Positive-consent switches are clicked when selected; negated or
    essential-only phrasings are clicked when NOT selected (selecting them
    is what disables cookies). Essential-category switches are never
    touched."""
    sem = classify_label_semantics(entry.label)
    if sem in (LabelSemantics.NEGATED_CONSENT, LabelSemantics.ESSENTIAL_ONLY_POSITIVE):
        return entry.selected is False
    if is_essential_category(entry.label):
        return False
    return entry.selected is True


def _reveal_steps(
    sn: SerializedNotice, view_index: int, entry: Entry, already: list[ElementTag]
) -> list[ElementTag]:
    """Type C clicks required before a dynamically revealed switch."""
    if sn.model_ref is None:
        return []
    element = sn.model_ref.element_by_index(entry.tag.index)
    if element is None or not element.reveal_chain:
        return []
    out: list[ElementTag] = []
    for css in element.reveal_chain:
        revealer = next(
            (
                el
                for el in sn.model_ref.views[view_index].elements
                if el.selector.css == css
            ),
            None,
        )
        if revealer is None:
            continue
        tag = revealer.tag
        if tag not in already and tag not in out:
            out.append(tag)
    return out


def _external_plan(sn: SerializedNotice, endpoint: Optional[str], timeout_s: float) -> ClickPlan:
    if not endpoint:
        raise PlanRejected("EXTERNAL provider requires an endpoint")
    try:
        resp = requests.post(endpoint, json={"input": sn.text}, timeout=timeout_s)
        resp.raise_for_status()
        output = resp.json()["output"]
    except (requests.RequestException, ValueError, KeyError) as exc:
        raise PlanRejected(f"external planner unavailable: {exc}") from exc
    return parse_plan(output, sn)


def _validate(produced: ClickPlan, sn: SerializedNotice) -> None:
    entry_views = sn.entry_views
    by_view: dict[int, list[ElementTag]] = {}
    for view_index, tag in produced.steps:
        if view_index >= len(entry_views):
            raise PlanRejected(f"step references missing view {view_index}")
        entries = entry_views[view_index]
        if all(e.tag.index != tag.index for e in entries):
            raise PlanRejected(f"{tag.rendered} not present in view {view_index}")
        by_view.setdefault(view_index, []).append(tag)
    if sn.model_ref is not None:
        for view_index, tags in by_view.items():
            d_positions = [
                i
                for i, tag in enumerate(tags)
                if _role_of(sn.model_ref, tag) is Role.TYPE_D
            ]
            if len(d_positions) > 1 or (d_positions and d_positions[0] != len(tags) - 1):
                raise PlanRejected("a viewplan may contain at most one Type D tag, last")


def _role_of(model: NoticeModel, tag: ElementTag) -> Optional[Role]:
    element = model.element_by_index(tag.index)
    return element.role if element else None
