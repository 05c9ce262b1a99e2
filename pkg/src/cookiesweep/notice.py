"""Shared model of an analyzed cookie notice.

Kept separate so the analyzer, role prober, and decision engine can all
import these types without depending on each other.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from . import dom
from .driver import ElementState


class Role(str, Enum):
    TYPE_A = "TYPE_A"  # configuring choices (stateful switch)
    TYPE_B = "TYPE_B"  # uncovering hidden notices (opens another view)
    TYPE_C = "TYPE_C"  # uncovering hidden settings (in-notice navigation)
    TYPE_D = "TYPE_D"  # enforcing choices (closes the notice)
    UNKNOWN = "UNKNOWN"


class Discovery(str, Enum):
    TABBED = "TABBED"
    HIDDEN_SUPPLEMENT = "HIDDEN_SUPPLEMENT"
    DYNAMIC = "DYNAMIC"


class TagKind(str, Enum):
    BUTTON = "button"
    SWITCH = "switch"


_TAG_RE = re.compile(r"^(button|switch)(\d+)$")


@dataclass(frozen=True)
class ElementTag:
    kind: TagKind
    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("tag index must be >= 0")

    @property
    def rendered(self) -> str:
        return f"{self.kind.value}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "ElementTag":
        m = _TAG_RE.match(text.strip())
        if not m:
            raise ValueError(f"not a tag: {text!r}")
        return cls(kind=TagKind(m.group(1)), index=int(m.group(2)))


@dataclass
class InteractiveElement:
    """One control of the notice, in one view.

    ``tag_index`` is assigned in discovery order across the whole model
    (filtered elements keep consuming indices, so gaps are expected).
    The rendered kind depends on the probed role: switch iff TYPE_A.
    """

    snapshot: dom.ElementSnapshot
    label: str
    state: ElementState
    view_index: int
    discovery: Discovery
    tag_index: int
    role: Optional[Role] = None
    evidence: Optional[dict] = None
    # Clicks needed after reaching the view before this element exists
    # (Type C reveals), as selector css strings.
    reveal_chain: list[str] = field(default_factory=list)

    @property
    def selector(self) -> dom.SelectorPath:
        assert self.snapshot.selector_path is not None
        return self.snapshot.selector_path

    @property
    def tag(self) -> ElementTag:
        kind = TagKind.SWITCH if self.role is Role.TYPE_A else TagKind.BUTTON
        return ElementTag(kind=kind, index=self.tag_index)

    @property
    def stateful(self) -> bool:
        return self.state in (ElementState.SELECTED, ElementState.NOT_SELECTED)


@dataclass
class View:
    elements: list[InteractiveElement]
    notice_selector: dom.SelectorPath
    opened_by: Optional[tuple[int, int]] = None  # (view_index, tag_index)
    # Selector css strings clicked, in order, to reach this view from a
    # fresh page load.
    replay_chain: list[str] = field(default_factory=list)


@dataclass
class NoticeModel:
    domain: str
    views: list[View]
    notice_selector: dom.SelectorPath
    # Set when an outbound element navigating to a dedicated settings page
    # was filtered away; decides DEDICATED_PAGE vs ACCEPT_ONLY afterwards.
    dedicated_page_filtered: bool = False
    # The iframe hosting the notice, when it lives in one.
    frame_selector: Optional[dom.SelectorPath] = None

    def all_elements(self) -> list[InteractiveElement]:
        return [el for view in self.views for el in view.elements]

    def element_by_index(self, index: int) -> Optional[InteractiveElement]:
        for el in self.all_elements():
            if el.tag_index == index:
                return el
        return None

    def validate(self) -> None:
        """Check structural invariants; raises ValueError on violation."""
        if self.views and self.views[0].opened_by is not None:
            raise ValueError("views[0] must not have opened_by")
        for i, view in enumerate(self.views[1:], start=1):
            if view.opened_by is None or view.opened_by[0] >= i:
                raise ValueError(f"view {i} must be opened by an earlier view")
        seen_tags: set[int] = set()
        seen_selectors: set[str] = set()
        for view in self.views:
            for el in view.elements:
                if el.tag_index in seen_tags:
                    raise ValueError(f"duplicate tag index {el.tag_index}")
                seen_tags.add(el.tag_index)
                css = el.selector.css
                if css in seen_selectors:
                    raise ValueError(f"element {css!r} appears in two views")
                seen_selectors.add(css)
                stateful = el.state in (ElementState.SELECTED, ElementState.NOT_SELECTED)
                if el.role is Role.TYPE_A and not stateful:
                    raise ValueError(f"TYPE_A element {css!r} lacks a queryable state")
                if not el.label and el.discovery is not Discovery.HIDDEN_SUPPLEMENT:
                    raise ValueError(f"element {css!r} has no label")
