"""DOM snapshot model, stacking-order reasoning, and stable selector generation.

Everything here is pure and side-effect free: snapshots are immutable value
objects produced by the driver (or decoded from fixture JSON), and the
operations are plain functions over them. That makes the module safe to share
across concurrently running crawl sessions.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Optional

from .errors import EmptyPage, SelectorUnresolvable

AUTO = "auto"

# Ids that look machine-generated churn across page loads and would defeat
# enforcement later: a run of 8+ hex chars, or 5+ trailing digits.
_RANDOM_ID_HEX = re.compile(r"[0-9a-fA-F]{8,}")
_RANDOM_ID_DIGITS = re.compile(r"\d{5,}$")

_SAFE_CSS_IDENT = re.compile(r"^-?[A-Za-z_][A-Za-z0-9_-]*$")

# Attributes worth trying for a compact unique selector, most stable first.
_COMBO_ATTRS = (
    "name",
    "data-testid",
    "data-test",
    "data-qa",
    "data-id",
    "data-role",
    "data-action",
    "aria-label",
    "role",
    "type",
    "title",
    "value",
    "href",
)


class SelectorStrategy(str, Enum):
    BY_ID = "BY_ID"
    BY_ATTR_COMBO = "BY_ATTR_COMBO"
    BY_NTH_CHILD_CHAIN = "BY_NTH_CHILD_CHAIN"


@dataclass(frozen=True)
class BBox:
    x: float
    y: float
    width: float
    height: float

    def __post_init__(self):
        if self.width < 0 or self.height < 0:
            raise ValueError(f"negative bbox dimensions: {self.width}x{self.height}")

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.width / 2.0, self.y + self.height / 2.0)


@dataclass(frozen=True)
class SelectorPath:
    css: str
    strategy: SelectorStrategy

    def to_json(self) -> dict:
        return {"css": self.css, "strategy": self.strategy.value}

    @classmethod
    def from_json(cls, obj: dict) -> "SelectorPath":
        return cls(css=obj["css"], strategy=SelectorStrategy(obj["strategy"]))


@dataclass(frozen=True)
class ElementSnapshot:
    """One DOM element frozen at snapshot time.

    ``z_index`` is either an int or the string ``"auto"``. ``displayed`` is
    the driver-reported visibility, which already accounts for hidden
    ancestors. ``parent_id`` links the flat element list back into a tree;
    pre-order alone cannot reconstruct ancestry, and both selector chains and
    descendant-text extraction need it.
    """

    node_id: str
    tag_name: str
    attributes: dict[str, str]
    z_index: int | str
    bbox: BBox
    displayed: bool
    own_text: str
    doc_order: int
    parent_id: Optional[str] = None
    selector_path: Optional[SelectorPath] = None

    def attr(self, name: str, default: str = "") -> str:
        return self.attributes.get(name, default)

    @property
    def has_explicit_z(self) -> bool:
        return self.z_index != AUTO

    def with_selector(self, path: SelectorPath) -> "ElementSnapshot":
        return ElementSnapshot(
            node_id=self.node_id,
            tag_name=self.tag_name,
            attributes=self.attributes,
            z_index=self.z_index,
            bbox=self.bbox,
            displayed=self.displayed,
            own_text=self.own_text,
            doc_order=self.doc_order,
            parent_id=self.parent_id,
            selector_path=path,
        )

    def to_json(self) -> dict:
        return {
            "node_id": self.node_id,
            "tag_name": self.tag_name,
            "attributes": dict(self.attributes),
            "z_index": self.z_index,
            "bbox": {
                "x": self.bbox.x,
                "y": self.bbox.y,
                "width": self.bbox.width,
                "height": self.bbox.height,
            },
            "displayed": self.displayed,
            "own_text": self.own_text,
            "doc_order": self.doc_order,
            "parent_id": self.parent_id,
            "selector_path": self.selector_path.to_json() if self.selector_path else None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ElementSnapshot":
        bbox = obj["bbox"]
        sel = obj.get("selector_path")
        return cls(
            node_id=obj["node_id"],
            tag_name=obj["tag_name"],
            attributes=dict(obj.get("attributes", {})),
            z_index=obj["z_index"],
            bbox=BBox(bbox["x"], bbox["y"], bbox["width"], bbox["height"]),
            displayed=obj["displayed"],
            own_text=obj.get("own_text", ""),
            doc_order=obj["doc_order"],
            parent_id=obj.get("parent_id"),
            selector_path=SelectorPath.from_json(sel) if sel else None,
        )


@dataclass(frozen=True)
class PageSnapshot:
    url: str
    elements: tuple[ElementSnapshot, ...]
    title: str = ""
    ready: bool = True
    _by_id: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        orders = [e.doc_order for e in self.elements]
        if orders != sorted(orders) or len(set(orders)) != len(orders):
            raise ValueError("elements must be sorted by unique doc_order")
        object.__setattr__(self, "_by_id", {e.node_id: e for e in self.elements})

    def get(self, node_id: str) -> Optional[ElementSnapshot]:
        return self._by_id.get(node_id)

    @cached_property
    def _children(self) -> dict[Optional[str], list[ElementSnapshot]]:
        kids: dict[Optional[str], list[ElementSnapshot]] = {}
        for el in self.elements:
            kids.setdefault(el.parent_id, []).append(el)
        return kids

    def children_of(self, node_id: Optional[str]) -> list[ElementSnapshot]:
        return self._children.get(node_id, [])

    def parent_of(self, el: ElementSnapshot) -> Optional[ElementSnapshot]:
        return self._by_id.get(el.parent_id) if el.parent_id else None

    def ancestors_of(self, el: ElementSnapshot) -> Iterable[ElementSnapshot]:
        cur = self.parent_of(el)
        seen = set()
        while cur is not None:
            if cur.node_id in seen:  # defensive against cyclic fixture data
                break
            seen.add(cur.node_id)
            yield cur
            cur = self.parent_of(cur)

    def descendants_of(self, el: ElementSnapshot) -> Iterable[ElementSnapshot]:
        """Pre-order walk of the subtree rooted at ``el`` (excluding el)."""
        stack = list(reversed(self.children_of(el.node_id)))
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(self.children_of(node.node_id)))

    def subtree(self, el: ElementSnapshot) -> Iterable[ElementSnapshot]:
        yield el
        yield from self.descendants_of(el)

    def to_json(self) -> dict:
        return {
            "url": self.url,
            "title": self.title,
            "ready": self.ready,
            "elements": [e.to_json() for e in self.elements],
        }

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, obj: dict) -> "PageSnapshot":
        return cls(
            url=obj["url"],
            title=obj.get("title", ""),
            ready=obj.get("ready", True),
            elements=tuple(ElementSnapshot.from_json(e) for e in obj["elements"]),
        )

    @classmethod
    def from_json_str(cls, text: str) -> "PageSnapshot":
        return cls.from_json(json.loads(text))


def is_visible(element: ElementSnapshot) -> bool:
    """Driver-reported displayed AND positive rendered area.

    Opacity and off-viewport position are deliberately not checked: this
    matches what a click can actually reach and keeps the predicate cheap.
    """
    return element.displayed and element.bbox.width > 0 and element.bbox.height > 0


def _body_of(page: PageSnapshot) -> Optional[ElementSnapshot]:
    for el in page.elements:
        if el.tag_name == "body":
            return el
    return None


def stacking_candidates(page: PageSnapshot) -> list[ElementSnapshot]:
    """Elements likely to sit on top of the page, best candidate first.

    All visible elements with an explicit non-negative z-index, highest
    first (ties broken by later document position, which paints on top),
    followed by the first three and last three visible elements of the
    body to catch notices that never touch z-index.
    """
    visible = [e for e in page.elements if is_visible(e)]
    if not visible:
        raise EmptyPage(f"no visible elements on {page.url}")

    explicit = [
        e for e in visible if e.has_explicit_z and isinstance(e.z_index, int) and e.z_index >= 0
    ]
    explicit.sort(key=lambda e: (-int(e.z_index), -e.doc_order))

    body = _body_of(page)
    if body is not None:
        body_ids = {d.node_id for d in page.descendants_of(body)}
        body_visible = [e for e in visible if e.node_id in body_ids]
    else:
        body_visible = visible
    edge = body_visible[:3] + body_visible[-3:]

    out: list[ElementSnapshot] = []
    seen: set[str] = set()
    for el in explicit + edge:
        if el.node_id not in seen:
            seen.add(el.node_id)
            out.append(el)
    return out


def _css_escape_value(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


def _id_usable(page: PageSnapshot, element: ElementSnapshot) -> Optional[str]:
    elem_id = element.attr("id")
    if not elem_id or not _SAFE_CSS_IDENT.match(elem_id):
        return None
    if _RANDOM_ID_HEX.search(elem_id) or _RANDOM_ID_DIGITS.search(elem_id):
        return None
    holders = [e for e in page.elements if e.attr("id") == elem_id]
    if len(holders) != 1:
        return None
    return elem_id


def _matches_simple(el: ElementSnapshot, tag: Optional[str], attrs: dict[str, str]) -> bool:
    if tag is not None and el.tag_name != tag:
        return False
    return all(el.attr(k, None) == v for k, v in attrs.items())


def _count_matches(page: PageSnapshot, tag: Optional[str], attrs: dict[str, str]) -> int:
    return sum(1 for e in page.elements if _matches_simple(e, tag, attrs))


def _attr_combo(page: PageSnapshot, element: ElementSnapshot) -> Optional[str]:
    present = [(a, element.attributes[a]) for a in _COMBO_ATTRS if element.attr(a)]
    # Single attribute, bare then tag-qualified.
    for name, value in present:
        sel_attrs = {name: value}
        if _count_matches(page, None, sel_attrs) == 1:
            return f'[{name}="{_css_escape_value(value)}"]'
        if _count_matches(page, element.tag_name, sel_attrs) == 1:
            return f'{element.tag_name}[{name}="{_css_escape_value(value)}"]'
    # Attribute pairs, tag-qualified.
    for i in range(len(present)):
        for j in range(i + 1, len(present)):
            (n1, v1), (n2, v2) = present[i], present[j]
            if _count_matches(page, element.tag_name, {n1: v1, n2: v2}) == 1:
                return (
                    f'{element.tag_name}[{n1}="{_css_escape_value(v1)}"]'
                    f'[{n2}="{_css_escape_value(v2)}"]'
                )
    return None


def _nth_child_chain(page: PageSnapshot, element: ElementSnapshot) -> str:
    segments: list[str] = []
    cur: Optional[ElementSnapshot] = element
    while cur is not None:
        anchor = _id_usable(page, cur)
        if anchor is not None and cur is not element:
            segments.append(f"#{anchor}")
            return " > ".join(reversed(segments))
        parent = page.parent_of(cur)
        if parent is None:
            # Document root: no nth-child qualifier needed (and none valid).
            segments.append(cur.tag_name)
            return " > ".join(reversed(segments))
        siblings = page.children_of(parent.node_id)
        try:
            position = siblings.index(cur) + 1
        except ValueError:
            raise SelectorUnresolvable(
                f"element {cur.node_id} not among its parent's children"
            ) from None
        segments.append(f"{cur.tag_name}:nth-child({position})")
        cur = parent
    raise SelectorUnresolvable(f"no path to document root for {element.node_id}")


def generate_selector(page: PageSnapshot, element: ElementSnapshot) -> SelectorPath:
    """Build a selector that resolves uniquely to ``element`` on ``page``.

    Preference order: a stable unique id, then a unique attribute
    combination, then an nth-child chain anchored at the nearest stable id
    (or the document root). Random-looking ids are skipped because they
    churn across page loads and would break enforcement later.
    """
    if page.get(element.node_id) is None:
        raise SelectorUnresolvable(f"element {element.node_id} not in page snapshot")

    elem_id = _id_usable(page, element)
    if elem_id is not None:
        return SelectorPath(css=f"#{elem_id}", strategy=SelectorStrategy.BY_ID)

    combo = _attr_combo(page, element)
    if combo is not None:
        return SelectorPath(css=combo, strategy=SelectorStrategy.BY_ATTR_COMBO)

    chain = _nth_child_chain(page, element)
    return SelectorPath(css=chain, strategy=SelectorStrategy.BY_NTH_CHILD_CHAIN)


def annotate_selectors(page: PageSnapshot) -> PageSnapshot:
    """Return a copy of ``page`` with every element's selector_path filled in."""
    annotated = tuple(
        el.with_selector(generate_selector(page, el)) for el in page.elements
    )
    return PageSnapshot(url=page.url, elements=annotated, title=page.title, ready=page.ready)
