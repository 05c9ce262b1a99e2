"""Scripted page simulator.

A fixture site is a JSON document describing a DOM tree with geometry,
stacking, focus order, and click behaviors (toggle a switch, swap notice
views, set a consent cookie, navigate away, open a tab, remove nodes).
``SimSession`` interprets those scripts statefully, which is enough browser
to drive the whole pipeline: the wire server in ``server.py`` exposes a
W3C WebDriver surface over it, and tests use the selector evaluator here as
an independent oracle for selector generation.

Two simulator liberties, both deliberate:
  * zero-area elements still accept clicks when their display chain is
    intact — stands in for label-delegated clicks on styled-switch markup;
  * per-node ``appear_after_ms`` uses wall time since navigation, so keep
    fixture delays below the configured settle delay.
"""

from __future__ import annotations

import copy
import json
import re
import time
from pathlib import Path
from typing import Optional
from urllib.parse import urljoin, urlparse

DEFAULT_VIEWPORT = (1280, 800)

_FOCUSABLE_TAGS = {"a", "button", "input", "select", "textarea"}


class SimError(Exception):
    """Wire-level error with a W3C error code string."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(message or code)
        self.code = code


class SimNode:
    def __init__(self, spec: dict, parent: Optional["SimNode"]):
        self.id: str = spec["id"]
        self.tag: str = spec.get("tag", "div").lower()
        self.attrs: dict[str, str] = dict(spec.get("attrs", {}))
        self.text: str = spec.get("text", "")
        bbox = spec.get("bbox", [0, 0, 0, 0])
        self.bbox: list[float] = [float(v) for v in bbox]
        self.z: Optional[int] = spec.get("z")
        self.display: bool = spec.get("display", True)
        self.checked: Optional[bool] = spec.get("checked")
        self.tabindex: Optional[int] = spec.get("tabindex")
        self.focusable: Optional[bool] = spec.get("focusable")
        self.consent_gate: bool = spec.get("consent_gate", False)
        self.appear_after_ms: int = spec.get("appear_after_ms", 0)
        self.on_click: list[dict] = spec.get("on_click", [])
        # Injected nodes are absent from the document until a "show" action
        # adds them (models JS injection). Fixtures must place them after
        # their static siblings so nth-child positions stay stable.
        self.injected: bool = spec.get("injected", False)
        self.removed: bool = False
        self.parent = parent
        self.children: list[SimNode] = []
        self.frame: Optional[SimDocument] = None
        for child_spec in spec.get("children", []):
            self.children.append(SimNode(child_spec, self))
        if "frame" in spec:
            self.frame = SimDocument.from_body(
                spec["frame"].get("body", []),
                viewport=tuple(spec["frame"].get("viewport", self.bbox[2:4])),
                prefix=f"{self.id}/",
            )

    # -- predicates ---------------------------------------------------

    def is_focusable(self) -> bool:
        if self.focusable is not None:
            return self.focusable
        if self.tabindex is not None:
            return self.tabindex >= 0
        if self.tag == "a":
            return "href" in self.attrs
        if self.tag == "input" and self.attrs.get("type") == "hidden":
            return False
        return self.tag in _FOCUSABLE_TAGS

    def is_stateful(self) -> bool:
        return self.checked is not None

    @property
    def absent(self) -> bool:
        return self.removed or self.injected


class SimDocument:
    """One document: an html > body tree plus an id index."""

    def __init__(self, root: SimNode):
        self.root = root
        self.nodes: dict[str, SimNode] = {}
        # Index everything, including injected-and-not-yet-shown nodes;
        # walk() below only yields present ones.
        stack = [root]
        while stack:
            node = stack.pop()
            if node.id in self.nodes:
                raise ValueError(f"duplicate sim node id {node.id!r}")
            self.nodes[node.id] = node
            stack.extend(node.children)
            if node.frame is not None:
                pass  # frame documents keep their own index

    @classmethod
    def from_body(
        cls,
        body_specs: list[dict],
        viewport: tuple[float, float] = DEFAULT_VIEWPORT,
        prefix: str = "",
    ) -> "SimDocument":
        width, height = viewport
        html_spec = {
            "id": f"{prefix}_html",
            "tag": "html",
            "bbox": [0, 0, width, height],
            "children": [
                {
                    "id": f"{prefix}_body",
                    "tag": "body",
                    "bbox": [0, 0, width, height],
                    "children": body_specs,
                }
            ],
        }
        return cls(SimNode(html_spec, None))

    def walk(self, start: Optional[SimNode] = None):
        stack = [start or self.root]
        while stack:
            node = stack.pop()
            if node.absent:
                continue
            yield node
            stack.extend(reversed([c for c in node.children if not c.absent]))

    def get(self, node_id: str) -> Optional[SimNode]:
        node = self.nodes.get(node_id)
        if node is None or node.absent:
            return None
        return node

    def effective_display(self, node: SimNode, now_ms: float = 0.0) -> bool:
        cur: Optional[SimNode] = node
        while cur is not None:
            if cur.absent or not cur.display:
                return False
            if cur.appear_after_ms and now_ms < cur.appear_after_ms:
                return False
            cur = cur.parent
        return True

    # -- CSS selector evaluation (the oracle) --------------------------

    def query_all(self, selector: str, now_ms: float = 0.0) -> list[SimNode]:
        """Every node matching ``selector``, in document order.

        Supports the grammar the pipeline emits: compound selectors made of
        tag, #id, .class, [attr], [attr="value"], :nth-child(n), combined
        with ``>`` (child) and whitespace (descendant), plus comma groups.
        """
        matches: list[SimNode] = []
        for group in _split_selector_group(selector):
            chain = _parse_complex(group)
            for node in self.walk():
                if self._matches_chain(node, chain):
                    if node not in matches:
                        matches.append(node)
        order = {n: i for i, n in enumerate(self.walk())}
        matches.sort(key=lambda n: order[n])
        return matches

    def query(self, selector: str) -> Optional[SimNode]:
        found = self.query_all(selector)
        return found[0] if found else None

    def _matches_chain(self, node: SimNode, chain: list[tuple[str, dict]]) -> bool:
        combinator, compound = chain[-1]
        if not self._matches_compound(node, compound):
            return False
        rest = chain[:-1]
        if not rest:
            return True
        parent = node.parent
        if combinator == ">":
            return parent is not None and self._matches_chain(parent, rest)
        # descendant combinator: any ancestor may match the remaining chain
        while parent is not None:
            if self._matches_chain(parent, rest):
                return True
            parent = parent.parent
        return False

    def _matches_compound(self, node: SimNode, compound: dict) -> bool:
        if node.absent:
            return False
        if compound["tag"] and node.tag != compound["tag"]:
            return False
        if compound["id"] is not None and node.attrs.get("id") != compound["id"]:
            return False
        classes = set(node.attrs.get("class", "").split())
        if any(c not in classes for c in compound["classes"]):
            return False
        for name, value in compound["attrs"]:
            if value is None:
                if name not in node.attrs:
                    return False
            elif node.attrs.get(name) != value:
                return False
        nth = compound["nth_child"]
        if nth is not None:
            if node.parent is None:
                return False
            siblings = [c for c in node.parent.children if not c.absent]
            if node not in siblings or siblings.index(node) + 1 != nth:
                return False
        return True


_COMPOUND_RE = re.compile(
    r"""
    (?P<id>\#[-\w]+)
    | (?P<cls>\.[-\w]+)
    | (?P<attr>\[[^\]]+\])
    | (?P<nth>:nth-child\(\d+\))
    | (?P<tag>[a-zA-Z][-\w]*|\*)
    """,
    re.VERBOSE,
)


def _split_selector_group(selector: str) -> list[str]:
    parts, depth, buf = [], 0, []
    in_str = False
    for ch in selector:
        if ch == '"' and (not buf or buf[-1] != "\\"):
            in_str = not in_str
        if not in_str:
            if ch == "[":
                depth += 1
            elif ch == "]":
                depth -= 1
            elif ch == "," and depth == 0:
                parts.append("".join(buf).strip())
                buf = []
                continue
        buf.append(ch)
    tail = "".join(buf).strip()
    if tail:
        parts.append(tail)
    return parts


def _tokenize_complex(selector: str) -> list[str]:
    """Split a complex selector into compounds and ">" markers, leaving
    whitespace inside quoted attribute values alone."""
    tokens: list[str] = []
    buf: list[str] = []
    in_str: Optional[str] = None
    depth = 0

    def flush():
        if buf:
            tokens.append("".join(buf))
            buf.clear()

    for ch in selector.strip():
        if in_str:
            buf.append(ch)
            if ch == in_str and (len(buf) < 2 or buf[-2] != "\\"):
                in_str = None
        elif ch in "\"'":
            in_str = ch
            buf.append(ch)
        elif ch == "[":
            depth += 1
            buf.append(ch)
        elif ch == "]":
            depth = max(0, depth - 1)
            buf.append(ch)
        elif depth == 0 and ch == ">":
            flush()
            tokens.append(">")
        elif depth == 0 and ch.isspace():
            flush()
        else:
            buf.append(ch)
    flush()
    return tokens


def _parse_complex(selector: str) -> list[tuple[str, dict]]:
    """Parse one complex selector into [(combinator, compound), ...]."""
    chain: list[tuple[str, dict]] = []
    pending = " "
    for token in _tokenize_complex(selector):
        if token == ">":
            pending = ">"
            continue
        chain.append((pending, _parse_compound(token)))
        pending = " "
    if not chain:
        raise SimError("invalid selector", f"empty selector: {selector!r}")
    return chain


def _parse_compound(token: str) -> dict:
    out = {"tag": None, "id": None, "classes": [], "attrs": [], "nth_child": None}
    pos = 0
    while pos < len(token):
        m = _COMPOUND_RE.match(token, pos)
        if not m:
            raise SimError("invalid selector", f"cannot parse {token!r} at {pos}")
        pos = m.end()
        if m.lastgroup == "id":
            out["id"] = m.group("id")[1:]
        elif m.lastgroup == "cls":
            out["classes"].append(m.group("cls")[1:])
        elif m.lastgroup == "nth":
            out["nth_child"] = int(m.group("nth")[len(":nth-child(") : -1])
        elif m.lastgroup == "tag":
            tag = m.group("tag")
            out["tag"] = None if tag == "*" else tag.lower()
        elif m.lastgroup == "attr":
            body = m.group("attr")[1:-1]
            if "=" in body:
                name, _, raw = body.partition("=")
                value = raw.strip()
                if value and value[0] in "\"'":
                    value = value[1:-1]
                value = value.replace('\\"', '"').replace("\\\\", "\\")
                out["attrs"].append((name.strip(), value))
            else:
                out["attrs"].append((body.strip(), None))
    return out


class SimSite:
    """Parsed fixture file: immutable template a session instantiates from."""

    def __init__(self, spec: dict, name: str = ""):
        self.spec = spec
        self.name = name or spec.get("domain", "")
        self.domain: str = spec["domain"]
        self.title: str = spec.get("title", self.domain)
        self.viewport = tuple(spec.get("viewport", DEFAULT_VIEWPORT))
        self.consent_cookie: Optional[str] = spec.get("consent_cookie")
        self.load_delay_ms: int = spec.get("load_delay_ms", 0)
        self.expected: dict = spec.get("expected", {})
        self.notice_node: Optional[str] = spec.get("notice_node")

    def instantiate(self, cookies: dict[str, str]) -> SimDocument:
        doc = SimDocument.from_body(
            copy.deepcopy(self.spec.get("body", [])), viewport=self.viewport
        )
        if self.consent_cookie and self.consent_cookie in cookies:
            docs = [doc] + [n.frame for n in doc.nodes.values() if n.frame is not None]
            for d in docs:
                for node in d.nodes.values():
                    if node.consent_gate:
                        node.display = False
        return doc


class SimWindow:
    def __init__(self, handle: str):
        self.handle = handle


class SimSession:
    """Stateful browsing session over a corpus of fixture sites."""

    def __init__(self, corpus: dict[str, SimSite]):
        self.corpus = corpus
        self.url: str = "about:blank"
        self.doc: SimDocument = SimDocument.from_body([])
        self.site: Optional[SimSite] = None
        self.generation = 0
        self.cookies: dict[str, dict[str, str]] = {}
        self.focus: Optional[str] = None
        self.windows: list[SimWindow] = [SimWindow("w0")]
        self.current_window = "w0"
        self.frame_node: Optional[SimNode] = None
        self._nav_time = time.monotonic()
        self._refs: dict[str, tuple[int, SimNode]] = {}
        self._ref_counter = 0
        self.page_load_timeout_ms = 300_000

    # -- navigation ----------------------------------------------------

    def now_ms(self) -> float:
        return (time.monotonic() - self._nav_time) * 1000.0

    def navigate(self, url: str) -> None:
        host = urlparse(url).netloc.split(":")[0]
        site = self.corpus.get(host)
        if site is not None:
            if site.spec.get("crash"):
                raise SimError("unknown error", "page crash: simulated renderer failure")
            if site.load_delay_ms > self.page_load_timeout_ms:
                raise SimError("timeout", f"navigation to {url} timed out")
            if site.load_delay_ms:
                time.sleep(site.load_delay_ms / 1000.0)
            self.site = site
            self.doc = site.instantiate(self.cookies.get(host, {}))
        else:
            # Unknown host: a plain page so outbound navigations still land.
            self.site = None
            self.doc = SimDocument.from_body(
                [
                    {
                        "id": "ext-main",
                        "tag": "div",
                        "text": f"external page {url}",
                        "bbox": [0, 0, 1280, 200],
                    }
                ]
            )
        self.url = url
        self.generation += 1
        self.frame_node = None
        self.focus = None
        self._nav_time = time.monotonic()

    def delete_cookies(self) -> None:
        host = urlparse(self.url).netloc.split(":")[0]
        self.cookies.pop(host, None)

    def clear_storage(self) -> None:
        # Storage exists only as the consent cookie in fixtures; nothing else.
        pass

    # -- documents and element refs -------------------------------------

    def active_doc(self) -> SimDocument:
        if self.frame_node is not None:
            if self.frame_node.removed or self.frame_node.frame is None:
                raise SimError("no such frame", "frame element is gone")
            return self.frame_node.frame
        return self.doc

    def switch_frame(self, ref: Optional[str]) -> None:
        if ref is None:
            self.frame_node = None
            return
        node = self.deref(ref)
        if node.frame is None:
            raise SimError("no such frame", f"{node.id} is not a frame")
        self.frame_node = node

    def make_ref(self, node: SimNode) -> str:
        self._ref_counter += 1
        ref = f"elem-{self._ref_counter}"
        self._refs[ref] = (self.generation, node)
        return ref

    def deref(self, ref: str) -> SimNode:
        entry = self._refs.get(ref)
        if entry is None:
            raise SimError("no such element", f"unknown element ref {ref}")
        generation, node = entry
        if generation != self.generation or node.absent:
            raise SimError("stale element reference", f"{node.id} is stale")
        return node

    def find(self, selector: str) -> SimNode:
        node = self.active_doc().query(selector)
        if node is None:
            raise SimError("no such element", f"nothing matches {selector!r}")
        return node

    # -- interaction -----------------------------------------------------

    def click(self, node: SimNode) -> None:
        doc = self.active_doc()
        if not doc.effective_display(node, self.now_ms()):
            raise SimError("element not interactable", f"{node.id} is not visible")
        actions = node.on_click
        if not actions and node.tag == "a" and node.attrs.get("href"):
            if node.attrs.get("target") == "_blank":
                actions = [{"action": "new_tab"}]
            else:
                actions = [{"action": "navigate", "url": node.attrs["href"]}]
        for act in actions:
            self._apply(act, node, doc)

    def _apply(self, act: dict, node: SimNode, doc: SimDocument) -> None:
        kind = act.get("action")
        if kind == "toggle":
            target = doc.get(act.get("target", node.id)) or node
            if target.checked is None:
                return
            target.checked = not target.checked
            if "aria-checked" in target.attrs:
                target.attrs["aria-checked"] = "true" if target.checked else "false"
        elif kind == "show":
            target = doc.nodes.get(act["target"])
            if target is not None and not target.removed:
                target.injected = False
                target.display = True
                target.appear_after_ms = 0
        elif kind == "hide":
            target = doc.get(act["target"])
            if target is not None:
                target.display = False
        elif kind == "remove":
            target = doc.get(act["target"])
            if target is not None:
                target.removed = True
        elif kind == "set_cookie":
            host = urlparse(self.url).netloc.split(":")[0]
            self.cookies.setdefault(host, {})[act["name"]] = act.get("value", "1")
        elif kind == "navigate":
            self.navigate(urljoin(self.url, act["url"]))
        elif kind == "new_tab":
            handle = f"w{len(self.windows)}"
            self.windows.append(SimWindow(handle))
        elif kind in (None, "none"):
            pass
        else:
            raise ValueError(f"unknown fixture action {kind!r}")

    # -- focus / tab order -------------------------------------------------

    def tab_order(self) -> list[SimNode]:
        doc = self.active_doc()
        now = self.now_ms()
        focusables = [
            n
            for n in doc.walk()
            if n.is_focusable() and doc.effective_display(n, now)
        ]
        positive = [n for n in focusables if (n.tabindex or 0) > 0]
        order = {n: i for i, n in enumerate(doc.walk())}
        positive.sort(key=lambda n: (n.tabindex, order[n]))
        rest = [n for n in focusables if (n.tabindex or 0) <= 0]
        return positive + rest

    def press_tab(self) -> Optional[str]:
        """Advance focus like the browser would; returns focused node id."""
        order = self.tab_order()
        doc = self.active_doc()
        if not order:
            self.focus = doc.root.children[0].id if doc.root.children else None
            return self.focus
        ids = [n.id for n in order]
        if self.focus in ids:
            idx = ids.index(self.focus)
            nxt = idx + 1
            if nxt >= len(order):
                # wrap through the page chrome: body gets focus first
                self.focus = doc.root.children[0].id
                return self.focus
            self.focus = ids[nxt]
            return self.focus
        # Focus parked on a non-focusable container (or body): the first tab
        # lands on the container's first focusable descendant in tab order
        # (positive tabindex wins), else on the next focusable after it in
        # document order, else wraps.
        anchor = doc.get(self.focus) if self.focus else None
        if anchor is not None:
            descendants = set()
            stack = list(anchor.children)
            while stack:
                node = stack.pop()
                if node.absent:
                    continue
                descendants.add(node.id)
                stack.extend(node.children)
            for node in order:
                if node.id in descendants:
                    self.focus = node.id
                    return self.focus
            seen_anchor = False
            for node in doc.walk():
                if node is anchor:
                    seen_anchor = True
                    continue
                if seen_anchor and node in order:
                    self.focus = node.id
                    return self.focus
        self.focus = ids[0]
        return self.focus

    def focus_node(self, node: SimNode) -> None:
        self.focus = node.id

    # -- snapshot -----------------------------------------------------------

    def snapshot(self) -> dict:
        doc = self.active_doc()
        now = self.now_ms()
        elements = []
        for order, node in enumerate(doc.walk()):
            attrs = dict(node.attrs)
            if node.checked is not None and node.tag == "input":
                if node.checked:
                    attrs["checked"] = "checked"
                else:
                    attrs.pop("checked", None)
            elements.append(
                {
                    "node_id": node.id,
                    "tag_name": node.tag,
                    "attributes": attrs,
                    "z_index": node.z if node.z is not None else "auto",
                    "bbox": {
                        "x": node.bbox[0],
                        "y": node.bbox[1],
                        "width": node.bbox[2],
                        "height": node.bbox[3],
                    },
                    "displayed": doc.effective_display(node, now),
                    "own_text": node.text,
                    "doc_order": order,
                    "parent_id": node.parent.id if node.parent else None,
                }
            )
        return {
            "url": self.url,
            "title": self.site.title if self.site else "",
            "ready": True,
            "elements": elements,
        }

    def element_state(self, node: SimNode) -> dict:
        doc = self.active_doc()
        return {
            "stateful": node.is_stateful(),
            "checked": node.checked,
            "visible": doc.effective_display(node, self.now_ms()),
        }


# -- corpus loading ---------------------------------------------------------


def corpus_dir() -> Path:
    return Path(__file__).resolve().parent / "sites"


def load_site(path: Path) -> SimSite:
    with open(path, encoding="utf-8") as fh:
        return SimSite(json.load(fh), name=path.stem)


def load_corpus(directory: Optional[Path] = None) -> dict[str, SimSite]:
    directory = directory or corpus_dir()
    corpus: dict[str, SimSite] = {}
    for path in sorted(directory.glob("*.json")):
        site = load_site(path)
        corpus[site.domain] = site
    return corpus
