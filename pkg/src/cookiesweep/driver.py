"""Minimal W3C WebDriver client: just the browser capabilities the pipeline
needs (navigate, snapshot, tab simulation, clicks, state queries, storage
reset, frame switching).

The wire protocol is plain HTTP + JSON, which keeps the client trivially
mockable: the test suite runs it against the fixture wire server. Element
geometry, stacking, and focus are read through ``execute/sync`` scripts; the
scripts carry ``/*cw:...*/`` markers so a stub server can dispatch without
evaluating JavaScript.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import requests

from . import dom
from .errors import (
    ContainerGone,
    DriverUnreachable,
    NavTimeout,
    PageCrashed,
    SessionRejected,
)

W3C_ELEMENT_KEY = "element-6066-11e4-a52e-4f735466cecf"
TAB_KEY = ""

# Snapshot script: tags every element with a stable per-load id and returns
# the canonical page encoding. The /*cw:...*/ markers let protocol stubs
# dispatch without a JS engine.
SNAPSHOT_SCRIPT = """/*cw:snapshot*/
window.__cwIds = window.__cwIds || new WeakMap();
window.__cwNext = window.__cwNext || 0;
const els = [];
const walk = (node, parentId) => {
  let id = window.__cwIds.get(node);
  if (!id) { id = 'n' + (window.__cwNext++); window.__cwIds.set(node, id); }
  const style = getComputedStyle(node);
  const rect = node.getBoundingClientRect();
  const attrs = {};
  for (const a of node.attributes) attrs[a.name] = a.value;
  const z = style.zIndex === 'auto' ? 'auto' : parseInt(style.zIndex, 10);
  let ownText = '';
  for (const c of node.childNodes) if (c.nodeType === 3) ownText += c.textContent;
  els.push({node_id: id, tag_name: node.tagName.toLowerCase(), attributes: attrs,
            z_index: z, bbox: {x: rect.x, y: rect.y, width: rect.width, height: rect.height},
            displayed: !!(node.offsetParent !== null || node === document.documentElement ||
                          style.position === 'fixed' && style.display !== 'none'),
            own_text: ownText.trim(), doc_order: els.length, parent_id: parentId});
  for (const c of node.children) walk(c, id);
};
walk(document.documentElement, null);
return {url: location.href, title: document.title,
        ready: document.readyState === 'complete', elements: els};
"""

URL_SCRIPT = "/*cw:url*/ return location.href;"
READY_SCRIPT = "/*cw:ready*/ return document.readyState;"
FOCUS_SCRIPT = "/*cw:focus*/ arguments[0].focus();"
ACTIVE_SCRIPT = "/*cw:active*/ return window.__cwIds ? window.__cwIds.get(document.activeElement) : null;"
STATE_SCRIPT = """/*cw:state*/
const el = arguments[0];
const style = getComputedStyle(el);
const stateful = el.matches('input[type=checkbox],input[type=radio],[role=switch][aria-checked],[aria-checked]');
const checked = stateful ? (el.checked !== undefined ? !!el.checked : el.getAttribute('aria-checked') === 'true') : null;
return {stateful: stateful, checked: checked,
        visible: style.display !== 'none' && style.visibility !== 'hidden' && el.offsetParent !== null};
"""
CLEAR_STORAGE_SCRIPT = "/*cw:clear_storage*/ localStorage.clear(); sessionStorage.clear();"


class ClickErrorKind(str, Enum):
    NONE = "NONE"
    NOT_INTERACTABLE = "NOT_INTERACTABLE"
    STALE = "STALE"
    INTERCEPTED = "INTERCEPTED"
    NAVIGATED = "NAVIGATED"


class ElementState(str, Enum):
    SELECTED = "SELECTED"
    NOT_SELECTED = "NOT_SELECTED"
    STATELESS = "STATELESS"
    GONE = "GONE"


@dataclass(frozen=True)
class ClickOutcome:
    clicked: bool
    error_kind: ClickErrorKind = ClickErrorKind.NONE
    url_changed: bool = False
    new_tab_opened: bool = False

    def __post_init__(self):
        if self.clicked and self.error_kind is not ClickErrorKind.NONE:
            raise ValueError("clicked=True requires error_kind=NONE")


class ProtocolError(Exception):
    """Driver endpoint answered with something that is not WebDriver JSON."""


class WireError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass
class Session:
    """One live WebDriver session. Operations on a session must be
    externally serialized; distinct sessions are fully independent."""

    session_id: str
    base_url: str
    page_load_timeout_ms: int = 30_000
    settle_delay_ms: int = 2000
    http: requests.Session = field(default_factory=requests.Session, repr=False)

    # -- wire plumbing --------------------------------------------------

    def _request(self, method: str, path: str, payload: Optional[dict] = None, timeout=None):
        url = f"{self.base_url}/session/{self.session_id}{path}"
        timeout = timeout or max(30.0, self.page_load_timeout_ms / 1000.0 + 5.0)
        if method == "POST" and payload is None:
            payload = {}
        try:
            resp = self.http.request(method, url, json=payload, timeout=timeout)
        except requests.Timeout as exc:
            raise WireError("timeout", str(exc)) from exc
        except requests.RequestException as exc:
            raise DriverUnreachable(f"driver request failed: {exc}", cause=exc) from exc
        try:
            body = resp.json()
        except ValueError as exc:
            raise DriverUnreachable(
                f"malformed response from driver for {method} {path}",
                cause=ProtocolError(resp.text[:200]),
            ) from exc
        if resp.status_code >= 400:
            value = body.get("value") or {}
            raise WireError(value.get("error", "unknown error"), value.get("message", ""))
        return body.get("value")

    def execute(self, script: str, args: Optional[list] = None):
        return self._request("POST", "/execute/sync", {"script": script, "args": args or []})

    def _element_ref(self, css: str) -> str:
        value = self._request("POST", "/element", {"using": "css selector", "value": css})
        return value[W3C_ELEMENT_KEY]

    @staticmethod
    def _wrap_ref(ref: str) -> dict:
        return {W3C_ELEMENT_KEY: ref}

    def current_url(self) -> str:
        return self.execute(URL_SCRIPT)

    def window_handles(self) -> list[str]:
        return self._request("GET", "/window/handles")

    # -- operations ------------------------------------------------------

    def navigate(self, url: str) -> dom.PageSnapshot:
        """Load ``url``, wait for readiness plus the settle delay, snapshot.

        The settle delay exists because notices routinely arrive after the
        load event; it is configurable per run rather than hard-coded.
        """
        try:
            self._request("POST", "/url", {"url": url})
        except WireError as exc:
            if exc.code == "timeout":
                raise NavTimeout(f"navigation to {url} timed out") from exc
            raise PageCrashed(f"navigation to {url} failed: {exc}") from exc
        deadline = time.monotonic() + self.page_load_timeout_ms / 1000.0
        while self.execute(READY_SCRIPT) != "complete":
            if time.monotonic() > deadline:
                raise NavTimeout(f"document never became ready on {url}")
            time.sleep(0.05)
        if self.settle_delay_ms:
            time.sleep(self.settle_delay_ms / 1000.0)
        return self.snapshot()

    def snapshot(self) -> dom.PageSnapshot:
        raw = self.execute(SNAPSHOT_SCRIPT)
        page = dom.PageSnapshot.from_json(raw)
        return dom.annotate_selectors(page)

    def click(self, el: dom.SelectorPath) -> ClickOutcome:
        """Single click attempt; never retries, never raises for outcome-level
        failures. URL changes and new windows are detected and reported, and
        stray windows are closed to keep the session single-page."""
        url_before = self.current_url()
        handles_before = self.window_handles()
        primary = handles_before[0]
        try:
            ref = self._element_ref(el.css)
        except WireError:
            return ClickOutcome(clicked=False, error_kind=ClickErrorKind.STALE)
        try:
            self._request("POST", f"/element/{ref}/click")
        except WireError as exc:
            url_changed = self._url_changed(url_before)
            kind = {
                "element not interactable": ClickErrorKind.NOT_INTERACTABLE,
                "stale element reference": ClickErrorKind.STALE,
                "element click intercepted": ClickErrorKind.INTERCEPTED,
                "no such element": ClickErrorKind.STALE,
            }.get(exc.code, ClickErrorKind.NAVIGATED if url_changed else ClickErrorKind.NOT_INTERACTABLE)
            return ClickOutcome(clicked=False, error_kind=kind, url_changed=url_changed)
        url_changed = self._url_changed(url_before)
        handles_after = self.window_handles()
        new_tab = len(handles_after) > len(handles_before)
        if new_tab:
            self._close_extra_windows(primary, handles_before, handles_after)
        return ClickOutcome(clicked=True, url_changed=url_changed, new_tab_opened=new_tab)

    def _url_changed(self, url_before: str) -> bool:
        try:
            return self.current_url() != url_before
        except (WireError, DriverUnreachable):
            return True

    def _close_extra_windows(self, primary: str, before: list[str], after: list[str]) -> None:
        for handle in after:
            if handle not in before:
                self._request("POST", "/window", {"handle": handle})
                self._request("DELETE", "/window")
        self._request("POST", "/window", {"handle": primary})

    def query_state(self, el: dom.SelectorPath) -> ElementState:
        try:
            ref = self._element_ref(el.css)
            state = self.execute(STATE_SCRIPT, [self._wrap_ref(ref)])
        except WireError:
            return ElementState.GONE
        if not state["visible"]:
            return ElementState.GONE
        if not state["stateful"]:
            return ElementState.STATELESS
        return ElementState.SELECTED if state["checked"] else ElementState.NOT_SELECTED

    def tab_cycle(self, within: dom.SelectorPath) -> list[dom.ElementSnapshot]:
        """Focus the container and walk Tab until focus repeats or escapes
        the container twice in a row. Returns focused descendants in focus
        order, deduplicated."""
        try:
            container_ref = self._element_ref(within.css)
        except WireError as exc:
            raise ContainerGone(f"container {within.css!r} not found") from exc
        page = self.snapshot()
        container = next(
            (e for e in page.elements if e.selector_path and self._resolves_same(e, within, page)),
            None,
        )
        if container is None:
            raise ContainerGone(f"container {within.css!r} missing from snapshot")
        inside = {d.node_id for d in page.descendants_of(container)}

        self.execute(FOCUS_SCRIPT, [self._wrap_ref(container_ref)])
        found: list[dom.ElementSnapshot] = []
        seen: set[str] = set()
        outside_streak = 0
        max_presses = len(page.elements) + 2
        for _ in range(max_presses):
            self._press_tab()
            active = self.execute(ACTIVE_SCRIPT)
            if active is None or active in seen:
                break
            seen.add(active)
            if active in inside:
                outside_streak = 0
                el = page.get(active)
                if el is not None and dom.is_visible(el):
                    found.append(el)
            else:
                outside_streak += 1
                if outside_streak >= 2:
                    break
        return found

    def _resolves_same(self, el: dom.ElementSnapshot, sel: dom.SelectorPath, page: dom.PageSnapshot) -> bool:
        # Cheap structural check: the annotated selector or raw id matches.
        if el.selector_path and el.selector_path.css == sel.css:
            return True
        if sel.css.startswith("#") and el.attr("id") == sel.css[1:]:
            return True
        return False

    def _press_tab(self) -> None:
        self._request(
            "POST",
            "/actions",
            {
                "actions": [
                    {
                        "type": "key",
                        "id": "kb",
                        "actions": [
                            {"type": "keyDown", "value": TAB_KEY},
                            {"type": "keyUp", "value": TAB_KEY},
                        ],
                    }
                ]
            },
        )

    def switch_frame(self, el: Optional[dom.SelectorPath]) -> None:
        """Enter the iframe matched by ``el``, or return to top when None."""
        if el is None:
            self._request("POST", "/frame", {"id": None})
            return
        ref = self._element_ref(el.css)
        self._request("POST", "/frame", {"id": self._wrap_ref(ref)})

    def reset(self, url: str) -> dom.PageSnapshot:
        """Clear cookies and storage for the origin, then navigate fresh.

        Guarantees consent-keyed notices reappear. If the session is parked
        on a different origin, hop there first so the deletes hit the right
        cookie jar.
        """
        from urllib.parse import urlparse

        current_host = urlparse(self.current_url()).netloc
        target_host = urlparse(url).netloc
        if current_host != target_host:
            self._request("POST", "/url", {"url": url})
        self._request("DELETE", "/cookie")
        try:
            self.execute(CLEAR_STORAGE_SCRIPT)
        except WireError:
            pass  # about:blank and friends have no storage
        return self.navigate(url)

    def close(self) -> None:
        try:
            self._request("DELETE", "")
        except (WireError, DriverUnreachable):
            pass


def open_session(
    endpoint: str,
    headless: bool = True,
    page_load_timeout_ms: int = 30_000,
    settle_delay_ms: int = 2000,
) -> Session:
    """Create a fresh-profile session against a WebDriver endpoint."""
    endpoint = endpoint.rstrip("/")
    chrome_args = ["--incognito", "--disable-application-cache"]
    if headless:
        chrome_args.append("--headless=new")
    payload = {
        "capabilities": {
            "alwaysMatch": {
                "browserName": "chrome",
                "goog:chromeOptions": {"args": chrome_args},
            }
        }
    }
    http = requests.Session()
    try:
        resp = http.post(f"{endpoint}/session", json=payload, timeout=30)
    except requests.RequestException as exc:
        raise DriverUnreachable(f"cannot reach driver at {endpoint}: {exc}", cause=exc) from exc
    try:
        body = resp.json()
    except ValueError as exc:
        raise DriverUnreachable(
            f"driver at {endpoint} returned malformed JSON",
            cause=ProtocolError(resp.text[:200]),
        ) from exc
    value = body.get("value") or {}
    if resp.status_code >= 400 or "sessionId" not in value:
        raise SessionRejected(value.get("message") or f"session refused: {resp.status_code}")
    session = Session(
        session_id=value["sessionId"],
        base_url=endpoint,
        page_load_timeout_ms=page_load_timeout_ms,
        settle_delay_ms=settle_delay_ms,
        http=http,
    )
    session._request("POST", "/timeouts", {"pageLoad": page_load_timeout_ms})
    return session
