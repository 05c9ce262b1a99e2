"""W3C WebDriver wire server backed by the page simulator.

Implements exactly the protocol surface the pipeline's driver client speaks,
over ``SimSession`` state. Runs threaded so a pool of concurrent sessions
(the measurement harness default) works; each session's operations are
serialized with a per-session lock, matching real driver semantics.
"""

from __future__ import annotations

import json
import re
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .sim import SimError, SimSession, SimSite

W3C_ELEMENT_KEY = "element-6066-11e4-a52e-4f735466cecf"
TAB_KEY = ""

_ERROR_STATUS = {
    "invalid session id": 404,
    "no such element": 404,
    "stale element reference": 404,
    "no such window": 404,
    "no such frame": 404,
    "unknown command": 404,
    "element not interactable": 400,
    "invalid argument": 400,
    "invalid selector": 400,
    "session not created": 500,
    "timeout": 500,
    "unknown error": 500,
}


class _SessionBox:
    def __init__(self, sim: SimSession):
        self.sim = sim
        self.lock = threading.Lock()


class FixtureDriverHandler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"
    server_version = "FixtureDriver/0.1"

    def log_message(self, fmt, *args):  # silence per-request noise
        pass

    # -- plumbing ------------------------------------------------------

    def _body(self) -> dict:
        if not self._raw_body:
            return {}
        try:
            return json.loads(self._raw_body)
        except json.JSONDecodeError:
            raise SimError("invalid argument", "request body is not JSON") from None

    def _send(self, status: int, payload: dict) -> None:
        data = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _ok(self, value) -> None:
        self._send(200, {"value": value})

    def _error(self, err: SimError) -> None:
        status = _ERROR_STATUS.get(err.code, 500)
        self._send(
            status,
            {"value": {"error": err.code, "message": str(err), "stacktrace": ""}},
        )

    def _dispatch(self, method: str) -> None:
        # Drain the request body up front: unread bytes would corrupt the
        # next request on a keep-alive connection.
        length = int(self.headers.get("Content-Length") or 0)
        self._raw_body = self.rfile.read(length) if length else b""
        try:
            self._route(method, self.path.rstrip("/"))
        except SimError as err:
            self._error(err)
        except Exception as err:  # sim bug: surface as unknown error
            self._error(SimError("unknown error", f"{type(err).__name__}: {err}"))

    def do_GET(self):
        self._dispatch("GET")

    def do_POST(self):
        self._dispatch("POST")

    def do_DELETE(self):
        self._dispatch("DELETE")

    # -- routing --------------------------------------------------------

    def _route(self, method: str, path: str) -> None:
        server: FixtureDriverServer = self.server  # type: ignore[assignment]
        if method == "POST" and path == "/session":
            self._new_session(server)
            return

        m = re.match(r"^/session/([^/]+)(/.*)?$", path)
        if not m:
            raise SimError("unknown command", f"{method} {path}")
        sid, rest = m.group(1), m.group(2) or ""
        box = server.sessions.get(sid)
        if box is None:
            raise SimError("invalid session id", sid)
        with box.lock:
            self._session_command(server, sid, box.sim, method, rest)

    def _new_session(self, server: "FixtureDriverServer") -> None:
        body = self._body()
        caps = body.get("capabilities", {})
        always = caps.get("alwaysMatch", {}) if isinstance(caps, dict) else {}
        if always.get("fixture:rejectSession"):
            raise SimError("session not created", "capabilities refused by fixture")
        sid = uuid.uuid4().hex
        server.sessions[sid] = _SessionBox(SimSession(server.corpus))
        self._ok({"sessionId": sid, "capabilities": {"browserName": "fixture"}})

    def _session_command(
        self,
        server: "FixtureDriverServer",
        sid: str,
        sim: SimSession,
        method: str,
        rest: str,
    ) -> None:
        if rest == "" and method == "DELETE":
            server.sessions.pop(sid, None)
            self._ok(None)
        elif rest == "/timeouts" and method == "POST":
            body = self._body()
            if "pageLoad" in body:
                sim.page_load_timeout_ms = int(body["pageLoad"])
            self._ok(None)
        elif rest == "/url" and method == "POST":
            sim.navigate(self._body()["url"])
            self._ok(None)
        elif rest == "/url" and method == "GET":
            self._ok(sim.url)
        elif rest == "/execute/sync" and method == "POST":
            self._execute(sim, self._body())
        elif rest == "/element" and method == "POST":
            body = self._body()
            if body.get("using") != "css selector":
                raise SimError("invalid argument", f"unsupported strategy {body.get('using')!r}")
            node = sim.find(body["value"])
            self._ok({W3C_ELEMENT_KEY: sim.make_ref(node)})
        elif rest == "/cookie" and method == "DELETE":
            sim.delete_cookies()
            self._ok(None)
        elif rest == "/actions" and method == "POST":
            self._actions(sim, self._body())
        elif rest == "/window/handles" and method == "GET":
            self._ok([w.handle for w in sim.windows])
        elif rest == "/window" and method == "POST":
            handle = self._body().get("handle")
            if handle not in [w.handle for w in sim.windows]:
                raise SimError("no such window", str(handle))
            sim.current_window = handle
            self._ok(None)
        elif rest == "/window" and method == "DELETE":
            sim.windows = [w for w in sim.windows if w.handle != sim.current_window]
            if not sim.windows:
                server.sessions.pop(sid, None)
            else:
                sim.current_window = sim.windows[0].handle
            self._ok([w.handle for w in sim.windows])
        elif rest == "/frame" and method == "POST":
            target = self._body().get("id")
            if target is None:
                sim.switch_frame(None)
            else:
                sim.switch_frame(target[W3C_ELEMENT_KEY])
            self._ok(None)
        elif (m := re.match(r"^/element/([^/]+)/click$", rest)) and method == "POST":
            node = sim.deref(m.group(1))
            sim.click(node)
            self._ok(None)
        elif (m := re.match(r"^/element/([^/]+)/selected$", rest)) and method == "GET":
            node = sim.deref(m.group(1))
            self._ok(bool(node.checked))
        else:
            raise SimError("unknown command", f"{method} /session/<id>{rest}")

    # -- script + action emulation ----------------------------------------

    def _execute(self, sim: SimSession, body: dict) -> None:
        script: str = body.get("script", "")
        args: list = body.get("args", [])
        if "/*cw:snapshot*/" in script:
            self._ok(sim.snapshot())
        elif "/*cw:url*/" in script:
            self._ok(sim.url)
        elif "/*cw:ready*/" in script:
            self._ok("complete")
        elif "/*cw:focus*/" in script:
            node = sim.deref(args[0][W3C_ELEMENT_KEY])
            sim.focus_node(node)
            self._ok(None)
        elif "/*cw:active*/" in script:
            self._ok(sim.focus)
        elif "/*cw:state*/" in script:
            node = sim.deref(args[0][W3C_ELEMENT_KEY])
            self._ok(sim.element_state(node))
        elif "/*cw:clear_storage*/" in script:
            sim.clear_storage()
            self._ok(None)
        else:
            raise SimError("unknown error", f"unrecognized fixture script: {script[:60]!r}")

    def _actions(self, sim: SimSession, body: dict) -> None:
        for track in body.get("actions", []):
            if track.get("type") != "key":
                continue
            for item in track.get("actions", []):
                if item.get("type") == "keyDown" and item.get("value") == TAB_KEY:
                    sim.press_tab()
        self._ok(None)


class FixtureDriverServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(self, corpus: dict[str, SimSite], host: str = "127.0.0.1", port: int = 0):
        super().__init__((host, port), FixtureDriverHandler)
        self.corpus = corpus
        self.sessions: dict[str, _SessionBox] = {}

    @property
    def endpoint(self) -> str:
        return f"http://{self.server_address[0]}:{self.server_address[1]}"

    def start_background(self) -> threading.Thread:
        thread = threading.Thread(target=self.serve_forever, daemon=True)
        thread.start()
        return thread


def serve_driver(
    corpus: dict[str, SimSite], host: str = "127.0.0.1", port: int = 0
) -> FixtureDriverServer:
    server = FixtureDriverServer(corpus, host=host, port=port)
    server.start_background()
    return server
