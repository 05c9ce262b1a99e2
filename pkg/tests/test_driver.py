"""Wire client against the fixture WebDriver server, plus stub servers for
the protocol-error paths."""

import http.server
import threading

import pytest

from cookiesweep import dom, driver
from cookiesweep.errors import ContainerGone, DriverUnreachable, NavTimeout, SessionRejected
from cookiesweep.fixtures.server import serve_driver
from cookiesweep.fixtures.sim import SimSite


def css(s):
    return dom.SelectorPath(css=s, strategy=dom.SelectorStrategy.BY_ATTR_COMBO)


@pytest.fixture(scope="module")
def basic_site():
    return SimSite({
        "domain": "driver-test.example",
        "title": "Driver Test",
        "consent_cookie": "cw_consent",
        "body": [
            {"id": "hdr", "tag": "header", "bbox": [0, 0, 1280, 50], "children": [
                {"id": "nav1", "tag": "a", "attrs": {"href": "/a"}, "text": "A", "bbox": [0, 0, 20, 20]},
                {"id": "nav2", "tag": "a", "attrs": {"href": "/b"}, "text": "B", "bbox": [30, 0, 20, 20]},
            ]},
            {"id": "banner", "tag": "div", "attrs": {"id": "banner"}, "z": 100,
             "bbox": [0, 600, 1280, 200], "consent_gate": True, "children": [
                {"id": "msg", "tag": "p", "text": "cookies ahoy", "bbox": [0, 610, 300, 20]},
                {"id": "toggle", "tag": "input", "attrs": {"type": "checkbox", "aria-label": "Ads"},
                 "bbox": [10, 640, 20, 20], "checked": False,
                 "on_click": [{"action": "toggle"}]},
                {"id": "ok", "tag": "button", "text": "OK", "bbox": [40, 640, 60, 30],
                 "on_click": [{"action": "hide", "target": "banner"},
                               {"action": "set_cookie", "name": "cw_consent", "value": "1"}]},
                {"id": "vanish", "tag": "button", "text": "Vanish", "bbox": [110, 640, 60, 30],
                 "on_click": [{"action": "remove", "target": "vanish"}]},
                {"id": "ext", "tag": "a", "attrs": {"href": "https://elsewhere.example/page"},
                 "text": "Elsewhere", "bbox": [180, 645, 80, 20]},
                {"id": "popup", "tag": "a", "attrs": {"href": "/p", "target": "_blank"},
                 "text": "Popup", "bbox": [270, 645, 60, 20]},
            ]},
            {"id": "empty-box", "tag": "div", "attrs": {"id": "empty-box"},
             "bbox": [0, 500, 100, 50]},
        ],
    })


@pytest.fixture(scope="module")
def server(basic_site):
    slow = SimSite({"domain": "slow.example", "load_delay_ms": 300, "body": [
        {"id": "late", "tag": "p", "text": "finally", "bbox": [0, 0, 10, 10]},
    ]})
    srv = serve_driver({basic_site.domain: basic_site, "slow.example": slow})
    yield srv
    srv.shutdown()


@pytest.fixture
def session(server):
    s = driver.open_session(server.endpoint, settle_delay_ms=0)
    yield s
    s.close()


URL = "http://driver-test.example/"


class TestOpenSession:
    def test_valid_endpoint(self, server):
        s = driver.open_session(server.endpoint)
        assert s.session_id
        s.close()

    def test_unreachable_endpoint(self):
        with pytest.raises(DriverUnreachable):
            driver.open_session("http://127.0.0.1:1", headless=True)

    def test_malformed_json_is_protocol_error(self):
        class Garbage(http.server.BaseHTTPRequestHandler):
            def do_POST(self):
                body = b"<html>not json</html>"
                self.send_response(200)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def log_message(self, *a):
                pass

        srv = http.server.ThreadingHTTPServer(("127.0.0.1", 0), Garbage)
        threading.Thread(target=srv.serve_forever, daemon=True).start()
        try:
            with pytest.raises(DriverUnreachable) as info:
                driver.open_session(f"http://127.0.0.1:{srv.server_address[1]}")
            assert isinstance(info.value.cause, driver.ProtocolError)
        finally:
            srv.shutdown()

    def test_rejected_capabilities(self, server, monkeypatch):
        import requests

        real_post = requests.Session.post

        def sabotaged(self, url, **kwargs):
            if url.endswith("/session"):
                kwargs["json"]["capabilities"]["alwaysMatch"]["fixture:rejectSession"] = True
            return real_post(self, url, **kwargs)

        monkeypatch.setattr(requests.Session, "post", sabotaged)
        with pytest.raises(SessionRejected):
            driver.open_session(server.endpoint)


class TestNavigate:
    def test_snapshot_ready(self, session):
        page = session.navigate(URL)
        assert page.ready and page.title == "Driver Test"
        assert page.get("banner").displayed

    def test_unknown_host_still_renders(self, session):
        page = session.navigate("http://nowhere.example/404")
        assert page.ready and len(page.elements) >= 1

    def test_timeout_on_slow_page(self, server):
        s = driver.open_session(server.endpoint, page_load_timeout_ms=50, settle_delay_ms=0)
        try:
            with pytest.raises(NavTimeout):
                s.navigate("http://slow.example/")
        finally:
            s.close()

    def test_slow_page_within_timeout(self, server):
        s = driver.open_session(server.endpoint, page_load_timeout_ms=2000, settle_delay_ms=0)
        try:
            page = s.navigate("http://slow.example/")
            assert page.get("late") is not None
        finally:
            s.close()


class TestClick:
    def test_visible_button(self, session):
        session.navigate(URL)
        out = session.click(css("#banner > button:nth-child(3)"))
        assert out == driver.ClickOutcome(clicked=True)

    def test_second_click_after_close_fails(self, session):
        page = session.navigate(URL)
        ok = page.get("ok").selector_path
        assert session.click(ok).clicked
        out = session.click(ok)
        assert not out.clicked
        assert out.error_kind in (
            driver.ClickErrorKind.NOT_INTERACTABLE,
            driver.ClickErrorKind.STALE,
        )

    def test_removed_element_reports_stale(self, session):
        page = session.navigate(URL)
        vanish = page.get("vanish").selector_path
        assert session.click(vanish).clicked
        out = session.click(vanish)
        assert not out.clicked
        assert out.error_kind is driver.ClickErrorKind.STALE

    def test_offsite_anchor_reports_url_change(self, session):
        page = session.navigate(URL)
        out = session.click(page.get("ext").selector_path)
        assert out.clicked and out.url_changed

    def test_new_tab_detected_and_closed(self, session):
        page = session.navigate(URL)
        out = session.click(page.get("popup").selector_path)
        assert out.clicked and out.new_tab_opened
        assert len(session.window_handles()) == 1

    def test_clicked_invariant(self):
        with pytest.raises(ValueError):
            driver.ClickOutcome(clicked=True, error_kind=driver.ClickErrorKind.STALE)


class TestQueryState:
    def test_checkbox_states(self, session):
        page = session.navigate(URL)
        toggle = page.get("toggle").selector_path
        assert session.query_state(toggle) is driver.ElementState.NOT_SELECTED
        session.click(toggle)
        assert session.query_state(toggle) is driver.ElementState.SELECTED

    def test_plain_button_stateless(self, session):
        page = session.navigate(URL)
        assert session.query_state(page.get("ok").selector_path) is driver.ElementState.STATELESS

    def test_gone_after_removal(self, session):
        page = session.navigate(URL)
        ok = page.get("ok").selector_path
        session.click(ok)  # hides the banner
        assert session.query_state(ok) is driver.ElementState.GONE

    def test_unknown_selector_gone(self, session):
        session.navigate(URL)
        assert session.query_state(css("#never-existed")) is driver.ElementState.GONE


class TestTabCycle:
    def test_banner_controls_in_order(self, session):
        session.navigate(URL)
        got = session.tab_cycle(css("#banner"))
        assert [e.node_id for e in got] == ["toggle", "ok", "vanish", "ext", "popup"]

    def test_container_without_focusables(self, session):
        session.navigate(URL)
        assert session.tab_cycle(css("#empty-box")) == []

    def test_missing_container_raises(self, session):
        session.navigate(URL)
        with pytest.raises(ContainerGone):
            session.tab_cycle(css("#nope"))

    def test_terminates_within_bound(self, session, server):
        # focus escapes to page chrome after the banner's last control and
        # must stop after two consecutive outside hits
        page = session.navigate(URL)
        presses = len(page.elements) + 2
        got = session.tab_cycle(css("#banner"))
        assert len(got) <= presses


class TestReset:
    def test_consented_banner_comes_back(self, session):
        page = session.navigate(URL)
        session.click(page.get("ok").selector_path)
        after = session.navigate(URL)
        assert not after.get("banner").displayed  # consent cookie keeps it hidden
        fresh = session.reset(URL)
        assert fresh.get("banner").displayed

    def test_fresh_session_reset_equals_navigate(self, server):
        s = driver.open_session(server.endpoint, settle_delay_ms=0)
        try:
            page = s.reset(URL)
            assert page.get("banner").displayed
        finally:
            s.close()
