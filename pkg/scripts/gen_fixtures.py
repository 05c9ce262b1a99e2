#!/usr/bin/env python3
"""Regenerate the scripted fixture corpus under src/cookiesweep/fixtures/sites/.

Each site is a JSON page script plus hand-derived expectations: the pipeline
status, the exact click plan, the per-element execution roles, and the
measurement flags. Expectations are the corpus author's ground truth, worked
out from the page behavior by hand; the test suite compares pipeline output
against them, so keep them honest when editing.

Conventions the page scripts follow:
  * notice containers carry stable ids and an explicit z-index;
  * injected (Type C revealed) nodes sit after their static siblings so
    nth-child selectors stay stable across reveal;
  * a consent cookie gates every notice so reset/replay is exercised.
"""

import json
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "cookiesweep" / "fixtures" / "sites"

COOKIE = "cw_consent"

_uid = [0]


def _id(prefix):
    _uid[0] += 1
    return f"{prefix}-{_uid[0]}"


def chrome(domain):
    """Header with two focusable links, a main column, and a footer."""
    return [
        {
            "id": "header",
            "tag": "header",
            "bbox": [0, 0, 1280, 60],
            "children": [
                {"id": "site-title", "tag": "h1", "text": f"{domain} weekly", "bbox": [10, 10, 300, 40]},
                {"id": "nav-home", "tag": "a", "attrs": {"href": "/"}, "text": "Home", "bbox": [700, 20, 60, 20]},
                {"id": "nav-about", "tag": "a", "attrs": {"href": "/about"}, "text": "About", "bbox": [780, 20, 60, 20]},
            ],
        },
        {
            "id": "main",
            "tag": "main",
            "bbox": [0, 60, 1280, 560],
            "children": [
                {"id": "story-1", "tag": "p", "text": "Local orchestra premieres a new symphony to a full house.", "bbox": [20, 80, 800, 60]},
                {"id": "story-2", "tag": "p", "text": "Transit authority adds two night bus lines from the harbor.", "bbox": [20, 150, 800, 60]},
            ],
        },
        {
            "id": "footer",
            "tag": "footer",
            "text": "contact us imprint archive",
            "bbox": [0, 620, 1280, 20],
        },
    ]


def button(node_id, text, x, y, actions, w=160, h=40, tag="button", attrs=None):
    node = {"id": node_id, "tag": tag, "text": text, "bbox": [x, y, w, h], "on_click": actions}
    if attrs:
        node["attrs"] = attrs
    return node


def close_notice(*notice_ids, consent=True):
    acts = [{"action": "hide", "target": nid} for nid in notice_ids]
    if consent:
        acts.append({"action": "set_cookie", "name": COOKIE, "value": "set"})
    return acts


def switch_input(node_id, aria_label, x, y, checked):
    return {
        "id": node_id,
        "tag": "input",
        "attrs": {"type": "checkbox", "aria-label": aria_label},
        "bbox": [x, y, 40, 20],
        "checked": checked,
        "on_click": [{"action": "toggle"}],
    }


def aria_switch(node_id, aria_label, x, y, checked):
    return {
        "id": node_id,
        "tag": "span",
        "attrs": {"role": "switch", "aria-checked": "true" if checked else "false", "aria-label": aria_label},
        "bbox": [x, y, 40, 20],
        "checked": checked,
        "tabindex": 0,
        "on_click": [{"action": "toggle"}],
    }


def site(domain, title, body, expected, notice_node=None, **extra):
    spec = {
        "domain": domain,
        "title": title,
        "consent_cookie": COOKIE,
        "body": body,
        "expected": expected,
    }
    if notice_node:
        spec["notice_node"] = notice_node
    spec.update(extra)
    return spec


SITES = []

# -- 1: two-view notice whose serialization matches the published sample ----
SITES.append(site(
    "two-view-confirm.example", "Two View Confirm",
    chrome("two-view-confirm.example") + [
        {
            "id": "notice0", "tag": "div", "attrs": {"id": "consent-banner"}, "z": 9000,
            "bbox": [0, 620, 1280, 180], "consent_gate": True,
            "children": [
                {"id": "n0-text", "tag": "p",
                 "text": "We use cookies to keep this site reliable and to measure usage.",
                 "bbox": [20, 630, 700, 40]},
                button("n0-customize", "Customize Settings", 740, 640, [
                    {"action": "hide", "target": "notice0"},
                    {"action": "show", "target": "notice1"},
                ]),
                button("n0-accept", "Accept All Cookies", 920, 640, close_notice("notice0")),
                {"id": "n0-policy", "tag": "a", "attrs": {"href": "/cookie-policy"},
                 "text": "Cookie Policy", "bbox": [1100, 650, 120, 20]},
            ],
        },
        {
            "id": "notice1", "tag": "div", "attrs": {"id": "consent-settings"}, "z": 9100,
            "bbox": [200, 100, 880, 500], "display": False, "consent_gate": True,
            "children": [
                {"id": "n1-title", "tag": "h2", "text": "Manage your cookie preferences by category.",
                 "bbox": [220, 110, 500, 30]},
                switch_input("n1-sw-perf", "Performance Cookies", 240, 160, False),
                switch_input("n1-sw-func", "Functional Cookies", 240, 200, False),
                switch_input("n1-sw-targ", "Targeting Cookies", 240, 240, False),
                button("n1-confirm", "Confirm My Choices", 240, 300, close_notice("notice1", "notice0")),
                button("n1-accept", "Accept All Cookies", 420, 300, close_notice("notice1", "notice0")),
                button("n1-cancel", "Cancel", 600, 300, [
                    {"action": "hide", "target": "notice1"},
                    {"action": "hide", "target": "notice0"},
                ]),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0 ** Click button6.",
        "serialized": "button0 - customize settings || button1 - accept all cookies ** "
                      "switch3 - performance cookies, not selected || switch4 - functional cookies, not selected || "
                      "switch5 - targeting cookies, not selected || button6 - confirm my choices || "
                      "button7 - accept all cookies || button8 - cancel <end>",
        "roles": {"button0": "TYPE_B", "button1": "TYPE_D", "switch3": "TYPE_A", "switch4": "TYPE_A",
                   "switch5": "TYPE_A", "button6": "TYPE_D", "button7": "TYPE_D", "button8": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice0",
))

# -- 2: reject available on the first view ---------------------------------
SITES.append(site(
    "reject-first.example", "Reject First News",
    chrome("reject-first.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "cookie-banner"}, "z": 9999,
            "bbox": [0, 640, 1280, 160], "consent_gate": True,
            "children": [
                {"id": "notice-text", "tag": "p",
                 "text": "We use cookies and similar technologies to deliver our services.",
                 "bbox": [20, 650, 700, 40]},
                button("btn-reject", "Reject non-essential", 900, 660, close_notice("notice")),
                button("btn-accept", "Accept all", 1080, 660, close_notice("notice"), w=120),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0.",
        "serialized": "button0 - reject non-essential || button1 - accept all <end>",
        "roles": {"button0": "TYPE_D", "button1": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice",
))

# -- 3: reject on view 0 even though a settings view exists ----------------
SITES.append(site(
    "reject-behind-more.example", "Streaming Site",
    chrome("reject-behind-more.example") + [
        {
            "id": "notice0", "tag": "div", "attrs": {"id": "cookie-notice"}, "z": 8000,
            "bbox": [0, 560, 1280, 240], "consent_gate": True,
            "children": [
                {"id": "n0-text", "tag": "p",
                 "text": "This site uses cookies for playback quality and personalised tips.",
                 "bbox": [20, 570, 600, 40]},
                {"id": "n0-privacy", "tag": "a", "attrs": {"href": "/privacy"},
                 "text": "Privacy statement", "bbox": [20, 620, 140, 20]},
                button("n0-learn", "Learn more about our cookies", 180, 640, [
                    {"action": "hide", "target": "notice0"},
                    {"action": "show", "target": "notice1"},
                ], w=220),
                button("n0-accept", "Accept", 420, 640, close_notice("notice0"), w=100),
                button("n0-reject", "Reject", 540, 640, close_notice("notice0"), w=100),
                button("n0-close", "Close", 660, 640, [{"action": "hide", "target": "notice0"}], w=100),
            ],
        },
        {
            "id": "notice1", "tag": "div", "attrs": {"id": "cookie-details"}, "z": 8100,
            "bbox": [200, 120, 880, 420], "display": False, "consent_gate": True,
            "children": [
                {"id": "n1-head", "tag": "h2", "text": "Cookie detail settings", "bbox": [220, 130, 300, 30]},
                switch_input("n1-sw-ads", "Advertising Cookies", 240, 180, True),
                button("n1-save", "Save settings", 240, 240, close_notice("notice1", "notice0")),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button3.",
        "serialized": "button1 - learn more about our cookies || button2 - accept || button3 - reject || "
                      "button4 - close ** switch5 - advertising cookies, selected || button6 - save settings <end>",
        "roles": {"button1": "TYPE_B", "button2": "TYPE_D", "button3": "TYPE_D", "button4": "TYPE_D",
                   "switch5": "TYPE_A", "button6": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice0",
))

# -- 4: customize view with a pre-enabled switch ----------------------------
SITES.append(site(
    "customize-switches.example", "Blog Host",
    chrome("customize-switches.example") + [
        {
            "id": "notice0", "tag": "div", "attrs": {"id": "consent-bar"}, "z": 7000,
            "bbox": [0, 660, 1280, 140], "consent_gate": True,
            "children": [
                {"id": "n0-text", "tag": "p",
                 "text": "Our sites use cookies. You can accept all or customize your preferences.",
                 "bbox": [20, 670, 640, 40]},
                button("n0-customize", "Customize", 700, 680, [
                    {"action": "hide", "target": "notice0"},
                    {"action": "show", "target": "notice1"},
                ], w=130),
                button("n0-accept", "Accept all", 850, 680, close_notice("notice0"), w=130),
            ],
        },
        {
            "id": "notice1", "tag": "div", "attrs": {"id": "consent-panel"}, "z": 7100,
            "bbox": [240, 140, 800, 420], "display": False, "consent_gate": True,
            "children": [
                {"id": "n1-head", "tag": "h2", "text": "Cookie preferences", "bbox": [260, 150, 280, 30]},
                switch_input("n1-sw-analytics", "Analytics Cookies", 280, 200, True),
                switch_input("n1-sw-ads", "Advertising Cookies", 280, 240, False),
                button("n1-save", "Accept selection", 280, 300, close_notice("notice1", "notice0")),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0 ** Click switch2 | Click button4.",
        "serialized": "button0 - customize || button1 - accept all ** switch2 - analytics cookies, selected || "
                      "switch3 - advertising cookies, not selected || button4 - accept selection <end>",
        "roles": {"button0": "TYPE_B", "button1": "TYPE_D", "switch2": "TYPE_A",
                   "switch3": "TYPE_A", "button4": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": True},
    },
    notice_node="notice0",
))

# -- 5: playful labels without standard wording -----------------------------
SITES.append(site(
    "playful-labels.example", "Snack Brand",
    chrome("playful-labels.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "cookie-jar"}, "z": 6000,
            "bbox": [300, 500, 680, 200], "consent_gate": True,
            "children": [
                {"id": "jar-text", "tag": "p",
                 "text": "This website uses cookies to give you a sweeter browsing experience. "
                         "Our cookie jar holds the full ingredient list.",
                 "bbox": [320, 520, 600, 40]},
                button("jar-yes", "Sweet!", 340, 590, close_notice("notice"), w=120),
                button("jar-no", "Sorry, I'm on a diet", 480, 590, close_notice("notice"), w=200),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button1.",
        "serialized": "button0 - sweet! || button1 - sorry, i'm on a diet <end>",
        "roles": {"button0": "TYPE_D", "button1": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice",
))

# -- 6: legitimate-interest objection inside the settings view --------------
SITES.append(site(
    "legit-interest.example", "Science Weekly",
    chrome("legit-interest.example") + [
        {
            "id": "notice0", "tag": "div", "attrs": {"id": "consent-root"}, "z": 9500,
            "bbox": [0, 600, 1280, 200], "consent_gate": True,
            "children": [
                {"id": "n0-text", "tag": "p",
                 "text": "We and our partners store cookies and process personal data to measure and improve.",
                 "bbox": [20, 610, 700, 60]},
                button("n0-accept", "I accept", 760, 630, close_notice("notice0"), w=110),
                button("n0-purposes", "Show purposes", 890, 630, [
                    {"action": "hide", "target": "notice0"},
                    {"action": "show", "target": "notice1"},
                ], w=150),
            ],
        },
        {
            "id": "notice1", "tag": "div", "attrs": {"id": "purposes-panel"}, "z": 9600,
            "bbox": [160, 80, 960, 520], "display": False, "consent_gate": True,
            "children": [
                {"id": "n1-head", "tag": "h2", "text": "Manage consent purposes for cookies",
                 "bbox": [180, 90, 400, 30]},
                button("n1-object", "Select basic ads; object to legitimate interests", 200, 150,
                       [], w=380),
                switch_input("n1-sw-analytics", "Analytics Cookies", 200, 210, False),
                button("n1-confirm", "Confirm my choices", 200, 280, close_notice("notice1", "notice0"), w=200),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button1 ** Click button2 | Click button4.",
        "serialized": "button0 - i accept || button1 - show purposes ** "
                      "button2 - select basic ads; object to legitimate interests || "
                      "switch3 - analytics cookies, not selected || button4 - confirm my choices <end>",
        "roles": {"button0": "TYPE_D", "button1": "TYPE_B", "button2": "TYPE_C",
                   "switch3": "TYPE_A", "button4": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice0",
))

# -- 7: accept-only banner ---------------------------------------------------
SITES.append(site(
    "accept-only.example", "Accept Only Gazette",
    chrome("accept-only.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "cookie-strip"}, "z": 5000,
            "bbox": [0, 720, 1280, 80], "consent_gate": True,
            "children": [
                {"id": "strip-text", "tag": "p",
                 "text": "By using this site you agree to our use of cookies.",
                 "bbox": [20, 730, 700, 30]},
                button("strip-accept", "I Accept", 900, 735, close_notice("notice"), w=120),
            ],
        },
    ],
    expected={
        "status": "ACCEPT_ONLY",
        "plan": "",
        "serialized": "button0 - i accept <end>",
        "roles": {"button0": "TYPE_D"},
        "m_flags": {"m1": True, "m2": True, "m3": False},
    },
    notice_node="notice",
))

# -- 8: accept-only after the policy link is filtered ------------------------
SITES.append(site(
    "accept-with-link.example", "Recipe Card",
    chrome("accept-with-link.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "cookie-note"}, "z": 5500,
            "bbox": [0, 700, 1280, 100], "consent_gate": True,
            "children": [
                {"id": "note-text", "tag": "p",
                 "text": "Cookies help us serve better recipes and remember your pantry.",
                 "bbox": [20, 710, 640, 30]},
                button("note-ok", "Got it", 700, 720, close_notice("notice"), w=110),
                {"id": "note-link", "tag": "a", "attrs": {"href": "/cookies-explained"},
                 "text": "What are cookies?", "bbox": [840, 725, 160, 20]},
            ],
        },
    ],
    expected={
        "status": "ACCEPT_ONLY",
        "plan": "",
        "serialized": "button0 - got it <end>",
        "roles": {"button0": "TYPE_D"},
        "m_flags": {"m1": True, "m2": True, "m3": False},
    },
    notice_node="notice",
))

# -- 9: inverted semantics, switch must be selected to opt out ---------------
SITES.append(site(
    "inverted-switch.example", "Retail Outlet",
    chrome("inverted-switch.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "privacy-bar"}, "z": 8800,
            "bbox": [0, 620, 1280, 180], "consent_gate": True,
            "children": [
                {"id": "bar-text", "tag": "p",
                 "text": "We use cookies for analytics and advertising unless you tell us not to.",
                 "bbox": [20, 630, 700, 40]},
                switch_input("bar-switch", "Do not allow non-essential cookies", 40, 690, False),
                button("bar-save", "Save", 760, 690, close_notice("notice"), w=100),
                button("bar-accept", "Accept", 880, 690, close_notice("notice"), w=110),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click switch0 | Click button1.",
        "serialized": "switch0 - do not allow non-essential cookies, not selected || "
                      "button1 - save || button2 - accept <end>",
        "roles": {"switch0": "TYPE_A", "button1": "TYPE_D", "button2": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": True},
    },
    notice_node="notice",
))

# -- 10: essential-only button on the first view -----------------------------
SITES.append(site(
    "essential-only.example", "Ticket Office",
    chrome("essential-only.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "cookie-choices"}, "z": 8600,
            "bbox": [0, 640, 1280, 160], "consent_gate": True,
            "children": [
                {"id": "choices-text", "tag": "p",
                 "text": "Choose how this site may use cookies during your visit.",
                 "bbox": [20, 650, 600, 40]},
                button("choices-necessary", "Only allow necessary cookies", 660, 660,
                       close_notice("notice"), w=250),
                button("choices-all", "Allow all cookies", 930, 660, close_notice("notice"), w=170),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0.",
        "serialized": "button0 - only allow necessary cookies || button1 - allow all cookies <end>",
        "roles": {"button0": "TYPE_D", "button1": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice",
))

# -- 11: negated switch already selected (privacy-preserving default) --------
SITES.append(site(
    "negated-selected.example", "Marketplace",
    chrome("negated-selected.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "privacy-panel"}, "z": 8400,
            "bbox": [0, 600, 1280, 200], "consent_gate": True,
            "children": [
                {"id": "panel-text", "tag": "p",
                 "text": "Cookie preferences: your sale opt-out is honored below.",
                 "bbox": [20, 610, 600, 40]},
                switch_input("panel-switch", "Do not sell my personal information", 40, 670, True),
                button("panel-save", "Save preferences", 760, 670, close_notice("notice"), w=170),
                button("panel-accept", "Accept all", 950, 670, close_notice("notice"), w=120),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button1.",
        "serialized": "switch0 - do not sell my personal information, selected || "
                      "button1 - save preferences || button2 - accept all <end>",
        "roles": {"switch0": "TYPE_A", "button1": "TYPE_D", "button2": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice",
))

# -- 12: several pre-enabled categories plus an essential one ----------------
SITES.append(site(
    "preenabled-categories.example", "Travel Portal",
    chrome("preenabled-categories.example") + [
        {
            "id": "notice0", "tag": "div", "attrs": {"id": "consent-home"}, "z": 9200,
            "bbox": [0, 640, 1280, 160], "consent_gate": True,
            "children": [
                {"id": "home-text", "tag": "p",
                 "text": "We store cookies to plan routes, remember trips, and show offers.",
                 "bbox": [20, 650, 640, 40]},
                button("home-settings", "Cookie settings", 700, 660, [
                    {"action": "hide", "target": "notice0"},
                    {"action": "show", "target": "notice1"},
                ], w=160),
                button("home-accept", "Accept all cookies", 880, 660, close_notice("notice0"), w=180),
            ],
        },
        {
            "id": "notice1", "tag": "div", "attrs": {"id": "consent-categories"}, "z": 9300,
            "bbox": [200, 100, 880, 520], "display": False, "consent_gate": True,
            "children": [
                {"id": "cat-head", "tag": "h2", "text": "Cookie categories", "bbox": [220, 110, 300, 30]},
                switch_input("cat-necessary", "Strictly necessary cookies", 240, 160, True),
                switch_input("cat-marketing", "Marketing cookies", 240, 200, True),
                switch_input("cat-stats", "Statistics cookies", 240, 240, True),
                switch_input("cat-social", "Social media cookies", 240, 280, False),
                button("cat-confirm", "Confirm choices", 240, 340, close_notice("notice1", "notice0"), w=170),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0 ** Click switch3 | Click switch4 | Click button6.",
        "serialized": "button0 - cookie settings || button1 - accept all cookies ** "
                      "switch2 - strictly necessary cookies, selected || switch3 - marketing cookies, selected || "
                      "switch4 - statistics cookies, selected || switch5 - social media cookies, not selected || "
                      "button6 - confirm choices <end>",
        "roles": {"button0": "TYPE_B", "button1": "TYPE_D", "switch2": "TYPE_A", "switch3": "TYPE_A",
                   "switch4": "TYPE_A", "switch5": "TYPE_A", "button6": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": True},
    },
    notice_node="notice0",
))

# -- 13: Type C tab that injects a hidden setting ----------------------------
SITES.append(site(
    "tabbed-settings.example", "Dental Supplies",
    chrome("tabbed-settings.example") + [
        {
            "id": "notice0", "tag": "div", "attrs": {"id": "cookie-home"}, "z": 9700,
            "bbox": [0, 660, 1280, 140], "consent_gate": True,
            "children": [
                {"id": "ch-text", "tag": "p",
                 "text": "Cookies power chat, analytics and tracking on this site.",
                 "bbox": [20, 670, 600, 40]},
                button("ch-more", "More information", 700, 680, [
                    {"action": "hide", "target": "notice0"},
                    {"action": "show", "target": "notice1"},
                ], w=170),
                button("ch-accept", "Accept cookies", 890, 680, close_notice("notice0"), w=160),
            ],
        },
        {
            "id": "notice1", "tag": "div", "attrs": {"id": "cookie-tabs"}, "z": 9800,
            "bbox": [220, 120, 840, 460], "display": False, "consent_gate": True,
            "children": [
                {"id": "tabs-head", "tag": "h2", "text": "Cookie settings by purpose", "bbox": [240, 130, 360, 30]},
                button("tab-analytics", "Analytics and Tracking Cookies", 240, 180, [
                    {"action": "show", "target": "sw-analytics"},
                ], w=280),
                button("tabs-save", "Save Settings", 240, 420, close_notice("notice1", "notice0"), w=160),
                {**switch_input("sw-analytics", "Analytics Cookies", 260, 240, True), "injected": True},
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0 ** Click button2 | Click switch4 | Click button3.",
        "serialized": "button0 - more information || button1 - accept cookies ** "
                      "button2 - analytics and tracking cookies || button3 - save settings || "
                      "switch4 - analytics cookies, selected <end>",
        "roles": {"button0": "TYPE_B", "button1": "TYPE_D", "button2": "TYPE_C",
                   "button3": "TYPE_D", "switch4": "TYPE_A"},
        "m_flags": {"m1": True, "m2": False, "m3": True},
    },
    notice_node="notice0",
))

# -- 14: notice inside a same-origin iframe ----------------------------------
SITES.append(site(
    "iframe-notice.example", "Embedded Consent",
    chrome("iframe-notice.example") + [
        {
            "id": "cmp-frame", "tag": "iframe", "attrs": {"id": "cmp-frame", "src": "/cmp"},
            "bbox": [0, 500, 1280, 300],
            "frame": {
                "viewport": [1280, 300],
                "body": [
                    {
                        "id": "frame-notice", "tag": "div", "attrs": {"id": "frame-consent"}, "z": 100,
                        "bbox": [0, 0, 1280, 300], "consent_gate": True,
                        "children": [
                            {"id": "frame-text", "tag": "p",
                             "text": "This consent manager sets cookies for ads personalisation.",
                             "bbox": [20, 20, 600, 40]},
                            button("frame-reject", "Reject all", 700, 40, close_notice("frame-notice"), w=120),
                            button("frame-accept", "Agree and close", 840, 40, close_notice("frame-notice"), w=160),
                        ],
                    },
                ],
            },
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0.",
        "serialized": "button0 - reject all || button1 - agree and close <end>",
        "roles": {"button0": "TYPE_D", "button1": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
))

# -- 15: full-page blocking wall ---------------------------------------------
SITES.append(site(
    "blocking-wall.example", "Paywall Post",
    chrome("blocking-wall.example") + [
        {
            "id": "wall", "tag": "div", "attrs": {"id": "consent-wall"}, "z": 99999,
            "bbox": [0, 0, 1280, 800], "consent_gate": True,
            "children": [
                {"id": "wall-head", "tag": "h2", "text": "Before you continue", "bbox": [440, 200, 400, 40]},
                {"id": "wall-text", "tag": "p",
                 "text": "We and our 63 partners use cookies to personalise content and measure performance.",
                 "bbox": [340, 260, 600, 60]},
                button("wall-agree", "Agree", 440, 360, close_notice("wall"), w=140),
                button("wall-disagree", "Disagree", 620, 360, close_notice("wall"), w=140),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button1.",
        "serialized": "button0 - agree || button1 - disagree <end>",
        "roles": {"button0": "TYPE_D", "button1": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="wall",
))

# -- 16: buggy notice that never closes --------------------------------------
SITES.append(site(
    "buggy-notice.example", "Flaky Forum",
    chrome("buggy-notice.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "broken-banner"}, "z": 4000,
            "bbox": [0, 700, 1280, 100], "consent_gate": True,
            "children": [
                {"id": "broken-text", "tag": "p",
                 "text": "We use cookies to keep you logged in and measure visits.",
                 "bbox": [20, 710, 600, 30]},
                button("broken-accept", "Accept cookies", 700, 720, [], w=150),
                button("broken-reject", "Reject all", 870, 720, [], w=120),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button1.",
        "serialized": "button0 - accept cookies || button1 - reject all <end>",
        "roles": {"button0": "TYPE_C", "button1": "TYPE_C"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice",
))

# -- 17: visually hidden checkbox behind a styled switch ---------------------
SITES.append(site(
    "hidden-checkbox.example", "CMP Styled",
    chrome("hidden-checkbox.example") + [
        {
            "id": "notice0", "tag": "div", "attrs": {"id": "cmp-banner"}, "z": 9050,
            "bbox": [0, 650, 1280, 150], "consent_gate": True,
            "children": [
                {"id": "cmp-text", "tag": "p",
                 "text": "Cookies keep our shop responsive and our ads relevant.",
                 "bbox": [20, 660, 600, 40]},
                button("cmp-prefs", "Manage preferences", 700, 670, [
                    {"action": "hide", "target": "notice0"},
                    {"action": "show", "target": "notice1"},
                ], w=190),
                button("cmp-allow", "Allow all", 910, 670, close_notice("notice0"), w=120),
            ],
        },
        {
            "id": "notice1", "tag": "div", "attrs": {"id": "cmp-preferences"}, "z": 9060,
            "bbox": [260, 160, 760, 400], "display": False, "consent_gate": True,
            "children": [
                {"id": "pref-head", "tag": "h2", "text": "Your cookie preferences", "bbox": [280, 170, 320, 30]},
                {
                    "id": "pref-row", "tag": "div", "bbox": [280, 220, 500, 40],
                    "children": [
                        {"id": "pref-visual", "tag": "span", "attrs": {"class": "toggle-skin"},
                         "text": "Advertising", "bbox": [280, 220, 120, 30]},
                        {"id": "pref-checkbox", "tag": "input",
                         "attrs": {"type": "checkbox", "aria-label": "Advertising Cookies", "class": "visually-hidden"},
                         "bbox": [300, 230, 0, 0], "checked": True,
                         "on_click": [{"action": "toggle"}]},
                    ],
                },
                button("pref-save", "Save my choices", 280, 300, close_notice("notice1", "notice0"), w=170),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0 ** Click switch3 | Click button2.",
        "serialized": "button0 - manage preferences || button1 - allow all ** "
                      "button2 - save my choices || switch3 - advertising cookies, selected <end>",
        "roles": {"button0": "TYPE_B", "button1": "TYPE_D", "button2": "TYPE_D", "switch3": "TYPE_A"},
        "m_flags": {"m1": True, "m2": False, "m3": True},
    },
    notice_node="notice0",
))

# -- 18: no notice at all -----------------------------------------------------
SITES.append(site(
    "no-notice.example", "Plain News", chrome("no-notice.example"),
    expected={
        "status": "NO_NOTICE",
        "plan": "",
        "serialized": "",
        "roles": {},
        "m_flags": {"m1": False, "m2": False, "m3": False},
    },
))

# -- 19: overlay that is not a cookie notice ----------------------------------
SITES.append(site(
    "newsletter-overlay.example", "Newsletter Push",
    chrome("newsletter-overlay.example") + [
        {
            "id": "promo", "tag": "div", "attrs": {"id": "newsletter-modal"}, "z": 3000,
            "bbox": [340, 200, 600, 300],
            "children": [
                {"id": "promo-head", "tag": "h2", "text": "Join our newsletter!", "bbox": [360, 220, 300, 40]},
                {"id": "promo-text", "tag": "p",
                 "text": "Weekly stories straight to your inbox. No spam, unsubscribe anytime.",
                 "bbox": [360, 270, 500, 40]},
                button("promo-sub", "Subscribe", 360, 340, [], w=130),
                button("promo-close", "Maybe later", 510, 340, [{"action": "hide", "target": "promo"}], w=130),
            ],
        },
    ],
    expected={
        "status": "NO_NOTICE",
        "plan": "",
        "serialized": "",
        "roles": {},
        "m_flags": {"m1": False, "m2": False, "m3": False},
    },
))

# -- 20: dedicated settings page link gets filtered ---------------------------
SITES.append(site(
    "dedicated-settings.example", "Career Network",
    chrome("dedicated-settings.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "consent-note"}, "z": 9999,
            "bbox": [0, 680, 1280, 120], "consent_gate": True,
            "children": [
                {"id": "cn-text", "tag": "p",
                 "text": "This site uses cookies to improve your professional experience.",
                 "bbox": [20, 690, 600, 40]},
                button("cn-manage", "Manage preferences", 680, 700,
                       [{"action": "navigate", "url": "/cookie-settings"}], w=190),
                button("cn-accept", "Accept cookies", 890, 700, close_notice("notice"), w=160),
            ],
        },
    ],
    expected={
        "status": "DEDICATED_PAGE",
        "plan": "",
        "serialized": "button1 - accept cookies <end>",
        "roles": {"button1": "TYPE_D"},
        "m_flags": {"m1": True, "m2": True, "m3": False},
    },
    notice_node="notice",
))

# -- 21: detector false positive weeded by the analyzer -----------------------
SITES.append(site(
    "outbound-links-only.example", "Legal Hub",
    chrome("outbound-links-only.example") + [
        {
            "id": "legal-box", "tag": "div", "attrs": {"id": "legal-links"}, "z": 2500,
            "bbox": [0, 720, 1280, 80], "consent_gate": True,
            "children": [
                {"id": "legal-text", "tag": "p",
                 "text": "Read about our cookie policy and how we handle privacy.",
                 "bbox": [20, 730, 500, 30]},
                {"id": "legal-cookie", "tag": "a", "attrs": {"href": "/cookie-policy"},
                 "text": "Cookie policy", "bbox": [560, 735, 120, 20]},
                {"id": "legal-privacy", "tag": "a", "attrs": {"href": "/privacy"},
                 "text": "Privacy notice", "bbox": [700, 735, 130, 20]},
            ],
        },
    ],
    expected={
        "status": "NO_NOTICE",
        "plan": "",
        "serialized": "",
        "roles": {},
        "m_flags": {"m1": False, "m2": False, "m3": False},
    },
))

# -- 22: many categories, essential one untouched -----------------------------
SITES.append(site(
    "mixed-categories.example", "Sports Hub",
    chrome("mixed-categories.example") + [
        {
            "id": "notice0", "tag": "div", "attrs": {"id": "consent-launcher"}, "z": 9400,
            "bbox": [0, 640, 1280, 160], "consent_gate": True,
            "children": [
                {"id": "launch-text", "tag": "p",
                 "text": "We use cookies for live scores, stats and advertising partners.",
                 "bbox": [20, 650, 640, 40]},
                button("launch-options", "Options", 700, 660, [
                    {"action": "hide", "target": "notice0"},
                    {"action": "show", "target": "notice1"},
                ], w=110),
                button("launch-accept", "Accept everything", 830, 660, close_notice("notice0"), w=180),
            ],
        },
        {
            "id": "notice1", "tag": "div", "attrs": {"id": "consent-matrix"}, "z": 9450,
            "bbox": [180, 80, 920, 560], "display": False, "consent_gate": True,
            "children": [
                {"id": "matrix-head", "tag": "h2", "text": "Cookie matrix", "bbox": [200, 90, 300, 30]},
                switch_input("mx-required", "Required cookies", 220, 140, True),
                switch_input("mx-performance", "Performance cookies", 220, 180, True),
                switch_input("mx-functional", "Functional cookies", 220, 220, False),
                switch_input("mx-targeting", "Targeting cookies", 220, 260, True),
                switch_input("mx-social", "Social cookies", 220, 300, False),
                button("mx-save", "Save and exit", 220, 360, close_notice("notice1", "notice0"), w=150),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0 ** Click switch3 | Click switch5 | Click button7.",
        "serialized": "button0 - options || button1 - accept everything ** "
                      "switch2 - required cookies, selected || switch3 - performance cookies, selected || "
                      "switch4 - functional cookies, not selected || switch5 - targeting cookies, selected || "
                      "switch6 - social cookies, not selected || button7 - save and exit <end>",
        "roles": {"button0": "TYPE_B", "button1": "TYPE_D", "switch2": "TYPE_A", "switch3": "TYPE_A",
                   "switch4": "TYPE_A", "switch5": "TYPE_A", "switch6": "TYPE_A", "button7": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": True},
    },
    notice_node="notice0",
))

# -- 23: notice appears shortly after load ------------------------------------
SITES.append(site(
    "delayed-banner.example", "Slow Loader",
    chrome("delayed-banner.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "late-banner"}, "z": 7500,
            "bbox": [0, 700, 1280, 100], "consent_gate": True, "appear_after_ms": 30,
            "children": [
                {"id": "late-text", "tag": "p",
                 "text": "Heads up: we use cookies for sessions and analytics.",
                 "bbox": [20, 710, 600, 30]},
                button("late-reject", "Decline", 700, 720, close_notice("notice"), w=110),
                button("late-accept", "Allow", 830, 720, close_notice("notice"), w=100),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0.",
        "serialized": "button0 - decline || button1 - allow <end>",
        "roles": {"button0": "TYPE_D", "button1": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice",
))

# -- 24: consent wording without the word cookie on the buttons ---------------
SITES.append(site(
    "consent-wording.example", "University Admissions",
    chrome("consent-wording.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "consent-ack"}, "z": 6500,
            "bbox": [240, 240, 800, 260], "consent_gate": True,
            "children": [
                {"id": "ack-text", "tag": "p",
                 "text": "I have read, understand, and consent to the enrollment management privacy policy.",
                 "bbox": [260, 260, 700, 60]},
                button("ack-consent", "Consent", 260, 360, close_notice("notice"), w=120),
                button("ack-decline", "Decline", 400, 360, close_notice("notice"), w=120),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button1.",
        "serialized": "button0 - consent || button1 - decline <end>",
        "roles": {"button0": "TYPE_D", "button1": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice",
))

# -- 25: two nested settings views (depth 2) -----------------------------------
SITES.append(site(
    "nested-depth2.example", "Bank Branch",
    chrome("nested-depth2.example") + [
        {
            "id": "notice0", "tag": "div", "attrs": {"id": "consent-l0"}, "z": 9910,
            "bbox": [0, 660, 1280, 140], "consent_gate": True,
            "children": [
                {"id": "l0-text", "tag": "p",
                 "text": "Cookies secure your session and help us improve our services.",
                 "bbox": [20, 670, 640, 40]},
                button("l0-settings", "Cookie settings", 700, 680, [
                    {"action": "hide", "target": "notice0"},
                    {"action": "show", "target": "notice1"},
                ], w=160),
                button("l0-accept", "Accept", 880, 680, close_notice("notice0"), w=110),
            ],
        },
        {
            "id": "notice1", "tag": "div", "attrs": {"id": "consent-l1"}, "z": 9920,
            "bbox": [260, 200, 760, 320], "display": False, "consent_gate": True,
            "children": [
                {"id": "l1-text", "tag": "p",
                 "text": "Basic cookie information and controls. Manage advanced cookie options below.",
                 "bbox": [280, 210, 400, 30]},
                button("l1-advanced", "Advanced options", 280, 260, [
                    {"action": "hide", "target": "notice1"},
                    {"action": "show", "target": "notice2"},
                ], w=180),
                button("l1-close", "Close", 480, 260, [
                    {"action": "hide", "target": "notice1"},
                    {"action": "hide", "target": "notice0"},
                ], w=100),
            ],
        },
        {
            "id": "notice2", "tag": "div", "attrs": {"id": "consent-l2"}, "z": 9930,
            "bbox": [300, 160, 680, 400], "display": False, "consent_gate": True,
            "children": [
                {"id": "l2-head", "tag": "h2", "text": "Advanced cookie controls", "bbox": [320, 170, 360, 30]},
                switch_input("l2-tracking", "Tracking cookies", 340, 220, True),
                button("l2-confirm", "Confirm", 340, 280, close_notice("notice2", "notice1", "notice0"), w=130),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0 ** Click button2 ** Click switch4 | Click button5.",
        "serialized": "button0 - cookie settings || button1 - accept ** "
                      "button2 - advanced options || button3 - close ** "
                      "switch4 - tracking cookies, selected || button5 - confirm <end>",
        "roles": {"button0": "TYPE_B", "button1": "TYPE_D", "button2": "TYPE_B",
                   "button3": "TYPE_D", "switch4": "TYPE_A", "button5": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": True},
    },
    notice_node="notice0",
))

# -- 26: aria-checked switch (no checkbox input) -------------------------------
SITES.append(site(
    "aria-switch.example", "Podcast Index",
    chrome("aria-switch.example") + [
        {
            "id": "notice0", "tag": "div", "attrs": {"id": "consent-pod"}, "z": 8200,
            "bbox": [0, 680, 1280, 120], "consent_gate": True,
            "children": [
                {"id": "pod-text", "tag": "p",
                 "text": "We use cookies to remember playback position and show ads.",
                 "bbox": [20, 690, 600, 40]},
                button("pod-manage", "Manage", 700, 700, [
                    {"action": "hide", "target": "notice0"},
                    {"action": "show", "target": "notice1"},
                ], w=110),
                button("pod-ok", "Okay", 830, 700, close_notice("notice0"), w=100),
            ],
        },
        {
            "id": "notice1", "tag": "div", "attrs": {"id": "consent-pod-panel"}, "z": 8300,
            "bbox": [280, 220, 720, 280], "display": False, "consent_gate": True,
            "children": [
                {"id": "podp-head", "tag": "h2", "text": "Cookie preferences for listeners",
                 "bbox": [300, 230, 380, 30]},
                aria_switch("podp-ads", "Ad Personalisation", 320, 280, True),
                button("podp-done", "Save choices", 320, 340, close_notice("notice1", "notice0"), w=140),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0 ** Click switch2 | Click button3.",
        "serialized": "button0 - manage || button1 - okay ** "
                      "switch2 - ad personalisation, selected || button3 - save choices <end>",
        "roles": {"button0": "TYPE_B", "button1": "TYPE_D", "switch2": "TYPE_A", "button3": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": True},
    },
    notice_node="notice0",
))

# -- 27: tab order differs from document order ----------------------------------
SITES.append(site(
    "tab-order-custom.example", "Style Magazine",
    chrome("tab-order-custom.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "consent-style"}, "z": 7800,
            "bbox": [0, 700, 1280, 100], "consent_gate": True,
            "children": [
                {"id": "style-text", "tag": "p",
                 "text": "Cookies tailor the looks we show you.",
                 "bbox": [20, 710, 500, 30]},
                {**button("style-accept", "Accept all", 600, 720, close_notice("notice"), w=120),
                 "tabindex": 2},
                {**button("style-reject", "Refuse all", 740, 720, close_notice("notice"), w=120),
                 "tabindex": 1},
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button0.",
        "serialized": "button0 - refuse all || button1 - accept all <end>",
        "roles": {"button0": "TYPE_D", "button1": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice",
))

# -- 28: new-tab policy link filtered statically ---------------------------------
SITES.append(site(
    "new-tab-policy.example", "Hardware Store",
    chrome("new-tab-policy.example") + [
        {
            "id": "notice", "tag": "div", "attrs": {"id": "consent-hw"}, "z": 8700,
            "bbox": [0, 700, 1280, 100], "consent_gate": True,
            "children": [
                {"id": "hw-policy", "tag": "a",
                 "attrs": {"href": "/cookie-policy", "target": "_blank"},
                 "text": "Cookie policy", "bbox": [20, 720, 120, 20]},
                {"id": "hw-text", "tag": "p",
                 "text": "We use cookies for cart and stock alerts.",
                 "bbox": [160, 710, 480, 30]},
                button("hw-refuse", "Refuse", 700, 720, close_notice("notice"), w=110),
                button("hw-allow", "Allow", 830, 720, close_notice("notice"), w=100),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button1.",
        "serialized": "button1 - refuse || button2 - allow <end>",
        "roles": {"button1": "TYPE_D", "button2": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": False},
    },
    notice_node="notice",
))

# -- 29: filter probe on accept must restore before exploring ---------------------
SITES.append(site(
    "probe-restore.example", "Game Arcade",
    chrome("probe-restore.example") + [
        {
            "id": "notice0", "tag": "div", "attrs": {"id": "consent-arcade"}, "z": 9990,
            "bbox": [0, 640, 1280, 160], "consent_gate": True,
            "children": [
                {"id": "arcade-text", "tag": "p",
                 "text": "Cookies save your high scores and pick the ads you see.",
                 "bbox": [20, 650, 640, 40]},
                button("arcade-accept", "Accept all cookies", 700, 660, close_notice("notice0"), w=180),
                button("arcade-choose", "Let me choose", 900, 660, [
                    {"action": "hide", "target": "notice0"},
                    {"action": "show", "target": "notice1"},
                ], w=150),
            ],
        },
        {
            "id": "notice1", "tag": "div", "attrs": {"id": "consent-arcade-panel"}, "z": 9995,
            "bbox": [300, 200, 680, 320], "display": False, "consent_gate": True,
            "children": [
                {"id": "ap-head", "tag": "h2", "text": "Choose your cookies", "bbox": [320, 210, 300, 30]},
                switch_input("ap-ads", "Advertising cookies", 340, 260, True),
                button("ap-save", "Save", 340, 320, close_notice("notice1", "notice0"), w=110),
            ],
        },
    ],
    expected={
        "status": "PLAN",
        "plan": "Click button1 ** Click switch2 | Click button3.",
        "serialized": "button0 - accept all cookies || button1 - let me choose ** "
                      "switch2 - advertising cookies, selected || button3 - save <end>",
        "roles": {"button0": "TYPE_D", "button1": "TYPE_B", "switch2": "TYPE_A", "button3": "TYPE_D"},
        "m_flags": {"m1": True, "m2": False, "m3": True},
    },
    notice_node="notice0",
))


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for stale in OUT_DIR.glob("*.json"):
        stale.unlink()
    for spec in SITES:
        path = OUT_DIR / f"{spec['domain'].replace('.example', '')}.json"
        path.write_text(json.dumps(spec, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {len(SITES)} fixture sites to {OUT_DIR}")


if __name__ == "__main__":
    main()
