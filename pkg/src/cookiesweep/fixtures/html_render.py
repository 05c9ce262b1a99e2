"""Render fixture sites to standalone HTML pages.

The rendered DOM mirrors the simulator tree exactly (same tags, attributes,
and sibling order), so selectors generated from simulator snapshots resolve
identically in a real browser. Scripted behaviors become a small inline
interpreter driven by a JSON behavior map; checkbox toggling stays native.
Used to build the corpus the enforcement extension is tested against.
"""

from __future__ import annotations

import html
import json
from pathlib import Path
from typing import Optional

from .sim import SimNode, SimSite

_VOID_TAGS = {"input", "img", "br", "hr", "meta", "link"}

_RUNTIME_JS = """
(function () {
  var FX = window.__FIXTURE__;
  function byFx(id) {
    return document.querySelector('[data-cwfx="' + id.replace(/"/g, '\\\\"') + '"]');
  }
  function hasCookie(name) {
    return document.cookie.split(';').some(function (c) {
      return c.trim().indexOf(name + '=') === 0;
    });
  }
  function apply(actions, el) {
    actions.forEach(function (act) {
      var target = act.target ? byFx(act.target) : el;
      if (!target && act.action !== 'set_cookie' && act.action !== 'navigate' && act.action !== 'new_tab') return;
      switch (act.action) {
        case 'toggle':
          if (target.tagName === 'INPUT') break; // native checkbox toggle
          var cur = target.getAttribute('aria-checked') === 'true';
          target.setAttribute('aria-checked', cur ? 'false' : 'true');
          break;
        case 'show':
          target.style.display = '';
          target.removeAttribute('data-cwfx-hidden');
          break;
        case 'hide':
          target.style.display = 'none';
          break;
        case 'remove':
          target.parentNode && target.parentNode.removeChild(target);
          break;
        case 'set_cookie':
          document.cookie = act.name + '=' + (act.value || '1') + ';path=/';
          break;
        case 'navigate':
          window.location.href = act.url;
          break;
        case 'new_tab':
          window.open('about:blank', '_blank');
          break;
      }
    });
  }
  document.addEventListener('click', function (ev) {
    var node = ev.target;
    while (node && node !== document) {
      var fx = node.getAttribute && node.getAttribute('data-cwfx');
      if (fx && FX.behaviors[fx]) {
        apply(FX.behaviors[fx], node);
        break;
      }
      node = node.parentNode;
    }
  });
  if (FX.consentCookie && hasCookie(FX.consentCookie)) {
    FX.gated.forEach(function (id) {
      var el = byFx(id);
      if (el) el.style.display = 'none';
    });
  }
  Object.keys(FX.appear).forEach(function (id) {
    setTimeout(function () {
      var el = byFx(id);
      if (el) el.style.display = '';
    }, FX.appear[id]);
  });
})();
"""


def _style(node: SimNode) -> str:
    x, y, w, h = node.bbox
    parts = [
        "position:absolute",
        f"left:{x:g}px",
        f"top:{y:g}px",
        f"width:{w:g}px",
        f"height:{h:g}px",
        "box-sizing:border-box",
    ]
    if node.z is not None:
        parts.append(f"z-index:{node.z}")
    if not node.display or node.injected or node.appear_after_ms:
        parts.append("display:none")
    return ";".join(parts)


def _node_html(node: SimNode, fx: dict, depth: int = 0, consent_cookie=None) -> str:
    attrs = dict(node.attrs)
    attrs["data-cwfx"] = node.id
    attrs["style"] = _style(node) + (";" + attrs["style"] if "style" in attrs else "")
    if node.tag == "input" and node.checked is not None:
        attrs.setdefault("type", "checkbox")
        if node.checked:
            attrs["checked"] = "checked"
    if node.on_click:
        fx["behaviors"][node.id] = node.on_click
    if node.consent_gate:
        fx["gated"].append(node.id)
    if node.appear_after_ms:
        fx["appear"][node.id] = node.appear_after_ms

    attr_text = "".join(f' {k}="{html.escape(str(v), quote=True)}"' for k, v in attrs.items())
    if node.tag in _VOID_TAGS:
        return f"<{node.tag}{attr_text}>"
    inner = html.escape(node.text) if node.text else ""
    if node.frame is not None:
        # iframe bodies become srcdoc documents with their own runtime
        srcdoc = render_document(node.frame.root, title="frame", consent_cookie=consent_cookie)
        attrs["srcdoc"] = srcdoc
        attr_text = "".join(
            f' {k}="{html.escape(str(v), quote=True)}"' for k, v in attrs.items()
        )
        return f"<{node.tag}{attr_text}></{node.tag}>"
    children = "".join(_node_html(c, fx, depth + 1, consent_cookie) for c in node.children)
    return f"<{node.tag}{attr_text}>{inner}{children}</{node.tag}>"


def render_document(
    root: SimNode, title: str, consent_cookie: Optional[str]
) -> str:
    fx: dict = {"behaviors": {}, "gated": [], "appear": {}, "consentCookie": consent_cookie}
    body_nodes = root.children[0].children if root.children else []
    body_inner = "".join(_node_html(c, fx, consent_cookie=consent_cookie) for c in body_nodes)
    return (
        "<!DOCTYPE html>\n"
        f"<html><head><meta charset='utf-8'><title>{html.escape(title)}</title></head>"
        f"<body>{body_inner}"
        f"<script>window.__FIXTURE__ = {json.dumps(fx)};</script>"
        f"<script>{_RUNTIME_JS}</script>"
        "</body></html>\n"
    )


def render_site(site: SimSite) -> str:
    doc = site.instantiate(cookies={})
    return render_document(doc.root, title=site.title, consent_cookie=site.consent_cookie)


def render_corpus(corpus: dict[str, SimSite], out_dir: Path) -> list[Path]:
    """One directory per domain with an index.html; returns written paths."""
    out_dir = Path(out_dir)
    written = []
    for domain, site in sorted(corpus.items()):
        site_dir = out_dir / domain
        site_dir.mkdir(parents=True, exist_ok=True)
        path = site_dir / "index.html"
        path.write_text(render_site(site), encoding="utf-8")
        written.append(path)
    return written
