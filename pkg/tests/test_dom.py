"""Snapshot model, visibility, stacking order, and selector generation.

Selector correctness is cross-checked against the simulator's independent
CSS evaluator: the generator never sees it, so a round-trip through both
implementations is a real oracle.
"""

import pytest

from cookiesweep import dom
from cookiesweep.errors import EmptyPage

from conftest import sim_page


def el(node_id, tag="div", x=0, y=0, w=10, h=10, displayed=True, attrs=None,
       z=dom.AUTO, text="", order=0, parent=None):
    return dom.ElementSnapshot(
        node_id=node_id,
        tag_name=tag,
        attributes=attrs or {},
        z_index=z,
        bbox=dom.BBox(x, y, w, h),
        displayed=displayed,
        own_text=text,
        doc_order=order,
        parent_id=parent,
    )


class TestVisibility:
    def test_displayed_with_area(self):
        assert dom.is_visible(el("a", w=100, h=40))

    def test_zero_area_is_invisible(self):
        assert not dom.is_visible(el("a", w=0, h=0))

    def test_hidden_flag_wins(self):
        assert not dom.is_visible(el("a", w=100, h=40, displayed=False))


class TestStackingCandidates:
    def _page(self, extra):
        body = [
            {"id": "p1", "tag": "p", "text": "one", "bbox": [0, 0, 100, 20]},
            {"id": "p2", "tag": "p", "text": "two", "bbox": [0, 20, 100, 20]},
            {"id": "p3", "tag": "p", "text": "three", "bbox": [0, 40, 100, 20]},
            {"id": "p4", "tag": "p", "text": "four", "bbox": [0, 60, 100, 20]},
            {"id": "p5", "tag": "p", "text": "five", "bbox": [0, 80, 100, 20]},
        ] + extra
        page, _ = sim_page(body)
        return page

    def test_overlay_first_then_edge_elements(self):
        page = self._page([
            {"id": "overlay", "tag": "div", "z": 9999, "bbox": [0, 0, 50, 50], "text": "overlay"},
        ])
        got = dom.stacking_candidates(page)
        assert got[0].node_id == "overlay"
        # first three and last three visible body elements follow, deduplicated
        assert [e.node_id for e in got[1:]] == ["p1", "p2", "p3", "p4", "p5"]

    def test_no_explicit_z_yields_edges_only(self):
        page = self._page([])
        got = [e.node_id for e in dom.stacking_candidates(page)]
        assert got == ["p1", "p2", "p3", "p4", "p5"]

    def test_higher_z_sorts_first(self):
        page = self._page([
            {"id": "low", "tag": "div", "z": 10, "bbox": [0, 0, 10, 10], "text": "a"},
            {"id": "high", "tag": "div", "z": 20, "bbox": [0, 0, 10, 10], "text": "b"},
        ])
        got = [e.node_id for e in dom.stacking_candidates(page)]
        assert got.index("high") < got.index("low")

    def test_equal_z_later_dom_wins(self):
        page = self._page([
            {"id": "first", "tag": "div", "z": 10, "bbox": [0, 0, 10, 10], "text": "a"},
            {"id": "second", "tag": "div", "z": 10, "bbox": [0, 0, 10, 10], "text": "b"},
        ])
        got = [e.node_id for e in dom.stacking_candidates(page)]
        assert got.index("second") < got.index("first")

    def test_all_candidates_visible(self):
        page = self._page([
            {"id": "hidden-overlay", "tag": "div", "z": 5000, "display": False,
             "bbox": [0, 0, 10, 10]},
        ])
        got = dom.stacking_candidates(page)
        assert all(dom.is_visible(e) for e in got)
        assert "hidden-overlay" not in [e.node_id for e in got]

    def test_size_bound(self):
        page = self._page([
            {"id": f"z{i}", "tag": "div", "z": i, "bbox": [0, 0, 10, 10]} for i in range(4)
        ])
        explicit = sum(1 for e in page.elements if e.has_explicit_z and e.z_index >= 0)
        assert len(dom.stacking_candidates(page)) <= explicit + 6

    def test_empty_page_raises(self):
        page = dom.PageSnapshot(url="http://x/", elements=())
        with pytest.raises(EmptyPage):
            dom.stacking_candidates(page)


class TestGenerateSelector:
    def test_unique_id_strategy(self):
        page, _ = sim_page([
            {"id": "n", "tag": "div", "attrs": {"id": "cookie-banner"}, "bbox": [0, 0, 10, 10]},
        ])
        sel = page.get("n").selector_path
        assert sel.css == "#cookie-banner"
        assert sel.strategy is dom.SelectorStrategy.BY_ID

    def test_nth_child_chain_for_second_button(self):
        page, sim = sim_page([
            {"id": "n", "tag": "div", "attrs": {"id": "notice"}, "bbox": [0, 0, 100, 100],
             "children": [
                 {"id": "wrap", "tag": "div", "bbox": [0, 0, 100, 50], "children": [
                     {"id": "b1", "tag": "button", "text": "Accept", "bbox": [0, 0, 10, 10],
                      "attrs": {"class": "accept"}},
                     {"id": "b2", "tag": "button", "text": "More", "bbox": [10, 0, 10, 10],
                      "attrs": {"class": "accept"}},
                 ]},
             ]},
        ])
        sel = page.get("b2").selector_path
        assert sel.css == "#notice > div:nth-child(1) > button:nth-child(2)"
        assert sel.strategy is dom.SelectorStrategy.BY_NTH_CHILD_CHAIN
        hits = sim.doc.query_all(sel.css)
        assert [n.id for n in hits] == ["b2"]

    def test_random_looking_id_falls_back_to_attr(self):
        page, sim = sim_page([
            {"id": "n", "tag": "div", "attrs": {"id": "x7f3a9bc1", "data-role": "save"},
             "bbox": [0, 0, 10, 10]},
        ])
        sel = page.get("n").selector_path
        assert sel.css == '[data-role="save"]'
        assert sel.strategy is dom.SelectorStrategy.BY_ATTR_COMBO
        assert [n.id for n in sim.doc.query_all(sel.css)] == ["n"]

    def test_trailing_digit_run_id_rejected(self):
        page, _ = sim_page([
            {"id": "n", "tag": "div", "attrs": {"id": "widget-123456", "data-id": "w"},
             "bbox": [0, 0, 10, 10]},
        ])
        assert page.get("n").selector_path.strategy is not dom.SelectorStrategy.BY_ID

    def test_duplicate_id_not_used(self):
        page, _ = sim_page([
            {"id": "a", "tag": "div", "attrs": {"id": "dup"}, "bbox": [0, 0, 10, 10]},
            {"id": "b", "tag": "div", "attrs": {"id": "dup"}, "bbox": [0, 10, 10, 10]},
        ])
        for node_id in ("a", "b"):
            assert page.get(node_id).selector_path.strategy is not dom.SelectorStrategy.BY_ID

    def test_round_trip_uniqueness_whole_page(self):
        body = [
            {"id": "hdr", "tag": "header", "bbox": [0, 0, 100, 10], "children": [
                {"id": "l1", "tag": "a", "attrs": {"href": "/"}, "text": "home", "bbox": [0, 0, 5, 5]},
            ]},
            {"id": "n", "tag": "div", "attrs": {"id": "banner"}, "bbox": [0, 0, 50, 50], "children": [
                {"id": "p", "tag": "p", "text": "cookies", "bbox": [0, 0, 10, 10]},
                {"id": "b1", "tag": "button", "text": "ok", "bbox": [0, 0, 10, 10]},
                {"id": "b2", "tag": "button", "text": "no", "bbox": [10, 0, 10, 10]},
                {"id": "cb", "tag": "input", "attrs": {"type": "checkbox", "aria-label": "Ads On"},
                 "bbox": [20, 0, 5, 5], "checked": True},
            ]},
        ]
        page, sim = sim_page(body)
        for element in page.elements:
            hits = sim.doc.query_all(element.selector_path.css)
            assert [h.id for h in hits] == [element.node_id], element.selector_path.css

    def test_determinism_byte_identical(self):
        body = [
            {"id": "n", "tag": "div", "bbox": [0, 0, 50, 50], "children": [
                {"id": "b1", "tag": "button", "text": "ok", "bbox": [0, 0, 10, 10]},
            ]},
        ]
        page1, _ = sim_page(body)
        page2, _ = sim_page(body)
        sels1 = [e.selector_path.css for e in page1.elements]
        sels2 = [e.selector_path.css for e in page2.elements]
        assert sels1 == sels2

    def test_escapes_quotes_in_attr_values(self):
        page, sim = sim_page([
            {"id": "n", "tag": "div", "attrs": {"data-id": 'say "hi"'}, "bbox": [0, 0, 10, 10]},
        ])
        sel = page.get("n").selector_path
        assert [h.id for h in sim.doc.query_all(sel.css)] == ["n"]


class TestJsonCodec:
    def test_page_round_trip(self):
        page, _ = sim_page([
            {"id": "n", "tag": "div", "z": 42, "bbox": [1, 2, 3, 4], "text": "hello"},
        ])
        again = dom.PageSnapshot.from_json_str(page.to_json_str())
        assert again == page

    def test_auto_z_encodes_as_string(self):
        page, _ = sim_page([{"id": "n", "tag": "div", "bbox": [0, 0, 1, 1]}])
        obj = page.to_json()
        auto = [e for e in obj["elements"] if e["node_id"] == "n"][0]
        assert auto["z_index"] == "auto"


class TestCorpusProperties:
    def test_selector_round_trip_on_every_fixture(self, corpus):
        from cookiesweep.fixtures.sim import SimSession

        for domain, site in corpus.items():
            sess = SimSession({domain: site})
            sess.navigate(f"http://{domain}/")
            page = dom.annotate_selectors(dom.PageSnapshot.from_json(sess.snapshot()))
            for element in page.elements:
                hits = sess.doc.query_all(element.selector_path.css)
                assert [h.id for h in hits] == [element.node_id], (
                    domain, element.selector_path.css)
