import json
import random

import pytest

from crossview import Dataset, Workspace
from crossview.errors import (
    BelowMinimumSize,
    InvalidArgument,
    NoDocuments,
    NotAChainView,
    PanelPinned,
    SelfLink,
    TooFewViews,
    UnknownOrigin,
    UnknownPanel,
    UnknownRelationship,
)
from crossview.session import MIN_PANEL_H, MIN_PANEL_W

from helpers import golden_bundle_dict


@pytest.fixture
def ws(golden_dataset) -> Workspace:
    return Workspace(golden_dataset)


def create_chain_rv(ws, threshold=0.4):
    result = ws.apply("create_relationship_view", {"views": ["A", "B", "C"], "threshold": threshold})
    return result["relationship_view"]


def chain_by_first_a(ws, rv_id, a_elements):
    rv = ws.relationship_views[rv_id]
    for rel in rv.relationships:
        if rel.entity_map()["A"] == frozenset(a_elements):
            return rel
    raise AssertionError(f"no chain with A side {a_elements}")


# ---------------------------------------------------------------- creation


def test_create_bi_group_view(ws):
    result = ws.apply("create_relationship_view", {"views": ["A", "B"]})
    rv = result["relationship_view"]
    assert rv["level"] == "bi_group"
    assert len(rv["relationships"]) == 2
    assert rv["threshold"] is None
    assert len(rv["layout"]["coordinates"]) == 2


def test_create_multi_group_view(ws):
    rv = create_chain_rv(ws)
    assert rv["level"] == "multi_group"
    assert len(rv["relationships"]) == 2
    assert rv["threshold"] == 0.4


def test_create_requires_two_distinct_views(ws):
    with pytest.raises(TooFewViews):
        ws.apply("create_relationship_view", {"views": ["A", "A"]})


def test_create_chain_view_requires_threshold(ws):
    with pytest.raises(InvalidArgument):
        ws.apply("create_relationship_view", {"views": ["A", "B", "C"]})


def test_create_empty_view_keeps_panel_with_diagnostic(golden_bundle):
    golden_bundle["views"].append(
        {"view_id": "D", "view_type": "other", "label": "D",
         "elements": [{"element_id": "D1", "label": "D1"}]}
    )
    ws = Workspace(Dataset.load(golden_bundle))
    result = ws.apply("create_relationship_view", {"views": ["A", "D"]})
    rv = result["relationship_view"]
    assert rv["relationships"] == []
    assert "NoRelationshipsFound" in rv["diagnostic"]
    assert rv["rv_id"] in ws.panels


def test_source_views_stored_in_insertion_order(ws):
    result = ws.apply("create_relationship_view", {"views": ["C", "A", "B"], "threshold": 0.4})
    assert result["relationship_view"]["source_views"] == ["A", "B", "C"]


# ---------------------------------------------------------------- threshold


def test_set_threshold_drops_chain(ws):
    rv = create_chain_rv(ws)
    result = ws.apply("set_threshold", {"rv_id": rv["rv_id"], "threshold": 0.6})
    assert len(result["relationship_view"]["relationships"]) == 1


def test_set_threshold_idempotent(ws):
    rv = create_chain_rv(ws)
    before = ws.relationship_views[rv["rv_id"]].as_dict()
    ws.apply("set_threshold", {"rv_id": rv["rv_id"], "threshold": 0.4})
    assert ws.relationship_views[rv["rv_id"]].as_dict() == before


def test_set_threshold_one_keeps_empty_view(ws):
    rv = create_chain_rv(ws)
    result = ws.apply("set_threshold", {"rv_id": rv["rv_id"], "threshold": 1.0})
    assert result["relationship_view"]["relationships"] == []
    assert "NoRelationshipsFound" in result["relationship_view"]["diagnostic"]
    assert rv["rv_id"] in ws.relationship_views


def test_set_threshold_rejected_on_bi_group(ws):
    result = ws.apply("create_relationship_view", {"views": ["A", "B"]})
    with pytest.raises(NotAChainView):
        ws.apply("set_threshold", {"rv_id": result["relationship_view"]["rv_id"], "threshold": 0.5})


# ---------------------------------------------------------------- states


def test_mark_survives_threshold_recompute(ws):
    rv = create_chain_rv(ws)
    surviving = chain_by_first_a(ws, rv["rv_id"], {"A2", "A3"})
    ws.apply("set_state", {"rv_id": rv["rv_id"], "relationship_id": surviving.chain_id, "state": "marked"})
    ws.apply("set_threshold", {"rv_id": rv["rv_id"], "threshold": 0.6})
    assert ws.relationship_views[rv["rv_id"]].state_of(surviving.chain_id) == "marked"


def test_mark_dropped_when_relationship_disappears(ws):
    rv = create_chain_rv(ws)
    dropped = chain_by_first_a(ws, rv["rv_id"], {"A1", "A2"})
    ws.apply("set_state", {"rv_id": rv["rv_id"], "relationship_id": dropped.chain_id, "state": "marked"})
    ws.apply("set_threshold", {"rv_id": rv["rv_id"], "threshold": 0.6})
    assert ws.relationship_views[rv["rv_id"]].states == {}


def test_focus_is_exclusive(ws):
    rv = create_chain_rv(ws)
    first, second = [rel.relationship_id for rel in ws.relationship_views[rv["rv_id"]].relationships]
    ws.apply("set_state", {"rv_id": rv["rv_id"], "relationship_id": first, "state": "focused"})
    ws.apply("set_state", {"rv_id": rv["rv_id"], "relationship_id": second, "state": "focused"})
    states = ws.relationship_views[rv["rv_id"]].states
    assert states == {second: "focused"}


def test_set_state_unknown_relationship(ws):
    rv = create_chain_rv(ws)
    with pytest.raises(UnknownRelationship):
        ws.apply("set_state", {"rv_id": rv["rv_id"], "relationship_id": "nope", "state": "marked"})


def test_set_state_invalid_state(ws):
    rv = create_chain_rv(ws)
    rid = ws.relationship_views[rv["rv_id"]].relationships[0].relationship_id
    with pytest.raises(InvalidArgument):
        ws.apply("set_state", {"rv_id": rv["rv_id"], "relationship_id": rid, "state": "glowing"})


# ---------------------------------------------------------------- search


def test_search_element_golden(ws):
    rv = create_chain_rv(ws)
    links = ws.four_way_search({"view_id": "A", "element_id": "A2"})
    cross = {ref.element_id for ref, _ in links.cross_view_elements}
    assert {"B1", "B2", "B3", "B4"} <= cross
    rel_ids = {rid for _, rid, _ in links.related_relationships}
    assert rel_ids == {rel.relationship_id for rel in ws.relationship_views[rv["rv_id"]].relationships}
    assert len(rel_ids) == 2


def test_search_element_same_view_through_shared_biclusters(ws):
    links = ws.four_way_search({"view_id": "A", "element_id": "A1"})
    same = {ref.element_id for ref, _ in links.same_view_elements}
    assert same == {"A2"}  # A1 shares a bicluster side only with A2


def test_search_excludes_origin(ws):
    links = ws.four_way_search({"view_id": "A", "element_id": "A2"})
    assert ("A2" not in {ref.element_id for ref, _ in links.same_view_elements})
    assert ("A2" not in {ref.element_id for ref, _ in links.cross_view_elements})


def test_search_relationship_origin(ws):
    rv = create_chain_rv(ws)
    chain = chain_by_first_a(ws, rv["rv_id"], {"A1", "A2"})
    links = ws.four_way_search({"rv_id": rv["rv_id"], "relationship_id": chain.chain_id})
    member_ids = {(ref.view_id, ref.element_id) for ref, _ in links.cross_view_elements}
    assert member_ids == {
        ("A", "A1"), ("A", "A2"), ("B", "B1"), ("B", "B2"), ("C", "C1"), ("C", "C2")
    }
    # the other chain overlaps, so it is a same-view neighbor
    other = chain_by_first_a(ws, rv["rv_id"], {"A2", "A3"})
    assert (rv["rv_id"], other.chain_id, "automatic") in links.related_relationships


def test_search_relationship_origin_t6_other_views(ws):
    chain_rv = create_chain_rv(ws)
    bi = ws.apply("create_relationship_view", {"views": ["A", "B"]})["relationship_view"]
    chain = chain_by_first_a(ws, chain_rv["rv_id"], {"A1", "A2"})
    links = ws.four_way_search({"rv_id": chain_rv["rv_id"], "relationship_id": chain.chain_id})
    other_rv_hits = {rv for rv, _, _ in links.related_relationships if rv == bi["rv_id"]}
    assert other_rv_hits == {bi["rv_id"]}


def test_search_isolated_element_is_empty(golden_bundle):
    golden_bundle["views"][0]["elements"].append({"element_id": "A9", "label": "A9"})
    ws = Workspace(Dataset.load(golden_bundle))
    links = ws.four_way_search({"view_id": "A", "element_id": "A9"})
    assert not links.same_view_elements
    assert not links.cross_view_elements
    assert not links.related_relationships


def test_search_unknown_origin(ws):
    with pytest.raises(UnknownOrigin):
        ws.four_way_search({"view_id": "A", "element_id": "missing"})
    with pytest.raises(UnknownOrigin):
        ws.four_way_search({"something": "else"})


# ---------------------------------------------------------------- panels


def test_panels_created_for_views_without_overlap(ws):
    rects = [(p.x, p.y, p.w, p.h) for p in ws.panels.values()]
    assert len(rects) == 3
    for i, a in enumerate(rects):
        for b in rects[i + 1:]:
            assert not (a[0] < b[0] + b[2] and b[0] < a[0] + a[2] and a[1] < b[1] + b[3] and b[1] < a[1] + a[3])


def test_drag_moves_linked_unpinned_views(ws):
    rv = create_chain_rv(ws)
    rid = ws.relationship_views[rv["rv_id"]].relationships[0].relationship_id
    ws.apply("set_state", {"rv_id": rv["rv_id"], "relationship_id": rid, "state": "selected"})
    ws.apply("pin", {"panel_id": "B", "on": True})
    before = {pid: (p.x, p.y) for pid, p in ws.panels.items()}
    result = ws.apply("drag_panel", {"panel_id": rv["rv_id"], "dx": 10.0, "dy": 0.0})
    moved = result["moved"]
    assert set(moved) == {rv["rv_id"], "A", "C"}  # B pinned, all three views hold linked elements
    assert moved["A"] == [before["A"][0] + 10.0, before["A"][1]]
    assert (ws.panels["B"].x, ws.panels["B"].y) == before["B"]


def test_drag_plain_view_moves_only_itself(ws):
    create_chain_rv(ws)
    before = {pid: (p.x, p.y) for pid, p in ws.panels.items()}
    result = ws.apply("drag_panel", {"panel_id": "A", "dx": 5.0, "dy": 7.0})
    assert set(result["moved"]) == {"A"}
    assert all((ws.panels[pid].x, ws.panels[pid].y) == before[pid] for pid in before if pid != "A")


def test_drag_without_active_links_moves_only_rv(ws):
    rv = create_chain_rv(ws)
    result = ws.apply("drag_panel", {"panel_id": rv["rv_id"], "dx": 3.0, "dy": 3.0})
    assert set(result["moved"]) == {rv["rv_id"]}


def test_drag_zero_delta_no_change(ws):
    before = ws.snapshot()
    ws.apply("drag_panel", {"panel_id": "A", "dx": 0.0, "dy": 0.0})
    after = ws.snapshot()
    before.pop("seq")
    after.pop("seq")
    assert before == after


def test_drag_pinned_panel_rejected(ws):
    ws.apply("pin", {"panel_id": "A", "on": True})
    with pytest.raises(PanelPinned):
        ws.apply("drag_panel", {"panel_id": "A", "dx": 1.0, "dy": 1.0})


def test_pin_idempotent(ws):
    ws.apply("pin", {"panel_id": "A", "on": True})
    ws.apply("pin", {"panel_id": "A", "on": True})
    assert ws.panels["A"].pinned is True


def test_resize_minimum_accepted_below_rejected(ws):
    ws.apply("resize", {"panel_id": "A", "w": MIN_PANEL_W, "h": MIN_PANEL_H})
    assert (ws.panels["A"].w, ws.panels["A"].h) == (MIN_PANEL_W, MIN_PANEL_H)
    with pytest.raises(BelowMinimumSize):
        ws.apply("resize", {"panel_id": "A", "w": MIN_PANEL_W - 1, "h": MIN_PANEL_H})
    with pytest.raises(UnknownPanel):
        ws.apply("resize", {"panel_id": "nope", "w": 200, "h": 200})


# ---------------------------------------------------------------- manual links


def test_manual_link_surfaces_in_both_searches(ws):
    ws.apply("add_manual_link", {"a": {"view_id": "A", "element_id": "A1"},
                                 "b": {"view_id": "C", "element_id": "C1"}})
    from_a = ws.four_way_search({"view_id": "A", "element_id": "A1"})
    from_c = ws.four_way_search({"view_id": "C", "element_id": "C1"})
    assert ("C1", "manual") in {(r.element_id, k) for r, k in from_a.cross_view_elements}
    assert ("A1", "manual") in {(r.element_id, k) for r, k in from_c.cross_view_elements}


def test_manual_link_overrides_automatic_kind(ws):
    ws.apply("add_manual_link", {"a": {"view_id": "A", "element_id": "A2"},
                                 "b": {"view_id": "B", "element_id": "B1"}})
    links = ws.four_way_search({"view_id": "A", "element_id": "A2"})
    kinds = {r.element_id: k for r, k in links.cross_view_elements}
    assert kinds["B1"] == "manual"
    assert kinds["B2"] == "automatic"


def test_manual_link_idempotent(ws):
    args = {"a": {"view_id": "A", "element_id": "A1"}, "b": {"view_id": "C", "element_id": "C1"}}
    ws.apply("add_manual_link", args)
    ws.apply("add_manual_link", {"a": args["b"], "b": args["a"]})
    assert len(ws.manual_links) == 1


def test_manual_self_link_rejected(ws):
    with pytest.raises(SelfLink):
        ws.apply("add_manual_link", {"a": {"view_id": "A", "element_id": "A1"},
                                     "b": {"view_id": "A", "element_id": "A1"}})


# ---------------------------------------------------------------- documents


def docs_bundle() -> dict:
    raw = golden_bundle_dict()
    texts = {
        "d1": "A1 met B1 at the quay. A2 joined later.",
        "d2": "Only A1 appears here.",
        "d3": "A1 and B1 and B2 convened.",
    }
    raw["documents"] = []
    for doc_id, text in texts.items():
        occurrences = []
        for view, ids in (("A", ["A1", "A2", "A3"]), ("B", ["B1", "B2", "B3", "B4"])):
            for eid in ids:
                at = text.find(eid)
                if at >= 0:
                    occurrences.append({"view_id": view, "element_id": eid,
                                        "start": at, "end": at + len(eid)})
        raw["documents"].append({"doc_id": doc_id, "title": doc_id, "text": text,
                                 "occurrences": occurrences})
    return raw


def test_retrieve_documents_requires_two_members():
    ws = Workspace(Dataset.load(docs_bundle()))
    rv = ws.apply("create_relationship_view", {"views": ["A", "B"]})["relationship_view"]
    rid = next(r["bicluster_id"] for r in rv["relationships"] if "A1" in r["elements_a"])
    results = ws.retrieve_documents(rv["rv_id"], rid)
    ids = [doc.doc_id for doc, _ in results]
    assert "d2" not in ids  # only one member mentioned
    assert set(ids) == {"d1", "d3"}
    # both mention 3 members (d1: A1, A2, B1; d3: A1, B1, B2) so doc_id breaks the tie
    assert ids == ["d1", "d3"]
    highlights = dict(zip(ids, [h for _, h in results]))
    assert {occ.ref.element_id for occ in highlights["d1"]} == {"A1", "A2", "B1"}


def test_retrieve_documents_highlights_members_only():
    ws = Workspace(Dataset.load(docs_bundle()))
    rv = ws.apply("create_relationship_view", {"views": ["A", "B"]})["relationship_view"]
    rid = next(r["bicluster_id"] for r in rv["relationships"] if "A1" in r["elements_a"])
    members = ws.relationship_views[rv["rv_id"]].relationship(rid).members()
    for doc, highlights in ws.retrieve_documents(rv["rv_id"], rid):
        assert all(occ.ref in members for occ in highlights)
        assert all(doc.text[occ.start:occ.end] == occ.snippet for occ in highlights)


def test_retrieve_documents_command_opens_panels_once():
    ws = Workspace(Dataset.load(docs_bundle()))
    rv = ws.apply("create_relationship_view", {"views": ["A", "B"]})["relationship_view"]
    rid = rv["relationships"][0]["bicluster_id"]
    ws.apply("retrieve_documents", {"rv_id": rv["rv_id"], "relationship_id": rid})
    opened = len(ws.document_panels)
    ws.apply("retrieve_documents", {"rv_id": rv["rv_id"], "relationship_id": rid})
    assert len(ws.document_panels) == opened
    assert all(entry["panel_id"] in ws.panels for entry in ws.document_panels)


def test_retrieve_documents_without_documents(ws):
    rv = create_chain_rv(ws)
    rid = ws.relationship_views[rv["rv_id"]].relationships[0].relationship_id
    with pytest.raises(NoDocuments):
        ws.retrieve_documents(rv["rv_id"], rid)


# ---------------------------------------------------------------- layout edits


def test_positions_override_survives_threshold_change(ws):
    rv = create_chain_rv(ws)
    surviving = chain_by_first_a(ws, rv["rv_id"], {"A2", "A3"})
    ws.apply("set_positions", {"rv_id": rv["rv_id"], "positions": {surviving.chain_id: [0.25, -0.5]}})
    ws.apply("set_threshold", {"rv_id": rv["rv_id"], "threshold": 0.6})
    assert ws.relationship_views[rv["rv_id"]].layout.coordinates[surviving.chain_id] == (0.25, -0.5)


def test_mds_reruns_when_not_manually_edited(ws):
    rv = create_chain_rv(ws)
    ws.apply("set_threshold", {"rv_id": rv["rv_id"], "threshold": 0.6})
    coords = ws.relationship_views[rv["rv_id"]].layout.coordinates
    assert list(coords.values()) == [(0.0, 0.0)]  # single relationship re-embeds at origin


def test_set_display_mode(ws):
    rv = create_chain_rv(ws)
    rid = ws.relationship_views[rv["rv_id"]].relationships[0].relationship_id
    ws.apply("set_display_mode", {"rv_id": rv["rv_id"], "mode": "summary", "relationship_id": rid})
    assert ws.relationship_views[rv["rv_id"]].display_modes == {rid: "summary"}
    ws.apply("set_display_mode", {"rv_id": rv["rv_id"], "mode": "summary"})
    assert ws.relationship_views[rv["rv_id"]].display_mode_default == "summary"
    assert ws.relationship_views[rv["rv_id"]].display_modes == {}


# ---------------------------------------------------------------- replay


def random_command_log(ws: Workspace, rng: random.Random, count: int) -> None:
    rv = create_chain_rv(ws)
    rv_id = rv["rv_id"]
    rids = [rel.relationship_id for rel in ws.relationship_views[rv_id].relationships]
    panels = list(ws.panels)
    ops = ["drag", "pin", "resize", "state", "link", "threshold"]
    for _ in range(count - 1):
        op = rng.choice(ops)
        try:
            if op == "drag":
                ws.apply("drag_panel", {"panel_id": rng.choice(panels),
                                        "dx": rng.randint(-20, 20), "dy": rng.randint(-20, 20)})
            elif op == "pin":
                ws.apply("pin", {"panel_id": rng.choice(panels), "on": rng.random() < 0.5})
            elif op == "resize":
                ws.apply("resize", {"panel_id": rng.choice(panels),
                                    "w": rng.randint(140, 500), "h": rng.randint(100, 400)})
            elif op == "state":
                ws.apply("set_state", {"rv_id": rv_id, "relationship_id": rng.choice(rids),
                                       "state": rng.choice(["normal", "focused", "selected", "marked"])})
            elif op == "link":
                ws.apply("add_manual_link", {"a": {"view_id": "A", "element_id": f"A{rng.randint(1, 3)}"},
                                             "b": {"view_id": "B", "element_id": f"B{rng.randint(1, 4)}"}})
            elif op == "threshold":
                ws.apply("set_threshold", {"rv_id": rv_id, "threshold": rng.choice([0.2, 0.4, 0.6])})
                rids = [rel.relationship_id for rel in ws.relationship_views[rv_id].relationships] or rids
        except PanelPinned:
            pass  # pinned drags are legal command-stream noise


def test_replay_reproduces_snapshot(golden_bundle):
    ws = Workspace(Dataset.load(golden_bundle))
    random_command_log(ws, random.Random(42), 50)
    replayed = Workspace.replay(Dataset.load(golden_bundle), ws.command_log)
    assert json.dumps(replayed.snapshot(), sort_keys=True) == json.dumps(ws.snapshot(), sort_keys=True)


def test_unknown_rv_raises_unknown_panel(ws):
    with pytest.raises(UnknownPanel):
        ws.apply("set_threshold", {"rv_id": "rv-99", "threshold": 0.5})
