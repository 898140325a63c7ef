"""Interactive workspace state machine.

All mutations run through a single ordered command log; replaying the log
against the same dataset reproduces an identical workspace snapshot. Reads
(search, snapshots) never mutate state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .chains import build_chains, clean_chains, pairwise_biclusters, view_sequences
from .errors import (
    BelowMinimumSize,
    InvalidArgument,
    NoDocuments,
    NotAChainView,
    PanelPinned,
    SelfLink,
    TooFewViews,
    UnknownElement,
    UnknownOrigin,
    UnknownPanel,
    UnknownRelationship,
)
from .ingest import Dataset, Document, Occurrence
from .layout import LayoutResult, Relationship, compute_layout
from .mining import Bicluster
from .model import ElementRef

MIN_PANEL_W = 120.0
MIN_PANEL_H = 80.0
DEFAULT_PANEL_W = 320.0
DEFAULT_PANEL_H = 240.0
GRID_GAP = 16.0
GRID_COLS = 4

NEIGHBOR_COUNT = 3  # how many nearest relationships count as related

STATES = ("normal", "focused", "selected", "marked")
DISPLAY_MODES = ("circle", "summary")
LINKABLE_STATES = ("focused", "selected", "marked")  # states that draw curved links


@dataclass
class PanelState:
    x: float
    y: float
    w: float
    h: float
    pinned: bool = False
    kind: str = "view"

    def as_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h, "pinned": self.pinned, "kind": self.kind}


@dataclass
class RelationshipView:
    """A derived view of computed relationships plus their presentation state."""

    rv_id: str
    level: str  # bi_group | multi_group
    source_views: tuple[str, ...]
    threshold: float | None
    relationships: list[Relationship]
    layout: LayoutResult
    display_mode_default: str = "circle"
    display_modes: dict[str, str] = field(default_factory=dict)
    states: dict[str, str] = field(default_factory=dict)
    position_overrides: dict[str, tuple[float, float]] = field(default_factory=dict)
    diagnostic: str | None = None

    @property
    def layout_overridden(self) -> bool:
        return bool(self.position_overrides)

    def relationship(self, relationship_id: str) -> Relationship:
        for rel in self.relationships:
            if rel.relationship_id == relationship_id:
                return rel
        raise UnknownRelationship(f"relationship {relationship_id!r} not in view {self.rv_id!r}")

    def state_of(self, relationship_id: str) -> str:
        return self.states.get(relationship_id, "normal")

    def as_dict(self) -> dict:
        return {
            "rv_id": self.rv_id,
            "level": self.level,
            "source_views": list(self.source_views),
            "threshold": self.threshold,
            "relationships": [rel.as_dict() for rel in self.relationships],
            "layout": self.layout.as_dict(),
            "display_mode_default": self.display_mode_default,
            "display_modes": dict(sorted(self.display_modes.items())),
            "states": dict(sorted(self.states.items())),
            "diagnostic": self.diagnostic,
        }


@dataclass
class LinkSet:
    """Four-way search result: the automatic (and manual) links of one origin."""

    origin: dict
    same_view_elements: set[tuple[ElementRef, str]] = field(default_factory=set)
    cross_view_elements: set[tuple[ElementRef, str]] = field(default_factory=set)
    related_relationships: set[tuple[str, str, str]] = field(default_factory=set)  # (rv_id, rid, kind)

    def as_dict(self) -> dict:
        return {
            "origin": self.origin,
            "same_view_elements": [
                {**ref.as_dict(), "kind": kind} for ref, kind in sorted(self.same_view_elements)
            ],
            "cross_view_elements": [
                {**ref.as_dict(), "kind": kind} for ref, kind in sorted(self.cross_view_elements)
            ],
            "related_relationships": [
                {"rv_id": rv, "relationship_id": rid, "kind": kind}
                for rv, rid, kind in sorted(self.related_relationships)
            ],
        }


def _jaccard_distance(a: frozenset, b: frozenset) -> float:
    union = a | b
    if not union:
        return 0.0
    return 1.0 - len(a & b) / len(union)


class Workspace:
    """The session: one dataset, its panels, relationship-views, marks and
    manual links, mutated only through ``apply``."""

    def __init__(self, dataset: Dataset):
        self.dataset = dataset
        self.panels: dict[str, PanelState] = {}
        self.relationship_views: dict[str, RelationshipView] = {}
        self.manual_links: set[tuple[ElementRef, ElementRef]] = set()
        self.document_panels: list[dict] = []
        self.command_log: list[dict] = []
        self._rv_counter = 0
        self._pair_biclusters_cache: dict[tuple[str, str], list[Bicluster]] = {}
        for view_id in dataset.view_order():
            self._place_panel(view_id, kind="view")

    # ------------------------------------------------------------------ commands

    OPS = (
        "create_relationship_view",
        "set_threshold",
        "set_state",
        "set_display_mode",
        "set_positions",
        "drag_panel",
        "pin",
        "resize",
        "add_manual_link",
        "retrieve_documents",
    )

    def apply(self, op: str, args: Mapping[str, Any]) -> dict:
        """Apply one mutation command; on success it is appended to the log."""
        if op not in self.OPS:
            raise InvalidArgument(f"unknown op {op!r}")
        result = getattr(self, f"_op_{op}")(dict(args))
        self.command_log.append({"seq": len(self.command_log) + 1, "op": op, "args": dict(args)})
        return result

    @classmethod
    def replay(cls, dataset: Dataset, commands: Sequence[Mapping]) -> "Workspace":
        ws = cls(dataset)
        for command in commands:
            ws.apply(command["op"], command["args"])
        return ws

    # ------------------------------------------------------------------ relationship views

    def _pair_biclusters(self, view_ids: Sequence[str]) -> dict[tuple[str, str], list[Bicluster]]:
        order = {v: i for i, v in enumerate(self.dataset.view_order())}
        ordered = sorted(view_ids, key=lambda v: order[v])
        wanted = [(a, b) for i, a in enumerate(ordered) for b in ordered[i + 1:]]
        if any(pair not in self._pair_biclusters_cache for pair in wanted):
            self._pair_biclusters_cache.update(pairwise_biclusters(ordered, self.dataset.matrices))
        return {pair: self._pair_biclusters_cache[pair] for pair in wanted}

    def _compute_relationships(
        self, source_views: tuple[str, ...], threshold: float | None
    ) -> list[Relationship]:
        if len(source_views) == 2:
            pairs = self._pair_biclusters(source_views)
            return list(pairs[source_views])
        pairs = self._pair_biclusters(source_views)
        sequences = view_sequences(source_views)
        chains = build_chains(sequences, pairs, threshold=threshold)
        return list(clean_chains(chains))

    def _op_create_relationship_view(self, args: dict) -> dict:
        views = args.get("views") or []
        distinct = list(dict.fromkeys(views))
        if len(distinct) < 2:
            raise TooFewViews(f"a relationship-view needs at least 2 distinct views, got {len(distinct)}")
        order = {v: i for i, v in enumerate(self.dataset.view_order())}
        for v in distinct:
            self.dataset.require_view(v)
        source_views = tuple(sorted(distinct, key=lambda v: order[v]))

        threshold = args.get("threshold")
        if len(source_views) >= 3:
            if threshold is None:
                raise InvalidArgument("threshold is required for a chain-level relationship-view")
            if not 0.0 <= float(threshold) <= 1.0:
                raise InvalidArgument(f"threshold must be in [0, 1], got {threshold}")
            threshold = float(threshold)
        else:
            threshold = None

        relationships = self._compute_relationships(source_views, threshold)
        rv_id = self._next_rv_id()
        rv = RelationshipView(
            rv_id=rv_id,
            level="bi_group" if len(source_views) == 2 else "multi_group",
            source_views=source_views,
            threshold=threshold,
            relationships=relationships,
            layout=compute_layout(relationships, self.dataset.view_order()),
            diagnostic=None if relationships else "NoRelationshipsFound: no relationships at these parameters",
        )
        self.relationship_views[rv_id] = rv
        self._place_panel(rv_id, kind="relationship_view")
        return {"relationship_view": rv.as_dict(), "panel": self.panels[rv_id].as_dict()}

    def _op_set_threshold(self, args: dict) -> dict:
        rv = self.require_rv(args["rv_id"])
        if rv.level != "multi_group":
            raise NotAChainView(f"view {rv.rv_id!r} is bi-group; threshold applies to chain views only")
        threshold = float(args["threshold"])
        if not 0.0 <= threshold <= 1.0:
            raise InvalidArgument(f"threshold must be in [0, 1], got {threshold}")
        rv.threshold = threshold
        rv.relationships = self._compute_relationships(rv.source_views, threshold)
        surviving = {rel.relationship_id for rel in rv.relationships}
        rv.states = {rid: s for rid, s in rv.states.items() if rid in surviving and s == "marked"}
        rv.display_modes = {rid: m for rid, m in rv.display_modes.items() if rid in surviving}
        rv.position_overrides = {rid: p for rid, p in rv.position_overrides.items() if rid in surviving}
        self._refresh_layout(rv)
        rv.diagnostic = None if rv.relationships else "NoRelationshipsFound: no relationships at these parameters"
        return {"relationship_view": rv.as_dict()}

    def _refresh_layout(self, rv: RelationshipView) -> None:
        # once a user has dragged circles, MDS never re-runs for this view
        if rv.layout_overridden:
            old = rv.layout.coordinates
            fresh = compute_layout(rv.relationships, self.dataset.view_order())
            fresh.coordinates = {
                rid: old.get(rid, (0.0, 0.0)) for rid in fresh.coordinates
            }
            fresh.coordinates.update(
                {rid: pos for rid, pos in rv.position_overrides.items() if rid in fresh.coordinates}
            )
            rv.layout = fresh
        else:
            rv.layout = compute_layout(rv.relationships, self.dataset.view_order())

    def _op_set_state(self, args: dict) -> dict:
        rv = self.require_rv(args["rv_id"])
        rid = args["relationship_id"]
        state = args["state"]
        if state not in STATES:
            raise InvalidArgument(f"state must be one of {STATES}")
        rv.relationship(rid)  # raises UnknownRelationship
        if state == "focused":
            for other in self.relationship_views.values():
                other.states = {k: v for k, v in other.states.items() if v != "focused"}
        if state == "normal":
            rv.states.pop(rid, None)
        else:
            rv.states[rid] = state
        return {"rv_id": rv.rv_id, "relationship_id": rid, "state": state}

    def _op_set_display_mode(self, args: dict) -> dict:
        rv = self.require_rv(args["rv_id"])
        mode = args["mode"]
        if mode not in DISPLAY_MODES:
            raise InvalidArgument(f"mode must be one of {DISPLAY_MODES}")
        rid = args.get("relationship_id")
        if rid is None:
            rv.display_mode_default = mode
            rv.display_modes.clear()
        else:
            rv.relationship(rid)
            rv.display_modes[rid] = mode
        return {"rv_id": rv.rv_id, "display_mode_default": rv.display_mode_default,
                "display_modes": dict(rv.display_modes)}

    def _op_set_positions(self, args: dict) -> dict:
        rv = self.require_rv(args["rv_id"])
        for rid, pos in args["positions"].items():
            rv.relationship(rid)
            x, y = float(pos[0]), float(pos[1])
            rv.position_overrides[rid] = (x, y)
            rv.layout.coordinates[rid] = (x, y)
        return {"rv_id": rv.rv_id, "coordinates": {r: list(c) for r, c in rv.layout.coordinates.items()}}

    # ------------------------------------------------------------------ panels

    def _op_drag_panel(self, args: dict) -> dict:
        panel_id = args["panel_id"]
        dx, dy = float(args["dx"]), float(args["dy"])
        panel = self.require_panel(panel_id)
        if panel.pinned:
            raise PanelPinned(f"panel {panel_id!r} is pinned")
        moved: dict[str, tuple[float, float]] = {}
        panel.x += dx
        panel.y += dy
        moved[panel_id] = (panel.x, panel.y)

        rv = self.relationship_views.get(panel_id)
        if rv is not None:
            # dust and magnet: unpinned views holding currently-linked elements follow
            for view_id in self._linked_views(rv):
                target = self.panels.get(view_id)
                if target is None or target.pinned or view_id in moved:
                    continue
                target.x += dx
                target.y += dy
                moved[view_id] = (target.x, target.y)
        return {"moved": {pid: [x, y] for pid, (x, y) in sorted(moved.items())}}

    def _linked_views(self, rv: RelationshipView) -> set[str]:
        views: set[str] = set()
        for rel in rv.relationships:
            if rv.state_of(rel.relationship_id) in LINKABLE_STATES:
                views.update(ref.view_id for ref in rel.members())
        return views

    def _op_pin(self, args: dict) -> dict:
        panel = self.require_panel(args["panel_id"])
        panel.pinned = bool(args["on"])
        return {"panel_id": args["panel_id"], "pinned": panel.pinned}

    def _op_resize(self, args: dict) -> dict:
        panel = self.require_panel(args["panel_id"])
        w, h = float(args["w"]), float(args["h"])
        if w < MIN_PANEL_W or h < MIN_PANEL_H:
            raise BelowMinimumSize(f"minimum panel size is {MIN_PANEL_W}x{MIN_PANEL_H}, got {w}x{h}")
        panel.w = w
        panel.h = h
        return {"panel_id": args["panel_id"], "w": w, "h": h}

    # ------------------------------------------------------------------ manual links

    def _op_add_manual_link(self, args: dict) -> dict:
        a = ElementRef(args["a"]["view_id"], args["a"]["element_id"])
        b = ElementRef(args["b"]["view_id"], args["b"]["element_id"])
        if a == b:
            raise SelfLink(f"cannot link element {a.view_id!r}/{a.element_id!r} to itself")
        self.dataset.resolve(a)
        self.dataset.resolve(b)
        pair = (a, b) if a <= b else (b, a)
        self.manual_links.add(pair)
        return {"manual_links": self._manual_links_payload()}

    def _manual_links_payload(self) -> list:
        return [[a.as_dict(), b.as_dict()] for a, b in sorted(self.manual_links)]

    # ------------------------------------------------------------------ document retrieval

    def retrieve_documents(self, rv_id: str, relationship_id: str) -> list[tuple[Document, list[Occurrence]]]:
        """Documents mentioning at least two distinct member elements of the
        relationship, ranked by distinct-member count (doc_id tiebreak), with
        the member occurrences as highlight spans."""
        if not self.dataset.documents:
            raise NoDocuments(f"dataset {self.dataset.dataset_id!r} has no documents")
        rv = self.require_rv(rv_id)
        members = rv.relationship(relationship_id).members()
        ranked = []
        for doc in self.dataset.documents:
            present = doc.mentioned() & members
            if len(present) >= 2:
                highlights = [occ for occ in doc.occurrences if occ.ref in members]
                ranked.append((len(present), doc, highlights))
        ranked.sort(key=lambda item: (-item[0], item[1].doc_id))
        return [(doc, highlights) for _, doc, highlights in ranked]

    def _op_retrieve_documents(self, args: dict) -> dict:
        results = self.retrieve_documents(args["rv_id"], args["relationship_id"])
        payload = []
        open_docs = {entry["doc_id"] for entry in self.document_panels}
        for doc, highlights in results:
            entry = {
                "panel_id": f"doc:{doc.doc_id}",
                "doc_id": doc.doc_id,
                "title": doc.title,
                "text": doc.text,
                "rv_id": args["rv_id"],
                "relationship_id": args["relationship_id"],
                "highlights": [occ.as_dict() for occ in highlights],
            }
            payload.append(entry)
            if doc.doc_id not in open_docs:
                self.document_panels.append(entry)
                self._place_panel(entry["panel_id"], kind="document")
                open_docs.add(doc.doc_id)
        return {"documents": payload}

    # ------------------------------------------------------------------ search

    def four_way_search(self, origin: Mapping[str, Any]) -> LinkSet:
        """Automatic link discovery from an element or a relationship into
        same-view elements, cross-view elements, and relationships, with any
        manual links of the origin merged in."""
        if "view_id" in origin and "element_id" in origin:
            ref = ElementRef(origin["view_id"], origin["element_id"])
            try:
                self.dataset.resolve(ref)
            except UnknownElement:
                raise UnknownOrigin(f"element {ref.view_id!r}/{ref.element_id!r} does not resolve") from None
            return self._search_from_element(ref)
        if "rv_id" in origin and "relationship_id" in origin:
            try:
                rv = self.require_rv(origin["rv_id"])
                rel = rv.relationship(origin["relationship_id"])
            except (UnknownPanel, UnknownRelationship):
                raise UnknownOrigin(f"relationship origin {dict(origin)!r} does not resolve") from None
            return self._search_from_relationship(rv, rel)
        raise UnknownOrigin("origin must carry view_id+element_id or rv_id+relationship_id")

    def _all_default_biclusters(self) -> dict[tuple[str, str], list[Bicluster]]:
        return self._pair_biclusters(self.dataset.view_order())

    def _search_from_element(self, ref: ElementRef) -> LinkSet:
        result = LinkSet(origin=ref.as_dict())
        # co-members of the origin's biclusters, same view and across
        for (va, vb), biclusters in self._all_default_biclusters().items():
            if ref.view_id not in (va, vb):
                continue
            for bic in biclusters:
                side = bic.side(ref.view_id)
                if ref.element_id not in side:
                    continue
                other_view = vb if ref.view_id == va else va
                for eid in side:
                    if eid != ref.element_id:
                        result.same_view_elements.add((ElementRef(ref.view_id, eid), "automatic"))
                for eid in bic.side(other_view):
                    result.cross_view_elements.add((ElementRef(other_view, eid), "automatic"))
        # directly related elements from the relation matrices
        for matrix in self.dataset.matrices.values():
            if ref.view_id == matrix.view_a and ref.element_id in matrix.row_ids:
                row = matrix.row(ref.element_id)
                for j, cell in enumerate(row):
                    if cell:
                        result.cross_view_elements.add((ElementRef(matrix.view_b, matrix.col_ids[j]), "automatic"))
            elif ref.view_id == matrix.view_b and ref.element_id in matrix.col_ids:
                j = matrix.col_ids.index(ref.element_id)
                for i, row in enumerate(matrix.cells):
                    if row[j]:
                        result.cross_view_elements.add((ElementRef(matrix.view_a, matrix.row_ids[i]), "automatic"))
        # relationships containing the origin, in any relationship-view
        for rv in self.relationship_views.values():
            for rel in rv.relationships:
                if ref in rel.members():
                    result.related_relationships.add((rv.rv_id, rel.relationship_id, "automatic"))
        self._merge_manual_links(ref, result)
        return result

    def _merge_manual_links(self, ref: ElementRef, result: LinkSet) -> None:
        for a, b in self.manual_links:
            other = b if a == ref else a if b == ref else None
            if other is None:
                continue
            bucket = result.same_view_elements if other.view_id == ref.view_id else result.cross_view_elements
            bucket.discard((other, "automatic"))
            bucket.add((other, "manual"))

    def _search_from_relationship(self, rv: RelationshipView, rel: Relationship) -> LinkSet:
        rid = rel.relationship_id
        result = LinkSet(origin={"rv_id": rv.rv_id, "relationship_id": rid})
        members = rel.members()
        # the relationship's member elements in the data views
        for ref in members:
            result.cross_view_elements.add((ref, "automatic"))
        # nearest relationships within the same relationship-view
        neighbors = sorted(
            (
                (_jaccard_distance(members, other.members()), other.relationship_id)
                for other in rv.relationships
                if other.relationship_id != rid
            ),
        )
        for distance, other_id in neighbors[:NEIGHBOR_COUNT]:
            if distance < 1.0:
                result.related_relationships.add((rv.rv_id, other_id, "automatic"))
        # relationships in other relationship-views sharing an element
        for other_rv in self.relationship_views.values():
            if other_rv.rv_id == rv.rv_id:
                continue
            for other in other_rv.relationships:
                if members & other.members():
                    result.related_relationships.add((other_rv.rv_id, other.relationship_id, "automatic"))
        return result

    # ------------------------------------------------------------------ lookup & placement

    def require_panel(self, panel_id: str) -> PanelState:
        try:
            return self.panels[panel_id]
        except KeyError:
            raise UnknownPanel(f"unknown panel {panel_id!r}") from None

    def require_rv(self, rv_id: str) -> RelationshipView:
        try:
            return self.relationship_views[rv_id]
        except KeyError:
            raise UnknownPanel(f"unknown relationship-view {rv_id!r}") from None

    def _next_rv_id(self) -> str:
        while True:
            self._rv_counter += 1
            rv_id = f"rv-{self._rv_counter}"
            if rv_id not in self.panels:
                return rv_id

    def _place_panel(self, panel_id: str, kind: str, w: float = DEFAULT_PANEL_W, h: float = DEFAULT_PANEL_H) -> None:
        # first non-overlapping slot in a left-to-right, top-to-bottom grid scan
        row = 0
        while True:
            for col in range(GRID_COLS):
                x = GRID_GAP + col * (DEFAULT_PANEL_W + GRID_GAP)
                y = GRID_GAP + row * (DEFAULT_PANEL_H + GRID_GAP)
                if not any(self._overlaps(x, y, w, h, p) for p in self.panels.values()):
                    self.panels[panel_id] = PanelState(x=x, y=y, w=w, h=h, kind=kind)
                    return
            row += 1

    @staticmethod
    def _overlaps(x: float, y: float, w: float, h: float, panel: PanelState) -> bool:
        return x < panel.x + panel.w and panel.x < x + w and y < panel.y + panel.h and panel.y < y + h

    # ------------------------------------------------------------------ snapshot

    def snapshot(self) -> dict:
        return {
            "dataset_id": self.dataset.dataset_id,
            "seq": len(self.command_log),
            "panels": {pid: panel.as_dict() for pid, panel in sorted(self.panels.items())},
            "relationship_views": {rv_id: rv.as_dict() for rv_id, rv in sorted(self.relationship_views.items())},
            "manual_links": self._manual_links_payload(),
            "document_panels": list(self.document_panels),
        }
