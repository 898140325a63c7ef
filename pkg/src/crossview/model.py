"""Relational data model: per-view element tables, joint tables for view pairs,
and the binary relation matrices that mining runs on.

All values are immutable after construction; operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Collection, Iterable, Mapping

from .errors import (
    DuplicateElementId,
    MissingRequiredAttr,
    ParseError,
    SameViewPair,
    UnknownElement,
)

VIEW_TYPES = ("graph", "map", "list", "document", "other")

# attrs every element of a view type must carry
REQUIRED_ATTRS: dict[str, tuple[str, ...]] = {"map": ("lat", "lon")}


@dataclass(frozen=True)
class ViewDescriptor:
    """One view: a bounded set of visual elements added to the workspace."""

    view_id: str
    view_type: str
    label: str
    insertion_index: int


@dataclass(frozen=True)
class VisualElement:
    """A graphical mark encoding one data entity."""

    element_id: str
    view_id: str
    label: str
    attrs: Mapping[str, object] = field(default_factory=dict)


@dataclass(frozen=True, order=True)
class ElementRef:
    """Globally unique handle (view id + element id) for one visual element."""

    view_id: str
    element_id: str

    def as_dict(self) -> dict[str, str]:
        return {"view_id": self.view_id, "element_id": self.element_id}


@dataclass(frozen=True)
class JointTable:
    """Deduplicated element-id pairs relating two views (canonical view order)."""

    view_a: str
    view_b: str
    pairs: frozenset[tuple[str, str]]


@dataclass(frozen=True)
class RelationMatrix:
    """Binary matrix over the full element sets of two views.

    Rows and columns are sorted lexicographically by element id so the matrix
    is deterministic; zero-degree elements appear as all-zero rows/columns.
    """

    view_a: str
    view_b: str
    row_ids: tuple[str, ...]
    col_ids: tuple[str, ...]
    cells: tuple[tuple[int, ...], ...]

    def row(self, element_id: str) -> tuple[int, ...]:
        return self.cells[self.row_ids.index(element_id)]

    def ones(self) -> int:
        return sum(sum(r) for r in self.cells)


def tabulate_view(raw_view: Mapping, insertion_index: int = 0) -> tuple[ViewDescriptor, list[VisualElement]]:
    """Reverse-map a raw view payload into a descriptor plus one element per mark.

    No element is dropped or duplicated; required attrs for the view type
    (map: lat, lon) must be present on every element.
    """
    view_id = raw_view["view_id"]
    view_type = raw_view.get("view_type", "other")
    label = raw_view.get("label", view_id)
    raw_elements = raw_view.get("elements", [])
    if not raw_elements:
        raise ParseError(f"view {view_id!r} has no elements", position=f"views[{view_id}].elements")

    descriptor = ViewDescriptor(view_id=view_id, view_type=view_type, label=label, insertion_index=insertion_index)
    required = REQUIRED_ATTRS.get(view_type, ())
    elements: list[VisualElement] = []
    seen: set[str] = set()
    for raw in raw_elements:
        element_id = raw["element_id"]
        if element_id in seen:
            raise DuplicateElementId(f"element id {element_id!r} occurs twice in view {view_id!r}")
        seen.add(element_id)
        attrs = dict(raw.get("attrs", {}))
        for attr in required:
            if attr not in attrs:
                raise MissingRequiredAttr(view_type, attr, element_id)
        elements.append(
            VisualElement(element_id=element_id, view_id=view_id, label=raw.get("label", element_id), attrs=attrs)
        )
    return descriptor, elements


def build_joint_table(
    view_a: ViewDescriptor,
    view_b: ViewDescriptor,
    edges: Iterable[tuple[str, str]],
    *,
    elements_a: Collection[str],
    elements_b: Collection[str],
) -> JointTable:
    """Associate element ids of two views, deduplicated and in canonical order.

    The view with the lower insertion index is stored first; edges are flipped
    when the caller passed the views the other way around.
    """
    if view_a.view_id == view_b.view_id:
        raise SameViewPair(f"cannot relate view {view_a.view_id!r} to itself")
    if view_a.insertion_index > view_b.insertion_index:
        view_a, view_b = view_b, view_a
        elements_a, elements_b = elements_b, elements_a
        edges = [(b, a) for a, b in edges]

    ids_a = set(elements_a)
    ids_b = set(elements_b)
    pairs: set[tuple[str, str]] = set()
    for a, b in edges:
        if a not in ids_a:
            raise UnknownElement(f"element {a!r} does not resolve in view {view_a.view_id!r}")
        if b not in ids_b:
            raise UnknownElement(f"element {b!r} does not resolve in view {view_b.view_id!r}")
        pairs.add((a, b))
    return JointTable(view_a=view_a.view_id, view_b=view_b.view_id, pairs=frozenset(pairs))


def to_relation_matrix(
    joint: JointTable,
    elements_a: Collection[str],
    elements_b: Collection[str],
) -> RelationMatrix:
    """Expand a joint table to a binary matrix over the full element sets.

    cells[i][j] = 1 iff (row_ids[i], col_ids[j]) is in the joint table.
    """
    row_ids = tuple(sorted(elements_a))
    col_ids = tuple(sorted(elements_b))
    pairs = joint.pairs
    cells = tuple(tuple(1 if (r, c) in pairs else 0 for c in col_ids) for r in row_ids)
    return RelationMatrix(view_a=joint.view_a, view_b=joint.view_b, row_ids=row_ids, col_ids=col_ids, cells=cells)
