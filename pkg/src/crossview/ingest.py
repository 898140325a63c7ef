"""Dataset bundle loading and relation derivation.

A bundle is a single JSON document carrying views with their elements,
pairwise relations (explicit edge lists or a co-occurrence directive), and
optional documents with pre-annotated entity occurrences. NER happens
upstream; bundles arrive already annotated.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence, Union

from .errors import (
    DanglingReference,
    ParseError,
    SameViewPair,
    SpanOutOfBounds,
    UnknownElement,
    UnknownView,
)
from .model import (
    VIEW_TYPES,
    ElementRef,
    JointTable,
    RelationMatrix,
    ViewDescriptor,
    VisualElement,
    build_joint_table,
    tabulate_view,
    to_relation_matrix,
)

BUNDLE_KEYS = {"dataset_id", "views", "relations", "documents"}
COOCCURRENCE = "cooccurrence"


@dataclass(frozen=True)
class Occurrence:
    """One annotated entity mention inside a document."""

    ref: ElementRef
    start: int
    end: int
    snippet: str

    def as_dict(self) -> dict:
        return {
            "view_id": self.ref.view_id,
            "element_id": self.ref.element_id,
            "start": self.start,
            "end": self.end,
            "snippet": self.snippet,
        }


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str
    text: str
    occurrences: tuple[Occurrence, ...]

    def mentioned(self) -> frozenset[ElementRef]:
        return frozenset(occ.ref for occ in self.occurrences)


@dataclass(frozen=True)
class RelationSpec:
    """One validated relation entry: explicit edges or a derive directive."""

    view_a: str
    view_b: str
    edges: tuple[tuple[str, str], ...] | None  # None => derive co-occurrence


@dataclass(frozen=True)
class DatasetBundle:
    dataset_id: str
    views: tuple[Mapping, ...]
    relations: tuple[RelationSpec, ...]
    documents: tuple[Document, ...]


def _expect(condition: bool, message: str, position: str) -> None:
    if not condition:
        raise ParseError(message, position=position)


def load_bundle(source: Union[str, os.PathLike, IO[str], IO[bytes], Mapping]) -> DatasetBundle:
    """Parse and fully validate a bundle from a path, stream, or parsed dict.

    All cross-references must resolve and all occurrence spans must fall
    inside their document text.
    """
    if isinstance(source, Mapping):
        raw = source
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            raw = _parse_json(fh)
    else:
        raw = _parse_json(source)

    _expect(isinstance(raw, Mapping), "bundle must be a JSON object", "$")
    unknown = set(raw.keys()) - BUNDLE_KEYS
    _expect(not unknown, f"unknown top-level keys: {sorted(unknown)}", "$")
    _expect("dataset_id" in raw and isinstance(raw["dataset_id"], str), "dataset_id must be a string", "dataset_id")
    _expect(isinstance(raw.get("views"), list) and raw["views"], "views must be a non-empty list", "views")

    views: list[Mapping] = []
    element_ids: dict[str, set[str]] = {}
    for i, view in enumerate(raw["views"]):
        pos = f"views[{i}]"
        _expect(isinstance(view, Mapping), "view must be an object", pos)
        _expect(isinstance(view.get("view_id"), str), "view_id must be a string", pos)
        view_id = view["view_id"]
        _expect(view_id not in element_ids, f"duplicate view id {view_id!r}", pos)
        _expect(view.get("view_type") in VIEW_TYPES, f"view_type must be one of {VIEW_TYPES}", f"{pos}.view_type")
        elements = view.get("elements")
        _expect(isinstance(elements, list) and elements, "elements must be a non-empty list", f"{pos}.elements")
        ids = set()
        for j, element in enumerate(elements):
            epos = f"{pos}.elements[{j}]"
            _expect(isinstance(element, Mapping), "element must be an object", epos)
            _expect(isinstance(element.get("element_id"), str), "element_id must be a string", epos)
            attrs = element.get("attrs", {})
            _expect(isinstance(attrs, Mapping), "attrs must be an object", f"{epos}.attrs")
            for key, value in attrs.items():
                _expect(
                    isinstance(value, (str, int, float)),
                    f"attr {key!r} must be a string or number",
                    f"{epos}.attrs.{key}",
                )
            ids.add(element["element_id"])
        element_ids[view_id] = ids
        views.append(view)

    relations: list[RelationSpec] = []
    seen_pairs: set[frozenset[str]] = set()
    for i, rel in enumerate(raw.get("relations", [])):
        pos = f"relations[{i}]"
        _expect(isinstance(rel, Mapping), "relation must be an object", pos)
        view_a, view_b = rel.get("view_a"), rel.get("view_b")
        for vid in (view_a, view_b):
            if vid not in element_ids:
                raise DanglingReference(f"{pos} references unknown view {vid!r}")
        if view_a == view_b:
            raise SameViewPair(f"{pos} relates view {view_a!r} to itself")
        pair_key = frozenset((view_a, view_b))
        _expect(pair_key not in seen_pairs, f"duplicate relation entry for pair {sorted(pair_key)}", pos)
        seen_pairs.add(pair_key)

        if rel.get("derive") is not None:
            _expect(rel["derive"] == COOCCURRENCE, f"derive must be {COOCCURRENCE!r}", f"{pos}.derive")
            _expect("edges" not in rel, "relation cannot carry both edges and derive", pos)
            _expect(bool(raw.get("documents")), "derive requires documents in the bundle", pos)
            relations.append(RelationSpec(view_a=view_a, view_b=view_b, edges=None))
            continue
        edges_raw = rel.get("edges")
        _expect(isinstance(edges_raw, list), "relation needs an edges list or a derive directive", pos)
        edges = []
        for j, edge in enumerate(edges_raw):
            _expect(
                isinstance(edge, Sequence) and not isinstance(edge, str) and len(edge) == 2,
                "edge must be a [element_a, element_b] pair",
                f"{pos}.edges[{j}]",
            )
            a, b = edge
            if a not in element_ids[view_a]:
                raise DanglingReference(f"{pos}.edges[{j}] references unknown element {a!r} of view {view_a!r}")
            if b not in element_ids[view_b]:
                raise DanglingReference(f"{pos}.edges[{j}] references unknown element {b!r} of view {view_b!r}")
            edges.append((a, b))
        relations.append(RelationSpec(view_a=view_a, view_b=view_b, edges=tuple(edges)))

    documents: list[Document] = []
    seen_docs: set[str] = set()
    for i, doc in enumerate(raw.get("documents", [])):
        pos = f"documents[{i}]"
        _expect(isinstance(doc, Mapping), "document must be an object", pos)
        _expect(isinstance(doc.get("doc_id"), str), "doc_id must be a string", pos)
        _expect(doc["doc_id"] not in seen_docs, f"duplicate doc_id {doc['doc_id']!r}", pos)
        seen_docs.add(doc["doc_id"])
        text = doc.get("text")
        _expect(isinstance(text, str), "text must be a string", f"{pos}.text")
        occurrences = []
        for j, occ in enumerate(doc.get("occurrences", [])):
            opos = f"{pos}.occurrences[{j}]"
            _expect(isinstance(occ, Mapping), "occurrence must be an object", opos)
            view_id, element_id = occ.get("view_id"), occ.get("element_id")
            if view_id not in element_ids or element_id not in element_ids[view_id]:
                raise DanglingReference(f"{opos} references unknown element {view_id!r}/{element_id!r}")
            start, end = occ.get("start"), occ.get("end")
            _expect(isinstance(start, int) and isinstance(end, int), "start and end must be integers", opos)
            if not 0 <= start < end <= len(text):
                raise SpanOutOfBounds(f"{opos} span [{start}, {end}) outside text of length {len(text)}")
            occurrences.append(
                Occurrence(ref=ElementRef(view_id, element_id), start=start, end=end, snippet=text[start:end])
            )
        documents.append(
            Document(doc_id=doc["doc_id"], title=doc.get("title", doc["doc_id"]), text=text,
                     occurrences=tuple(occurrences))
        )

    return DatasetBundle(
        dataset_id=raw["dataset_id"],
        views=tuple(views),
        relations=tuple(relations),
        documents=tuple(documents),
    )


def _parse_json(stream: IO) -> Mapping:
    try:
        data = stream.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        position = f"line {exc.lineno} column {exc.colno}" if isinstance(exc, json.JSONDecodeError) else "byte stream"
        raise ParseError(f"invalid JSON: {exc}", position=position) from exc


def derive_cooccurrence(
    documents: Iterable[Document],
    view_a: str,
    view_b: str,
) -> set[tuple[str, str]]:
    """Edges between elements of two views that share at least one document.

    Deduplicated and independent of document order; adding documents can only
    add edges.
    """
    if view_a == view_b:
        raise SameViewPair(f"cannot derive co-occurrence of view {view_a!r} with itself")
    edges: set[tuple[str, str]] = set()
    for doc in documents:
        mentioned = doc.mentioned()
        side_a = sorted(ref.element_id for ref in mentioned if ref.view_id == view_a)
        side_b = sorted(ref.element_id for ref in mentioned if ref.view_id == view_b)
        edges.update((a, b) for a in side_a for b in side_b)
    return edges


def serialize_bundle(bundle: DatasetBundle) -> dict:
    """Inverse of load_bundle, up to canonical ordering of derived fields."""
    out: dict = {
        "dataset_id": bundle.dataset_id,
        "views": [dict(v) for v in bundle.views],
        "relations": [],
    }
    for rel in bundle.relations:
        entry: dict = {"view_a": rel.view_a, "view_b": rel.view_b}
        if rel.edges is None:
            entry["derive"] = COOCCURRENCE
        else:
            entry["edges"] = [list(edge) for edge in rel.edges]
        out["relations"].append(entry)
    if bundle.documents:
        out["documents"] = [
            {
                "doc_id": doc.doc_id,
                "title": doc.title,
                "text": doc.text,
                "occurrences": [
                    {"view_id": occ.ref.view_id, "element_id": occ.ref.element_id,
                     "start": occ.start, "end": occ.end}
                    for occ in doc.occurrences
                ],
            }
            for doc in bundle.documents
        ]
    return out


@dataclass
class Dataset:
    """Fully assembled dataset: tabulated views, joint tables, and relation
    matrices, ready for mining and the session layer."""

    dataset_id: str
    views: dict[str, ViewDescriptor] = field(default_factory=dict)
    elements: dict[str, dict[str, VisualElement]] = field(default_factory=dict)
    documents: tuple[Document, ...] = ()
    joints: dict[tuple[str, str], JointTable] = field(default_factory=dict)
    matrices: dict[tuple[str, str], RelationMatrix] = field(default_factory=dict)

    @classmethod
    def from_bundle(cls, bundle: DatasetBundle) -> "Dataset":
        ds = cls(dataset_id=bundle.dataset_id, documents=bundle.documents)
        for index, raw_view in enumerate(bundle.views):
            descriptor, elements = tabulate_view(raw_view, insertion_index=index)
            ds.views[descriptor.view_id] = descriptor
            ds.elements[descriptor.view_id] = {e.element_id: e for e in elements}
        for rel in bundle.relations:
            edges = rel.edges
            if edges is None:
                edges = tuple(sorted(derive_cooccurrence(bundle.documents, rel.view_a, rel.view_b)))
            joint = build_joint_table(
                ds.views[rel.view_a],
                ds.views[rel.view_b],
                edges,
                elements_a=ds.elements[rel.view_a].keys(),
                elements_b=ds.elements[rel.view_b].keys(),
            )
            pair = (joint.view_a, joint.view_b)
            ds.joints[pair] = joint
            ds.matrices[pair] = to_relation_matrix(
                joint, ds.elements[joint.view_a].keys(), ds.elements[joint.view_b].keys()
            )
        return ds

    @classmethod
    def load(cls, source) -> "Dataset":
        return cls.from_bundle(load_bundle(source))

    def view_order(self) -> list[str]:
        return [v.view_id for v in sorted(self.views.values(), key=lambda d: d.insertion_index)]

    def require_view(self, view_id: str) -> ViewDescriptor:
        try:
            return self.views[view_id]
        except KeyError:
            raise UnknownView(f"unknown view {view_id!r}") from None

    def resolve(self, ref: ElementRef) -> VisualElement:
        try:
            return self.elements[ref.view_id][ref.element_id]
        except KeyError:
            raise UnknownElement(f"element {ref.view_id!r}/{ref.element_id!r} does not resolve") from None

    def canonical_pair(self, view_a: str, view_b: str) -> tuple[str, str]:
        if self.require_view(view_a).insertion_index <= self.require_view(view_b).insertion_index:
            return (view_a, view_b)
        return (view_b, view_a)

    def matrix_for(self, view_a: str, view_b: str) -> RelationMatrix | None:
        return self.matrices.get(self.canonical_pair(view_a, view_b))
