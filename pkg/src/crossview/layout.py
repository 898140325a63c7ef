"""Relationship-view presentation geometry: binary membership vectors,
Jaccard distances, classical (Torgerson) 2-D MDS, circle radii, and mini
bar-chart summaries.

``mds_2d`` returns the raw embedding (distances are reproduced exactly for
exactly embeddable inputs); ``compute_layout`` rescales coordinates into
[-1, 1] for presentation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import EmptyInput, InvalidArgument, NonFiniteDistance, OutOfRangeCount
from .mining import Bicluster
from .chains import BiclusterChain
from .model import ElementRef

Relationship = Union[Bicluster, BiclusterChain]

DEFAULT_RADIUS_MIN = 6.0
DEFAULT_RADIUS_MAX = 30.0


@dataclass(frozen=True)
class RelationshipVectors:
    """Binary membership matrix over the shared element universe of one
    relationship-view: one row per relationship, one column per element."""

    relationship_ids: tuple[str, ...]
    universe: tuple[ElementRef, ...]
    matrix: np.ndarray


@dataclass
class LayoutResult:
    """Geometry for every relationship of one relationship-view."""

    coordinates: dict[str, tuple[float, float]] = field(default_factory=dict)
    radii: dict[str, float] = field(default_factory=dict)
    bar_summaries: dict[str, list[tuple[str, int]]] = field(default_factory=dict)
    bar_reference_max: int = 0

    def as_dict(self) -> dict:
        return {
            "coordinates": {rid: [x, y] for rid, (x, y) in self.coordinates.items()},
            "radii": dict(self.radii),
            "bar_summaries": {
                rid: [{"view_id": v, "count": c} for v, c in bars] for rid, bars in self.bar_summaries.items()
            },
            "bar_reference_max": self.bar_reference_max,
        }


def vectorize(relationships: Sequence[Relationship], view_order: Sequence[str]) -> RelationshipVectors:
    """Turn relationships into rows of a binary matrix whose columns are the
    union of all member elements, ordered by view order then element id."""
    if not relationships:
        raise EmptyInput("cannot vectorize an empty relationship list")
    position = {v: i for i, v in enumerate(view_order)}
    universe = sorted(
        {ref for rel in relationships for ref in rel.members()},
        key=lambda ref: (position.get(ref.view_id, len(position)), ref.view_id, ref.element_id),
    )
    index = {ref: i for i, ref in enumerate(universe)}
    matrix = np.zeros((len(relationships), len(universe)), dtype=np.int8)
    for i, rel in enumerate(relationships):
        for ref in rel.members():
            matrix[i, index[ref]] = 1
    return RelationshipVectors(
        relationship_ids=tuple(rel.relationship_id for rel in relationships),
        universe=tuple(universe),
        matrix=matrix,
    )


def pairwise_distances(vectors: RelationshipVectors) -> np.ndarray:
    """Symmetric Jaccard distance matrix (1 - |intersection| / |union|) over
    the binary membership rows."""
    m = vectors.matrix.astype(np.float64)
    inter = m @ m.T
    sizes = m.sum(axis=1)
    union = sizes[:, None] + sizes[None, :] - inter
    with np.errstate(invalid="ignore", divide="ignore"):
        dist = 1.0 - np.where(union > 0, inter / np.where(union > 0, union, 1.0), 1.0)
    np.fill_diagonal(dist, 0.0)
    return dist


def mds_2d(distances: np.ndarray) -> np.ndarray:
    """Classical MDS: double-center -0.5 * D^2, take the two largest
    non-negative eigenpairs, orient each axis so its largest-magnitude
    coordinate is positive.

    One point maps to the origin; two points map to +-d/2 on the x-axis.
    """
    d = np.asarray(distances, dtype=np.float64)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise InvalidArgument(f"distance matrix must be square, got shape {d.shape}")
    if not np.isfinite(d).all():
        raise NonFiniteDistance("distance matrix contains non-finite values")
    n = d.shape[0]
    if n == 0:
        raise EmptyInput("distance matrix is empty")
    if n == 1:
        return np.zeros((1, 2))
    if n == 2:
        half = d[0, 1] / 2.0
        return np.array([[half, 0.0], [-half, 0.0]])

    centering = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * centering @ (d**2) @ centering
    eigvals, eigvecs = np.linalg.eigh(b)
    order = np.argsort(eigvals)[::-1][:2]
    coords = np.zeros((n, 2))
    for axis, idx in enumerate(order):
        scale = np.sqrt(max(eigvals[idx], 0.0))
        coords[:, axis] = eigvecs[:, idx] * scale
    for axis in range(2):
        col = coords[:, axis]
        extreme = np.argmax(np.abs(col))
        if col[extreme] < 0:
            coords[:, axis] = -col
    return coords


def radius(count: int, count_min: int, count_max: int, r_min: float, r_max: float) -> float:
    """Linear map from element count to circle radius; hits both endpoints
    exactly, degenerate count range maps to the midpoint radius."""
    if r_min > r_max:
        raise InvalidArgument(f"r_min {r_min} exceeds r_max {r_max}")
    if not count_min <= count <= count_max:
        raise OutOfRangeCount(f"count {count} outside [{count_min}, {count_max}]")
    if count_max == count_min:
        return (r_min + r_max) / 2.0
    return r_min + (r_max - r_min) * (count - count_min) / (count_max - count_min)


def bar_summary(relationship: Relationship, view_order: Sequence[str]) -> list[tuple[str, int]]:
    """Per-view element counts of one relationship, ordered by the sequence
    the views were added to the workspace."""
    if isinstance(relationship, BiclusterChain):
        counts = {view: len(ids) for view, ids in relationship.entity_sets}
    else:
        counts = {
            relationship.view_a: len(relationship.elements_a),
            relationship.view_b: len(relationship.elements_b),
        }
    return [(view, counts[view]) for view in view_order if view in counts]


def compute_layout(
    relationships: Sequence[Relationship],
    view_order: Sequence[str],
    r_min: float = DEFAULT_RADIUS_MIN,
    r_max: float = DEFAULT_RADIUS_MAX,
) -> LayoutResult:
    """Full presentation geometry for one relationship-view; coordinates are
    scaled into [-1, 1] by the largest coordinate magnitude."""
    if not relationships:
        return LayoutResult()
    vectors = vectorize(relationships, view_order)
    coords = mds_2d(pairwise_distances(vectors))
    peak = float(np.max(np.abs(coords)))
    if peak > 0:
        coords = coords / peak

    counts = [rel.total_elements() for rel in relationships]
    count_min, count_max = min(counts), max(counts)
    result = LayoutResult()
    for rel, (x, y), count in zip(relationships, coords, counts):
        rid = rel.relationship_id
        result.coordinates[rid] = (float(x), float(y))
        result.radii[rid] = radius(count, count_min, count_max, r_min, r_max)
        result.bar_summaries[rid] = bar_summary(rel, view_order)
    result.bar_reference_max = max(
        (count for bars in result.bar_summaries.values() for _, count in bars), default=0
    )
    return result
