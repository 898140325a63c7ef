"""Multi-group relationship pipeline: all-pairs mining, view sequences,
overlap matching, chain assembly, and inclusion cleaning.

A chain walks one view sequence, one bicluster per consecutive view pair,
with every pair of neighboring biclusters overlapping in their shared view.
Interior views keep the shared entities (the intersection of the two adjacent
bicluster sides); end views keep their single bicluster side in full.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Mapping, Sequence

from .errors import ChainExplosion, InvalidArgument, NoSharedView, TooFewViews
from .mining import DEFAULT_MIN_COLS, DEFAULT_MIN_ROWS, Bicluster, content_hash, enumerate_closed_biclusters
from .model import ElementRef, RelationMatrix

DEFAULT_THRESHOLD = 0.4
MAX_CANDIDATE_PATHS = 100_000

ViewPair = tuple[str, str]


@dataclass(frozen=True)
class ViewSequence:
    """An ordered walk over distinct views, canonicalized so that the first
    view precedes the last in the input view order (no reverse duplicates)."""

    views: tuple[str, ...]


@dataclass(frozen=True)
class BiclusterChain:
    """An ordered linkage of biclusters across a view sequence.

    ``entity_sets`` holds the per-view element ids in sequence order;
    ``scores`` holds the matching score of each consecutive link pair.
    ``chain_id`` is a content hash, stable across recomputation.
    """

    chain_id: str
    sequence: ViewSequence
    links: tuple[Bicluster, ...]
    entity_sets: tuple[tuple[str, tuple[str, ...]], ...]
    scores: tuple[float, ...]

    @property
    def relationship_id(self) -> str:
        return self.chain_id

    def entity_map(self) -> dict[str, frozenset[str]]:
        return {view: frozenset(ids) for view, ids in self.entity_sets}

    def members(self) -> frozenset[ElementRef]:
        return frozenset(ElementRef(view, e) for view, ids in self.entity_sets for e in ids)

    def total_elements(self) -> int:
        return sum(len(ids) for _, ids in self.entity_sets)

    def as_dict(self) -> dict:
        return {
            "kind": "chain",
            "chain_id": self.chain_id,
            "sequence": list(self.sequence.views),
            "links": [link.as_dict() for link in self.links],
            "entity_sets": {view: list(ids) for view, ids in self.entity_sets},
            "scores": list(self.scores),
        }


def canonical_pair(view_a: str, view_b: str, view_order: Mapping[str, int]) -> ViewPair:
    if view_order[view_a] <= view_order[view_b]:
        return (view_a, view_b)
    return (view_b, view_a)


def pairwise_biclusters(
    view_ids: Sequence[str],
    matrices: Mapping[ViewPair, RelationMatrix],
    min_rows: int = DEFAULT_MIN_ROWS,
    min_cols: int = DEFAULT_MIN_COLS,
) -> dict[ViewPair, list[Bicluster]]:
    """Mine every unordered pair of the given views; pairs without a relation
    matrix yield empty lists."""
    view_order = {v: i for i, v in enumerate(view_ids)}
    out: dict[ViewPair, list[Bicluster]] = {}
    for a, b in combinations(view_ids, 2):
        pair = canonical_pair(a, b, view_order)
        matrix = matrices.get(pair)
        out[pair] = [] if matrix is None else enumerate_closed_biclusters(matrix, min_rows, min_cols)
    return out


def view_sequences(view_ids: Sequence[str]) -> list[ViewSequence]:
    """All permutations of the views without reverse duplicates: exactly n!/2
    sequences, keeping the one of each reverse pair whose first view precedes
    its last in the input order."""
    if len(view_ids) < 2:
        raise TooFewViews(f"need at least 2 views, got {len(view_ids)}")
    if len(set(view_ids)) != len(view_ids):
        raise InvalidArgument("view ids must be distinct")
    position = {v: i for i, v in enumerate(view_ids)}
    return [
        ViewSequence(views=perm)
        for perm in permutations(view_ids)
        if position[perm[0]] < position[perm[-1]]
    ]


def matching(bic_1: Bicluster, bic_2: Bicluster, shared_view: str) -> float:
    """Overlap of the two biclusters' element sets in the shared view:
    |intersection| / |union|."""
    side_1 = bic_1.side(shared_view)
    side_2 = bic_2.side(shared_view)
    if side_1 is None or side_2 is None:
        raise NoSharedView(f"both biclusters must have a side in view {shared_view!r}")
    union = side_1 | side_2
    if not union:
        return 0.0
    return len(side_1 & side_2) / len(union)


def _assemble(sequence: ViewSequence, links: Sequence[Bicluster], scores: Sequence[float]) -> BiclusterChain:
    views = sequence.views
    entity_sets: list[tuple[str, tuple[str, ...]]] = []
    for i, view in enumerate(views):
        if i == 0:
            ids = links[0].side(view)
        elif i == len(views) - 1:
            ids = links[-1].side(view)
        else:
            ids = links[i - 1].side(view) & links[i].side(view)
        entity_sets.append((view, tuple(sorted(ids))))
    chain_id = content_hash("chain", list(views), [link.bicluster_id for link in links])
    return BiclusterChain(
        chain_id=chain_id,
        sequence=sequence,
        links=tuple(links),
        entity_sets=tuple(entity_sets),
        scores=tuple(scores),
    )


def build_chains(
    sequences: Iterable[ViewSequence],
    pair_biclusters: Mapping[ViewPair, Sequence[Bicluster]],
    threshold: float = DEFAULT_THRESHOLD,
    max_candidate_paths: int = MAX_CANDIDATE_PATHS,
) -> list[BiclusterChain]:
    """For each sequence, every full-length path of biclusters over its
    consecutive view pairs whose every neighboring pair matches with score
    >= threshold and > 0.

    Sequences missing biclusters for any consecutive pair produce no chains.
    Sequences whose candidate path count exceeds ``max_candidate_paths``
    abort with a diagnostic instead of exhausting memory.
    """
    if not 0.0 <= threshold <= 1.0:
        raise InvalidArgument(f"threshold must be in [0, 1], got {threshold}")
    chains: list[BiclusterChain] = []
    for sequence in sequences:
        views = sequence.views
        options: list[Sequence[Bicluster]] = []
        for a, b in zip(views, views[1:]):
            found = pair_biclusters.get((a, b)) or pair_biclusters.get((b, a)) or []
            options.append(found)
        if not all(options):
            continue
        candidates = 1
        for opts in options:
            candidates *= len(opts)
        if candidates > max_candidate_paths:
            raise ChainExplosion(
                f"sequence {'-'.join(views)} has {candidates} candidate paths "
                f"(cap {max_candidate_paths})",
                detail={"sequence": list(views), "candidates": candidates},
            )

        def walk(depth: int, path: list[Bicluster], scores: list[float]) -> None:
            if depth == len(options):
                chains.append(_assemble(sequence, path, scores))
                return
            for bic in options[depth]:
                if depth == 0:
                    walk(1, [bic], [])
                    continue
                score = matching(path[-1], bic, views[depth])
                if score > 0.0 and score >= threshold:
                    walk(depth + 1, path + [bic], scores + [score])

        walk(0, [], [])
    return chains


def clean_chains(chains: Sequence[BiclusterChain]) -> list[BiclusterChain]:
    """Drop every chain whose total entity set is a strict subset of another
    chain's; among chains with identical entity sets keep the one with the
    canonically smallest chain id. No inclusion survives between outputs."""
    by_entities: dict[frozenset[ElementRef], BiclusterChain] = {}
    for chain in chains:
        key = chain.members()
        kept = by_entities.get(key)
        if kept is None or chain.chain_id < kept.chain_id:
            by_entities[key] = chain

    entity_sets = list(by_entities.keys())
    selected = [
        by_entities[entities]
        for entities in entity_sets
        if not any(entities < other for other in entity_sets)
    ]
    selected.sort(key=lambda c: (c.sequence.views, c.chain_id))
    return selected
