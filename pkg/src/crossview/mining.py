"""Enumeration of all closed biclusters (maximal bicliques) of a binary
relation matrix, subject to minimum size bounds on both sides.

The enumerator walks closed column sets by prefix-preserving closure
extension (the closed-itemset strategy of LCM-family miners), keeping row
sets as integer bitmasks so support intersection is a single AND.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import InvalidArgument
from .model import ElementRef, RelationMatrix

DEFAULT_MIN_ROWS = 2
DEFAULT_MIN_COLS = 2


def content_hash(*parts: object) -> str:
    """Stable 16-hex id derived from canonical JSON of the given parts."""
    payload = json.dumps(parts, sort_keys=True, separators=(",", ":"))
    return hashlib.sha1(payload.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class Bicluster:
    """A closed bicluster: two element sets whose cross product is all ones,
    extendable on neither side. ``bicluster_id`` is a content hash, so
    recomputation is referentially stable."""

    bicluster_id: str
    view_a: str
    view_b: str
    elements_a: tuple[str, ...]
    elements_b: tuple[str, ...]

    @staticmethod
    def build(view_a: str, view_b: str, elements_a: tuple[str, ...], elements_b: tuple[str, ...]) -> "Bicluster":
        bid = content_hash("bicluster", view_a, view_b, list(elements_a), list(elements_b))
        return Bicluster(bid, view_a, view_b, elements_a, elements_b)

    @property
    def relationship_id(self) -> str:
        return self.bicluster_id

    def side(self, view_id: str) -> frozenset[str] | None:
        """Element set of this bicluster in the given view, if it has one."""
        if view_id == self.view_a:
            return frozenset(self.elements_a)
        if view_id == self.view_b:
            return frozenset(self.elements_b)
        return None

    def members(self) -> frozenset[ElementRef]:
        return frozenset(
            [ElementRef(self.view_a, e) for e in self.elements_a]
            + [ElementRef(self.view_b, e) for e in self.elements_b]
        )

    def total_elements(self) -> int:
        return len(self.elements_a) + len(self.elements_b)

    def as_dict(self) -> dict:
        return {
            "kind": "bicluster",
            "bicluster_id": self.bicluster_id,
            "view_a": self.view_a,
            "view_b": self.view_b,
            "elements_a": list(self.elements_a),
            "elements_b": list(self.elements_b),
        }


def enumerate_closed_biclusters(
    matrix: RelationMatrix,
    min_rows: int = DEFAULT_MIN_ROWS,
    min_cols: int = DEFAULT_MIN_COLS,
) -> list[Bicluster]:
    """Enumerate every closed bicluster of ``matrix`` with at least
    ``min_rows`` row elements and ``min_cols`` column elements.

    A pair (R, C) qualifies iff every cell of R x C is 1, no row outside R is
    1 on all of C, and no column outside C is 1 on all of R. Output is sorted
    lexicographically on (elements_a, elements_b) and free of duplicates; an
    empty matrix yields an empty list.
    """
    if min_rows < 1 or min_cols < 1:
        raise InvalidArgument("min_rows and min_cols must be >= 1")
    n_rows = len(matrix.row_ids)
    n_cols = len(matrix.col_ids)
    if n_rows == 0 or n_cols == 0:
        return []

    # per-column supports as row bitmasks
    supports = [0] * n_cols
    for i, row in enumerate(matrix.cells):
        bit = 1 << i
        for j, cell in enumerate(row):
            if cell:
                supports[j] |= bit

    found: list[tuple[int, tuple[int, ...]]] = []

    def extend(row_mask: int, col_set: frozenset[int], start: int) -> None:
        if row_mask.bit_count() >= min_rows and len(col_set) >= min_cols:
            found.append((row_mask, tuple(sorted(col_set))))
        for j in range(start, n_cols):
            if j in col_set:
                continue
            narrowed = row_mask & supports[j]
            if narrowed.bit_count() < min_rows:
                continue
            closure = frozenset(c for c in range(n_cols) if supports[c] & narrowed == narrowed)
            # prefix test: adding j must not pull in an earlier column we skipped
            if any(c < j and c not in col_set for c in closure):
                continue
            extend(narrowed, closure, j + 1)

    all_rows = (1 << n_rows) - 1
    root_cols = frozenset(c for c in range(n_cols) if supports[c] == all_rows)
    extend(all_rows, root_cols, 0)

    out = []
    for row_mask, cols in found:
        elements_a = tuple(matrix.row_ids[i] for i in range(n_rows) if row_mask >> i & 1)
        elements_b = tuple(matrix.col_ids[j] for j in cols)
        out.append(Bicluster.build(matrix.view_a, matrix.view_b, elements_a, elements_b))
    out.sort(key=lambda b: (b.elements_a, b.elements_b))
    return out
