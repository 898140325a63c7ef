"""Shared builders for test data: the three-view golden dataset, raw
relation matrices, and random matrix generation."""

from __future__ import annotations

import random

from crossview.model import RelationMatrix

# Golden three-view dataset: A relates to B through two overlapping
# biclusters, every B element relates to both C elements, A and C carry no
# direct relations. Expanding the two A-B bicliques gives 9 distinct edges.
GOLDEN_AB_EDGES = [
    ["A1", "B1"], ["A1", "B2"],
    ["A2", "B1"], ["A2", "B2"], ["A2", "B3"], ["A2", "B4"],
    ["A3", "B2"], ["A3", "B3"], ["A3", "B4"],
]
GOLDEN_BC_EDGES = [[b, c] for b in ["B1", "B2", "B3", "B4"] for c in ["C1", "C2"]]


def golden_bundle_dict() -> dict:
    return {
        "dataset_id": "golden",
        "views": [
            {
                "view_id": "A",
                "view_type": "graph",
                "label": "View A",
                "elements": [{"element_id": e, "label": e} for e in ["A1", "A2", "A3"]],
            },
            {
                "view_id": "B",
                "view_type": "list",
                "label": "View B",
                "elements": [{"element_id": e, "label": e} for e in ["B1", "B2", "B3", "B4"]],
            },
            {
                "view_id": "C",
                "view_type": "list",
                "label": "View C",
                "elements": [{"element_id": e, "label": e} for e in ["C1", "C2"]],
            },
        ],
        "relations": [
            {"view_a": "A", "view_b": "B", "edges": [list(e) for e in GOLDEN_AB_EDGES]},
            {"view_a": "B", "view_b": "C", "edges": [list(e) for e in GOLDEN_BC_EDGES]},
        ],
    }


def make_matrix(
    rows: dict[str, set[str]],
    col_ids: list[str],
    view_a: str = "A",
    view_b: str = "B",
) -> RelationMatrix:
    """Build a RelationMatrix from a row-id -> related-col-ids mapping."""
    row_ids = tuple(sorted(rows))
    cols = tuple(sorted(col_ids))
    cells = tuple(tuple(1 if c in rows[r] else 0 for c in cols) for r in row_ids)
    return RelationMatrix(view_a=view_a, view_b=view_b, row_ids=row_ids, col_ids=cols, cells=cells)


def random_matrix(rng: random.Random, n_rows: int, n_cols: int, density: float) -> RelationMatrix:
    rows = {
        f"r{i:02d}": {f"c{j:02d}" for j in range(n_cols) if rng.random() < density}
        for i in range(n_rows)
    }
    return make_matrix(rows, [f"c{j:02d}" for j in range(n_cols)])
