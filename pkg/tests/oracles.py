"""Independent brute-force oracles the fast implementations are checked
against. These stay deliberately naive: row-subset enumeration with closure,
never sharing code with the mined path."""

from __future__ import annotations

from itertools import permutations

from crossview.model import RelationMatrix


def brute_force_biclusters(
    matrix: RelationMatrix, min_rows: int = 2, min_cols: int = 2
) -> set[tuple[tuple[str, ...], tuple[str, ...]]]:
    """All closed biclusters by exhaustion: every row subset, column closure,
    row re-closure, dedupe, maximality filter, then the size bounds."""
    n_rows = len(matrix.row_ids)
    n_cols = len(matrix.col_ids)
    cells = matrix.cells
    candidates = set()
    for mask in range(2**n_rows):
        rows = [i for i in range(n_rows) if mask >> i & 1]
        cols = [j for j in range(n_cols) if all(cells[i][j] for i in rows)]
        rows2 = [i for i in range(n_rows) if all(cells[i][j] for j in cols)]
        candidates.add((tuple(rows2), tuple(cols)))

    maximal = set()
    for rows, cols in candidates:
        dominated = any(
            set(rows) <= set(r2) and set(cols) <= set(c2) and (rows, cols) != (r2, c2)
            for r2, c2 in candidates
        )
        if not dominated:
            maximal.add((rows, cols))

    return {
        (
            tuple(matrix.row_ids[i] for i in rows),
            tuple(matrix.col_ids[j] for j in cols),
        )
        for rows, cols in maximal
        if len(rows) >= min_rows and len(cols) >= min_cols
    }


def brute_force_sequences(view_ids: list[str]) -> set[tuple[str, ...]]:
    """All permutations with each reverse pair collapsed to one member."""
    kept: set[tuple[str, ...]] = set()
    for perm in permutations(view_ids):
        if perm[::-1] not in kept:
            kept.add(perm)
    return kept
