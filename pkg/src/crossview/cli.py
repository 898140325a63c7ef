"""Batch command-line surface: bundle validation, mining, chaining, layout,
and the HTTP service.

Exit codes: 0 success, 1 usage error, 2 data error. All JSON output is
canonical (sorted keys, engine-ordered arrays) so repeated runs are
byte-identical.
"""

from __future__ import annotations

import json
import sys

import click

from .chains import DEFAULT_THRESHOLD, build_chains, clean_chains, pairwise_biclusters, view_sequences
from .errors import EngineError, TooFewViews
from .ingest import Dataset, load_bundle
from .layout import compute_layout
from .mining import DEFAULT_MIN_COLS, DEFAULT_MIN_ROWS, enumerate_closed_biclusters


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(obj) -> None:
    click.echo(canonical_json(obj), nl=False)


def _parse_views(views: str) -> list[str]:
    ids = [v.strip() for v in views.split(",") if v.strip()]
    if not ids:
        raise click.UsageError("--views needs a comma-separated list of view ids")
    return ids


@click.group()
def cli() -> None:
    """Cross-view relationship toolkit."""


@cli.command()
@click.option("--bundle", "bundle_path", required=True, help="Path to a dataset bundle (JSON).")
def ingest(bundle_path: str) -> None:
    """Validate a bundle and print a summary."""
    dataset = Dataset.from_bundle(load_bundle(bundle_path))
    _emit(
        {
            "dataset_id": dataset.dataset_id,
            "views": {
                vid: {"elements": len(dataset.elements[vid]), "view_type": dataset.views[vid].view_type}
                for vid in dataset.view_order()
            },
            "relations": {f"{a}~{b}": m.ones() for (a, b), m in sorted(dataset.matrices.items())},
            "documents": len(dataset.documents),
        }
    )


@cli.command()
@click.option("--bundle", "bundle_path", required=True)
@click.option("--views", required=True, help="Exactly two view ids, comma separated.")
@click.option("--min-rows", default=DEFAULT_MIN_ROWS, show_default=True)
@click.option("--min-cols", default=DEFAULT_MIN_COLS, show_default=True)
def mine(bundle_path: str, views: str, min_rows: int, min_cols: int) -> None:
    """Enumerate closed biclusters for one view pair."""
    ids = _parse_views(views)
    if len(ids) != 2:
        raise click.UsageError("mine needs exactly two views")
    dataset = Dataset.load(bundle_path)
    matrix = dataset.matrix_for(ids[0], ids[1])
    biclusters = [] if matrix is None else enumerate_closed_biclusters(matrix, min_rows, min_cols)
    _emit(
        {
            "dataset_id": dataset.dataset_id,
            "views": sorted(ids, key=lambda v: dataset.views[v].insertion_index),
            "min_rows": min_rows,
            "min_cols": min_cols,
            "biclusters": [b.as_dict() for b in biclusters],
        }
    )


@cli.command()
@click.option("--bundle", "bundle_path", required=True)
@click.option("--views", required=True, help="View ids, comma separated (two or more).")
@click.option("--threshold", default=DEFAULT_THRESHOLD, show_default=True, type=float)
def chain(bundle_path: str, views: str, threshold: float) -> None:
    """Compute cleaned bicluster-chains for a view set."""
    ids = _parse_views(views)
    if len(ids) < 2:
        raise TooFewViews("chain needs at least two views")
    dataset = Dataset.load(bundle_path)
    chains = _compute_chains(dataset, ids, threshold)
    _emit(
        {
            "dataset_id": dataset.dataset_id,
            "views": _ordered(dataset, ids),
            "threshold": threshold,
            "chains": [c.as_dict() for c in chains],
        }
    )


@cli.command()
@click.option("--bundle", "bundle_path", required=True)
@click.option("--views", required=True)
@click.option("--threshold", default=DEFAULT_THRESHOLD, show_default=True, type=float)
def layout(bundle_path: str, views: str, threshold: float) -> None:
    """Compute relationship-view geometry (coordinates, radii, bar summaries)."""
    ids = _parse_views(views)
    dataset = Dataset.load(bundle_path)
    if len(ids) == 2:
        matrix = dataset.matrix_for(ids[0], ids[1])
        relationships = [] if matrix is None else enumerate_closed_biclusters(matrix)
    else:
        relationships = _compute_chains(dataset, ids, threshold)
    result = compute_layout(relationships, dataset.view_order())
    _emit(
        {
            "dataset_id": dataset.dataset_id,
            "views": _ordered(dataset, ids),
            "relationships": [r.relationship_id for r in relationships],
            "layout": result.as_dict(),
        }
    )


@cli.command()
@click.option("--port", default=8080, show_default=True, envvar="APP_PORT")
@click.option("--host", default="127.0.0.1", show_default=True, envvar="APP_HOST")
@click.option("--bundle", "bundle_path", default=None, envvar="APP_BUNDLE")
@click.option("--persist", "persist_path", default=None, envvar="APP_PERSIST",
              help="Command-log file; existing logs are replayed on startup.")
def serve(port: int, host: str, bundle_path: str | None, persist_path: str | None) -> None:
    """Start the HTTP+JSON service."""
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(bundle_path=bundle_path, persist_path=persist_path), host=host, port=port)


def _ordered(dataset: Dataset, ids: list[str]) -> list[str]:
    for vid in ids:
        dataset.require_view(vid)
    return sorted(ids, key=lambda v: dataset.views[v].insertion_index)


def _compute_chains(dataset: Dataset, ids: list[str], threshold: float):
    ordered = _ordered(dataset, ids)
    pairs = pairwise_biclusters(ordered, dataset.matrices)
    return clean_chains(build_chains(view_sequences(ordered), pairs, threshold=threshold))


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except EngineError as exc:
        click.echo(f"error [{exc.code}]: {exc}", err=True)
        return 2
    except FileNotFoundError as exc:
        click.echo(f"error [FileNotFound]: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
