"""HTTP+JSON service exposing dataset, relationship-view, and session
operations.

All workspace mutations funnel through the session command log under a
single lock; reads serve snapshots. The service is stateless across restarts
except via the persistence file (bundle reference plus command log).
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from typing import Any, Mapping

from fastapi import Body, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .errors import (
    DanglingReference,
    EngineError,
    InvalidArgument,
    ParseError,
    SpanOutOfBounds,
    UnknownDataset,
    UnknownElement,
    UnknownOrigin,
    UnknownPanel,
    UnknownRelationship,
    UnknownView,
)
from .ingest import Dataset, load_bundle
from .session import RelationshipView, Workspace

PARSE_ERRORS = (ParseError, DanglingReference, SpanOutOfBounds)
NOT_FOUND_ERRORS = (UnknownElement, UnknownPanel, UnknownRelationship, UnknownOrigin, UnknownView, UnknownDataset)


def _status_for(exc: EngineError) -> int:
    if isinstance(exc, PARSE_ERRORS):
        return 422
    if isinstance(exc, NOT_FOUND_ERRORS):
        return 404
    return 400


class ServerState:
    """Datasets, their workspaces, and the optional persistence file."""

    def __init__(self, persist_path: str | None = None):
        self.datasets: dict[str, Dataset] = {}
        self.workspaces: dict[str, Workspace] = {}
        self.bundles: dict[str, dict] = {}
        self.bundle_paths: dict[str, str | None] = {}
        self.active: str | None = None
        self.persist_path = persist_path
        self.lock = threading.Lock()

    def register(self, bundle_raw: Mapping, source_path: str | None = None) -> Workspace:
        bundle = load_bundle(bundle_raw)
        dataset = Dataset.from_bundle(bundle)
        workspace = Workspace(dataset)
        self.datasets[dataset.dataset_id] = dataset
        self.workspaces[dataset.dataset_id] = workspace
        self.bundles[dataset.dataset_id] = dict(bundle_raw)
        self.bundle_paths[dataset.dataset_id] = source_path
        self.active = dataset.dataset_id
        self._persist()
        return workspace

    def workspace(self, dataset_id: str | None = None) -> Workspace:
        key = dataset_id or self.active
        if key is None or key not in self.workspaces:
            raise UnknownDataset(f"no dataset loaded under id {key!r}")
        return self.workspaces[key]

    def find_rv(self, rv_id: str) -> tuple[Workspace, RelationshipView]:
        for ws in self.workspaces.values():
            if rv_id in ws.relationship_views:
                return ws, ws.relationship_views[rv_id]
        raise UnknownPanel(f"unknown relationship-view {rv_id!r}")

    def command(self, ws: Workspace, op: str, args: Mapping[str, Any]) -> dict:
        result = ws.apply(op, args)
        self._persist()
        return result

    def _persist(self) -> None:
        if not self.persist_path or self.active is None:
            return
        record = {
            "dataset_id": self.active,
            "bundle_path": self.bundle_paths.get(self.active),
            "bundle": None if self.bundle_paths.get(self.active) else self.bundles[self.active],
            "commands": list(self.workspaces[self.active].command_log),
        }
        directory = os.path.dirname(os.path.abspath(self.persist_path))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(record, fh, sort_keys=True, indent=2)
        os.replace(tmp, self.persist_path)

    def restore(self) -> None:
        if not self.persist_path or not os.path.exists(self.persist_path):
            return
        with open(self.persist_path, "r", encoding="utf-8") as fh:
            record = json.load(fh)
        source_path = record.get("bundle_path")
        bundle_raw = record["bundle"] if source_path is None else None
        if bundle_raw is None:
            with open(source_path, "r", encoding="utf-8") as fh:
                bundle_raw = json.load(fh)
        bundle = load_bundle(bundle_raw)
        dataset = Dataset.from_bundle(bundle)
        workspace = Workspace.replay(dataset, record.get("commands", []))
        self.datasets[dataset.dataset_id] = dataset
        self.workspaces[dataset.dataset_id] = workspace
        self.bundles[dataset.dataset_id] = dict(bundle_raw)
        self.bundle_paths[dataset.dataset_id] = source_path
        self.active = dataset.dataset_id


def create_app(bundle_path: str | None = None, persist_path: str | None = None) -> FastAPI:
    state = ServerState(persist_path=persist_path)
    state.restore()
    if bundle_path and state.active is None:
        with open(bundle_path, "r", encoding="utf-8") as fh:
            state.register(json.load(fh), source_path=bundle_path)

    app = FastAPI(title="crossview", version="0.1.0", docs_url=None, redoc_url=None)
    app.state.engine = state

    @app.exception_handler(EngineError)
    async def engine_error(_request: Request, exc: EngineError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"code": exc.code, "message": str(exc), "detail": exc.detail},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "ParseError", "message": "request body is not valid JSON", "detail": None},
        )

    @app.exception_handler(Exception)
    async def unexpected_error(_request: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"code": "InternalError", "message": str(exc), "detail": None},
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/datasets")
    def post_dataset(payload: dict = Body(...)):
        with state.lock:
            ws = state.register(payload)
            return {"dataset_id": ws.dataset.dataset_id, "views": _views_payload(ws.dataset)}

    @app.get("/datasets/{dataset_id}/views")
    def get_views(dataset_id: str):
        with state.lock:
            ws = state.workspace(dataset_id)
            return {"dataset_id": dataset_id, "views": _views_payload(ws.dataset)}

    @app.post("/datasets/{dataset_id}/relationship-views")
    def post_relationship_view(dataset_id: str, payload: dict = Body(...)):
        with state.lock:
            ws = state.workspace(dataset_id)
            args = {"views": payload.get("views")}
            if "threshold" in payload:
                args["threshold"] = payload["threshold"]
            return state.command(ws, "create_relationship_view", args)

    @app.get("/relationship-views/{rv_id}")
    def get_relationship_view(rv_id: str):
        with state.lock:
            ws, rv = state.find_rv(rv_id)
            return {"relationship_view": rv.as_dict(), "panel": ws.panels[rv_id].as_dict()}

    @app.patch("/relationship-views/{rv_id}")
    def patch_relationship_view(rv_id: str, payload: dict = Body(...)):
        with state.lock:
            ws, rv = state.find_rv(rv_id)
            known = {"threshold", "positions", "display_mode"}
            given = known & set(payload.keys())
            if len(given) != 1:
                raise InvalidArgument(f"PATCH needs exactly one of {sorted(known)}")
            if "threshold" in given:
                state.command(ws, "set_threshold", {"rv_id": rv_id, "threshold": payload["threshold"]})
            elif "positions" in given:
                state.command(ws, "set_positions", {"rv_id": rv_id, "positions": payload["positions"]})
            else:
                mode = payload["display_mode"]
                args = {"rv_id": rv_id, "mode": mode.get("mode")}
                if mode.get("relationship_id") is not None:
                    args["relationship_id"] = mode["relationship_id"]
                state.command(ws, "set_display_mode", args)
            return {"relationship_view": rv.as_dict(), "panel": ws.panels[rv_id].as_dict()}

    @app.post("/search")
    def post_search(payload: dict = Body(...)):
        with state.lock:
            ws = state.workspace(payload.get("dataset_id"))
            origin = payload.get("origin") or {}
            if "rv_id" in origin:
                ws, _ = state.find_rv(origin["rv_id"])
            return ws.four_way_search(origin).as_dict()

    @app.post("/workspace/commands")
    def post_command(payload: dict = Body(...)):
        with state.lock:
            op = payload.get("op")
            args = payload.get("args") or {}
            ws = _route_command(state, payload.get("dataset_id"), op, args)
            result = state.command(ws, op, args)
            return {"seq": len(ws.command_log), "op": op, "result": result}

    @app.get("/relationship-views/{rv_id}/relationships/{relationship_id}/documents")
    def get_documents(rv_id: str, relationship_id: str):
        with state.lock:
            ws, _rv = state.find_rv(rv_id)
            results = ws.retrieve_documents(rv_id, relationship_id)
            return {
                "documents": [
                    {
                        "doc_id": doc.doc_id,
                        "title": doc.title,
                        "text": doc.text,
                        "highlights": [occ.as_dict() for occ in highlights],
                    }
                    for doc, highlights in results
                ]
            }

    @app.get("/workspace")
    def get_workspace(dataset: str | None = None):
        with state.lock:
            return state.workspace(dataset).snapshot()

    _mount_frontend(app)
    return app


def _mount_frontend(app: FastAPI) -> None:
    """Serve the built browser workspace at /ui/ when frontend/dist exists."""
    dist = os.path.join(os.path.dirname(__file__), "..", "..", "frontend", "dist")
    dist = os.path.abspath(dist)
    if os.path.isdir(dist):
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=dist, html=True), name="ui")


def _views_payload(dataset: Dataset) -> list[dict]:
    return [
        {
            "view_id": vid,
            "view_type": dataset.views[vid].view_type,
            "label": dataset.views[vid].label,
            "insertion_index": dataset.views[vid].insertion_index,
            "elements": [
                {"element_id": e.element_id, "label": e.label, "attrs": dict(e.attrs)}
                for e in sorted(dataset.elements[vid].values(), key=lambda e: e.element_id)
            ],
        }
        for vid in dataset.view_order()
    ]


def _route_command(state: ServerState, dataset_id: str | None, op: str, args: Mapping) -> Workspace:
    """Find the workspace a command targets: explicit dataset, the rv named in
    the args, or the active workspace."""
    if dataset_id:
        return state.workspace(dataset_id)
    rv_id = args.get("rv_id")
    if rv_id:
        ws, _ = state.find_rv(rv_id)
        return ws
    panel_id = args.get("panel_id")
    if panel_id:
        for ws in state.workspaces.values():
            if panel_id in ws.panels:
                return ws
    return state.workspace(None)
