"""Engine error hierarchy.

Every error carries a stable ``code`` (its class name) that the HTTP layer
maps onto the API error envelope.
"""

from __future__ import annotations

from typing import Any


class EngineError(Exception):
    """Base class for all engine errors."""

    def __init__(self, message: str, detail: Any = None):
        super().__init__(message)
        self.detail = detail

    @property
    def code(self) -> str:
        return type(self).__name__


class ParseError(EngineError):
    """Input did not parse as the expected format."""

    def __init__(self, message: str, position: str | None = None):
        super().__init__(message, detail={"position": position} if position else None)
        self.position = position


class DanglingReference(EngineError):
    """A bundle entry references a view or element that does not exist."""


class SpanOutOfBounds(EngineError):
    """A document occurrence span falls outside the document text."""


class DuplicateElementId(EngineError):
    """Two elements of one view share an id."""


class MissingRequiredAttr(EngineError):
    """An element lacks an attribute its view type mandates."""

    def __init__(self, view_type: str, attr: str, element_id: str):
        super().__init__(
            f"element {element_id!r} of a {view_type!r} view lacks required attr {attr!r}",
            detail={"view_type": view_type, "attr": attr, "element_id": element_id},
        )


class UnknownView(EngineError):
    """A view id does not resolve."""


class UnknownElement(EngineError):
    """An element reference does not resolve."""


class UnknownDataset(EngineError):
    """A dataset id does not resolve."""


class SameViewPair(EngineError):
    """A relation was requested between a view and itself."""


class TooFewViews(EngineError):
    """An operation needs more distinct views than were given."""


class NoSharedView(EngineError):
    """Two biclusters have no side in the requested view."""


class ChainExplosion(EngineError):
    """Candidate chain paths for one sequence exceeded the configured cap."""


class EmptyInput(EngineError):
    """An operation requiring a non-empty input got an empty one."""


class NonFiniteDistance(EngineError):
    """A distance matrix contains NaN or infinity."""


class OutOfRangeCount(EngineError):
    """A count falls outside its declared [min, max] range."""


class InvalidArgument(EngineError):
    """A parameter value violates an operation precondition."""


class NotAChainView(EngineError):
    """A chain-only operation was applied to a bi-group relationship-view."""


class UnknownRelationship(EngineError):
    """A relationship id does not resolve within its relationship-view."""


class UnknownPanel(EngineError):
    """A panel id does not resolve."""


class UnknownOrigin(EngineError):
    """A search origin resolves to neither an element nor a relationship."""


class PanelPinned(EngineError):
    """A pinned panel cannot be dragged."""


class BelowMinimumSize(EngineError):
    """A resize request fell below the minimum panel size."""


class SelfLink(EngineError):
    """A manual link needs two distinct elements."""


class NoDocuments(EngineError):
    """Document retrieval was requested on a dataset without documents."""
