"""Cross-view relationship engine and interactive workspace service.

Computes relationships between the visual elements of coordinated views as
closed biclusters and bicluster chains, lays them out as stand-alone
relationship-views, and serves an interactive session model over JSON.
"""

from .chains import (
    BiclusterChain,
    ViewSequence,
    build_chains,
    clean_chains,
    matching,
    pairwise_biclusters,
    view_sequences,
)
from .errors import EngineError
from .ingest import Dataset, DatasetBundle, Document, Occurrence, derive_cooccurrence, load_bundle
from .layout import LayoutResult, bar_summary, compute_layout, mds_2d, pairwise_distances, radius, vectorize
from .mining import Bicluster, enumerate_closed_biclusters
from .model import (
    ElementRef,
    JointTable,
    RelationMatrix,
    ViewDescriptor,
    VisualElement,
    build_joint_table,
    tabulate_view,
    to_relation_matrix,
)
from .session import LinkSet, RelationshipView, Workspace

__all__ = [
    "Bicluster",
    "BiclusterChain",
    "Dataset",
    "DatasetBundle",
    "Document",
    "ElementRef",
    "EngineError",
    "JointTable",
    "LayoutResult",
    "LinkSet",
    "Occurrence",
    "RelationMatrix",
    "RelationshipView",
    "ViewDescriptor",
    "ViewSequence",
    "VisualElement",
    "Workspace",
    "bar_summary",
    "build_chains",
    "build_joint_table",
    "clean_chains",
    "compute_layout",
    "derive_cooccurrence",
    "enumerate_closed_biclusters",
    "load_bundle",
    "matching",
    "mds_2d",
    "pairwise_biclusters",
    "pairwise_distances",
    "radius",
    "tabulate_view",
    "to_relation_matrix",
    "vectorize",
    "view_sequences",
]

__version__ = "0.1.0"
