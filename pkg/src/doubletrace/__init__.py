"""Double traces, strong traces, and one-face graph embeddings."""

from .analysis import (
    DoubleTrace,
    Stability,
    TraceReport,
    VertexFigure,
    canonical_cyclic,
    classify_edges,
    has_repetition,
    repetition_structure,
    stability,
    trace_to_embedding,
    validate_double_trace,
    vertex_figure,
)
from .embedding import (
    Embedding,
    FacialWalk,
    SurfaceDescriptor,
    embedding_from_json,
    embedding_from_walks,
    face_count,
    flip_signature,
    is_orientable,
    single_face_walk,
    surface_of,
    trace_faces,
    vertex_switch,
)
from .errors import (
    BudgetExceeded,
    DegreeTooSmall,
    DoubleTraceError,
    IncoherentCorners,
    InternalInconsistency,
    IsATree,
    NoSuchTrace,
    NotANeighborSet,
    NotAWalk,
    NotConnected,
    NotDoubleCover,
    NotEulerian,
    NotSimple,
    NotStrong,
    ParseError,
    Refusal,
    UnknownEdge,
    UnknownVertex,
    WrongLength,
)
from .graph import (
    Graph,
    SpanningTree,
    Step,
    betti,
    cotree_components_even,
    cut_edges,
    graph_from_edges,
    is_eulerian,
    parse_graph,
    spanning_trees,
)
from .synthesis import (
    CONVENTIONS,
    AntiparallelDecision,
    ConstructionCertificate,
    EnumerationResult,
    SwapEvent,
    antiparallel_1stable_decision,
    antiparallel_decision,
    antiparallel_strong_trace,
    any_double_trace,
    d_stable_trace,
    enumerate_strong_traces,
    enumeration_summary,
    graph_automorphisms,
    nonorientable_one_face,
    one_face_embedding,
    parallel_d_stable_trace,
    parallel_strong_trace,
    strong_trace,
)

__version__ = "0.1.0"
