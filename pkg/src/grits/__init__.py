"""Grid-based table structure recognition metrics.

Tables are modeled as validated cell grids; metrics compare per-grid-cell
property matrices (topology, content, location) through a factored
most-similar-substructure alignment, with adjacency-relation and
tree-edit-distance baselines, a seeded corruption lab, and JSON/HTML io.
"""

__version__ = "0.1.0"

from .errors import (
    EmptyDatasetError,
    GapError,
    GritsError,
    InvalidIndexError,
    KindMismatchError,
    MalformedBoxError,
    MalformedHtmlError,
    MissingBBoxError,
    MissingPairError,
    OutOfBoundsError,
    OverlapError,
    RaggedRowError,
    SchemaError,
    SpanningCellError,
    TooLargeError,
)
from .table import (
    Box,
    Cell,
    MatrixKind,
    PropertyMatrix,
    TableGrid,
    as_box,
    build_grid,
    canonical_text,
    extract_matrix,
    fill_blank_cells,
    topology_box,
)
from .similarity import (
    exact_match,
    iou,
    lcs_length,
    location_similarity,
    normalized_lcs_similarity,
)
from .alignment import (
    AlignmentResult,
    Score,
    align_1d,
    exact_2dmss,
    factored_2dmss,
    similarity_scores,
)
from .metrics import (
    METRIC_NAMES,
    METRICS,
    GritsScores,
    aggregate_values,
    evaluate_metric,
    evaluate_pair,
    grits_con,
    grits_loc,
    grits_top,
)
from .baselines import (
    AdjacencyRelation,
    Direction,
    TableTree,
    adjacency_relations,
    dar_con,
    dar_loc,
    levenshtein,
    normalized_levenshtein,
    table_to_tree,
    teds_con,
    tree_edit_distance,
    tree_size,
)
from .corruption import (
    Axis,
    ConditionResult,
    CorruptionSpec,
    ExperimentReport,
    Scheme,
    corrupt_table,
    drop_rows_or_columns,
    emit_plot_data,
    run_scheme_experiment,
    run_sweep_experiment,
    select_indices,
    synthetic_dataset,
)
from .io import (
    TableDocument,
    document_from_grid,
    dumps_canonical,
    load_dataset_dir,
    pair_directories,
    parse_html_table,
    parse_pascal_voc,
    parse_table_json,
    serialize_table_json,
    to_html,
)
