"""Simplicial complexes, extremal constructions, and randomized
discrete Morse deconstruction."""

from .complexes import (
    FVector,
    LinkConditionViolatedError,
    QuotientUnsafeError,
    SimplicialComplex,
    union,
)
from .constructions import (
    PolytopalComplex,
    antiprism_triangulation,
    barycenter_ids,
    barycentric_subdivision,
    basic,
    build_E,
    build_sigma,
    build_sigma2_sigma3prime,
    build_two_optima,
    cone,
    cross_polytope,
    cube_lattice,
    dunce_hat,
    one_point_suspension,
    product_with_interval,
    pulling_triangulation,
    simplex,
    simplex_boundary,
    simplicial_neighborhood,
    stack_facet,
    stellar_subdivision,
    subdivision_f_vector,
    suspension,
)
from .engine import (
    STRATEGIES,
    Collapse,
    Critical,
    FaceIndex,
    GrowthLevel,
    GrowthReport,
    MorseTrace,
    MorseVector,
    SpectrumReport,
    check_monotone_trace,
    child_seed,
    run_strategy,
    sd_growth_experiment,
    spectrum,
)
from .fileio import FacetFileError, read_complex, read_facets, write_facets
from .pipeline import (
    PipelineError,
    PipelineStage,
    edge_collar_in_subdivision,
    load_poincare,
    pipeline_5manifold,
)
from .verify import (
    BettiVector,
    SizeLimitExceeded,
    betti_numbers,
    check_morse_consistency,
    exhaustive_collapsible,
    exhaustive_nonevasive,
    smith_normal_form,
)

__version__ = "0.1.0"

__all__ = [
    "FVector",
    "LinkConditionViolatedError",
    "QuotientUnsafeError",
    "SimplicialComplex",
    "union",
    "PolytopalComplex",
    "antiprism_triangulation",
    "barycenter_ids",
    "barycentric_subdivision",
    "basic",
    "build_E",
    "build_sigma",
    "build_sigma2_sigma3prime",
    "build_two_optima",
    "cone",
    "cross_polytope",
    "cube_lattice",
    "dunce_hat",
    "one_point_suspension",
    "product_with_interval",
    "pulling_triangulation",
    "simplex",
    "simplex_boundary",
    "simplicial_neighborhood",
    "stack_facet",
    "stellar_subdivision",
    "subdivision_f_vector",
    "suspension",
    "STRATEGIES",
    "Collapse",
    "Critical",
    "FaceIndex",
    "GrowthLevel",
    "GrowthReport",
    "MorseTrace",
    "MorseVector",
    "SpectrumReport",
    "check_monotone_trace",
    "child_seed",
    "run_strategy",
    "sd_growth_experiment",
    "spectrum",
    "FacetFileError",
    "read_complex",
    "read_facets",
    "write_facets",
    "PipelineError",
    "PipelineStage",
    "edge_collar_in_subdivision",
    "load_poincare",
    "pipeline_5manifold",
    "BettiVector",
    "SizeLimitExceeded",
    "betti_numbers",
    "check_morse_consistency",
    "exhaustive_collapsible",
    "exhaustive_nonevasive",
    "smith_normal_form",
    "__version__",
]
