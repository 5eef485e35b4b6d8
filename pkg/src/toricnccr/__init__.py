"""Toric crepant resolutions of Gorenstein cone singularities by dimer models.

Pipeline: validate a lattice polygon, enumerate the Cohen-Macaulay module
classes of the associated cone, find the maximal modifying sets, embed their
quivers in the 3-torus, deduplicate up to affine equivalence, read off the
dimer model of each class, and connect the classes by mutation.
"""
from __future__ import annotations

from .cm import CMWitness, cm_interval, enumerate_cm, is_cm
from .dimer import (
    CensusRow,
    DimerModel,
    Infeasible,
    NotReflexive,
    PerfectMatching,
    RCharge,
    TiedHeights,
    census_rows,
    class_dimers,
    extract_dimer,
    extremal_matchings,
    find_rcharge,
    perfect_matchings,
    polygon_type,
    recovered_polygon,
    render_svg,
    type_sequence,
)
from .lattice import (
    CheckFailure,
    InputError,
    InternalCheckError,
    ToricData,
    ToricError,
    frac_str,
    kappa,
    normalize,
    phi_t,
    quotient_cone,
    validate_toric_data,
)
from .modmax import compatibility_graph, enumerate_mm
from .mutation import (
    MutationGraph,
    mutate,
    mutate_dimer,
    mutation_graph,
    parallelogram_structure,
    write_dot,
)
from .quiver import (
    Arrow,
    EmbeddedQuiver,
    affine_equivalent,
    build_quiver,
    nccr_classes,
    nccr_quivers,
    opposite,
)
from .verify import first_failure, run_checks

__all__ = [
    "Arrow",
    "CMWitness",
    "CensusRow",
    "CheckFailure",
    "DimerModel",
    "EmbeddedQuiver",
    "Infeasible",
    "InputError",
    "InternalCheckError",
    "MutationGraph",
    "NotReflexive",
    "PerfectMatching",
    "RCharge",
    "TiedHeights",
    "ToricData",
    "ToricError",
    "affine_equivalent",
    "build_quiver",
    "census_rows",
    "class_dimers",
    "cm_interval",
    "compatibility_graph",
    "enumerate_cm",
    "enumerate_mm",
    "extract_dimer",
    "extremal_matchings",
    "find_rcharge",
    "first_failure",
    "frac_str",
    "is_cm",
    "kappa",
    "mutate",
    "mutate_dimer",
    "mutation_graph",
    "nccr_classes",
    "nccr_quivers",
    "normalize",
    "opposite",
    "parallelogram_structure",
    "perfect_matchings",
    "phi_t",
    "polygon_type",
    "quotient_cone",
    "recovered_polygon",
    "render_svg",
    "run_checks",
    "type_sequence",
    "validate_toric_data",
    "write_dot",
]
