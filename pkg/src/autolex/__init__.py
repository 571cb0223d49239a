"""autolex: automated lexicostatistics with normalized Levenshtein distances.

Word distances, language distance matrices, per-meaning stability, the
list-length analysis (correlation and Robinson-Foulds curves), divergence
times and UPGMA trees, plus a simulator of language families with known
history for validation.
"""

__version__ = "0.1.0"

from .chrono import CalibrationPoint, TimeMatrix, calibrate, divergence_time
from .editdist import levenshtein, normalize, normalized_distance
from .errors import (
    AutolexError,
    ComputationError,
    DataError,
    DegenerateVariance,
    DuplicateIdentifier,
    DuplicateLeaf,
    EmptyDataset,
    EmptyWord,
    FormatError,
    InsufficientCoverage,
    LeafSetMismatch,
    NoSharedMeanings,
    ParseError,
    SaturatedDistance,
    ZeroDistance,
)
from .lexstat import (
    DistanceMatrix,
    FamilyDataset,
    StabilityTable,
    SynonymPolicy,
    cell_distance,
    correlation,
    correlation_curve,
    language_distance,
    rank_meanings,
    stability,
    truncated_distance,
)
from .phylo import Node, Tree, clades, newick_parse, newick_serialize, rf_curve, rf_difference, upgma
from .synth import EvolutionParams, evolve, generate_tree, simulate_family
from .wordlist import parse_wordlist, write_wordlist

__all__ = [
    "CalibrationPoint",
    "TimeMatrix",
    "calibrate",
    "divergence_time",
    "levenshtein",
    "normalize",
    "normalized_distance",
    "AutolexError",
    "ComputationError",
    "DataError",
    "DegenerateVariance",
    "DuplicateIdentifier",
    "DuplicateLeaf",
    "EmptyDataset",
    "EmptyWord",
    "FormatError",
    "InsufficientCoverage",
    "LeafSetMismatch",
    "NoSharedMeanings",
    "ParseError",
    "SaturatedDistance",
    "ZeroDistance",
    "DistanceMatrix",
    "FamilyDataset",
    "StabilityTable",
    "SynonymPolicy",
    "cell_distance",
    "correlation",
    "correlation_curve",
    "language_distance",
    "rank_meanings",
    "stability",
    "truncated_distance",
    "Node",
    "Tree",
    "clades",
    "newick_parse",
    "newick_serialize",
    "rf_curve",
    "rf_difference",
    "upgma",
    "EvolutionParams",
    "evolve",
    "generate_tree",
    "simulate_family",
    "parse_wordlist",
    "write_wordlist",
]
