"""Graded Betti features for nucleotide sequences, plus affinity regression.

The library turns per-nucleotide position clouds into exact graded Betti
tables of the associated threshold-graph complexes, vectorizes them on an
integer filtration grid, and feeds the result (optionally concatenated with
protein embeddings) to a deterministic gradient-boosted-trees regressor.
"""

__version__ = "0.1.0"

from .errors import (
    BettiseqError,
    ConfigError,
    DataError,
    EngineMismatch,
    JoinError,
)

__all__ = [
    "BettiseqError",
    "ConfigError",
    "DataError",
    "EngineMismatch",
    "JoinError",
    "__version__",
]
