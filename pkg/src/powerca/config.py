"""Numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # double-centering check, relative to max|tau|
    centering: float = 1e-10
    # dispersions below rank * delta_1 count as rank deficiency
    rank: float = 1e-9
    # dispersions below zero * (triplet scale) are rounding noise
    zero: float = 1e-11
    # fixed-point / balancing convergence
    iteration: float = 1e-12
    max_iter: int = 100_000
    # cross-product proportionality test, relative to max|x| * max|y|
    proportional: float = 1e-9
    # exhaustive taxicab search is used up to this many signs
    exhaustive_limit: int = 20


DEFAULT = Tolerances()
