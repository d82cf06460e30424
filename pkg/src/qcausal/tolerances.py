"""Numerical tolerances shared by the whole package."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-8
    exact: float = 1e-9
    experimental: float = 1e-3
    rank: float = 1e-10
    verdict: float = 1e-7


DEFAULT = Tolerances()
