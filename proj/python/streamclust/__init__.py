"""Streaming clustering structures, algorithms and experiment harness."""

from ._core import (
    Space,
    build_m_configuration,
    candidates,
    cores,
    enumerate_nice,
    enumerate_perfect,
    experiment,
    generate,
    hull_distance,
    induce,
    is_nice,
    is_perfect,
    is_refinement,
    kmeans_badcase,
    linkage_dump,
    run,
    subset_nice2,
    theoretical_bound,
)

__all__ = [
    "Space",
    "build_m_configuration",
    "candidates",
    "cores",
    "enumerate_nice",
    "enumerate_perfect",
    "experiment",
    "generate",
    "hull_distance",
    "induce",
    "is_nice",
    "is_perfect",
    "is_refinement",
    "kmeans_badcase",
    "linkage_dump",
    "run",
    "subset_nice2",
    "theoretical_bound",
]
