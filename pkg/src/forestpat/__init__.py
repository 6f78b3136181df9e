"""Pattern avoidance in rooted labeled forests."""

from .core import (
    CLASSICAL,
    CONSECUTIVE,
    FOREST,
    ROOT,
    TREE,
    AvoidanceMode,
    LabeledForest,
    Pattern,
    Universe,
    complement,
    contains,
    count_avoiding,
    count_by_instances,
    count_consecutive_instances,
    iterate_forests,
    iterate_trees,
    parse_pattern_set,
    root_path,
)

__version__ = "0.1.0"
