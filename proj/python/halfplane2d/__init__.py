"""Conservative half-plane intersection in the plane.

The region starts as the box [0, mx] x [0, my]; each added constraint
a*x + b*y >= c is relaxed outward so the stored region never loses a
feasible point, while every keep/cut/empty decision uses exact signs.
"""

from ._core import (
    LARGEST_FINITE,
    Region,
    build_polygon,
    classify_octant,
    compare_directions,
    counters,
    exact_sign,
    gen_degenerate,
    is_valid_subset,
    normal_set_32,
    normal_set_64,
    normalize,
    reset_counters,
    ru_add,
    ru_div,
    ru_mul,
)

__all__ = [
    "LARGEST_FINITE",
    "Region",
    "build_polygon",
    "classify_octant",
    "compare_directions",
    "counters",
    "exact_sign",
    "gen_degenerate",
    "is_valid_subset",
    "normal_set_32",
    "normal_set_64",
    "normalize",
    "reset_counters",
    "ru_add",
    "ru_div",
    "ru_mul",
]
