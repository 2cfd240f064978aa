"""mina: min-max interface activation solvers for multi-interface networks.

Coverage (every edge must get a common active interface) and Connectivity
(terminal groups must end up in one covered component) under heterogeneous
per-vertex activation costs, minimizing the maximum per-vertex cost.
LP-relaxation solvers with deterministic and randomized roundings, plus
brute-force exact oracles for desk-scale verification.
"""

from .instance import (
    Assignment,
    Instance,
    generate_random,
    parse_assignment,
    parse_instance,
    serialize,
    serialize_assignment,
    validate,
)

__all__ = [
    "Assignment",
    "Instance",
    "generate_random",
    "parse_assignment",
    "parse_instance",
    "serialize",
    "serialize_assignment",
    "validate",
]

__version__ = "0.1.0"
