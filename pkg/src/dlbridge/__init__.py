"""dlbridge: reasoning and transpilation for description-logic programs.

Evaluates the weak, strong, FLP, and weakly/strongly well-supported
answer-set semantics, eliminates the constraint operator from
nonmonotonic dl-atoms, compiles dl-programs to default theories, and
verifies the correspondence theorems on concrete and random instances.
"""

from .dleval import classify, is_monotonic, satisfies, satisfies_body, up_to_satisfies
from .defaults import encode, enumerate_extensions, gamma_closure, is_extension
from .parser import (
    parse_default_theory,
    parse_ontology,
    parse_program,
    serialize_default_theory,
    serialize_ontology,
    serialize_program,
)
from .semantics import enumerate_answer_sets, is_answer_set
from .transforms import lift_pi, lift_sigma, pi, pi_prime, pi_star, project, sigma

__all__ = [
    "classify",
    "encode",
    "enumerate_answer_sets",
    "enumerate_extensions",
    "gamma_closure",
    "is_answer_set",
    "is_extension",
    "is_monotonic",
    "lift_pi",
    "lift_sigma",
    "parse_default_theory",
    "parse_ontology",
    "parse_program",
    "pi",
    "pi_prime",
    "pi_star",
    "project",
    "satisfies",
    "satisfies_body",
    "serialize_default_theory",
    "serialize_ontology",
    "serialize_program",
    "sigma",
    "up_to_satisfies",
]

__version__ = "0.1.0"
