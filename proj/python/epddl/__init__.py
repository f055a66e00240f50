"""E-PDDL toolkit: parse, validate, ground, translate and solve multi-agent
epistemic planning problems.

The heavy lifting lives in the compiled extension module; this package
re-exports its surface.
"""

try:
    from ._epddl import *  # noqa: F401,F403
except ImportError:  # development layout: extension next to the package
    from _epddl import *  # noqa: F401,F403

__all__ = [
    "Term",
    "Fluent",
    "Formula",
    "ActionType",
    "Action",
    "Domain",
    "Instance",
    "ValidatedProblem",
    "GroundAction",
    "GroundedProblem",
    "KripkeState",
    "ConditionalEffect",
    "PdkbArtifact",
    "MarArtifact",
    "FeatureReport",
    "OracleError",
    "parse_domain",
    "parse_instance",
    "validate",
    "ground",
    "print_domain",
    "print_instance",
    "expand_common",
    "derive_explicit_updates",
    "emit_pdkb",
    "emit_mar",
    "read_mar",
    "initial_state",
    "apply",
    "bfs_plan",
    "analyze_features",
]
