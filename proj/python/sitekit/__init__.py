"""Workbench for computations over finite sites."""

from sitekit._core import (
    Category,
    Functor,
    LimitChain,
    Presheaf,
    SitekitError,
    Topology,
    Workspace,
    back_and_forth,
    build_limit,
    canonical_topology,
    check_flatness,
    check_limit_extension,
    check_sheaf,
    corepresentable,
    covers,
    enumerate_models,
    enumerate_topologies,
    generate_topology,
    lattice_op,
    parse_workspace,
    representable,
    run_cli,
    serialize_workspace,
    site_invariants,
    subterminal_count,
    subtoposes,
    topology_leq,
    validate_topology,
    verify_class,
)

__all__ = [
    "Category",
    "Functor",
    "LimitChain",
    "Presheaf",
    "SitekitError",
    "Topology",
    "Workspace",
    "back_and_forth",
    "build_limit",
    "canonical_topology",
    "check_flatness",
    "check_limit_extension",
    "check_sheaf",
    "corepresentable",
    "covers",
    "enumerate_models",
    "enumerate_topologies",
    "generate_topology",
    "lattice_op",
    "parse_workspace",
    "representable",
    "run_cli",
    "serialize_workspace",
    "site_invariants",
    "subterminal_count",
    "subtoposes",
    "topology_leq",
    "validate_topology",
    "verify_class",
]
