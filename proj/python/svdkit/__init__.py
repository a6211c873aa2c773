"""Singular vertical distance toolkit."""

from ._svdkit import (
    ContractError,
    DomainError,
    Scenario,
    ScenarioParseError,
    ScenarioSemanticError,
    cantor_eval,
    cantor_moment,
    load_scenario,
    min_singular,
    parse_scenario,
    run_cli,
    svd,
    svd_map,
)

__all__ = [
    "ContractError",
    "DomainError",
    "Scenario",
    "ScenarioParseError",
    "ScenarioSemanticError",
    "cantor_eval",
    "cantor_moment",
    "load_scenario",
    "min_singular",
    "parse_scenario",
    "run_cli",
    "svd",
    "svd_map",
]
