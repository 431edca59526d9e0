"""Random generation, property suites, the JSON format and the CLI."""

from .fileio import Document, InputError, load, loads
from .generate import (
    InstanceSpec,
    field_named,
    random_basis_change,
    random_chain_map,
    random_dg,
    random_dg_with_truth,
    random_surjective_qiso,
)
from .suites import SUITES, SuiteReport, replay, run_axiom_suite, run_suite

__all__ = [
    "Document", "InputError", "load", "loads",
    "InstanceSpec", "field_named", "random_basis_change", "random_chain_map",
    "random_dg", "random_dg_with_truth", "random_surjective_qiso",
    "SUITES", "SuiteReport", "replay", "run_axiom_suite", "run_suite",
]
