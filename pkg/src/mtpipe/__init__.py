"""mtpipe: a metamorphic-testing pipeline.

Relations are written in a small machine-readable language, executed
against a corpus of subject functions with seeded random data, constrained
to the input subregions where they actually hold, and evaluated by
mutation analysis. A companion HTTP API drives the browser explorer.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .catalog import Catalog, CatalogEntry, builtin_catalog, load_catalog, match_mrs, save_catalog
from .datagen import GenProfile, TestDatum, default_profiles, generate_dataset, stratify
from .executor import (
    CampaignConfig,
    TrialRecord,
    evaluate_relation,
    run_campaign,
    transform_input,
)
from .miner import (
    Constraint,
    MineOptions,
    MrSutVerdict,
    analyze_trials,
    apply_constraint,
    classify,
    explain,
    mine_constraints,
)
from .mrlang import MrSpec, instantiate_mr, parse_mr, serialize_mr, validate_mr
from .mutation import evaluate_mutants, score
from .suts import default_registry, invoke, list_suts, load_external

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "CatalogEntry",
    "CampaignConfig",
    "Constraint",
    "GenProfile",
    "KERNEL_BACKEND",
    "MineOptions",
    "MrSpec",
    "MrSutVerdict",
    "TestDatum",
    "TrialRecord",
    "analyze_trials",
    "apply_constraint",
    "builtin_catalog",
    "classify",
    "default_profiles",
    "default_registry",
    "evaluate_mutants",
    "evaluate_relation",
    "explain",
    "generate_dataset",
    "instantiate_mr",
    "invoke",
    "list_suts",
    "load_catalog",
    "load_external",
    "match_mrs",
    "mine_constraints",
    "parse_mr",
    "run_campaign",
    "save_catalog",
    "score",
    "serialize_mr",
    "stratify",
    "transform_input",
    "validate_mr",
]
