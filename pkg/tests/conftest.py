import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mtpipe import (
    CampaignConfig,
    builtin_catalog,
    default_profiles,
    default_registry,
    run_campaign,
    stratify,
)
from mtpipe.executor import TrialRecord


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture(scope="session")
def small_dataset():
    return stratify("list-float", default_profiles(40), 7)


@pytest.fixture(scope="session")
def small_campaign(catalog, registry, small_dataset):
    """120 data-bindings across three subjects; enough for mining."""
    config = CampaignConfig(sut_ids=("sum", "sum_of_squares", "min"), params_per_datum=3, seed=7)
    return run_campaign(config, registry, catalog, small_dataset).records


def make_trial(sut="s", mr="m", datum_id=0, binding_ix=0, source=None, verdict="HOLDS",
               binding=None, followup=None, out_s=1.0, out_f=1.0, error=None,
               mutant=None) -> TrialRecord:
    """Synthetic trial for miner unit tests."""
    source = [1.0, 2.0] if source is None else source
    binding = binding or {}
    return TrialRecord(
        trial_id=f"{sut}:{mutant or '-'}:{mr}:{datum_id}:{binding_ix}",
        sut_id=sut,
        mutant_id=mutant,
        mr_id=mr,
        param_binding=binding,
        source_input=source,
        followup_input=followup if followup is not None else source,
        source_output=None if verdict == "ERROR" else out_s,
        followup_output=None if verdict == "ERROR" else out_f,
        verdict=verdict,
        error_detail=error,
        seed_path=(7, datum_id, binding_ix),
    )
