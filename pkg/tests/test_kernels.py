"""Backend parity: the compiled pair-scan and the numpy fallback must emit
identical qualifying pair sets for identical inputs."""

import numpy as np
import pytest

from mtpipe._kernels import BACKEND
from mtpipe._kernels.pairscan_py import _popcount_rows, scan_pairs as scan_py

compiled = pytest.importorskip("mtpipe._kernels._pairscan",
                               reason="compiled kernel not built")


def _random_problem(rng, n_atoms=60, n_trials=100):
    n_words = (n_trials + 63) // 64
    bits = rng.random((n_atoms, n_trials)) < rng.uniform(0.2, 0.8, size=(n_atoms, 1))
    packed = np.packbits(bits, axis=1, bitorder="little")
    pad = (-packed.shape[1]) % 8
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    masks = np.ascontiguousarray(packed).view(np.uint64)
    holds_bits = rng.random(n_trials) < 0.6
    hp = np.packbits(holds_bits, bitorder="little")
    hp = np.pad(hp, (0, (-len(hp)) % 8))
    holds = np.ascontiguousarray(hp).view(np.uint64)
    families = rng.integers(0, 12, size=n_atoms).astype(np.int64)
    sup = _popcount_rows(masks)
    hin = _popcount_rows(masks & holds[np.newaxis, :])
    order = np.argsort(-hin, kind="stable").astype(np.int64)
    assert masks.shape == (n_atoms, n_words)
    return masks, holds, families, order, sup, hin


def _as_set(result):
    i, j, sup, hin = result
    return set(zip(i.tolist(), j.tolist(), sup.tolist(), hin.tolist()))


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
@pytest.mark.parametrize("min_support,min_precision,bound",
                         [(1, 0.0, 0), (5, 1.0, 0), (3, 0.8, 10), (5, 1.0, 25)])
def test_backends_agree(seed, min_support, min_precision, bound):
    rng = np.random.default_rng(seed)
    problem = _random_problem(rng)
    got_c = _as_set(compiled.scan_pairs(*problem, min_support, min_precision, bound))
    got_py = _as_set(scan_py(*problem, min_support, min_precision, bound))
    assert got_c == got_py


def test_backends_agree_on_degenerate_inputs():
    rng = np.random.default_rng(9)
    masks, holds, families, order, sup, hin = _random_problem(rng, n_atoms=3, n_trials=5)
    for args in ((1, 0.0, 0), (100, 1.0, 0)):
        assert _as_set(compiled.scan_pairs(masks, holds, families, order, sup, hin, *args)) == \
            _as_set(scan_py(masks, holds, families, order, sup, hin, *args))


def test_backend_constant_reports_selection():
    assert BACKEND in ("compiled", "python")


def test_mining_results_identical_across_backends(small_campaign, monkeypatch):
    """End-to-end: force the fallback and compare full mining output."""
    import importlib

    import mtpipe._kernels as kernels
    import mtpipe.miner as miner_mod

    from mtpipe.miner import MineOptions

    options = MineOptions(max_results=12)
    with_compiled = [v.to_json_dict() for v in miner_mod.analyze_trials(small_campaign, options)]

    monkeypatch.setenv("MTPIPE_FORCE_PY_KERNEL", "1")
    importlib.reload(kernels)
    importlib.reload(miner_mod)
    try:
        with_python = [v.to_json_dict()
                       for v in miner_mod.analyze_trials(small_campaign, options)]
    finally:
        monkeypatch.delenv("MTPIPE_FORCE_PY_KERNEL")
        importlib.reload(kernels)
        importlib.reload(miner_mod)
    assert with_python == with_compiled
