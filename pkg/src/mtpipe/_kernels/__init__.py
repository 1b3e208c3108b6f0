"""Kernel backend selection: compiled pair-scan when the extension built,
numpy fallback otherwise. MTPIPE_FORCE_PY_KERNEL=1 forces the fallback
(used by the parity tests and the benchmark)."""

import os

BACKEND = "python"

if os.environ.get("MTPIPE_FORCE_PY_KERNEL") == "1":
    from .pairscan_py import scan_pairs
else:
    try:
        from ._pairscan import scan_pairs  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from .pairscan_py import scan_pairs

__all__ = ["BACKEND", "scan_pairs"]
