"""Pure-numpy fallback for the 2-atom conjunction scan.

Semantics are identical to the compiled kernel: both enumerate atom pairs
in hin-descending order with the same pruning bound and filters, so the
set of emitted (i, j, support, holds_in) tuples is the same. The caller
sorts candidates afterwards; emission order does not matter.
"""

from __future__ import annotations

import numpy as np

if hasattr(np, "bitwise_count"):
    def _popcount_rows(words: np.ndarray) -> np.ndarray:
        return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)
else:  # pragma: no cover - numpy >= 2.0 everywhere we run
    _BYTE_POP = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)

    def _popcount_rows(words: np.ndarray) -> np.ndarray:
        as_bytes = words.view(np.uint8)
        return _BYTE_POP[as_bytes].sum(axis=-1)


def scan_pairs(masks: np.ndarray, holds: np.ndarray, families: np.ndarray,
               order: np.ndarray, sup: np.ndarray, hin: np.ndarray,
               min_support: int, min_precision: float, bound: int):
    """Enumerate qualifying 2-atom conjunctions.

    Pairs are visited through ``order`` (atom indices sorted by single-atom
    holds_in descending); both loops stop at the first atom whose holds_in
    drops below ``bound`` since a conjunction cannot hold more than either
    side. A pair qualifies when support >= min_support, holds_in >= bound
    and precision >= min_precision. Same-family pairs (same feature and
    direction) collapse to their tighter single atom and are skipped.
    """
    n = masks.shape[0]
    out_i: list[np.ndarray] = []
    out_j: list[np.ndarray] = []
    out_sup: list[np.ndarray] = []
    out_hin: list[np.ndarray] = []
    holds_row = holds[np.newaxis, :]
    for oi in range(n):
        i = int(order[oi])
        if hin[i] < bound:
            break
        rest = order[oi + 1:]
        if rest.size == 0:
            continue
        keep = hin[rest] >= bound
        cutoff = int(np.argmin(keep)) if not keep.all() else rest.size
        rest = rest[:cutoff]  # order is hin-descending, so the tail is all below bound
        if rest.size == 0:
            continue
        rest = rest[families[rest] != families[i]]
        if rest.size == 0:
            continue
        conj = masks[rest] & masks[i][np.newaxis, :]
        c = _popcount_rows(conj)
        ch = _popcount_rows(conj & holds_row)
        ok = (c >= min_support) & (ch >= bound) & (c > 0)
        if min_precision > 0.0:
            with np.errstate(divide="ignore", invalid="ignore"):
                ok &= np.where(c > 0, ch / np.maximum(c, 1), 0.0) >= min_precision
        if not ok.any():
            continue
        sel = rest[ok]
        lo = np.minimum(sel, i)
        hi = np.maximum(sel, i)
        out_i.append(lo.astype(np.int64))
        out_j.append(hi.astype(np.int64))
        out_sup.append(c[ok])
        out_hin.append(ch[ok])
    if not out_i:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), empty.copy(), empty.copy()
    return (np.concatenate(out_i), np.concatenate(out_j),
            np.concatenate(out_sup), np.concatenate(out_hin))
