# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled 2-atom conjunction scan over packed bitmasks.

Mirrors pairscan_py.scan_pairs exactly; see that module for the contract.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define MTPIPE_POPCOUNT(x) __builtin_popcountll(x)
    #else
    static int MTPIPE_POPCOUNT(unsigned long long x) {
        int c = 0;
        while (x) { x &= x - 1; c++; }
        return c;
    }
    #endif
    """
    int MTPIPE_POPCOUNT(unsigned long long x) nogil


def scan_pairs(cnp.ndarray[cnp.uint64_t, ndim=2, mode="c"] masks,
               cnp.ndarray[cnp.uint64_t, ndim=1, mode="c"] holds,
               cnp.ndarray[cnp.int64_t, ndim=1] families,
               cnp.ndarray[cnp.int64_t, ndim=1] order,
               cnp.ndarray[cnp.int64_t, ndim=1] sup,
               cnp.ndarray[cnp.int64_t, ndim=1] hin,
               long long min_support, double min_precision, long long bound):
    cdef Py_ssize_t n = masks.shape[0]
    cdef Py_ssize_t words = masks.shape[1]
    cdef Py_ssize_t oi, oj, w
    cdef long long i, j, lo, hi, c, ch
    cdef unsigned long long conj
    cdef list out_i = [], out_j = [], out_sup = [], out_hin = []

    for oi in range(n):
        i = order[oi]
        if hin[i] < bound:
            break
        for oj in range(oi + 1, n):
            j = order[oj]
            if hin[j] < bound:
                break
            if families[i] == families[j]:
                continue
            c = 0
            ch = 0
            for w in range(words):
                conj = masks[i, w] & masks[j, w]
                c += MTPIPE_POPCOUNT(conj)
                ch += MTPIPE_POPCOUNT(conj & holds[w])
            if c < min_support or ch < bound or c == 0:
                continue
            if min_precision > 0.0 and (<double> ch) / (<double> c) < min_precision:
                continue
            lo = i if i < j else j
            hi = j if i < j else i
            out_i.append(lo)
            out_j.append(hi)
            out_sup.append(c)
            out_hin.append(ch)

    return (np.asarray(out_i, dtype=np.int64), np.asarray(out_j, dtype=np.int64),
            np.asarray(out_sup, dtype=np.int64), np.asarray(out_hin, dtype=np.int64))
