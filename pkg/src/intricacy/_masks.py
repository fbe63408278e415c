"""Vectorized enumeration over all bitmask subsets of {0..n-1}.

The tables are filled by dynamic programming on the lowest set bit: a
mask with lowest bit p and second-lowest bit q extends the mask without
p through the gap q-p.  Grouping masks by (p, q) turns the recursion
into batched numpy operations, so a whole 2^n table costs O(2^n r^2)
flops.
"""

from __future__ import annotations

import numpy as np

__all__ = ["popcounts", "dilate_masks", "product_table", "additive_gap_table"]


def popcounts(n_bits: int) -> np.ndarray:
    """popcounts(n)[m] = number of set bits of m, for all m < 2^n."""
    pc = np.zeros(1, dtype=np.int64)
    for _ in range(n_bits):
        pc = np.concatenate([pc, pc + 1])
    return pc


def dilate_masks(masks: np.ndarray, k: int) -> np.ndarray:
    """Replace each set bit s by the run {s..s+k-1} (k >= 1)."""
    d = masks.astype(np.int64).copy()
    for j in range(1, k):
        d |= masks << j
    return d


def _pair_indices(n_bits: int, p: int, q: int) -> np.ndarray:
    # all masks whose lowest set bit is q, shifted variants packed above q
    t = np.arange(1 << (n_bits - q - 1), dtype=np.int64)
    return (t << (q + 1)) | (1 << q)


def product_table(n_bits: int, init: np.ndarray, gap_matrix) -> np.ndarray:
    """table[m] = sum over symbol tuples at the places of mask m of the
    product init[a_0] * prod_i gap_matrix(g_i)[a_i, a_{i+1}].

    With init = ones and 0/1 reachability matrices this is the pattern
    count N(m); with exponential symbol weights it is the weighted count
    used by the pressure profile.  table[0] = 1.
    """
    size = 1 << n_bits
    r = len(init)
    V = np.empty((size, r), dtype=np.float64)
    for p in range(n_bits - 1, -1, -1):
        V[1 << p] = init
        for q in range(p + 1, n_bits):
            T = np.asarray(gap_matrix(q - p), dtype=np.float64)
            rest = _pair_indices(n_bits, p=p, q=q)
            V[rest | (1 << p)] = V[rest] @ T.T
    out = V.sum(axis=1)
    out[0] = 1.0
    return out


def additive_gap_table(n_bits: int, gap_value) -> np.ndarray:
    """table[m] = sum of gap_value(g_i) over the consecutive gaps of mask m
    (0 for the empty mask and singletons)."""
    size = 1 << n_bits
    G = np.zeros(size, dtype=np.float64)
    for p in range(n_bits - 1, -1, -1):
        for q in range(p + 1, n_bits):
            v = float(gap_value(q - p))
            rest = _pair_indices(n_bits, p=p, q=q)
            G[rest | (1 << p)] = G[rest] + v
    return G
