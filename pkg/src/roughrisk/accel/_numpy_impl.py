"""Pure-numpy reference implementations of the hot kernels.

Kept semantically and bit-for-bit identical to the numba backend: the
similarity accumulation runs attribute by attribute in the same order,
so both backends round identically.
"""

import numpy as np


def factorize1d(keys):
    """Map int64 keys to dense group codes in first-occurrence order."""
    uniq, first, inv = np.unique(keys, return_index=True, return_inverse=True)
    rank = np.empty(uniq.shape[0], dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(uniq.shape[0], dtype=np.int64)
    return rank[inv].astype(np.int64), int(uniq.shape[0])


def contingency(codes, n_groups, dec, n_dec):
    """Count objects per (group, decision) cell."""
    flat = np.bincount(codes * n_dec + dec, minlength=n_groups * n_dec)
    return flat.reshape(n_groups, n_dec).astype(np.int64)


def quality_numerator(cont, thresholds):
    """Total size of groups whose majority count reaches the beta threshold.

    thresholds[t] holds ceil(beta * t) precomputed with exact integer
    arithmetic, so the comparison is overflow-free for any beta.
    """
    tot = cont.sum(axis=1)
    best = cont.max(axis=1) if cont.shape[1] else np.zeros_like(tot)
    return int(tot[best >= thresholds[tot]].sum())


def similarity_matrix(samples, antecedents, eps, widths):
    """Weighted similarity of every sample row against every rule row."""
    m = samples.shape[0]
    r = antecedents.shape[0]
    out = np.zeros((m, r), dtype=np.float64)
    # attribute-major accumulation mirrors the numba loop order exactly
    for j in range(samples.shape[1]):
        d = np.abs(samples[:, j, None] - antecedents[None, :, j])
        if widths[j] > 0:
            s = np.maximum(1.0 - d / widths[j], 0.0)
        else:
            s = (d == 0).astype(np.float64)
        out += eps[j] * s
    return out
