"""Numba-compiled kernels.

fastmath stays off: the similarity kernel must round exactly like the
numpy fallback so a model scores identically on either backend.
"""

import numba as nb
import numpy as np

JIT_OPTIONS = {"cache": True, "nogil": True}


@nb.njit(**JIT_OPTIONS)
def factorize1d(keys):
    n = keys.shape[0]
    codes = np.empty(n, dtype=np.int64)
    table = {}
    nxt = 0
    for i in range(n):
        k = keys[i]
        if k in table:
            codes[i] = table[k]
        else:
            table[k] = nxt
            codes[i] = nxt
            nxt += 1
    return codes, nxt


@nb.njit(**JIT_OPTIONS)
def contingency(codes, n_groups, dec, n_dec):
    out = np.zeros((n_groups, n_dec), dtype=np.int64)
    for i in range(codes.shape[0]):
        out[codes[i], dec[i]] += 1
    return out


@nb.njit(**JIT_OPTIONS)
def quality_numerator(cont, thresholds):
    total = 0
    for g in range(cont.shape[0]):
        tot = 0
        best = 0
        for j in range(cont.shape[1]):
            c = cont[g, j]
            tot += c
            if c > best:
                best = c
        if best >= thresholds[tot]:
            total += tot
    return total


@nb.njit(**JIT_OPTIONS)
def similarity_matrix(samples, antecedents, eps, widths):
    m, k = samples.shape
    r = antecedents.shape[0]
    out = np.empty((m, r), dtype=np.float64)
    for i in range(m):
        for a in range(r):
            acc = 0.0
            for j in range(k):
                d = abs(samples[i, j] - antecedents[a, j])
                if widths[j] > 0:
                    s = 1.0 - d / widths[j]
                    if s < 0.0:
                        s = 0.0
                else:
                    s = 1.0 if d == 0 else 0.0
                acc += eps[j] * s
            out[i, a] = acc
    return out
