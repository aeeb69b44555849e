"""Numeric hot kernel for tree induction.

The Gini best-split scan dominates forest training, so it is compiled with
numba when available.  Setting the environment variable ``DDIKIT_NO_NUMBA``
(to any non-empty value) forces the pure-NumPy/Python implementation; both
paths produce bit-identical results.
"""

from __future__ import annotations

import os

import numpy as np


def _best_split_py(X, y, feat_idx):  # pragma: no cover - exercised via wrapper
    """Best Gini split over the candidate features.

    X is (samples, features) int64, y is 0/1 int64, feat_idx the candidate
    feature indices.  Splits are ``x <= threshold``.  Returns
    (feature, threshold, weighted_gini); feature is -1 when no candidate
    feature separates the samples.
    """
    n = X.shape[0]
    best_feat = -1
    best_thr = np.int64(0)
    best_gini = np.float64(1e18)
    for k in range(feat_idx.shape[0]):
        f = feat_idx[k]
        col = X[:, f]
        order = np.argsort(col, kind="mergesort")
        pos_left = np.int64(0)
        total_pos = np.int64(0)
        for i in range(n):
            total_pos += y[i]
        for i in range(n - 1):
            pos_left += y[order[i]]
            if col[order[i]] == col[order[i + 1]]:
                continue
            nl = np.float64(i + 1)
            nr = np.float64(n - i - 1)
            pl = pos_left / nl
            pr = (total_pos - pos_left) / nr
            gini = (
                nl * (1.0 - pl * pl - (1.0 - pl) * (1.0 - pl))
                + nr * (1.0 - pr * pr - (1.0 - pr) * (1.0 - pr))
            ) / np.float64(n)
            thr = col[order[i]]
            if gini < best_gini or (
                gini == best_gini
                and (f < best_feat or (f == best_feat and thr < best_thr))
            ):
                best_gini = gini
                best_feat = f
                best_thr = thr
    return best_feat, best_thr, best_gini


USING_NUMBA = False
if not os.environ.get("DDIKIT_NO_NUMBA"):
    try:
        from numba import njit

        best_split = njit(cache=True)(_best_split_py)
        USING_NUMBA = True
    except ImportError:  # pragma: no cover - numba is an install-time dep
        best_split = _best_split_py
else:
    best_split = _best_split_py

best_split_nopython = _best_split_py
