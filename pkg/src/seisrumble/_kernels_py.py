"""Pure-Python reference implementations of the hot kernels.

Every function here has a twin in ``_kernels.pyx`` with the same signature
and the same floating-point operation order, so both backends agree to the
last bit on IEEE-754 hardware (the extension is compiled with
``-ffp-contract=off``).
"""

import numpy as np

SPLIT_TIE_TOL = 1e-12


def sosfilt(sos, x):
    """Cascade of biquads in transposed direct form II, zero initial state."""
    sos = np.ascontiguousarray(sos, dtype=np.float64)
    y = np.array(x, dtype=np.float64, copy=True)
    n = y.shape[0]
    for sec in sos:
        b0, b1, b2 = float(sec[0]), float(sec[1]), float(sec[2])
        a1, a2 = float(sec[4]), float(sec[5])
        z0 = 0.0
        z1 = 0.0
        for i in range(n):
            xi = y[i]
            yi = b0 * xi + z0
            z0 = b1 * xi - a1 * yi + z1
            z1 = b2 * xi - a2 * yi
            y[i] = yi
    return y


def threshold_adjust(s, t1, t2, t3, deltas):
    s = np.asarray(s, dtype=np.float64)
    d_hi, d_mid, d_low, d_min = (float(d) for d in deltas)
    out = np.where(s > t3, s + d_hi,
                   np.where(s > t2, s + d_mid,
                            np.where(s > t1, s + d_low, s + d_min)))
    return out


def tensor_eigenvalues(jtt, jff, jtf):
    jtt = np.asarray(jtt, dtype=np.float64)
    jff = np.asarray(jff, dtype=np.float64)
    jtf = np.asarray(jtf, dtype=np.float64)
    diff = jtt - jff
    root = np.sqrt(diff * diff + 4.0 * (jtf * jtf))
    trace = jtt + jff
    return 0.5 * (trace + root), 0.5 * (trace - root)


def coherence(l1, l2, eps):
    l1 = np.asarray(l1, dtype=np.float64)
    l2 = np.asarray(l2, dtype=np.float64)
    total = l1 + l2
    flat = total < eps
    safe = np.where(flat, 1.0, total)
    c = (l1 - l2) / safe
    c = np.minimum(np.maximum(c, 0.0), 1.0)
    c[flat] = 0.0
    return c


def best_split(X, y):
    """Exhaustive Gini split search over midpoints.

    ``y`` holds 0/1 labels. Returns ``(feature, threshold, impurity)`` with
    feature -1 when every feature is constant. Ties resolve to the lowest
    feature index, then the lowest threshold.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n, d = X.shape
    total_pos = int(y.sum())
    best_feature = -1
    best_threshold = 0.0
    best_score = np.inf
    for j in range(d):
        order = np.argsort(X[:, j], kind="mergesort")
        col = X[order, j]
        labels = y[order]
        left_pos = 0
        for i in range(n - 1):
            left_pos += int(labels[i])
            if col[i] == col[i + 1]:
                continue
            n_left = i + 1
            n_right = n - n_left
            right_pos = total_pos - left_pos
            score = _weighted_gini(n_left, left_pos, n_right, right_pos, n)
            if score < best_score - SPLIT_TIE_TOL:
                best_score = score
                best_feature = j
                best_threshold = 0.5 * (col[i] + col[i + 1])
    return best_feature, best_threshold, best_score


def _weighted_gini(n_left, left_pos, n_right, right_pos, n):
    pl = left_pos / n_left
    pr = right_pos / n_right
    gl = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl)
    gr = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr)
    return (n_left * gl + n_right * gr) / n
