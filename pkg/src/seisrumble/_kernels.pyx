# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_kernels_py`` for the reference semantics."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, INFINITY

cnp.import_array()

SPLIT_TIE_TOL = 1e-12
cdef double _TIE_TOL = 1e-12


def sosfilt(sos, x):
    cdef const double[:, ::1] s = np.ascontiguousarray(sos, dtype=np.float64)
    out = np.array(x, dtype=np.float64, copy=True)
    cdef double[::1] y = out
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t k, i
    cdef double b0, b1, b2, a1, a2, z0, z1, xi, yi
    for k in range(s.shape[0]):
        b0 = s[k, 0]; b1 = s[k, 1]; b2 = s[k, 2]
        a1 = s[k, 4]; a2 = s[k, 5]
        z0 = 0.0
        z1 = 0.0
        for i in range(n):
            xi = y[i]
            yi = b0 * xi + z0
            z0 = b1 * xi - a1 * yi + z1
            z1 = b2 * xi - a2 * yi
            y[i] = yi
    return out


def threshold_adjust(s, double t1, double t2, double t3, deltas):
    src = np.ascontiguousarray(s, dtype=np.float64)
    out = np.empty_like(src)
    cdef const double[::1] a = src.reshape(-1)
    cdef double[::1] b = out.reshape(-1)
    cdef double d_hi = deltas[0], d_mid = deltas[1], d_low = deltas[2], d_min = deltas[3]
    cdef Py_ssize_t i
    cdef double v
    for i in range(a.shape[0]):
        v = a[i]
        if v > t3:
            b[i] = v + d_hi
        elif v > t2:
            b[i] = v + d_mid
        elif v > t1:
            b[i] = v + d_low
        else:
            b[i] = v + d_min
    return out


def tensor_eigenvalues(jtt, jff, jtf):
    tt = np.ascontiguousarray(jtt, dtype=np.float64)
    ff = np.ascontiguousarray(jff, dtype=np.float64)
    tf = np.ascontiguousarray(jtf, dtype=np.float64)
    l1 = np.empty_like(tt)
    l2 = np.empty_like(tt)
    cdef const double[::1] a = tt.reshape(-1)
    cdef const double[::1] d = ff.reshape(-1)
    cdef const double[::1] b = tf.reshape(-1)
    cdef double[::1] o1 = l1.reshape(-1)
    cdef double[::1] o2 = l2.reshape(-1)
    cdef Py_ssize_t i
    cdef double diff, root, trace
    for i in range(a.shape[0]):
        diff = a[i] - d[i]
        root = sqrt(diff * diff + 4.0 * (b[i] * b[i]))
        trace = a[i] + d[i]
        o1[i] = 0.5 * (trace + root)
        o2[i] = 0.5 * (trace - root)
    return l1, l2


def coherence(l1, l2, double eps):
    a = np.ascontiguousarray(l1, dtype=np.float64)
    b = np.ascontiguousarray(l2, dtype=np.float64)
    out = np.empty_like(a)
    cdef const double[::1] p = a.reshape(-1)
    cdef const double[::1] q = b.reshape(-1)
    cdef double[::1] c = out.reshape(-1)
    cdef Py_ssize_t i
    cdef double total, v
    for i in range(p.shape[0]):
        total = p[i] + q[i]
        if total < eps:
            c[i] = 0.0
            continue
        v = (p[i] - q[i]) / total
        if v < 0.0:
            v = 0.0
        elif v > 1.0:
            v = 1.0
        c[i] = v
    return out


cdef inline double _weighted_gini(Py_ssize_t n_left, Py_ssize_t left_pos,
                                  Py_ssize_t n_right, Py_ssize_t right_pos,
                                  Py_ssize_t n):
    cdef double pl = <double>left_pos / <double>n_left
    cdef double pr = <double>right_pos / <double>n_right
    cdef double gl = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl)
    cdef double gr = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr)
    return (n_left * gl + n_right * gr) / <double>n


def best_split(X, y):
    cdef const double[:, :] data = np.asarray(X, dtype=np.float64)
    cdef const long long[::1] labels = np.ascontiguousarray(y, dtype=np.int64)
    cdef Py_ssize_t n = data.shape[0], d = data.shape[1]
    cdef Py_ssize_t j, i, n_left, left_pos, right_pos, total_pos = 0
    cdef Py_ssize_t best_feature = -1
    cdef double best_threshold = 0.0, best_score = INFINITY, score
    cdef long long[::1] order
    cdef double[::1] col = np.empty(n, dtype=np.float64)
    cdef long long[::1] lab = np.empty(n, dtype=np.int64)
    for i in range(n):
        total_pos += labels[i]
    for j in range(d):
        order = np.argsort(np.asarray(data[:, j]), kind="mergesort").astype(np.int64)
        for i in range(n):
            col[i] = data[order[i], j]
            lab[i] = labels[order[i]]
        left_pos = 0
        for i in range(n - 1):
            left_pos += lab[i]
            if col[i] == col[i + 1]:
                continue
            n_left = i + 1
            right_pos = total_pos - left_pos
            score = _weighted_gini(n_left, left_pos, n - n_left, right_pos, n)
            if score < best_score - _TIE_TOL:
                best_score = score
                best_feature = j
                best_threshold = 0.5 * (col[i] + col[i + 1])
    return int(best_feature), float(best_threshold), float(best_score)
