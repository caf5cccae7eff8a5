# cython: language_level=3
"""Compiled versions of the hot loops in ``_kernels_py``."""
from libc.stdlib cimport malloc, free


cdef long _inv(long a, long p):
    cdef long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref_modp(rows, Py_ssize_t ncols, long p):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, j, c, r = 0, piv
    cdef long f, inv, v
    cdef long *a
    if nrows == 0 or ncols == 0:
        return [], []
    a = <long *> malloc(nrows * ncols * sizeof(long))
    if a == NULL:
        raise MemoryError()
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                v = row[j] % p
                a[i * ncols + j] = v
        pivots = []
        for c in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if a[i * ncols + c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    v = a[piv * ncols + j]
                    a[piv * ncols + j] = a[r * ncols + j]
                    a[r * ncols + j] = v
            inv = _inv(a[r * ncols + c], p)
            if inv != 1:
                for j in range(c, ncols):
                    a[r * ncols + j] = a[r * ncols + j] * inv % p
            for i in range(nrows):
                if i != r:
                    f = a[i * ncols + c]
                    if f != 0:
                        for j in range(c, ncols):
                            v = a[r * ncols + j]
                            if v != 0:
                                v = (a[i * ncols + j] - f * v) % p
                                if v < 0:
                                    v += p
                                a[i * ncols + j] = v
            pivots.append(c)
            r += 1
        out = [[a[i * ncols + j] for j in range(ncols)] for i in range(r)]
    finally:
        free(a)
    return out, pivots


def mc_scan(long p, int n, int m, offset, lin, quad):
    cdef int nl = len(lin), nq = len(quad)
    cdef int i, k
    cdef long code, total = 1
    cdef long *x = <long *> malloc((n + 1) * sizeof(long))
    cdef long *out = <long *> malloc((m + 1) * sizeof(long))
    cdef long *c0 = <long *> malloc((m + 1) * sizeof(long))
    cdef int *lc = <int *> malloc((3 * nl + 1) * sizeof(int))
    cdef long *lv = <long *> malloc((nl + 1) * sizeof(long))
    cdef int *qc = <int *> malloc((3 * nq + 1) * sizeof(int))
    cdef long *qv = <long *> malloc((nq + 1) * sizeof(long))
    cdef bint ok
    hits = []
    try:
        for i in range(n):
            x[i] = 0
            total *= p
        for i in range(m):
            c0[i] = offset[i] % p
        for k in range(nl):
            lc[3 * k] = lin[k][0]
            lc[3 * k + 1] = lin[k][1]
            lv[k] = lin[k][2] % p
        for k in range(nq):
            qc[3 * k] = quad[k][0]
            qc[3 * k + 1] = quad[k][1]
            qc[3 * k + 2] = quad[k][2]
            qv[k] = quad[k][3] % p
        for code in range(total):
            if code:
                i = 0
                while True:
                    x[i] += 1
                    if x[i] < p:
                        break
                    x[i] = 0
                    i += 1
            for i in range(m):
                out[i] = c0[i]
            for k in range(nl):
                if x[lc[3 * k + 1]]:
                    out[lc[3 * k]] = (out[lc[3 * k]] + lv[k] * x[lc[3 * k + 1]]) % p
            for k in range(nq):
                if x[qc[3 * k + 1]] and x[qc[3 * k + 2]]:
                    out[qc[3 * k]] = (out[qc[3 * k]]
                                      + qv[k] * x[qc[3 * k + 1]] % p * x[qc[3 * k + 2]]) % p
            ok = True
            for i in range(m):
                if out[i] != 0:
                    ok = False
                    break
            if ok:
                hits.append(code)
    finally:
        free(x)
        free(out)
        free(c0)
        free(lc)
        free(lv)
        free(qc)
        free(qv)
    return hits
