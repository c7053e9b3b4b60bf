# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled cell-counting kernels for the vertex-rule cubical complex.

A j-cell is present iff all 2^j of its grid vertices are set; chi is the
alternating sum of cell counts.  Cells are counted with branchless
conjunction-and-sum loops; row-local 32-bit accumulators keep the inner
loops vectorizable (each row contributes at most its length, so 32 bits
cannot overflow for any supported grid).
"""


def euler_char_2d(const unsigned char[:, ::1] m):
    cdef Py_ssize_t nx = m.shape[0], ny = m.shape[1]
    cdef Py_ssize_t i, j
    cdef long long v = 0, e = 0, f = 0
    cdef unsigned int rv, re, rf
    for i in range(nx - 1):
        rv = 0
        re = 0
        rf = 0
        for j in range(ny - 1):
            rv += m[i, j]
            re += (m[i, j] & m[i + 1, j]) + (m[i, j] & m[i, j + 1])
            rf += m[i, j] & m[i + 1, j] & m[i, j + 1] & m[i + 1, j + 1]
        rv += m[i, ny - 1]
        re += m[i, ny - 1] & m[i + 1, ny - 1]
        v += rv
        e += re
        f += rf
    rv = 0
    re = 0
    for j in range(ny - 1):
        rv += m[nx - 1, j]
        re += m[nx - 1, j] & m[nx - 1, j + 1]
    v += rv + m[nx - 1, ny - 1]
    e += re
    return v - e + f


def euler_char_3d(const unsigned char[:, :, ::1] m):
    cdef Py_ssize_t nx = m.shape[0], ny = m.shape[1], nz = m.shape[2]
    cdef Py_ssize_t i, j, k
    cdef long long v = 0, e = 0, f = 0, c = 0
    cdef unsigned int rv, re, rf, rc
    cdef unsigned char a, ex, ey, fxy
    # interior sheets: all eight vertices of each cell are in range
    for i in range(nx - 1):
        for j in range(ny - 1):
            rv = 0
            re = 0
            rf = 0
            rc = 0
            for k in range(nz - 1):
                a = m[i, j, k]
                ex = a & m[i + 1, j, k]
                ey = a & m[i, j + 1, k]
                fxy = ex & m[i, j + 1, k] & m[i + 1, j + 1, k]
                rv += a
                re += ex + ey + (a & m[i, j, k + 1])
                rf += (fxy
                       + (ex & m[i, j, k + 1] & m[i + 1, j, k + 1])
                       + (ey & m[i, j, k + 1] & m[i, j + 1, k + 1]))
                rc += (fxy & m[i, j, k + 1] & m[i + 1, j, k + 1]
                       & m[i, j + 1, k + 1] & m[i + 1, j + 1, k + 1])
            # last-k column of this (i, j) row
            a = m[i, j, nz - 1]
            rv += a
            re += (a & m[i + 1, j, nz - 1]) + (a & m[i, j + 1, nz - 1])
            rf += (a & m[i + 1, j, nz - 1]
                   & m[i, j + 1, nz - 1] & m[i + 1, j + 1, nz - 1])
            v += rv
            e += re
            f += rf
            c += rc
        # j = ny - 1 sheet: only x- and z-cells remain
        rv = 0
        re = 0
        rf = 0
        for k in range(nz - 1):
            a = m[i, ny - 1, k]
            rv += a
            re += (a & m[i + 1, ny - 1, k]) + (a & m[i, ny - 1, k + 1])
            rf += (a & m[i + 1, ny - 1, k]
                   & m[i, ny - 1, k + 1] & m[i + 1, ny - 1, k + 1])
        a = m[i, ny - 1, nz - 1]
        v += rv + a
        e += re + (a & m[i + 1, ny - 1, nz - 1])
        f += rf
    # i = nx - 1 sheet: a 2D problem in (j, k)
    for j in range(ny - 1):
        rv = 0
        re = 0
        rf = 0
        for k in range(nz - 1):
            a = m[nx - 1, j, k]
            rv += a
            re += (a & m[nx - 1, j + 1, k]) + (a & m[nx - 1, j, k + 1])
            rf += (a & m[nx - 1, j + 1, k]
                   & m[nx - 1, j, k + 1] & m[nx - 1, j + 1, k + 1])
        a = m[nx - 1, j, nz - 1]
        v += rv + a
        e += re + (a & m[nx - 1, j + 1, nz - 1])
        f += rf
    rv = 0
    re = 0
    for k in range(nz - 1):
        rv += m[nx - 1, ny - 1, k]
        re += m[nx - 1, ny - 1, k] & m[nx - 1, ny - 1, k + 1]
    v += rv + m[nx - 1, ny - 1, nz - 1]
    e += re
    return v - e + f - c
