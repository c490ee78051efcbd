# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled state-vector kernels.

Drop-in replacement for ``tritassert._fallback``. All gate kernels mutate a
C-contiguous complex128 amplitude vector in place; qutrit 0 is the most
significant trit of the flat index.
"""
import numpy as np
cimport numpy as cnp

from tritassert.errors import NumericalError

cnp.import_array()

cdef double DEAD_BRANCH = 1e-12


cdef inline Py_ssize_t _stride(int n, int q) noexcept nogil:
    cdef Py_ssize_t s = 1
    cdef int k
    for k in range(n - 1 - q):
        s *= 3
    return s


def apply_single(double complex[::1] amps, int n, int q, const double complex[:, ::1] mat):
    cdef Py_ssize_t stride = _stride(n, q)
    cdef Py_ssize_t block = 3 * stride
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t base, off, i0, i1, i2
    cdef double complex a0, a1, a2
    cdef double complex m00 = mat[0, 0], m01 = mat[0, 1], m02 = mat[0, 2]
    cdef double complex m10 = mat[1, 0], m11 = mat[1, 1], m12 = mat[1, 2]
    cdef double complex m20 = mat[2, 0], m21 = mat[2, 1], m22 = mat[2, 2]
    with nogil:
        base = 0
        while base < size:
            for off in range(stride):
                i0 = base + off
                i1 = i0 + stride
                i2 = i1 + stride
                a0 = amps[i0]
                a1 = amps[i1]
                a2 = amps[i2]
                amps[i0] = m00 * a0 + m01 * a1 + m02 * a2
                amps[i1] = m10 * a0 + m11 * a1 + m12 * a2
                amps[i2] = m20 * a0 + m21 * a1 + m22 * a2
            base += block


cdef inline void _pair_strides(Py_ssize_t s1, Py_ssize_t s2, Py_ssize_t *hi, Py_ssize_t *lo) noexcept nogil:
    if s1 > s2:
        hi[0] = s1
        lo[0] = s2
    else:
        hi[0] = s2
        lo[0] = s1


def apply_controlled(double complex[::1] amps, int n, int control, int target,
                     const double complex[:, ::1] mat):
    cdef Py_ssize_t sc = _stride(n, control)
    cdef Py_ssize_t st = _stride(n, target)
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t hi, lo, x, y, z, i, i1, i2
    cdef double complex a0, a1, a2
    cdef double complex m00 = mat[0, 0], m01 = mat[0, 1], m02 = mat[0, 2]
    cdef double complex m10 = mat[1, 0], m11 = mat[1, 1], m12 = mat[1, 2]
    cdef double complex m20 = mat[2, 0], m21 = mat[2, 1], m22 = mat[2, 2]
    _pair_strides(sc, st, &hi, &lo)
    with nogil:
        # walk every index whose control digit is 2 and target digit is 0
        x = 0
        while x < size:
            y = x
            while y < x + hi:
                for z in range(y, y + lo):
                    i = z + 2 * sc
                    i1 = i + st
                    i2 = i1 + st
                    a0 = amps[i]
                    a1 = amps[i1]
                    a2 = amps[i2]
                    amps[i] = m00 * a0 + m01 * a1 + m02 * a2
                    amps[i1] = m10 * a0 + m11 * a1 + m12 * a2
                    amps[i2] = m20 * a0 + m21 * a1 + m22 * a2
                y += 3 * lo
            x += 3 * hi


def apply_two(double complex[::1] amps, int n, int q1, int q2, const double complex[:, ::1] mat9):
    cdef Py_ssize_t s1 = _stride(n, q1)
    cdef Py_ssize_t s2 = _stride(n, q2)
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t hi, lo, x, y, z, r, c, k
    cdef Py_ssize_t off[9]
    cdef double complex v[9]
    cdef double complex acc[9]
    # sparse copy of the matrix; the A-gates are permutations
    cdef int nnz = 0
    cdef int rows[81]
    cdef int cols[81]
    cdef double complex vals[81]
    for r in range(9):
        off[r] = (r // 3) * s1 + (r % 3) * s2
        for c in range(9):
            if mat9[r, c] != 0:
                rows[nnz] = r
                cols[nnz] = c
                vals[nnz] = mat9[r, c]
                nnz += 1
    _pair_strides(s1, s2, &hi, &lo)
    with nogil:
        x = 0
        while x < size:
            y = x
            while y < x + hi:
                for z in range(y, y + lo):
                    for r in range(9):
                        v[r] = amps[z + off[r]]
                        acc[r] = 0
                    for k in range(nnz):
                        acc[rows[k]] = acc[rows[k]] + vals[k] * v[cols[k]]
                    for r in range(9):
                        amps[z + off[r]] = acc[r]
                y += 3 * lo
            x += 3 * hi


def probabilities(const double complex[::1] amps, int n, int q):
    cdef Py_ssize_t stride = _stride(n, q)
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t i
    cdef double p[3]
    cdef double complex a
    p[0] = 0.0
    p[1] = 0.0
    p[2] = 0.0
    with nogil:
        for i in range(size):
            a = amps[i]
            p[(i // stride) % 3] += a.real * a.real + a.imag * a.imag
    return np.array([p[0], p[1], p[2]])


def joint_marginal(const double complex[::1] amps, int n, qutrits):
    cdef Py_ssize_t m = len(qutrits)
    cdef Py_ssize_t width = 1
    cdef Py_ssize_t k, q
    for k in range(m):
        width *= 3
    # weight of each qutrit's digit in the output key (0 if not measured)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] weight_arr = np.zeros(n, dtype=np.int64)
    cdef Py_ssize_t w = width
    for k in range(m):
        w //= 3
        weight_arr[int(qutrits[k])] = w
    cdef long long[::1] weight = weight_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=1] digit_arr = np.zeros(n, dtype=np.int64)
    cdef long long[::1] digit = digit_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.zeros(width)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t size = amps.shape[0]
    cdef Py_ssize_t i, key = 0
    cdef double complex a
    with nogil:
        for i in range(size):
            a = amps[i]
            out[key] += a.real * a.real + a.imag * a.imag
            # odometer increment over the trits of i, least significant first
            q = n - 1
            while q >= 0:
                digit[q] += 1
                key += weight[q]
                if digit[q] < 3:
                    break
                digit[q] = 0
                key -= 3 * weight[q]
                q -= 1
    return out_arr


cdef inline int _pick(double p0, double p1, double p2, double u) noexcept nogil:
    cdef double cum = p0
    cdef int last = -1
    if p0 > 0:
        last = 0
        if u < cum:
            return 0
    cum = p0 + p1
    if p1 > 0:
        last = 1
        if u < cum:
            return 1
    cum = p0 + p1 + p2
    if p2 > 0:
        last = 2
        if u < cum:
            return 2
    return last


def sample_joint(joint, int m, const double[:, ::1] draws):
    cdef Py_ssize_t shots = draws.shape[0]
    cdef Py_ssize_t total = 0
    cdef Py_ssize_t k, width, s, j
    width = 1
    offsets = []
    for k in range(m):
        width *= 3
        offsets.append(total)
        total += width
    cdef cnp.ndarray[cnp.float64_t, ndim=1] levels_arr = np.zeros(total)
    cdef double[::1] levels = levels_arr
    cdef const double[::1] src = np.ascontiguousarray(joint, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] off_arr = np.array(offsets, dtype=np.int64)
    cdef long long[::1] off = off_arr
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out_arr = np.empty((shots, m), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    cdef Py_ssize_t prefix
    cdef double c0, c1, c2, tot, p0, p1, p2, norm
    cdef int d
    cdef int failure = 0

    for j in range(src.shape[0]):
        levels[off[m - 1] + j] = src[j]
    for k in range(m - 2, -1, -1):
        for j in range(off[k + 1] - off[k]):
            levels[off[k] + j] = (levels[off[k + 1] + 3 * j]
                                  + levels[off[k + 1] + 3 * j + 1]
                                  + levels[off[k + 1] + 3 * j + 2])

    with nogil:
        for s in range(shots):
            prefix = 0
            for k in range(m):
                c0 = levels[off[k] + 3 * prefix]
                c1 = levels[off[k] + 3 * prefix + 1]
                c2 = levels[off[k] + 3 * prefix + 2]
                tot = c0 + c1 + c2
                if tot != tot or (k == 0 and tot < DEAD_BRANCH) or tot <= 0:
                    failure = 1
                    break
                p0 = c0 / tot
                p1 = c1 / tot
                p2 = c2 / tot
                if p0 < DEAD_BRANCH:
                    p0 = 0.0
                if p1 < DEAD_BRANCH:
                    p1 = 0.0
                if p2 < DEAD_BRANCH:
                    p2 = 0.0
                norm = p0 + p1 + p2
                p0 = p0 / norm
                p1 = p1 / norm
                p2 = p2 / norm
                d = _pick(p0, p1, p2, draws[s, k])
                out[s, k] = d
                prefix = prefix * 3 + d
            if failure:
                break
    if failure:
        raise NumericalError("state has no measurable probability mass")
    return out_arr
