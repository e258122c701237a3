# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels (see _kernels_py for the contract)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

IMPLEMENTATION = "compiled"


cdef inline double complex _horner(const double complex* cs, Py_ssize_t n,
                                   double complex z) noexcept nogil:
    cdef double complex acc = 0
    cdef Py_ssize_t i
    for i in range(n - 1, -1, -1):
        acc = acc * z + cs[i]
    return acc


def polyval(const double complex[::1] coeffs, zs):
    zarr = np.ascontiguousarray(np.atleast_1d(np.asarray(zs, dtype=np.complex128)))
    cdef Py_ssize_t n = coeffs.shape[0]
    if n == 0:
        out0 = np.zeros(zarr.shape, dtype=np.complex128)
        return out0 if np.ndim(zs) else out0.reshape(-1)[0]
    flat = zarr.reshape(-1)
    cdef const double complex[::1] z = flat
    out = np.empty(z.shape[0], dtype=np.complex128)
    cdef double complex[::1] o = out
    cdef Py_ssize_t p
    with nogil:
        for p in range(z.shape[0]):
            o[p] = _horner(&coeffs[0], n, z[p])
    return out.reshape(zarr.shape) if np.ndim(zs) else out[0]


cdef inline double complex _cdiv(double complex a, double complex b) noexcept nogil:
    # Smith's scaled division: accurate without the library's slow full checks
    cdef double br = b.real, bi = b.imag, t, d
    if (br if br >= 0 else -br) >= (bi if bi >= 0 else -bi):
        t = bi / br
        d = br + bi * t
        return ((a.real + a.imag * t) + 1j * (a.imag - a.real * t)) / d
    t = br / bi
    d = br * t + bi
    return ((a.real * t + a.imag) + 1j * (a.imag * t - a.real)) / d


def rational_block_sum(const double complex[::1] num_flat,
                       const long long[::1] num_off,
                       const double complex[::1] den_flat,
                       const long long[::1] den_off,
                       const double complex[::1] centers,
                       zs, long long exclude=-1):
    zarr = np.ascontiguousarray(np.atleast_1d(np.asarray(zs, dtype=np.complex128)))
    flat = zarr.reshape(-1)
    cdef const double complex[::1] z = flat
    cdef Py_ssize_t nblocks = centers.shape[0]
    cdef Py_ssize_t ncomp = (num_off.shape[0] - 1) // nblocks if nblocks else 0
    out = np.zeros((flat.shape[0], ncomp), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef Py_ssize_t p, k, j, i, n0, n1, d0, d1, m = flat.shape[0]
    cdef double complex w, c
    with nogil:
        for k in range(nblocks):
            if k == exclude:
                continue
            c = centers[k]
            for j in range(ncomp):
                i = k * ncomp + j
                n0 = num_off[i]
                n1 = num_off[i + 1]
                if n1 == n0:
                    continue
                d0 = den_off[i]
                d1 = den_off[i + 1]
                for p in range(m):
                    w = z[p] - c
                    o[p, j] = o[p, j] + _cdiv(
                        _horner(&num_flat[n0], n1 - n0, w),
                        _horner(&den_flat[d0], d1 - d0, w),
                    )
    if np.ndim(zs):
        return out.reshape(zarr.shape + (ncomp,))
    return out[0]
