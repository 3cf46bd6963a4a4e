# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Per-shot Pauli-frame kernel with bit-packed frames.

Mirrors ``_mc_numpy.run_block`` exactly: same inputs, same outputs, no
randomness inside.  Frames are packed one qubit per bit (n <= 64).
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef unsigned long long _X1[4]
cdef unsigned long long _Z1[4]
_X1[0] = 0; _X1[1] = 1; _X1[2] = 1; _X1[3] = 0
_Z1[0] = 0; _Z1[1] = 0; _Z1[2] = 1; _Z1[3] = 1


def run_block(int n,
              cnp.int32_t[:] op_t, cnp.int32_t[:] op_a, cnp.int32_t[:] op_b,
              cnp.int32_t[:] v_s, cnp.int32_t[:] v_l,
              cnp.uint8_t[:, :] in_cls,
              cnp.uint8_t[:, :] h_a, cnp.uint8_t[:, :] h_b,
              cnp.uint8_t[:, :] cz_a, cnp.uint8_t[:, :] cz_b,
              corr):
    cdef Py_ssize_t shots = in_cls.shape[0]
    cdef Py_ssize_t n_ops = op_t.shape[0]
    cdef Py_ssize_t r = v_s.shape[0]
    cdef Py_ssize_t k = v_l.shape[0]
    cdef bint postselect = corr is None

    cdef cnp.uint64_t[:] corr_view
    if not postselect:
        corr_view = corr

    success_arr = np.zeros(shots, dtype=np.bool_)
    cls_arr = np.zeros(shots, dtype=np.uint64)
    cdef cnp.uint8_t[:] success = success_arr.view(np.uint8)
    cdef cnp.uint64_t[:] cls_out = cls_arr

    cdef Py_ssize_t s, g, q, hi, ci
    cdef int a, b
    cdef unsigned long long xa, za, xb, zb, bit, synd, cls, c

    for s in range(shots):
        xa = 0; za = 0; xb = 0; zb = 0
        for q in range(n):
            c = in_cls[s, q]
            xa |= _X1[c] << q
            za |= _Z1[c] << q
        hi = 0; ci = 0
        for g in range(n_ops):
            a = op_a[g]
            if op_t[g] == 0:
                b = op_b[g]
                za ^= ((xa >> b) & 1ULL) << a
                za ^= ((xa >> a) & 1ULL) << b
                zb ^= ((xb >> b) & 1ULL) << a
                zb ^= ((xb >> a) & 1ULL) << b
                c = cz_a[s, ci]
                xa ^= (c & 1ULL) << a
                za ^= ((c >> 1) & 1ULL) << a
                xa ^= ((c >> 2) & 1ULL) << b
                za ^= ((c >> 3) & 1ULL) << b
                c = cz_b[s, ci]
                xb ^= (c & 1ULL) << a
                zb ^= ((c >> 1) & 1ULL) << a
                xb ^= ((c >> 2) & 1ULL) << b
                zb ^= ((c >> 3) & 1ULL) << b
                ci += 1
            else:
                bit = ((xa >> a) ^ (za >> a)) & 1ULL
                xa ^= bit << a
                za ^= bit << a
                bit = ((xb >> a) ^ (zb >> a)) & 1ULL
                xb ^= bit << a
                zb ^= bit << a
                c = h_a[s, hi]
                xa ^= _X1[c] << a
                za ^= _Z1[c] << a
                c = h_b[s, hi]
                xb ^= _X1[c] << a
                zb ^= _Z1[c] << a
                hi += 1

        synd = 0
        for q in range(r):
            synd |= (((xa ^ xb) >> v_s[q]) & 1ULL) << q
        cls = 0
        for q in range(k):
            cls |= ((((xa ^ xb) >> v_l[q]) & 1ULL)
                    | ((((za ^ zb) >> v_l[q]) & 1ULL) << 1)) << (2 * q)

        if postselect:
            if synd == 0:
                success[s] = 1
            cls_out[s] = cls
        else:
            success[s] = 1
            cls_out[s] = cls ^ corr_view[synd]

    return success_arr, cls_arr
