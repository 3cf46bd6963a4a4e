"""Vectorized numpy Pauli-frame kernel (fallback for the compiled one).

Both kernel implementations consume identical pre-sampled class arrays and
must return bit-identical results; randomness never enters here.
"""

from __future__ import annotations

import numpy as np

# class code -> frame bits; 1-qubit codes 0..3 are I,X,Y,Z
_X1 = np.array([0, 1, 1, 0], dtype=np.uint8)
_Z1 = np.array([0, 0, 1, 1], dtype=np.uint8)


def run_block(n, op_t, op_a, op_b, v_s, v_l, in_cls, h_a, h_b, cz_a, cz_b, corr):
    """Propagate one block of shots through the circuit on both sides.

    Parameters
    ----------
    op_t, op_a, op_b : int32 arrays
        Gate list; op_t[i] is 0 for CZ(op_a, op_b), 1 for H(op_a).
    in_cls : (shots, n) uint8
        Input Pauli class per qubit, folded onto side A.
    h_a, h_b : (shots, n_h) uint8
        Single-qubit depolarizing class per H site, per side.
    cz_a, cz_b : (shots, n_cz) uint8
        Two-qubit depolarizing class (0..15) per CZ site, per side;
        low bits act on the first qubit of the pair.
    corr : (2^r,) uint64 or None
        Dense correction table (None = postselect on zero syndrome).

    Returns
    -------
    (success, cls) : (shots,) bool and uint64 arrays
        Shot acceptance and the residual joint class of the kept pairs,
        packed two bits per pair (x + 2z).
    """
    shots = in_cls.shape[0]
    fxa = _X1[in_cls].copy()
    fza = _Z1[in_cls].copy()
    fxb = np.zeros((shots, n), dtype=np.uint8)
    fzb = np.zeros((shots, n), dtype=np.uint8)

    hi = ci = 0
    for t, a, b in zip(op_t, op_a, op_b):
        if t == 0:
            for fx, fz, noise in ((fxa, fza, cz_a), (fxb, fzb, cz_b)):
                fz[:, a] ^= fx[:, b]
                fz[:, b] ^= fx[:, a]
                c = noise[:, ci]
                fx[:, a] ^= c & 1
                fz[:, a] ^= (c >> 1) & 1
                fx[:, b] ^= (c >> 2) & 1
                fz[:, b] ^= (c >> 3) & 1
            ci += 1
        else:
            for fx, fz, noise in ((fxa, fza, h_a), (fxb, fzb, h_b)):
                tmp = fx[:, a].copy()
                fx[:, a] = fz[:, a]
                fz[:, a] = tmp
                c = noise[:, hi]
                fx[:, a] ^= _X1[c]
                fz[:, a] ^= _Z1[c]
            hi += 1

    syn_bits = fxa[:, v_s] ^ fxb[:, v_s]
    synd = syn_bits.astype(np.uint64).dot(
        (1 << np.arange(len(v_s), dtype=np.uint64)))
    kx = (fxa[:, v_l] ^ fxb[:, v_l]).astype(np.uint64)
    kz = (fza[:, v_l] ^ fzb[:, v_l]).astype(np.uint64)
    k = len(v_l)
    cls = ((kx + 2 * kz) << (2 * np.arange(k, dtype=np.uint64))).sum(
        axis=1, dtype=np.uint64) if k else np.zeros(shots, dtype=np.uint64)

    if corr is None:
        success = synd == 0
    else:
        success = np.ones(shots, dtype=bool)
        cls ^= corr[synd]
    return success, cls
