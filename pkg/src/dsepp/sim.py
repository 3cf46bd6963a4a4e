"""Exact enumeration and Pauli-frame Monte Carlo for compiled circuits.

Input pairs carry one-sided isotropic noise: (A x I)|Phi+> = (I x A^T)|Phi+>
lets all input error fold onto one side.  Circuit noise is sampled
independently per side as a single-qubit depolarizing event after every
Hadamard actually applied and a two-qubit event after every CZ.  Syndromes
are the XOR of the two sides' measurement frames.

Monte-Carlo runs draw from counter-based Philox streams, one per
65536-shot block, and reduce to integer tallies, so results for a fixed
(seed, shots) are identical across thread counts and kernel backends.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ._backend import run_block
from .compiler import CompiledCircuit
from .decoder import DecoderTable
from .stabilizer import _XBIT, _ZBIT

_BLOCK = 1 << 16

# internal (x + 2z) class -> label index (I=0, X=1, Y=2, Z=3)
_INTERNAL_TO_LABEL = np.array([0, 1, 3, 2], dtype=np.int64)

# Bell-basis eigenvalue table for (XX, YY, ZZ), label order I, X, Y, Z.
_EIG_XX = np.array([1.0, 1.0, -1.0, -1.0])
_EIG_YY = np.array([-1.0, 1.0, -1.0, 1.0])
_EIG_ZZ = np.array([1.0, -1.0, -1.0, 1.0])


@dataclass(frozen=True)
class NoiseModel:
    """Input isotropic strength p and per-gate depolarizing strength q."""

    p: float
    q: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p out of range: {self.p}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q out of range: {self.q}")


@lru_cache(maxsize=16)
def _label_perm(k: int) -> np.ndarray:
    """Permutation taking an internal-indexed 4^k array to label indexing."""
    idx = np.arange(4 ** k, dtype=np.int64)
    out = np.zeros(4 ** k, dtype=np.int64)
    for j in range(k):
        out += _INTERNAL_TO_LABEL[(idx >> (2 * j)) & 3] * (4 ** j)
    return out


class BellClassDist:
    """Joint distribution over the 4^k logical Pauli classes of k pairs.

    ``probs[i]`` uses label indexing: pair j contributes its class label
    (I=0, X=1, Y=2, Z=3) times 4^j.
    """

    __slots__ = ("k", "probs")

    def __init__(self, k: int, probs):
        probs = np.asarray(probs, dtype=np.float64)
        if probs.shape != (4 ** k,):
            raise ValueError(f"need 4^{k} probabilities")
        if probs.min() < -1e-15:
            raise ValueError("negative class probability")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError(f"class probabilities sum to {probs.sum()}")
        probs = probs.clip(min=0.0)
        probs.setflags(write=False)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "probs", probs)

    def __setattr__(self, name, value):
        raise AttributeError("BellClassDist is immutable")

    @classmethod
    def from_internal(cls, k: int, values) -> "BellClassDist":
        values = np.asarray(values, dtype=np.float64)
        out = np.zeros(4 ** k)
        np.add.at(out, _label_perm(k), values)
        return cls(k, out)

    def marginal(self, pair_index: int) -> np.ndarray:
        """Label-ordered (I, X, Y, Z) marginal of one pair."""
        if not 0 <= pair_index < self.k:
            raise IndexError(f"pair index {pair_index} out of range")
        labels = (np.arange(4 ** self.k, dtype=np.int64) // 4 ** pair_index) % 4
        return np.bincount(labels, weights=self.probs, minlength=4)

    @property
    def identity_prob(self) -> float:
        return float(self.probs[0])


def correlators(dist: BellClassDist, pair_index: int) -> tuple[float, float, float]:
    """(<XX>, <YY>, <ZZ>) of one pair's marginal Bell-diagonal state."""
    m = dist.marginal(pair_index)
    return (float(m @ _EIG_XX), float(m @ _EIG_YY), float(m @ _EIG_ZZ))


@dataclass(frozen=True)
class SimResult:
    p_success: float
    fidelity_joint: float
    fidelity_reduced: tuple[float, ...]
    correlators: tuple[tuple[float, float, float], ...]
    dist: BellClassDist | None = None
    shots: int | None = None
    stderr_p_success: float = 0.0
    stderr_fidelity_joint: float = 0.0
    stderr_fidelity_reduced: tuple[float, ...] = field(default=())
    stderr_correlators: tuple[tuple[float, float, float], ...] = field(default=())


def _check_decoder(circ: CompiledCircuit, decoder: DecoderTable | None):
    if decoder is None:
        return
    if decoder.r != circ.r_s or decoder.k != circ.k:
        raise ValueError(
            f"decoder shape ({decoder.r} syndrome bits, {decoder.k} pairs) does not "
            f"match circuit ({circ.r_s}, {circ.k})")


def _result_from_dist(p_success, dist: BellClassDist, shots=None, n_success=None,
                      stderr_ps=0.0) -> SimResult:
    k = dist.k
    fid_joint = dist.identity_prob
    reduced = []
    corr = []
    for j in range(k):
        m = dist.marginal(j)
        reduced.append(float(m[0]))
        corr.append((float(m @ _EIG_XX), float(m @ _EIG_YY), float(m @ _EIG_ZZ)))
    if shots is None:
        se_joint = 0.0
        se_red = tuple(0.0 for _ in range(k))
        se_corr = tuple((0.0, 0.0, 0.0) for _ in range(k))
    else:
        ns = max(n_success, 1)
        se_joint = math.sqrt(max(fid_joint * (1 - fid_joint), 0.0) / ns)
        se_red = tuple(math.sqrt(max(f * (1 - f), 0.0) / ns) for f in reduced)
        se_corr = tuple(
            tuple(math.sqrt(max(1 - c * c, 0.0) / ns) for c in triple)
            for triple in corr)
    return SimResult(
        p_success=float(p_success),
        fidelity_joint=float(fid_joint),
        fidelity_reduced=tuple(reduced),
        correlators=tuple(corr),
        dist=dist,
        shots=shots,
        stderr_p_success=stderr_ps,
        stderr_fidelity_joint=se_joint,
        stderr_fidelity_reduced=se_red,
        stderr_correlators=se_corr,
    )


# ----------------------------------------------------------------------
# Exact enumeration (input noise only)
# ----------------------------------------------------------------------

def simulate_exact(circ: CompiledCircuit, decoder: DecoderTable | None,
                   p: float, cap: int = 10) -> SimResult:
    """Enumerate all 4^n one-sided input Pauli patterns exactly (q = 0).

    With a decoder the run is one-way: every shot is kept and the
    decoder's correction is applied.  Without one it is two-way: any
    nonzero syndrome discards the pattern.

    Raises
    ------
    ValueError
        If n exceeds the enumeration cap or the decoder shape mismatches.
    """
    n, k, r = circ.n, circ.k, circ.r_s
    if n > cap:
        raise ValueError(f"exact enumeration capped at n <= {cap} (got {n})")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p out of range: {p}")
    _check_decoder(circ, decoder)

    total = 4 ** n
    codes = np.arange(total, dtype=np.int64)
    digits = np.empty((total, n), dtype=np.uint8)
    for q in range(n):
        digits[:, q] = (codes >> (2 * q)) & 3
    weight = (digits != 0).sum(axis=1)
    a, b = 1.0 - 0.75 * p, 0.25 * p
    prob = a ** (n - weight).astype(np.float64) * b ** weight.astype(np.float64)

    vec = np.concatenate([_XBIT[digits], _ZBIT[digits]], axis=1)
    img = vec.dot(circ.symplectic_matrix()) & 1

    synd = img[:, :r].astype(np.int64).dot(1 << np.arange(r, dtype=np.int64))
    kept_x = img[:, r:n].astype(np.int64)
    kept_z = img[:, n + r:].astype(np.int64)
    cls = ((kept_x + 2 * kept_z) << (2 * np.arange(k, dtype=np.int64))).sum(axis=1) \
        if k else np.zeros(total, dtype=np.int64)

    if decoder is None:
        keep = synd == 0
        p_success = float(prob[keep].sum())
        internal = np.bincount(cls[keep], weights=prob[keep], minlength=4 ** k)
        internal /= p_success
    else:
        corr = decoder.dense_class_table().astype(np.int64)
        cls = cls ^ corr[synd]
        p_success = 1.0
        internal = np.bincount(cls, weights=prob, minlength=4 ** k)
    dist = BellClassDist.from_internal(k, internal)
    return _result_from_dist(p_success, dist)


# ----------------------------------------------------------------------
# Monte Carlo
# ----------------------------------------------------------------------

def _op_arrays(circ: CompiledCircuit):
    ops = circ.op_sequence()
    op_t = np.array([0 if o[0] == "cz" else 1 for o in ops], dtype=np.int32)
    op_a = np.array([o[1] for o in ops], dtype=np.int32)
    op_b = np.array([o[2] if o[0] == "cz" else -1 for o in ops], dtype=np.int32)
    n_h = int((op_t == 1).sum())
    n_cz = int((op_t == 0).sum())
    return op_t, op_a, op_b, n_h, n_cz


def _sample(rng, shape, cum):
    u = rng.random(shape)
    return np.minimum(
        np.searchsorted(cum, u, side="right"), len(cum) - 1).astype(np.uint8)


def _mc_block(circ, op_arrays, corr, noise, seed, block_index, block_shots):
    op_t, op_a, op_b, n_h, n_cz = op_arrays
    n, k = circ.n, circ.k
    rng = np.random.Generator(np.random.Philox(key=seed).jumped(block_index))

    p, q = noise.p, noise.q
    cum_in = np.cumsum([1 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p])
    in_cls = _sample(rng, (block_shots, n), cum_in)
    if q > 0:
        cum1 = np.cumsum([1 - 0.75 * q] + [0.25 * q] * 3)
        cum2 = np.cumsum([1 - 0.9375 * q] + [0.0625 * q] * 15)
        h_a = _sample(rng, (block_shots, n_h), cum1)
        cz_a = _sample(rng, (block_shots, n_cz), cum2)
        h_b = _sample(rng, (block_shots, n_h), cum1)
        cz_b = _sample(rng, (block_shots, n_cz), cum2)
    else:
        h_a = h_b = np.zeros((block_shots, n_h), dtype=np.uint8)
        cz_a = cz_b = np.zeros((block_shots, n_cz), dtype=np.uint8)

    v_s = np.array(circ.v_s, dtype=np.int32)
    v_l = np.array(circ.v_l, dtype=np.int32)
    success, cls = run_block(n, op_t, op_a, op_b, v_s, v_l,
                             in_cls, h_a, h_b, cz_a, cz_b, corr)

    n_success = int(success.sum())
    sel = cls[success]
    if k <= 8:
        hist = np.bincount(sel.astype(np.int64), minlength=4 ** k).astype(np.int64)
        return n_success, hist, None, None
    marg = np.zeros((k, 4), dtype=np.int64)
    for j in range(k):
        marg[j] = np.bincount((sel >> np.uint64(2 * j)) & np.uint64(3),
                              minlength=4)
    return n_success, None, marg, int((sel == 0).sum())


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("DSEPP_THREADS", "1")))
    except ValueError:
        return 1


def simulate_mc(circ: CompiledCircuit, decoder: DecoderTable | None,
                noise: NoiseModel, shots: int, seed: int,
                threads: int | None = None) -> SimResult:
    """Pauli-frame Monte Carlo under input and circuit depolarizing noise.

    Raises
    ------
    ValueError
        For zero shots or a decoder shape mismatch.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if circ.n > 64:
        raise ValueError("Monte-Carlo frames support n <= 64")
    _check_decoder(circ, decoder)
    n, k = circ.n, circ.k
    corr = None if decoder is None else decoder.dense_class_table()
    op_arrays = _op_arrays(circ)
    threads = default_threads() if threads is None else max(1, threads)

    blocks = [(bi, min(_BLOCK, shots - bi * _BLOCK))
              for bi in range((shots + _BLOCK - 1) // _BLOCK)]

    def work(args):
        bi, bs = args
        return _mc_block(circ, op_arrays, corr, noise, seed, bi, bs)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(work, blocks))
    else:
        results = [work(bl) for bl in blocks]

    n_success = sum(r[0] for r in results)
    p_success = n_success / shots
    stderr_ps = math.sqrt(max(p_success * (1 - p_success), 0.0) / shots)

    if k <= 8:
        hist = np.zeros(4 ** k, dtype=np.int64)
        for r in results:
            hist += r[1]
        if n_success == 0:
            return SimResult(p_success, float("nan"), tuple(float("nan") for _ in range(k)),
                             tuple((float("nan"),) * 3 for _ in range(k)),
                             dist=None, shots=shots, stderr_p_success=stderr_ps)
        dist = BellClassDist.from_internal(k, hist / n_success)
        return _result_from_dist(p_success, dist, shots=shots,
                                 n_success=n_success, stderr_ps=stderr_ps)

    # Wide codes: per-pair marginals and the joint-identity count only.
    marg = np.zeros((k, 4), dtype=np.int64)
    all_i = 0
    for r in results:
        marg += r[2]
        all_i += r[3]
    if n_success == 0:
        return SimResult(p_success, float("nan"), tuple(float("nan") for _ in range(k)),
                         tuple((float("nan"),) * 3 for _ in range(k)),
                         dist=None, shots=shots, stderr_p_success=stderr_ps)
    fid_joint = all_i / n_success
    reduced = []
    corr_list = []
    se_red = []
    se_corr = []
    for j in range(k):
        m = marg[j][_INTERNAL_TO_LABEL_ARGORDER] / n_success
        reduced.append(float(m[0]))
        triple = (float(m @ _EIG_XX), float(m @ _EIG_YY), float(m @ _EIG_ZZ))
        corr_list.append(triple)
        se_red.append(math.sqrt(max(m[0] * (1 - m[0]), 0.0) / n_success))
        se_corr.append(tuple(math.sqrt(max(1 - c * c, 0.0) / n_success) for c in triple))
    return SimResult(
        p_success=float(p_success),
        fidelity_joint=float(fid_joint),
        fidelity_reduced=tuple(reduced),
        correlators=tuple(corr_list),
        dist=None,
        shots=shots,
        stderr_p_success=stderr_ps,
        stderr_fidelity_joint=math.sqrt(max(fid_joint * (1 - fid_joint), 0.0) / n_success),
        stderr_fidelity_reduced=tuple(se_red),
        stderr_correlators=tuple(se_corr),
    )


# internal counts (x+2z order) rearranged into label order I, X, Y, Z
_INTERNAL_TO_LABEL_ARGORDER = np.array([0, 1, 3, 2], dtype=np.int64)


# ----------------------------------------------------------------------
# CSV output
# ----------------------------------------------------------------------

def csv_header(k: int) -> list[str]:
    cols = ["p", "q", "shots", "p_success", "fidelity_joint"]
    cols += [f"fidelity_reduced_{i + 1}" for i in range(k)]
    for i in range(k):
        cols += [f"xx_{i + 1}", f"yy_{i + 1}", f"zz_{i + 1}"]
    cols += ["stderr_p_success", "stderr_fidelity_joint"]
    cols += [f"stderr_fidelity_reduced_{i + 1}" for i in range(k)]
    for i in range(k):
        cols += [f"stderr_xx_{i + 1}", f"stderr_yy_{i + 1}", f"stderr_zz_{i + 1}"]
    return cols


def csv_row(p: float, q: float, res: SimResult, k: int) -> list:
    row = [repr(p), repr(q), res.shots if res.shots is not None else 0,
           repr(res.p_success), repr(res.fidelity_joint)]
    row += [repr(f) for f in res.fidelity_reduced]
    for triple in res.correlators:
        row += [repr(c) for c in triple]
    row += [repr(res.stderr_p_success), repr(res.stderr_fidelity_joint)]
    se_red = res.stderr_fidelity_reduced or tuple(0.0 for _ in range(k))
    row += [repr(f) for f in se_red]
    se_corr = res.stderr_correlators or tuple((0.0,) * 3 for _ in range(k))
    for triple in se_corr:
        row += [repr(c) for c in triple]
    return row


def write_sim_csv(fh, records, k: int):
    """records: iterable of (p, q, SimResult)."""
    fh.write(",".join(csv_header(k)) + "\n")
    for p, q, res in records:
        fh.write(",".join(str(v) for v in csv_row(p, q, res, k)) + "\n")
