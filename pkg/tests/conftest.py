"""Shared test oracles, independent of the library's internal paths."""

from __future__ import annotations

import numpy as np
import pytest

from dsepp import compile_circuit, preset, standard_form

# Phase-free conjugation tables (independent of the symplectic-matrix path).
H_MAP = {"I": "I", "X": "Z", "Y": "Y", "Z": "X"}
CZ_MAP = {
    "II": "II", "XI": "XZ", "YI": "YZ", "ZI": "ZI",
    "IX": "ZX", "XX": "YY", "YX": "XY", "ZX": "IX",
    "IZ": "IZ", "XZ": "XI", "YZ": "YI", "ZZ": "ZZ",
    "IY": "ZY", "XY": "YX", "YY": "XX", "ZY": "IY",
}


def oracle_propagate(ops, label: str) -> str:
    """Conjugate a Pauli label through ('h', q) / ('cz', i, j) ops by table
    lookup."""
    chars = list(label)
    for op in ops:
        if op[0] == "h":
            q = op[1]
            chars[q] = H_MAP[chars[q]]
        else:
            _, i, j = op
            new = CZ_MAP[chars[i] + chars[j]]
            chars[i], chars[j] = new[0], new[1]
    return "".join(chars)


def oracle_rank_random_pivot(m: np.ndarray, rng: np.random.Generator) -> int:
    """GF(2) rank by elimination with randomly chosen pivots."""
    a = np.array(m, dtype=np.uint8) % 2
    rows, cols = a.shape
    col_order = list(rng.permutation(cols))
    rank = 0
    for col in col_order:
        hits = [r for r in range(rank, rows) if a[r, col]]
        if not hits:
            continue
        src = hits[int(rng.integers(len(hits)))]
        a[[rank, src]] = a[[src, rank]]
        for r in range(rows):
            if r != rank and a[r, col]:
                a[r] ^= a[rank]
        rank += 1
        if rank == rows:
            break
    return rank


# Label-indexed one-sided class weights for the isotropic pair state.
def isotropic_weights(p: float) -> np.ndarray:
    return np.array([1 - 0.75 * p, 0.25 * p, 0.25 * p, 0.25 * p])


def brute_force_iceberg(n: int, p: float) -> tuple[float, float]:
    """(p_success, joint fidelity) of the textbook X^n/Z^n protocol by
    direct enumeration of one-sided Pauli patterns."""
    w = isotropic_weights(p)
    xbit = np.array([0, 1, 1, 0])
    zbit = np.array([0, 0, 1, 1])
    p_s = 0.0
    p_good = 0.0
    for code in range(4 ** n):
        digs = [(code >> (2 * q)) & 3 for q in range(n)]
        x = sum(xbit[d] for d in digs) % 2
        z = sum(zbit[d] for d in digs) % 2
        if x or z:
            continue
        prob = float(np.prod(w[digs]))
        p_s += prob
        if len(set(digs)) == 1:  # I^n or X^n or Y^n or Z^n: the stabilizer group
            p_good += prob
    return p_s, p_good / p_s


@pytest.fixture(scope="session")
def circuits():
    """Compiled circuits for the three benchmark presets."""
    out = {}
    for name in ("iceberg4", "iceberg6", "iceberg8", "five_one_three", "steane"):
        cp = preset(name)
        out[name] = compile_circuit(standard_form(cp.tableau))
    return out
