"""Syndrome-to-correction maps.

Two decoders ship as verbatim lookup tables for the built-in distance-3
circuits; :func:`generate_ml_decoder` builds a maximum-likelihood table for
any small compiled circuit by exhaustive error enumeration.  Corrections
are logical Paulis on the kept pairs; unlisted syndromes decode to
identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .compiler import CompiledCircuit
from .stabilizer import _LABELS

# label index (I,X,Y,Z) <-> (x + 2z) bit pattern; the map is an involution
_LABEL_TO_BITS = np.array([0, 1, 3, 2], dtype=np.uint64)


@dataclass(frozen=True)
class DecoderTable:
    """Syndrome lookup table; ``entries`` holds non-identity corrections only.

    Keys are syndrome bit strings in measurement order (first measured
    qubit first); values are correction labels over the kept pairs.
    """

    r: int
    k: int
    entries: MappingProxyType

    @staticmethod
    def from_dict(r: int, k: int, entries: dict[str, str]) -> "DecoderTable":
        clean = {}
        for s, c in entries.items():
            if len(s) != r or any(b not in "01" for b in s):
                raise ValueError(f"bad syndrome key {s!r}")
            if len(c) != k or any(ch not in _LABELS for ch in c):
                raise ValueError(f"bad correction {c!r}")
            if c != "I" * k:
                clean[s] = c
        return DecoderTable(r, k, MappingProxyType(dict(sorted(clean.items()))))

    def correction(self, syndrome) -> str:
        """Correction label for a syndrome given as bit string or bit tuple."""
        if not isinstance(syndrome, str):
            syndrome = "".join(str(int(b)) for b in syndrome)
        if len(syndrome) != self.r:
            raise ValueError(f"syndrome needs {self.r} bits")
        return self.entries.get(syndrome, "I" * self.k)

    def dense_class_table(self) -> np.ndarray:
        """(2^r,) internal correction class index per syndrome integer.

        Syndrome integers put the first measured qubit in bit 0; class
        indices pack (x + 2z) per pair, pair 0 in the low bits.
        """
        table = np.zeros(1 << self.r, dtype=np.uint64)
        for s, c in self.entries.items():
            idx = sum(1 << i for i, b in enumerate(s) if b == "1")
            cls = np.uint64(0)
            for j, ch in enumerate(c):
                cls |= _LABEL_TO_BITS[_LABELS.index(ch)] << np.uint64(2 * j)
            table[idx] = cls
        return table

    def to_json(self) -> str:
        return json.dumps(
            {"syndrome_bits": self.r,
             "entries": [{"s": s, "c": c} for s, c in self.entries.items()]},
            indent=2)


# Corrections on the kept pair of the five-qubit one-way protocol,
# syndrome bits ordered by measured qubit.
_TABLE_513 = {
    "0011": "Y", "0101": "Z", "0110": "Y", "0111": "Z",
    "1001": "Z", "1010": "Z", "1011": "Y", "1100": "Y",
    "1101": "Y", "1110": "Z", "1111": "X",
}

# Corrections for the seven-qubit one-way protocol.  Syndromes beyond the
# 21 single-qubit errors are assigned to the most probable two-qubit
# errors at small input noise.
_TABLE_713 = {
    "000011": "X", "000101": "X", "000110": "X", "001011": "X",
    "001100": "Y", "001101": "Z", "001110": "Z", "010010": "Y",
    "010011": "X", "010100": "Y", "010101": "X", "010110": "Z",
    "010111": "Y", "011000": "Z", "011001": "X", "011010": "Z",
    "011100": "Z", "011110": "Y", "011111": "Z", "100001": "Y",
    "100011": "X", "100100": "Y", "100101": "Z", "100110": "X",
    "100111": "Y", "101000": "Z", "101001": "Z", "101010": "X",
    "101100": "Z", "101101": "Y", "101111": "Z", "110000": "Z",
    "110001": "X", "110010": "X", "110011": "Y", "110100": "Z",
    "110101": "Y", "110110": "Y", "110111": "Z", "111011": "Z",
    "111101": "Z", "111110": "Z", "111111": "Y",
}


def table_513() -> DecoderTable:
    """The 11 non-identity corrections of the five-qubit protocol."""
    return DecoderTable.from_dict(4, 1, dict(_TABLE_513))


def table_713() -> DecoderTable:
    """The 43 non-identity corrections of the seven-qubit protocol."""
    return DecoderTable.from_dict(6, 1, dict(_TABLE_713))


def generate_ml_decoder(circ: CompiledCircuit, p_prior: float = 0.01,
                        cap: int = 10) -> DecoderTable:
    """Maximum-likelihood table for a compiled circuit.

    For each syndrome the correction is the logical class carrying maximal
    total probability under i.i.d. per-qubit error weights
    {1 - 3p/4, p/4, p/4, p/4}; ties break toward the lexicographically
    smallest class label (I < X < Y < Z per pair, leftmost pair first).
    Tables must be regenerated when ``p_prior`` changes; class ordering can
    flip with it.

    Raises
    ------
    ValueError
        If the qubit count exceeds the enumeration cap.
    """
    n, k = circ.n, circ.k
    if n > cap:
        raise ValueError(f"ML decoder enumeration capped at n <= {cap}")
    r = n - k
    a = 1.0 - 0.75 * p_prior
    b = 0.25 * p_prior

    from .stabilizer import _XBIT, _ZBIT

    total = 4 ** n
    codes = np.arange(total, dtype=np.int64)
    digits = np.empty((total, n), dtype=np.uint8)
    for q in range(n):
        digits[:, q] = (codes >> (2 * q)) & 3
    weight = (digits != 0).sum(axis=1)
    prob = (a ** (n - weight)) * (b ** weight)

    vec = np.concatenate([_XBIT[digits], _ZBIT[digits]], axis=1)
    img = vec.dot(circ.symplectic_matrix()) & 1

    syn_bits = img[:, : r]
    synd = syn_bits.dot(1 << np.arange(r, dtype=np.int64))
    kept_x = img[:, r:n].astype(np.int64)
    kept_z = img[:, n + r: 2 * n].astype(np.int64)
    cls = ((kept_x + 2 * kept_z) << (2 * np.arange(k, dtype=np.int64))).sum(axis=1)

    mass = np.zeros((1 << r, 4 ** k))
    np.add.at(mass, (synd, cls), prob)

    # Rank classes so argmax tie-breaks toward the smallest label string.
    ranks = _label_ranks(k)
    order = np.argsort(ranks, kind="stable")
    best = order[np.argmax(mass[:, order], axis=1)]

    entries = {}
    for s in range(1 << r):
        label = _class_label(int(best[s]), k)
        if label != "I" * k:
            key = "".join("1" if (s >> i) & 1 else "0" for i in range(r))
            entries[key] = label
    return DecoderTable.from_dict(r, k, entries)


def _label_ranks(k: int) -> np.ndarray:
    """Lexicographic rank of each internal class index's label string."""
    idx = np.arange(4 ** k, dtype=np.int64)
    rank = np.zeros(4 ** k, dtype=np.int64)
    for j in range(k):
        bits = (idx >> (2 * j)) & 3
        labels = _BITS_TO_LABEL_INV[bits]
        rank += labels.astype(np.int64) << (2 * (k - 1 - j))
    return rank


def _class_label(cls: int, k: int) -> str:
    out = []
    for j in range(k):
        bits = (cls >> (2 * j)) & 3
        out.append(_LABELS[int(_BITS_TO_LABEL_INV[bits])])
    return "".join(out)


# (x + 2z) -> label index (I=0, X=1, Y=2, Z=3)
_BITS_TO_LABEL_INV = np.array([0, 1, 3, 2], dtype=np.uint8)
