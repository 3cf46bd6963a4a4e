"""Pauli strings, stabilizer tableaux, code presets and the standard form.

Pauli operators are phase-free: a length-n Pauli is a pair of binary rows
(x, z) with X at positions where x=1, z=0; Z where x=0, z=1; Y where both
are 1.  Protocol analysis here runs on Bell-diagonal mixtures where global
phases and Pauli frames are classical bookkeeping, so no sign row is kept.

A :class:`Tableau` is a set of independent, mutually commuting generators
in binary symplectic form [T_X | T_Z].  :func:`standard_form` reduces a
tableau, by row operations and a qubit permutation, to the block shape

    [ I  J1 J2 | L1 0  L2 ]
    [ 0  0  0  | K1 I  K2 ]

from which the two CZ blocks of the hardware circuit are read off (see
:mod:`dsepp.compiler`).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .f2 import BitMatrix, rank_f2

_LABELS = "IXYZ"
# (x, z) bit pairs for I, X, Y, Z.
_XBIT = np.array([0, 1, 1, 0], dtype=np.uint8)
_ZBIT = np.array([0, 0, 1, 1], dtype=np.uint8)
# label index from (x, z): [x][z]
_LABEL_FROM_BITS = np.array([[0, 3], [1, 2]], dtype=np.uint8)

DETECTED = "DETECTED"


class PauliString:
    """Phase-free n-qubit Pauli operator as paired X/Z bit rows."""

    __slots__ = ("x", "z")

    def __init__(self, x, z):
        x = np.array(x, dtype=np.uint8).reshape(-1)
        z = np.array(z, dtype=np.uint8).reshape(-1)
        if x.shape != z.shape:
            raise ValueError("x and z rows must have equal length")
        if (x.size and x.max() > 1) or (z.size and z.max() > 1):
            raise ValueError("bit rows must be 0/1")
        x.setflags(write=False)
        z.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)

    def __setattr__(self, name, value):
        raise AttributeError("PauliString is immutable")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        try:
            idx = [_LABELS.index(c) for c in label.strip().upper()]
        except ValueError:
            raise ValueError(f"invalid Pauli label {label!r}: only I, X, Y, Z allowed")
        idx = np.array(idx, dtype=np.intp) if idx else np.zeros(0, dtype=np.intp)
        return cls(_XBIT[idx], _ZBIT[idx])

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def label(self) -> str:
        return "".join(_LABELS[_LABEL_FROM_BITS[xi, zi]] for xi, zi in zip(self.x, self.z))

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x | self.z))

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("length mismatch")
        return PauliString(self.x ^ other.x, self.z ^ other.z)

    def __eq__(self, other):
        if not isinstance(other, PauliString):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.z, other.z)

    def __hash__(self):
        return hash((self.x.tobytes(), self.z.tobytes()))

    def __repr__(self):
        return f"PauliString({self.label!r})"


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic inner product a.x·b.z + a.z·b.x vanishes.

    Raises
    ------
    ValueError
        If the operators act on different qubit counts.
    """
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")
    return (int(a.x @ b.z) + int(a.z @ b.x)) % 2 == 0


class Tableau:
    """Independent commuting stabilizer generators in [T_X | T_Z] form."""

    __slots__ = ("n", "_m")

    def __init__(self, n: int, rows):
        m = np.zeros((len(rows), 2 * n), dtype=np.uint8)
        for i, p in enumerate(rows):
            if p.n != n:
                raise ValueError(f"row {i} has {p.n} qubits, expected {n}")
            m[i, :n] = p.x
            m[i, n:] = p.z
        m.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_m", m)
        self._validate()

    def __setattr__(self, name, value):
        raise AttributeError("Tableau is immutable")

    def _validate(self):
        r = self.r
        if r > self.n:
            raise ValueError(f"{r} generators on {self.n} qubits cannot be independent")
        if rank_f2(BitMatrix(self._m)) != r:
            raise ValueError("dependent stabilizer rows")
        tx, tz = self.x_block, self.z_block
        comm = (tx.astype(np.int64) @ tz.T + tz.astype(np.int64) @ tx.T) & 1
        if comm.any():
            raise ValueError("non-commuting stabilizer rows")

    @classmethod
    def from_labels(cls, labels) -> "Tableau":
        rows = [PauliString.from_label(s) for s in labels]
        if not rows:
            raise ValueError("empty tableau needs an explicit qubit count")
        return cls(rows[0].n, rows)

    @classmethod
    def from_matrix(cls, n: int, m) -> "Tableau":
        m = np.asarray(m, dtype=np.uint8)
        rows = [PauliString(m[i, :n], m[i, n:]) for i in range(m.shape[0])]
        return cls(n, rows)

    @property
    def r(self) -> int:
        return self._m.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Read-only (r, 2n) view, X block then Z block."""
        return self._m

    @property
    def x_block(self) -> np.ndarray:
        return self._m[:, : self.n]

    @property
    def z_block(self) -> np.ndarray:
        return self._m[:, self.n:]

    def row(self, i: int) -> PauliString:
        return PauliString(self._m[i, : self.n], self._m[i, self.n:])

    def rows(self):
        return [self.row(i) for i in range(self.r)]

    def __eq__(self, other):
        if not isinstance(other, Tableau):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._m, other._m)

    def __repr__(self):
        return f"Tableau({[p.label for p in self.rows()]!r})"


def parse_stabilizers(text: str) -> Tableau:
    """Parse the one-Pauli-per-line text format (alphabet I, X, Y, Z).

    Blank lines are skipped; any other character is rejected.
    """
    labels = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        if any(c not in _LABELS for c in s.upper()):
            raise ValueError(f"line {lineno}: invalid character in {s!r}")
        labels.append(s.upper())
    if not labels:
        raise ValueError("no stabilizers found")
    if len({len(s) for s in labels}) != 1:
        raise ValueError("all stabilizer lines must have equal length")
    return Tableau.from_labels(labels)


def format_stabilizers(t: Tableau) -> str:
    return "\n".join(p.label for p in t.rows()) + "\n"


# ----------------------------------------------------------------------
# Standard form
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class StandardForm:
    """Block decomposition of a stabilizer tableau.

    ``perm[i]`` is the original qubit now at position i (the relocation step);
    ``row_ops`` is the invertible row transformation taking the permuted
    input tableau to the assembled standard form.  Block shapes:
    J1 (r_x, r_z), J2 and L2 (r_x, k), K1 (r_z, r_x), K2 (r_z, k),
    L1 (r_x, r_x), with r_x + r_z = n - k.
    """

    n: int
    k: int
    r_x: int
    r_z: int
    J1: BitMatrix
    J2: BitMatrix
    L1: BitMatrix
    L2: BitMatrix
    K1: BitMatrix
    K2: BitMatrix
    perm: tuple[int, ...]
    row_ops: BitMatrix

    @property
    def r_s(self) -> int:
        return self.r_x + self.r_z

    def assemble(self) -> np.ndarray:
        """Rebuild the (r_s, 2n) standard-form tableau matrix."""
        n, rx, rz, k = self.n, self.r_x, self.r_z, self.k
        m = np.zeros((rx + rz, 2 * n), dtype=np.uint8)
        m[:rx, :rx] = np.eye(rx, dtype=np.uint8)
        m[:rx, rx:rx + rz] = self.J1.to_array()
        m[:rx, rx + rz:n] = self.J2.to_array()
        m[:rx, n:n + rx] = self.L1.to_array()
        m[:rx, n + rx + rz:] = self.L2.to_array()
        m[rx:, n:n + rx] = self.K1.to_array()
        m[rx:, n + rx:n + rx + rz] = np.eye(rz, dtype=np.uint8)
        m[rx:, n + rx + rz:] = self.K2.to_array()
        return m

    def gamma(self) -> np.ndarray:
        """L1 + L2 @ J2.T over GF(2); symmetric for a valid form."""
        g = (self.L1.to_array().astype(np.int64)
             + self.L2.to_array().astype(np.int64) @ self.J2.to_array().T.astype(np.int64)) & 1
        return g.astype(np.uint8)


def _apply_qubit_perm(m: np.ndarray, n: int, perm) -> np.ndarray:
    perm = np.asarray(perm, dtype=np.intp)
    cols = np.concatenate([perm, n + perm])
    return m[:, cols]


def _partial_rref(m: np.ndarray, ops: np.ndarray, cols: range, row_start: int):
    """RREF over the given pivot columns, reducing all rows; tracks ops."""
    rows = m.shape[0]
    pivots = []
    pr = row_start
    for col in cols:
        if pr >= rows:
            break
        hits = np.flatnonzero(m[pr:, col])
        if hits.size == 0:
            continue
        src = pr + int(hits[0])
        if src != pr:
            m[[pr, src]] = m[[src, pr]]
            ops[[pr, src]] = ops[[src, pr]]
        for t in np.flatnonzero(m[:, col]):
            if t != pr:
                m[t] ^= m[pr]
                ops[t] ^= ops[pr]
        pivots.append(col)
        pr += 1
    return pivots


def standard_form(t: Tableau) -> StandardForm:
    """Reduce a tableau to the standard block form.

    Deterministic for a fixed input: pivot columns are chosen greedily
    left-to-right, first over the X block, then over the residual Z block,
    and moved to the front while keeping the remaining columns in order.

    Raises
    ------
    ValueError
        If rows are dependent or non-commuting (checked at Tableau
        construction) or the reduction cannot complete.
    """
    n, r_s = t.n, t.r
    m = t.matrix.copy()
    ops = np.eye(r_s, dtype=np.uint8)

    # Phase A: pivots in the X block.
    px = _partial_rref(m, ops, range(n), 0)
    r_x = len(px)
    r_z = r_s - r_x
    k = n - r_s
    perm_a = px + [j for j in range(n) if j not in px]
    m = _apply_qubit_perm(m, n, perm_a)

    # Phase B: pivots in the residual Z block, restricted to qubits >= r_x.
    pz = _partial_rref(m, ops, range(n + r_x, 2 * n), r_x)
    if len(pz) != r_z:
        raise ValueError("tableau admits no standard form (residual Z block rank-deficient)")
    pzq = [c - n for c in pz]
    perm_b = list(range(r_x)) + pzq + [j for j in range(r_x, n) if j not in pzq]
    m = _apply_qubit_perm(m, n, perm_b)
    perm = tuple(perm_a[j] for j in perm_b)

    rx, rz = r_x, r_z
    if not np.array_equal(m[:rx, :rx], np.eye(rx, dtype=np.uint8)):
        raise ValueError("standard-form reduction failed (X identity block)")
    if m[rx:, :n].any() or m[:rx, n + rx:n + rx + rz].any():
        raise ValueError("standard-form reduction failed (zero blocks)")
    sf = StandardForm(
        n=n, k=k, r_x=rx, r_z=rz,
        J1=BitMatrix(m[:rx, rx:rx + rz]),
        J2=BitMatrix(m[:rx, rx + rz:n]),
        L1=BitMatrix(m[:rx, n:n + rx]),
        L2=BitMatrix(m[:rx, n + rx + rz:]),
        K1=BitMatrix(m[rx:, n:n + rx]),
        K2=BitMatrix(m[rx:, n + rx + rz:]),
        perm=perm,
        row_ops=BitMatrix(ops),
    )
    _check_commutation_conditions(sf)
    return sf


def _check_commutation_conditions(sf: StandardForm):
    g = sf.gamma()
    if not np.array_equal(g, g.T):
        raise ValueError("L1 + L2 J2^T is not symmetric")
    resid = (sf.K1.to_array().astype(np.int64)
             + sf.J1.to_array().T.astype(np.int64)
             + sf.K2.to_array().astype(np.int64) @ sf.J2.to_array().T.astype(np.int64)) & 1
    if resid.any():
        raise ValueError("K1 + J1^T + K2 J2^T != 0")


def logical_class(sf: StandardForm, e: PauliString) -> str:
    """Logical class of a physical Pauli under the compiled circuit.

    Returns ``DETECTED`` if the propagated error flips any measured-qubit
    outcome; otherwise the residual Pauli label on the kept qubits
    (a k-character string over I, X, Y, Z).
    """
    from .compiler import compile_circuit, propagate

    if e.n != sf.n:
        raise ValueError("error length does not match code length")
    circ = compile_circuit(sf)
    perm = np.asarray(sf.perm, dtype=np.intp)
    e_perm = PauliString(e.x[perm], e.z[perm])
    img = propagate(circ, e_perm)
    r_s = sf.r_s
    if img.x[:r_s].any():
        return DETECTED
    kept_x, kept_z = img.x[r_s:], img.z[r_s:]
    return "".join(_LABELS[_LABEL_FROM_BITS[xi, zi]] for xi, zi in zip(kept_x, kept_z))


# ----------------------------------------------------------------------
# Code presets
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CodePreset:
    name: str
    tableau: Tableau
    n: int
    k: int
    d: int


def iceberg_preset(n: int) -> CodePreset:
    """The [[n, n-2, 2]] code, stored in its hardware-circuit form.

    Generators are the alternating strings XZXZ... and ZXZX...; applying a
    Hadamard on every even position maps them to the textbook pair
    X...X, Z...Z.  This form compiles to the two-species circuit whose CZ
    gates split into two parallel layers at n = 4.
    """
    if n < 4 or n % 2 != 0:
        raise ValueError("iceberg code needs even n >= 4")
    a = "".join("XZ"[i % 2] for i in range(n))
    b = "".join("ZX"[i % 2] for i in range(n))
    return CodePreset(f"iceberg{n}", Tableau.from_labels([a, b]), n, n - 2, 2)


def five_one_three_preset() -> CodePreset:
    """The [[5,1,3]] code in its hardware-circuit form.

    Conjugating these generators by a Hadamard on qubit 5 gives the
    generators whose products recover the textbook cyclic set; the compiled
    circuit encodes measured-qubit Z operators into exactly that cyclic
    five-qubit code.
    """
    labels = ["YZIZY", "IXZZZ", "ZZXIZ", "ZIZYY"]
    return CodePreset("five_one_three", Tableau.from_labels(labels), 5, 1, 3)


# [7,4] Hamming parity checks with the identity columns leading; this column
# order makes the greedy standard form reproduce the hardware circuit's gate
# blocks directly.
_HAMMING_74 = np.array(
    [[1, 0, 0, 1, 0, 1, 1],
     [0, 1, 0, 1, 1, 0, 1],
     [0, 0, 1, 1, 1, 1, 0]], dtype=np.uint8)


def steane_preset() -> CodePreset:
    """The [[7,1,3]] CSS code built from [7,4] Hamming checks."""
    h = _HAMMING_74
    rows = []
    for r in h:
        rows.append(PauliString(r, np.zeros(7, dtype=np.uint8)))
    for r in h:
        rows.append(PauliString(np.zeros(7, dtype=np.uint8), r))
    return CodePreset("steane", Tableau(7, rows), 7, 1, 3)


def preset(name: str) -> CodePreset:
    """Look up a named preset: ``icebergN`` (even N >= 4), ``five_one_three``
    or ``steane``."""
    key = name.strip().lower()
    if key.startswith("iceberg"):
        tail = key[len("iceberg"):]
        if not tail.isdigit():
            raise ValueError(f"unknown preset {name!r} (use e.g. iceberg4)")
        return iceberg_preset(int(tail))
    if key in ("five_one_three", "513", "[[5,1,3]]"):
        return five_one_three_preset()
    if key in ("steane", "713", "[[7,1,3]]"):
        return steane_preset()
    raise ValueError(f"unknown preset {name!r}")


PRESET_NAMES = ("iceberg4", "iceberg6", "iceberg8", "five_one_three", "steane")


# ----------------------------------------------------------------------
# Test/tooling helpers: random codes and small-n distance
# ----------------------------------------------------------------------

def random_tableau(n: int, k: int, rng: np.random.Generator) -> Tableau:
    """Random valid tableau: symplectic transvections on a trivial tableau.

    Transvections preserve the symplectic form, so commutation and
    independence hold by construction.
    """
    r = n - k
    if not 0 <= r <= n:
        raise ValueError("need 0 <= n - k <= n")
    m = np.zeros((r, 2 * n), dtype=np.uint8)
    m[:, n:n + r] = np.eye(r, dtype=np.uint8)
    for _ in range(4 * n):
        v = rng.integers(0, 2, size=2 * n, dtype=np.uint8)
        if not v.any():
            continue
        # <row, v> = row · Omega · v  =  x·v_z + z·v_x
        sp = (m[:, :n] @ v[n:] + m[:, n:] @ v[:n]) & 1
        m ^= np.outer(sp, v).astype(np.uint8)
    return Tableau.from_matrix(n, m)


def _all_paulis(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(x, z) bit matrices of all 4^n Paulis; rows indexed by base-4 digits
    (digit order: qubit 0 least significant; digit -> I, X, Y, Z)."""
    total = 4 ** n
    codes = np.arange(total, dtype=np.int64)
    digits = np.empty((total, n), dtype=np.uint8)
    for q in range(n):
        digits[:, q] = (codes >> (2 * q)) & 3
    return _XBIT[digits], _ZBIT[digits]


def distance(t: Tableau, max_n: int = 12) -> int:
    """Code distance by exhaustive enumeration (small n only).

    Minimum weight over normalizer elements outside the stabilizer group.
    For k = 0 there are no logical operators; returns 0 by convention.
    """
    n, r = t.n, t.r
    if n > max_n:
        raise ValueError(f"distance enumeration capped at n <= {max_n}")
    if n == r:
        return 0
    from .f2 import _rref_array

    tx = t.x_block.astype(np.int64)
    tz = t.z_block.astype(np.int64)
    rref_m, _, piv = _rref_array(t.matrix)
    best = None
    chunk = 1 << 18
    total = 4 ** n
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        codes = np.arange(start, stop, dtype=np.int64)
        digits = np.empty((codes.size, n), dtype=np.uint8)
        for q in range(n):
            digits[:, q] = (codes >> (2 * q)) & 3
        ex, ez = _XBIT[digits], _ZBIT[digits]
        syn = (ex @ tz.T + ez @ tx.T) & 1
        norm = ~syn.any(axis=1)
        if not norm.any():
            continue
        vecs = np.concatenate([ex[norm], ez[norm]], axis=1)
        red = vecs.copy()
        for prow, pcol in enumerate(piv):
            mask = red[:, pcol] == 1
            red[mask] ^= rref_m[prow]
        outside = red.any(axis=1)
        if not outside.any():
            continue
        w = ((ex[norm] | ez[norm])[outside]).sum(axis=1)
        m = int(w.min())
        best = m if best is None else min(best, m)
    return 0 if best is None else best
