"""Synthesis of the two-species gate sequence from a standard form.

The decoding unitary is compiled as

    U_dec = H(measured) . U2 . H(kept) . U1

where U1 and U2 are CZ lists read off the standard-form blocks: U1 pairs
the X-pivot qubits with the rest through [J1 J2]; U2 pairs measured with
kept qubits through [L2; K2] and adds the simple-graph CZs of Gamma0 inside
the X-pivot set.  The species-mixing Hadamard/phase layer of the full
textbook reduction is dropped; the circuit therefore implements a
single-qubit-Clifford deformation of the input code with identical
error-detection structure, and that deformation is recorded on the
compiled circuit (``h1_targets``, ``gamma``).

Qubit indices in a compiled circuit are standard-form positions: measured
qubits come first (0..n-k-1), kept qubits last.  Physical labels are
recovered through ``source_form.perm``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .f2 import BitMatrix, rank_f2
from .stabilizer import PauliString, StandardForm, Tableau


# ----------------------------------------------------------------------
# Gate program
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class GlobalH:
    targets: tuple[int, ...]


@dataclass(frozen=True)
class CZLayer:
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for i, j in self.pairs:
            if i == j:
                raise ValueError(f"CZ pair ({i},{i}) is a self-loop")
            if i in seen or j in seen:
                raise ValueError("CZ layer pairs must be vertex-disjoint")
            seen.update((i, j))


@dataclass(frozen=True)
class MeasureZ:
    targets: tuple[int, ...]


@dataclass(frozen=True)
class GateProgram:
    """Ordered instruction list; first instruction acts first."""

    instructions: tuple


# ----------------------------------------------------------------------
# Compiled circuit
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CompiledCircuit:
    n: int
    k: int
    v_s: tuple[int, ...]
    v_l: tuple[int, ...]
    u1_edges: tuple[tuple[int, int], ...]
    u2_edges: tuple[tuple[int, int], ...]
    h2_targets: tuple[int, ...]
    h3_targets: tuple[int, ...]
    gamma0: BitMatrix
    gamma: tuple[int, ...]
    h1_targets: tuple[int, ...]
    source_form: StandardForm

    @property
    def r_s(self) -> int:
        return self.n - self.k

    @property
    def cz_count(self) -> int:
        return len(self.u1_edges) + len(self.u2_edges)

    def op_sequence(self) -> list[tuple]:
        """Flat gate list in execution order: ('cz', i, j) and ('h', q)."""
        ops: list[tuple] = [("cz", i, j) for i, j in self.u1_edges]
        ops += [("h", q) for q in self.h2_targets]
        ops += [("cz", i, j) for i, j in self.u2_edges]
        ops += [("h", q) for q in self.h3_targets]
        return ops

    def symplectic_matrix(self) -> np.ndarray:
        """(2n, 2n) matrix C with row-vector action v -> v @ C over GF(2)."""
        return _ops_symplectic(self.n, self.op_sequence())

    def to_gate_program(self, cz_layers=None) -> GateProgram:
        """Instruction list; CZs grouped per ``cz_layers`` when given.

        ``cz_layers`` must split ``u1_edges`` and ``u2_edges`` separately
        (U1 layers first), e.g. from scheduling each block on its own.
        Defaults to one CZ per layer.
        """
        if cz_layers is None:
            u1_layers = [[e] for e in self.u1_edges]
            u2_layers = [[e] for e in self.u2_edges]
        else:
            u1_layers, u2_layers = cz_layers
        instr: list = [CZLayer(tuple(layer)) for layer in u1_layers if layer]
        instr.append(GlobalH(self.h2_targets))
        instr += [CZLayer(tuple(layer)) for layer in u2_layers if layer]
        instr.append(GlobalH(self.h3_targets))
        instr.append(MeasureZ(self.v_s))
        return GateProgram(tuple(instr))

    def to_json(self) -> str:
        doc = {
            "n": self.n,
            "k": self.k,
            "v_s": list(self.v_s),
            "v_l": list(self.v_l),
            "u1": [list(e) for e in self.u1_edges],
            "u2": [list(e) for e in self.u2_edges],
            "h_blocks": [list(self.h2_targets), list(self.h3_targets)],
        }
        return json.dumps(doc, indent=2)


def compile_circuit(sf: StandardForm) -> CompiledCircuit:
    """Build the CZ/Hadamard decoding circuit from a standard form.

    Raises
    ------
    ValueError
        If the standard form violates its block constraints (asymmetric
        Gamma, commutation residual).
    """
    n, k, rx, rz = sf.n, sf.k, sf.r_x, sf.r_z
    r_s = rx + rz
    j1 = sf.J1.to_array()
    j2 = sf.J2.to_array()
    l2 = sf.L2.to_array()
    k2 = sf.K2.to_array()

    gamma_full = sf.gamma()
    if not np.array_equal(gamma_full, gamma_full.T):
        raise ValueError("malformed standard form: Gamma not symmetric")
    resid = (sf.K1.to_array().astype(np.int64) + j1.T.astype(np.int64)
             + k2.astype(np.int64) @ j2.T.astype(np.int64)) & 1
    if resid.any():
        raise ValueError("malformed standard form: commutation residual nonzero")
    gamma_diag = tuple(int(b) for b in np.diag(gamma_full))
    gamma0 = gamma_full.copy()
    np.fill_diagonal(gamma0, 0)

    u1 = []
    for i in range(rx):
        for j in range(rz):
            if j1[i, j]:
                u1.append((i, rx + j))
        for j in range(k):
            if j2[i, j]:
                u1.append((i, r_s + j))
    u1.sort()

    u2 = []
    for i in range(rx):
        for j in range(k):
            if l2[i, j]:
                u2.append((i, r_s + j))
    for i in range(rz):
        for j in range(k):
            if k2[i, j]:
                u2.append((rx + i, r_s + j))
    for i in range(rx):
        for j in range(i + 1, rx):
            if gamma0[i, j]:
                u2.append((i, j))
    u2.sort()

    return CompiledCircuit(
        n=n, k=k,
        v_s=tuple(range(r_s)),
        v_l=tuple(range(r_s, n)),
        u1_edges=tuple(u1),
        u2_edges=tuple(u2),
        h2_targets=tuple(range(r_s, n)),
        h3_targets=tuple(range(r_s)),
        gamma0=BitMatrix(gamma0),
        gamma=gamma_diag,
        h1_targets=tuple(range(rx, n)),
        source_form=sf,
    )


# ----------------------------------------------------------------------
# Symplectic propagation
# ----------------------------------------------------------------------

def _ops_symplectic(n: int, ops) -> np.ndarray:
    """Right-action matrix of a gate list: columns updated gate by gate."""
    m = np.eye(2 * n, dtype=np.uint8)
    for op in ops:
        if op[0] == "cz":
            _, i, j = op
            m[:, n + i] ^= m[:, j]
            m[:, n + j] ^= m[:, i]
        elif op[0] == "h":
            _, q = op
            m[:, [q, n + q]] = m[:, [n + q, q]]
        elif op[0] == "p":
            _, q = op
            m[:, n + q] ^= m[:, q]
        else:
            raise ValueError(f"unknown op {op!r}")
    return m


def cz_set_symplectic(n: int, edges) -> BitMatrix:
    """Symplectic block matrix [[I, A], [0, I]] of a CZ list.

    A is the (symmetric) adjacency matrix of the CZ pairs; this is the
    assembled block form of a whole CZ stage.
    """
    a = np.zeros((n, n), dtype=np.uint8)
    for i, j in edges:
        if i == j:
            raise ValueError("CZ self-loop")
        a[i, j] ^= 1
        a[j, i] ^= 1
    m = np.eye(2 * n, dtype=np.uint8)
    m[:n, n:] = a
    return BitMatrix(m)


def propagate(circ: CompiledCircuit, p: PauliString) -> PauliString:
    """Image of a Pauli under conjugation by the compiled circuit."""
    if p.n != circ.n:
        raise ValueError("Pauli length does not match circuit")
    v = np.concatenate([p.x, p.z]).astype(np.uint8)
    out = (v.astype(np.int64) @ circ.symplectic_matrix().astype(np.int64)) & 1
    n = circ.n
    return PauliString(out[:n].astype(np.uint8), out[n:].astype(np.uint8))


def propagate_program(n: int, program: GateProgram, p: PauliString) -> PauliString:
    """Propagate through a generic gate program (measurements ignored)."""
    ops = []
    for ins in program.instructions:
        if isinstance(ins, GlobalH):
            ops += [("h", q) for q in ins.targets]
        elif isinstance(ins, CZLayer):
            ops += [("cz", i, j) for i, j in ins.pairs]
        elif isinstance(ins, MeasureZ):
            continue
        else:
            raise ValueError(f"unknown instruction {ins!r}")
    v = np.concatenate([p.x, p.z]).astype(np.uint8)
    out = (v.astype(np.int64) @ _ops_symplectic(n, ops).astype(np.int64)) & 1
    return PauliString(out[:n].astype(np.uint8), out[n:].astype(np.uint8))


def deform_rows(circ: CompiledCircuit, m: np.ndarray) -> np.ndarray:
    """Apply the omitted single-qubit layer (H on h1_targets, P on the
    Gamma diagonal) to tableau rows in circuit coordinates."""
    n = circ.n
    out = m.copy()
    for q in circ.h1_targets:
        out[:, [q, n + q]] = out[:, [n + q, q]]
    for i, g in enumerate(circ.gamma):
        if g:
            out[:, n + i] ^= out[:, i]
    return out


def verify_encoding(circ: CompiledCircuit, t: Tableau) -> bool:
    """Check that the circuit turns every stabilizer into a Z on V_S.

    The input tableau is taken in physical coordinates; it is permuted and
    deformed exactly as the compiler did, then propagated.  Passing a
    tableau that is not the circuit's source code returns False.
    """
    if t.n != circ.n:
        return False
    if t.r != circ.r_s:
        return False
    if t.r == 0:
        return True
    perm = np.asarray(circ.source_form.perm, dtype=np.intp)
    cols = np.concatenate([perm, circ.n + perm])
    m = deform_rows(circ, t.matrix[:, cols])
    img = (m.astype(np.int64) @ circ.symplectic_matrix().astype(np.int64)) & 1
    n, r_s = circ.n, circ.r_s
    if img[:, :n].any():
        return False
    if img[:, n + r_s:].any():
        return False
    return rank_f2(BitMatrix(img[:, n:n + r_s].astype(np.uint8))) == r_s


def encoded_stabilizers(circ: CompiledCircuit) -> list[PauliString]:
    """Images of the measured-qubit Z operators under the encoding circuit.

    These are the operators whose two-sided measurement the protocol
    realizes; row i corresponds to measured qubit i.
    """
    n = circ.n
    # Encoding = inverse circuit; H and CZ are involutions, so reverse order.
    ops = list(reversed(circ.op_sequence()))
    m = _ops_symplectic(n, ops)
    out = []
    for q in circ.v_s:
        v = np.zeros(2 * n, dtype=np.uint8)
        v[n + q] = 1
        img = (v.astype(np.int64) @ m.astype(np.int64)) & 1
        out.append(PauliString(img[:n].astype(np.uint8), img[n:].astype(np.uint8)))
    return out


def swap_sequence(i: int, j: int) -> GateProgram:
    """Three-CZ SWAP between a data qubit i and an opposite-species qubit j.

    Emitted at the Pauli-propagation level: the species-global Hadamards
    reduce to H on the two participating qubits.

    Raises
    ------
    ValueError
        If i == j (a same-species/self pairing has no CZ partner).
    """
    if i == j:
        raise ValueError("swap needs two distinct qubits on opposite species")
    pair = ((i, j),)
    return GateProgram((
        GlobalH((i,)),
        CZLayer(pair),
        GlobalH((i, j)),
        CZLayer(pair),
        GlobalH((i, j)),
        CZLayer(pair),
        GlobalH((i,)),
    ))
