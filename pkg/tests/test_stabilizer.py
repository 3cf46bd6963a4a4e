import numpy as np
import pytest

from dsepp import (
    DETECTED,
    PauliString,
    Tableau,
    commutes,
    compile_circuit,
    distance,
    encoded_stabilizers,
    format_stabilizers,
    logical_class,
    parse_stabilizers,
    preset,
    random_tableau,
    standard_form,
)
from dsepp.f2 import BitMatrix, rank_f2


def P(label):
    return PauliString.from_label(label)


def test_pauli_label_roundtrip_and_weight():
    p = P("IXYZ")
    assert p.label == "IXYZ"
    assert p.n == 4
    assert p.weight == 3
    assert PauliString.identity(3).weight == 0
    assert (P("XY") * P("YX")).label == "ZZ"


def test_pauli_rejects_bad_labels():
    with pytest.raises(ValueError):
        P("XA")


def test_commutes_examples():
    assert commutes(P("XXZZ"), P("ZZXX"))          # the four-qubit stabilizer pair
    assert not commutes(P("X"), P("Z"))
    assert commutes(P("YZIZY"), P("IXZZX"))        # five-qubit generators
    with pytest.raises(ValueError):
        commutes(P("XX"), P("X"))


def test_commutes_is_symmetric():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        a = PauliString(rng.integers(0, 2, n, dtype=np.uint8),
                        rng.integers(0, 2, n, dtype=np.uint8))
        b = PauliString(rng.integers(0, 2, n, dtype=np.uint8),
                        rng.integers(0, 2, n, dtype=np.uint8))
        assert commutes(a, b) == commutes(b, a)


def test_tableau_rejects_invalid():
    with pytest.raises(ValueError):
        Tableau.from_labels(["XX", "ZI"])          # anticommuting
    with pytest.raises(ValueError):
        Tableau.from_labels(["XX", "XX"])          # dependent
    with pytest.raises(ValueError):
        Tableau.from_labels(["XI", "IX", "ZZ", "YY"])  # too many rows / dependent


def test_parser_roundtrip_and_rejection():
    t = parse_stabilizers("XXXX\nZZZZ\n")
    assert [r.label for r in t.rows()] == ["XXXX", "ZZZZ"]
    assert parse_stabilizers(format_stabilizers(t)) == t
    with pytest.raises(ValueError):
        parse_stabilizers("XX\nZA\n")
    with pytest.raises(ValueError):
        parse_stabilizers("\n\n")
    with pytest.raises(ValueError):
        parse_stabilizers("XX\nZZZ\n")


def test_standard_form_plain_iceberg_blocks():
    sf = standard_form(Tableau.from_labels(["XXXX", "ZZZZ"]))
    assert (sf.r_x, sf.r_z, sf.k) == (1, 1, 2)
    assert sf.J1 == BitMatrix([[1]])
    assert sf.J2 == BitMatrix([[1, 1]])
    assert sf.K1 == BitMatrix([[1]])
    assert sf.K2 == BitMatrix([[1, 1]])
    assert sf.L1.popcount() == 0 and sf.L2.popcount() == 0
    assert sf.perm == (0, 1, 2, 3)


def test_standard_form_five_one_three_blocks():
    sf = standard_form(preset("five_one_three").tableau)
    assert (sf.r_x, sf.r_z, sf.k) == (4, 0, 1)
    assert sf.J2 == BitMatrix([[1], [0], [0], [1]])
    assert sf.L2 == BitMatrix([[1], [1], [1], [1]])
    path = np.array([[0, 1, 0, 0], [1, 0, 1, 0], [0, 1, 0, 1], [0, 0, 1, 0]])
    assert np.array_equal(sf.gamma(), path)


def test_five_one_three_circuit_encodes_cyclic_code():
    # The circuit's encoded stabilizers are the displayed generator set; their
    # products recover four cyclic shifts of XZZXI (the textbook code).
    circ = compile_circuit(standard_form(preset("five_one_three").tableau))
    s = [p.label for p in encoded_stabilizers(circ)]
    assert s == ["YZIZY", "IXZZX", "ZZXIX", "ZIZYY"]
    s1, s2, s3, s4 = (PauliString.from_label(x) for x in s)
    derived = {s2.label, (s1 * s4).label, (s2 * s4).label, s3.label}
    shifts = {"XZZXI"[i:] + "XZZXI"[:i] for i in range(5)}
    assert derived < shifts and len(derived) == 4


def test_standard_form_steane_blocks():
    sf = standard_form(preset("steane").tableau)
    assert (sf.r_x, sf.r_z, sf.k) == (3, 3, 1)
    j = np.hstack([sf.J1.to_array(), sf.J2.to_array()])
    assert np.array_equal(j, [[1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]])
    assert sf.K2 == BitMatrix([[0], [1], [1]])
    assert sf.L1.popcount() == 0 and sf.L2.popcount() == 0


def _row_space_equal(a: np.ndarray, b: np.ndarray) -> bool:
    ra = rank_f2(BitMatrix(a))
    rb = rank_f2(BitMatrix(b))
    rab = rank_f2(BitMatrix(np.vstack([a, b])))
    return ra == rb == rab


@pytest.mark.parametrize("name", ["iceberg4", "iceberg6", "five_one_three", "steane"])
def test_standard_form_preserves_row_space_presets(name):
    t = preset(name).tableau
    sf = standard_form(t)
    perm = np.asarray(sf.perm)
    cols = np.concatenate([perm, t.n + perm])
    assert _row_space_equal(t.matrix[:, cols], sf.assemble())


def test_standard_form_preserves_row_space_random():
    rng = np.random.default_rng(42)
    for trial in range(200):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(0, n))
        t = random_tableau(n, k, rng)
        sf = standard_form(t)
        perm = np.asarray(sf.perm)
        cols = np.concatenate([perm, n + perm])
        assert _row_space_equal(t.matrix[:, cols], sf.assemble())
        # commutation conditions of the blocks
        g = sf.gamma()
        assert np.array_equal(g, g.T)
        resid = (sf.K1.to_array().astype(int) + sf.J1.to_array().T
                 + sf.K2.to_array().astype(int) @ sf.J2.to_array().T) % 2
        assert not resid.any()


def test_standard_form_deterministic():
    t = preset("steane").tableau
    a, b = standard_form(t), standard_form(t)
    assert a.perm == b.perm
    assert np.array_equal(a.assemble(), b.assemble())


def test_logical_class_examples():
    sf = standard_form(preset("iceberg4").tableau)
    assert logical_class(sf, PauliString.identity(4)) == "II"
    # any single-qubit error is detected by a distance-2 code
    assert logical_class(sf, P("XIII")) == DETECTED
    assert logical_class(sf, P("IIIZ")) == DETECTED
    # an undetected weight-2 error with a non-identity class
    assert logical_class(sf, P("XZII")) not in ("II", DETECTED)


@pytest.mark.parametrize("name,count", [("iceberg4", 4), ("iceberg6", 4),
                                        ("five_one_three", 16)])
def test_logical_class_partition(name, count):
    # Among undetected patterns, exactly |S| = 2^(n-k) map to the identity.
    cp = preset(name)
    sf = standard_form(cp.tableau)
    n, k = cp.n, cp.k
    identity = 0
    undetected = 0
    for code in range(4 ** n):
        digs = [(code >> (2 * q)) & 3 for q in range(n)]
        label = "".join("IXYZ"[d] for d in digs)
        cls = logical_class(sf, P(label))
        if cls == DETECTED:
            continue
        undetected += 1
        if cls == "I" * k:
            identity += 1
    assert identity == 2 ** (n - k)
    assert undetected == 4 ** n // 2 ** (n - k)


@pytest.mark.parametrize("name,nkd", [
    ("iceberg4", (4, 2, 2)),
    ("iceberg6", (6, 4, 2)),
    ("five_one_three", (5, 1, 3)),
    ("steane", (7, 1, 3)),
])
def test_preset_parameters_and_distance(name, nkd):
    cp = preset(name)
    n, k, d = nkd
    assert (cp.n, cp.k, cp.d) == nkd
    assert cp.tableau.r == n - k
    assert distance(cp.tableau) == d


def test_preset_iceberg_maps_to_textbook_pair():
    # H on every even position turns the stored generators into X^n / Z^n.
    for n in (4, 6, 8):
        t = preset(f"iceberg{n}").tableau
        rows = []
        for row in t.rows():
            lab = "".join(
                c if i % 2 == 0 else {"I": "I", "X": "Z", "Y": "Y", "Z": "X"}[c]
                for i, c in enumerate(row.label))
            rows.append(lab)
        assert sorted(rows) == sorted(["X" * n, "Z" * n])


def test_preset_steane_is_hamming_css():
    t = preset("steane").tableau
    hx = t.x_block[:3]
    assert not t.z_block[:3].any() and not t.x_block[3:].any()
    assert np.array_equal(hx, t.z_block[3:])
    # all seven nonzero length-3 columns: a [7,4] Hamming check matrix
    cols = {tuple(c) for c in hx.T.tolist()}
    assert len(cols) == 7 and (0, 0, 0) not in cols


def test_preset_errors():
    with pytest.raises(ValueError):
        preset("iceberg5")
    with pytest.raises(ValueError):
        preset("iceberg2")
    with pytest.raises(ValueError):
        preset("surface17")


def test_random_tableau_valid():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        k = int(rng.integers(0, n))
        t = random_tableau(n, k, rng)
        assert t.r == n - k  # construction implies validity; would raise otherwise
