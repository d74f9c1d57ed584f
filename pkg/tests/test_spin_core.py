import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A, X, Z, basis_ket, kron, po, random_hermitian
from nmr_eraser import spin_core as sc


def test_embed_pauli_examples():
    assert np.allclose(np.diag(sc.embed_pauli(3, 1, "z")), [1, 1, 1, 1, -1, -1, -1, -1])
    assert np.array_equal(sc.embed_pauli(1, 1, "x"), X)
    prod = sc.embed_pauli(3, 2, "z") @ sc.embed_pauli(3, 3, "z")
    # brute-force Kronecker: I (x) Z (x) Z
    expected = kron(np.eye(2), Z, Z)
    assert np.allclose(prod, expected)
    assert np.allclose(np.diag(prod), [1, -1, -1, 1, 1, -1, -1, 1])


@pytest.mark.parametrize("n,j,axis", [(n, j, a) for n in (1, 2, 3, 4) for j in range(1, n + 1) for a in "xyz"])
def test_embed_pauli_properties(n, j, axis):
    p = sc.embed_pauli(n, j, axis)
    assert np.allclose(p, p.conj().T)
    assert abs(np.trace(p)) < 1e-14
    assert np.allclose(p @ p, np.eye(2**n))


@pytest.mark.parametrize("j", [0, 4, -1])
def test_embed_pauli_bad_index(j):
    with pytest.raises(ValueError):
        sc.embed_pauli(3, j, "x")


def test_projectors():
    ep, em = sc.projector(3, 1, 1), sc.projector(3, 1, -1)
    assert np.allclose(ep @ em, 0)
    assert np.allclose(ep + em, np.eye(8))
    assert np.allclose(ep @ ep, ep)
    assert np.allclose(np.diag(ep), [1, 1, 1, 1, 0, 0, 0, 0])
    ground = sc.projector(3, 1, 1) @ sc.projector(3, 2, 1) @ sc.projector(3, 3, 1)
    assert np.allclose(ground, np.outer(basis_ket("000"), basis_ket("000")))
    with pytest.raises(ValueError):
        sc.projector(3, 1, 0)


def test_decompose_ground_projector():
    ground = np.outer(basis_ket("000"), basis_ket("000"))
    terms = sc.decompose(ground)
    assert {t.labels for t in terms} == {"".join(p) for p in itertools.product("1z", repeat=3)}
    assert all(abs(t.coefficient - 1 / 8) < 1e-15 for t in terms)


def test_decompose_single_term():
    terms = sc.decompose(po("xxx"))
    assert len(terms) == 1
    assert terms[0].labels == "xxx" and terms[0].coefficient == pytest.approx(1.0)


def test_decompose_ghz(ghz_deviation):
    d = sc.expansion_dict(ghz_deviation)
    assert d.keys() == {"zz1", "1zz", "z1z", "xxx", "yyx", "xyy", "yxy"}
    for lab, sign in [("zz1", 1), ("xxx", 1), ("yyx", -1), ("xyy", -1), ("yxy", -1)]:
        assert d[lab] == pytest.approx(sign * A, abs=1e-15)


def test_decompose_rejects_non_hermitian():
    m = np.zeros((4, 4), dtype=complex)
    m[0, 1] = 1.0
    with pytest.raises(ValueError, match="Hermitian"):
        sc.decompose(m)


def test_decompose_threshold_configurable():
    m = po("z1") + 1e-9 * po("1x")
    assert len(sc.decompose(m)) == 2
    assert len(sc.decompose(m, threshold=1e-6)) == 1


def test_recompose_empty_needs_n():
    assert np.array_equal(sc.recompose([], n=2), np.zeros((4, 4)))
    with pytest.raises(ValueError):
        sc.recompose([])


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_decompose_roundtrip(n, seed):
    h = random_hermitian(np.random.default_rng(seed), 2**n)
    back = sc.recompose(sc.decompose(h, threshold=0.0), n)
    assert np.max(np.abs(back - h)) < 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_basis_trace_orthogonality(n):
    labels = sc.basis_labels(n)
    for a, b in itertools.product(labels, repeat=2):
        tr = np.trace(sc.product_operator(a) @ sc.product_operator(b))
        assert tr == (2**n if a == b else 0)


def test_basis_trace_orthogonality_three_spins_random_subset(rng):
    labels = sc.basis_labels(3)
    picks = rng.choice(len(labels), size=(200, 2))
    for i, j in picks:
        tr = np.trace(sc.product_operator(labels[i]) @ sc.product_operator(labels[j]))
        assert tr == (8 if i == j else 0)


def test_coherence_order_examples():
    assert sc.coherence_order(0b000, 0b111, 3) == 3
    assert sc.coherence_order(5, 5, 3) == 0
    assert sc.coherence_order(0b001, 0b010, 3) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_coherence_order_antisymmetry(n):
    m = sc.coherence_order_matrix(n)
    for k in range(2**n):
        assert sc.coherence_order(k, k, n) == 0
        for l in range(2**n):
            assert sc.coherence_order(k, l, n) == -sc.coherence_order(l, k, n) == m[k, l]


def test_coherence_order_matches_gradient_phase():
    # m_kl is the difference of total m_z, read off the diagonal of sum sz / 2
    mz = np.diag(sum(sc.embed_pauli(3, j, "z") for j in (1, 2, 3))).real / 2
    for k, l in itertools.product(range(8), repeat=2):
        assert sc.coherence_order(k, l, 3) == mz[k] - mz[l]


def test_partial_trace_ghz():
    psi = (basis_ket("000") + basis_ket("111")) / np.sqrt(2)
    red = sc.partial_trace(np.outer(psi, psi.conj()), keep=[2, 3])
    expected = (np.outer(basis_ket("00"), basis_ket("00")) + np.outer(basis_ket("11"), basis_ket("11"))) / 2
    assert np.allclose(red, expected, atol=1e-15)


def brute_partial_trace(rho, n, keep):
    """Sum matrix elements over equal bits of the traced spins."""
    keep = sorted(keep)
    d = 2 ** len(keep)
    out = np.zeros((d, d), dtype=complex)
    for k, l in itertools.product(range(2**n), repeat=2):
        bk, bl = format(k, f"0{n}b"), format(l, f"0{n}b")
        if all(bk[j] == bl[j] for j in range(n) if j + 1 not in keep):
            a = int("".join(bk[j - 1] for j in keep) or "0", 2)
            b = int("".join(bl[j - 1] for j in keep) or "0", 2)
            out[a, b] += rho[k, l]
    return out


@pytest.mark.parametrize("keep", [[], [1], [2], [3], [1, 2], [1, 3], [2, 3], [1, 2, 3]])
def test_partial_trace_brute_force(rng, keep):
    rho = random_hermitian(rng, 8)
    red = sc.partial_trace(rho, keep)
    assert np.allclose(red, brute_partial_trace(rho, 3, keep), atol=1e-13)
    assert np.isclose(np.trace(red), np.trace(rho))
    assert np.allclose(red, red.conj().T)


def test_partial_trace_invalid():
    with pytest.raises(ValueError):
        sc.partial_trace(np.eye(8), [4])
    with pytest.raises(ValueError):
        sc.partial_trace(np.eye(6), [1])


def test_json_roundtrip_bit_exact(rng):
    m = random_hermitian(rng, 8) * np.pi
    back = sc.matrix_from_json(sc.matrix_to_json(m))
    assert np.array_equal(back, m)


def test_csv_roundtrip(rng, tmp_path):
    m = random_hermitian(rng, 4)
    assert np.array_equal(sc.matrix_from_csv(sc.matrix_to_csv(m)), m)
    sc.save_matrix(tmp_path / "m.csv", m)
    sc.save_matrix(tmp_path / "m.json", m)
    assert np.array_equal(sc.load_matrix(tmp_path / "m.csv"), m)
    assert np.array_equal(sc.load_matrix(tmp_path / "m.json"), m)


def test_json_schema():
    import json

    obj = json.loads(sc.matrix_to_json(np.diag([1.0, 2j])))
    assert obj == {"dim": 2, "entries": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 2.0]]}
    with pytest.raises(ValueError):
        sc.matrix_from_json('{"dim": 2, "entries": [[1, 0]]}')
    with pytest.raises(ValueError):
        sc.matrix_from_json('{"dim": 3, "entries": []}')


def test_pretty_term():
    assert sc.ProductOperatorTerm(-0.5, "x1y").pretty() == "-0.5 x1*y3"
    assert sc.ProductOperatorTerm(2.0, "11").pretty() == "+2 1"
    assert sc.ProductOperatorTerm(1.0, "zz1").weight == 2
