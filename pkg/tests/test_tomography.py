import numpy as np
import pytest

from conftest import A, po, random_hermitian
from nmr_eraser import dynamics as dy
from nmr_eraser import spin_core as sc
from nmr_eraser import state_prep as sp
from nmr_eraser import tomography as tomo


def test_observable_pairs_are_single_quantum():
    pairs = tomo.observable_pairs(3)
    # popcount classes 1,3,3,1; neighbours give 3 + 9 + 3 pairs, both orientations
    assert len(pairs) == 30
    assert all(abs(sc.coherence_order(k, l, 3)) == 1 for k, l in pairs)


def test_readout_identity_on_diagonal():
    rec = tomo.simulate_readout(po("z11"), ("1", "1", "1"))
    assert np.allclose(rec.values, 0)
    for labels in ("zz1", "1zz", "zzz", "11z"):
        assert np.allclose(tomo.simulate_readout(po(labels), "111").values, 0)


def test_readout_y_pulse_reveals_x_pattern():
    rec = tomo.simulate_readout(po("z11"), ("y", "1", "1"))
    expected = tomo.simulate_readout(po("x11"), ("1", "1", "1"))
    assert np.allclose(rec.values, expected.values)
    assert np.abs(rec.values).max() == pytest.approx(1.0)


def test_readout_ghz_identity_is_silent(ghz_deviation):
    # the GHZ deviation lives in zero- and triple-quantum elements only
    m = sc.coherence_order_matrix(3)
    assert np.allclose(ghz_deviation[np.abs(m) == 1], 0)
    assert np.allclose(tomo.simulate_readout(ghz_deviation, "111").values, 0)


def test_roundtrip_reference_states():
    for name, rho in sp.reference_states().items():
        rec = tomo.reconstruct(tomo.simulate_tomography(rho))
        assert np.max(np.abs(rec.rho - rho)) < 1e-8, name
        assert rec.residual < 1e-10
        assert rec.rank == 63


def test_roundtrip_random(rng):
    for _ in range(5):
        rho = random_hermitian(rng, 8, traceless=True)
        rec = tomo.reconstruct(tomo.simulate_tomography(rho))
        assert np.max(np.abs(rec.rho - rho)) < 1e-8


def test_noisy_records_report_residual(rng):
    rho = sp.ghz_target()
    records = tomo.simulate_tomography(rho)
    noisy = [tomo.ReadoutRecord(r.pulses, r.values + 1e-3 * rng.normal(size=r.values.size)) for r in records]
    rec = tomo.reconstruct(noisy)
    assert rec.residual > 1e-4
    assert np.max(np.abs(rec.rho - rho)) < 1e-2


def test_rank_deficient():
    rho = sp.ghz_target()
    with pytest.raises(tomo.RankDeficientError) as err:
        tomo.reconstruct([tomo.simulate_readout(rho, "111")])
    e = err.value
    assert e.rank < 63
    # with no pulses the populations are invisible
    assert "zzz" in e.missing and "z11" in e.missing
    assert "x11" not in e.missing


def test_records_json_roundtrip():
    records = tomo.simulate_tomography(sp.ghz_target())
    again = tomo.records_from_json(tomo.records_to_json(records))
    assert [r.pulses for r in again] == [r.pulses for r in records]
    for a, b in zip(again, records):
        assert np.array_equal(a.values, b.values)


def test_bad_readout_label():
    with pytest.raises(ValueError):
        tomo.simulate_readout(sp.ghz_target(), "1q1")
    with pytest.raises(ValueError):
        tomo.simulate_readout(sp.ghz_target(), "11")


def test_correlation_basics(ghz_deviation, dephased_z):
    rep = tomo.attenuated_correlation(ghz_deviation, ghz_deviation)
    assert rep.c == pytest.approx(1.0)
    assert tomo.attenuated_correlation(ghz_deviation, dephased_z).c == pytest.approx(1.0, abs=1e-12)
    assert tomo.attenuated_correlation(dephased_z, ghz_deviation).c == pytest.approx(3 / 7, abs=1e-12)
    assert str(rep).startswith("c=1.000000000 the_norm=")
    with pytest.raises(ValueError):
        tomo.attenuated_correlation(ghz_deviation, np.zeros((8, 8)))
    with pytest.raises(ValueError):
        tomo.attenuated_correlation(np.eye(4), np.eye(8))


def test_correlation_unitary_invariance(rng):
    a, b = random_hermitian(rng, 8), random_hermitian(rng, 8)
    u = dy.rf_rotation(3, [1, 3], "y", 0.8) @ dy.cnot_pair()
    c0 = tomo.attenuated_correlation(a, b).c
    c1 = tomo.attenuated_correlation(dy.conjugate(u, a), dy.conjugate(u, b)).c
    assert c1 == pytest.approx(c0)


def test_correlation_bound(rng):
    for _ in range(100):
        the = random_hermitian(rng, 8, traceless=True)
        exp = random_hermitian(rng, 8, traceless=True)
        scale = np.sqrt(np.real(np.trace(the @ the)) / np.real(np.trace(exp @ exp)))
        exp = exp * scale * rng.uniform(0, 1)
        assert abs(tomo.attenuated_correlation(exp, the).c) <= 1 + 1e-12


def test_identity_offset():
    target = sp.ghz_target()
    res = tomo.identity_offset(target, target)
    assert res.alpha == 0 and res.rule == "frobenius"
    res = tomo.identity_offset(target + 0.3 * np.eye(8), target)
    assert res.alpha == pytest.approx(-0.3)
    assert np.allclose(res.matrix, target)
    res = tomo.identity_offset(target, target + np.eye(8))
    assert "unbounded" in res.rule and res.alpha == pytest.approx(1.0)


def test_identity_offset_relaxed_ghz():
    system = dy.alanine()
    noisy = dy.relax(sp.ghz_target(), 0.021, system)
    assert abs(tomo.identity_offset(noisy, sp.ghz_target()).alpha) < 1e-6


def test_amplitude_fixture_consistency(ghz_deviation):
    assert np.allclose(ghz_deviation, sp.ghz_target())
    assert np.isclose(A, sp.PPS_AMPLITUDE)
