"""Gradient dephasing, both as an ideal coherence filter and as an explicit
average over sample slices.

A z gradient multiplies ``rho[k, l]`` by a position-dependent phase
proportional to the coherence order of the pair, so averaging over the
sample removes every coherence with nonzero order. Sandwiching gradients
between pi pulses restricts the dephasing to the coherences of one spin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import (
    Delay,
    Gradient,
    PulseSequence,
    RFRotation,
    SpinSystem,
    conjugate,
    rf_rotation,
)
from .spin_core import coherence_order_matrix, num_spins, projector, spin_bits

GradientPulse = Gradient


@dataclass(frozen=True)
class SpatialEnsemble:
    """``slices`` equally spaced positions ``z_s = s / slices`` in ``[0, 1)``.

    With gradient areas counted in windings, a unit-area gradient gives
    single-quantum phases that sample one full turn uniformly.
    """

    slices: int = 64

    def __post_init__(self):
        if self.slices < 1:
            raise ValueError("need at least one slice")

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.slices) / self.slices


def ideal_gradient(rho: np.ndarray) -> np.ndarray:
    """Zero every element of nonzero coherence order."""
    rho = np.asarray(rho, dtype=complex)
    m = coherence_order_matrix(num_spins(rho.shape[0]))
    return np.where(m == 0, rho, 0)


def full_dephase(rho: np.ndarray) -> np.ndarray:
    """Keep only the diagonal (zero-quantum coherences are removed too)."""
    rho = np.asarray(rho, dtype=complex)
    return np.diag(np.diag(rho))


def spin_filter(rho: np.ndarray, spin: int) -> np.ndarray:
    """Zero the elements whose ``spin`` bit differs between row and column."""
    rho = np.asarray(rho, dtype=complex)
    bits = spin_bits(num_spins(rho.shape[0]))[:, spin - 1]
    return np.where(bits[:, None] == bits[None, :], rho, 0)


def projective_measurement(rho: np.ndarray, spin: int) -> np.ndarray:
    """Non-selective z measurement of one spin: ``sum_s E_s rho E_s``."""
    rho = np.asarray(rho, dtype=complex)
    n = num_spins(rho.shape[0])
    return sum(p @ rho @ p for p in (projector(n, spin, 1), projector(n, spin, -1)))


def slice_propagator(g: Gradient, z: float, n: int) -> np.ndarray:
    """Gradient propagator at position ``z``: ``exp(-i 2 pi area z/2 sum sz)``."""
    return g.unitary(n, z)


def _check_commensurate(seq: PulseSequence, ens: SpatialEnsemble) -> None:
    for g in seq.gradients:
        w = g.area
        if abs(w - round(w)) > 1e-12:
            raise ValueError(
                f"gradient area {w} is not a whole number of windings; "
                "the slice average would not reduce to the ideal filter"
            )
    total = sum(abs(g.area) for g in seq.gradients)
    if ens.slices > 1 and total * seq.n >= ens.slices:
        raise ValueError(
            f"{ens.slices} slices alias phases of up to {total * seq.n:g} windings; "
            "use more slices"
        )


def spatial_average(
    seq: PulseSequence,
    rho: np.ndarray,
    ens: SpatialEnsemble,
    system: SpinSystem | None = None,
) -> np.ndarray:
    """Average ``U_s rho U_s^dagger`` over the slices of ``ens``.

    ``U_s`` is the sequence compiled at slice position ``z_s``. Terms are
    summed in slice order, so the result does not depend on scheduling.

    Raises:
        ValueError: if a gradient area is not a whole number of windings, or
            the slice count is too small to resolve the largest phase.
    """
    rho = np.asarray(rho, dtype=complex)
    if num_spins(rho.shape[0]) != seq.n:
        raise ValueError("state and sequence spin counts differ")
    if ens.slices == 1:
        return conjugate(seq.compile(0.0, system), rho)
    _check_commensurate(seq, ens)
    acc = np.zeros_like(rho)
    for z in ens.positions:
        acc += conjugate(seq.compile(z, system), rho)
    return acc / ens.slices


def eraser_z_sequence(area: float = 1.0, delay: float = 0.0) -> PulseSequence:
    """Gradient and pi-pulse train that dephases spin 1 only (three spins).

    Temporal order: G, pi_x(2), G, pi_x(2,3), G, pi_-x(2), G, pi_-x(2,3).
    Spin 1 sees all four gradients with the same sign; spins 2 and 3 are
    refocused. ``delay`` inserts free evolution around each gradient, which
    the pi pulses refocus only approximately; the default of zero models the
    internal Hamiltonian as fully refocused.
    """
    pi = np.pi
    pulses = [
        RFRotation((2,), "x", pi),
        RFRotation((2, 3), "x", pi),
        RFRotation((2,), "-x", pi),
        RFRotation((2, 3), "-x", pi),
    ]
    elements: list = []
    for p in pulses:
        if delay:
            elements.append(Delay(delay))
        elements.append(Gradient(area))
        if delay:
            elements.append(Delay(delay))
        elements.append(p)
    return PulseSequence(3, elements)


def eraser_x_sequence(area: float = 1.0, delay: float = 0.0) -> PulseSequence:
    """``pi/2`` pulse about -y on spin 1, then :func:`eraser_z_sequence`."""
    head = PulseSequence(3, [RFRotation((1,), "-y", np.pi / 2)])
    return head + eraser_z_sequence(area, delay)


def selective_dephase_z(
    rho: np.ndarray,
    ens: SpatialEnsemble = SpatialEnsemble(),
    *,
    area: float = 1.0,
    miscalibration: float = 0.0,
    rng: np.random.Generator | None = None,
    delay: float = 0.0,
    system: SpinSystem | None = None,
) -> np.ndarray:
    """Dephase spin 1 along z, mimicking a strong sz1 measurement."""
    _check_three_spins(rho)
    seq = eraser_z_sequence(area, delay)
    if miscalibration:
        seq = seq.miscalibrated(miscalibration, rng)
    return spatial_average(seq, rho, ens, system)


def selective_dephase_x(
    rho: np.ndarray,
    ens: SpatialEnsemble = SpatialEnsemble(),
    *,
    area: float = 1.0,
    miscalibration: float = 0.0,
    rng: np.random.Generator | None = None,
    delay: float = 0.0,
    system: SpinSystem | None = None,
) -> np.ndarray:
    """Rotate spin 1 from x to z, then dephase it; spin 1 is left along z."""
    _check_three_spins(rho)
    seq = eraser_x_sequence(area, delay)
    if miscalibration:
        seq = seq.miscalibrated(miscalibration, rng)
    return spatial_average(seq, rho, ens, system)


def x_measurement(rho: np.ndarray, spin: int = 1) -> np.ndarray:
    """Projector-sum channel for the x-basis erasure (rotate, then measure z)."""
    rho = np.asarray(rho, dtype=complex)
    n = num_spins(rho.shape[0])
    r = conjugate(rf_rotation(n, [spin], "-y", np.pi / 2), rho)
    return projective_measurement(r, spin)


def slice_phase(ens: SpatialEnsemble, area: float = 1.0) -> np.ndarray:
    """Net spin-1 phase per slice of the eraser sequence (four gradients)."""
    return 4 * 2 * np.pi * area * ens.positions


def _check_three_spins(rho: np.ndarray) -> None:
    if np.asarray(rho).shape != (8, 8):
        raise ValueError("selective dephasing is defined for three spins")
