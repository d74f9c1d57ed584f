"""Thermal deviation, pseudo-pure ground state preparation and the GHZ circuit.

All states here are deviation matrices: traceless Hermitian parts of the
ensemble density matrix, with physical constants set to one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm

from . import decoherence
from .dynamics import SpinSystem, cnot_pair, conjugate, rf_rotation
from .spin_core import embed_pauli, ket, product_operator, projector

#: sqrt(3)/sqrt(32), the amplitude of every product operator in the
#: pseudo-pure ground state and the GHZ deviation
PPS_AMPLITUDE = np.sqrt(3) / (4 * np.sqrt(2))

GHZ_TERMS = {"zz1": 1, "1zz": 1, "z1z": 1, "xxx": 1, "yyx": -1, "xyy": -1, "yxy": -1}
DEPHASED_Z_TERMS = {"zz1": 1, "1zz": 1, "z1z": 1}
DEPHASED_X_TERMS = {"1zz": 1, "zxx": 1, "zyy": -1}


def _from_terms(terms: dict[str, float], scale: float = PPS_AMPLITUDE) -> np.ndarray:
    return scale * sum(c * product_operator(lab) for lab, c in terms.items())


def thermal_deviation(sys: SpinSystem | None = None, n: int = 3) -> np.ndarray:
    """``sum_j sz_j`` for equal gyromagnetic ratios."""
    if sys is not None:
        n = sys.n
    return sum(embed_pauli(n, j, "z") for j in range(1, n + 1))


def pseudo_pure_target() -> np.ndarray:
    """Deviation of the ground-state pseudo-pure state,
    ``a * (sum of the seven z products) = 8a (|000><000| - I/8)``."""
    e = projector(3, 1, 1) @ projector(3, 2, 1) @ projector(3, 3, 1)
    return 8 * PPS_AMPLITUDE * (e - np.eye(8) / 8)


def ghz_target() -> np.ndarray:
    return _from_terms(GHZ_TERMS)


def dephased_z_target() -> np.ndarray:
    return _from_terms(DEPHASED_Z_TERMS)


def dephased_x_target() -> np.ndarray:
    return _from_terms(DEPHASED_X_TERMS)


def _u(generator: np.ndarray, half_angle: float) -> np.ndarray:
    """``exp(-i half_angle * generator)``."""
    return expm(-1j * half_angle * generator)


def _ops():
    s = lambda axis, j: embed_pauli(3, j, axis)  # noqa: E731
    return s, s("z", 1) @ s("z", 2), s("z", 2) @ s("z", 3)


@dataclass(frozen=True)
class PreparationStep:
    """Product of unitaries (written in operator order, rightmost acts first)
    followed by an optional dephasing channel."""

    name: str
    factors: tuple[np.ndarray, ...]
    dephase: Callable[[np.ndarray], np.ndarray] | None = None
    oracle: np.ndarray | None = field(default=None, repr=False)

    @property
    def unitary(self) -> np.ndarray:
        u = np.eye(8, dtype=complex)
        for f in self.factors:
            u = u @ f
        return u

    def apply(self, rho: np.ndarray) -> np.ndarray:
        out = conjugate(self.unitary, rho)
        return self.dephase(out) if self.dephase else out


def preparation_steps() -> list[PreparationStep]:
    """The four rows that turn ``sz1 + sz2 + sz3`` into the pseudo-pure state.

    Row 1 tips spin 2 by ``arccos(a)`` and dephases, leaving ``a * sz2``.
    Row 2 rotates spins 1 and 3 to the transverse plane where spin 2 is down,
    then dephases, leaving ``a sz2 + (sz1 + sz3) E+^2``. Row 3 is a Clifford
    permutation of the z terms and row 4 the two-spin pseudo-pure transfer
    on spins 2 and 3, finished with full dephasing. Two details matter: the
    row-3 y rotation has positive sign and the row-4 coupling is between
    spins 2 and 3; with either one changed no ordering reaches the target.
    """
    s, zz12, zz23 = _ops()
    a = PPS_AMPLITUDE
    row1 = PreparationStep(
        "row1",
        (_u(s("x", 2), 0.5 * np.arccos(a)),),
        decoherence.ideal_gradient,
    )
    row2 = PreparationStep(
        "row2",
        (_u((s("y", 1) + s("y", 3)) @ projector(3, 2, -1), np.pi / 4),),
        decoherence.ideal_gradient,
        oracle=a * s("z", 2) + (s("z", 1) + s("z", 3)) @ projector(3, 2, 1),
    )
    row3 = PreparationStep(
        "row3",
        (
            _u(s("x", 1), -np.pi / 4),
            _u(zz12, np.pi / 4),
            _u(s("y", 1) + s("y", 2), -np.pi / 4),
            _u(zz12, np.pi / 4),
            _u(s("x", 2), np.pi / 4),
        ),
    )
    row4 = PreparationStep(
        "row4",
        (
            _u(s("y", 2) + s("y", 3), -np.pi / 12),
            _u(zz23, np.pi / 4),
            _u(s("x", 2) + s("x", 3), np.pi / 8),
        ),
        decoherence.full_dephase,
        oracle=pseudo_pure_target(),
    )
    return [row1, row2, row3, row4]


class PreparationError(ValueError):
    """A pipeline step missed its expected intermediate state."""

    def __init__(self, step: int, name: str, error: float):
        super().__init__(f"step {step} ({name}) misses its oracle by {error:.3g}")
        self.step = step


def pseudo_pure_prep(
    rho_eq: np.ndarray,
    *,
    check: bool = True,
    atol: float = 1e-10,
    trace: list | None = None,
) -> np.ndarray:
    """Run the preparation rows on ``rho_eq``.

    With ``check`` set, the intermediate after each row that has a known
    closed form is compared against it and a :class:`PreparationError`
    names the first failing row. Intermediates are appended to ``trace``
    when a list is supplied.
    """
    rho = np.asarray(rho_eq, dtype=complex)
    for i, step in enumerate(preparation_steps(), start=1):
        rho = step.apply(rho)
        if trace is not None:
            trace.append((step.name, rho.copy()))
        if check and step.oracle is not None:
            err = float(np.max(np.abs(rho - step.oracle)))
            if err > atol:
                raise PreparationError(i, step.name, err)
    return rho


def ghz_propagator() -> np.ndarray:
    """c-NOT pair after a pi/2 y pulse on spin 2."""
    return cnot_pair(3) @ rf_rotation(3, [2], "y", np.pi / 2)


def ghz_circuit(rho_ini: np.ndarray) -> np.ndarray:
    return conjugate(ghz_propagator(), rho_ini)


def ghz_ket() -> np.ndarray:
    return (ket("000") + ket("111")) / np.sqrt(2)


def bell_precursor_ket() -> np.ndarray:
    """``|0>(|00> + |11>)/sqrt(2)``: pi/2 on spin 2, then only the spin-3 c-NOT."""
    u = spin3_cnot() @ rf_rotation(3, [2], "y", np.pi / 2)
    return u @ ket("000")


def spin3_cnot() -> np.ndarray:
    """Spin-3 c-NOT controlled by spin 2 being down.

    The bare factor ``exp(-i pi/2 sx3 E_-^2)`` of the pair leaves ``-i`` on the
    flipped branch (the spin-1 factor cancels it in the full circuit). The
    phase gate ``exp(i pi/2 E_-^2)`` removes it, giving ``E_+ + sx3 E_-``.
    """
    em = projector(3, 2, -1)
    factor = expm(-0.5j * np.pi * embed_pauli(3, 3, "x") @ em)
    return factor @ expm(0.5j * np.pi * em)


def pure_state_deviation(psi: np.ndarray, scale: float = 8 * PPS_AMPLITUDE) -> np.ndarray:
    """Pseudo-pure deviation ``scale * (|psi><psi| - I/d)``."""
    psi = np.asarray(psi, dtype=complex)
    d = psi.size
    return scale * (np.outer(psi, psi.conj()) - np.eye(d) / d)


def reference_states() -> dict[str, np.ndarray]:
    """Closed-form deviations for the four tomography checkpoints."""
    return {
        "ini": pseudo_pure_target(),
        "ghz": ghz_target(),
        "z": dephased_z_target(),
        "x": dephased_x_target(),
    }


def measurement_mixtures() -> dict[str, np.ndarray]:
    """Normalized density matrices of the pure GHZ state and its two erasures.

    The z erasure mixes ``|000>`` and ``|111>``; the x erasure mixes the two
    Bell states of spins 2 and 3 labelled by the ancilla. Each has trace 1.
    """
    psi = ghz_ket()
    phi_p = (ket("00") + ket("11")) / np.sqrt(2)
    phi_m = (ket("00") - ket("11")) / np.sqrt(2)
    up = np.diag([1.0, 0.0]).astype(complex)
    down = np.diag([0.0, 1.0]).astype(complex)
    rho_z = 0.5 * (np.kron(up, np.outer(ket("00"), ket("00"))) + np.kron(down, np.outer(ket("11"), ket("11"))))
    rho_x = 0.5 * (np.kron(up, np.outer(phi_p, phi_p.conj())) + np.kron(down, np.outer(phi_m, phi_m.conj())))
    return {"ghz": np.outer(psi, psi.conj()), "z": rho_z, "x": rho_x}


def run_steps(rho: np.ndarray, steps: Sequence[PreparationStep]) -> np.ndarray:
    for step in steps:
        rho = step.apply(rho)
    return rho
