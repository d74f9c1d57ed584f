"""Weak-coupling Hamiltonian, ideal RF rotations and relaxation.

Rotations follow ``U = exp(-i (angle/2) * generator)``. Frequencies are Hz
offsets in the rotating frame of the reference spin; the Hamiltonian is
returned in rad/s.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .spin_core import embed_pauli, num_spins, projector, spin_bits

AXES = {"x": ("x", 1), "-x": ("x", -1), "y": ("y", 1), "-y": ("y", -1), "z": ("z", 1), "-z": ("z", -1)}


@dataclass(frozen=True, eq=False)
class SpinSystem:
    """Chemical shifts, scalar couplings and relaxation times for ``n`` spins.

    ``J`` is the full symmetric coupling matrix in Hz. ``reference_mhz`` is
    the absolute frequency of the rotating frame, kept only as metadata.
    """

    shifts: tuple[float, ...]
    J: np.ndarray
    T1: tuple[float, ...]
    T2: tuple[float, ...]
    reference_mhz: float | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.shifts)
        J = np.array(self.J, dtype=float)
        J.setflags(write=False)
        object.__setattr__(self, "J", J)
        if J.shape != (n, n):
            raise ValueError(f"J must be {n}x{n}, got {J.shape}")
        if not np.allclose(J, J.T) or np.any(np.diag(J) != 0):
            raise ValueError("J must be symmetric with zero diagonal")
        if len(self.T1) != n or len(self.T2) != n:
            raise ValueError("need one T1 and one T2 per spin")
        if min(self.T1) <= 0 or min(self.T2) <= 0:
            raise ValueError("relaxation times must be positive")

    @property
    def n(self) -> int:
        return len(self.shifts)

    @classmethod
    def from_dict(cls, cfg: dict) -> "SpinSystem":
        """Build from ``{n, shifts_hz, J_hz, T1_s, T2_s}``.

        ``J_hz`` lists the upper triangle row by row: J12, J13, ..., J23, ...
        """
        n = int(cfg["n"])
        upper = list(cfg["J_hz"])
        if len(upper) != n * (n - 1) // 2:
            raise ValueError(f"J_hz needs {n * (n - 1) // 2} values for n={n}")
        J = np.zeros((n, n))
        J[np.triu_indices(n, 1)] = upper
        J = J + J.T
        shifts = tuple(float(v) for v in cfg["shifts_hz"])
        if len(shifts) != n:
            raise ValueError("shifts_hz length does not match n")
        return cls(
            shifts=shifts,
            J=J,
            T1=tuple(float(v) for v in cfg["T1_s"]),
            T2=tuple(float(v) for v in cfg["T2_s"]),
            reference_mhz=cfg.get("reference_mhz"),
            name=cfg.get("name", ""),
        )

    def to_dict(self) -> dict:
        n = self.n
        return {
            "name": self.name,
            "n": n,
            "shifts_hz": list(self.shifts),
            "J_hz": self.J[np.triu_indices(n, 1)].tolist(),
            "T1_s": list(self.T1),
            "T2_s": list(self.T2),
            "reference_mhz": self.reference_mhz,
        }

    @classmethod
    def from_file(cls, path) -> "SpinSystem":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def alanine() -> SpinSystem:
    """Three 13C spins of labelled alanine (shipped defaults)."""
    text = resources.files("nmr_eraser").joinpath("data/alanine.json").read_text()
    return SpinSystem.from_dict(json.loads(text))


def is_unitary(u: np.ndarray, atol: float = 1e-12) -> bool:
    return float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))) < atol


def conjugate(u: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """``u rho u^dagger``."""
    return u @ rho @ u.conj().T


def internal_hamiltonian(sys: SpinSystem) -> np.ndarray:
    """Diagonal weak-coupling Hamiltonian, rad/s.

    H = pi * [sum_j nu_j sz_j + 1/2 sum_{j<k} J_jk sz_j sz_k]
    """
    n = sys.n
    # diagonal of sz_j is +1 for bit 0, -1 for bit 1
    sz = 1 - 2 * spin_bits(n).astype(float)
    diag = sz @ np.asarray(sys.shifts, dtype=float)
    for j in range(n):
        for k in range(j + 1, n):
            diag = diag + 0.5 * sys.J[j, k] * sz[:, j] * sz[:, k]
    return np.diag(np.pi * diag).astype(complex)


def _generator(n: int, spins: Sequence[int], axis: str) -> np.ndarray:
    if axis not in AXES:
        raise ValueError(f"unknown rotation axis {axis!r}")
    spins = list(spins)
    if not spins:
        raise ValueError("rotation needs at least one spin")
    label, sign = AXES[axis]
    return sign * sum(embed_pauli(n, j, label) for j in spins)


def rf_rotation(n: int, spins: Sequence[int], axis: str, angle: float) -> np.ndarray:
    """Ideal hard pulse: ``exp(-i angle/2 * sum_j sigma_axis^j)``.

    ``axis`` is one of ``x, -x, y, -y`` (``z`` and ``-z`` are accepted for
    phase corrections).
    """
    g = _generator(n, spins, axis)
    return expm(-0.5j * angle * g)


def conditional_rotation(
    n: int, spins: Sequence[int], axis: str, angle: float, control: int, sign: int
) -> np.ndarray:
    """Rotation of ``spins`` applied only where ``control`` is up (+1) or down (-1).

    ``exp(-i angle/2 * sum_j sigma_axis^j * E_sign^control)``.
    """
    if control in spins:
        raise ValueError(f"control spin {control} is also a target")
    g = _generator(n, spins, axis) @ projector(n, control, sign)
    return expm(-0.5j * angle * g)


def cnot_pair(n: int = 3) -> np.ndarray:
    """Two c-NOTs controlled by spin 2 (down state) acting on spins 1 and 3.

    ``exp(i pi/2 (sx1 - sx3) E_-^2)``. The opposite signs on the two
    targets cancel the +-i phases each single c-NOT factor would leave.
    """
    if n != 3:
        raise ValueError("cnot_pair is defined for three spins")
    g = (embed_pauli(3, 1, "x") - embed_pauli(3, 3, "x")) @ projector(3, 2, -1)
    return expm(0.5j * np.pi * g)


def free_evolution(sys: SpinSystem, t: float) -> np.ndarray:
    """``exp(-i H t)`` for the internal Hamiltonian; diagonal."""
    if t < 0:
        raise ValueError("evolution time must be non-negative")
    h = np.diag(internal_hamiltonian(sys)).real
    return np.diag(np.exp(-1j * h * t))


def relax(rho: np.ndarray, t: float, sys: SpinSystem) -> np.ndarray:
    """Phenomenological T1/T2 decay of a deviation matrix over ``t`` seconds.

    Off-diagonal ``rho[k, l]`` is scaled by ``exp(-t * sum 1/T2_j)`` over the
    spins whose bit differs between ``k`` and ``l``. The diagonal is split
    into z product operators and each is scaled by ``exp(-t * sum 1/T1_j)``
    over the spins it involves, so the identity part (and the trace) is
    untouched.
    """
    if t < 0:
        raise ValueError("relaxation time must be non-negative")
    rho = np.asarray(rho, dtype=complex)
    n = num_spins(rho.shape[0])
    if n != sys.n:
        raise ValueError(f"state has {n} spins, system has {sys.n}")
    bits = spin_bits(n)
    r2 = 1.0 / np.asarray(sys.T2)
    r1 = 1.0 / np.asarray(sys.T1)

    differ = bits[:, None, :] != bits[None, :, :]
    out = rho * np.exp(-t * (differ @ r2))

    # diagonal: Walsh-Hadamard transform gives z-product coefficients,
    # indexed by the support mask of each term
    pops = np.real(np.diag(rho)).copy()
    sz = 1 - 2 * bits  # (2**n, n)
    masks = spin_bits(n).astype(bool)  # row m = support of the m-th z product
    walsh = np.prod(np.where(masks[:, None, :], sz[None, :, :], 1), axis=2)
    coeffs = walsh @ pops / 2**n
    coeffs = coeffs * np.exp(-t * (masks @ r1))
    new_pops = walsh.T @ coeffs
    out[np.diag_indices(2**n)] = new_pops + 1j * np.imag(np.diag(rho))
    return out


# --- pulse sequences ------------------------------------------------------


@dataclass(frozen=True)
class RFRotation:
    spins: tuple[int, ...]
    axis: str
    angle: float

    def unitary(self, n: int) -> np.ndarray:
        return rf_rotation(n, self.spins, self.axis, self.angle)


@dataclass(frozen=True)
class ConditionalRotation:
    spins: tuple[int, ...]
    axis: str
    angle: float
    control: int
    sign: int

    def unitary(self, n: int) -> np.ndarray:
        return conditional_rotation(n, self.spins, self.axis, self.angle, self.control, self.sign)


@dataclass(frozen=True)
class Delay:
    duration: float


@dataclass(frozen=True)
class Gradient:
    """z gradient whose ``area`` counts phase windings across the sample.

    At position ``z`` (sample spans ``[0, 1)``) the pulse is
    ``exp(-i * 2 pi area z * 1/2 sum_j sz_j)``, so a single-quantum coherence
    winds ``area`` times through 2 pi over the sample.
    """

    area: float

    def unitary(self, n: int, z: float) -> np.ndarray:
        return np.diag(np.exp(-0.5j * 2 * np.pi * self.area * z * total_sz(n)))


def total_sz(n: int) -> np.ndarray:
    """Diagonal of ``sum_j sz_j`` (so ``n - 2 * popcount``)."""
    return (n - 2 * spin_bits(n).sum(axis=1)).astype(float)


@dataclass(frozen=True)
class PulseSequence:
    """Elements in temporal order (first applied first)."""

    n: int
    elements: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        if other.n != self.n:
            raise ValueError("cannot join sequences for different spin counts")
        return PulseSequence(self.n, self.elements + other.elements)

    @property
    def gradients(self) -> list[Gradient]:
        return [e for e in self.elements if isinstance(e, Gradient)]

    def compile(self, z: float = 0.0, system: SpinSystem | None = None) -> np.ndarray:
        """Net propagator at sample position ``z``.

        Delays need ``system`` for the internal Hamiltonian; zero-length
        delays are skipped.
        """
        u = np.eye(2**self.n, dtype=complex)
        for e in self.elements:
            if isinstance(e, Gradient):
                step = e.unitary(self.n, z)
            elif isinstance(e, Delay):
                if e.duration == 0:
                    continue
                if system is None:
                    raise ValueError("a SpinSystem is required to compile delays")
                step = free_evolution(system, e.duration)
            else:
                step = e.unitary(self.n)
            u = step @ u
        return u

    def miscalibrated(self, fraction: float, rng: np.random.Generator | None = None) -> "PulseSequence":
        """Copy with every RF angle scaled by ``1 + fraction`` (times a uniform
        draw in [-1, 1] per pulse when ``rng`` is given)."""
        if not 0 <= fraction <= 0.2:
            raise ValueError("miscalibration fraction must lie in [0, 0.2]")
        out = []
        for e in self.elements:
            if isinstance(e, (RFRotation, ConditionalRotation)):
                f = fraction if rng is None else fraction * rng.uniform(-1, 1)
                e = type(e)(**{**e.__dict__, "angle": e.angle * (1 + f)})
            out.append(e)
        return PulseSequence(self.n, out)
