"""Simulated tomography and the attenuated correlation.

Only single-quantum coherences (|m| = 1) produce observable magnetization,
so each readout rotates selected spins by pi/2 before recording the
|m| = 1 elements. A set of such readouts fixes every product-operator
coefficient of a deviation matrix through a linear least-squares solve.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .dynamics import conjugate, rf_rotation
from .spin_core import basis_labels, coherence_order_matrix, num_spins, product_operator

READOUT_LABELS = ("1", "x", "y")


@dataclass(frozen=True)
class ReadoutRecord:
    """Observed single-quantum elements after one readout.

    ``pulses`` holds one label per spin: ``"1"`` (no pulse), ``"x"`` or
    ``"y"`` (pi/2 about that axis). ``values`` lists ``rho[k, l]`` for the
    pairs in :func:`observable_pairs`, in that order.
    """

    pulses: tuple[str, ...]
    values: np.ndarray

    @property
    def n(self) -> int:
        return len(self.pulses)

    def elements(self) -> dict[tuple[int, int], complex]:
        return dict(zip(observable_pairs(self.n), self.values.tolist()))

    def to_dict(self) -> dict:
        return {
            "pulses": "".join(self.pulses),
            "elements": [[k, l, v.real, v.imag] for (k, l), v in self.elements().items()],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "ReadoutRecord":
        pulses = tuple(obj["pulses"])
        lookup = {(int(k), int(l)): complex(re, im) for k, l, re, im in obj["elements"]}
        pairs = observable_pairs(len(pulses))
        if set(lookup) != set(pairs):
            raise ValueError("record does not list exactly the single-quantum elements")
        return cls(pulses, np.array([lookup[p] for p in pairs], dtype=complex))


def records_to_json(records: Iterable[ReadoutRecord]) -> str:
    return json.dumps([r.to_dict() for r in records])


def records_from_json(text: str) -> list[ReadoutRecord]:
    return [ReadoutRecord.from_dict(o) for o in json.loads(text)]


@lru_cache(maxsize=None)
def observable_pairs(n: int) -> tuple[tuple[int, int], ...]:
    m = coherence_order_matrix(n)
    k, l = np.nonzero(np.abs(m) == 1)
    return tuple(zip(k.tolist(), l.tolist()))


def readout_unitary(pulses: Sequence[str]) -> np.ndarray:
    n = len(pulses)
    u = np.eye(2**n, dtype=complex)
    for j, p in enumerate(pulses, start=1):
        if p not in READOUT_LABELS:
            raise ValueError(f"unknown readout label {p!r}")
        if p != "1":
            u = rf_rotation(n, [j], p, np.pi / 2) @ u
    return u


def default_readouts(n: int = 3) -> list[tuple[str, ...]]:
    """All ``3**n`` per-spin combinations of no pulse, x and y pi/2 pulses."""
    return list(itertools.product(READOUT_LABELS, repeat=n))


def simulate_readout(rho: np.ndarray, pulses: Sequence[str]) -> ReadoutRecord:
    rho = np.asarray(rho, dtype=complex)
    n = num_spins(rho.shape[0])
    if len(pulses) != n:
        raise ValueError(f"need one readout label per spin ({n})")
    r = conjugate(readout_unitary(pulses), rho)
    k, l = np.array(observable_pairs(n)).T
    return ReadoutRecord(tuple(pulses), r[k, l])


def simulate_tomography(rho: np.ndarray, readouts=None) -> list[ReadoutRecord]:
    n = num_spins(np.asarray(rho).shape[0])
    readouts = default_readouts(n) if readouts is None else readouts
    return [simulate_readout(rho, p) for p in readouts]


class RankDeficientError(ValueError):
    """The readouts leave some deviation directions undetermined."""

    def __init__(self, missing: list[str], rank: int, needed: int):
        self.missing = missing
        self.rank = rank
        super().__init__(
            f"readout set has rank {rank} of {needed}; unresolved directions: "
            + ", ".join(missing)
        )


@dataclass(frozen=True)
class Reconstruction:
    rho: np.ndarray
    residual: float
    rank: int


def _design_matrix(readouts: Sequence[tuple[str, ...]], n: int) -> np.ndarray:
    labels = basis_labels(n)[1:]
    k, l = np.array(observable_pairs(n)).T
    blocks = []
    for pulses in readouts:
        u = readout_unitary(pulses)
        cols = [conjugate(u, product_operator(lab))[k, l] for lab in labels]
        a = np.array(cols).T
        blocks.append(np.vstack([a.real, a.imag]))
    return np.vstack(blocks)


def _unresolved(vt: np.ndarray, rank: int, labels: list[str]) -> list[str]:
    null = vt[rank:]
    weight = np.sum(null**2, axis=0)
    return [lab for lab, w in zip(labels, weight) if w > 1e-8]


def reconstruct(records: Sequence[ReadoutRecord], tol: float = 1e-9) -> Reconstruction:
    """Least-squares deviation matrix consistent with ``records``.

    Unknowns are the real coefficients of the ``4**n - 1`` non-identity
    product operators. ``residual`` is the 2-norm of the misfit.

    Raises:
        RankDeficientError: when the readouts do not determine every
            coefficient; ``missing`` lists the basis operators that
            overlap the unresolved subspace.
    """
    if not records:
        raise ValueError("no readout records")
    n = records[0].n
    labels = basis_labels(n)[1:]
    a = _design_matrix([r.pulses for r in records], n)
    b = np.concatenate([np.concatenate([r.values.real, r.values.imag]) for r in records])
    u, s, vt = np.linalg.svd(a, full_matrices=True)
    rank = int(np.sum(s > tol * s[0]))
    if rank < len(labels):
        raise RankDeficientError(_unresolved(vt, rank, labels), rank, len(labels))
    coeffs = vt[:rank].T @ ((u[:, :rank].T @ b) / s[:rank])
    rho = sum(c * product_operator(lab) for c, lab in zip(coeffs, labels))
    residual = float(np.linalg.norm(a @ coeffs - b))
    return Reconstruction(np.asarray(rho, dtype=complex), residual, rank)


# --- fidelity --------------------------------------------------------------


@dataclass(frozen=True)
class CorrelationReport:
    c: float
    the_norm: float
    exp_norm: float

    def __str__(self) -> str:
        return f"c={self.c:.9f} the_norm={self.the_norm:.9f} exp_norm={self.exp_norm:.9f}"


def _tr_prod(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.real(np.sum(a.T * b)))


def attenuated_correlation(rho_exp: np.ndarray, rho_the: np.ndarray) -> CorrelationReport:
    """``Tr(the exp) / Tr(the the)``.

    Penalizes both a wrong direction and an overall loss of magnetization.
    """
    rho_exp = np.asarray(rho_exp, dtype=complex)
    rho_the = np.asarray(rho_the, dtype=complex)
    if rho_exp.shape != rho_the.shape:
        raise ValueError(f"shape mismatch {rho_exp.shape} vs {rho_the.shape}")
    the_norm = _tr_prod(rho_the, rho_the)
    if the_norm <= 0:
        raise ValueError("theoretical state has zero norm")
    return CorrelationReport(_tr_prod(rho_the, rho_exp) / the_norm, the_norm, _tr_prod(rho_exp, rho_exp))


@dataclass(frozen=True)
class OffsetResult:
    matrix: np.ndarray
    alpha: float
    rule: str


def identity_offset(rho_exp: np.ndarray, rho_target: np.ndarray) -> OffsetResult:
    """Add ``alpha * I`` to an experimental matrix to best match a target.

    The correlation is linear in ``alpha`` with slope ``Tr(target)``. For a
    traceless target it is unaffected and ``alpha`` minimizes the Frobenius
    distance instead (rule ``"frobenius"``). Otherwise the correlation has
    no finite maximum, so the same least-squares choice is used and the
    rule is reported as ``"frobenius (correlation unbounded)"``.
    """
    rho_exp = np.asarray(rho_exp, dtype=complex)
    rho_target = np.asarray(rho_target, dtype=complex)
    if rho_exp.shape != rho_target.shape:
        raise ValueError("shape mismatch")
    d = rho_exp.shape[0]
    alpha = -float(np.real(np.trace(rho_exp - rho_target))) / d
    traceless = abs(np.trace(rho_target)) < 1e-12
    rule = "frobenius" if traceless else "frobenius (correlation unbounded)"
    return OffsetResult(rho_exp + alpha * np.eye(d), alpha, rule)
