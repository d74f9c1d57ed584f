"""Operator algebra for small ensembles of spin-1/2 nuclei.

Conventions
-----------
Spins are numbered from 1 (leftmost ket label, most significant bit).
Basis index ``k`` in ``range(2**n)`` labels the ket whose binary expansion
gives the spin states, with bit value 1 meaning the "down" state
(m_z = -1/2). So for three spins ``|001>`` is index 1 and ``|100>`` is 4.

Matrices are plain ``numpy`` complex arrays of shape ``(2**n, 2**n)``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI = {"1": IDENTITY, "x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
LABELS = "1xyz"


def num_spins(dim: int) -> int:
    """Spin count for a Hilbert-space dimension, rejecting non powers of two."""
    if dim < 1 or dim & (dim - 1):
        raise ValueError(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def _check_spin(n: int, j: int) -> None:
    if not 1 <= j <= n:
        raise ValueError(f"spin index {j} out of range 1..{n}")


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, factors)


def embed_pauli(n: int, j: int, axis: str) -> np.ndarray:
    """Pauli matrix ``axis`` acting on spin ``j`` of ``n``, identity elsewhere."""
    _check_spin(n, j)
    if axis not in ("x", "y", "z"):
        raise ValueError(f"unknown axis {axis!r}")
    factors = [IDENTITY] * n
    factors[j - 1] = PAULI[axis]
    return kron_all(factors)


def projector(n: int, j: int, sign: int) -> np.ndarray:
    """``(I + sign * sigma_z^j) / 2``: projector onto spin ``j`` up (+1) or down (-1)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return 0.5 * (np.eye(2**n, dtype=complex) + sign * embed_pauli(n, j, "z"))


def product_operator(labels: str) -> np.ndarray:
    """Tensor product for a label string such as ``"zx1"`` (one char per spin)."""
    try:
        return kron_all(PAULI[c] for c in labels)
    except KeyError as exc:
        raise ValueError(f"bad product-operator label {labels!r}") from exc


def basis_labels(n: int) -> list[str]:
    """All ``4**n`` product-operator labels, identity first, in ``1xyz`` order."""
    return ["".join(t) for t in itertools.product(LABELS, repeat=n)]


@dataclass(frozen=True)
class ProductOperatorTerm:
    """A real coefficient times one product operator, e.g. ``0.5 * zz1``."""

    coefficient: float
    labels: str

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return sum(c != "1" for c in self.labels)

    def matrix(self) -> np.ndarray:
        return self.coefficient * product_operator(self.labels)

    def pretty(self) -> str:
        factors = [f"{c}{j}" for j, c in enumerate(self.labels, start=1) if c != "1"]
        return f"{self.coefficient:+.12g} " + ("*".join(factors) if factors else "1")


def hermiticity_error(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def decompose(a: np.ndarray, threshold: float = 1e-12) -> list[ProductOperatorTerm]:
    """Expand a Hermitian matrix in the product-operator basis.

    Coefficients are ``Tr(T a) / 2**n``. Terms whose magnitude falls below
    ``threshold`` are dropped. The returned list follows basis order
    (see :func:`basis_labels`).

    Raises:
        ValueError: if ``a`` is not Hermitian, since some coefficient would
            then carry an imaginary part.
    """
    a = np.asarray(a, dtype=complex)
    n = num_spins(a.shape[0])
    if a.shape != (2**n, 2**n):
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    err = hermiticity_error(a)
    if err > 1e-10:
        raise ValueError(f"matrix is not Hermitian (max deviation {err:.3g})")
    terms = []
    for labels in basis_labels(n):
        # Tr(T a) without forming T @ a
        c = np.sum(product_operator(labels).T * a) / 2**n
        if abs(c.imag) > 1e-10:
            raise ValueError(f"imaginary coefficient {c} for {labels}")
        if abs(c.real) >= threshold:
            terms.append(ProductOperatorTerm(float(c.real), labels))
    return terms


def recompose(terms: Sequence[ProductOperatorTerm], n: int | None = None) -> np.ndarray:
    """Inverse of :func:`decompose`. ``n`` is needed only for an empty list."""
    if not terms:
        if n is None:
            raise ValueError("spin count required to recompose an empty expansion")
        return np.zeros((2**n, 2**n), dtype=complex)
    return sum(t.matrix() for t in terms)


def expansion_dict(a: np.ndarray, threshold: float = 1e-12) -> dict[str, float]:
    return {t.labels: t.coefficient for t in decompose(a, threshold)}


def coherence_order(k: int, l: int, n: int) -> int:
    """Difference in total m_z between ``|k>`` and ``|l>``, in units of hbar.

    Bit value 1 is spin down, so this is ``popcount(l) - popcount(k)``.
    """
    if not (0 <= k < 2**n and 0 <= l < 2**n):
        raise ValueError(f"basis index out of range for n={n}")
    return bin(l).count("1") - bin(k).count("1")


def coherence_order_matrix(n: int) -> np.ndarray:
    """Integer matrix of coherence orders for every ``(k, l)`` pair."""
    pop = np.array([bin(k).count("1") for k in range(2**n)])
    return pop[None, :] - pop[:, None]


def spin_bits(n: int) -> np.ndarray:
    """``(2**n, n)`` array; row ``k`` holds the bit of each spin in ``|k>``."""
    k = np.arange(2**n)
    return (k[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1


def partial_trace(rho: np.ndarray, keep: Iterable[int]) -> np.ndarray:
    """Trace out every spin not in ``keep`` (1-based spin indices)."""
    rho = np.asarray(rho, dtype=complex)
    n = num_spins(rho.shape[0])
    keep = sorted(set(keep))
    for j in keep:
        _check_spin(n, j)
    drop = [j for j in range(1, n + 1) if j not in keep]
    t = rho.reshape([2] * (2 * n))
    # ket axes 0..n-1, bra axes n..2n-1; trace from the highest spin down
    for j in sorted(drop, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=j - 1, axis2=m + j - 1)
    d = 2 ** len(keep)
    return t.reshape(d, d) if keep else np.asarray(t).reshape(1, 1)


def ket(bits: str) -> np.ndarray:
    """Computational-basis ket for a bit string like ``"010"``."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def basis_state_labels(n: int) -> list[str]:
    return [format(k, f"0{n}b") for k in range(2**n)]


# --- serialization -------------------------------------------------------


def matrix_to_json(a: np.ndarray) -> str:
    a = np.asarray(a, dtype=complex)
    num_spins(a.shape[0])
    entries = [[float(z.real), float(z.imag)] for z in a.ravel()]
    return json.dumps({"dim": int(a.shape[0]), "entries": entries})


def matrix_from_json(text: str) -> np.ndarray:
    obj = json.loads(text)
    dim = int(obj["dim"])
    num_spins(dim)
    entries = obj["entries"]
    if len(entries) != dim * dim:
        raise ValueError(f"expected {dim * dim} entries, found {len(entries)}")
    arr = np.array([complex(re, im) for re, im in entries], dtype=complex)
    return arr.reshape(dim, dim)


def matrix_to_csv(a: np.ndarray) -> str:
    """One line per row, ``re,im`` pairs for every column."""
    a = np.asarray(a, dtype=complex)
    lines = []
    for row in a:
        lines.append(",".join(f"{z.real!r},{z.imag!r}" for z in row.tolist()))
    return "\n".join(lines) + "\n"


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [line for line in text.splitlines() if line.strip()]
    data = np.array([[float(v) for v in line.split(",")] for line in rows])
    if data.shape[1] != 2 * data.shape[0]:
        raise ValueError("CSV matrix must have two columns per entry")
    num_spins(data.shape[0])
    return data[:, 0::2] + 1j * data[:, 1::2]


def save_matrix(path, a: np.ndarray) -> None:
    path = str(path)
    text = matrix_to_csv(a) if path.endswith(".csv") else matrix_to_json(a)
    with open(path, "w") as fh:
        fh.write(text)


def load_matrix(path) -> np.ndarray:
    path = str(path)
    with open(path) as fh:
        text = fh.read()
    return matrix_from_csv(text) if path.endswith(".csv") else matrix_from_json(text)
