"""Coherent drift noise: per-qubit flip/energy generator and exact time evolution.

The error Hamiltonian is H = sum_i (lam_i X_i + mu_i P0_i), where X_i flips
qubit i and P0_i adds mu_i to every basis state whose qubit i reads 0 (the
energy origin sits on the 0 value; only energy differences are observable).
Units are natural, hbar = 1: all rates are radians per unit time.

At first order this generator phases the code words through the diagonal
terms and leaks amplitude only into single-flip basis states, while
double-flip transitions appear at second order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .states import StateVector

HERMITIAN_TOL = 1e-12

#: truncation bound for the series fallback of the propagator
SERIES_TOL = 1e-12


@dataclass(frozen=True)
class NoiseSpec:
    """Per-qubit coherent drift parameters.

    lam[i] couples qubit i to a bit flip; mu[i] is the diagonal energy of its
    0 value. The all-zero spec is the exact no-noise case.
    """

    lam: tuple[float, ...]
    mu: tuple[float, ...] = field(default=())

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lam)
        mu = tuple(float(x) for x in self.mu) if self.mu else (0.0,) * len(lam)
        if len(lam) == 0:
            raise ValueError("noise spec needs at least one qubit entry")
        if len(mu) != len(lam):
            raise ValueError(f"lam has {len(lam)} entries but mu has {len(mu)}")
        for name, values in (("lam", lam), ("mu", mu)):
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"{name} entries must be finite, got {values}")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    @property
    def num_qubits(self) -> int:
        return len(self.lam)

    @classmethod
    def zero(cls, num_qubits: int) -> "NoiseSpec":
        return cls(lam=(0.0,) * num_qubits, mu=(0.0,) * num_qubits)

    @classmethod
    def flip(cls, strength: float, num_qubits: int) -> "NoiseSpec":
        """Flip coupling ``strength`` on every qubit, no diagonal energy."""
        return cls(lam=(float(strength),) * num_qubits, mu=(0.0,) * num_qubits)


class HermitianOperator:
    """A 2**k x 2**k complex matrix equal to its conjugate transpose."""

    __slots__ = ("matrix",)

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"operator must be square, got shape {m.shape}")
        dim = m.shape[0]
        if dim < 2 or dim & (dim - 1) != 0:
            raise ValueError(f"dimension must be a power of two >= 2, got {dim}")
        defect = np.max(np.abs(m - m.conj().T))
        if defect > HERMITIAN_TOL:
            raise ValueError(f"matrix is not Hermitian (deviation {defect:.3e})")
        m.flags.writeable = False
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def __repr__(self) -> str:
        return f"HermitianOperator(dim={self.dim})"


def build_hamiltonian(spec: NoiseSpec, num_qubits: int) -> HermitianOperator:
    """Assemble H = sum_i (lam_i X_i + mu_i P0_i) on ``num_qubits`` qubits."""
    if spec.num_qubits != num_qubits:
        raise ValueError(
            f"noise spec covers {spec.num_qubits} qubit(s) but the register has {num_qubits}"
        )
    dim = 1 << num_qubits
    h = np.zeros((dim, dim), dtype=complex)
    for q in range(num_qubits):
        mask = 1 << (num_qubits - 1 - q)
        for b in range(dim):
            if b & mask == 0:
                h[b, b] += spec.mu[q]
            h[b ^ mask, b] += spec.lam[q]
    return HermitianOperator(h)


def propagator(h: HermitianOperator, t: float, method: str = "eigh") -> np.ndarray:
    """Unitary exp(-i H t).

    ``method`` selects the route: "eigh" diagonalizes (exact at these
    dimensions); "series" sums the Taylor expansion with its truncation
    error bounded below SERIES_TOL, as an independent cross-check.
    """
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    if t == 0.0:
        return np.eye(h.dim, dtype=complex)
    if method == "eigh":
        w, v = np.linalg.eigh(h.matrix)
        return (v * np.exp(-1j * w * t)) @ v.conj().T
    if method == "series":
        return _series_propagator(h.matrix, t)
    raise ValueError(f"unknown method {method!r} (expected 'eigh' or 'series')")


def _series_propagator(m: np.ndarray, t: float) -> np.ndarray:
    # scale so the series converges fast, then square back up
    theta = float(np.linalg.norm(m, 2)) * abs(t)
    squarings = 0
    while theta > 0.5:
        theta /= 2.0
        squarings += 1
    a = m * (-1j * t / (1 << squarings))
    tol = SERIES_TOL / (1 << (squarings + 1))
    dim = m.shape[0]
    term = np.eye(dim, dtype=complex)
    total = term.copy()
    for k in range(1, 60):
        term = term @ a / k
        total += term
        tail = theta ** (k + 1) / math.factorial(k + 1) / (1.0 - theta / (k + 2))
        if tail < tol:
            break
    else:
        raise RuntimeError("series propagator failed to converge")
    for _ in range(squarings):
        total = total @ total
    return total


def apply_propagator(state: StateVector, u: np.ndarray) -> StateVector:
    """Apply a precomputed propagator matrix; norm must stay within tolerance."""
    if u.shape != (state.amplitudes.size, state.amplitudes.size):
        raise ValueError(
            f"propagator shape {u.shape} does not match state dimension {state.amplitudes.size}"
        )
    return StateVector._checked(state.num_qubits, u @ state.amplitudes)


def evolve_exact(
    state: StateVector, h: HermitianOperator, t: float, method: str = "eigh"
) -> StateVector:
    """Evolve by exp(-i H t); unitary, composes additively in t."""
    if h.dim != state.amplitudes.size:
        raise ValueError(f"operator dim {h.dim} does not match state dim {state.amplitudes.size}")
    return apply_propagator(state, propagator(h, t, method))


def evolve_first_order(state: StateVector, h: HermitianOperator, t: float) -> StateVector:
    """Short-time expansion (I - i H t) psi, returned unnormalized.

    The output norm differs from 1 at O(t^2); it is deliberately not repaired
    and the result is marked is_normalized=False.
    """
    if h.dim != state.amplitudes.size:
        raise ValueError(f"operator dim {h.dim} does not match state dim {state.amplitudes.size}")
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    amps = state.amplitudes - 1j * t * (h.matrix @ state.amplitudes)
    return StateVector.unnormalized(state.num_qubits, amps)


def expansion_defect(state: StateVector, h: HermitianOperator, t: float) -> float:
    """Euclidean distance between exact and first-order evolution; O(t^2)."""
    exact = evolve_exact(state, h, t)
    first = evolve_first_order(state, h, t)
    return float(np.linalg.norm(exact.amplitudes - first.amplitudes))
