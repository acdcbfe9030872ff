"""Exact statevector engine.

Convention: bit j of a statevector index is the occupation of spin orbital
j (qubit 0 least significant).  Operators are applied term-by-term from
their Pauli decomposition without materializing 2^n x 2^n matrices; the
dense path exists separately as an oracle (pauli.jw_to_matrix).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse.linalg as spla

from .pauli import PauliSum, ResourceLimitError, jw_to_matrix

TAYLOR_TERM_CUTOFF = 1e-14
_DENSE_EIG_MAX_QUBITS = 10

_HAS_BITCOUNT = hasattr(np, "bitwise_count")


@lru_cache(maxsize=64)
def _index_vector(n: int) -> np.ndarray:
    return np.arange(1 << n, dtype=np.int64)


@lru_cache(maxsize=2048)
def _sign_vector(zmask: int, n: int) -> np.ndarray:
    """(-1)^popcount(index & zmask) for every basis index."""
    idx = _index_vector(n)
    if _HAS_BITCOUNT:
        parity = np.bitwise_count(idx & zmask) & 1
    else:
        parity = np.zeros(idx.shape, dtype=np.int64)
        m = zmask
        while m:
            b = m & -m
            parity ^= (idx & b) != 0
            m ^= b
    return 1.0 - 2.0 * parity


@dataclass(frozen=True)
class StateVector:
    """Immutable complex amplitude vector over 2^n_qubits basis states."""

    amplitudes: np.ndarray
    n_qubits: int

    @classmethod
    def from_array(cls, amps: np.ndarray) -> "StateVector":
        amps = np.ascontiguousarray(amps, dtype=complex)
        n = int(amps.size - 1).bit_length()
        if amps.size != 1 << n:
            raise ValueError(f"amplitude count {amps.size} is not a power of two")
        amps.setflags(write=False)
        return cls(amps, n)

    @classmethod
    def basis_state(cls, n_qubits: int, index: int) -> "StateVector":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[index] = 1.0
        return cls.from_array(amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        return StateVector.from_array(self.amplitudes / self.norm())

    def inner(self, other: "StateVector") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def top_amplitudes(self, count: int = 8) -> list[dict]:
        """Largest-weight components, for debug dumps."""
        order = np.argsort(-np.abs(self.amplitudes))[:count]
        return [
            {"index": int(i),
             "bits": format(int(i), f"0{self.n_qubits}b")[::-1],
             "re": float(self.amplitudes[i].real),
             "im": float(self.amplitudes[i].imag)}
            for i in order if abs(self.amplitudes[i]) > 1e-12
        ]


def hf_state(n_qubits: int, n_alpha: int, n_beta: int) -> StateVector:
    """Hartree-Fock determinant under interleaved spin-orbital ordering.

    Occupies spin orbitals 0, 2, ..., 2(n_alpha-1) and 1, 3, ...,
    2(n_beta-1).
    """
    if n_alpha < 0 or n_beta < 0:
        raise ValueError("negative occupation")
    index = 0
    for a in range(n_alpha):
        bit = 2 * a
        if bit >= n_qubits:
            raise ValueError(f"occupation overflow: alpha orbital {a} needs qubit {bit}")
        index |= 1 << bit
    for b in range(n_beta):
        bit = 2 * b + 1
        if bit >= n_qubits:
            raise ValueError(f"occupation overflow: beta orbital {b} needs qubit {bit}")
        index |= 1 << bit
    return StateVector.basis_state(n_qubits, index)


def _apply_terms(h: PauliSum, amps: np.ndarray) -> np.ndarray:
    n = h.n_qubits
    out = np.zeros_like(amps)
    idx = _index_vector(n)
    for p, c in h.terms.items():
        vals = (c * (1j) ** p.y_count) * (_sign_vector(p.z, n) * amps)
        if p.x == 0:
            out += vals
        else:
            out[idx ^ p.x] += vals
    return out


def apply_paulisum(h: PauliSum, v: StateVector) -> StateVector:
    """h|v>, term by term; the result is in general unnormalized."""
    if h.n_qubits != v.n_qubits:
        raise ValueError("register size mismatch")
    return StateVector.from_array(_apply_terms(h, v.amplitudes))


def exp_apply(a: PauliSum, theta: float, v: StateVector,
              max_terms: int = 400) -> StateVector:
    """exp(theta * a)|v> by adaptive truncated Taylor series.

    a must be anti-Hermitian (checked to 1e-12); the series is extended
    until the appended term's norm drops below 1e-14, which preserves the
    input norm to ~1e-12.
    """
    if a.n_qubits != v.n_qubits:
        raise ValueError("register size mismatch")
    if not a.is_anti_hermitian(1e-12):
        raise ValueError("generator is not anti-Hermitian")
    if theta == 0.0 or not a.terms:
        return v
    acc = v.amplitudes.copy()
    term = v.amplitudes
    for k in range(1, max_terms + 1):
        term = (theta / k) * _apply_terms(a, term)
        acc += term
        if np.linalg.norm(term) < TAYLOR_TERM_CUTOFF:
            return StateVector.from_array(acc)
    raise RuntimeError(f"Taylor series did not converge in {max_terms} terms")


def expectation(bra: StateVector, h: PauliSum | None, ket: StateVector) -> complex:
    """<bra|h|ket>; h = None (or identity) gives the plain overlap."""
    if bra.n_qubits != ket.n_qubits:
        raise ValueError("register size mismatch")
    if h is None:
        return bra.inner(ket)
    if h.n_qubits != ket.n_qubits:
        raise ValueError("register size mismatch")
    return complex(np.vdot(bra.amplitudes, _apply_terms(h, ket.amplitudes)))


def overlap(a: StateVector, b: StateVector) -> complex:
    return expectation(a, None, b)


@dataclass(frozen=True)
class ExactSpectrum:
    """Lowest eigenvalues (ascending, hartree) and the ground eigenvector."""

    eigenvalues: np.ndarray
    ground_state: StateVector


def exact_spectrum(h: PauliSum, k: int = 1) -> ExactSpectrum:
    """Lowest k eigenpairs of a Hermitian PauliSum.

    Dense eigensolve up to 10 qubits; restarted Krylov (ARPACK, full
    reorthogonalization) above.  Residuals are verified to 1e-9.
    """
    n = h.n_qubits
    if n > 16:
        raise ResourceLimitError(f"spectrum for {n} qubits exceeds the desk-scale limit")
    if not h.is_hermitian(1e-10):
        raise ValueError("Hamiltonian is not Hermitian")
    dim = 1 << n
    k = min(k, dim)
    if n <= _DENSE_EIG_MAX_QUBITS or k >= dim - 1:
        mat = jw_to_matrix(h)
        evals, evecs = np.linalg.eigh(mat)
        vals = evals[:k]
        ground = evecs[:, 0]
    else:
        op = spla.LinearOperator(
            (dim, dim), matvec=lambda x: _apply_terms(h, x.astype(complex)),
            dtype=complex)
        evals, evecs = spla.eigsh(op, k=max(k, 2), which="SA")
        order = np.argsort(evals)
        vals = evals[order][:k]
        ground = evecs[:, order[0]]
    ground = ground / np.linalg.norm(ground)
    resid = np.linalg.norm(_apply_terms(h, ground) - vals[0] * ground)
    if resid > 1e-9:
        raise RuntimeError(f"eigensolver residual {resid:.3e} exceeds 1e-9")
    return ExactSpectrum(np.asarray(vals, dtype=float),
                         StateVector.from_array(ground))
