"""Non-orthogonal subspaces of generating functions and the projected
generalized eigenvalue problem.

A basis vector is described by a recipe: an ordered list of
(pool index, theta) rotations applied to the reference determinant.  The
projected pair (H, S) is solved by eigendecomposing S, keeping eigenvalues
above a threshold (canonical orthogonalization) and diagonalizing the
projected Hamiltonian in that subspace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliSum
from .pool import PoolOperator
from .statevector import StateVector, apply_paulisum, exp_apply

HARTREE_TO_EV = 27.211386245988

DEFAULT_S_THRESHOLD = 1e-13
NOISY_S_THRESHOLD = 1e-5


class EmptySubspaceError(RuntimeError):
    """All overlap eigenvalues fell below the truncation threshold."""


@dataclass(frozen=True)
class BasisRecipe:
    """Ordered (pool index, theta) rotations; steps[0] acts first."""

    steps: tuple[tuple[int, float], ...] = ()

    @classmethod
    def from_steps(cls, steps) -> "BasisRecipe":
        return cls(tuple((int(i), float(t)) for i, t in steps))

    def extended(self, pool_index: int, theta: float) -> "BasisRecipe":
        return BasisRecipe(self.steps + ((int(pool_index), float(theta)),))

    def with_thetas(self, thetas) -> "BasisRecipe":
        if len(thetas) != len(self.steps):
            raise ValueError("theta count mismatch")
        return BasisRecipe(tuple((i, float(t)) for (i, _), t in zip(self.steps, thetas)))

    def pool_indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.steps)

    def thetas(self) -> tuple[float, ...]:
        return tuple(t for _, t in self.steps)

    def __len__(self) -> int:
        return len(self.steps)


def prepare_state(recipe: BasisRecipe, pool: list[PoolOperator],
                  reference: StateVector) -> StateVector:
    state = reference
    for idx, theta in recipe.steps:
        state = exp_apply(pool[idx].qubit, theta, state)
    return state


@dataclass
class SubspaceBasis:
    """Recipes plus their cached statevectors.

    For a recipe-built basis the cached states regenerate exactly from
    (reference, pool, recipe); orthonormalized bases returned by
    orthogonalize_basis keep their source recipes for provenance only.
    """

    reference: StateVector
    pool: list[PoolOperator]
    recipes: list[BasisRecipe] = field(default_factory=list)
    states: list[StateVector] = field(default_factory=list)
    orthonormalized: bool = False

    def __len__(self) -> int:
        return len(self.recipes)

    def append(self, recipe: BasisRecipe, dedupe: bool = True) -> bool:
        """Add one generating function; returns False on a duplicate recipe."""
        if dedupe and recipe in set(self.recipes):
            return False
        self.recipes.append(recipe)
        self.states.append(prepare_state(recipe, self.pool, self.reference))
        return True

    def regenerate(self) -> None:
        self.states = [prepare_state(r, self.pool, self.reference) for r in self.recipes]


def build_matrices(basis: SubspaceBasis, h: PauliSum) -> tuple[np.ndarray, np.ndarray]:
    """Projected H_ij = <psi_i|H|psi_j> and overlap S_ij = <psi_i|psi_j>.

    Only the upper triangle is computed; the conjugate mirror enforces
    Hermitian symmetry exactly.
    """
    if not basis.states:
        raise ValueError("empty basis")
    m = len(basis.states)
    h_mat = np.zeros((m, m), dtype=complex)
    s_mat = np.zeros((m, m), dtype=complex)
    h_kets = [apply_paulisum(h, psi) for psi in basis.states]
    for i in range(m):
        for j in range(i, m):
            h_mat[i, j] = basis.states[i].inner(h_kets[j])
            s_mat[i, j] = basis.states[i].inner(basis.states[j])
            if i != j:
                h_mat[j, i] = np.conj(h_mat[i, j])
                s_mat[j, i] = np.conj(s_mat[i, j])
    return h_mat, s_mat


@dataclass(frozen=True)
class GevpResult:
    """Solution of H f = eps S f after overlap truncation.

    eigenvalues ascend; eigenvector columns live in the original basis
    coordinates and satisfy f† S f = 1.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    kept_dim: int
    dropped_s_eigenvalues: np.ndarray
    threshold: float

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])


def _tie_break(eigenvalues: np.ndarray, vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Order exact ties by the original-basis index of the dominant weight."""
    order = list(range(len(eigenvalues)))
    i = 0
    while i < len(order):
        j = i + 1
        scale = max(1.0, abs(eigenvalues[i]))
        while j < len(order) and abs(eigenvalues[order[j]] - eigenvalues[order[i]]) <= 1e-12 * scale:
            j += 1
        if j - i > 1:
            order[i:j] = sorted(order[i:j],
                                key=lambda c: int(np.argmax(np.abs(vectors[:, c]))))
        i = j
    order = np.array(order)
    return eigenvalues[order], vectors[:, order]


def solve_gevp(h_mat: np.ndarray, s_mat: np.ndarray,
               s_threshold: float = DEFAULT_S_THRESHOLD,
               jitter: float | None = None) -> GevpResult:
    """Solve the projected pair with overlap-eigenvalue truncation.

    S = U D U†; directions with D_ii <= s_threshold are dropped, the
    problem is solved in the kept eigenspace and eigenvectors are
    back-transformed to the original coordinates.  jitter (optional)
    additionally offsets the S diagonal before decomposition.
    """
    h_mat = np.asarray(h_mat, dtype=complex)
    s_mat = np.asarray(s_mat, dtype=complex)
    if h_mat.shape != s_mat.shape or h_mat.shape[0] != h_mat.shape[1]:
        raise ValueError("matrix shape mismatch")
    h_mat = 0.5 * (h_mat + h_mat.conj().T)
    s_mat = 0.5 * (s_mat + s_mat.conj().T)
    if jitter is not None:
        s_mat = s_mat + jitter * np.eye(s_mat.shape[0])
    d, u = np.linalg.eigh(s_mat)
    keep = d > s_threshold
    if not np.any(keep):
        raise EmptySubspaceError(
            f"no overlap eigenvalue above threshold {s_threshold:g}")
    dropped = d[~keep]
    x = u[:, keep] / np.sqrt(d[keep])  # canonical orthogonalization
    h_ortho = x.conj().T @ h_mat @ x
    h_ortho = 0.5 * (h_ortho + h_ortho.conj().T)
    eigenvalues, y = np.linalg.eigh(h_ortho)
    f = x @ y
    eigenvalues, f = _tie_break(eigenvalues, f)
    return GevpResult(eigenvalues=np.asarray(eigenvalues, dtype=float),
                      eigenvectors=f,
                      kept_dim=int(np.sum(keep)),
                      dropped_s_eigenvalues=np.sort(dropped)[::-1],
                      threshold=float(s_threshold))


def reconstruct_state(result: GevpResult, basis: SubspaceBasis,
                      which: int = 0) -> StateVector:
    """Normalized eigenstate sum_j f_j |psi_j> for eigenvalue index `which`."""
    if not 0 <= which < result.kept_dim:
        raise IndexError(f"eigenvalue index {which} outside kept range {result.kept_dim}")
    amps = np.zeros_like(basis.states[0].amplitudes)
    for f_j, psi in zip(result.eigenvectors[:, which], basis.states):
        amps = amps + f_j * psi.amplitudes
    return StateVector.from_array(amps).normalized()


def overlap_deficit(a: StateVector, b: StateVector) -> float:
    """1 - |<a|b>|^2 for normalized inputs; 0 means identical rays."""
    for v in (a, b):
        if abs(v.norm() - 1.0) > 1e-8:
            raise ValueError("overlap_deficit expects normalized states")
    val = 1.0 - abs(a.inner(b)) ** 2
    return float(min(1.0, max(0.0, val)))


def orthogonalize_basis(basis: SubspaceBasis, drop_tol: float = 1e-10) -> SubspaceBasis:
    """Modified Gram-Schmidt (with re-orthogonalization) over cached states.

    Vectors whose residual norm falls below drop_tol are removed; the span
    is preserved.
    """
    kept_states: list[StateVector] = []
    kept_recipes: list[BasisRecipe] = []
    for recipe, psi in zip(basis.recipes, basis.states):
        v = psi.amplitudes.copy()
        for _ in range(2):
            for q in kept_states:
                v -= np.vdot(q.amplitudes, v) * q.amplitudes
        nrm = np.linalg.norm(v)
        if nrm < drop_tol:
            continue
        kept_states.append(StateVector.from_array(v / nrm))
        kept_recipes.append(recipe)
    return SubspaceBasis(reference=basis.reference, pool=basis.pool,
                         recipes=kept_recipes, states=kept_states,
                         orthonormalized=True)


def excitation_energies(result: GevpResult) -> list[float]:
    """(eps_k - eps_0) in eV for k >= 1."""
    if len(result.eigenvalues) < 2:
        raise ValueError("need at least two kept eigenvalues for excitation energies")
    e0 = result.eigenvalues[0]
    return [float((e - e0) * HARTREE_TO_EV) for e in result.eigenvalues[1:]]
