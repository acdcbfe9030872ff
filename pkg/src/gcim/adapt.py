"""Adaptive outer loops over the generator pool.

Five variants share the machinery here:

* adapt-gcim          -- optimization-free subspace growth; operators are
                         ranked by the commutator gradient at a surrogate
                         product state with fixed rotation angles, and two
                         generating functions join the basis per iteration.
* adapt-vqe           -- reference adaptive VQE (BFGS re-optimization of all
                         parameters each iteration).
* adapt-vqe-gcim      -- adaptive VQE with a generalized-eigenvalue solve over
                         the accumulated rotations after every iteration.
* adapt-vqe-gcim-1    -- adaptive VQE followed by a single eigenvalue solve
                         over all selected rotations plus the final ansatz.
* adapt-gcim-mn       -- adapt-gcim with at most n optimizer rounds every
                         m-th iteration.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .pauli import PauliSum
from .pool import PoolOperator
from .statevector import ExactSpectrum, StateVector, apply_paulisum, exp_apply
from .subspace import (
    DEFAULT_S_THRESHOLD,
    BasisRecipe,
    GevpResult,
    SubspaceBasis,
    build_matrices,
    overlap_deficit,
    prepare_state,
    reconstruct_state,
    solve_gevp,
)

ADAPT_GCIM = "adapt-gcim"
ADAPT_VQE = "adapt-vqe"
ADAPT_VQE_GCIM = "adapt-vqe-gcim"
ADAPT_VQE_GCIM_1 = "adapt-vqe-gcim-1"
ADAPT_GCIM_MN = "adapt-gcim-mn"

ALGORITHMS = (ADAPT_GCIM, ADAPT_VQE, ADAPT_VQE_GCIM, ADAPT_VQE_GCIM_1, ADAPT_GCIM_MN)

MONOTONE_SLACK = 1e-10


@dataclass
class AdaptConfig:
    """Knobs shared by all variants; m and n only matter for adapt-gcim-mn."""

    algorithm: str = ADAPT_GCIM
    theta_init: float = math.pi / 4
    gcim_tol: float = 1e-6          # hartree, lowest-eigenvalue stability
    vqe_grad_tol: float = 1e-4      # sum of gradient magnitudes
    t_usr: int = 10                 # user cap on consecutive stable iterations
    max_iterations: int = 200
    s_threshold: float = DEFAULT_S_THRESHOLD
    jitter: float | None = None
    m: int = 5
    n: int = 2
    vqe_round_budget: int = 200
    vqe_gtol: float = 1e-8
    record_matrices: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        for name in ("gcim_tol", "vqe_grad_tol", "vqe_gtol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.t_usr < 1 or self.max_iterations < 1:
            raise ValueError("iteration counts must be positive")
        if self.m < 1 or self.n < 0:
            raise ValueError("need m >= 1 and n >= 0")


@dataclass
class IterationRecord:
    iteration: int
    selected_index: int | None
    selected_label: str | None
    gradients: list[float]
    gradient_max: float
    gradient_sum: float
    epsilon0: float | None
    vqe_energy: float | None
    subspace_dim: int
    kept_dim: int | None
    opt_rounds: int
    wall_time: float
    product_recipe: list[tuple[int, float]]


@dataclass
class AdaptTrace:
    algorithm: str
    records: list[IterationRecord] = field(default_factory=list)
    converged: bool = False
    reason: str = ""
    final_energy: float | None = None
    final_vqe_energy: float | None = None
    eigenvalues: list[float] = field(default_factory=list)
    basis: SubspaceBasis | None = None
    result: GevpResult | None = None
    final_state: StateVector | None = None
    time_gradients: float = 0.0
    time_energy: float = 0.0
    exact_energy: float | None = None
    energy_error: float | None = None
    overlap_deficit_value: float | None = None
    vqe_recipe: BasisRecipe | None = None
    matrix_log: list = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def total_opt_rounds(self) -> int:
        return sum(r.opt_rounds for r in self.records)

    def epsilon0_series(self) -> list[float]:
        return [r.epsilon0 for r in self.records if r.epsilon0 is not None]

    def attach_exact(self, spectrum: ExactSpectrum) -> None:
        """Fill error and overlap fields from an exact-diagonalization oracle."""
        self.exact_energy = float(spectrum.eigenvalues[0])
        if self.final_energy is not None:
            self.energy_error = float(self.final_energy - self.exact_energy)
        if self.final_state is not None:
            self.overlap_deficit_value = overlap_deficit(self.final_state,
                                                         spectrum.ground_state)


def pool_gradients(state: StateVector, h: PauliSum,
                   pool: list[PoolOperator]) -> np.ndarray:
    """<state|[H, A_l]|state> for every pool element (real by construction)."""
    w = apply_paulisum(h, state)
    return np.array([2.0 * w.inner(apply_paulisum(op.qubit, state)).real
                     for op in pool])


def select_operator(surrogate: StateVector, h: PauliSum, pool: list[PoolOperator],
                    excluded: set[int] | None = None) -> tuple[int, np.ndarray]:
    """Index of the largest-|gradient| candidate; ties go to the lowest index.

    The full gradient vector (including excluded entries) is returned for
    trace records.
    """
    excluded = excluded or set()
    candidates = [i for i in range(len(pool)) if i not in excluded]
    if not candidates:
        raise ValueError("empty candidate set: every pool operator is excluded")
    grads = pool_gradients(surrogate, h, pool)
    best = candidates[0]
    for i in candidates[1:]:
        if abs(grads[i]) > abs(grads[best]):
            best = i
    return best, grads


# ---------------------------------------------------------------------------
# product-ansatz energy, overlap and their analytic derivatives


def _forward_states(ops: list[PoolOperator], thetas: np.ndarray,
                    reference: StateVector) -> list[StateVector]:
    states = [reference]
    for op, th in zip(ops, thetas):
        states.append(exp_apply(op.qubit, float(th), states[-1]))
    return states


def ansatz_energy_gradient(h: PauliSum, ops: list[PoolOperator], thetas: np.ndarray,
                           reference: StateVector) -> tuple[float, np.ndarray]:
    """E(theta) = <ref|prod G† H prod G|ref> and dE/dtheta (reverse mode)."""
    states = _forward_states(ops, thetas, reference)
    psi = states[-1]
    w = apply_paulisum(h, psi)
    energy = psi.inner(w).real
    grads = np.zeros(len(ops))
    b = w
    for s in reversed(range(len(ops))):
        a_f = apply_paulisum(ops[s].qubit, states[s + 1])
        grads[s] = 2.0 * b.inner(a_f).real
        if s:
            b = exp_apply(ops[s].qubit, -float(thetas[s]), b)
    return float(energy), grads


def ansatz_overlap_gradient(target: StateVector, ops: list[PoolOperator],
                            thetas: np.ndarray, reference: StateVector
                            ) -> tuple[complex, np.ndarray]:
    """<target|psi(theta)> and its complex derivative per parameter."""
    states = _forward_states(ops, thetas, reference)
    ov = target.inner(states[-1])
    grads = np.zeros(len(ops), dtype=complex)
    b = target
    for s in reversed(range(len(ops))):
        grads[s] = b.inner(apply_paulisum(ops[s].qubit, states[s + 1]))
        if s:
            b = exp_apply(ops[s].qubit, -float(thetas[s]), b)
    return ov, grads


def vqe_minimize(h: PauliSum, pool: list[PoolOperator], recipe: BasisRecipe,
                 reference: StateVector, theta0: np.ndarray | None = None,
                 gtol: float = 1e-8, budget: int = 200
                 ) -> tuple[np.ndarray, float, int]:
    """BFGS minimization of the product-ansatz energy with analytic gradients.

    Returns (theta*, E(theta*), optimizer rounds).  Budget exhaustion is not
    an error; the best iterate found is returned.
    """
    if len(recipe) == 0:
        raise ValueError("empty recipe")
    ops = [pool[i] for i in recipe.pool_indices()]
    if theta0 is None:
        theta0 = np.array(recipe.thetas())
    theta0 = np.asarray(theta0, dtype=float)

    def fun(th):
        e, g = ansatz_energy_gradient(h, ops, th, reference)
        return e, g

    res = minimize(fun, theta0, jac=True, method="BFGS",
                   options={"gtol": gtol, "maxiter": budget})
    return np.asarray(res.x, dtype=float), float(res.fun), int(res.nit)


# ---------------------------------------------------------------------------
# GCIM family


class _GrowingMatrices:
    """Incrementally extended projected (H, S) pair over basis states."""

    def __init__(self, h: PauliSum):
        self.h = h
        self.states: list[StateVector] = []
        self.h_kets: list[StateVector] = []
        self.h_mat = np.zeros((0, 0), dtype=complex)
        self.s_mat = np.zeros((0, 0), dtype=complex)

    def add_state(self, psi: StateVector) -> None:
        m = len(self.states)
        h_new = np.zeros((m + 1, m + 1), dtype=complex)
        s_new = np.zeros((m + 1, m + 1), dtype=complex)
        h_new[:m, :m] = self.h_mat
        s_new[:m, :m] = self.s_mat
        h_ket = apply_paulisum(self.h, psi)
        for i, other in enumerate(self.states):
            h_new[i, m] = other.inner(h_ket)
            h_new[m, i] = np.conj(h_new[i, m])
            s_new[i, m] = other.inner(psi)
            s_new[m, i] = np.conj(s_new[i, m])
        h_new[m, m] = psi.inner(h_ket)
        s_new[m, m] = psi.inner(psi)
        self.states.append(psi)
        self.h_kets.append(h_ket)
        self.h_mat, self.s_mat = h_new, s_new


def _gcim_termination_window(pool_size: int, n_selected: int, t_usr: int) -> int:
    t_auto = math.ceil(0.2 * (pool_size - n_selected))
    return min(t_auto, t_usr)


def _matrix_log_entry(iteration: int, mats: "_GrowingMatrices",
                      result: GevpResult) -> dict:
    return {
        "iteration": iteration,
        "h_mat": mats.h_mat.copy(),
        "s_mat": mats.s_mat.copy(),
        "eigenvalues": [float(e) for e in result.eigenvalues],
        "kept_dim": result.kept_dim,
        "threshold": result.threshold,
    }


def _run_gcim_family(h: PauliSum, pool: list[PoolOperator], reference: StateVector,
                     config: AdaptConfig, optimize_every: int | None,
                     opt_round_cap: int) -> AdaptTrace:
    trace = AdaptTrace(algorithm=config.algorithm)
    basis = SubspaceBasis(reference=reference, pool=pool)
    mats = _GrowingMatrices(h)
    product = BasisRecipe()
    surrogate = reference
    selected: set[int] = set()
    eps_prev: float | None = None
    stable = 0
    result: GevpResult | None = None

    for k in range(1, config.max_iterations + 1):
        if len(selected) == len(pool):
            trace.converged = True
            trace.reason = "pool_exhausted"
            break
        tick = time.perf_counter()
        sel, grads = select_operator(surrogate, h, pool, selected)
        t_grad = time.perf_counter() - tick
        selected.add(sel)
        product = product.extended(sel, config.theta_init)

        tick = time.perf_counter()
        opt_rounds = 0
        if optimize_every is not None and k % optimize_every == 0 and opt_round_cap > 0:
            # on optimization iterations the fresh parameter starts at 0 (the
            # quasi-Newton convention); plain iterations keep theta_init
            theta0 = np.array(product.thetas())
            theta0[-1] = 0.0
            thetas, _, opt_rounds = vqe_minimize(
                h, pool, product, reference, theta0=theta0,
                gtol=config.vqe_gtol, budget=opt_round_cap)
            product = product.with_thetas(thetas)
            surrogate = prepare_state(product, pool, reference)
        else:
            surrogate = exp_apply(pool[sel].qubit, product.steps[-1][1], surrogate)

        single = BasisRecipe((product.steps[-1],))
        new_recipes = [BasisRecipe(), single] if k == 1 else [single, product]
        for recipe in new_recipes:
            if basis.append(recipe):
                mats.add_state(basis.states[-1])

        result = solve_gevp(mats.h_mat, mats.s_mat, config.s_threshold,
                            jitter=config.jitter)
        eps0 = result.ground_energy
        t_energy = time.perf_counter() - tick
        if config.record_matrices:
            trace.matrix_log.append(_matrix_log_entry(k, mats, result))

        if eps_prev is not None and eps0 > eps_prev + MONOTONE_SLACK:
            raise RuntimeError(
                f"lowest eigenvalue rose by {eps0 - eps_prev:.3e} at iteration {k}")

        trace.time_gradients += t_grad
        trace.time_energy += t_energy
        trace.records.append(IterationRecord(
            iteration=k, selected_index=sel, selected_label=pool[sel].label,
            gradients=[float(g) for g in grads],
            gradient_max=float(np.max(np.abs(grads))),
            gradient_sum=float(np.sum(np.abs(grads))),
            epsilon0=eps0, vqe_energy=None,
            subspace_dim=len(basis), kept_dim=result.kept_dim,
            opt_rounds=opt_rounds, wall_time=t_grad + t_energy,
            product_recipe=list(product.steps)))

        if eps_prev is not None and abs(eps0 - eps_prev) < config.gcim_tol:
            stable += 1
        else:
            stable = 0
        eps_prev = eps0
        window = _gcim_termination_window(len(pool), len(selected), config.t_usr)
        if stable >= window:
            trace.converged = True
            trace.reason = "pool_exhausted" if len(selected) == len(pool) else "delta_eps"
            break
    else:
        trace.reason = "max_iterations"

    if result is not None:
        trace.result = result
        trace.basis = basis
        trace.final_energy = result.ground_energy
        trace.eigenvalues = [float(e) for e in result.eigenvalues]
        trace.final_state = reconstruct_state(result, basis, 0)
    return trace


def run_adapt_gcim(h: PauliSum, pool: list[PoolOperator], reference: StateVector,
                   config: AdaptConfig | None = None) -> AdaptTrace:
    """Optimization-free ADAPT-GCIM (two generating functions per iteration)."""
    config = config or AdaptConfig(algorithm=ADAPT_GCIM)
    return _run_gcim_family(h, pool, reference, config, optimize_every=None,
                            opt_round_cap=0)


def run_adapt_gcim_mn(h: PauliSum, pool: list[PoolOperator], reference: StateVector,
                      config: AdaptConfig) -> AdaptTrace:
    """ADAPT-GCIM with at most config.n optimizer rounds every config.m iterations."""
    if config.n < 1:
        raise ValueError("the (m, n) variant needs n >= 1")
    return _run_gcim_family(h, pool, reference, config, optimize_every=config.m,
                            opt_round_cap=config.n)


# ---------------------------------------------------------------------------
# VQE family


def _run_vqe_family(h: PauliSum, pool: list[PoolOperator], reference: StateVector,
                    config: AdaptConfig, gcim_each_iteration: bool) -> AdaptTrace:
    trace = AdaptTrace(algorithm=config.algorithm)
    recipe = BasisRecipe()
    thetas = np.zeros(0)
    state = reference
    energy = apply_paulisum(h, reference).inner(reference).real
    basis = SubspaceBasis(reference=reference, pool=pool)
    mats = _GrowingMatrices(h) if gcim_each_iteration else None
    result: GevpResult | None = None

    for k in range(1, config.max_iterations + 1):
        tick = time.perf_counter()
        grads = pool_gradients(state, h, pool)
        t_grad = time.perf_counter() - tick
        trace.time_gradients += t_grad
        gsum = float(np.sum(np.abs(grads)))
        if gsum < config.vqe_grad_tol:
            trace.converged = True
            trace.reason = "gradient_norm"
            break

        sel = int(np.argmax(np.abs(grads)))
        recipe = recipe.extended(sel, 0.0)
        thetas = np.append(thetas, 0.0)

        tick = time.perf_counter()
        thetas, energy, rounds = vqe_minimize(
            h, pool, recipe, reference, theta0=thetas,
            gtol=config.vqe_gtol, budget=config.vqe_round_budget)
        recipe = recipe.with_thetas(thetas)
        state = prepare_state(recipe, pool, reference)

        eps0 = None
        kept = None
        if gcim_each_iteration:
            if basis.append(BasisRecipe((recipe.steps[-1],))):
                mats.add_state(basis.states[-1])
            if basis.append(recipe, dedupe=False):
                mats.add_state(basis.states[-1])
            result = solve_gevp(mats.h_mat, mats.s_mat, config.s_threshold,
                                jitter=config.jitter)
            eps0 = result.ground_energy
            kept = result.kept_dim
            if config.record_matrices:
                trace.matrix_log.append(_matrix_log_entry(k, mats, result))
            if eps0 > energy + MONOTONE_SLACK:
                raise RuntimeError(
                    f"subspace eigenvalue {eps0} exceeds the variational bound "
                    f"{energy} at iteration {k}")
        t_energy = time.perf_counter() - tick
        trace.time_energy += t_energy

        trace.records.append(IterationRecord(
            iteration=k, selected_index=sel, selected_label=pool[sel].label,
            gradients=[float(g) for g in grads],
            gradient_max=float(np.max(np.abs(grads))), gradient_sum=gsum,
            epsilon0=eps0, vqe_energy=float(energy),
            subspace_dim=len(basis) if gcim_each_iteration else len(recipe),
            kept_dim=kept, opt_rounds=rounds, wall_time=t_grad + t_energy,
            product_recipe=list(recipe.steps)))
    else:
        trace.reason = "max_iterations"

    trace.final_vqe_energy = float(energy)
    trace.final_state = state
    if gcim_each_iteration and result is not None:
        trace.result = result
        trace.basis = basis
        trace.final_energy = result.ground_energy
        trace.eigenvalues = [float(e) for e in result.eigenvalues]
        trace.final_state = reconstruct_state(result, basis, 0)
    else:
        trace.final_energy = float(energy)
    trace.vqe_recipe = recipe
    return trace


def run_adapt_vqe(h: PauliSum, pool: list[PoolOperator], reference: StateVector,
                  config: AdaptConfig | None = None) -> AdaptTrace:
    """Reference ADAPT-VQE: gradient selection plus full re-optimization."""
    config = config or AdaptConfig(algorithm=ADAPT_VQE)
    return _run_vqe_family(h, pool, reference, config, gcim_each_iteration=False)


def run_adapt_vqe_gcim(h: PauliSum, pool: list[PoolOperator], reference: StateVector,
                       config: AdaptConfig | None = None) -> AdaptTrace:
    """ADAPT-VQE with a subspace eigenvalue solve after each iteration."""
    config = config or AdaptConfig(algorithm=ADAPT_VQE_GCIM)
    return _run_vqe_family(h, pool, reference, config, gcim_each_iteration=True)


def run_adapt_vqe_gcim_one_shot(h: PauliSum, pool: list[PoolOperator],
                                reference: StateVector,
                                config: AdaptConfig | None = None) -> AdaptTrace:
    """Complete ADAPT-VQE, then one eigenvalue solve over all its rotations.

    The working subspace holds one generating function per Givens rotation in
    the final ansatz plus the ansatz itself.
    """
    config = config or AdaptConfig(algorithm=ADAPT_VQE_GCIM_1)
    trace = _run_vqe_family(h, pool, reference, config, gcim_each_iteration=False)
    recipe = trace.vqe_recipe
    basis = SubspaceBasis(reference=reference, pool=pool)
    for step in recipe.steps:
        basis.append(BasisRecipe((step,)), dedupe=False)
    if len(recipe) > 0:
        basis.append(recipe, dedupe=False)
    if len(basis) == 0:
        return trace
    h_mat, s_mat = build_matrices(basis, h)
    tick = time.perf_counter()
    result = solve_gevp(h_mat, s_mat, config.s_threshold, jitter=config.jitter)
    trace.time_energy += time.perf_counter() - tick
    if result.ground_energy > trace.final_vqe_energy + MONOTONE_SLACK:
        raise RuntimeError("one-shot eigenvalue exceeds the variational bound")
    trace.result = result
    trace.basis = basis
    trace.final_energy = result.ground_energy
    trace.eigenvalues = [float(e) for e in result.eigenvalues]
    trace.final_state = reconstruct_state(result, basis, 0)
    return trace


def run_algorithm(algorithm: str, h: PauliSum, pool: list[PoolOperator],
                  reference: StateVector, config: AdaptConfig) -> AdaptTrace:
    runner = {
        ADAPT_GCIM: run_adapt_gcim,
        ADAPT_VQE: run_adapt_vqe,
        ADAPT_VQE_GCIM: run_adapt_vqe_gcim,
        ADAPT_VQE_GCIM_1: run_adapt_vqe_gcim_one_shot,
        ADAPT_GCIM_MN: run_adapt_gcim_mn,
    }[algorithm]
    return runner(h, pool, reference, config)


# ---------------------------------------------------------------------------
# eigenvalue gradient (quotient rule over the projected pair)


def gcim_energy_gradient(h: PauliSum, pool: list[PoolOperator], basis: SubspaceBasis,
                         result: GevpResult, s: int, which: int = 0) -> float:
    """d eps_k / d theta_s for the rotation generated by pool operator s.

    The derivative matrices follow the sparse case table: entries change only
    in rows/columns of basis states whose recipe contains operator s, states
    are varied by applying the generator outermost, and the diagonal
    (both-sides) case uses the commutator form with zero overlap derivative.
    The eigenvector is renormalized to f† f = 1; the quotient is scale
    invariant, so this only fixes the convention.
    """
    m = len(basis)
    if not 0 <= which < result.kept_dim:
        raise IndexError("eigenvalue index out of range")
    has_s = [s in r.pool_indices() for r in basis.recipes]
    if not any(has_s):
        return 0.0
    a_op = pool[s].qubit
    f = result.eigenvectors[:, which]
    f = f / np.linalg.norm(f)

    h_kets = [apply_paulisum(h, psi) for psi in basis.states]
    a_kets = {i: apply_paulisum(a_op, basis.states[i])
              for i in range(m) if has_s[i]}

    dh = np.zeros((m, m), dtype=complex)
    ds = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            if has_s[i] and has_s[j]:
                dh[i, j] = h_kets[i].inner(a_kets[j]) + a_kets[i].inner(h_kets[j])
            elif has_s[i]:
                dh[i, j] = a_kets[i].inner(h_kets[j])
                ds[i, j] = a_kets[i].inner(basis.states[j])
            elif has_s[j]:
                dh[i, j] = h_kets[i].inner(a_kets[j])
                ds[i, j] = basis.states[i].inner(a_kets[j])

    h_mat, s_mat = build_matrices(basis, h)
    mean = lambda mat: complex(f.conj() @ mat @ f)
    s_mean = mean(s_mat)
    grad = (mean(dh) * s_mean - mean(h_mat) * mean(ds)) / s_mean ** 2
    return float(grad.real)


# ---------------------------------------------------------------------------
# UCC translation of a target state


def uccsd_recipe(pool: list[PoolOperator], n_occ_spatial: int,
                 theta: float = 0.0) -> BasisRecipe:
    """Recipe over the occupied-to-virtual subset of the pool (UCCSD ansatz).

    Skew generators carry both excitation directions, so a double qualifies
    when one spatial pair sits entirely in the occupied block and the other
    entirely in the virtual block (likewise for singles).
    """
    occ = lambda g: g < n_occ_spatial
    steps = []
    for i, op in enumerate(pool):
        if op.kind == "single":
            p, q = op.spatial
            if occ(p) != occ(q):
                steps.append((i, theta))
        else:
            p, q, r, s = op.spatial
            cre_block = {occ(p), occ(q)}
            ann_block = {occ(r), occ(s)}
            if len(cre_block) == 1 and len(ann_block) == 1 and cre_block != ann_block:
                steps.append((i, theta))
    return BasisRecipe(tuple(steps))


def ucc_translate(h: PauliSum, pool: list[PoolOperator], target: StateVector,
                  recipe: BasisRecipe, reference: StateVector,
                  theta0: np.ndarray | None = None, budget: int = 500
                  ) -> tuple[np.ndarray, float, float]:
    """Fit a fixed product ansatz to a target state by overlap maximization.

    Minimizes 1 - |<target|psi(theta)>|^2 with BFGS; returns
    (theta*, final deficit, ansatz energy at theta*).
    """
    if abs(target.norm() - 1.0) > 1e-8:
        raise ValueError("target must be normalized")
    ops = [pool[i] for i in recipe.pool_indices()]
    if theta0 is None:
        theta0 = np.array(recipe.thetas())
    theta0 = np.asarray(theta0, dtype=float)

    def fun(th):
        ov, dov = ansatz_overlap_gradient(target, ops, th, reference)
        deficit = 1.0 - abs(ov) ** 2
        grad = -2.0 * np.real(np.conj(ov) * dov)
        return deficit, grad

    res = minimize(fun, theta0, jac=True, method="BFGS",
                   options={"gtol": 1e-10, "maxiter": budget})
    theta_star = np.asarray(res.x, dtype=float)
    state = prepare_state(BasisRecipe(tuple(zip(recipe.pool_indices(), theta_star))),
                          pool, reference)
    energy = apply_paulisum(h, state).inner(state).real
    return theta_star, float(res.fun), float(energy)
