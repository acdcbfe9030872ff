"""Builtin toy system: two electrons in four spin orbitals.

Realized as a two-site Hubbard-form Hamiltonian in spatial-integral form
(hopping t, on-site repulsion U), so the whole ingestion/assembly pipeline
is exercised without external integral files.  Reference energies come from
the exact diagonalization oracle, never from literature values.
"""

from __future__ import annotations

import numpy as np

from .fcidump import SpatialIntegrals, assemble_hamiltonian
from .fermion import jordan_wigner
from .pauli import PauliSum
from .pool import PoolOperator, build_pool
from .statevector import StateVector, hf_state


def toy_integrals(t: float = 1.0, u: float = 2.0) -> SpatialIntegrals:
    """Two-site Hubbard chain as chemist-notation spatial integrals."""
    one = np.array([[0.0, -t], [-t, 0.0]])
    two = np.zeros((2, 2, 2, 2))
    two[0, 0, 0, 0] = u
    two[1, 1, 1, 1] = u
    return SpatialIntegrals(n_orb=2, n_elec=2, ms2=0, core_energy=0.0,
                            one_body=one, two_body=two)


def toy_system(t: float = 1.0, u: float = 2.0
               ) -> tuple[PauliSum, list[PoolOperator], StateVector]:
    """(qubit Hamiltonian, pool, reference determinant) for the toy model."""
    ints = toy_integrals(t, u)
    h = jordan_wigner(assemble_hamiltonian(ints), n_qubits=2 * ints.n_orb)
    pool = build_pool(ints.n_orb)
    reference = hf_state(2 * ints.n_orb, ints.n_alpha, ints.n_beta)
    return h, pool, reference
