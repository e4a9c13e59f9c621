"""Three-level ground / exciton / biexciton model of a quantum dot.

The biexciton is pumped by a resonant two-photon drive of effective rate
``g2``; a resonant probe drives the exciton transition. Density matrices are
3x3 complex arrays over the ordered basis (g, X, XX) and superoperators act
on column-stacked (Fortran order) vectorizations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import GridTooCoarseError, NoSteadyStateError, UndefinedRatioError
from .model import ThreeLevelParams, TimeGrid, rabi_frequency, require_valid

G, X, XX = 0, 1, 2
DIM = 3

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9
# P_XX below this is treated as an empty biexciton level
EMPTY_LEVEL = 1e-12
MAX_STEP_FRACTION = 0.1


def ket_bra(i: int, j: int) -> np.ndarray:
    m = np.zeros((DIM, DIM), dtype=complex)
    m[i, j] = 1.0
    return m


def pure_state(level: int) -> np.ndarray:
    return ket_bra(level, level)


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape(DIM, DIM, order="F")


def density_matrix_problems(rho: np.ndarray) -> list[str]:
    """List the violated density-matrix invariants of ``rho`` (empty if none)."""
    rho = np.asarray(rho)
    problems = []
    if rho.shape != (DIM, DIM):
        return [f"density matrix must be {DIM}x{DIM}, got {rho.shape}"]
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > HERMITICITY_TOL:
        problems.append(f"not Hermitian (deviation {herm:.3g})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        problems.append(f"trace {tr.real:.12g} differs from 1")
    lam_min = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0]
    if lam_min < -POSITIVITY_TOL:
        problems.append(f"negative eigenvalue {lam_min:.3g}")
    return problems


def build_hamiltonian(params: ThreeLevelParams) -> np.ndarray:
    """Rotating-frame Hamiltonian (over hbar) of the pumped, probed dot.

    The probe term ``i*Omega/2 * (|g><X| - |X><g|)`` is chosen so that the
    (g, X) block obeys the two-level Bloch equations with ``+Omega <s_z>``
    and ``-Omega Re<s->`` drive terms.
    """
    require_valid(params)
    omega = rabi_frequency(params)
    H = params.g2 * (ket_bra(XX, G) + ket_bra(G, XX))
    H = H + 0.5j * omega * (ket_bra(G, X) - ket_bra(X, G))
    H = H - params.delta_2ph * ket_bra(XX, XX)
    return H


def _commutator_super(H: np.ndarray) -> np.ndarray:
    eye = np.eye(DIM)
    return -1j * (np.kron(eye, H) - np.kron(H.T, eye))


def dissipator_super(C: np.ndarray) -> np.ndarray:
    """Superoperator of ``C rho C^+ - {C^+ C, rho} / 2``."""
    eye = np.eye(DIM)
    cdc = C.conj().T @ C
    return np.kron(C.conj(), C) - 0.5 * np.kron(eye, cdc) - 0.5 * np.kron(cdc.T, eye)


def collapse_operators(params: ThreeLevelParams) -> list[np.ndarray]:
    ops = [
        math.sqrt(params.gamma_XX) * ket_bra(X, XX),
        math.sqrt(params.gamma_X) * ket_bra(G, X),
    ]
    if params.gamma_star > 0:
        # damps each g-X and g-XX coherence at gamma_star / 2
        ops.append(math.sqrt(params.gamma_star) * ket_bra(X, X))
        ops.append(math.sqrt(params.gamma_star) * ket_bra(XX, XX))
    return ops


def build_liouvillian(params: ThreeLevelParams) -> np.ndarray:
    """9x9 generator acting on ``vec(rho)``."""
    L = _commutator_super(build_hamiltonian(params))
    for C in collapse_operators(params):
        L = L + dissipator_super(C)
    return L


def apply_liouvillian(L: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return unvec(L @ vec(rho))


@dataclass(frozen=True, eq=False)
class ThreeLevelTrajectory:
    times: np.ndarray
    rho: np.ndarray  # shape (n_times, 3, 3)

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diagonal(self.rho, axis1=1, axis2=2))


def propagate(L: np.ndarray, rho0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """``rho(t) = unvec(expm(L t) vec(rho0))`` for each sample time."""
    times = np.asarray(times, dtype=float)
    props = expm(L[None, :, :] * times[:, None, None])
    v = props @ vec(rho0)
    # row-wise unvec: column stacking means vector index i + DIM*j -> (i, j)
    return v.reshape(len(times), DIM, DIM).transpose(0, 2, 1).copy()


def fastest_rate(params: ThreeLevelParams) -> float:
    return max(
        params.gamma_X,
        params.gamma_XX,
        params.g2,
        params.gamma_star,
        abs(params.delta_2ph),
        rabi_frequency(params),
    )


def evolve_three_level(
    params: ThreeLevelParams, rho0: np.ndarray, grid: TimeGrid
) -> ThreeLevelTrajectory:
    require_valid(params)
    require_valid(grid)
    problems = density_matrix_problems(rho0)
    if problems:
        raise ValueError("invalid initial density matrix: " + "; ".join(problems))
    if grid.dt > MAX_STEP_FRACTION / fastest_rate(params):
        raise GridTooCoarseError(
            f"grid too coarse: dt={grid.dt:g} exceeds {MAX_STEP_FRACTION}/max rate"
        )
    times = grid.times
    rho = propagate(build_liouvillian(params), np.asarray(rho0, dtype=complex), times)
    rho[0] = rho0
    return ThreeLevelTrajectory(times, rho)


def steady_state_three_level(params: ThreeLevelParams) -> np.ndarray:
    """Unique stationary density matrix.

    The first row of ``L vec(rho) = 0`` is replaced by the trace condition.
    """
    L = build_liouvillian(params)
    rank = np.linalg.matrix_rank(L)
    if rank < DIM * DIM - 1:
        raise NoSteadyStateError(
            f"non-unique steady state (Liouvillian rank {rank}) for "
            f"gamma_X={params.gamma_X}, gamma_XX={params.gamma_XX}, g2={params.g2}, "
            f"p={params.p}, beta={params.beta}"
        )
    M = L.copy()
    M[0, :] = vec(np.eye(DIM))
    rhs = np.zeros(DIM * DIM, dtype=complex)
    rhs[0] = 1.0
    if np.linalg.cond(M) > 1e12:
        warnings.warn("ill-conditioned steady-state system, using least squares", RuntimeWarning)
        v = np.linalg.lstsq(M, rhs, rcond=None)[0]
    else:
        v = np.linalg.solve(M, rhs)
    rho = unvec(v)
    return 0.5 * (rho + rho.conj().T)


@dataclass(frozen=True)
class ThreeLevelObservables:
    """Populations, biexciton photon rate and probe absorption of one state."""

    P_g: float
    P_X: float
    P_XX: float
    N_3L: float
    W_3L: float
    gamma_X: float

    @property
    def beta_R_3L(self) -> float:
        """Reflection ratio inferred from the biexciton emission rate."""
        if self.P_XX <= EMPTY_LEVEL or self.N_3L <= 0:
            raise UndefinedRatioError("beta_R_3L undefined: biexciton level is empty")
        return 0.5 * self.gamma_X * self.P_X / self.N_3L


def observables_three_level(
    rho: np.ndarray, params: ThreeLevelParams
) -> ThreeLevelObservables:
    pops = np.real(np.diag(rho))
    omega = rabi_frequency(params)
    # <|g><X|> = rho[X, g]
    W = -omega * float(np.real(rho[X, G]))
    return ThreeLevelObservables(
        P_g=float(pops[G]),
        P_X=float(pops[X]),
        P_XX=float(pops[XX]),
        N_3L=params.gamma_XX * float(pops[XX]),
        W_3L=W,
        gamma_X=params.gamma_X,
    )
