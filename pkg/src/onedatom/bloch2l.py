"""Two-level Bloch equations with incoherent pump and pure dephasing.

The state is carried internally as the real vector ``x = (Re s-, Im s-, s_z)``
and the equations of motion are affine, ``dx/dt = A x + b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np
from scipy.linalg import expm

from .errors import GridTooCoarseError, NoSteadyStateError
from .model import TimeGrid, TwoLevelParams, rabi_frequency, require_valid

BLOCH_BALL_TOL = 1e-9
MAX_STEP_FRACTION = 0.1


@dataclass(frozen=True)
class BlochState:
    s_minus: complex
    s_z: float

    @property
    def pe(self) -> float:
        return self.s_z + 0.5

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.s_minus.real, self.s_minus.imag, self.s_z])

    @classmethod
    def from_vector(cls, x) -> "BlochState":
        return cls(complex(x[0], x[1]), float(x[2]))

    def is_physical(self, tol: float = BLOCH_BALL_TOL) -> bool:
        r2 = abs(self.s_minus) ** 2 + self.s_z**2
        return r2 <= 0.25 + tol and abs(self.s_z) <= 0.5 + tol


EXCITED = BlochState(0j, 0.5)
GROUND = BlochState(0j, -0.5)


@dataclass(frozen=True, eq=False)
class BlochTrajectory:
    """Sampled solution; ``x`` has one ``(Re s-, Im s-, s_z)`` row per time."""

    times: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        if self.x.shape != (len(self.times), 3):
            raise ValueError("trajectory needs one 3-vector per sample time")

    def __len__(self) -> int:
        return len(self.times)

    def __getitem__(self, i: int) -> BlochState:
        return BlochState.from_vector(self.x[i])

    def __iter__(self) -> Iterator[BlochState]:
        return (BlochState.from_vector(row) for row in self.x)

    @property
    def s_minus(self) -> np.ndarray:
        return self.x[:, 0] + 1j * self.x[:, 1]

    @property
    def s_z(self) -> np.ndarray:
        return self.x[:, 2]

    @property
    def pe(self) -> np.ndarray:
        return self.x[:, 2] + 0.5

    def bloch_radius2(self) -> np.ndarray:
        return np.sum(self.x**2, axis=1)


def bloch_matrix(params: TwoLevelParams) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(A, b)`` such that ``dx/dt = A x + b``."""
    require_valid(params)
    omega = rabi_frequency(params)
    g2 = 0.5 * (params.gamma + params.gamma_star + params.xi)
    g1 = params.gamma + params.xi
    d = params.delta_L
    A = np.array(
        [
            [-g2, -d, omega],
            [d, -g2, 0.0],
            [-omega, 0.0, -g1],
        ]
    )
    b = np.array([0.0, 0.0, 0.5 * (params.xi - params.gamma)])
    return A, b


def bloch_rhs(state: BlochState, params: TwoLevelParams) -> BlochState:
    """Time derivative of ``(<s->, <s_z>)``, packed as a BlochState."""
    A, b = bloch_matrix(params)
    return BlochState.from_vector(A @ state.vector + b)


def fastest_rate(params: TwoLevelParams) -> float:
    return max(
        params.gamma + params.gamma_star + params.xi,
        rabi_frequency(params),
        abs(params.delta_L),
    )


def default_grid(params: TwoLevelParams, t_max: float = 10.0) -> TimeGrid:
    """Grid with ``dt = min(1e-3/gamma, 0.02/Omega)``."""
    dt = 1e-3 / params.gamma
    omega = rabi_frequency(params)
    if omega > 0:
        dt = min(dt, 0.02 / omega)
    return TimeGrid.with_max_step(t_max, dt)


def _check_init(init: BlochState) -> None:
    if not init.is_physical():
        raise ValueError(f"initial state {init} lies outside the Bloch ball")


def evolve_rk4(
    params: TwoLevelParams, init: BlochState = EXCITED, grid: Optional[TimeGrid] = None
) -> BlochTrajectory:
    """Classic fixed-step fourth-order Runge-Kutta, one step per grid interval."""
    grid = grid or default_grid(params)
    require_valid(grid)
    _check_init(init)
    A, b = bloch_matrix(params)
    h = grid.dt
    if h > MAX_STEP_FRACTION / fastest_rate(params):
        raise GridTooCoarseError(
            f"grid too coarse: dt={h:g} exceeds {MAX_STEP_FRACTION}/max rate"
        )

    def f(x):
        return A @ x + b

    out = np.empty((grid.n_steps + 1, 3))
    x = init.vector
    out[0] = x
    for n in range(grid.n_steps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[n + 1] = x
    return BlochTrajectory(grid.times, out)


def affine_propagate(A: np.ndarray, b: np.ndarray, x0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Exact solution of ``dx/dt = A x + b`` sampled at ``times``.

    Uses the fixed point ``x*`` when ``A`` is well conditioned, otherwise the
    variation-of-constants form through an augmented matrix exponential.
    """
    n = len(x0)
    times = np.asarray(times, dtype=float)
    if np.linalg.cond(A) < 1e12:
        x_star = np.linalg.solve(A, -b)
        props = expm(A[None, :, :] * times[:, None, None])
        return props @ (x0 - x_star) + x_star
    aug = np.zeros((n + 1, n + 1))
    aug[:n, :n] = A
    aug[:n, n] = b
    props = expm(aug[None, :, :] * times[:, None, None])
    return props[:, :n, :n] @ x0 + props[:, :n, n]


def evolve_exact(
    params: TwoLevelParams, init: BlochState = EXCITED, grid: Optional[TimeGrid] = None
) -> BlochTrajectory:
    """Closed-form affine propagation, evaluated with a 3x3 matrix exponential."""
    grid = grid or default_grid(params)
    require_valid(grid)
    _check_init(init)
    A, b = bloch_matrix(params)
    times = grid.times
    x = affine_propagate(A, b, init.vector, times)
    x[0] = init.vector
    return BlochTrajectory(times, x)


def steady_state(params: TwoLevelParams) -> BlochState:
    """Stationary Bloch vector.

    Closed form on resonance; for ``delta_L != 0`` the 3x3 linear system is
    solved directly.
    """
    require_valid(params)
    if params.delta_L != 0.0:
        return steady_state_linear(params)
    if params.gamma + params.xi <= 0:
        raise NoSteadyStateError("no unique steady state: all rates vanish")
    omega = rabi_frequency(params)
    g2 = 0.5 * (params.gamma + params.gamma_star + params.xi)
    sz = 0.5 * (params.xi - params.gamma) / (params.gamma + params.xi + omega**2 / g2)
    return BlochState(complex(omega * sz / g2, 0.0), sz)


def steady_state_linear(params: TwoLevelParams) -> BlochState:
    """Solve ``A x = -b``; the cross-check of :func:`steady_state`."""
    A, b = bloch_matrix(params)
    if np.linalg.matrix_rank(A) < 3:
        raise NoSteadyStateError("no unique steady state: singular Bloch matrix")
    return BlochState.from_vector(np.linalg.solve(A, -b))
