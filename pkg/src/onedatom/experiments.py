"""Figure datasets (transient traces, steady-state sweeps) and their analysis."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.signal import find_peaks

from . import bloch2l, qd3l
from .channels import PowerChannels, channels_from_state, channels_from_trajectory, ratios
from .errors import NoNetEmissionError, OverdampedError, UndefinedRatioError
from .model import (
    PowerGrid,
    ThreeLevelParams,
    TimeGrid,
    TwoLevelParams,
    require_valid,
)

TRANSIENT_COLUMNS = ("t", "re_sm", "im_sm", "sz", "pe", "T", "R", "S", "netT", "N", "W")
STEADY_COLUMNS = ("p", "pe", "N", "betaR", "betaT", "W")
QD_COLUMNS = ("p", "Pg", "PX", "PXX", "N3L", "betaR3L", "betaR2L")

FIG2_POWERS = (0.0, 1.0, 10.0, 30.0)
FIG2_DEPHASING = (0.0, 10.0)

# two-level reference used next to the three-level monitor ratio
REFERENCE_XI = 3.0


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Column-named table; rows of a power sweep are sorted by ascending ``p``.

    Undefined ratios (no net emission, empty biexciton level) are stored as
    NaN, never dropped.
    """

    columns: tuple[str, ...]
    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 2 or self.data.shape[1] != len(self.columns):
            raise ValueError("data must have one column per name")

    def __len__(self) -> int:
        return self.data.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.column(name)

    def rows(self) -> Iterable[tuple[float, ...]]:
        return (tuple(float(v) for v in row) for row in self.data)


@dataclass(frozen=True, eq=False)
class TransientResult:
    params: TwoLevelParams
    trajectory: bloch2l.BlochTrajectory
    channels: PowerChannels

    def table(self) -> SweepResult:
        x, ch = self.trajectory.x, self.channels
        data = np.column_stack(
            [
                self.trajectory.times, x[:, 0], x[:, 1], x[:, 2], self.trajectory.pe,
                ch.T, ch.R, ch.S, ch.net_T, ch.N, ch.W,
            ]
        )
        return SweepResult(TRANSIENT_COLUMNS, data)


def transient(
    params: TwoLevelParams,
    grid: Optional[TimeGrid] = None,
    t_max: float = 10.0,
    method: str = "exact",
) -> TransientResult:
    """Single trace started from the excited state."""
    grid = grid or bloch2l.default_grid(params, t_max)
    evolve = {"exact": bloch2l.evolve_exact, "rk4": bloch2l.evolve_rk4}[method]
    traj = evolve(params, bloch2l.EXCITED, grid)
    return TransientResult(params, traj, channels_from_trajectory(traj, params))


def run_transient(
    template: TwoLevelParams = TwoLevelParams(beta=1.0, xi=0.0),
    powers: Sequence[float] = FIG2_POWERS,
    dephasings: Sequence[float] = FIG2_DEPHASING,
    grid: Optional[TimeGrid] = None,
    t_max: float = 10.0,
    method: str = "exact",
) -> dict[tuple[float, float], TransientResult]:
    """Excited-state decay under a resonant probe for every ``(p, gamma_star)``."""
    return {
        (p, gs): transient(template.with_(p=p, gamma_star=gs), grid, t_max, method)
        for p in powers
        for gs in dephasings
    }


def _ordered_map(fn: Callable[[float], tuple], ps: np.ndarray, workers: int) -> np.ndarray:
    # rows are pure functions of p; map() keeps input order
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(fn, ps))
    else:
        rows = [fn(p) for p in ps]
    return np.array(rows, dtype=float)


def steady_row(template: TwoLevelParams, p: float) -> tuple[float, ...]:
    params = template.with_(p=float(p))
    state = bloch2l.steady_state(params)
    ch = channels_from_state(state, params)
    try:
        r = ratios(ch)
        beta_R, beta_T = r.beta_R, r.beta_T
    except NoNetEmissionError:
        beta_R = beta_T = math.nan
    return (float(p), state.pe, ch.N, beta_R, beta_T, ch.W)


def run_steady_sweep(
    template: TwoLevelParams = TwoLevelParams(xi=3.0),
    grid: PowerGrid = PowerGrid(),
    workers: int = 1,
) -> SweepResult:
    """Steady-state population, net emission and channel ratios versus ``p``."""
    require_valid(template)
    require_valid(grid)
    ps = np.unique(grid.values)
    data = _ordered_map(lambda p: steady_row(template, p), ps, workers)
    return SweepResult(STEADY_COLUMNS, data)


def qd_row(template: ThreeLevelParams, p: float, reference_xi: float = REFERENCE_XI) -> tuple:
    params = template.with_(p=float(p))
    rho = qd3l.steady_state_three_level(params)
    obs = qd3l.observables_three_level(rho, params)
    try:
        beta_3l = obs.beta_R_3L
    except UndefinedRatioError:
        beta_3l = math.nan
    ref = TwoLevelParams(
        gamma=params.gamma_X,
        beta=params.beta,
        gamma_star=params.gamma_star,
        xi=reference_xi * params.gamma_X,
        p=float(p),
    )
    ch = channels_from_state(bloch2l.steady_state(ref), ref)
    try:
        beta_2l = ratios(ch).beta_R
    except NoNetEmissionError:
        beta_2l = math.nan
    return (float(p), obs.P_g, obs.P_X, obs.P_XX, obs.N_3L, beta_3l, beta_2l)


def run_qd_sweep(
    template: ThreeLevelParams = ThreeLevelParams(gamma_XX=2.0, g2=4.0),
    grid: PowerGrid = PowerGrid(),
    workers: int = 1,
    reference_xi: float = REFERENCE_XI,
) -> SweepResult:
    """Three-level steady state versus probe power, with the two-level reference ratio."""
    require_valid(template)
    require_valid(grid)
    ps = np.unique(grid.values)
    data = _ordered_map(lambda p: qd_row(template, p, reference_xi), ps, workers)
    return SweepResult(QD_COLUMNS, data)


def midpoint_crossing(sweep: SweepResult, template: TwoLevelParams) -> float:
    """Probe power where ``N`` is halfway between its weak- and strong-probe limits.

    The limits are ``gamma * P_e(p=0)`` and ``xi / 2``; the crossing is
    interpolated linearly in ``log p``.
    """
    pe0 = template.xi / (template.gamma + template.xi)
    target = 0.5 * (template.gamma * pe0 + 0.5 * template.xi)
    p, N = sweep["p"], sweep["N"]
    mask = p > 0
    p, N = p[mask], N[mask]
    above = np.nonzero(N >= target)[0]
    if len(above) == 0 or above[0] == 0:
        raise ValueError("net emission does not cross its midpoint inside the grid")
    i = above[0]
    lp0, lp1 = math.log(p[i - 1]), math.log(p[i])
    frac = (target - N[i - 1]) / (N[i] - N[i - 1])
    return math.exp(lp0 + frac * (lp1 - lp0))


@dataclass(frozen=True)
class RabiEstimate:
    """Oscillation rate ``2*pi / <spacing of P_e minima>``.

    ``low_confidence`` is set when fewer than three minima were found or when
    the oscillation loses more than a factor ``exp(-pi)`` of its depth per
    period; both make the estimate a biased proxy for the bare Rabi frequency.
    """

    rate: float
    minima: tuple[float, ...]
    low_confidence: bool

    def __float__(self) -> float:
        return self.rate


def _parabolic_vertex(t: np.ndarray, y: np.ndarray, i: int) -> tuple[float, float]:
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    curv = y0 - 2.0 * y1 + y2
    if curv <= 0:
        return float(t[i]), float(y1)
    shift = 0.5 * (y0 - y2) / curv
    dt = t[i + 1] - t[i]
    return float(t[i] + shift * dt), float(y1 - 0.25 * (y0 - y2) * shift)


def estimate_rabi(traj: bloch2l.BlochTrajectory, prominence: float = 1e-6) -> RabiEstimate:
    """Estimate the Rabi frequency from the spacing of successive ``P_e`` minima.

    Raises
    ------
    OverdampedError
        If fewer than two minima with the requested prominence exist.
    """
    t, pe = traj.times, traj.pe
    idx, _ = find_peaks(-pe, prominence=prominence)
    idx = idx[(idx > 0) & (idx < len(pe) - 1)]
    if len(idx) < 2:
        raise OverdampedError("overdamped: no oscillation detected")
    vertices = [_parabolic_vertex(t, pe, i) for i in idx]
    tm = np.array([v[0] for v in vertices])
    depth = pe[-1] - np.array([v[1] for v in vertices])
    rate = 2.0 * math.pi / float(np.mean(np.diff(tm)))
    low = len(idx) < 3 or bool(depth[1] < math.exp(-math.pi) * depth[0])
    return RabiEstimate(rate, tuple(float(x) for x in tm), low)
