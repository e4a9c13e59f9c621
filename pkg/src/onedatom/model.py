"""Physical parameters, unit conventions and closed-form derived quantities.

Two-level rates are expressed in units of the total decay rate ``gamma``;
three-level rates in units of the exciton decay rate ``gamma_X``. Probe
powers ``p`` count incoming photons per atomic lifetime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Optional, Union

import numpy as np

from .errors import ParameterError


def _finite(x) -> bool:
    return isinstance(x, (int, float, np.floating, np.integer)) and math.isfinite(x)


@dataclass(frozen=True)
class TwoLevelParams:
    """Rates and drive of a two-level atom coupled to a 1D continuum.

    Attributes
    ----------
    gamma : float
        Total decay rate, the reference scale.
    beta : float
        Fraction of the decay funneled into the guided modes.
    gamma_star : float
        Pure dephasing rate.
    xi : float
        Incoherent pump rate.
    p : float
        Resonant probe power, photons per atomic lifetime.
    delta_L : float
        Laser-atom detuning ``omega_L - omega_A``.
    """

    gamma: float = 1.0
    beta: float = 1.0
    gamma_star: float = 0.0
    xi: float = 0.0
    p: float = 0.0
    delta_L: float = 0.0

    def with_(self, **changes) -> "TwoLevelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class ThreeLevelParams:
    """Ground / exciton / biexciton cascade with two-photon pumping.

    ``g2`` is the effective two-photon pump rate Lambda**2 / Delta. The
    optional ``lam`` and ``delta`` fields are metadata recording where ``g2``
    came from (see :meth:`from_two_photon`); the dynamics never read them.
    """

    gamma_X: float = 1.0
    gamma_XX: float = 2.0
    g2: float = 0.0
    delta_2ph: float = 0.0
    beta: float = 1.0
    p: float = 0.0
    gamma_star: float = 0.0
    lam: Optional[float] = field(default=None, compare=False)
    delta: Optional[float] = field(default=None, compare=False)

    @classmethod
    def from_two_photon(cls, lam: float, delta: float, **kwargs) -> "ThreeLevelParams":
        if delta == 0:
            raise ParameterError("two-photon detuning delta must be nonzero")
        return cls(g2=lam**2 / delta, lam=lam, delta=delta, **kwargs)

    @property
    def gamma(self) -> float:
        # reference rate, lets rabi_frequency treat both parameter sets alike
        return self.gamma_X

    def with_(self, **changes) -> "ThreeLevelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling ``0, dt, ..., t_max`` with ``n_steps`` intervals."""

    t_max: float
    n_steps: int

    @property
    def dt(self) -> float:
        return self.t_max / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_steps + 1)

    @classmethod
    def with_max_step(cls, t_max: float, max_dt: float) -> "TimeGrid":
        """Smallest uniform grid on ``[0, t_max]`` whose step is ``<= max_dt``."""
        n = max(2, int(math.ceil(t_max / max_dt - 1e-9)))
        return cls(t_max, n)


@dataclass(frozen=True)
class PowerGrid:
    """Logarithmic probe-power grid, optionally prefixed by the exact ``p = 0``."""

    p_min: float = 1e-2
    p_max: float = 1e4
    n_points: int = 121
    include_zero: bool = True
    spacing: str = "log"

    @property
    def values(self) -> np.ndarray:
        ps = np.logspace(math.log10(self.p_min), math.log10(self.p_max), self.n_points)
        ps[0], ps[-1] = self.p_min, self.p_max
        if self.include_zero:
            ps = np.concatenate([[0.0], ps])
        return ps


Params = Union[TwoLevelParams, ThreeLevelParams]


def _validate_two_level(params: TwoLevelParams) -> list[str]:
    problems = []
    for f in fields(params):
        if not _finite(getattr(params, f.name)):
            problems.append(f"{f.name} must be a finite number")
    if problems:
        return problems
    if params.gamma <= 0:
        problems.append("gamma must be positive")
    if not 0.0 <= params.beta <= 1.0:
        problems.append("beta out of [0,1]")
    if params.gamma_star < 0:
        problems.append("negative gamma_star")
    if params.xi < 0:
        problems.append("negative xi")
    if params.p < 0:
        problems.append("negative probe power")
    return problems


def _validate_three_level(params: ThreeLevelParams) -> list[str]:
    problems = []
    for name in ("gamma_X", "gamma_XX", "g2", "delta_2ph", "beta", "p", "gamma_star"):
        if not _finite(getattr(params, name)):
            problems.append(f"{name} must be a finite number")
    if problems:
        return problems
    if params.gamma_X <= 0:
        problems.append("gamma_X must be positive")
    if params.gamma_XX < 0:
        problems.append("negative gamma_XX")
    if params.g2 < 0:
        problems.append("negative g2")
    if not 0.0 <= params.beta <= 1.0:
        problems.append("beta out of [0,1]")
    if params.p < 0:
        problems.append("negative probe power")
    if params.gamma_star < 0:
        problems.append("negative gamma_star")
    return problems


def _validate_time_grid(grid: TimeGrid) -> list[str]:
    problems = []
    if not _finite(grid.t_max) or grid.t_max <= 0:
        problems.append("t_max must be positive")
    if not isinstance(grid.n_steps, (int, np.integer)) or grid.n_steps < 2:
        problems.append("n_steps must be an integer >= 2")
    return problems


def _validate_power_grid(grid: PowerGrid) -> list[str]:
    problems = []
    if not (_finite(grid.p_min) and _finite(grid.p_max)) or not 0 < grid.p_min < grid.p_max:
        problems.append("power grid needs 0 < p_min < p_max")
    if not isinstance(grid.n_points, (int, np.integer)) or grid.n_points < 2:
        problems.append("n_points must be an integer >= 2")
    if grid.spacing != "log":
        problems.append("only logarithmic power spacing is supported")
    return problems


_VALIDATORS = {
    TwoLevelParams: _validate_two_level,
    ThreeLevelParams: _validate_three_level,
    TimeGrid: _validate_time_grid,
    PowerGrid: _validate_power_grid,
}


def validate(obj) -> list[str]:
    """Return every violated invariant of ``obj``; an empty list means valid.

    Values are never clamped or corrected.
    """
    try:
        check = _VALIDATORS[type(obj)]
    except KeyError:
        raise TypeError(f"cannot validate {type(obj).__name__}") from None
    return check(obj)


def require_valid(obj) -> None:
    problems = validate(obj)
    if problems:
        raise ParameterError(problems)


def rabi_frequency(params: Params) -> float:
    """Probe Rabi frequency ``gamma * sqrt(2 * beta * p)``.

    For three-level parameters the reference rate is ``gamma_X``.
    """
    require_valid(params)
    return params.gamma * math.sqrt(2.0 * params.beta * params.p)


def threshold_power(params: TwoLevelParams) -> float:
    """Probe power separating the incoherent and coherent steady-state regimes.

    ``p_th = (gamma + gamma_star + xi) * (gamma + xi) / (4 * beta * gamma**2)``
    """
    require_valid(params)
    if params.beta == 0:
        raise ParameterError("no 1D coupling: threshold undefined for beta = 0")
    g, xi = params.gamma, params.xi
    return (g + params.gamma_star + xi) * (g + xi) / (4.0 * params.beta * g * g)
