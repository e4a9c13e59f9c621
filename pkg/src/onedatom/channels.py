"""Radiated power channels of the 1D atom and the emission figures of merit.

All powers are in photons per unit time. Fields hold floats for a single
state or arrays for a trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .bloch2l import BlochState, BlochTrajectory
from .errors import NoNetEmissionError
from .model import TwoLevelParams, rabi_frequency

Number = Union[float, np.ndarray]

CANCELLATION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PowerChannels:
    """Transmitted ``T``, reflected ``R`` and leaky ``S`` powers.

    ``net_T = T - gamma*p`` removes the incoming probe, ``N`` is the net rate
    of photons emitted by the atom and ``W`` the coherent absorption.
    """

    T: Number
    R: Number
    S: Number
    net_T: Number
    N: Number
    W: Number


@dataclass(frozen=True)
class EmissionRatios:
    beta_R: float
    beta_T: float


def _channels(re_sm, s_z, params: TwoLevelParams) -> PowerChannels:
    omega = rabi_frequency(params)
    g, beta = params.gamma, params.beta
    pe = s_z + 0.5
    interference = omega * re_sm
    R = 0.5 * g * beta * pe
    S = g * (1.0 - beta) * pe
    T = g * params.p + interference + R
    net_T = interference + R
    return PowerChannels(T=T, R=R, S=S, net_T=net_T, N=net_T + R + S, W=0.0 - interference)


def channels_from_state(state: BlochState, params: TwoLevelParams) -> PowerChannels:
    return _channels(state.s_minus.real, state.s_z, params)


def channels_from_trajectory(traj: BlochTrajectory, params: TwoLevelParams) -> PowerChannels:
    """Channel time series along a trajectory (array-valued fields)."""
    return _channels(traj.x[:, 0], traj.x[:, 2], params)


def ratios(ch: PowerChannels) -> EmissionRatios:
    """Fractions of the net emission leaving by reflection and by transmission.

    Raises
    ------
    NoNetEmissionError
        If ``N <= 0`` (up to round-off of the terms it is summed from): the
        ratios are only meaningful while the atom emits.
    """
    if not np.ndim(ch.N) == 0:
        raise TypeError("ratios expects channels of a single state")
    # N is a difference of O(scale) terms; below round-off it carries no sign
    scale = abs(ch.W) + abs(ch.net_T) + ch.R + ch.S
    if not ch.N > CANCELLATION_TOL * scale:
        raise NoNetEmissionError(f"no net emission (N = {ch.N:g})")
    return EmissionRatios(beta_R=ch.R / ch.N, beta_T=ch.net_T / ch.N)
