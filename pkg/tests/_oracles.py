"""Independent reference computations used only by the tests."""

import math

import numpy as np
from scipy.integrate import solve_ivp

# two-level basis (g, e); sigma_z = diag(-1/2, +1/2)
SM = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e|
SP = SM.conj().T
SZ = np.diag([-0.5, 0.5]).astype(complex)


def two_level_master_rhs(params):
    """Master-equation right-hand side with decay, pump and pure dephasing jumps."""
    omega = params.gamma * math.sqrt(2 * params.beta * params.p)
    H = 0.5j * omega * (SM - SP) - params.delta_L * (SP @ SM)
    jumps = [
        math.sqrt(params.gamma) * SM,
        math.sqrt(params.xi) * SP,
        # coherence damping gamma_star / 2
        math.sqrt(params.gamma_star) * SZ,
    ]

    def rhs(t, y):
        rho = y.reshape(2, 2)
        d = -1j * (H @ rho - rho @ H)
        for C in jumps:
            cd = C.conj().T
            d += C @ rho @ cd - 0.5 * (cd @ C @ rho + rho @ cd @ C)
        return d.ravel()

    return rhs


def bloch_from_rho(rho):
    return np.array([rho[1, 0].real, rho[1, 0].imag, 0.5 * (rho[1, 1] - rho[0, 0]).real])


def rho_from_bloch(x):
    s = complex(x[0], x[1])
    pe = x[2] + 0.5
    # <sigma_-> = tr(rho |g><e|) = rho[e, g]
    return np.array([[1 - pe, s.conjugate()], [s, pe]], dtype=complex)


def master_equation_trajectory(params, x0, times):
    sol = solve_ivp(
        two_level_master_rhs(params),
        (times[0], times[-1]),
        rho_from_bloch(x0).ravel(),
        t_eval=times,
        method="DOP853",
        rtol=1e-12,
        atol=1e-13,
    )
    return np.array([bloch_from_rho(y.reshape(2, 2)) for y in sol.y.T])


def numerical_jacobian(f, x, h=1e-6):
    """Central finite differences of a vector function."""
    x = np.asarray(x, dtype=float)
    cols = []
    for k in range(len(x)):
        e = np.zeros_like(x)
        e[k] = h
        cols.append((f(x + e) - f(x - e)) / (2 * h))
    return np.column_stack(cols)


def cascade_exciton_population(gx, gxx, t):
    """P_X(t) for |XX> decaying through |X> without drive (gx != gxx)."""
    return gxx / (gx - gxx) * (np.exp(-gxx * t) - np.exp(-gx * t))
