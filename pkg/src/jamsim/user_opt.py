"""Jammer-unaware choice of the users' training length and energy fraction.

The users maximize the jammer-free sum SE by an exhaustive scan over integer
training lengths.  For every length the fraction is located on a grid and
then refined by golden-section search; all lengths are refined together.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jammer_opt import INV_PHI, MAX_ITER
from .scenario import SystemParams
from .se_core import published_terms

_EDGE = 1e-9


@dataclass(frozen=True)
class UserStrategy:
    phi_star: float
    eta_star: int
    achieved_se: float


def jammer_free_se(params: SystemParams, eta, phi) -> np.ndarray:
    """Jammer-free sum SE for broadcast arrays of training lengths and fractions."""
    eta = np.asarray(eta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    T = params.coherence_length
    beta = params.user_fading
    energy = params.user_budget * T
    p_t = (phi * energy / eta)[..., None]
    p_d = ((1.0 - phi) * energy / (T - eta))[..., None]
    with np.errstate(divide="ignore", invalid="ignore"):
        signal, inter, est, jam = published_terms(
            params.num_antennas, eta[..., None], beta, beta.sum(),
            params.jammer_fading, p_t, p_d, 0.0, 0.0)
        sinr = signal / (inter + est + jam)
    sinr = np.where(p_d > 0, np.nan_to_num(sinr), 0.0)
    return (1.0 - eta / T) * np.log2(1.0 + sinr).sum(axis=-1)


def phi_grid(step: float) -> np.ndarray:
    n = int(np.floor(1.0 / step + 1e-9))
    grid = np.arange(1, n + 1) * step
    return grid[grid < 1.0 - 1e-12]


def optimize_users(params: SystemParams, phi_grid_step: float = 0.05, refine_tol: float = 1e-6,
                   fixed_phi: float | None = None) -> UserStrategy:
    """Best (phi, eta) for the users, ignoring the jammer.

    ``params.training_length`` and ``params.jammer_budget`` are ignored.  With
    ``fixed_phi`` only the training length is optimized.  Ties go to the
    shortest training length.
    """
    if not 0.0 < phi_grid_step <= 0.1:
        raise ValueError("phi_grid_step must lie in (0, 0.1]")
    K, T = params.num_users, params.coherence_length
    etas = np.arange(K, T, dtype=float)
    if etas.size == 0:
        raise ValueError("need T > K for a data phase")

    if fixed_phi is not None:
        se = jammer_free_se(params, etas, np.full_like(etas, fixed_phi))
        best = int(np.argmax(se))
        return UserStrategy(float(fixed_phi), int(etas[best]), float(se[best]))

    grid = phi_grid(phi_grid_step)
    table = jammer_free_se(params, etas[:, None], grid[None, :])
    idx = np.argmax(table, axis=1)
    grid_phi = grid[idx]
    grid_se = table[np.arange(etas.size), idx]

    a = np.maximum(grid_phi - phi_grid_step, _EDGE)
    b = np.minimum(grid_phi + phi_grid_step, 1.0 - _EDGE)
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1 = jammer_free_se(params, etas, x1)
    f2 = jammer_free_se(params, etas, x2)
    for _ in range(MAX_ITER):
        if np.all(b - a <= refine_tol):
            break
        left = f1 >= f2  # maximizer lies in [a, x2]
        b = np.where(left, x2, b)
        a = np.where(left, a, x1)
        nx1 = np.where(left, b - INV_PHI * (b - a), x2)
        nx2 = np.where(left, x1, a + INV_PHI * (b - a))
        new = jammer_free_se(params, etas, np.where(left, nx1, nx2))
        f1, f2 = np.where(left, new, f2), np.where(left, f1, new)
        x1, x2 = nx1, nx2

    ref_phi = np.where(f1 >= f2, x1, x2)
    ref_se = np.maximum(f1, f2)
    use_ref = ref_se > grid_se
    phi_eta = np.where(use_ref, ref_phi, grid_phi)
    se_eta = np.where(use_ref, ref_se, grid_se)
    best = int(np.argmax(se_eta))
    return UserStrategy(float(phi_eta[best]), int(etas[best]), float(se_eta[best]))
