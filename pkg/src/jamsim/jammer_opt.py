"""Optimal split of the jammer's energy between training and data phases.

For fixed user strategy the sum SE is convex in the jammer training fraction
``zeta``: each per-user term is ``log2(1 + 1/f_k(zeta))`` with ``f_k`` a
concave quadratic.  The minimizer is found by golden-section search, and in
symmetric fading it also has a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateSplitError, NonSymmetricFadingError
from .scenario import SystemParams
from .se_core import PowerSplit, sum_se_closed_form, sum_se_or_zero

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
MAX_ITER = 200


@dataclass(frozen=True)
class JammerSolution:
    zeta_star: float
    min_sum_se: float
    method: str  # "numeric" or "closed_form_symmetric"
    kappa: float | None = None
    iterations: int = 0
    tolerance_achieved: float = 0.0
    flat: bool = False


def _user_powers(params: SystemParams, phi: float) -> tuple[float, float]:
    if not 0.0 < phi < 1.0:
        raise ValueError(f"user fraction must lie in (0, 1), got {phi}")
    T, eta = params.coherence_length, params.training_length
    if eta >= T:
        raise DegenerateSplitError("no data phase: eta == T")
    energy = params.user_budget * T
    return phi * energy / eta, (1.0 - phi) * energy / (T - eta)


def alpha(params: SystemParams, phi: float, zeta, k: int):
    """Denominator of user k's SINR written as a function of ``zeta``.

    Scalar arithmetic only, so ``zeta`` may be a float, an ndarray or an
    mpmath number.
    """
    p_t, p_d = _user_powers(params, phi)
    T, eta, M = params.coherence_length, params.training_length, params.num_antennas
    beta_k = float(params.user_fading[k])
    jam = params.jammer_fading * params.jammer_budget * T
    train = eta * p_t * beta_k
    return ((train + zeta * jam / eta + 1) * (float(params.user_fading.sum()) + 1 / p_d)
            + (1 - zeta) * jam / ((T - eta) * p_d) * ((M + 2) * zeta * jam / eta + train + 1)
            + train * beta_k)


def fk(params: SystemParams, phi: float, zeta, k: int):
    """Inverse SINR of user k, ``alpha(zeta) / (M eta p_t beta_k^2)``."""
    p_t, _ = _user_powers(params, phi)
    beta_k = float(params.user_fading[k])
    return alpha(params, phi, zeta, k) / (
        params.num_antennas * params.training_length * p_t * beta_k**2)


def objective(params: SystemParams, phi: float, zeta: float) -> float:
    """Sum SE (bit/s/Hz) as a function of the jammer training fraction."""
    if not 0.0 <= zeta <= 1.0:
        raise ValueError(f"zeta must lie in [0, 1], got {zeta}")
    T, eta = params.coherence_length, params.training_length
    total = 0.0
    for k in range(params.num_users):
        total += math.log2(1.0 + 1.0 / fk(params, phi, zeta, k))
    return (1.0 - eta / T) * total


def second_derivative_fk(params: SystemParams, phi: float, k: int) -> float:
    """Analytic d^2 f_k / d zeta^2; constant in zeta and negative when Q > 0."""
    p_t, p_d = _user_powers(params, phi)
    T, eta, M = params.coherence_length, params.training_length, params.num_antennas
    beta_k = float(params.user_fading[k])
    QT = params.jammer_budget * T
    return -(2.0 * (M + 2) * params.jammer_fading**2 * QT**2) / (
        M * eta**2 * p_t * p_d * beta_k**2 * (T - eta))


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float,
                   max_iter: int = MAX_ITER) -> tuple[float, float, int, float]:
    """Minimize a unimodal ``f`` on [lo, hi].

    Returns ``(x, f(x), iterations, final_bracket_width)``.  Endpoints are
    compared against the interior result so boundary minima are exact.
    """
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        it += 1
    mid = 0.5 * (a + b)
    candidates = [(f(mid), mid), (f1, x1), (f2, x2), (f(lo), lo), (f(hi), hi)]
    fx, x = min(candidates)
    return x, fx, it, b - a


def solve_numeric(params: SystemParams, phi: float, tol: float = 1e-9) -> JammerSolution:
    """Golden-section minimization of the sum SE over zeta in [0, 1].

    A jammer without budget cannot affect the objective; the conventional
    answer 0.5 is returned with ``flat=True``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if params.jammer_budget == 0:
        return JammerSolution(0.5, objective(params, phi, 0.5), "numeric", flat=True)
    x, fx, it, width = golden_section(lambda z: objective(params, phi, z), 0.0, 1.0, tol)
    return JammerSolution(x, fx, "numeric", iterations=it, tolerance_achieved=width)


def kappa(params: SystemParams, phi: float) -> float:
    beta = float(params.user_fading[0])
    K, T, eta, M = params.num_users, params.coherence_length, params.training_length, params.num_antennas
    PT = params.user_budget * T
    return ((K * beta * (1.0 - phi) * PT + T - eta) - eta * (beta * phi * PT + 1.0)) / (
        params.jammer_fading * (M + 2))


def solve_closed_form_symmetric(params: SystemParams, phi: float) -> JammerSolution:
    """KKT solution when every user has the same large-scale gain.

    The stationary point ``(kappa + QT) / (2 QT)`` is clamped to [0, 1].
    Accepts the end points phi = 0 and phi = 1, where the SE is zero.
    """
    beta = params.user_fading
    if not np.allclose(beta, beta[0], rtol=1e-9, atol=0):
        raise NonSymmetricFadingError("closed form requires equal user gains")
    if not params.jammer_budget > 0:
        raise ValueError("closed form requires a positive jammer budget")
    k = kappa(params, phi)
    QT = params.jammer_budget * params.coherence_length
    zeta = min(max((k + QT) / (2.0 * QT), 0.0), 1.0)
    se = sum_se_or_zero(params, PowerSplit.from_fractions(params, phi, zeta))
    return JammerSolution(zeta, se, "closed_form_symmetric", kappa=k)


def equal_jamming(params: SystemParams) -> float:
    """Fraction that keeps the jamming power constant over the block."""
    return params.training_length / params.coherence_length


def sum_se_at(params: SystemParams, phi: float, zeta: float) -> float:
    return sum_se_closed_form(params, PowerSplit.from_fractions(params, phi, zeta)).sum_se
