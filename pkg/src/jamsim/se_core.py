"""Closed-form spectral efficiency of the jammed massive MIMO uplink (MRC)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSplitError, UnboundedLimitError
from .scenario import SystemParams


@dataclass(frozen=True)
class PowerSplit:
    """Per-phase powers induced by the training energy fractions.

    ``phi`` and ``zeta`` are the fractions of the per-block energy that the
    users and the jammer spend on the training phase.
    """

    phi: float
    zeta: float
    p_t: float
    p_d: float
    q_t: float
    q_d: float

    @classmethod
    def from_fractions(cls, params: SystemParams, phi: float, zeta: float) -> "PowerSplit":
        if not (0.0 <= phi <= 1.0 and 0.0 <= zeta <= 1.0):
            raise ValueError(f"fractions must lie in [0, 1], got phi={phi}, zeta={zeta}")
        T, eta = params.coherence_length, params.training_length
        user_energy = params.user_budget * T
        jam_energy = params.jammer_budget * T
        data_len = T - eta
        return cls(
            phi=float(phi),
            zeta=float(zeta),
            p_t=phi * user_energy / eta,
            p_d=(1.0 - phi) * user_energy / data_len if data_len else 0.0,
            q_t=zeta * jam_energy / eta,
            q_d=(1.0 - zeta) * jam_energy / data_len if data_len else 0.0,
        )

    @classmethod
    def from_powers(cls, training_length: int, coherence_length: int,
                    p_t: float, p_d: float, q_t: float = 0.0, q_d: float = 0.0) -> "PowerSplit":
        """Build a split from explicit per-phase powers; fractions are implied."""
        eta, data_len = training_length, coherence_length - training_length
        user_energy = eta * p_t + data_len * p_d
        jam_energy = eta * q_t + data_len * q_d
        phi = eta * p_t / user_energy if user_energy > 0 else 0.5
        zeta = eta * q_t / jam_energy if jam_energy > 0 else 0.5
        return cls(phi=phi, zeta=zeta, p_t=float(p_t), p_d=float(p_d),
                   q_t=float(q_t), q_d=float(q_d))


@dataclass(frozen=True, eq=False)
class SinrReport:
    """Per-user SINR and SE together with the denominator term groups.

    The SINR of user k is ``signal / (interference_plus_noise +
    estimation_penalty + jamming)``.
    """

    per_user_sinr: np.ndarray
    per_user_se: np.ndarray
    sum_se: float
    signal: np.ndarray
    interference_plus_noise: np.ndarray
    estimation_penalty: np.ndarray
    jamming: np.ndarray

    @property
    def denominator(self) -> np.ndarray:
        return self.interference_plus_noise + self.estimation_penalty + self.jamming

    def term_breakdown(self) -> list[dict[str, float]]:
        return [
            {
                "signal": float(self.signal[k]),
                "interference_plus_noise": float(self.interference_plus_noise[k]),
                "estimation_penalty": float(self.estimation_penalty[k]),
                "jamming": float(self.jamming[k]),
            }
            for k in range(self.per_user_sinr.size)
        ]


def se_map(gamma, training_length: int, coherence_length: int):
    """Spectral efficiency ``(1 - eta/T) * log2(1 + gamma)`` in bit/s/Hz."""
    return (1.0 - training_length / coherence_length) * np.log2(1.0 + np.asarray(gamma, dtype=float))


def estimation_variances(params: SystemParams, split: PowerSplit, k: int) -> tuple[float, float]:
    """Per-entry variances of column k of the channel estimate and its error."""
    beta = params.user_fading[k]
    train = params.training_length * split.p_t * beta
    jam = split.q_t * params.jammer_fading
    denom = train + jam + 1.0
    return train * beta / denom, (1.0 + jam) * beta / denom


def published_terms(M, eta, beta, beta_sum, beta_w, p_t, p_d, q_t, q_d):
    """Numerator and grouped denominator of the published MRC SINR.

    All arguments broadcast; ``beta_sum`` is the sum of user gains.
    """
    train = eta * p_t * beta
    signal = M * train * beta
    inter = (train + q_t * beta_w + 1.0) * (beta_sum + 1.0 / p_d)
    est = train * beta
    jam = (q_d / p_d) * ((M + 2) * q_t * beta_w + train + 1.0) * beta_w
    return signal, inter, est, jam


def _check_data_phase(params: SystemParams, split: PowerSplit):
    if params.training_length >= params.coherence_length or not split.p_d > 0:
        raise DegenerateSplitError(
            "closed form needs a data phase with positive power "
            f"(eta={params.training_length}, T={params.coherence_length}, p_d={split.p_d})")


def _report(params, signal, inter, est, jam) -> SinrReport:
    sinr = signal / (inter + est + jam)
    se = se_map(sinr, params.training_length, params.coherence_length)
    return SinrReport(
        per_user_sinr=sinr, per_user_se=se, sum_se=float(np.sum(se)),
        signal=signal, interference_plus_noise=inter, estimation_penalty=est, jamming=jam,
    )


def sum_se_closed_form(params: SystemParams, split: PowerSplit) -> SinrReport:
    """Sum SE under MRC with a training-and-data smart jammer.

    Raises DegenerateSplitError when there is no data phase or p_d = 0.
    """
    _check_data_phase(params, split)
    beta = params.user_fading
    terms = published_terms(
        params.num_antennas, params.training_length, beta, beta.sum(),
        params.jammer_fading, split.p_t, split.p_d, split.q_t, split.q_d)
    return _report(params, *terms)


def sum_se_or_zero(params: SystemParams, split: PowerSplit) -> float:
    """Like :func:`sum_se_closed_form` but returns 0 for a zero-power data phase."""
    try:
        return sum_se_closed_form(params, split).sum_se
    except DegenerateSplitError:
        return 0.0


def sum_se_closed_form_cscg(params: SystemParams, split: PowerSplit) -> SinrReport:
    """Exact MRC use-and-forget SINR for circularly-symmetric complex channels.

    Differs from :func:`sum_se_closed_form` by using the complex Gaussian
    fourth moment E||g||^4 = M(M+1)beta^2.  This drops the estimation
    self-term and turns the (M+2) jamming factor into (M+1).  It is the value
    the complex Monte Carlo oracle converges to.
    """
    _check_data_phase(params, split)
    M, eta = params.num_antennas, params.training_length
    beta, beta_w = params.user_fading, params.jammer_fading
    train = eta * split.p_t * beta
    signal = M * train * beta
    inter = (train + split.q_t * beta_w + 1.0) * (beta.sum() + 1.0 / split.p_d)
    est = np.zeros_like(beta)
    jam = (split.q_d / split.p_d) * ((M + 1) * split.q_t * beta_w + train + 1.0) * beta_w
    return _report(params, signal, inter, est, jam)


def sum_se_asymptotic(params: SystemParams, split: PowerSplit) -> float:
    """Sum SE as the antenna count grows without bound.

    Finite only if the jammer is active in both phases.
    """
    if not (split.q_t > 0 and split.q_d > 0):
        raise UnboundedLimitError("limit is infinite unless q_t > 0 and q_d > 0")
    ratio = params.user_fading / params.jammer_fading
    gamma = params.training_length * (split.p_t / split.q_t) * (split.p_d / split.q_d) * ratio**2
    return float(np.sum(se_map(gamma, params.training_length, params.coherence_length)))
