"""Monte Carlo oracle for the MRC use-and-forget SINR under smart jamming.

Each coherence block draws fresh channels, training noise and a jammer pilot
uniform on the unit sphere.  The base station forms the linear MMSE-style
estimate from the received training matrix, uses it as the MRC combiner, and
the four expectations in the use-and-forget SINR are estimated by sample
means over blocks.

Blocks are processed in fixed-size chunks.  Chunk ``c`` always draws from the
substream ``SeedSequence(seed, spawn_key=(c,))`` and partial sums are reduced
in chunk order, so results are bit-identical for any number of workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import NoTrainingError
from .scenario import SystemParams
from .se_core import PowerSplit

CHUNK_SIZE = 2000
FIELDS = ("complex", "real")


def _gaussian(rng: np.random.Generator, shape, field: str) -> np.ndarray:
    if field == "complex":
        z = rng.standard_normal((*shape, 2))
        return (z[..., 0] + 1j * z[..., 1]) * np.sqrt(0.5)
    if field == "real":
        return rng.standard_normal(shape)
    raise ValueError(f"field must be one of {FIELDS}, got {field!r}")


@dataclass(frozen=True, eq=False)
class PilotBook:
    """eta x K pilot matrix with orthonormal columns."""

    matrix: np.ndarray

    def __post_init__(self):
        phi = self.matrix
        gram = phi.conj().T @ phi
        if not np.allclose(gram, np.eye(phi.shape[1]), atol=1e-12, rtol=0):
            raise ValueError("pilot columns must be orthonormal")

    @classmethod
    def dft(cls, training_length: int, num_users: int) -> "PilotBook":
        n = np.arange(training_length)[:, None]
        k = np.arange(num_users)[None, :]
        return cls(np.exp(-2j * np.pi * n * k / training_length) / np.sqrt(training_length))

    @classmethod
    def canonical(cls, training_length: int, num_users: int) -> "PilotBook":
        return cls(np.eye(training_length, num_users))

    @classmethod
    def default(cls, training_length: int, num_users: int, field: str = "complex") -> "PilotBook":
        if field == "real":
            return cls.canonical(training_length, num_users)
        return cls.dft(training_length, num_users)


def random_pilots(rng: np.random.Generator, training_length: int, num_users: int,
                  num_blocks: int, field: str = "complex") -> np.ndarray:
    """Independent random orthonormal pilot books, shape (B, eta, K)."""
    z = _gaussian(rng, (num_blocks, training_length, num_users), field)
    q, r = np.linalg.qr(z)
    # fix the column phases so the distribution is Haar
    d = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (d / np.abs(d))[:, None, :]


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """Fading, noise and symbol draws for a batch of coherence blocks.

    Every array carries a leading block axis of length B.
    """

    user_channels: np.ndarray    # (B, M, K), column k ~ CN(0, beta_k I)
    jammer_channel: np.ndarray   # (B, M)
    training_noise: np.ndarray   # (B, M, eta)
    jammer_pilot: np.ndarray     # (B, eta), unit norm
    data_noise: np.ndarray       # (B, M)
    jammer_symbol: np.ndarray    # (B,)
    user_symbols: np.ndarray     # (B, K)
    pilots: np.ndarray | None = None  # (B, eta, K) when re-randomized per block

    @property
    def num_blocks(self) -> int:
        return self.user_channels.shape[0]


def generate_block(params: SystemParams, rng: np.random.Generator, num_blocks: int = 1,
                   field: str = "complex", randomize_pilots: bool = False) -> ChannelRealization:
    """Draw ``num_blocks`` independent coherence blocks from ``rng``."""
    M, K, eta = params.num_antennas, params.num_users, params.training_length
    B = num_blocks
    h = _gaussian(rng, (B, M, K), field)
    g_w = _gaussian(rng, (B, M), field) * np.sqrt(params.jammer_fading)
    noise = _gaussian(rng, (B, M, eta), field)
    pilot = _gaussian(rng, (B, eta), field)
    pilot /= np.linalg.norm(pilot, axis=1, keepdims=True)
    n = _gaussian(rng, (B, M), field)
    s = _gaussian(rng, (B,), field)
    x = _gaussian(rng, (B, K), field)
    book = random_pilots(rng, eta, K, B, field) if randomize_pilots else None
    return ChannelRealization(
        user_channels=h * np.sqrt(params.user_fading),
        jammer_channel=g_w,
        training_noise=noise,
        jammer_pilot=pilot,
        data_noise=n,
        jammer_symbol=s,
        user_symbols=x,
        pilots=book,
    )


def estimator_weights(params: SystemParams, split: PowerSplit) -> np.ndarray:
    """Diagonal of (I + (1 + q_t beta_w)/(eta p_t) D^-1)^-1."""
    train = params.training_length * split.p_t
    return 1.0 / (1.0 + (1.0 + split.q_t * params.jammer_fading) / (train * params.user_fading))


def training_matrix(real: ChannelRealization, params: SystemParams, split: PowerSplit,
                    pilots: PilotBook) -> np.ndarray:
    """Received M x eta training signal for every block."""
    eta = params.training_length
    phi = pilots.matrix if real.pilots is None else real.pilots
    users = np.sqrt(eta * split.p_t) * (real.user_channels @ np.swapaxes(phi, -1, -2))
    jam = np.sqrt(eta * split.q_t) * real.jammer_channel[:, :, None] * real.jammer_pilot[:, None, :]
    return users + real.training_noise + jam


def mmse_estimate(real: ChannelRealization, params: SystemParams, split: PowerSplit,
                  pilots: PilotBook) -> tuple[np.ndarray, np.ndarray]:
    """Channel estimate and estimation error, each of shape (B, M, K)."""
    if params.training_length == 0 or not split.p_t > 0:
        raise NoTrainingError("channel estimation needs p_t > 0 and eta > 0")
    phi = pilots.matrix if real.pilots is None else real.pilots
    y_t = training_matrix(real, params, split, pilots)
    despread = y_t @ phi.conj() / np.sqrt(params.training_length * split.p_t)
    g_hat = despread * estimator_weights(params, split)
    return g_hat, g_hat - real.user_channels


def receive_data(real: ChannelRealization, combiner: np.ndarray, split: PowerSplit) -> dict:
    """Combined data-phase signal r = A^H y and its four additive parts, each (B, K)."""
    A_h = np.conj(np.swapaxes(combiner, -1, -2))
    eff = A_h @ real.user_channels                       # (B, K, K)
    x = real.user_symbols
    diag = np.diagonal(eff, axis1=-2, axis2=-1)
    desired = np.sqrt(split.p_d) * diag * x
    all_users = np.sqrt(split.p_d) * np.einsum("bki,bi->bk", eff, x)
    interference = all_users - desired
    noise = np.einsum("bkm,bm->bk", A_h, real.data_noise)
    jam = np.sqrt(split.q_d) * np.einsum("bkm,bm->bk", A_h, real.jammer_channel) * real.jammer_symbol[:, None]
    y = (np.sqrt(split.p_d) * np.einsum("bmk,bk->bm", real.user_channels, x)
         + real.data_noise + np.sqrt(split.q_d) * real.jammer_channel * real.jammer_symbol[:, None])
    r = np.einsum("bkm,bm->bk", A_h, y)
    return {"r": r, "desired": desired, "interference": interference, "noise": noise, "jamming": jam}


@dataclass(frozen=True, eq=False)
class UatfEstimate:
    """Sample-mean estimates of the use-and-forget SINR ingredients.

    ``cross_power[k, i]`` estimates E|a_k^H g_i|^2.  The estimate/error
    statistics are per-entry and averaged over antennas.
    """

    mean_gain: np.ndarray
    cross_power: np.ndarray
    combiner_norm: np.ndarray
    jam_leakage: np.ndarray
    num_samples: int
    sinr: np.ndarray
    estimate_variance: np.ndarray
    error_variance: np.ndarray
    estimate_error_corr: np.ndarray
    estimate_error_corr_stderr: np.ndarray
    pilot_overlap: np.ndarray
    pilot_overlap_stderr: np.ndarray


def uatf_sinr(mean_gain, cross_power, combiner_norm, jam_leakage, p_d, q_d) -> np.ndarray:
    """Assemble the use-and-forget SINR from its four expectations."""
    signal = p_d * np.abs(mean_gain) ** 2
    denom = p_d * cross_power.sum(axis=1) - signal + combiner_norm + q_d * jam_leakage
    return signal / denom


def _chunk_sums(params, split, pilots, seed, chunk, n, field, randomize_pilots):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))
    real = generate_block(params, rng, n, field=field, randomize_pilots=randomize_pilots)
    g_hat, err = mmse_estimate(real, params, split, pilots)
    M = params.num_antennas
    A_h = np.conj(np.swapaxes(g_hat, -1, -2))
    eff = A_h @ real.user_channels
    jam = (A_h @ real.jammer_channel[:, :, None])[:, :, 0]
    corr_block = (g_hat * err.conj()).sum(axis=1) / M
    phi = pilots.matrix if real.pilots is None else real.pilots
    overlap = np.abs((real.jammer_pilot[:, None, :] @ np.conj(phi))[:, 0, :]) ** 2
    return np.concatenate([
        np.diagonal(eff, axis1=-2, axis2=-1).sum(axis=0),
        (np.abs(eff) ** 2).sum(axis=0).ravel(),
        (np.abs(g_hat) ** 2).sum(axis=(0, 1)),
        (np.abs(jam) ** 2).sum(axis=0),
        (np.abs(g_hat) ** 2).sum(axis=(0, 1)) / M,
        (np.abs(err) ** 2).sum(axis=(0, 1)) / M,
        corr_block.sum(axis=0),
        (np.abs(corr_block) ** 2).sum(axis=0),
        overlap.sum(axis=0),
        (overlap**2).sum(axis=0),
    ]).astype(complex)


def estimate_uatf_sinr(params: SystemParams, split: PowerSplit, num_blocks: int, seed: int = 0,
                       *, field: str = "complex", workers: int = 1, pilots: PilotBook | None = None,
                       randomize_pilots: bool = False, chunk_size: int = CHUNK_SIZE) -> UatfEstimate:
    """Estimate the MRC use-and-forget SINR over ``num_blocks`` blocks."""
    if num_blocks < 1:
        raise ValueError("num_blocks must be at least 1")
    if field not in FIELDS:
        raise ValueError(f"field must be one of {FIELDS}")
    K = params.num_users
    if pilots is None:
        pilots = PilotBook.default(params.training_length, K, field)
    sizes = [min(chunk_size, num_blocks - start) for start in range(0, num_blocks, chunk_size)]

    def work(c):
        return _chunk_sums(params, split, pilots, seed, c, sizes[c], field, randomize_pilots)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    else:
        parts = [work(c) for c in range(len(sizes))]
    total = np.sum(np.stack(parts), axis=0) / num_blocks

    offs = np.cumsum([0, K, K * K, K, K, K, K, K, K, K, K])
    seg = [total[offs[i]:offs[i + 1]] for i in range(len(offs) - 1)]
    mean_gain = seg[0]
    cross = seg[1].real.reshape(K, K)
    norm, jam = seg[2].real, seg[3].real
    corr, corr_sq = seg[6], seg[7].real
    ov, ov_sq = seg[8].real, seg[9].real
    spread = max(num_blocks - 1, 1)
    corr_se = np.sqrt(np.maximum(corr_sq - np.abs(corr) ** 2, 0.0) / spread)
    ov_se = np.sqrt(np.maximum(ov_sq - ov**2, 0.0) / spread)
    return UatfEstimate(
        mean_gain=mean_gain,
        cross_power=cross,
        combiner_norm=norm,
        jam_leakage=jam,
        num_samples=num_blocks,
        sinr=uatf_sinr(mean_gain, cross, norm, jam, split.p_d, split.q_d),
        estimate_variance=seg[4].real,
        error_variance=seg[5].real,
        estimate_error_corr=corr,
        estimate_error_corr_stderr=corr_se,
        pilot_overlap=ov,
        pilot_overlap_stderr=ov_se,
    )
