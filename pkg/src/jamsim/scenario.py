"""Cell geometry, large-scale fading, and system parameter containers.

Users are dropped uniformly over the area of an annulus around the base
station.  Their large-scale gain is

    beta_k = z_k / (r_k / r_h) ** nu

with ``z_k`` log-normal shadowing.  The noise variance is normalized to one,
so every power in the library is a dimensionless SNR-like quantity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def db_to_linear(x_db):
    """Convert decibels to a linear power ratio."""
    if np.ndim(x_db):
        return 10.0 ** (np.asarray(x_db, dtype=float) / 10.0)
    return 10.0 ** (float(x_db) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class ScenarioConfig:
    cell_radius_m: float = 1000.0
    min_distance_m: float = 200.0
    decay_exponent: float = 3.8
    shadow_std_db: float = 8.0
    num_users: int = 10
    coherence_length: int = 200
    seed: int = 0
    # Not part of the published cell model; the jammer sits at the
    # reference distance without shadowing unless configured otherwise.
    jammer_fading: float = 1.0

    def __post_init__(self):
        if not 0 < self.min_distance_m < self.cell_radius_m:
            raise ValueError(
                f"need 0 < min_distance_m < cell_radius_m, got "
                f"{self.min_distance_m} and {self.cell_radius_m}")
        if self.decay_exponent <= 2:
            raise ValueError("decay_exponent must exceed 2")
        if self.shadow_std_db < 0:
            raise ValueError("shadow_std_db must be nonnegative")
        if self.num_users < 1:
            raise ValueError("num_users must be at least 1")
        if self.coherence_length < self.num_users:
            raise ValueError("coherence_length must be >= num_users")
        if self.seed < 0 or self.seed >= 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not self.jammer_fading > 0:
            raise ValueError("jammer_fading must be positive")


@dataclass(frozen=True, eq=False)
class SystemParams:
    """Static link parameters for one coherence-block model.

    Budgets are linear (not dB).  ``user_fading`` is the diagonal of D.
    """

    num_antennas: int
    coherence_length: int
    training_length: int
    user_fading: np.ndarray
    jammer_fading: float
    user_budget: float
    jammer_budget: float
    num_users: int = field(init=False)

    def __post_init__(self):
        beta = np.array(self.user_fading, dtype=float).reshape(-1)
        beta.setflags(write=False)
        object.__setattr__(self, "user_fading", beta)
        object.__setattr__(self, "num_users", beta.size)
        K, T, eta = beta.size, self.coherence_length, self.training_length
        if K < 1:
            raise ValueError("at least one user is required")
        if not K <= eta <= T:
            raise ValueError(f"need K <= eta <= T, got K={K}, eta={eta}, T={T}")
        if self.num_antennas < 1:
            raise ValueError("num_antennas must be at least 1")
        if not (np.all(np.isfinite(beta)) and np.all(beta > 0)):
            raise ValueError("user_fading must be finite and positive")
        if not self.jammer_fading > 0:
            raise ValueError("jammer_fading must be positive")
        if self.user_budget < 0 or self.jammer_budget < 0:
            raise ValueError("power budgets must be nonnegative")

    def replace(self, **changes) -> "SystemParams":
        kwargs = dict(
            num_antennas=self.num_antennas,
            coherence_length=self.coherence_length,
            training_length=self.training_length,
            user_fading=self.user_fading,
            jammer_fading=self.jammer_fading,
            user_budget=self.user_budget,
            jammer_budget=self.jammer_budget,
        )
        kwargs.update(changes)
        return SystemParams(**kwargs)


def path_gain(distance_m, cfg: ScenarioConfig, shadow_normal=0.0):
    """Large-scale gain for users at ``distance_m``.

    ``shadow_normal`` holds standard-normal draws; the shadowing factor is
    ``10 ** (shadow_std_db * n / 10)``.
    """
    r = np.asarray(distance_m, dtype=float)
    z = 10.0 ** (cfg.shadow_std_db * np.asarray(shadow_normal, dtype=float) / 10.0)
    return z / (r / cfg.min_distance_m) ** cfg.decay_exponent


def user_rng(cfg: ScenarioConfig, drop_index: int = 0, *extra: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([cfg.seed, drop_index, *extra]))


def sample_distances(rng: np.random.Generator, cfg: ScenarioConfig, size: int) -> np.ndarray:
    # uniform over the annulus area
    r_min, r_max = cfg.min_distance_m, cfg.cell_radius_m
    u = rng.random(size)
    return np.sqrt(u * (r_max**2 - r_min**2) + r_min**2)


def drop_users(cfg: ScenarioConfig, drop_index: int = 0, *extra: int) -> np.ndarray:
    """Draw the K large-scale gains of one user drop.

    The drop is a deterministic function of ``(cfg.seed, drop_index, *extra)``.
    """
    rng = user_rng(cfg, drop_index, *extra)
    r = sample_distances(rng, cfg, cfg.num_users)
    n = rng.standard_normal(cfg.num_users)
    return path_gain(r, cfg, n)


def make_params(cfg: ScenarioConfig, num_antennas: int, user_budget_db: float,
                jammer_budget_db: float, training_length: int | None = None,
                user_fading=None, drop_index: int = 0) -> SystemParams:
    """Assemble SystemParams from a scenario, converting dB budgets once."""
    beta = drop_users(cfg, drop_index) if user_fading is None else user_fading
    return SystemParams(
        num_antennas=int(num_antennas),
        coherence_length=cfg.coherence_length,
        training_length=cfg.num_users if training_length is None else int(training_length),
        user_fading=beta,
        jammer_fading=cfg.jammer_fading,
        user_budget=db_to_linear(user_budget_db),
        jammer_budget=db_to_linear(jammer_budget_db),
    )
