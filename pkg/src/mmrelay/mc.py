"""Monte Carlo simulator of the exact network model.

Deployments are Poisson point processes simulated around a receiver at the
origin, with the sectored-antenna gain drawn from two uniform beam
orientations per interferer, gamma fading, and the LOS ball deciding each
interferer's path-loss law. It shares no formulas with the quadrature
engine beyond the model definition itself, which makes it the independent
oracle for every analytic probability.

Determinism: each trial draws from its own substream derived from
(seed, stream id, trial index), so estimates are bit-identical for equal
inputs and trials could run in any order or in parallel.

Simulation window: interferers are drawn inside a disk large enough to hold
the LOS ball five times over and about 500 points in expectation. The mean
interference of the dropped far NLOS tail (a deterministic power-law
integral) is added back to every trial's denominator, so truncation leaves
no first-order bias; the tail's own randomness is many orders below the
per-trial interference scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.random import Generator, SeedSequence, default_rng

from .analytic import coverage_all, coverage_with_beam_error
from .model import AntennaPattern, NetworkConfig, gain_distribution

__all__ = [
    "McEstimate",
    "RngSeed",
    "sample_ppp_disk",
    "sample_nakagami_power",
    "sample_interferer_gain",
    "mc_coverage_bu",
    "mc_coverage_br",
    "mc_coverage_ru",
    "mc_validate",
    "ValidationRow",
    "MC_TOLERANCE",
]

_STREAM_BU = 0
_STREAM_BR = 1
_STREAM_RU = 2

_TARGET_POINTS = 500.0

MC_TOLERANCE = 0.015


@dataclass(frozen=True)
class McEstimate:
    """Empirical probability with trial count and 95% confidence half-width."""

    mean: float
    trials: int
    half_width_95: float

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not (0.0 <= self.mean <= 1.0):
            raise ValueError("mean must lie in [0, 1]")
        if self.half_width_95 < 0.0:
            raise ValueError("half_width_95 must be nonnegative")

    @classmethod
    def from_bernoulli(cls, successes: int, trials: int) -> "McEstimate":
        mean = successes / trials
        half = 1.96 * math.sqrt(mean * (1.0 - mean) / trials)
        return cls(mean=mean, trials=trials, half_width_95=half)


@dataclass(frozen=True)
class RngSeed:
    """Root of a family of reproducible substreams: (seed, stream_id, trial)
    always yields the same sample path."""

    seed: int
    stream_id: int

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if v < 0 or v >= 2 ** 64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer")

    def trial_rng(self, trial: int) -> Generator:
        return default_rng(SeedSequence([self.seed, self.stream_id, trial]))


def sample_ppp_disk(density: float, r_max: float, rng: Generator) -> np.ndarray:
    """Homogeneous PPP on a disk of radius r_max, as an (n, 2) array of
    (distance, angle) rows sorted by distance."""
    if density < 0.0:
        raise ValueError("density must be nonnegative")
    if r_max <= 0.0:
        raise ValueError("r_max must be positive")
    radii = _ppp_radii(density, r_max, rng)
    angles = rng.uniform(0.0, 2.0 * math.pi, radii.size)
    return np.column_stack((radii, angles))


def _ppp_radii(density: float, r_max: float, rng: Generator) -> np.ndarray:
    """Sorted distances of a PPP on the disk: a Poisson count, then radii
    with density proportional to r (uniform points in area)."""
    if density == 0.0:
        return np.empty(0)
    count = rng.poisson(density * math.pi * r_max * r_max)
    radii = r_max * np.sqrt(rng.random(count))
    radii.sort()
    return radii


def sample_nakagami_power(N: int, rng: Generator) -> float:
    """Unit-mean power fading gain: gamma with shape N, scale 1/N."""
    if N < 1 or int(N) != N:
        raise ValueError("N must be a positive integer")
    return float(rng.gamma(N, 1.0 / N))


def sample_interferer_gain(antenna: AntennaPattern, rng: Generator) -> float:
    """Combined gain of one interfering link: both ends point uniformly at
    random and contribute the main-lobe gain iff their offset from the link
    direction falls inside the beamwidth."""
    half = antenna.beamwidth_theta / 2.0
    tx_off = rng.uniform(-math.pi, math.pi)
    rx_off = rng.uniform(-math.pi, math.pi)
    g_tx = antenna.main_gain_M if abs(tx_off) <= half else antenna.side_gain_m
    g_rx = antenna.main_gain_M if abs(rx_off) <= half else antenna.side_gain_m
    return g_tx * g_rx


def _interferer_gains(antenna: AntennaPattern, rng: Generator, count: int) -> np.ndarray:
    """Vectorized sample_interferer_gain for one trial's interferer set."""
    half = antenna.beamwidth_theta / 2.0
    tx_main = np.abs(rng.uniform(-math.pi, math.pi, count)) <= half
    rx_main = np.abs(rng.uniform(-math.pi, math.pi, count)) <= half
    M = antenna.main_gain_M
    m = antenna.side_gain_m
    return np.where(tx_main & rx_main, M * M, np.where(tx_main | rx_main, M * m, m * m))


def _simulation_window(cfg: NetworkConfig, density: float, tx_power: float,
                       r_max: float | None) -> tuple[float, float]:
    """Window radius and the mean interference of the dropped NLOS tail."""
    r_b = cfg.blockage.ball_radius_RB
    if r_max is None:
        window = 5.0 * r_b
        if density > 0.0:
            window = max(window, math.sqrt(_TARGET_POINTS / (math.pi * density)))
    else:
        if r_max <= r_b:
            raise ValueError("r_max must exceed the LOS ball radius")
        window = r_max
    if density == 0.0:
        return window, 0.0
    mean_gain = gain_distribution(cfg.antenna).mean_gain()
    alpha_n = cfg.blockage.alpha_N
    tail = (2.0 * math.pi * density * mean_gain * tx_power
            * window ** (2.0 - alpha_n) / (alpha_n - 2.0))
    return window, tail


def _interference(cfg: NetworkConfig, tx_power: float, radii: np.ndarray,
                  rng: Generator) -> float:
    """Aggregate interference power from interferers at the given distances:
    random gain level, gamma fading with the LOS/NLOS shape, and the
    LOS/NLOS path-loss exponent picked by the ball radius."""
    gains = _interferer_gains(cfg.antenna, rng, radii.size)
    los = radii <= cfg.blockage.ball_radius_RB
    n_l = cfg.fading.nakagami_NL
    n_n = cfg.fading.nakagami_NN
    fading = np.empty(radii.size)
    n_los = int(np.count_nonzero(los))
    fading[los] = rng.gamma(n_l, 1.0 / n_l, n_los)
    fading[~los] = rng.gamma(n_n, 1.0 / n_n, radii.size - n_los)
    path = np.where(los, radii ** (-cfg.blockage.alpha_L), radii ** (-cfg.blockage.alpha_N))
    return tx_power * float(np.sum(gains * fading * path))


def _ru_serving_distance(a: float, rng: Generator) -> float:
    """Distance from a user to its serving relay: pdf 2r/a^2 on [0, a],
    sampled by inverting the CDF (r = a sqrt(u))."""
    return a * math.sqrt(rng.random())


def _serving_gain(cfg: NetworkConfig, rng: Generator) -> float:
    """Serving-link gain: aligned main lobes unless beam-steering errors are
    on, in which case each end keeps its main lobe iff its half-normal
    pointing error stays within half the beamwidth."""
    ant = cfg.antenna
    if cfg.beam_error_sigma == 0.0:
        return ant.aligned_gain
    half = ant.beamwidth_theta / 2.0
    e_tx = abs(rng.normal(0.0, cfg.beam_error_sigma))
    e_rx = abs(rng.normal(0.0, cfg.beam_error_sigma))
    g_tx = ant.main_gain_M if e_tx <= half else ant.side_gain_m
    g_rx = ant.main_gain_M if e_rx <= half else ant.side_gain_m
    return g_tx * g_rx


def _downlink_trial(cfg: NetworkConfig, tx_power: float, thin_prob: float | None,
                    window: float, tail: float, rng: Generator) -> bool:
    """One trial of a base-station downlink: nearest base station serves (LOS
    required), the rest interfere, thinned to the transmitting density when
    thin_prob is given."""
    radii = _ppp_radii(cfg.lambda_B, window, rng)
    if radii.size == 0 or radii[0] > cfg.blockage.ball_radius_RB:
        return False
    x0 = float(radii[0])
    interferers = radii[1:]
    if thin_prob is not None:
        interferers = interferers[rng.random(interferers.size) < thin_prob]
    interference = _interference(cfg, tx_power, interferers, rng) + tail
    g0 = _serving_gain(cfg, rng)
    n_l = cfg.fading.nakagami_NL
    h0 = float(rng.gamma(n_l, 1.0 / n_l))
    signal = tx_power * g0 * h0 * x0 ** (-cfg.blockage.alpha_L)
    return signal / (cfg.sigma2 + interference) > cfg.threshold_T


def mc_coverage_bu(cfg: NetworkConfig, trials: int, seed: int, *,
                   r_max: float | None = None) -> McEstimate:
    """Simulated coverage of the direct base-station-to-user link."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    window, tail = _simulation_window(cfg, cfg.lambda_B, cfg.P_BU, r_max)
    root = RngSeed(seed, _STREAM_BU)
    successes = 0
    for trial in range(trials):
        rng = root.trial_rng(trial)
        successes += bool(_downlink_trial(cfg, cfg.P_BU, None, window, tail, rng))
    return McEstimate.from_bernoulli(successes, trials)


def mc_coverage_br(cfg: NetworkConfig, trials: int, seed: int, *,
                   r_max: float | None = None) -> McEstimate:
    """Simulated coverage of the base-station-to-relay link: the serving
    distance comes from the full base-station process while the interfering
    process is thinned to min(lambda_B, lambda_R)."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    window, tail = _simulation_window(cfg, cfg.lambda_min, cfg.P_BR, r_max)
    thin_prob = cfg.lambda_min / cfg.lambda_B
    root = RngSeed(seed, _STREAM_BR)
    successes = 0
    for trial in range(trials):
        rng = root.trial_rng(trial)
        successes += bool(_downlink_trial(cfg, cfg.P_BR, thin_prob, window, tail, rng))
    return McEstimate.from_bernoulli(successes, trials)


def mc_coverage_ru(cfg: NetworkConfig, lambda_prime: float, trials: int, seed: int, *,
                   r_max: float | None = None) -> McEstimate:
    """Simulated coverage of the relay-to-user link: serving distance with
    pdf 2r/a^2 on [0, a], interfering active relays of density lambda_prime
    outside the serving distance."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if lambda_prime < 0.0:
        raise ValueError("lambda_prime must be nonnegative")
    window, tail = _simulation_window(cfg, lambda_prime, cfg.P_RU, r_max)
    a = cfg.relay_disk_a
    n_l = cfg.fading.nakagami_NL
    root = RngSeed(seed, _STREAM_RU)
    successes = 0
    for trial in range(trials):
        rng = root.trial_rng(trial)
        y0 = _ru_serving_distance(a, rng)
        radii = _ppp_radii(lambda_prime, window, rng)
        interferers = radii[radii >= y0]
        interference = _interference(cfg, cfg.P_RU, interferers, rng) + tail
        g0 = _serving_gain(cfg, rng)
        h0 = float(rng.gamma(n_l, 1.0 / n_l))
        signal = cfg.P_RU * g0 * h0 * y0 ** (-cfg.blockage.alpha_L)
        successes += bool(signal / (cfg.sigma2 + interference) > cfg.threshold_T)
    return McEstimate.from_bernoulli(successes, trials)


@dataclass(frozen=True)
class ValidationRow:
    """One analytic-vs-simulation comparison."""

    link: str
    analytic: float
    mc_mean: float
    half_width: float
    abs_diff: float
    passed: bool


def _row(link: str, analytic: float, est: McEstimate) -> ValidationRow:
    diff = abs(analytic - est.mean)
    tol = max(MC_TOLERANCE, 3.0 * est.half_width_95)
    return ValidationRow(link, analytic, est.mean, est.half_width_95, diff, diff <= tol)


def mc_validate(cfg: NetworkConfig, trials: int, seed: int) -> list[ValidationRow]:
    """Compare every analytic link coverage against its simulated estimate,
    both under perfect alignment and averaged over beam-steering errors.

    A row passes iff |analytic - mc| <= max(0.015, 3 * half_width_95).
    Failures are reported as data, not raised.
    """
    if trials < 10_000:
        raise ValueError("trials must be at least 10000")

    aligned = replace(cfg, beam_error_sigma=0.0)
    cov = coverage_all(aligned)
    rows = [
        _row("bu", cov.p_bu, mc_coverage_bu(aligned, trials, seed)),
        _row("br", cov.p_br, mc_coverage_br(aligned, trials, seed)),
        _row("ru", cov.p_ru, mc_coverage_ru(aligned, cov.lambda_prime, trials, seed)),
    ]

    cov_be = coverage_with_beam_error(cfg)
    rows += [
        _row("bu_beam_error", cov_be.p_bu, mc_coverage_bu(cfg, trials, seed)),
        _row("br_beam_error", cov_be.p_br, mc_coverage_br(cfg, trials, seed)),
        _row("ru_beam_error", cov_be.p_ru,
             mc_coverage_ru(cfg, cov_be.lambda_prime, trials, seed)),
    ]
    return rows
