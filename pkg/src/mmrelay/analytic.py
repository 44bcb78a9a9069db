"""Closed-form coverage, power, spectral-efficiency and energy-efficiency
expressions, evaluated by nested adaptive quadrature.

Every operation here is a pure function of immutable inputs and can be
called concurrently. The only shared state is a memo cache on the two inner
interference integrals; it caches results of pure functions, so concurrent
use can at worst duplicate work, never change a result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Sequence

from .model import (
    AntennaPattern,
    GainDistribution,
    NetworkConfig,
    eta,
    gain_distribution,
)
from .quadrature import DEFAULT_SETTINGS, QuadratureSettings, integrate

__all__ = [
    "CoverageResult",
    "EEBreakdown",
    "laplace_los_term",
    "laplace_nlos_term",
    "laplace_interference",
    "coverage_bu",
    "coverage_br",
    "coverage_ru",
    "coverage_all",
    "beam_error_gain_distribution",
    "coverage_with_beam_error",
    "avg_power_bs",
    "avg_power_rs",
    "area_spectral_efficiencies",
    "energy_efficiency",
    "evaluate",
    "optimal_bs_density",
]


@dataclass(frozen=True)
class CoverageResult:
    """Per-link coverage probabilities and the resulting active-relay density."""

    p_bu: float
    p_br: float
    p_ru: float
    lambda_prime: float

    def __post_init__(self):
        for name in ("p_bu", "p_br", "p_ru"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.lambda_prime < 0.0:
            raise ValueError("lambda_prime must be nonnegative")

    @property
    def dual_hop(self) -> float:
        """Coverage of the relayed two-hop link (both hops must decode)."""
        return self.p_br * self.p_ru


@dataclass(frozen=True)
class EEBreakdown:
    """Area spectral efficiencies, average area power consumptions, and their
    ratio ee = (tau_nc + tau_c) / (p_b_avg + p_r_avg)."""

    tau_nc: float
    tau_c: float
    p_b_avg: float
    p_r_avg: float
    ee: float

    def __post_init__(self):
        for name in ("tau_nc", "tau_c", "p_b_avg", "p_r_avg", "ee"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")


def _trunc_ccdf_factor(x: float, N: int) -> float:
    """1 - (1 + x)^(-N), computed without cancellation for tiny x."""
    return -math.expm1(-N * math.log1p(x))


@lru_cache(maxsize=262144)
def _los_integral(w: float, x0: float, r_b: float, alpha_l: float, n_l: int,
                  settings: QuadratureSettings) -> float:
    """integral_{x0}^{r_b} (1 - (1 + w t^-alpha_l / n_l)^-n_l) t dt."""
    if w == 0.0 or x0 >= r_b:
        return 0.0

    def f(t):
        return _trunc_ccdf_factor(w * t ** (-alpha_l) / n_l, n_l) * t

    return integrate(f, x0, r_b, settings)


@lru_cache(maxsize=262144)
def _nlos_integral(w: float, r_b: float, alpha_n: float, n_n: int,
                   settings: QuadratureSettings) -> float:
    """integral_{r_b}^{inf} (1 - (1 + w t^-alpha_n / n_n)^-n_n) t dt.

    Default route substitutes u = 1/t, turning the improper integral into one
    over (0, 1/r_b] whose integrand decays like u^(alpha_n - 3) at 0. The
    truncation route integrates outward directly, doubling the cutoff until
    the increment falls below abs_tol.
    """
    if w == 0.0:
        return 0.0

    if settings.nlos_truncation_radius is None:
        def f(u):
            return _trunc_ccdf_factor(w * u ** alpha_n / n_n, n_n) * u ** (-3.0)

        return integrate(f, 0.0, 1.0 / r_b, settings)

    radius = settings.nlos_truncation_radius
    if radius <= r_b:
        raise ValueError("nlos_truncation_radius must exceed the LOS ball radius")

    def f(t):
        return _trunc_ccdf_factor(w * t ** (-alpha_n) / n_n, n_n) * t

    total = integrate(f, r_b, radius, settings)
    for _ in range(200):
        piece = integrate(f, radius, 2.0 * radius, settings)
        total += piece
        radius *= 2.0
        if abs(piece) < settings.abs_tol:
            return total
    raise RuntimeError("truncation radius doubling did not converge")


def laplace_los_term(s: float, density: float, gain_prob: tuple[float, float],
                     tx_power: float, x0: float, cfg: NetworkConfig,
                     settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """Laplace transform factor of the LOS interference from one thinned
    process of density density * prob with antenna gain `gain`.

    Interferers live between the serving distance x0 and the LOS ball edge;
    their fading moment generating function is that of a unit-mean gamma
    variable with integer shape N_L.
    """
    if s < 0.0:
        raise ValueError("s must be nonnegative")
    b = cfg.blockage
    if not (0.0 <= x0 <= b.ball_radius_RB):
        raise ValueError("x0 must lie in [0, ball_radius_RB]")
    gain, prob = gain_prob
    if prob == 0.0:
        return 1.0
    J = _los_integral(s * tx_power * gain, x0, b.ball_radius_RB, b.alpha_L,
                      cfg.fading.nakagami_NL, settings)
    return math.exp(-2.0 * math.pi * density * prob * J)


def laplace_nlos_term(s: float, density: float, gain_prob: tuple[float, float],
                      tx_power: float, cfg: NetworkConfig,
                      settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """Laplace transform factor of the NLOS interference (beyond the LOS
    ball) from one thinned process, see laplace_los_term."""
    if s < 0.0:
        raise ValueError("s must be nonnegative")
    b = cfg.blockage
    gain, prob = gain_prob
    if prob == 0.0:
        return 1.0
    J = _nlos_integral(s * tx_power * gain, b.ball_radius_RB, b.alpha_N,
                       cfg.fading.nakagami_NN, settings)
    return math.exp(-2.0 * math.pi * density * prob * J)


def _interference_exponent(s: float, density: float, cfg: NetworkConfig,
                           tx_power: float, x0: float,
                           settings: QuadratureSettings) -> float:
    """Negated log of the full interference Laplace transform: the gain PMF
    splits the interferer process into three independent thinned processes,
    each with a LOS and an NLOS part."""
    b = cfg.blockage
    n_l = cfg.fading.nakagami_NL
    n_n = cfg.fading.nakagami_NN
    total = 0.0
    for gain, prob in gain_distribution(cfg.antenna).levels:
        if prob == 0.0:
            continue
        w = s * tx_power * gain
        total += prob * (
            _los_integral(w, x0, b.ball_radius_RB, b.alpha_L, n_l, settings)
            + _nlos_integral(w, b.ball_radius_RB, b.alpha_N, n_n, settings)
        )
    return 2.0 * math.pi * density * total


def laplace_interference(s: float, density: float, cfg: NetworkConfig,
                         tx_power: float, x0: float,
                         settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """E[exp(-s I)] for the aggregate interference seen at the receiver: the
    product of the six thinned-process terms (three gain levels, LOS and
    NLOS)."""
    if s < 0.0:
        raise ValueError("s must be nonnegative")
    if not (0.0 <= x0 <= cfg.blockage.ball_radius_RB):
        raise ValueError("x0 must lie in [0, ball_radius_RB]")
    return math.exp(-_interference_exponent(s, density, cfg, tx_power, x0, settings))


def _link_coverage(cfg: NetworkConfig, tx_power: float, interferer_density: float,
                   serving_gain: float, distance_pdf, upper: float,
                   settings: QuadratureSettings) -> float:
    """Shared structure of all link coverage integrals.

    The serving link is LOS with gamma fading of shape N_L; its tail is
    expanded into the alternating binomial sum with the eta calibration
    constant, which turns the interference average into Laplace transform
    evaluations at s_n = n eta_L T x^alpha_L / (P G0).
    """
    n_l = cfg.fading.nakagami_NL
    eta_l = eta(n_l)
    T = cfg.threshold_T
    alpha_l = cfg.blockage.alpha_L
    coeffs = [(-1.0) ** (n + 1) * math.comb(n_l, n) for n in range(1, n_l + 1)]

    def integrand(x):
        acc = 0.0
        base = eta_l * T * x ** alpha_l / (tx_power * serving_gain)
        for n, c in enumerate(coeffs, start=1):
            s = n * base
            noise = math.exp(-s * cfg.sigma2)
            acc += c * noise * math.exp(
                -_interference_exponent(s, interferer_density, cfg, tx_power, x, settings)
            )
        return acc * distance_pdf(x)

    value = integrate(integrand, 0.0, upper, settings)
    return min(1.0, max(0.0, value))


def _nearest_node_pdf(density: float):
    """pdf of the distance to the nearest point of a process of the given
    density: 2 pi density x exp(-pi density x^2)."""

    def pdf(x):
        return 2.0 * math.pi * density * x * math.exp(-math.pi * density * x * x)

    return pdf


def coverage_bu(cfg: NetworkConfig, *, serving_gain: float | None = None,
                settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """Coverage probability of the direct base-station-to-user link.

    Integrates over the serving distance up to the LOS ball edge (a nearest
    base station beyond it cannot serve), against the nearest-point distance
    pdf of the base-station process.
    """
    g0 = cfg.antenna.aligned_gain if serving_gain is None else serving_gain
    return _link_coverage(
        cfg, cfg.P_BU, cfg.lambda_B, g0,
        _nearest_node_pdf(cfg.lambda_B), cfg.blockage.ball_radius_RB, settings,
    )


def coverage_br(cfg: NetworkConfig, *, serving_gain: float | None = None,
                settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """Coverage probability of the base-station-to-relay link.

    The serving distance is still drawn from the full base-station process,
    but only min(lambda_B, lambda_R) base stations per unit area transmit to
    relays at a time, so that density drives the interference.
    """
    g0 = cfg.antenna.aligned_gain if serving_gain is None else serving_gain
    return _link_coverage(
        cfg, cfg.P_BR, cfg.lambda_min, g0,
        _nearest_node_pdf(cfg.lambda_B), cfg.blockage.ball_radius_RB, settings,
    )


def coverage_ru(cfg: NetworkConfig, lambda_prime: float, *,
                serving_gain: float | None = None,
                settings: QuadratureSettings = DEFAULT_SETTINGS) -> float:
    """Coverage probability of the relay-to-user link.

    The serving distance has pdf 2r/a^2 on [0, a] (users uniform in the relay
    service disk); interference comes from the active relays of density
    lambda_prime.
    """
    if lambda_prime < 0.0:
        raise ValueError("lambda_prime must be nonnegative")
    g0 = cfg.antenna.aligned_gain if serving_gain is None else serving_gain
    a = cfg.relay_disk_a
    return _link_coverage(
        cfg, cfg.P_RU, lambda_prime, g0,
        lambda x: 2.0 * x / (a * a), a, settings,
    )


def coverage_all(cfg: NetworkConfig,
                 settings: QuadratureSettings = DEFAULT_SETTINGS) -> CoverageResult:
    """All three link coverages under perfect beam alignment.

    Only relays that decode the first hop retransmit, so the relay-to-user
    link sees interferer density lambda_prime = lambda_min * p_br.
    """
    p_bu = coverage_bu(cfg, settings=settings)
    p_br = coverage_br(cfg, settings=settings)
    lambda_prime = cfg.lambda_min * p_br
    p_ru = coverage_ru(cfg, lambda_prime, settings=settings)
    return CoverageResult(p_bu, p_br, p_ru, lambda_prime)


def beam_error_gain_distribution(antenna: AntennaPattern,
                                 sigma_BE: float) -> GainDistribution:
    """Serving-link gain PMF under Gaussian beam-steering errors.

    Each end keeps its main lobe on the link iff its absolute pointing error
    (half-normal with scale sigma_BE) stays within half the beamwidth, which
    happens with probability F = erf(theta / (2 sqrt(2) sigma_BE)).
    """
    if sigma_BE < 0.0:
        raise ValueError("sigma_BE must be nonnegative")
    if sigma_BE == 0.0:
        F = 1.0
    else:
        F = math.erf(antenna.beamwidth_theta / (2.0 * math.sqrt(2.0) * sigma_BE))
    M = antenna.main_gain_M
    m = antenna.side_gain_m
    return GainDistribution((
        (M * M, F * F),
        (M * m, 2.0 * F * (1.0 - F)),
        (m * m, (1.0 - F) ** 2),
    ))


def coverage_with_beam_error(cfg: NetworkConfig,
                             settings: QuadratureSettings = DEFAULT_SETTINGS) -> CoverageResult:
    """Link coverages averaged over the serving-gain PMF under beam-steering
    errors.

    Interferers already point randomly, so their PMF is unchanged; only the
    serving gain is averaged. The active-relay density uses the error-averaged
    first-hop coverage.
    """
    weights = beam_error_gain_distribution(cfg.antenna, cfg.beam_error_sigma)

    def averaged(link):
        return sum(w * link(g0) for g0, w in weights.levels if w > 0.0)

    p_bu = averaged(lambda g0: coverage_bu(cfg, serving_gain=g0, settings=settings))
    p_br = averaged(lambda g0: coverage_br(cfg, serving_gain=g0, settings=settings))
    lambda_prime = cfg.lambda_min * p_br
    p_ru = averaged(lambda g0: coverage_ru(cfg, lambda_prime, serving_gain=g0,
                                           settings=settings))
    return CoverageResult(p_bu, p_br, p_ru, lambda_prime)


def avg_power_bs(cfg: NetworkConfig) -> float:
    """Average base-station power per unit area.

    Every base station burns its static power and transmits to users; at most
    lambda_min of them per unit area feed relays, and only during one of the
    two slots, hence the 1/2.
    """
    pm = cfg.power_model
    return cfg.lambda_B * pm.static_bs_PB0 + pm.beta_B * (
        cfg.lambda_B * cfg.P_BU + cfg.lambda_min * cfg.P_BR / 2.0
    )


def avg_power_rs(cfg: NetworkConfig, lambda_prime: float) -> float:
    """Average relay power per unit area: idle relays burn static power only,
    active ones (density lambda_prime) also transmit during their slot."""
    if not (0.0 <= lambda_prime <= cfg.lambda_min):
        raise ValueError("lambda_prime must lie in [0, lambda_min]")
    pm = cfg.power_model
    return (cfg.lambda_R - lambda_prime) * pm.static_rs_PR0 + lambda_prime * (
        pm.beta_R * cfg.P_RU / 2.0 + pm.static_rs_PR0
    )


def area_spectral_efficiencies(cfg: NetworkConfig,
                               cov: CoverageResult) -> tuple[float, float]:
    """(tau_nc, tau_c): throughput density of the direct and the relayed
    route. Bandwidth enters only through the split between the two routes;
    the relayed route pays an extra 1/2 for half-duplex relaying."""
    share = cfg.B_nc + cfg.B_c
    rate = math.log2(1.0 + cfg.threshold_T)
    tau_nc = (cfg.B_nc / share) * cfg.lambda_B * cov.p_bu * rate
    tau_c = 0.5 * (cfg.B_c / share) * cfg.lambda_min * cov.p_br * cov.p_ru * rate
    return tau_nc, tau_c


def evaluate(cfg: NetworkConfig,
             settings: QuadratureSettings = DEFAULT_SETTINGS
             ) -> tuple[CoverageResult, EEBreakdown]:
    """Coverage plus the full energy-efficiency breakdown for one scenario."""
    if cfg.beam_error_sigma > 0.0:
        cov = coverage_with_beam_error(cfg, settings)
    else:
        cov = coverage_all(cfg, settings)
    tau_nc, tau_c = area_spectral_efficiencies(cfg, cov)
    p_b = avg_power_bs(cfg)
    p_r = avg_power_rs(cfg, cov.lambda_prime)
    ee = (tau_nc + tau_c) / (p_b + p_r)
    return cov, EEBreakdown(tau_nc, tau_c, p_b, p_r, ee)


def energy_efficiency(cfg: NetworkConfig,
                      settings: QuadratureSettings = DEFAULT_SETTINGS) -> EEBreakdown:
    """Energy efficiency (throughput density over power density) for one
    scenario, using the beam-error-averaged coverage when beam_error_sigma
    is positive."""
    return evaluate(cfg, settings)[1]


def optimal_bs_density(cfg: NetworkConfig, grid: Sequence[float],
                       settings: QuadratureSettings = DEFAULT_SETTINGS
                       ) -> tuple[float, float]:
    """Base-station density maximizing energy efficiency over a grid.

    Ties break toward the smaller density.
    """
    values = list(grid)
    if not values:
        raise ValueError("grid must be non-empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("grid must be strictly increasing")
    best_lam = best_ee = None
    for lam in values:
        ee = energy_efficiency(replace(cfg, lambda_B=lam), settings).ee
        if best_ee is None or ee > best_ee:
            best_lam, best_ee = lam, ee
    return best_lam, best_ee
