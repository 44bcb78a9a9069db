"""Core system-model types and unit helpers.

Everything downstream of the configuration boundary works in SI linear units:
watts, meters, hertz, radians, linear power gains. dB / dBm values are
converted exactly once, when a configuration is built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi


def db_to_linear(x_db: float) -> float:
    """10^(x/10)."""
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    """Inverse of db_to_linear; x must be positive."""
    return 10.0 * math.log10(x)


def dbm_to_watts(x_dbm: float) -> float:
    """10^((x - 30)/10)."""
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watts_to_dbm(x_w: float) -> float:
    """Inverse of dbm_to_watts; x_w must be positive."""
    return 10.0 * math.log10(x_w) + 30.0


def eta(N: int) -> float:
    """Tail constant N * (N!)^(-1/N) of a unit-mean gamma variable with
    integer shape N.

    It calibrates the exponential upper bound of the gamma CDF that the
    coverage integrands expand binomially, so it appears in every coverage
    expression alongside the LOS Nakagami parameter.
    """
    if N < 1 or int(N) != N:
        raise ValueError("N must be a positive integer")
    N = int(N)
    return N * math.factorial(N) ** (-1.0 / N)


@dataclass(frozen=True)
class AntennaPattern:
    """Sectored beam pattern: a constant main-lobe gain over beamwidth_theta,
    a constant side-lobe gain everywhere else.

    Gains are linear power ratios, beamwidth in radians.
    """

    main_gain_M: float
    side_gain_m: float
    beamwidth_theta: float

    def __post_init__(self):
        if not (self.main_gain_M >= self.side_gain_m > 0.0):
            raise ValueError("antenna gains must satisfy main_gain_M >= side_gain_m > 0")
        if not (0.0 < self.beamwidth_theta <= TWO_PI):
            raise ValueError("beamwidth_theta must lie in (0, 2*pi]")

    @property
    def aligned_gain(self) -> float:
        """Combined tx/rx gain of a perfectly aligned link (both main lobes)."""
        return self.main_gain_M * self.main_gain_M


@dataclass(frozen=True)
class GainDistribution:
    """PMF of the combined tx/rx antenna gain over the three alignment levels:
    both main lobes, exactly one main lobe, neither.

    levels is ((gain, probability), ...) in that fixed order.
    """

    levels: tuple[tuple[float, float], tuple[float, float], tuple[float, float]]

    def __post_init__(self):
        if len(self.levels) != 3:
            raise ValueError("exactly three gain levels required")
        gains = [g for g, _ in self.levels]
        probs = [p for _, p in self.levels]
        if abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError("gain probabilities must sum to 1")
        if any(p < 0.0 or p > 1.0 for p in probs):
            raise ValueError("gain probabilities must lie in [0, 1]")
        if any(g <= 0.0 for g in gains):
            raise ValueError("gains must be strictly positive")
        if not (gains[0] >= gains[1] >= gains[2]):
            raise ValueError("gains must be non-increasing over the three levels")

    @property
    def gains(self) -> tuple[float, float, float]:
        return tuple(g for g, _ in self.levels)

    @property
    def probs(self) -> tuple[float, float, float]:
        return tuple(p for _, p in self.levels)

    def mean_gain(self) -> float:
        return sum(g * p for g, p in self.levels)


def gain_distribution(antenna: AntennaPattern) -> GainDistribution:
    """Gain PMF of an interfering link.

    Both ends of an interfering link point their beams uniformly at random,
    so each end covers the link with probability theta/(2*pi) independently.
    """
    q = antenna.beamwidth_theta / TWO_PI
    M = antenna.main_gain_M
    m = antenna.side_gain_m
    return GainDistribution((
        (M * M, q * q),
        (M * m, 2.0 * q * (1.0 - q)),
        (m * m, (1.0 - q) ** 2),
    ))


@dataclass(frozen=True)
class BlockageModel:
    """LOS-ball blockage: every link shorter than ball_radius_RB is
    line-of-sight with path-loss exponent alpha_L, every longer link is
    non-line-of-sight with exponent alpha_N.
    """

    ball_radius_RB: float
    alpha_L: float
    alpha_N: float

    def __post_init__(self):
        if self.ball_radius_RB <= 0.0:
            raise ValueError("ball_radius_RB must be positive")
        if self.alpha_L < 2.0:
            raise ValueError("alpha_L must be at least 2")
        if self.alpha_N < self.alpha_L:
            raise ValueError("alpha_N must be at least alpha_L")
        # alpha_L = 2 is fine (LOS integrals run over a bounded interval) but
        # the NLOS interference integral extends to infinity and diverges
        # unless alpha_N exceeds 2.
        if self.alpha_N <= 2.0:
            raise ValueError("alpha_N must exceed 2 for far-field interference to converge")


@dataclass(frozen=True)
class FadingParams:
    """Nakagami fading shapes (positive integers) for LOS and NLOS links.
    A link's power fading gain is gamma distributed with shape N and mean 1.
    """

    nakagami_NL: int
    nakagami_NN: int

    def __post_init__(self):
        for name in ("nakagami_NL", "nakagami_NN"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer")

    @property
    def eta_L(self) -> float:
        return eta(self.nakagami_NL)


@dataclass(frozen=True)
class PowerModel:
    """Per-node power consumption P_tot = P_0 + beta * P_T: a static part and
    an amplifier part proportional to the transmit power."""

    static_bs_PB0: float
    static_rs_PR0: float
    beta_B: float
    beta_R: float

    def __post_init__(self):
        if self.static_bs_PB0 <= 0.0 or self.static_rs_PR0 <= 0.0:
            raise ValueError("static powers must be positive")
        if self.beta_B < 1.0 or self.beta_R < 1.0:
            raise ValueError("amplifier inefficiencies beta_B, beta_R must be >= 1")


@dataclass(frozen=True)
class NetworkConfig:
    """Full scenario parameterization, immutable and validated.

    Densities are per m^2, powers in watts, bandwidths in Hz, distances in
    meters, threshold_T is the linear SINR threshold, beam_error_sigma the
    beam-steering error standard deviation in radians (0 = perfect alignment).
    """

    lambda_B: float
    lambda_R: float
    P_BU: float
    P_BR: float
    P_RU: float
    sigma2: float
    threshold_T: float
    relay_disk_a: float
    B_nc: float
    B_c: float
    antenna: AntennaPattern
    blockage: BlockageModel
    fading: FadingParams
    power_model: PowerModel
    beam_error_sigma: float = 0.0

    def __post_init__(self):
        positive = (
            "lambda_B", "lambda_R", "P_BU", "P_BR", "P_RU", "sigma2",
            "threshold_T", "relay_disk_a", "B_nc", "B_c",
        )
        for name in positive:
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        if self.beam_error_sigma < 0.0:
            raise ValueError("beam_error_sigma must be nonnegative")
        # Serving relays must be LOS to their users, which needs the relay
        # service disk to sit inside the LOS ball.
        if self.relay_disk_a > self.blockage.ball_radius_RB:
            raise ValueError("relay_disk_a must not exceed ball_radius_RB")

    @property
    def lambda_min(self) -> float:
        return min(self.lambda_B, self.lambda_R)
