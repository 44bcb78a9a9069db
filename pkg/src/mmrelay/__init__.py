"""Analytic engine and Monte Carlo cross-validator for coverage and energy
efficiency of relay-assisted mmWave cellular networks."""

from .analytic import (
    CoverageResult,
    EEBreakdown,
    area_spectral_efficiencies,
    avg_power_bs,
    avg_power_rs,
    beam_error_gain_distribution,
    coverage_all,
    coverage_br,
    coverage_bu,
    coverage_ru,
    coverage_with_beam_error,
    energy_efficiency,
    evaluate,
    laplace_interference,
    laplace_los_term,
    laplace_nlos_term,
    optimal_bs_density,
)
from .config import (
    ConfigError,
    SweepSpec,
    build_config,
    default_config,
    load_config,
    parse_config_file,
    parse_sweep_file,
)
from .mc import (
    McEstimate,
    RngSeed,
    ValidationRow,
    mc_coverage_br,
    mc_coverage_bu,
    mc_coverage_ru,
    mc_validate,
    sample_interferer_gain,
    sample_nakagami_power,
    sample_ppp_disk,
)
from .model import (
    AntennaPattern,
    BlockageModel,
    FadingParams,
    GainDistribution,
    NetworkConfig,
    PowerModel,
    db_to_linear,
    dbm_to_watts,
    eta,
    gain_distribution,
    linear_to_db,
    watts_to_dbm,
)
from .quadrature import QuadratureError, QuadratureSettings

__version__ = "0.1.0"
