"""Configuration files and sweep specifications.

Config files are flat ``key = value`` text with ``#`` comments. Keys carry
the customary field-measurement units (dB, dBm, degrees); values are
converted to SI linear units when the NetworkConfig is built. Every key has
a baseline default except lambda_B, which must always be given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    AntennaPattern,
    BlockageModel,
    FadingParams,
    NetworkConfig,
    PowerModel,
    db_to_linear,
    dbm_to_watts,
)


class ConfigError(ValueError):
    """Invalid or incomplete configuration input."""


# Baseline scenario, overridable key by key. theta_deg and sigma_BE_deg are
# not part of the published baseline table; 30 deg is the reference antenna
# pattern used throughout and 0 means perfect beam alignment.
DEFAULTS: dict[str, float | int] = {
    "alpha_L": 2.0,
    "alpha_N": 4.0,
    "N_L": 3,
    "N_N": 2,
    "M_dB": 20.0,
    "m_dB": -10.0,
    "theta_deg": 30.0,
    "lambda_R": 1e-4,
    "R_B": 100.0,
    "a": 30.0,
    "T_dB": 30.0,
    "sigma2_dBm": -70.0,
    "B_nc": 1e9,
    "B_c": 100e6,
    "P_BU_dBm": 50.0,
    "P_BR_dBm": 50.0,
    "P_RU_dBm": 30.0,
    "P_B0": 100.0,
    "P_R0": 5.0,
    "beta_B": 5.0,
    "beta_R": 4.0,
    "sigma_BE_deg": 0.0,
}

INT_KEYS = frozenset({"N_L", "N_N"})
CONFIG_KEYS = frozenset(DEFAULTS) | {"lambda_B"}


def _parse_value(key: str, text: str):
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"value for key '{key}' is not a number: {text!r}") from None
    if key in INT_KEYS:
        if value != int(value):
            raise ConfigError(f"key '{key}' requires an integer value, got {text!r}")
        return int(value)
    return value


def _parse_lines(lines, source: str) -> list[tuple[str, str]]:
    """Split ``key = value`` lines into raw pairs, dropping comments."""
    pairs = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        pairs.append((key.strip(), value.strip()))
    return pairs


def parse_config_file(path) -> dict[str, float | int]:
    """Read a config file into a key/value mapping (no defaults applied)."""
    with open(path, "r", encoding="utf-8") as fh:
        pairs = _parse_lines(fh, str(path))
    mapping: dict[str, float | int] = {}
    for key, text in pairs:
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key '{key}'")
        if key in mapping:
            raise ConfigError(f"duplicate config key '{key}'")
        mapping[key] = _parse_value(key, text)
    return mapping


def build_config(mapping: dict) -> NetworkConfig:
    """Turn a key/value mapping into a validated NetworkConfig.

    Missing keys fall back to DEFAULTS; lambda_B has no default and must be
    present.
    """
    unknown = set(mapping) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config key '{sorted(unknown)[0]}'")
    if "lambda_B" not in mapping:
        raise ConfigError("missing required config key 'lambda_B'")
    values = dict(DEFAULTS)
    values.update(mapping)
    for key in INT_KEYS:
        if values[key] != int(values[key]):
            raise ConfigError(f"key '{key}' requires an integer value, got {values[key]!r}")
    try:
        return NetworkConfig(
            lambda_B=float(values["lambda_B"]),
            lambda_R=float(values["lambda_R"]),
            P_BU=dbm_to_watts(values["P_BU_dBm"]),
            P_BR=dbm_to_watts(values["P_BR_dBm"]),
            P_RU=dbm_to_watts(values["P_RU_dBm"]),
            sigma2=dbm_to_watts(values["sigma2_dBm"]),
            threshold_T=db_to_linear(values["T_dB"]),
            relay_disk_a=float(values["a"]),
            B_nc=float(values["B_nc"]),
            B_c=float(values["B_c"]),
            antenna=AntennaPattern(
                main_gain_M=db_to_linear(values["M_dB"]),
                side_gain_m=db_to_linear(values["m_dB"]),
                beamwidth_theta=math.radians(values["theta_deg"]),
            ),
            blockage=BlockageModel(
                ball_radius_RB=float(values["R_B"]),
                alpha_L=float(values["alpha_L"]),
                alpha_N=float(values["alpha_N"]),
            ),
            fading=FadingParams(
                nakagami_NL=int(values["N_L"]),
                nakagami_NN=int(values["N_N"]),
            ),
            power_model=PowerModel(
                static_bs_PB0=float(values["P_B0"]),
                static_rs_PR0=float(values["P_R0"]),
                beta_B=float(values["beta_B"]),
                beta_R=float(values["beta_R"]),
            ),
            beam_error_sigma=math.radians(values["sigma_BE_deg"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def default_config(lambda_B: float = 1e-4, **overrides) -> NetworkConfig:
    """Baseline NetworkConfig with config-key overrides, e.g.
    ``default_config(1e-3, T_dB=10)``."""
    mapping: dict = {"lambda_B": lambda_B}
    mapping.update(overrides)
    return build_config(mapping)


def load_config(path) -> NetworkConfig:
    return build_config(parse_config_file(path))


@dataclass(frozen=True)
class SweepSpec:
    """One swept config key, the values it takes, and named config overlays
    applied on top of the base config (one result row per overlay/value)."""

    variable: str
    values: tuple[float, ...]
    overlays: tuple[tuple[str, dict], ...] = ()

    def __post_init__(self):
        if self.variable not in CONFIG_KEYS:
            raise ConfigError(f"unknown sweep variable '{self.variable}'")
        if not self.values:
            raise ConfigError("sweep values must be non-empty")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ConfigError("sweep values must be strictly increasing")
        for name, overrides in self.overlays:
            for key in overrides:
                if key not in CONFIG_KEYS:
                    raise ConfigError(f"unknown config key '{key}' in overlay '{name}'")


def parse_sweep_file(path) -> SweepSpec:
    """Sweep spec syntax, same line format as config files::

        sweep = lambda_B
        logspace = 1e-6, 1e-3, 31      # or: values = 1e-6, 3e-6, 1e-5
        overlay.high.M_dB = 20         # optional named overlays
        overlay.high.theta_deg = 30
    """
    with open(path, "r", encoding="utf-8") as fh:
        pairs = _parse_lines(fh, str(path))

    variable = None
    values: tuple[float, ...] | None = None
    overlay_order: list[str] = []
    overlays: dict[str, dict] = {}

    for key, text in pairs:
        if key == "sweep":
            if variable is not None:
                raise ConfigError("duplicate 'sweep' line")
            variable = text
        elif key == "values":
            if values is not None:
                raise ConfigError("give exactly one of 'values' or 'logspace'")
            try:
                values = tuple(float(v) for v in text.split(","))
            except ValueError:
                raise ConfigError(f"bad 'values' list: {text!r}") from None
        elif key == "logspace":
            if values is not None:
                raise ConfigError("give exactly one of 'values' or 'logspace'")
            parts = text.split(",")
            if len(parts) != 3:
                raise ConfigError("'logspace' needs start, stop, count")
            try:
                start, stop = float(parts[0]), float(parts[1])
                count = int(parts[2])
            except ValueError:
                raise ConfigError(f"bad 'logspace' triple: {text!r}") from None
            if start <= 0.0 or stop <= 0.0 or count < 1:
                raise ConfigError("'logspace' needs positive start/stop and count >= 1")
            values = tuple(
                float(v) for v in np.logspace(math.log10(start), math.log10(stop), count)
            )
        elif key.startswith("overlay."):
            parts = key.split(".")
            if len(parts) != 3 or not parts[1] or not parts[2]:
                raise ConfigError(f"overlay keys look like 'overlay.<name>.<key>', got '{key}'")
            _, name, ckey = parts
            if ckey not in CONFIG_KEYS:
                raise ConfigError(f"unknown config key '{ckey}' in overlay '{name}'")
            if name not in overlays:
                overlay_order.append(name)
                overlays[name] = {}
            if ckey in overlays[name]:
                raise ConfigError(f"duplicate key '{ckey}' in overlay '{name}'")
            overlays[name][ckey] = _parse_value(ckey, text)
        else:
            raise ConfigError(f"unknown sweep-spec key '{key}'")

    if variable is None:
        raise ConfigError("sweep spec must name the swept variable via 'sweep = <key>'")
    if values is None:
        raise ConfigError("sweep spec must give 'values' or 'logspace'")
    return SweepSpec(
        variable=variable,
        values=values,
        overlays=tuple((name, overlays[name]) for name in overlay_order),
    )
