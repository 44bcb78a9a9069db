import math

import pytest

from mmrelay.config import (
    CONFIG_KEYS,
    DEFAULTS,
    ConfigError,
    build_config,
    default_config,
    load_config,
    parse_config_file,
    parse_sweep_file,
)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_default_config_is_baseline():
    cfg = default_config()
    assert cfg.lambda_B == 1e-4
    assert cfg.lambda_R == 1e-4
    assert cfg.P_BU == pytest.approx(100.0)
    assert cfg.P_BR == pytest.approx(100.0)
    assert cfg.P_RU == pytest.approx(1.0)
    assert cfg.sigma2 == pytest.approx(1e-10)
    assert cfg.threshold_T == pytest.approx(1000.0)
    assert cfg.blockage.ball_radius_RB == 100.0
    assert cfg.blockage.alpha_L == 2.0
    assert cfg.blockage.alpha_N == 4.0
    assert cfg.fading.nakagami_NL == 3
    assert cfg.fading.nakagami_NN == 2
    assert cfg.antenna.main_gain_M == pytest.approx(100.0)
    assert cfg.antenna.side_gain_m == pytest.approx(0.1)
    assert cfg.antenna.beamwidth_theta == pytest.approx(math.radians(30.0))
    assert cfg.relay_disk_a == 30.0
    assert cfg.B_nc == 1e9 and cfg.B_c == 1e8
    assert cfg.power_model.static_bs_PB0 == 100.0
    assert cfg.power_model.static_rs_PR0 == 5.0
    assert cfg.power_model.beta_B == 5.0 and cfg.power_model.beta_R == 4.0
    assert cfg.beam_error_sigma == 0.0


def test_minimal_file_equals_default(tmp_path):
    path = write(tmp_path, "cfg.txt", "lambda_B = 1e-4\n")
    assert load_config(path) == default_config(1e-4)


def test_file_overrides_and_comments(tmp_path):
    path = write(tmp_path, "cfg.txt", """
# scenario with a denser deployment
lambda_B = 1e-3
T_dB = 10        # inline comment
theta_deg = 45
N_L = 2
""")
    cfg = load_config(path)
    assert cfg.lambda_B == 1e-3
    assert cfg.threshold_T == pytest.approx(10.0)
    assert cfg.antenna.beamwidth_theta == pytest.approx(math.radians(45.0))
    assert cfg.fading.nakagami_NL == 2


def test_missing_lambda_b_names_the_key(tmp_path):
    path = write(tmp_path, "cfg.txt", "T_dB = 10\n")
    with pytest.raises(ConfigError, match="lambda_B"):
        load_config(path)


def test_unknown_key_named(tmp_path):
    path = write(tmp_path, "cfg.txt", "lambda_B = 1e-4\nlambdaB = 2\n")
    with pytest.raises(ConfigError, match="lambdaB"):
        load_config(path)


def test_duplicate_key_named(tmp_path):
    path = write(tmp_path, "cfg.txt", "lambda_B = 1e-4\nlambda_B = 1e-3\n")
    with pytest.raises(ConfigError, match="lambda_B"):
        load_config(path)


def test_bad_number_and_bad_line(tmp_path):
    with pytest.raises(ConfigError, match="T_dB"):
        load_config(write(tmp_path, "a.txt", "lambda_B = 1e-4\nT_dB = ten\n"))
    with pytest.raises(ConfigError, match="key = value"):
        load_config(write(tmp_path, "b.txt", "lambda_B 1e-4\n"))
    with pytest.raises(ConfigError, match="N_L"):
        load_config(write(tmp_path, "c.txt", "lambda_B = 1e-4\nN_L = 2.5\n"))


def test_sigma_be_defaults_to_zero(tmp_path):
    explicit = load_config(write(tmp_path, "a.txt", "lambda_B = 1e-4\nsigma_BE_deg = 0\n"))
    absent = load_config(write(tmp_path, "b.txt", "lambda_B = 1e-4\n"))
    assert explicit == absent


def test_out_of_range_value_rejected(tmp_path):
    path = write(tmp_path, "cfg.txt", "lambda_B = 1e-4\nalpha_N = 2\n")
    with pytest.raises(ConfigError, match="alpha_N"):
        load_config(path)


def test_build_config_rejects_unknown_override():
    with pytest.raises(ConfigError, match="nope"):
        default_config(nope=1.0)


def test_config_keys_cover_defaults():
    assert CONFIG_KEYS == set(DEFAULTS) | {"lambda_B"}
    assert "lambda_B" not in DEFAULTS


def test_sweep_values_list(tmp_path):
    path = write(tmp_path, "s.txt", "sweep = lambda_B\nvalues = 1e-6, 1e-5, 1e-4\n")
    spec = parse_sweep_file(path)
    assert spec.variable == "lambda_B"
    assert spec.values == (1e-6, 1e-5, 1e-4)
    assert spec.overlays == ()


def test_sweep_logspace(tmp_path):
    path = write(tmp_path, "s.txt", "sweep = lambda_B\nlogspace = 1e-6, 1e-3, 4\n")
    spec = parse_sweep_file(path)
    assert spec.values == pytest.approx((1e-6, 1e-5, 1e-4, 1e-3), rel=1e-12)


def test_sweep_overlays_keep_file_order(tmp_path):
    path = write(tmp_path, "s.txt", """
sweep = lambda_B
values = 1e-5, 1e-4
overlay.narrow.M_dB = 20
overlay.narrow.theta_deg = 30
overlay.wide.M_dB = 10
overlay.wide.theta_deg = 45
""")
    spec = parse_sweep_file(path)
    assert [name for name, _ in spec.overlays] == ["narrow", "wide"]
    assert spec.overlays[0][1] == {"M_dB": 20.0, "theta_deg": 30.0}


def test_sweep_validation(tmp_path):
    with pytest.raises(ConfigError, match="strictly increasing"):
        parse_sweep_file(write(tmp_path, "a.txt", "sweep = lambda_B\nvalues = 1e-4, 1e-5\n"))
    with pytest.raises(ConfigError, match="sweep"):
        parse_sweep_file(write(tmp_path, "b.txt", "values = 1e-5, 1e-4\n"))
    with pytest.raises(ConfigError, match="values"):
        parse_sweep_file(write(tmp_path, "c.txt", "sweep = lambda_B\n"))
    with pytest.raises(ConfigError, match="bogus"):
        parse_sweep_file(write(tmp_path, "d.txt", "sweep = bogus\nvalues = 1, 2\n"))
    with pytest.raises(ConfigError, match="exactly one"):
        parse_sweep_file(write(
            tmp_path, "e.txt",
            "sweep = lambda_B\nvalues = 1e-5, 1e-4\nlogspace = 1e-6, 1e-3, 3\n"))
    with pytest.raises(ConfigError, match="overlay"):
        parse_sweep_file(write(
            tmp_path, "f.txt", "sweep = lambda_B\nvalues = 1e-5\noverlay.x = 3\n"))


def test_build_config_requires_integral_int_keys():
    with pytest.raises(ConfigError, match="N_L"):
        build_config({"lambda_B": 1e-4, "N_L": 2.5})
