"""Configuration document parsing and validation."""
import pytest

from zenosim import ConfigError, parse_config

MINIMAL = """
lambda = 0.1, 0.1
total_time = 1.0
n_values = 8, 16
"""

FULL = """
# full sweep configuration
alpha0_re = 0.6
alpha0_im = 0.0
alpha1_re = 0.8
alpha1_im = 0.0
lambda = 0.1, 0.2
mu = 0.05, 0.0
total_time = 2.0
n_values = [4, 8, 16]
aux_strategy = single
mode = stochastic
abort_policy = reset-and-continue
trials = 50
seed = 12345
output = out.csv
"""


class TestDefaults:
    def test_minimal_document(self):
        config = parse_config(MINIMAL)
        assert config.aux_strategy == "single"
        assert config.mode == "post-selected"
        assert config.abort_policy == "abort-on-detect"
        assert config.alpha0 == 1.0 and config.alpha1 == 0.0
        assert config.mu == (0.0, 0.0)
        assert config.trials == 1 and config.seed == 0
        assert config.output == "sweep.csv"

    def test_full_document(self):
        config = parse_config(FULL)
        assert config.alpha0 == 0.6 and config.alpha1 == 0.8
        assert config.lam == (0.1, 0.2) and config.mu == (0.05, 0.0)
        assert config.n_values == (4, 8, 16)
        assert config.mode == "stochastic"
        assert config.trials == 50 and config.seed == 12345
        assert config.output == "out.csv"

    def test_helpers(self):
        config = parse_config(FULL)
        assert config.register_size == 2
        assert config.noise_spec().lam == (0.1, 0.2)
        assert abs(config.data_state().amplitudes[1] - 0.8) < 1e-12


class TestRejections:
    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown key 'lamda'"):
            parse_config(MINIMAL + "lamda = 0.3\n")

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="duplicate key 'total_time'"):
            parse_config(MINIMAL + "total_time = 2.0\n")

    def test_missing_required_key(self):
        with pytest.raises(ConfigError, match="missing required key 'n_values'"):
            parse_config("lambda = 0.1, 0.1\ntotal_time = 1.0\n")

    def test_decreasing_n_values(self):
        bad = MINIMAL.replace("n_values = 8, 16", "n_values = 8, 4")
        with pytest.raises(ConfigError, match="strictly increasing"):
            parse_config(bad)

    def test_repeated_n_values(self):
        bad = MINIMAL.replace("n_values = 8, 16", "n_values = 8, 8")
        with pytest.raises(ConfigError, match="strictly increasing"):
            parse_config(bad)

    def test_zero_amplitudes(self):
        with pytest.raises(ConfigError, match="alpha0_re"):
            parse_config(MINIMAL + "alpha0_re = 0\nalpha1_re = 0\n")

    def test_lambda_length_vs_strategy(self):
        with pytest.raises(ConfigError, match="'lambda' must list 3"):
            parse_config(MINIMAL + "aux_strategy = dual-alternating\n")

    def test_mu_length(self):
        with pytest.raises(ConfigError, match="'mu' must match"):
            parse_config(MINIMAL + "mu = 0.1\n")

    def test_bad_float(self):
        bad = MINIMAL.replace("total_time = 1.0", "total_time = soon")
        with pytest.raises(ConfigError, match="total_time"):
            parse_config(bad)

    def test_bad_mode(self):
        with pytest.raises(ConfigError, match="'mode'"):
            parse_config(MINIMAL + "mode = sometimes\n")

    def test_negative_total_time(self):
        bad = MINIMAL.replace("total_time = 1.0", "total_time = -1.0")
        with pytest.raises(ConfigError, match="total_time"):
            parse_config(bad)

    def test_zero_trials(self):
        with pytest.raises(ConfigError, match="trials"):
            parse_config(MINIMAL + "trials = 0\n")

    def test_seed_range(self):
        with pytest.raises(ConfigError, match="seed"):
            parse_config(MINIMAL + "seed = -1\n")
        with pytest.raises(ConfigError, match="seed"):
            parse_config(MINIMAL + f"seed = {2**64}\n")

    def test_missing_equals(self):
        with pytest.raises(ConfigError, match="expected 'key = value'"):
            parse_config(MINIMAL + "just words\n")

    def test_empty_value(self):
        with pytest.raises(ConfigError, match="empty value"):
            parse_config(MINIMAL + "mu =\n")

    def test_comments_and_blank_lines_ignored(self):
        config = parse_config("# comment\n\n" + MINIMAL + "seed = 3  # inline\n")
        assert config.seed == 3
