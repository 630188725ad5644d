import pytest

from bosefold.config import parse_config, parse_config_text, serialize_config
from bosefold.errors import ConfigError

GOOD_SWEEP = """\
[scenario]
kind = collision_sweep
m1 = 2
m2 = 2
mu_values = 0 5 10

[model]
n_sites = 6
base = jx

[numerics]
chi_max = 16
trunc_tol = 1e-10
"""


def test_parse_good_sweep():
    spec = parse_config_text(GOOD_SWEEP)
    assert spec.kind == "collision_sweep"
    assert spec.mu_values == (0.0, 5.0, 10.0)
    assert spec.model.base == "jx"
    assert spec.numerics.chi_max == 16
    assert spec.numerics.trunc_tol == 1e-10


def test_comments_and_blank_lines_ignored():
    text = "# leading comment\n\n" + GOOD_SWEEP.replace(
        "kind = collision_sweep", "kind = collision_sweep  # trailing")
    assert parse_config_text(text).kind == "collision_sweep"


def test_unknown_section_reports_line():
    with pytest.raises(ConfigError) as exc:
        parse_config_text("[bogus]\n")
    assert exc.value.line == 1


def test_unknown_key_reports_line():
    text = GOOD_SWEEP + "color = blue\n"
    with pytest.raises(ConfigError) as exc:
        parse_config_text(text)
    assert exc.value.line == text.count("\n")


def test_bad_value_reports_line():
    with pytest.raises(ConfigError) as exc:
        parse_config_text("[scenario]\nkind = ground_state\nm = soup\n")
    assert exc.value.line == 3


def test_key_outside_section_rejected():
    with pytest.raises(ConfigError):
        parse_config_text("kind = quench_release\n")


def test_duplicate_section_rejected():
    with pytest.raises(ConfigError):
        parse_config_text("[scenario]\nkind = ground_state\n[scenario]\n")


def test_missing_scenario_rejected():
    with pytest.raises(ConfigError):
        parse_config_text("[model]\nn_sites = 4\n")


def test_barrier_repeats_and_triple_format():
    text = """\
[scenario]
kind = ground_state
m = 2

[model]
n_sites = 8
base = inverse_distance
j1 = 0.3
barrier = 2 3 10
barrier = 6 7 10
"""
    spec = parse_config_text(text)
    assert spec.model.barriers == ((2, 3, 10.0), (6, 7, 10.0))
    with pytest.raises(ConfigError):
        parse_config_text(text.replace("barrier = 6 7 10", "barrier = 6 7"))


def test_mu_over_n_expansion():
    text = """\
[scenario]
kind = collision_sweep
m = 4
mu_over_n = 0 0.3 0.1

[model]
n_sites = 10
base = jx
"""
    spec = parse_config_text(text)
    assert spec.mu_values == pytest.approx((0.0, 1.0, 2.0, 3.0))


def test_mu_over_n_conflicts_with_mu_values():
    bad = GOOD_SWEEP.replace("mu_values = 0 5 10",
                             "mu_values = 0 5\nmu_over_n = 0 1 0.5")
    with pytest.raises(ConfigError):
        parse_config_text(bad)


def test_validation_rules_surface_as_config_errors():
    odd_n = GOOD_SWEEP.replace("n_sites = 6", "n_sites = 5")
    with pytest.raises(ConfigError):
        parse_config_text(odd_n)
    odd_m = GOOD_SWEEP.replace("m2 = 2", "m2 = 1")
    with pytest.raises(ConfigError):
        parse_config_text(odd_m)


def test_serialize_roundtrip():
    spec = parse_config_text(GOOD_SWEEP)
    text = serialize_config(spec)
    again = parse_config_text(text)
    assert again == spec
    assert serialize_config(again) == text


def test_parse_config_file(tmp_path):
    path = tmp_path / "cfg.ini"
    path.write_text(GOOD_SWEEP)
    assert parse_config(path).kind == "collision_sweep"
