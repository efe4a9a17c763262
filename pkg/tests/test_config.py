import math

import pytest

from slopegap.config import (
    ENV_CONFIG,
    ConfigInvariantError,
    ConfigParseError,
    Numerics,
    UnresolvedConstantError,
    describe,
    load_config,
    resolve_source,
)
from slopegap.pipeline import Pipeline


def write_variant(tmp_path, old, new):
    text, _ = resolve_source("heptagon")
    assert old in text
    path = tmp_path / "variant.toml"
    path.write_text(text.replace(old, new), encoding="utf-8")
    return str(path)


def test_bundled_heptagon(heptagon):
    assert heptagon.name == "double-heptagon"
    assert heptagon.origin == "bundled:heptagon"
    assert float(heptagon.transversal.area()) == pytest.approx(1 / math.tan(math.pi / 7))
    assert len(heptagon.surface.rectangles) == 3
    assert heptagon.expected.closed_form


def test_bundled_pentagon(pentagon):
    assert pentagon.name == "double-pentagon"
    assert pentagon.field.degree == 4
    assert float(pentagon.transversal.area()) == pytest.approx(1 / math.tan(math.pi / 5))
    assert not pentagon.expected.closed_form


@pytest.mark.slow
def test_pentagon_volume(pentagon):
    result = Pipeline(pentagon).volume
    assert float(result.value) == pytest.approx(3 * math.pi ** 2 / 10, abs=1e-6)


def test_config_from_path_matches_bundled(tmp_path):
    config = load_config(write_variant(tmp_path, 'name = "double-heptagon"', 'name = "copy"'))
    assert config.name == "copy"
    assert config.origin.endswith("variant.toml")


def test_environment_selects_config(monkeypatch):
    monkeypatch.setenv(ENV_CONFIG, "pentagon")
    assert load_config().name == "double-pentagon"


def test_gluing_length_mismatch(tmp_path):
    path = write_variant(tmp_path, 'to_span = ["-(l1 + l3)", "-l3"]', 'to_span = ["-(l1 + l3)", "0"]')
    with pytest.raises(ConfigInvariantError, match="different lengths"):
        load_config(path)


def test_unknown_constant(tmp_path):
    path = write_variant(tmp_path, 'alpha = "2*cot(pi/7)"', 'alpha = "2*kappa"')
    with pytest.raises(UnresolvedConstantError, match="kappa"):
        load_config(path)


def test_wrong_cusp_length(tmp_path):
    path = write_variant(tmp_path, 'alpha = "2*cot(pi/7)"', 'alpha = "cot(pi/7)"')
    with pytest.raises(ConfigInvariantError):
        load_config(path)


def test_floats_are_rejected(tmp_path):
    path = write_variant(tmp_path, 'x0 = "cos(pi/7)"', "x0 = 0.9")
    with pytest.raises(ConfigParseError, match="not exact"):
        load_config(path)


def test_malformed_toml(tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text("[field\nmin_poly = [", encoding="utf-8")
    with pytest.raises(ConfigParseError):
        load_config(str(path))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigParseError, match="no config file"):
        load_config(str(tmp_path / "absent.toml"))


def test_unknown_numerics_key(tmp_path):
    path = write_variant(tmp_path, "histogram_bins = 60", "histogram_bins = 60\nbins = 3")
    with pytest.raises(ConfigParseError, match="unknown keys"):
        load_config(path)


def test_numerics_are_validated():
    with pytest.raises(ConfigInvariantError):
        Numerics(t_min=2.0, t_max=1.0)
    with pytest.raises(ConfigInvariantError):
        Numerics(dps=10)


def test_describe(heptagon):
    rows = dict(describe(heptagon))
    assert rows["surface"] == "double-heptagon"
    assert rows["staircase"] == "3 rectangles, 8 gluings"
