import json
import math

import pytest

from slopegap import cli
from slopegap.cli import main


def run(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    return info.value.code


def test_no_command_prints_help(capsys):
    assert run([]) == 2
    assert "usage" in capsys.readouterr().out


def test_winners_json(capsys):
    main(["winners", "--json", "--no-animate"])
    data = json.loads(capsys.readouterr().out)
    assert data["surface"] == "double-heptagon"
    assert len(data["winners"]) == 5
    assert data["winners"][-1]["sheared"]["x"]["decimal"] == 0.0
    assert data["top_edge"]["right"]["decimal"] == pytest.approx(3.924799, abs=1e-6)


def test_missing_config_exits_2(tmp_path):
    assert run(["breakpoints", "--config", str(tmp_path / "absent.toml")]) == 2


def test_unresolved_constant_exits_5(tmp_path):
    from slopegap.config import resolve_source

    text, _ = resolve_source("heptagon")
    path = tmp_path / "bad.toml"
    path.write_text(text.replace('alpha = "2*cot(pi/7)"', 'alpha = "2*kappa"'), encoding="utf-8")
    assert run(["winners", "--config", str(path)]) == 5


def test_bad_grid_exits_3(capsys):
    assert run(["distribution", "--t-min", "5", "--t-max", "1", "--csv"]) == 3
    assert "[distribution]" in capsys.readouterr().err


def test_closed_form_needs_a_known_formula(capsys):
    assert run(["closed-form", "--config", "pentagon"]) == 3
    assert "no closed form" in capsys.readouterr().err


def test_version(capsys):
    assert run(["--version"]) == 0
    assert "slopegap" in capsys.readouterr().out


@pytest.fixture
def shared(monkeypatch, pipeline):
    monkeypatch.setattr(cli, "_pipeline", lambda args: pipeline)
    return pipeline


def test_subdivide_json(shared, capsys):
    main(["subdivide", "--json"])
    data = json.loads(capsys.readouterr().out)
    assert [r["index"] for r in data["regions"]] == [1, 2, 3, 4, 5]
    total = sum(r["area"]["decimal"] for r in data["regions"])
    assert total == pytest.approx(data["omega_area"]["decimal"], abs=1e-12)
    assert all(len(piece) >= 3 for r in data["regions"] for piece in r["pieces"])


def test_breakpoints_json(shared, capsys):
    main(["breakpoints", "--json"])
    data = json.loads(capsys.readouterr().out)
    assert data["count"] == 13
    assert data["breakpoints"][0]["value"]["decimal"] == pytest.approx(0.433884, abs=1e-6)
    assert data["breakpoints"][-1]["value"]["decimal"] == pytest.approx(3.40636, abs=1e-5)


def test_volume_json(shared, capsys):
    main(["volume", "--json"])
    data = json.loads(capsys.readouterr().out)
    assert float(data["volume"]) == pytest.approx(5 * math.pi ** 2 / 14, abs=1e-8)
    assert data["converged"] and not data["divergent"]
    assert len(data["regions"]) == 5


def test_distribution_csv(shared, capsys):
    main(["distribution", "--t-min", "0.5", "--t-max", "4", "--samples", "8", "--csv"])
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,pdf,cdf"
    assert len(lines) == 9
    cdfs = [float(line.split(",")[2]) for line in lines[1:]]
    assert cdfs == sorted(cdfs)
    assert 0 < cdfs[0] < cdfs[-1] < 1


def test_empirical_json_with_rational_radius(shared, capsys):
    main(["empirical", "--radius", "13/2", "--json"])
    data = json.loads(capsys.readouterr().out)
    assert data["radius"] == 6.5
    assert data["slopes"] >= 2
    assert data["min_gap"] > 0
    assert 0 <= data["ks_distance"] <= 1


def test_empirical_rejects_a_malformed_radius(capsys):
    assert run(["empirical", "--radius", "six"]) == 2
    assert "invalid Fraction value" in capsys.readouterr().err


def test_closed_form_json(shared, capsys):
    main(["closed-form", "--grid", "20", "--json"])
    data = json.loads(capsys.readouterr().out)
    assert data["tolerance"] == pytest.approx(1e-6)
    regions = {b["region"] for b in data["branches"]}
    assert regions == {1, 2, 3, 4, 5}
    assert all(b["agrees"] for b in data["branches"] if b["region"] == 1)
    assert set(data["located_discrepancies"]) <= {b["branch"] for b in data["branches"]}


def test_winners_table(shared, capsys, monkeypatch):
    monkeypatch.setenv("COLUMNS", "200")
    main(["winners", "--no-animate"])
    out = capsys.readouterr().out
    assert "Winners on the top edge" in out
    assert "(2.2469796, 1.8019377)" in out
