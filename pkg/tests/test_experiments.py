import json

import numpy as np
import pytest
from matplotlib.colors import to_rgba
from scipy.stats import spearmanr

from alphaebt.experiments import (
    K_GRID,
    ExperimentRow,
    ScenarioConfig,
    run_power_scenario,
    run_type1_experiment,
)
from alphaebt.plotting import curve_label, emit_power_plot, plot_power
from alphaebt.results import HEADER, read_results, write_results


def small_config(**kw):
    base = dict(scenario_id=1, D=3, n=10, k_grid=(1.0, 2.0), mc_reps=4, R_permutations=19, B_projections=10)
    base.update(kw)
    return ScenarioConfig(**base)


def fake_rows(scenario=1):
    rows = []
    for k, kl in zip((1.0, 1.5, 2.0), (0.0, 0.2, 0.5)):
        for method, alpha, rate in (("rpbt", None, 0.1 * k), ("alpha_ebt", 0.1, 0.2 * k), ("alpha_ebt", 1.0, 0.3 * k)):
            rows.append(ExperimentRow(scenario, 5, 20, k, kl, method, alpha, rate, 10, 0))
    return rows


def test_k_grid():
    assert len(K_GRID) == 11
    assert K_GRID[0] == 1.0 and K_GRID[-1] == 2.0
    np.testing.assert_allclose(np.diff(K_GRID), 0.1, atol=1e-12)


@pytest.mark.parametrize(
    "kw",
    [
        dict(scenario_id=6),
        dict(D=1),
        dict(n=1),
        dict(k_grid=()),
        dict(alpha_values=()),
        dict(mc_reps=0),
        dict(level=1.0),
        dict(methods=("ks",)),
    ],
)
def test_config_validation(kw):
    with pytest.raises(ValueError):
        small_config(**kw)


def test_single_replicate_rates_are_zero_or_one():
    rows = run_power_scenario(small_config(mc_reps=1))
    assert len(rows) == 2 * 3
    assert all(r.rejection_rate in (0.0, 1.0) for r in rows)
    assert [(r.method, r.alpha) for r in rows[:3]] == [("rpbt", None), ("alpha_ebt", 0.1), ("alpha_ebt", 1.0)]


def test_rows_carry_kl_and_config():
    rows = run_power_scenario(small_config(scenario_id=2, D=4))
    assert {r.k for r in rows} == {1.0, 2.0}
    assert all(r.kl_divergence == 0.0 for r in rows if r.k == 1.0)
    assert all(r.kl_divergence > 0.0 for r in rows if r.k == 2.0)
    assert all(r.mc_reps == 4 and r.D == 4 and r.n == 10 for r in rows)


def test_type1_labels_and_grid():
    rows = run_type1_experiment(small_config(scenario_id=4), family="normal")
    assert {r.scenario_id for r in rows} == {2} and {r.k for r in rows} == {1.0}
    rows = run_type1_experiment(small_config(methods=("alpha_ebt",)), family="dirichlet")
    assert {r.scenario_id for r in rows} == {1} and {r.method for r in rows} == {"alpha_ebt"}
    with pytest.raises(ValueError):
        run_type1_experiment(small_config(), family="beta")


def test_simulation_deterministic_and_worker_independent():
    cfg = small_config(mc_reps=30)
    a = run_power_scenario(cfg)
    assert a == run_power_scenario(cfg)
    assert a == run_power_scenario(cfg, workers=2)


def test_write_results_empty_raises(tmp_path):
    with pytest.raises(ValueError):
        write_results([], tmp_path / "x.csv")


def test_write_results_csv(tmp_path):
    rows = fake_rows()
    path = tmp_path / "out" / "r.csv"
    write_results(rows, path)
    first = path.read_bytes()
    write_results(rows, path)
    assert path.read_bytes() == first
    lines = first.decode().splitlines()
    assert tuple(lines[0].split(",")) == HEADER
    assert lines[1].split(",")[6] == ""
    assert read_results(path) == rows


def test_json_csv_round_trip(tmp_path):
    rows = fake_rows()
    write_results(rows, tmp_path / "r.json", format="json")
    doc = json.loads((tmp_path / "r.json").read_text())
    assert list(doc[0]) == list(HEADER) and doc[0]["alpha"] is None
    back = read_results(tmp_path / "r.json")
    write_results(back, tmp_path / "r.csv")
    assert read_results(tmp_path / "r.csv") == rows
    with pytest.raises(ValueError):
        write_results(rows, tmp_path / "r.xml", format="xml")


def test_curve_labels():
    assert curve_label("rpbt", None) == "RPBT"
    assert curve_label("alpha_ebt", 0.1) == "α-EBT (α = 0.1)"


def test_plot_curves_and_colors():
    ax = plot_power(fake_rows(), level=0.05)
    lines = {l.get_label(): l for l in ax.get_lines() if not l.get_label().startswith("_")}
    assert set(lines) == {"RPBT", "α-EBT (α = 0.1)", "α-EBT (α = 1)"}
    assert to_rgba(lines["RPBT"].get_color()) == to_rgba("red")
    assert to_rgba(lines["α-EBT (α = 1)"].get_color()) == to_rgba("blue")
    assert to_rgba(lines["α-EBT (α = 0.1)"].get_color()) == to_rgba("green")
    np.testing.assert_allclose(lines["RPBT"].get_xdata(), [0.0, 0.2, 0.5])
    assert ax.get_xlabel() == "KL divergence"


def test_plot_rejects_mixed_scenarios(tmp_path):
    with pytest.raises(ValueError):
        plot_power(fake_rows(1) + fake_rows(2))
    with pytest.raises(ValueError):
        emit_power_plot(fake_rows(1) + fake_rows(2), tmp_path / "p.svg")
    with pytest.raises(ValueError):
        plot_power([])


def test_emit_power_plot_is_reproducible(tmp_path):
    rows = fake_rows() + [
        ExperimentRow(r.scenario_id, r.D, 40, r.k, r.kl_divergence, r.method, r.alpha, r.rejection_rate, 10, 0)
        for r in fake_rows()
    ]
    a = emit_power_plot(rows, tmp_path / "a.svg", level=0.05)
    b = emit_power_plot(rows, tmp_path / "b.svg", level=0.05)
    text = open(a, "rb").read()
    assert text.startswith(b"<?xml") and b"<svg" in text
    assert text == open(b, "rb").read()


def test_power_increases_with_kl():
    cfg = ScenarioConfig(
        scenario_id=1,
        D=10,
        n=30,
        k_grid=(1.0, 1.2, 1.4, 1.6, 1.8, 2.0),
        alpha_values=(1.0,),
        mc_reps=40,
        R_permutations=99,
        methods=("alpha_ebt",),
        seed=3,
    )
    rows = run_power_scenario(cfg)
    rho = spearmanr([r.kl_divergence for r in rows], [r.rejection_rate for r in rows]).statistic
    assert rho >= 0.8
