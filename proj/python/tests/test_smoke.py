import json

import pytest

import urglab


def test_torus_window_degrees():
    w = urglab.build_torus_window(2, 4)
    assert w.n == 16
    assert all(w.degree(v) == 4 for v in range(w.n))


def test_window_json_round_trip():
    w = urglab.build_random_regular(2, 20, 7)
    again = urglab.WindowGraph.from_json(w.to_json())
    assert again == w
    assert json.loads(w.to_json())["n"] == 20


def test_bad_side_raises_validation_error():
    with pytest.raises(urglab.ValidationError, match="L must be >= 3"):
        urglab.build_torus_window(2, 2)
    assert issubclass(urglab.ValidationError, ValueError)


def test_mtp_on_random_colouring():
    w = urglab.build_torus_window(2, 6)
    colours = urglab.sample_colouring(w, [0.3, 0.7], seed=3)
    report = urglab.mtp_check(w, colours, 2, "degree-weighted", 1)
    assert report["exact"]
    assert report["lhs"] == pytest.approx(report["rhs"])


def test_cycle_kazhdan_optimum():
    c8 = urglab.build_torus_window(1, 8)
    exact = urglab.brute_force_kazhdan(c8)
    assert exact["certified"]
    assert exact["value"] == 0.5
    annealed = urglab.anneal_kazhdan(c8, seed=1, restarts=3)
    assert annealed["value"] == 0.5


def test_spaced_subset_cost_bound():
    w = urglab.build_torus_window(1, 32)
    subset = [v % 4 == 0 for v in range(w.n)]
    bound = urglab.cost_upper_bound(w, subset)
    assert bound["intensity"] == 0.25
    assert bound["empirical_bound"] <= bound["generator_bound"]
    assert urglab.gaboriau_induction(5.0, 0.1) == pytest.approx(1.4)


def test_orthant_probability():
    assert urglab.orthant_probability(0.0) == 0.25
    mc = urglab.orthant_probability_mc(0.5, 200000, seed=2)
    assert abs(mc["estimate"] - urglab.orthant_probability(0.5)) < 4 * mc["stderr"]
    assert urglab.symmetric_difference_probability(0.0) == 0.5


def test_palm_guard():
    with pytest.raises(urglab.GuardError):
        urglab.verify_mean_cell_volume(1.0, 2, 2.0, 10, 100, seed=1)
    cell = urglab.verify_mean_cell_volume(1.0, 2, 8.0, 40, 500, seed=1)
    assert abs(cell["estimate"] - 1.0) < 4 * cell["stderr"] + 0.05


def test_validate_and_run(tmp_path):
    assert urglab.validate("kazhdan", {"eps": "0.7", "seed": "1"}) == ["eps < min(alpha) required"]
    manifest = urglab.run("gauss-check", {"rho": "0", "n": "10000", "seed": "1", "out": str(tmp_path)})
    assert manifest["outputs"][0]["path"] == "gauss.csv"
    assert (tmp_path / "gauss.csv").read_text().startswith("rho,closed_form,mc,stderr,ok")
