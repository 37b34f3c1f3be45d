"""End-to-end command tests through the click runner.

Exit-code contract: 0 all good, 2 bad input, 3 optimizer gave up,
4 a checked property failed (with the instance serialized for replay).
"""

import json
import os

import numpy as np
import pytest
from click.testing import CliRunner

from entropy_duel.cli import main
from entropy_duel.jsonio import matrix_to_json


@pytest.fixture()
def runner():
    return CliRunner()


def write_json(path, doc):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def test_conjugate_command(runner, tmp_path):
    path = tmp_path / "in.json"
    write_json(path, {"grid": {"lo": -5.0, "hi": 5.0, "step": 1e-3},
                      "function": "exp", "xstar": [1.0]})
    result = runner.invoke(main, ["conjugate", str(path)])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["schema"] == 1
    assert abs(doc["value"] - (-1.0)) <= 1e-3


def test_conjugate_rejects_unknown_function(runner, tmp_path):
    path = tmp_path / "in.json"
    write_json(path, {"grid": {"lo": -1, "hi": 1, "step": 0.1},
                      "function": "cubic", "xstar": [0.0]})
    result = runner.invoke(main, ["conjugate", str(path)])
    assert result.exit_code == 2


def test_game_solve_matching_pennies(runner, tmp_path):
    path = tmp_path / "g.json"
    write_json(path, {"payoffs": [[1, -1], [-1, 1]]})
    result = runner.invoke(main, ["game", "solve", str(path)])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert abs(doc["value"]) <= 1e-6
    assert doc["gap"] <= 1e-6


def test_game_estimate_reports_both_orders(runner, tmp_path):
    path = tmp_path / "e.json"
    write_json(path, {"awards": [0.3, 1.0], "resolution": 8})
    result = runner.invoke(main, ["game", "estimate", str(path)])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["value"] == pytest.approx(0.3)
    assert "order_gap" in doc  # reported, never asserted equal


def test_game_biconj_recovers_divergence(runner, tmp_path):
    path = tmp_path / "b.json"
    write_json(path, {"target": [0.75, 0.25], "prior": [0.5, 0.5]})
    result = runner.invoke(main, ["game", "biconj", str(path)])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    want = 0.75 * np.log(1.5) + 0.25 * np.log(0.5)
    assert doc["value"] == pytest.approx(want, abs=1e-5)
    assert doc["agreement_gap"] <= 1e-5
    assert not doc["truncated"]


def test_entropy_explicit_operands(runner, tmp_path):
    path = tmp_path / "s.json"
    write_json(path, {"rho": matrix_to_json(np.diag([1.0, 0.0])),
                      "sigma": matrix_to_json(np.eye(2) / 2)})
    result = runner.invoke(main, ["entropy", str(path), "--kind", "umegaki"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["value"] == pytest.approx(np.log(2.0), abs=1e-12)


def test_entropy_infinite_value_serialized(runner, tmp_path):
    path = tmp_path / "s.json"
    write_json(path, {"rho": matrix_to_json(np.eye(2) / 2),
                      "sigma": matrix_to_json(np.diag([1.0, 0.0]))})
    result = runner.invoke(main, ["entropy", str(path), "--kind", "umegaki"])
    assert result.exit_code == 0
    assert json.loads(result.output)["value"] == "inf"


def test_entropy_variational_seeded(runner):
    result = runner.invoke(main, ["entropy", "--kind", "variational",
                                  "--dim", "3", "--seed", "5"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["converged"]
    assert doc["maximizer"]["dim"] == 3


def test_entropy_budget_override_forces_convergence_exit(runner):
    result = runner.invoke(main, ["entropy", "--kind", "variational",
                                  "--dim", "3", "--seed", "5"],
                           env={"ENTROPY_DUEL_MAX_ITERS": "1"})
    assert result.exit_code == 3


def test_entropy_rejects_bad_budget_override(runner):
    result = runner.invoke(main, ["entropy", "--kind", "variational",
                                  "--dim", "2", "--seed", "1"],
                           env={"ENTROPY_DUEL_MAX_ITERS": "zero"})
    assert result.exit_code == 2


def test_malformed_json_is_validation_error_with_location(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"payoffs": [[1, -1], [-1, 1]')
    result = runner.invoke(main, ["game", "solve", str(path)])
    assert result.exit_code == 2
    assert "line" in result.output


def test_malformed_matrix_is_validation_error(runner, tmp_path):
    path = tmp_path / "bad.json"
    write_json(path, {"rho": {"dim": 2, "entries": [[1.0, 0.0]]},
                      "sigma": matrix_to_json(np.eye(2) / 2)})
    result = runner.invoke(main, ["entropy", str(path)])
    assert result.exit_code == 2
    assert "entries" in result.output


def test_channel_info(runner):
    result = runner.invoke(main, ["channel", "info", "--channel",
                                  "identity:2"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["dim_in"] == 2
    assert doc["completeness_defect"] <= 1e-12


def test_channel_mi_identity_landmark(runner):
    result = runner.invoke(main, ["channel", "mi", "--channel", "identity:2"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["value"] == pytest.approx(2 * np.log(2.0), abs=1e-9)


def test_channel_capacity_dephasing(runner):
    result = runner.invoke(main, ["channel", "capacity", "--channel",
                                  "dephasing:1.0", "--restarts", "3"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert doc["value"] == pytest.approx(np.log(2.0), abs=1e-4)


def test_channel_capacity_deterministic_reports(runner, tmp_path):
    # same seed twice must give byte-identical output files
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    for out in (out1, out2):
        result = runner.invoke(main, ["channel", "capacity", "--channel",
                                      "depolarizing:0.5", "--restarts", "2",
                                      "--seed", "3", "--out", str(out)])
        assert result.exit_code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_channel_additivity_identity_pair(runner):
    result = runner.invoke(main, ["channel", "additivity",
                                  "--channel-a", "identity:2",
                                  "--channel-b", "depolarizing:1.0",
                                  "--restarts", "2"])
    assert result.exit_code == 0
    doc = json.loads(result.output)
    assert abs(doc["gap"]) <= 1e-3


def test_proptest_gibbs_passes(runner, tmp_path):
    out = tmp_path / "rows.csv"
    result = runner.invoke(main, ["proptest", "gibbs", "--n", "10",
                                  "--dim", "3", "--seed", "1",
                                  "--out", str(out), "--format", "csv"])
    assert result.exit_code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "experiment,instance_id,quantity,value,bound,pass"
    assert len(lines) == 21  # two checked quantities per instance
    assert all(line.endswith("True") for line in lines[1:])


def test_proptest_deterministic(runner, tmp_path):
    outs = []
    for name in ("x.json", "y.json"):
        out = tmp_path / name
        result = runner.invoke(main, ["proptest", "monotonicity", "--n", "5",
                                      "--dim", "2", "--kind", "umegaki",
                                      "--seed", "9", "--out", str(out)])
        assert result.exit_code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_proptest_scaling_small(runner, tmp_path):
    out = tmp_path / "s.json"
    result = runner.invoke(main, ["proptest", "scaling", "--n", "6",
                                  "--dim", "2", "--seed", "2",
                                  "--out", str(out)])
    assert result.exit_code == 0
    rows = json.loads(out.read_text())["rows"]
    assert all(r["pass"] for r in rows)


def test_violation_serialization_and_replay(runner, tmp_path):
    """An impossible tolerance forces a violation (exit 4), the failing
    instance lands in a replay file, and replay re-executes it to the
    same verdict with both sides printed."""
    out = tmp_path / "rows.json"
    # equality checked at an impossible tolerance: rounding alone breaks it
    result = runner.invoke(main, ["proptest", "gibbs", "--n", "3",
                                  "--dim", "5", "--seed", "4",
                                  "--tol", "1e-18", "--out", str(out)])
    assert result.exit_code == 4
    vfile = json.loads(out.read_text())["violation_file"]
    assert os.path.exists(vfile)

    replay1 = runner.invoke(main, ["replay", vfile])
    assert replay1.exit_code == 4
    doc = json.loads(replay1.output)
    row = doc["rows"][0]
    assert "value" in row and "bound" in row  # both sides of the inequality

    replay2 = runner.invoke(main, ["replay", vfile])
    assert replay1.output == replay2.output


def test_replay_of_passing_instance(runner, tmp_path):
    vfile = tmp_path / "ok.json"
    write_json(vfile, {"schema": 1, "experiment": "gibbs",
                       "instance": {"experiment": "gibbs",
                                    "instance_id": "gibbs-0000",
                                    "seed": 1, "index": 0, "dim": 3,
                                    "kind": "umegaki", "tol": 1e-9}})
    result = runner.invoke(main, ["replay", str(vfile)])
    assert result.exit_code == 0


def test_replay_rejects_foreign_schema(runner, tmp_path):
    vfile = tmp_path / "bad.json"
    write_json(vfile, {"schema": 1, "experiment": "unknown", "instance": {}})
    result = runner.invoke(main, ["replay", str(vfile)])
    assert result.exit_code == 2


def test_csv_rows_recompute_identically(runner, tmp_path):
    # a report row re-derived from its serialized instance matches
    out = tmp_path / "m.json"
    args = ["proptest", "monotonicity", "--n", "4", "--dim", "3",
            "--kind", "bs", "--seed", "6", "--out", str(out)]
    assert runner.invoke(main, args).exit_code == 0
    rows1 = json.loads(out.read_text())["rows"]
    assert runner.invoke(main, args).exit_code == 0
    rows2 = json.loads(out.read_text())["rows"]
    for a, b in zip(rows1, rows2):
        assert a == b
