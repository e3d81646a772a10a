import csv
import io
import json
import math
import sys

import pytest
from hypothesis import given, settings, strategies as st

from decoygame import ParseError, SchemaError, ValidationError, attractor, load_game, random_game, save_game
from decoygame.cli import bundled_path, main
from decoygame.fixtures import running_example, toy_counterexample
from decoygame.io import game_from_dict, game_to_dict, load_document

GRID_ARGS = ["gen", "gridworld", "--rows", "7", "--cols", "7", "--obstacles", "2,2;2,3;4,2;5,4",
             "--cheese", "1,6;4,6", "--cat-start", "0,0", "--mouse-start", "6,0"]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_round_trip(tmp_path):
    for g in (running_example(), toy_counterexample()):
        path = tmp_path / "g.json"
        save_game(g, path)
        assert load_game(path) == g


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 40))
def test_round_trip_random(seed, n):
    g = random_game(n, n // 2, 4, seed=seed)
    assert game_from_dict(json.loads(json.dumps(game_to_dict(g)))).game == g


def test_bundled_fixtures_match_builders():
    with bundled_path("running_example.json").open() as fh:
        doc = json.load(fh)
    g = game_from_dict(doc).game
    assert g == running_example()
    res = attractor(g, g.finals)
    assert [res.rank[g.state_id(f"s{i}")] for i in range(12)] == [0, 0, 1, 1, 1, 2, 2, 3, 4, 5, math.inf, math.inf]
    with bundled_path("toy_counterexample.json").open() as fh:
        assert game_from_dict(json.load(fh)).game == toy_counterexample()


def test_dangling_target_names_the_edge():
    doc = game_to_dict(running_example())
    doc["transitions"][3]["to"] = 42
    with pytest.raises(SchemaError, match=r"transitions\[3\].*dangling target state 42"):
        game_from_dict(doc)


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("states"),
        lambda d: d.update(version=99),
        lambda d: d["states"][0].update(owner="P7"),
        lambda d: d["states"][1].update(id=0),
        lambda d: d.update(initial=50),
        lambda d: d.update(finals=[0, 77]),
        lambda d: d["transitions"][0].update(action=999),
        lambda d: d["transitions"][0].update(action="a1"),
    ],
)
def test_schema_errors(mutate):
    doc = game_to_dict(running_example())
    mutate(doc)
    with pytest.raises(SchemaError):
        game_from_dict(doc)


def test_parse_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParseError):
        load_game(path)


def test_validation_error_lists_violations():
    doc = game_to_dict(running_example())
    doc["transitions"] = [t for t in doc["transitions"] if t["from"] != 4]
    with pytest.raises(ValidationError) as info:
        game_from_dict(doc)
    assert any("s4" in v for v in info.value.violations)
    assert game_from_dict(doc, validate=False).game.n_transitions == 19


def test_cli_solve(capsys):
    code, out, _ = run(["solve", "running_example.json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["win1"] == ["s10", "s11"]
    assert doc["ranks"]["s9"] == 5 and doc["ranks"]["s10"] is None


def test_cli_solve_csv(capsys):
    code, out, _ = run(["solve", "--format", "csv", "running_example.json"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["state", "owner", "rank", "winner"]
    assert ["s10", "P1", "inf", "P1"] in rows


def test_cli_dswin(capsys):
    code, out, _ = run(["dswin", "--fake-states", "s7", "running_example.json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["region"] == ["s5", "s7", "s8", "s9"]
    assert doc["vod"] == 0.5


def test_cli_daswin_and_vod(capsys):
    code, out, _ = run(["daswin", "--trap-states", "s1", "--fake-states", "s2", "toy_counterexample.json"], capsys)
    assert json.loads(out)["region"] == ["s1", "s2"]
    code, out, _ = run(["vod", "--mode", "almost-sure", "--fake-states", "s7", "running_example.json"], capsys)
    assert json.loads(out)["vod_fraction"] == "3/8"


def test_cli_place_greedy(capsys):
    code, out, _ = run(["place", "greedy", "--fakes", "1", "running_example.json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["placement"]["fakes"] == ["s2"]
    assert doc["vod"] == 0.625
    assert doc["iterations"][0]["kind"] == "fake"
    assert "seconds" in doc["timing"]


def test_cli_place_exhaustive(capsys):
    code, out, _ = run(["place", "exhaustive", "--traps", "1", "--fakes", "1", "toy_counterexample.json"], capsys)
    doc = json.loads(out)
    assert doc["optimum_fraction"] == "5/6"
    assert {"trap_states": ["s3"], "fake_states": ["s1"]} in doc["placements"]


def test_cli_exit_codes(capsys, tmp_path):
    code, _, err = run(["place", "exhaustive", "--traps", "3", "--fakes", "3", "--limit", "5", "running_example.json"], capsys)
    assert code == 2 and "exceeds" in err
    code, _, err = run(["dswin", "--fake-states", "s0", "running_example.json"], capsys)
    assert code == 1 and err.startswith("error:")
    code, _, _ = run(["dswin", "--fake-states", "nope", "running_example.json"], capsys)
    assert code == 1
    code, _, _ = run(["solve", str(tmp_path / "missing.json")], capsys)
    assert code == 1
    bad = tmp_path / "bad.json"
    bad.write_text("[")
    code, _, _ = run(["solve", str(bad)], capsys)
    assert code == 1
    code, _, _ = run(["gen", "random", "--states", "3", "--p1", "9"], capsys)
    assert code == 1


def test_cli_gen_random_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gen", "random", "--states", "30", "--p1", "12", "--seed", "4", "--out", str(a)]) == 0
    assert main(["gen", "random", "--states", "30", "--p1", "12", "--seed", "4", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert load_game(a).n_states == 30


def test_cli_gridworld_pipeline(capsys, tmp_path, monkeypatch):
    code, out, _ = run(GRID_ARGS, capsys)
    assert code == 0
    monkeypatch.setattr(sys, "stdin", io.StringIO(out))
    code, solved, _ = run(["solve", "-"], capsys)
    doc = json.loads(solved)
    assert (doc["n_states"], doc["n_transitions"]) == (4050, 16200)

    path = tmp_path / "grid.json"
    path.write_text(out)
    loaded = load_document(path)
    assert loaded.grid is not None and len(loaded.candidates) <= 43


def test_cli_heatmap_csv(capsys, tmp_path):
    grid = tmp_path / "grid.json"
    assert main(GRID_ARGS + ["--out", str(grid)]) == 0
    heat = tmp_path / "heat.csv"
    assert main(["place", "greedy", "--fakes", "1", "--format", "csv", "--out", str(heat), str(grid)]) == 0
    rows = list(csv.reader(heat.open()))
    assert len(rows) == 7 and all(len(r) == 7 for r in rows)
    for cell in [(2, 2), (2, 3), (4, 2), (5, 4), (1, 6), (4, 6)]:
        assert rows[cell[0]][cell[1]] == "NA"
    values = [float(v) for r in rows for v in r if v != "NA"]
    assert values and all(0 <= v <= 1 for v in values)


def test_cli_gridworld_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"rows": 1, "cols": 2, "cheese": [[0, 1]]}))
    code, out, _ = run(["gen", "gridworld", "--config", str(cfg)], capsys)
    assert code == 0 and len(json.loads(out)["states"]) == 8


def test_cli_audit(capsys):
    code, out, _ = run(["audit", "--samples", "200", "--seed", "3", "--max-base", "1", "running_example.json"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["samples"] == 200
    assert doc["superadditivity_violations"] > 0
    assert doc["monotonicity_violations"] == 0 and doc["union_containment_violations"] == 0
