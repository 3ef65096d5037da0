import csv
import io
import json

import pytest

from src.cli import main
from src.cli.app import build_parser, config_from_args, int_list
from src.cli.commands import bound_shape, get_command
from src.cli.emit import render
from src.cli.pool import imap_ordered
from src.core.errors import EXIT_INVARIANT, ConfigError, InvariantViolationError
from src.models.schemas import ExperimentConfig
from src.services.heights import count_weierstrass


def _run(tmp_path, name, *args):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out


def _json_rows(path):
    return json.loads(path.read_text())["rows"]


def test_int_list():
    assert int_list("5,7, 11") == [5, 7, 11]
    assert int_list("3") == [3]


def test_parser_defaults_come_from_config():
    args = build_parser().parse_args(["duke", "--height", "2", "--ell", "7,5"])
    config = config_from_args(args)
    assert config.height == [2]
    assert config.ell == [5, 7]
    assert config.shards == 1
    assert config.format == "csv"


def test_unknown_command_rejected():
    with pytest.raises(ConfigError):
        get_command("nope")


def test_duke_height_one(tmp_path):
    code, out = _run(
        tmp_path, "duke.json", "duke", "--height", "1", "--ell", "5", "--budget", "200",
        "--format", "json",
    )
    assert code == 0
    rows = _json_rows(out)
    assert len(rows) == 8
    by_curve = {(r["a"], r["b"]): r for r in rows}
    for cm in [(0, 1), (0, -1), (-1, 0), (1, 0)]:
        assert by_curve[cm]["ell_5"].startswith("Candidate")
        assert by_curve[cm]["in_b"] == 1
    assert all(r["in_b"] in (0, 1) for r in rows)


def test_duke_output_independent_of_shards(tmp_path):
    base = ["duke", "--height", "10", "--ell", "5", "--budget", "200"]
    assert main([*base, "--shards", "1", "--out", str(tmp_path / "one.csv")]) == 0
    assert main([*base, "--shards", "8", "--out", str(tmp_path / "eight.csv")]) == 0
    assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "eight.csv").read_bytes()


def test_json_and_csv_carry_the_same_numbers(tmp_path):
    base = ["sieve", "--demo", "even-numerator", "--height", "10,20"]
    _, as_csv = _run(tmp_path, "s.csv", *base)
    _, as_json = _run(tmp_path, "s.json", *base, "--format", "json")
    csv_rows = list(csv.DictReader(io.StringIO(as_csv.read_text())))
    json_rows = _json_rows(as_json)
    assert len(csv_rows) == len(json_rows) == 2
    for c, j in zip(csv_rows, json_rows):
        assert set(c) == set(j)
        for key, value in j.items():
            assert c[key] == str(value)


def test_json_output_carries_config(tmp_path):
    _, out = _run(tmp_path, "z.json", "sieve", "--demo", "zero", "--height", "100", "--format", "json")
    payload = json.loads(out.read_text())
    assert payload["config"]["subcommand"] == "sieve"
    assert "shards" not in payload["config"]
    assert payload["rows"][0]["L_exact"] == "1"
    assert payload["rows"][0]["within"] == 1


def test_equidist_mod_2(tmp_path):
    code, out = _run(
        tmp_path, "e.json", "equidist", "--primes", "101", "--ell", "2", "--format", "json"
    )
    assert code == 0
    rows = _json_rows(out)
    assert [r["t"] for r in rows] == [0, 1]
    assert sum(r["count"] for r in rows) == 101 * 100


def test_equidist_skips_equal_characteristic(tmp_path):
    _, out = _run(
        tmp_path, "e5.json", "equidist", "--primes", "5", "--ell", "5,3", "--format", "json"
    )
    assert {r["ell"] for r in _json_rows(out)} == {3}


def test_derangement_mod_5(tmp_path):
    code, out = _run(tmp_path, "d.json", "derangement", "--ell", "5", "--format", "json")
    assert code == 0
    rows = _json_rows(out)
    borel = [r for r in rows if r["subgroup"] == "borel"]
    assert len(borel) == 4
    assert all(r["derangement_proportion"] > 0 for r in borel)


def test_tx_window(tmp_path):
    code, out = _run(
        tmp_path, "t.json", "tx", "--height", "1", "--log-window", "20", "--format", "json"
    )
    assert code == 0
    rows = _json_rows(out)
    assert len(rows) == 8
    assert {r["window"] for r in rows} == {13}


def test_blcount_rows(tmp_path):
    code, out = _run(
        tmp_path, "b.json", "blcount", "--height", "1,2", "--ell", "5", "--budget", "100",
        "--format", "json",
    )
    assert code == 0
    rows = _json_rows(out)
    assert [(r["x"], r["ell"]) for r in rows] == [(1, 5), (2, 5)]
    assert all(0 < r["ratio"] <= 1 for r in rows)
    assert rows[1]["bound_shape"] == pytest.approx(bound_shape(2, 5))


@pytest.mark.parametrize(
    "argv",
    [
        ["duke", "--ell", "4"],
        ["duke", "--height", "1,2"],
        ["equidist", "--primes", "10009"],
        ["derangement", "--ell", "17"],
        ["sieve", "--height", "1"],
    ],
)
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert '"code": "CONFIG_ERROR"' in capsys.readouterr().err


def test_missing_output_directory(tmp_path):
    out = tmp_path / "missing" / "rows.csv"
    assert main(["sieve", "--height", "10", "--out", str(out)]) == 2


def test_render_empty_rows():
    config = ExperimentConfig(subcommand="sieve")
    assert render(config, []) == ""


def test_duke_union_at_ell_3_is_not_the_whole_box(tmp_path):
    summary = tmp_path / "duke.summary.json"
    code, out = _run(
        tmp_path, "duke3.json", "duke", "--height", "3", "--ell", "3", "--budget", "200",
        "--format", "json", "--summary", str(summary),
    )
    assert code == 0
    rows = _json_rows(out)
    share = sum(r["in_b"] for r in rows) / len(rows)
    assert share < 0.5
    by_curve = {(r["a"], r["b"]): r for r in rows}
    assert by_curve[(0, 1)]["ell_3"] == "Candidate(Reducible)"
    assert by_curve[(1, 1)]["ell_3"] == "ContainsSL2"

    aggregates = json.loads(summary.read_text())
    assert "summary" not in aggregates["config"]
    assert aggregates["summary"]["curves"] == len(rows)
    assert aggregates["summary"]["union"] == sum(r["in_b"] for r in rows)
    assert aggregates["summary"]["candidates"]["3"] == sum(
        1 for r in rows if r["ell_3"] != "ContainsSL2"
    )


def test_tx_witness_share_grows_with_budget():
    tx = get_command("tx")
    witnessed = {}
    for budget in (7, 13, 50, 200):
        rows, _ = tx(ExperimentConfig.build(subcommand="tx", height=[3], budget=budget))
        witnessed[budget] = {(r["a"], r["b"]): r["witness"] for r in rows}
    shares = [sum(w is not None for w in found.values()) for found in witnessed.values()]
    assert shares == sorted(shares)
    # the least witness never moves once found
    for curve, w in witnessed[13].items():
        if w is not None:
            assert witnessed[200][curve] == w


def test_invariant_violation_exits_3(monkeypatch, capsys):
    def broken(config):
        raise InvariantViolationError("Lagrange", {"order": 7})

    monkeypatch.setattr("src.cli.app.get_command", lambda name: broken)
    assert main(["sieve", "--height", "10"]) == EXIT_INVARIANT
    assert '"code": "INVARIANT_VIOLATION"' in capsys.readouterr().err


def test_ordered_pool_matches_inline():
    items = [1, 2, 3, 4, 5]
    assert list(imap_ordered(count_weierstrass, items, workers=3)) == [
        count_weierstrass(x) for x in items
    ]


def test_duke_output_same_with_worker_processes(tmp_path, monkeypatch):
    base = ["duke", "--height", "4", "--ell", "3,5", "--budget", "100"]
    assert main([*base, "--shards", "1", "--out", str(tmp_path / "inline.csv")]) == 0
    monkeypatch.setenv("GALOIS_SIEVE_THREADS", "4")
    assert main([*base, "--shards", "8", "--out", str(tmp_path / "pool.csv")]) == 0
    assert (tmp_path / "inline.csv").read_bytes() == (tmp_path / "pool.csv").read_bytes()
