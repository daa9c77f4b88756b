import csv
import json
import subprocess
import sys

import pytest

from formlab import __version__, cli, counting
from formlab.capture_graph import parse_dimacs


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_nq_example(capsys):
    code, out, _ = run(capsys, "nq", "--p", "7", "--n", "1", "--L", "1,1", "--Q", "0,1,0", "--mode", "exact")
    assert code == 0
    report = json.loads(out)
    assert report["result"]["case"] == "GENERIC" and report["result"]["nq"] == 3
    assert report["version"] == __version__ and report["seed"] == 0
    assert report["config"]["options"]["p"] == 7
    assert "timestamp" in report


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["field", "--p", "4", "--n", "1"], "p must be an odd prime"),
        (["field", "--p", "2"], "p must be an odd prime"),
        (["reduce", "--p", "7", "--L", "1,7"], "7"),
        (["reduce", "--p", "7", "--L", "0,0"], ""),
        (["count", "--p", "7", "--L", "1,0", "--Q", "0,1,0", "--a", "1", "--b", "1", "--max-brute-q", "5"], ""),
        (["composite", "--N", "10"], "odd"),
        (["charsum", "--experiment", "burgess", "--p", "3", "--n", "2"], "prime field"),
    ],
)
def test_usage_errors_exit_2(capsys, argv, needle):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert err.startswith(f"formlab {argv[0]}: error:") and needle in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["nosuch"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["nq", "--p", "7", "--mode", "fast"])
    assert exc.value.code == 2


def test_verification_failure_exit_1(capsys, monkeypatch):
    monkeypatch.setattr(counting, "count_closed", lambda inst, a, b: 99)
    code, out, _ = run(capsys, "count", "--p", "7", "--a", "3", "--b", "2", "--brute")
    assert code == 1
    assert json.loads(out)["result"]["agree"] is False


def test_count_and_capture(capsys):
    code, out, _ = run(capsys, "count", "--p", "7", "--a", "3", "--b", "2", "--brute")
    res = json.loads(out)["result"]
    assert code == 0 and res["closed"] == res["brute"] == 2
    code, out, _ = run(capsys, "capture", "--p", "7", "--set", "2,5,6", "--brute")
    res = json.loads(out)["result"]
    assert code == 0 and res["captures"] is True and res["brute"] is True


def test_run_config_round_trip():
    ns = cli.build_parser().parse_args(["nq", "--p", "3", "--n", "2", "--mode", "greedy", "--seed", "4"])
    ns.threads = 1
    cfg = cli.RunConfig.from_namespace(ns)
    assert cfg.options == {"p": 3, "n": 2, "L": "1,1", "Q": "0,1,0", "mode": "greedy"}
    back = cli.RunConfig.from_json(cfg.to_json())
    assert back == cfg and back.to_json() == cfg.to_json()


def test_dimacs_export_file(capsys, tmp_path):
    target = tmp_path / "g.dimacs"
    code, out, _ = run(capsys, "graph", "--p", "7", "--export", "dimacs", "--out", str(target))
    assert code == 0
    assert json.loads(out)["result"]["dimacs"] == str(target)
    assert parse_dimacs(target.read_text()) == (3, [(0, 1)])


@pytest.mark.parametrize(
    "argv",
    [
        ["charsum", "--experiment", "vinogradov", "--p", "11", "--trials", "100", "--seed", "42"],
        ["nq-sweep", "--qmax", "49", "--seed", "1"],
        ["composite", "--N", "15"],
    ],
)
def test_reproducible_runs_are_byte_identical(tmp_path, argv):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}"
        assert cli.main(argv + ["--reproducible", "--threads", "1", "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_timestamp_only_without_reproducible(capsys):
    _, out, _ = run(capsys, "field", "--p", "7", "--reproducible")
    assert "timestamp" not in json.loads(out)


def test_sweep_csv_shape(tmp_path):
    path = tmp_path / "sweep.csv"
    assert cli.main(["nq-sweep", "--qmax", "27", "--reproducible", "--threads", "1", "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0].startswith(f"# formlab {__version__} config=")
    rows = list(csv.DictReader(lines[1:]))
    assert list(rows[0]) == cli.SWEEP_HEADER
    assert {int(r["q"]) for r in rows} == {3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27}
    for r in rows:
        assert r["status"] == "EXACT" and int(r["nq"]) <= float(r["upper_bound"])
        assert r["runtime_ms"] == "0"


def test_sweep_parallel_matches_serial(tmp_path):
    outs = []
    for threads in ("1", "2"):
        path = tmp_path / f"t{threads}"
        cli.main(["nq-sweep", "--qmax", "49", "--reproducible", "--threads", threads, "--out", str(path)])
        body = path.read_text().splitlines()[1:]
        outs.append(body)
    assert outs[0] == outs[1]


def test_threads_env_override(monkeypatch):
    monkeypatch.setenv("FORMLAB_THREADS", "3")
    assert cli.default_threads() == 3
    monkeypatch.setenv("FORMLAB_THREADS", "many")
    with pytest.raises(cli.UsageError):
        cli.default_threads()
    monkeypatch.delenv("FORMLAB_THREADS")
    assert cli.default_threads() >= 1


def test_threads_env_reaches_config(capsys, monkeypatch):
    monkeypatch.setenv("FORMLAB_THREADS", "2")
    _, out, _ = run(capsys, "field", "--p", "5", "--reproducible")
    assert json.loads(out)["config"]["threads"] == 2


@pytest.mark.parametrize("sub", sorted(cli.HANDLERS))
def test_help_for_every_subcommand(capsys, sub):
    with pytest.raises(SystemExit) as exc:
        cli.main([sub, "--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert "--seed" in out and "--reproducible" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "formlab", "nq", "--p", "7", "--reproducible"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["nq"] == 3
    proc = subprocess.run([sys.executable, "-m", "formlab", "field", "--p", "4"], capture_output=True, text=True)
    assert proc.returncode == 2 and "p must be an odd prime" in proc.stderr


def test_pretty_and_other_subcommands(capsys):
    code, out, _ = run(capsys, "reduce", "--p", "3", "--n", "2", "--pretty")
    assert code == 0 and "L_pretty" in json.loads(out)["result"]
    for argv in (
        ["nq", "--p", "7", "--mode", "bounds"],
        ["nq", "--p", "7", "--mode", "oracle"],
        ["nq", "--p", "7", "--L", "1,0", "--Q", "3,0,0"],
        ["charsum", "--experiment", "burgess", "--p", "101", "--lengths", "11", "--shifts", "20"],
        ["charsum", "--experiment", "weil", "--p", "5", "--n", "2", "--trials", "20"],
        ["charsum", "--experiment", "sextic", "--p", "11", "--trials", "20"],
        ["charsum", "--experiment", "pairs", "--p", "101", "--trials", "5"],
        ["charsum", "--experiment", "goodvertex", "--p", "101", "--trials", "5"],
        ["composite", "--N", "9"],
    ):
        code, out, err = run(capsys, *argv)
        assert code == 0, (argv, err)
        json.loads(out)
