import json
import re
from pathlib import Path

import pytest

from rbgames.cli import build_parser, main
from rbgames.generators import (
    canonical_knapsack_game,
    cyclic_matching_game,
    infeasible_game,
)
from rbgames.model import save_instance

_INSTANCES = Path(__file__).resolve().parent.parent / "instances"


@pytest.fixture(scope="module")
def canonical_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "canonical.json"
    save_instance(canonical_knapsack_game(), path)
    return str(path)


def test_packaged_instances_exist():
    names = {p.name for p in _INSTANCES.glob("*.json")}
    assert "canonical-knapsack.json" in names
    assert "infeasible-player.json" in names
    assert "cyclic-matching.json" in names


def test_equilibrium_found_exits_zero(canonical_path, capsys):
    code = main(["--instance", canonical_path])
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("status: ")
    first = out.splitlines()[0].split(": ")[1]
    assert first in ("PNE", "MNE")
    assert "blue: x = [" in out
    assert "red: x = [" in out
    assert re.search(r"iterations: \d+ {2}cuts: \d+", out)


def test_full_enumeration_lists_every_equilibrium(canonical_path, capsys):
    code = main(["--instance", canonical_path, "--algorithm", "fullenum"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("equilibrium ") == 3


def test_output_document(canonical_path, tmp_path, capsys):
    dest = tmp_path / "result.json"
    code = main(["--instance", canonical_path, "--algorithm", "fullenum",
                 "--output", str(dest), "--quiet"])
    assert code == 0
    assert capsys.readouterr().out == ""
    doc = json.loads(dest.read_text())
    assert doc["status"] in ("PNE", "MNE")
    assert len(doc["equilibria"]) == 3
    assert doc["stats"]["iterations"] >= 1


def test_deterministic_output_modulo_wall_time(canonical_path, tmp_path):
    docs = []
    for k in range(2):
        dest = tmp_path / f"run{k}.json"
        assert main(["--instance", canonical_path, "--output", str(dest), "--quiet"]) == 0
        doc = json.loads(dest.read_text())
        doc["stats"].pop("wallTimeMs")
        docs.append(doc)
    assert docs[0] == docs[1]


def test_no_equilibrium_exits_two(tmp_path, capsys):
    path = tmp_path / "cyclic.json"
    save_instance(cyclic_matching_game(), path)
    code = main(["--instance", str(path), "--algorithm", "fullenum"])
    out = capsys.readouterr().out
    assert code == 2
    assert "status: NoEquilibriumFound" in out


def test_time_limit_exits_three(canonical_path, capsys):
    code = main(["--instance", canonical_path, "--timelimit", "0.001"])
    out = capsys.readouterr().out
    assert code == 3
    assert "status: TimeLimit" in out


def test_infeasible_exits_four(tmp_path, capsys):
    path = tmp_path / "infeasible.json"
    save_instance(infeasible_game(), path)
    code = main(["--instance", str(path)])
    out = capsys.readouterr().out
    assert code == 4
    assert "status: Infeasible" in out


def test_missing_file_exits_one(capsys):
    code = main(["--instance", "/nonexistent/game.json"])
    err = capsys.readouterr().err
    assert code == 1
    assert "no such file" in err


def test_bad_document_exits_one(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"name": 7, "players": []}')
    code = main(["--instance", str(path)])
    err = capsys.readouterr().err
    assert code == 1
    assert "error: name: expected str" in err


def test_usage_errors_exit_one(canonical_path, capsys):
    assert main([]) == 1  # --instance is required
    capsys.readouterr()
    assert main(["--instance", canonical_path, "--algorithm", "simplex"]) == 1
    capsys.readouterr()
    assert main(["--instance", canonical_path, "--tolerance", "0"]) == 1
    capsys.readouterr()
    assert main(["--instance", canonical_path, "--threads", "0"]) == 1
    capsys.readouterr()
    assert main(["--instance", canonical_path, "--timelimit", "-2"]) == 1
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    assert "--instance" in out


def test_lemke_option(canonical_path, capsys):
    code = main(["--instance", canonical_path, "--lcp", "lemke"])
    capsys.readouterr()
    assert code == 0


def test_parser_defaults():
    args = build_parser().parse_args(["--instance", "x.json"])
    assert args.algorithm == "cutandplay"
    assert args.tolerance == 3e-4
    assert args.lcp == "branching"
    assert args.threads == 1
    assert args.seed == 0
    assert not args.quiet


def test_console_script_runs(canonical_path):
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "rbgames", "--instance", canonical_path, "--quiet"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
