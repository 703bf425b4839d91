"""Golden-file and behaviour tests for the command-line interface.

Set ``BENDMIRROR_REGEN_GOLDEN=1`` to rewrite the stored outputs.
"""

import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from bendmirror.cli import VERBS, run_command

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "potential_n2_formula": "potential --n 2 --source formula",
    "potential_n4_gz_csv": "potential --n 4 --source gz-reduce --format csv",
    "potential_n3_cluster_chart": "potential --n 3 --source cluster --chart 1-3,3-6,3-5",
    "potential_pentagon": "potential --pentagon 1,1,3,3,3",
    "potential_n2_classes_pretty": "potential --n 2 --source classes --format pretty",
    "mutate_n3": "mutate --n 3 --flip 1-5",
    "mutate_n2_symbolic": "mutate --n 2 --flip 1-4 --flip 1-3 --policy keep_symbolic",
    "classify_n2": "classify --n 2",
    "classify_n4_csv": "classify --n 4 --format csv",
    "polytope_n2": "polytope --n 2",
    "polytope_chart_csv": "polytope --r 2,1,3,2,3 --chart 1-4,2-4 --format csv",
    "kappa_s2": "kappa --model s2",
    "kappa_so3_csv": "kappa --model so3 --format csv",
    "simulate_bend": "simulate --r 1,1,1,1,1 --lengths 1,1 --angles 1,2 --bend 1-3:0.5,1-4:1.25",
    "fiber_s1": "fiber --r 1,1,1,1,1,1 --lengths 2,2,1",
    "fiber_so3_pretty": "fiber --r 1,1,1,1,1,1 --lengths 1,0,1 --format pretty",
    "flipgraph_n2_pretty": "flipgraph --n 2 --format pretty",
    "flipgraph_n3": "flipgraph --n 3",
}


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    status = run_command(argv.split() if isinstance(argv, str) else argv, out, err)
    return status, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    status, out, _ = run(CASES[name])
    assert status == 0
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("BENDMIRROR_REGEN_GOLDEN"):
        path.write_text(out)
    assert out == path.read_text()


def test_every_verb_has_a_golden_case():
    covered = {c.split()[0] for c in CASES.values()}
    assert covered == set(VERBS) - {"check"}


def test_byte_identical_across_processes():
    cmd = [sys.executable, "-m", "bendmirror", "kappa", "--model", "so3", "--seed", "11"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["kappa"] == [0]


def test_json_carries_schema():
    _, out, _ = run("potential --n 2")
    data = json.loads(out)
    assert data["schema"] == "bendmirror/1"
    assert len(data["potential"]["terms"]) == 7
    assert all("/" in t["coeff"] for t in data["potential"]["terms"])


def test_kappa_example():
    _, out, _ = run("kappa --model s2")
    assert json.loads(out)["kappa"] == [2]


@pytest.mark.parametrize("argv, status, code", [
    ("potential --n 3 --source formula", 2, "OddN"),
    ("classify --n 5", 2, "OddN"),
    ("polytope --r 1,1,-1,1,1", 2, "InvalidLengthTuple"),
    ("mutate --n 2 --flip 2-4", 2, "DiagonalNotInTriangulation"),
    ("fiber --r 1,1,1,1,1 --lengths 3,1", 2, "NotInPolytope"),
    ("kappa --model s2 --allowed 100 --range 0:2", 3, "EmptyResult"),
    ("potential --n 2 --frobnicate", 2, "ValidationError"),
])
def test_error_mapping(argv, status, code):
    got, out, err = run(argv)
    assert got == status
    assert json.loads(out)["error"]["code"] == code
    assert code in err


def test_help_lists_every_verb():
    out = subprocess.run([sys.executable, "-m", "bendmirror", "--help"], capture_output=True,
                         text=True, check=True).stdout
    for verb in VERBS:
        assert verb in out


def test_check_subset():
    status, out, _ = run("check --criteria 3,8")
    assert status == 0
    assert out.count("[PASS]") == 2
    status, out, _ = run("--check --criteria 9 --format json")
    assert json.loads(out)["passed"] is True


@pytest.mark.parametrize("argv", [
    "potential --n 2 --plot {}",
    "polytope --n 2 --plot {}",
    "flipgraph --n 2 --plot {}",
])
def test_plot_written(tmp_path, argv):
    pytest.importorskip("matplotlib")
    target = tmp_path / "fig.png"
    status, out, _ = run(argv.format(target))
    assert status == 0
    assert json.loads(out)["plot"] == str(target)
    assert target.read_bytes()[:4] == b"\x89PNG"


def test_plot_rejects_high_dimension(tmp_path):
    status, out, _ = run(f"potential --n 4 --plot {tmp_path / 'x.png'}")
    assert status == 2
