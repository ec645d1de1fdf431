import json
import subprocess
import sys

import pytest

from qbundle.cli import main
from qbundle.presets import PRESETS, SUQ2
from qbundle.report import SCHEMA, strip_runtime

SMALL = ["--grid", "9x8x8", "--equator-samples", "16,32"]


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse rejects malformed flags itself
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def test_hopf_suite_passes(capsys):
    code, out, _ = run(capsys, "run-suite", "hopf-axioms", "--max-degree", "3")
    assert code == 0
    d = json.loads(out)
    assert d["schema"] == SCHEMA
    assert d["status"] == "pass"
    assert [c["name"] for c in d["checks"]][:2] == ["coassociativity", "left counit"]


def test_classical_relations(capsys):
    code, out, _ = run(capsys, "run-suite", "relations", "--algebra", "su2")
    assert code == 0 and json.loads(out)["status"] == "pass"


def test_report_deterministic(capsys):
    args = ["run-suite", "prolongation", *SMALL]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    a, b = json.loads(first), json.loads(second)
    assert strip_runtime(a) == strip_runtime(b)
    assert json.dumps(strip_runtime(a), sort_keys=True) == json.dumps(strip_runtime(b), sort_keys=True)


def test_failure_exit_code(tmp_path, capsys):
    broken = tmp_path / "broken.qb"
    broken.write_text(PRESETS["u1"] + SUQ2.replace("antipode alpha = alpha^*", "antipode alpha = alpha"))
    code, out, _ = run(capsys, "run-suite", "hopf-axioms", "--presentation", str(broken),
                       "--max-degree", "1", "--format", "text")
    assert code == 1
    assert "[FAIL] hopf-axioms" in out


@pytest.mark.parametrize("argv", [
    ["run-suite", "nonsense"],
    ["run-suite", "relations", "--algebra", "nope"],
    ["run-suite", "relations", "--presentation", "/nonexistent/file.qb"],
    ["run-suite", "numeric-identities", "--grid", "0x4x4"],
    ["run-suite", "relations", "--q=-1/2"],
    ["run-suite", "relations", "--q", "x"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_argparse_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["run-suite", "relations", "--grid", "48x48"])
    assert info.value.code == 2


def test_malformed_file_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.qb"
    bad.write_text("algebra x\n  order a\n  rule a -> (\nend\n")
    code, _, err = run(capsys, "run-suite", "relations", "--presentation", str(bad))
    assert code == 2
    assert f"{bad}:3:" in err


def test_obstruction_command(capsys):
    code, out, _ = run(capsys, "obstruction", *SMALL)
    assert code == 0
    d = json.loads(out)
    assert d["summary"]["verdict"] == "obstructed"
    assert d["summary"]["winding"] == 1
    assert {"min_modulus", "samples", "forcing_chain"} <= set(d["summary"])


def test_normal_form_command(capsys):
    code, out, _ = run(capsys, "normal-form", "alpha*alpha^* - alpha^* * alpha")
    assert code == 0
    assert out.strip() == "(1 - q^2)*gamma*gamma^*"


def test_cotensor_basis_command(capsys):
    code, out, _ = run(capsys, "cotensor-basis", "--bidegree", "1,1")
    d = json.loads(out)
    assert code == 0 and d["bidegree"] == [1, 1]
    # 1⊗1 plus the 2x2 pairs in each of the weight classes +1 and -1
    assert len(d["basis"]) == 9


def test_dump_function(tmp_path, capsys):
    path = tmp_path / "j.csv"
    code, _, _ = run(capsys, "dump-function", "cleave", "--n", "2", "--mask", "C", "--grid", "5x4x4",
                     "-o", str(path))
    assert code == 0
    header = path.read_text().splitlines()[0]
    assert header == "eta,xi1,xi2,re,im"


def test_show_round_trips(capsys):
    code, out, _ = run(capsys, "show", "--algebra", "suq2")
    assert code == 0
    assert out.startswith("algebra suq2")


def test_output_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "run-suite", "confluence", "-o", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["suite"] == "confluence"


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qbundle.cli", "run-suite", "confluence", "--format", "text"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("[PASS] confluence")
