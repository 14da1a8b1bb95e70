import json
import subprocess
import sys

import pytest

from enhanced_adhm import document
from enhanced_adhm.cli import main
from enhanced_adhm.normalform import Case
from enhanced_adhm.numkernel import Matrix
from enhanced_adhm.scan import CSV_HEADER

from conftest import canonical


@pytest.fixture
def x0_path(tmp_path, x0):
    p = tmp_path / "x0.json"
    document.save(x0, p)
    return p


def test_check_x0(x0_path, capsys):
    assert main(["check", str(x0_path)]) == 0
    out = capsys.readouterr().out
    assert "stable solution" in out and "nonzero" not in out


def test_check_json(x0_path, capsys):
    assert main(["check", "--json", str(x0_path)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["stable"] and rep["J_zero"] and set(rep["residuals"].values()) == {"zero"}


def test_check_f_zeroed(tmp_path, x0, capsys):
    p = tmp_path / "f0.json"
    document.save(x0.replace(F=Matrix.zeros(3, 1)), p)
    assert main(["check", str(p)]) == 1
    assert "S.1 violated" in capsys.readouterr().out


def test_check_parse_error_names_field(tmp_path, x0, capsys):
    d = json.loads(document.dumps(x0))
    d["A"][0][1] = {"re": "1/0", "im": "0"}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(d))
    assert main(["check", str(p)]) == 2
    assert "A[0][1].re" in capsys.readouterr().err


def test_tangent_json(x0_path, capsys):
    assert main(["tangent", "--json", str(x0_path)]) == 0
    assert json.loads(capsys.readouterr().out) == {"tangent_dim": 6, "ker_d1": 16, "im_d0": 10}


def test_tangent_text(x0_path, capsys):
    assert main(["tangent", str(x0_path)]) == 0
    assert "tangent dim = 6" in capsys.readouterr().out


@pytest.mark.parametrize("cmd", ["tangent", "omega", "classify"])
def test_unstable_input_exits_2(cmd, tmp_path, x0, capsys):
    p = tmp_path / "u.json"
    document.save(x0.replace(I=Matrix.column([1, 0, 0])), p)
    assert main([cmd, str(p)]) == 2
    assert "S.2 violated" in capsys.readouterr().err


def test_off_variety_exits_2(tmp_path, x0, capsys):
    p = tmp_path / "o.json"
    document.save(x0.replace(A=x0.A + Matrix.unit(3, 3, 0, 1)), p)
    assert main(["omega", str(p)]) == 2
    assert "R1" in capsys.readouterr().err


def test_omega_json(x0_path, capsys):
    assert main(["omega", "--json", str(x0_path)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["rank"] == 6 and rep["kernel"] == []


def test_omega_text_degenerate(tmp_path, capsys):
    p = tmp_path / "ii2.json"
    document.save(canonical(Case.II2), p)
    assert main(["omega", str(p)]) == 0
    out = capsys.readouterr().out
    assert "rank = 4 of 6" in out and "kernel[1]" in out


def test_classify_ii1(tmp_path, capsys):
    p = tmp_path / "ii1.json"
    document.save(canonical(Case.II1), p)
    assert main(["classify", "--json", str(p)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["case"] == "II1"
    assert rep["predicted_nondegenerate"] is False
    assert rep["computed_nondegenerate"] is False
    assert rep["agreement"] is True


def test_scan_header_only(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["scan", "--samples", "0", "--csv", str(out)]) == 0
    assert out.read_text() == ",".join(CSV_HEADER) + "\n"


def test_scan_all_cases(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["scan", "--case", "all", "--samples", "40", "--seed", "7", "--csv", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 161
    assert all(line.split(",")[8] == "true" for line in lines[1:])
    assert "agreement 160/160 = 100.0%" in capsys.readouterr().out


def test_scan_unwritable_path(tmp_path):
    assert main(["scan", "--samples", "1", "--csv", str(tmp_path / "missing" / "s.csv")]) == 2


def test_scan_timing_fills_column(capsys):
    assert main(["scan", "--case", "i", "--samples", "2", "--timing"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert all(r.split(",")[9] for r in rows)


def test_verify_single_sample(capsys):
    assert main(["verify-proposition", "--samples", "1"]) == 0
    out = capsys.readouterr().out
    table = [line for line in out.splitlines() if line.split() and line.split()[0] in ("I", "II1", "II2", "II3")]
    assert len(table) == 4
    assert out.rstrip().endswith("PASS")


def test_verify_injected_fault_dumps(tmp_path, capsys):
    code = main(["verify-proposition", "--samples", "2", "--inject-fault", "omega-sign",
                 "--dump-dir", str(tmp_path)])
    assert code == 1
    assert "FAIL" in capsys.readouterr().out
    dumps = sorted(tmp_path.glob("counterexample_*.json"))
    assert dumps
    x = document.load(dumps[0])
    assert x.dims == (1, 3, 1)


def test_sample_command(tmp_path):
    p = tmp_path / "s.json"
    assert main(["sample", "--case", "ii3", "--seed", "4", "--random-basis", "-o", str(p)]) == 0
    assert main(["check", str(p)]) == 0


def test_console_script_entry(x0_path):
    proc = subprocess.run([sys.executable, "-m", "enhanced_adhm.cli", "tangent", "--json", str(x0_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["tangent_dim"] == 6
