import json

import pytest

from eisenmodes.cli import (
    EXIT_NO_FIXTURE,
    EXIT_NOT_HALF_INTEGER,
    EXIT_NOT_TRIANGULAR,
    EXIT_OBSTRUCTED,
    EXIT_OK,
    main,
)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_solve_and_verify_round_trip(tmp_path, capsys):
    out_file = tmp_path / "solution.json"
    code, _ = run_cli(
        capsys, "solve", "--alpha", "3/2", "--beta", "3/2", "--lambda", "30",
        "--n1", "1", "--n2", "2", "--output", str(out_file),
    )
    assert code == EXIT_OK
    doc = json.loads(out_file.read_text())
    assert doc["case"] == "generic"
    assert doc["report"]["kernel_dim"] == 0
    code, out = run_cli(capsys, "verify", "--input", str(out_file), "--y", "0.5,1,2")
    assert code == EXIT_OK
    verdict = json.loads(out)
    assert verdict["pass"] is True
    assert len(verdict["residuals"]) == 3
    # verdicts are reproducible from the serialized document alone
    code2, out2 = run_cli(capsys, "verify", "--input", str(out_file), "--y", "0.5,1,2")
    assert out2 == out


def test_exit_codes():
    assert main(["solve", "--alpha", "3/2", "--beta", "3/2", "--lambda", "10",
                 "--n1", "1", "--n2", "2", "--widen-cap", "2", "--output", "/dev/null"]) == EXIT_NOT_TRIANGULAR
    assert main(["solve", "--alpha", "3/2", "--beta", "3/2", "--lambda", "2",
                 "--n1", "1", "--n2", "-1", "--output", "/dev/null"]) == EXIT_OBSTRUCTED
    assert main(["solve", "--alpha", "2", "--beta", "3/2", "--lambda", "12",
                 "--n1", "1", "--n2", "2", "--output", "/dev/null"]) == EXIT_NOT_HALF_INTEGER
    assert main(["solve", "--alpha", "3/2"]) == 64  # usage


def test_sums_command(capsys):
    code, out = run_cli(capsys, "sums", "--a", "2", "--b", "2", "--s", "8", "--limit", "2000")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["closed_form"] == [{"coeff": "143/58769550", "monomial": {"pi": 12}}]
    assert doc["status"] == "convergent"
    assert float(doc["partial_sum"]["value"]) == pytest.approx(float(doc["numeric"]), rel=1e-4)


def test_table_command(capsys):
    code, out = run_cli(capsys, "table", "--alpha", "3/2", "--beta", "3/2", "--lambda", "30",
                        "--cases", "anti_diagonal")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["entries"] and all(e["verdict"] == "equal" for e in doc["entries"])
    code, _ = run_cli(capsys, "table", "--alpha", "9/2", "--beta", "9/2", "--lambda", "30")
    assert code == EXIT_NO_FIXTURE


def test_table_reports_errata(capsys):
    code, out = run_cli(capsys, "table", "--alpha", "3/2", "--beta", "7/2", "--lambda", "30",
                        "--cases", "right")
    assert code == EXIT_OK
    doc = json.loads(out)
    verdicts = {e["verdict"] for e in doc["entries"]}
    assert "equal_with_erratum" in verdicts


def test_combine_command(capsys):
    code, out = run_cli(capsys, "combine", "--preset", "T-2", "--n1", "1", "--n2", "2")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["spot_check"]["verdict"] == "equal"
    for point in doc["spot_check"]["points"]:
        assert float(point["relative_error"]) <= 1e-8


def test_alpha_sum_command(capsys):
    code, out = run_cli(capsys, "alpha-sum", "--alpha", "3/2", "--beta", "3/2", "--lambda", "30")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["status"] == "exact"
    assert doc["value"] == [{"coeff": "52/146923875", "monomial": {"pi": 8}}]


def test_solve_output_bytes_deterministic(capsys):
    args = ["solve", "--alpha", "3/2", "--beta", "5/2", "--lambda", "20",
            "--n1", "2", "--n2", "3"]
    code1, out1 = run_cli(capsys, *args)
    code2, out2 = run_cli(capsys, *args)
    assert code1 == code2 == EXIT_OK
    assert out1 == out2
