import csv
import io
import subprocess
import sys

import pytest

from gradedmod.cli import RunConfig, run_command
from gradedmod.segre import bundled_input


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def keyvalues(text):
    out = {}
    for line in text.splitlines():
        if " = " in line and not line.startswith("["):
            k, v = line.split(" = ", 1)
            status, _, detail = v.partition("  # ")
            # info lines carry their value in the detail
            out[k] = detail if status == "info" else status
    return out


def test_hilbert_csv_rows():
    code, out, _ = run(["hilbert", "--module", "nprime", "--format", "csv", "--max-degree", "14"])
    assert code == 0
    rows = [r for r in csv.reader(io.StringIO(out)) if r and r[0] == "series"]
    assert [(r[2], r[3]) for r in rows] == [("5", "10"), ("8", "40"), ("11", "100"), ("14", "199")]


def test_formats_carry_same_numbers():
    values = {}
    for fmt in ("keyvalue", "text", "csv"):
        code, out, _ = run(["hilbert", "--module", "nprime", "--format", fmt, "--max-degree", "11"])
        assert code == 0
        values[fmt] = out
    assert "hilbert.series.nprime = 5:10,8:40,11:100" in values["keyvalue"]
    for n in ("10", "40", "100"):
        assert n in values["text"]
    assert "series,hilbert.nprime,11,100" in values["csv"]


def test_member_command():
    code, out, _ = run(["member", "--module", "nprime", "--element", "w", "--multiple", "T1"])
    assert code == 0
    assert keyvalues(out)["member.is_member"] == "true"
    code, _, err = run(["member", "--module", "nprime", "--element", "w", "--multiple", "T1*T2"])
    assert code == 1
    assert "member.expect_member" in err
    code, _, _ = run(["member", "--module", "nprime", "--element", "w", "--multiple", "T1*T2",
                      "--expect", "nonmember"])
    assert code == 0
    code, out, _ = run(["member", "--module", "nprime", "--element", "S*[T1,T2]"])
    assert code == 0


def test_colon_and_intersect(tmp_path):
    code, out, _ = run(["colon", "--module", "nprime", "--by", "T1"])
    assert code == 0
    assert keyvalues(out)["colon.multiplication_injective"] == "true"
    path = tmp_path / "in.gpa"
    path.write_text(bundled_input() + "submodule A in nprime = multiples(T1)\nsubmodule B in nprime = multiples(T2)\n")
    code, out, _ = run(["intersect", "--input", str(path), "--left", "A", "--right", "B"])
    assert code == 0
    assert keyvalues(out)["intersect.generators_in_both"] == "pass"


def test_nprime_gb_oracle():
    code, out, _ = run(["nprime"])
    assert code == 0
    kv = keyvalues(out)
    assert kv["nprime.rank"] == "10"
    assert kv["nprime.relations"] == "25"
    code, out, _ = run(["gb", "--module", "nprime"])
    assert code == 0
    code, out, _ = run(["oracle", "--module", "nprime", "--max-degree", "11"])
    assert code == 0
    assert keyvalues(out)["oracle.agree"] == "pass"
    code, out, _ = run(["oracle", "--module", "algebra", "--max-degree", "9"])
    assert code == 0
    assert "9:34" in out


def test_prime_mode_header():
    code, out, _ = run(["hilbert", "--module", "nprime", "--prime", "32003", "--max-degree", "8"])
    assert code == 0
    kv = keyvalues(out)
    assert kv["field"] == "Fp 32003"
    assert kv["mode"] == "probabilistic cross-check"


@pytest.mark.parametrize("argv", [
    ["hilbert"],
    ["hilbert", "--module", "nosuch"],
    ["hilbert", "--module", "nprime", "--threads", "0"],
    ["hilbert", "--module", "nprime", "--prime", "15"],
    ["hilbert", "--module", "nprime", "--max-degree", "-1"],
    ["frobnicate"],
    ["member", "--module", "nprime", "--element", "[T1,"],
])
def test_usage_errors(argv):
    code, _, err = run(argv)
    assert code == 2


def test_parse_error_reports_position(tmp_path):
    path = tmp_path / "bad.gpa"
    path.write_text("field QQ\nring X Y weights 1 1\nrelation R = X +* Y\n")
    code, _, err = run(["hilbert", "--input", str(path), "--module", "algebra"])
    assert code == 2
    assert "line 3, column" in err


def test_io_errors(tmp_path):
    code, _, _ = run(["hilbert", "--input", str(tmp_path / "missing.gpa"), "--module", "nprime"])
    assert code == 4
    code, _, _ = run(["hilbert", "--module", "nprime", "--max-degree", "5",
                      "--report", str(tmp_path / "no" / "such" / "dir.txt")])
    assert code == 4


def test_resource_limit(monkeypatch):
    import gradedmod.hilbert as h
    # shrink the oracle's default matrix budget
    monkeypatch.setattr(h.dims_oracle, "__defaults__", (None, 10))
    code, _, err = run(["oracle", "--module", "nprime", "--max-degree", "11"])
    assert code == 3
    assert "resource limit" in err


def test_report_file_and_env(tmp_path, monkeypatch):
    target = tmp_path / "r.txt"
    monkeypatch.setenv("GRADEDMOD_REPORT", str(target))
    code, out, _ = run(["hilbert", "--module", "nprime", "--max-degree", "8"])
    assert code == 0
    assert target.read_text() == out
    monkeypatch.setenv("GRADEDMOD_THREADS", "many")
    code, _, err = run(["hilbert", "--module", "nprime", "--max-degree", "8"])
    assert code == 2


def test_other_settings_ignore_environment(monkeypatch):
    base = run(["hilbert", "--module", "nprime", "--max-degree", "8"])[1]
    monkeypatch.setenv("GRADEDMOD_PRIME", "7")
    monkeypatch.setenv("GRADEDMOD_MAX_DEGREE", "2")
    monkeypatch.setenv("GRADEDMOD_FORMAT", "csv")
    assert run(["hilbert", "--module", "nprime", "--max-degree", "8"])[1] == base


def test_cache_round_trip(tmp_path):
    argv = ["member", "--module", "nprime", "--element", "w", "--multiple", "T1", "--cache", str(tmp_path)]
    code, first, _ = run(argv)
    assert code == 0
    assert keyvalues(first)["gb_cache"].startswith("hits=0 ")
    code, second, _ = run(argv)
    assert code == 0
    hits = int(keyvalues(second)["gb_cache"].split()[0].split("=")[1])
    assert hits >= 1
    assert keyvalues(second)["member.is_member"] == "true"
    # a damaged entry is detected and recomputed
    for f in tmp_path.iterdir():
        f.write_text("[0] T1\n")
    code, third, _ = run(argv)
    assert code == 0
    assert keyvalues(third)["member.is_member"] == "true"
    assert keyvalues(third)["gb_cache"].startswith("hits=0 ")


def test_corrupted_fixture_fails(tmp_path):
    path = tmp_path / "bad.gpa"
    path.write_text(bundled_input().replace("(-T2*T5)*e15", "(T2*T5)*e15"))
    code, out, err = run(["verify-paper", "--input", str(path), "--sections", "fixture"])
    assert code == 1
    assert "fixture.w_matches_reference" in err
    assert "overall = fail" in out


def test_small_sections_pass_and_thread_independent():
    argv = ["verify-paper", "--sections", "fixture", "identities"]
    code, one, _ = run(argv + ["--threads", "1"])
    assert code == 0
    code, four, _ = run(argv + ["--threads", "4"])
    assert code == 0
    assert one == four
    assert "threads" not in one


def test_run_config_validation():
    assert RunConfig().degree_bound == 20
    with pytest.raises(ValueError):
        RunConfig(output_format="xml")
    assert RunConfig(prime=7).field.prime == 7


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gradedmod.cli", "nprime", "--format", "text"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "== nprime ==" in proc.stdout
