import csv
import io
import json
import math
import subprocess
import sys

import pytest

from unruh_oqs import cli
from unruh_oqs.two_atom import asymptotic_concurrence


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), stdout=buf)
    return code, buf.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_correlations_zero_frequency():
    code, out = run("correlations", "--lambda", "0", "--beta-u", "1")
    assert code == 0
    assert float(rows(out)[0]["G_closed[1/time]"]) == pytest.approx(1 / (2 * math.pi), rel=1e-15)


def test_correlations_numeric_and_kms():
    code, out = run("correlations", "--lambda", "1", "-1", "--beta-u", "1", "--numeric")
    assert code == 0
    r = rows(out)
    assert float(r[0]["abs_diff[1/time]"]) < 1e-6
    assert float(r[1]["G_closed[1/time]"]) == pytest.approx(math.exp(-1) * float(r[0]["G_closed[1/time]"]), rel=1e-14)


def test_acceleration_and_beta_are_exclusive():
    assert run("correlations", "--lambda", "1", "--beta-u", "1", "--acceleration", "1")[0] == 2
    assert run("correlations", "--lambda", "1")[0] == 2
    code, out = run("correlations", "--lambda", "1", "--acceleration", str(2 * math.pi))
    assert code == 0 and float(rows(out)[0]["beta_u[time]"]) == pytest.approx(1.0)


def test_single_ground_to_excited_asymptote():
    code, out = run("single", "--omega", "1", "--beta-u", "1", "--observable", "0,0,1",
                    "--t-max", "5", "--steps", "5")
    assert code == 0
    r = rows(out)
    assert r[-1]["t[time]"] == "inf"
    assert float(r[-1]["P[1]"]) == pytest.approx(1 / (1 + math.e), rel=1e-14)
    assert float(r[0]["P[1]"]) == 0.0


def test_single_zero_time_echoes_initial_state():
    code, out = run("single", "--omega", "1", "--beta-u", "1", "--rho0", "0.1,0.2,0.3", "--t-max", "0")
    r = rows(out)
    assert code == 0 and len(r) == 2
    assert [float(r[0][f"r{i}[1]"]) for i in (1, 2, 3)] == pytest.approx([0.1, 0.2, 0.3], abs=1e-15)


def test_single_rate_column_and_rate_command():
    _, out = run("single", "--omega", "1", "--beta-u", "1", "--rate", "--t-max", "0")
    _, out2 = run("rate", "--omega", "1", "--beta-u", "1")
    assert rows(out)[0]["rate[1/time]"] == rows(out2)[0]["rate[1/time]"]
    assert float(rows(out2)[0]["rate[1/time]"]) == pytest.approx(0.185248939325, rel=1e-11)


def test_invalid_bloch_input_is_usage_error():
    assert run("single", "--omega", "1", "--beta-u", "1", "--rho0", "1,1,0")[0] == 2
    assert run("single", "--omega", "1", "--beta-u", "1", "--n", "0,0")[0] == 2
    assert run("single", "--omega", "-1", "--beta-u", "1")[0] == 2


def test_direction_normalized_with_warning(caplog):
    code, out = run("single", "--omega", "1", "--beta-u", "1", "--n", "0,0,2", "--t-max", "0")
    assert code == 0
    assert "normalizing" in caplog.text
    assert float(rows(out)[0]["r3[1]"]) == pytest.approx(-1.0)


def test_two_antiparallel_product_reaches_half():
    code, out = run("two", "--omega", "1", "--beta-u", "2", "--init", "product:(0,0,1),(0,0,-1)",
                    "--t-max", "80", "--steps", "4")
    assert code == 0
    r = rows(out)
    assert float(r[-2]["concurrence[1]"]) == pytest.approx(0.5, abs=1e-8)
    assert float(r[-1]["concurrence[1]"]) == pytest.approx(0.5, abs=1e-12)
    assert all(abs(float(x["tau[1]"]) + 1) < 1e-9 for x in r)


def test_two_werner_gain():
    code, out = run("two", "--omega", "1", "--beta-u", "2", "--init", "werner:0.4",
                    "--t-max", "80", "--steps", "2")
    r = rows(out)
    assert code == 0
    gain = float(r[-2]["concurrence[1]"]) - float(r[0]["concurrence[1]"])
    assert float(r[0]["concurrence[1]"]) == pytest.approx(0.4, abs=1e-12)
    assert gain == pytest.approx(0.3, abs=1e-8)


def test_two_singlet_pinned(tmp_path):
    code, out = run("two", "--omega", "1", "--beta-u", "1", "--init", "singlet", "--t-max", "10", "--steps", "3")
    assert code == 0
    for x in rows(out):
        assert float(x["concurrence[1]"]) == pytest.approx(1.0, abs=1e-12)
        assert float(x["tau[1]"]) == pytest.approx(-3.0, abs=1e-12)


def test_two_components_file(tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"v0i": [0, 0, 0], "vi0": [0, 0, 0], "vij": [[-0.5, 0, 0], [0, -0.5, 0], [0, 0, -0.5]]}))
    code, out = run("two", "--omega", "1", "--beta-u", "1", "--full", "--init", f"file:{f}", "--t-max", "0")
    assert code == 0 and float(rows(out)[0]["tau[1]"]) == pytest.approx(-1.5)
    f.write_text(json.dumps({"v0i": [0, 0, 0], "vi0": [0, 0, 0], "vij": [[-2, 0, 0], [0, -2, 0], [0, 0, -2]]}))
    assert run("two", "--omega", "1", "--beta-u", "1", "--init", f"file:{f}")[0] == 2


def test_two_large_acceleration_guard():
    assert run("two", "--omega", "1", "--beta-u", "3", "--init", "singlet")[0] == 2
    assert run("two", "--omega", "1", "--beta-u", "3", "--full", "--init", "singlet", "--t-max", "0")[0] == 0


def test_numerical_failure_exit_code():
    # lambda = 10 is beyond the reach of the default extrapolation ladder
    assert run("correlations", "--lambda", "10", "--beta-u", "1", "--numeric")[0] == 3


def test_sweep_tau_matches_closed_form():
    code, out = run("sweep", "--kind", "asymptotic", "--param", "tau", "--start", "-3", "--stop", "1",
                    "--num", "9", "--fixed", "R=1", "--workers", "4")
    assert code == 0
    r = rows(out)
    assert [float(x["tau[1]"]) for x in r] == pytest.approx([-3 + 0.5 * i for i in range(9)])
    for x in r:
        assert x["error"] == ""
        assert float(x["concurrence_numeric[1]"]) == pytest.approx(
            asymptotic_concurrence(float(x["tau[1]"]), 1.0), abs=1e-8)


def test_sweep_R_at_tau_minus_one_only_separable_at_zero():
    _, out = run("sweep", "--kind", "asymptotic", "--param", "R", "--start", "0", "--stop", "1", "--num", "5")
    r = rows(out)
    assert float(r[0]["concurrence_closed[1]"]) == 0.0
    assert all(float(x["concurrence_closed[1]"]) > 0 for x in r[1:])


def test_sweep_single_point_matches_command():
    _, a = run("sweep", "--kind", "rate", "--param", "omega", "--start", "1", "--stop", "1", "--num", "1")
    _, b = run("rate", "--omega", "1", "--beta-u", "1")
    ra, rb = rows(a)[0], rows(b)[0]
    assert all(ra[k] == rb[k] for k in rb)


def test_sweep_reports_row_errors():
    code, out = run("sweep", "--kind", "asymptotic", "--param", "R", "--start", "0.5", "--stop", "1.5", "--num", "3")
    assert code == 0
    r = rows(out)
    assert r[0]["error"] == "" and "PositivityError" in r[2]["error"]


def test_sweep_spec_validation():
    assert run("sweep", "--kind", "rate", "--param", "tau", "--start", "0", "--stop", "1")[0] == 2
    assert run("sweep", "--kind", "rate", "--param", "omega", "--start", "2", "--stop", "1")[0] == 2
    assert run("sweep", "--kind", "rate", "--param", "omega", "--start", "1", "--stop", "2",
               "--fixed", "bogus=1")[0] == 2


def test_output_is_deterministic_and_jsonl():
    args = ("sweep", "--kind", "correlations", "--param", "lambda", "--start", "-2", "--stop", "2",
            "--num", "7", "--workers", "3", "--format", "jsonl")
    assert run(*args)[1] == run(*args)[1]
    recs = [json.loads(line) for line in run(*args)[1].splitlines()]
    assert len(recs) == 7 and recs[0]["lambda[1/time]"] == -2.0


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code, out = run("rate", "--omega", "1", "--beta-u", "1", "--output", "rate.csv")
    assert code == 0 and out == ""
    assert (tmp_path / "rate.csv").read_text().startswith("omega[1/time]")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "unruh_oqs", "rate", "--omega", "1", "--beta-u", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "1,1,0.18524893932519262"
