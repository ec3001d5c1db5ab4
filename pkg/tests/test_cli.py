import pathlib
import subprocess
import sys

import pytest

from supercurves.cli import JobError, main, parse_job, parse_result, render, run_job

JOBS = pathlib.Path(__file__).resolve().parent.parent / "jobs"

CURVE_JOB = """
algebra: {odd: [eps, del], even: [t]}
command: dual-curve
payload: {epsilon: eps, delta: del}
"""


def run(tmp_path, text, *args):
    path = tmp_path / "job.yaml"
    path.write_text(text)
    return main([*args, "--input", str(path)])


def test_schema_example_parses():
    job = parse_job(CURVE_JOB)
    assert job.command == "dual-curve"
    assert job.payload == {"tau": "t", "epsilon": "eps", "delta": "del"}


def test_dual_curve_output(tmp_path, capsys):
    assert run(tmp_path, CURVE_JOB, "dual-curve", "--format", "structured") == 0
    doc = parse_result(capsys.readouterr().out)
    assert doc["result"] == {"tau": "t + eps del", "epsilon": "del", "delta": "eps", "involutive": True}


@pytest.mark.parametrize("text,path", [
    ("algebra: {odd: [eps, del]}\ncommand: dual-curve\npayload: {epsilon: 1 + eps, delta: del}\n", "payload"),
    ("algebra: {odd: [eps, del]}\ncommand: dual-curve\npayload: {epsilon: foo, delta: del}\n", "payload.epsilon"),
    ("algebra: {odd: [eps, del]}\ncommand: dual-curve\npayload: {epsilon: 1/0 eps, delta: del}\n",
     "payload.epsilon"),
    ("algebra: {odd: [eps, del]}\ncommand: dual-curve\npayload: {delta: del}\n", "payload.epsilon"),
    ("algebra: {odd: [eps, del]}\ncommand: frobnicate\n", "command"),
    ("algebra: {odd: [eps, del]}\ncommand: dual-curve\npayload: {epsilon: eps, delta: del, x: 1}\n", "payload"),
    ("algebra: {odd: [eps, del], even: [t]}\ncommand: transform-bundle\n"
     "payload: {epsilon: eps, delta: del, one_form: {A: del, B: '1'}}\n", "payload.one_form"),
    ("algebra: [eps\n", ""),
])
def test_parse_errors_are_located(text, path):
    with pytest.raises(JobError) as info:
        parse_job(text)
    assert info.value.path == path


def test_exit_codes(tmp_path, capsys):
    bad = "algebra: {odd: [eps, del]}\ncommand: dual-curve\npayload: {epsilon: 1 + eps, delta: del}\n"
    assert run(tmp_path, bad, "dual-curve") == 2
    assert "parse error" in capsys.readouterr().err
    # a one-form that is not invariant under S is a domain error
    domain = ("algebra: {odd: [eps, del, a, b], even: [t]}\ncommand: transform-bundle\n"
              "payload: {epsilon: eps, delta: del, one_form: {A: del a, B: b}}\n")
    assert run(tmp_path, domain, "transform-bundle") == 1
    assert "error" in capsys.readouterr().err
    assert run(tmp_path, CURVE_JOB, "classify") == 2


def test_text_and_structured_formats(tmp_path, capsys):
    run(tmp_path, CURVE_JOB, "dual-curve")
    text = capsys.readouterr().out
    assert "tau: t + eps del" in text and "involutive: yes" in text
    out = tmp_path / "out.yaml"
    assert main(["dual-curve", "--input", str(tmp_path / "job.yaml"), "--output", str(out),
                 "--format", "structured"]) == 0
    assert parse_result(out.read_text())["result"]["epsilon"] == "del"


def test_space_option(tmp_path, capsys):
    job = "algebra: {odd: [eps, del], even: [t]}\npayload: {epsilon: eps, delta: del}\n"
    assert run(tmp_path, job, "cohomology", "--space", "X", "--format", "structured") == 0
    doc = parse_result(capsys.readouterr().out)
    assert list(doc["result"]) == ["X"]
    assert doc["result"]["X"]["H0"]["graded_dimension"] == "3|3"
    assert doc["result"]["X"]["H1"]["graded_dimension"] == "3|3"
    assert run(tmp_path, CURVE_JOB, "dual-curve", "--space", "X") == 2


def test_check_identities_table(capsys):
    assert main(["check-identities"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].split() == ["check", "result", "detail"]
    assert "FAIL" not in out and "all passed: yes" in out


@pytest.mark.parametrize("job", sorted(JOBS.glob("*.yaml")), ids=lambda p: p.stem)
def test_render_parse_roundtrip(job):
    doc, status = run_job(parse_job(job.read_text()))
    assert status == 0
    assert parse_result(render(doc, "structured")) == doc
    assert render(doc, "text").endswith("\n")


def test_installed_entry_point():
    proc = subprocess.run([sys.executable, "-m", "supercurves.cli", "dual-curve", "--input", "-",
                           "--format", "structured"], input=CURVE_JOB, capture_output=True, text=True)
    assert proc.returncode == 0
    assert parse_result(proc.stdout)["result"]["tau"] == "t + eps del"
