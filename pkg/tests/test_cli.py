import io
import json
import os
import subprocess
import sys

import pytest

from tracereason import fixture_path, parse_model
from tracereason.cli import main

SPEC = str(fixture_path("ecas.tarski"))
MODEL = str(fixture_path("ecas.trace"))


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def repaired(tmp_path):
    text = fixture_path("ecas.trace").read_text(encoding="utf-8")
    lines = [line for line in text.splitlines() if line.strip() != "trace requires (r60 -> r59)"]
    assert len(lines) == len(text.splitlines()) - 1
    p = tmp_path / "fixed.trace"
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(p)


def test_check_finds_violation():
    code, out, err = run("check", "--spec", SPEC, "--model", MODEL)
    assert code == 1
    assert "a=r60, b=r59" in out and err == ""


def test_check_after_repair(repaired):
    code, out, _ = run("check", "--spec", SPEC, "--model", repaired)
    assert code == 0 and "violations (0)" in out


def test_missing_spec():
    code, out, err = run("check", "--spec", "missing.tarski", "--model", MODEL)
    assert code == 2 and "missing.tarski" in err and out == ""


def test_usage_errors():
    assert run("check", "--spec", SPEC)[0] == 2
    assert run("frobnicate")[0] == 2
    assert run()[0] == 2


def test_parse_errors_exit_2(tmp_path):
    bad = tmp_path / "bad.tarski"
    bad.write_text("sig R {", encoding="utf-8")
    code, _, err = run("validate", "--spec", str(bad))
    assert code == 2 and "unterminated signature block" in err and "bad.tarski:1:" in err


def test_type_errors_exit_2(tmp_path):
    m = tmp_path / "m.trace"
    m.write_text("model M\nlocation x : Artifact\n", encoding="utf-8")
    code, _, err = run("check", "--spec", SPEC, "--model", str(m))
    assert code == 2 and "AbstractInstantiation" in err


def test_validate():
    code, out, _ = run("validate", "--spec", SPEC, "--model", MODEL)
    assert code == 0 and "9 signatures" in out and "well-typed" in out


@pytest.mark.parametrize("fmt", ["json", "dot"])
def test_machine_formats_are_exact(fmt):
    from tracereason import analyze, build_hierarchy, load_spec
    from tracereason.report import RenderOptions, render_report
    core = load_spec(open(SPEC).read())
    model = parse_model(open(MODEL).read())
    expected = render_report(analyze(model, core, build_hierarchy(core)), model, RenderOptions(fmt))
    code, out, _ = run("export", "--spec", SPEC, "--model", MODEL, "--format", fmt)
    assert code == 1 and out == expected
    assert run("export", "--spec", SPEC, "--model", MODEL, "--format", fmt)[1] == out


def test_export_to_file(tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run("export", "--spec", SPEC, "--model", MODEL, "--output", str(target))
    assert code == 1 and out == ""
    assert json.loads(target.read_text())["stats"]["violations"] == 1


def test_explain():
    code, out, _ = run("explain", "--spec", SPEC, "--model", MODEL)
    assert code == 1 and out.count("inconsistency:") == 1
    for t in ("refines(r60,r11)", "requires(r11,r97)", "contains(r97,r98)", "conflicts(r98,r59)"):
        assert t in out


def test_explain_consistent(repaired):
    assert run("explain", "--spec", SPEC, "--model", repaired)[:2] == (0, "no inconsistencies\n")


def test_infer_accept_all(tmp_path):
    target = tmp_path / "merged.trace"
    code, out, err = run("infer", "--spec", SPEC, "--model", MODEL, "--accept-all", "--output", str(target))
    assert code == 1 and "inferred traces (9)" in out
    merged = parse_model(target.read_text())
    assert len(merged.tuples) == 16
    assert sum(t.provenance == "accepted" for t in merged.tuples) == 9
    # analysing the merged model derives nothing new
    code, out, _ = run("check", "--spec", SPEC, "--model", str(target), "--format", "json")
    assert json.loads(out)["stats"] == {"assigned": 16, "inferred": 0, "violations": 1}


def test_infer_accept_all_needs_output():
    assert run("infer", "--spec", SPEC, "--model", MODEL, "--accept-all")[0] == 2


def test_accept_single(tmp_path, repaired):
    target = tmp_path / "a.json"
    code, _, err = run("accept", "--spec", SPEC, "--model", repaired, "--trace", "satisfies(i14,r11)",
                       "--output", str(target))
    assert code == 0 and "accepted 1" in err
    doc = json.loads(target.read_text())
    assert {"relation": "satisfies", "source": "i14", "target": "r11", "provenance": "accepted"} in doc["tuples"]
    code, _, err = run("accept", "--spec", SPEC, "--model", repaired, "--trace", "requires(r11,r60)",
                       "--output", str(target))
    assert code == 2 and "not in the inferred set" in err


def test_suggest():
    code, out, _ = run("suggest", "types", "--spec", SPEC, "--model", MODEL, "--location", "i14")
    assert code == 0 and out.split() == ["conflicts", "contains", "equals", "refines", "requires", "satisfies"]
    code, out, _ = run("suggest", "targets", "--spec", SPEC, "--model", MODEL, "--location", "i14",
                       "--relation", "satisfies")
    assert out.split() == ["r11", "r59", "r60", "r97", "r98"]
    assert run("suggest", "targets", "--spec", SPEC, "--model", MODEL, "--location", "r11",
               "--relation", "satisfies")[0] == 2
    assert run("suggest", "types", "--spec", SPEC, "--model", MODEL, "--location", "zz")[0] == 2


def test_slice_flag():
    code, out, _ = run("check", "--spec", SPEC, "--model", MODEL, "--slice", "i72")
    assert code == 1 and "inferred traces (2)" in out
    assert run("check", "--spec", SPEC, "--model", MODEL, "--slice", "zz")[0] == 2


def test_reconfiguration_with_new_spec(tmp_path):
    spec = tmp_path / "narrow.tarski"
    spec.write_text("abstract sig Artifact { refines: set Artifact }\nsig Requirement extends Artifact {}\n",
                    encoding="utf-8")
    code, _, err = run("check", "--spec", str(spec), "--model", MODEL)
    assert code == 2 and "UnknownSig" in err


def test_module_entry_point_and_color_env(tmp_path):
    env = dict(os.environ, TRACEREASON_COLOR="never", TRACEREASON_JIT="0")
    p = subprocess.run([sys.executable, "-m", "tracereason", "check", "--spec", SPEC, "--model", MODEL],
                       capture_output=True, text=True, env=env)
    assert p.returncode == 1 and "\x1b[" not in p.stdout
