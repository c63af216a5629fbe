import json

import pytest

from decorat.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_accepts_lemma2(capsys):
    code, out, _ = run_cli(capsys, "check", "lemmas/lemma2.dlp")
    assert code == 0 and out.startswith("accepted")


def test_check_rejects_a_mutant(capsys):
    code, out, _ = run_cli(capsys, "check", "lemma3_impure.dlp", "--json")
    doc = json.loads(out)
    assert code == 1
    assert doc["status"] == "rejected" and doc["error"] == "ImpureContext"


def test_transcript_file(capsys, tmp_path):
    dest = tmp_path / "t.json"
    code, _, _ = run_cli(capsys, "check", "lemma1.dlp", "--transcript", str(dest))
    assert code == 0
    steps = json.loads(dest.read_text())
    assert steps and {"lemma", "step", "rule", "goal_before", "goal_after"} <= set(steps[0])


def test_run_lemma3(capsys):
    code, out, _ = run_cli(capsys, "run", "examples/lemma3.imp", "--store", "x=5,y=0")
    assert code == 0
    assert out.strip() == "Final x=0, y=7"


def test_run_json_and_trace(capsys):
    code, out, _ = run_cli(capsys, "run", "prog5.imp", "--json", "--trace")
    doc = json.loads(out)
    assert doc["outcome"] == "final" and doc["store"] == {"x": 14}
    assert doc["trace"][0]["step"] == 0


def test_trace_lines_are_json(capsys):
    code, out, _ = run_cli(capsys, "run", "catch_local.imp", "--trace")
    lines = out.strip().splitlines()
    for line in lines[:-1]:
        assert set(json.loads(line)) == {"step", "store", "cmd"}
    assert lines[-1].startswith("Final")


def test_run_out_of_fuel(capsys):
    code, out, _ = run_cli(capsys, "run", "diverge.imp", "--fuel", "50")
    assert code == 0 and out.startswith("OutOfFuel")


def test_bad_store(capsys):
    code, _, err = run_cli(capsys, "run", "prog5.imp", "--store", "q=1")
    assert code == 2 and "q" in err


def test_parse(capsys):
    code, out, _ = run_cli(capsys, "parse", "prog6.imp")
    assert code == 0 and json.loads(out)


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.imp"
    bad.write_text("locations x ;\nx := ")
    code, _, err = run_cli(capsys, "parse", str(bad))
    assert code == 2 and "2:" in err


def test_type_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.imp"
    bad.write_text("locations x ;\nwhile (x + 1) do skip")
    code, _, _ = run_cli(capsys, "parse", str(bad))
    assert code == 3


def test_missing_file(capsys):
    code, _, err = run_cli(capsys, "check", "nowhere/nothing.dlp")
    assert code == 2 and "nothing.dlp" in err


def test_translate(capsys):
    code, out, _ = run_cli(capsys, "translate", "prog6.imp", "--json")
    doc = json.loads(out)
    assert doc["term"] == "update(x) o constant(14)"
    assert doc["decoration"] == "{2,0}"


def test_oracle_eq(capsys):
    code, out, _ = run_cli(capsys, "oracle-eq", "examples/prog5.imp", "examples/prog6.imp",
                           "--kind", "ss")
    assert code == 0 and out.strip() == "equivalent"


def test_oracle_eq_counterexample(capsys):
    code, out, _ = run_cli(capsys, "oracle-eq", "prog5.imp", "skip.imp", "--json")
    doc = json.loads(out)
    assert code == 1 and doc["counterexample"]


def test_oracle_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("DECORAT_SEED", "7")
    _, out, _ = run_cli(capsys, "oracle-eq", "prog5.imp", "prog6.imp", "--json")
    assert json.loads(out)["seed"] == 7


def test_lemmas_is_deterministic(capsys):
    first = run_cli(capsys, "lemmas")
    second = run_cli(capsys, "lemmas")
    assert first == second and first[0] == 0
    assert "FAIL" not in first[1]


@pytest.mark.parametrize("argv", [["lemmas", "--json"], ["check", "lemma2.dlp", "--json"],
                                  ["translate", "lemma3.imp", "--json"]])
def test_json_output_is_valid(capsys, argv):
    _, out, _ = run_cli(capsys, *argv)
    json.loads(out)


def test_soundness_report(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "soundness", "--model", "tiny", "--instances", "5",
                           "--report", str(tmp_path), "--json")
    doc = json.loads(out)
    assert set(doc["files"]) == {"json", "csv", "png"}
    assert (tmp_path / "soundness.png").stat().st_size > 0
    assert code == (0 if doc["summary"]["primary_ok"] and doc["summary"]["imp_ok"] else 1)
