import json
import subprocess
import sys
from fractions import Fraction

import pytest

from plausible.cli import probability_envelope, render_decimal, run
from plausible.formula import parse
from plausible.plausibility import plausibility


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_prob_die(capsys):
    assert call(capsys, "prob", "s2", "one(s1,s2,s3,s4,s5,s6)") == (0, "1/6\n", "")


@pytest.mark.parametrize(
    "fixture, expected", [("@bertrand.pl", "2/3"), ("@bertrand_naive.pl", "1/2")]
)
def test_prob_bertrand_fixtures(capsys, fixture, expected):
    code, out, _ = call(capsys, "prob", "D22", fixture)
    assert code == 0 and out.strip() == expected


def test_prob_die_fixture_and_disk_file(capsys, tmp_path):
    assert call(capsys, "prob", "s1 | s2", "(s1 | s3 | s5) & @die")[0] == 2
    path = tmp_path / "odd.pl"
    path.write_text("# odd faces of a die\n(s1 | s3 | s5) & one(s1, s2, s3, s4, s5, s6)\n")
    code, out, _ = call(capsys, "prob", "s1 | s2", f"@{path}")
    assert code == 0 and out.strip() == "1/3"
    code, out, _ = call(capsys, "prob", "s2", "@die")
    assert out.strip() == "1/6"


def test_prob_json_envelope(capsys):
    code, out, _ = call(capsys, "prob", "--json", "a", "a | b")
    data = json.loads(out)
    assert code == 0
    assert data == {
        "command": "prob", "query": "a", "premise": "a | b", "favorable": 2, "possible": 3,
        "value": "2/3", "decimal": "0.666667", "digits": 6, "approximate": True,
        "convention_applied": False,
    }
    assert Fraction(data["value"]) == plausibility(parse("a"), parse("a | b"))


def test_prob_unsatisfiable_premise_uses_convention(capsys):
    code, out, _ = call(capsys, "prob", "--json", "a", "b & !b")
    data = json.loads(out)
    assert code == 0 and data["value"] == "1" and data["convention_applied"]


def test_render_decimal():
    assert render_decimal(Fraction(2, 3), 3) == "0.667"
    assert render_decimal(Fraction(1, 8), 2) == "0.12"  # half to even
    assert render_decimal(Fraction(3, 8), 2) == "0.38"
    assert render_decimal(Fraction(1), 0) == "1"
    assert probability_envelope(Fraction(1, 4), 2)["approximate"] is False


def test_count_entails_order(capsys):
    assert call(capsys, "count", "a | b")[1] == "3\n"
    assert call(capsys, "count", "a | b", "--symbols", "a,b,c")[1] == "6\n"
    assert call(capsys, "count", "a | b", "--symbols", "a")[0] == 2
    assert call(capsys, "entails", "a & b", "a")[1] == "true\n"
    assert call(capsys, "entails", "a", "a & b")[1] == "false\n"
    assert call(capsys, "order", "a -> b", "a", "b")[1] == "less\n"


def test_order_unsatisfiable_premise_is_semantic_error(capsys):
    code, _, err = call(capsys, "order", "a & !a", "a", "b")
    assert code == 1 and "a & !a" in err


def test_canon(capsys):
    code, out, _ = call(capsys, "canon", "s2", "@die")
    assert code == 0 and "all checkpoints equal m/n: yes" in out
    code, out, _ = call(capsys, "canon", "--json", "s2", "@die")
    data = json.loads(out)
    assert (data["m"], data["n"], data["value"]) == (1, 6, "1/6")
    assert [c["value"] for c in data["checkpoints"]] == ["1/6"] * 4
    assert call(capsys, "canon", "a", "a | b | c", "--cap", "2")[0] == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["prob", "a & & b", "a"],
        ["prob", "a", "@no-such-file"],
        ["bogus"],
        ["limit", "region_parabolas", "--schedule", "0"],
        ["limit", "region_parabolas", "--schedule", "4,2"],
        ["check", "--provider", "nope"],
        ["carnap", "--individuals", "9", "--granularity", "9", "--query", "x1"],
        ["prob", "--digits", "-1", "a", "a"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2 and err


def test_syntax_error_mentions_token(capsys):
    _, _, err = call(capsys, "prob", "a & & b", "a")
    assert "token 3" in err


def test_check_counting_passes(capsys):
    code, out, _ = call(capsys, "check", "--cases", "10")
    assert code == 0 and out.rstrip().endswith("overall: pass")


def test_check_three_valued_fails_with_chain(capsys):
    code, out, _ = call(capsys, "check", "--provider", "three-valued", "--cases", "10")
    assert code == 1
    assert "chain n=4 [three-valued]: fail" in out
    assert "X = (s1 -> s2) & (s2 -> s3) & (s3 -> s4)" in out


def test_check_json(capsys):
    code, out, _ = call(capsys, "check", "--json", "--provider", "all", "--cases", "5")
    data = json.loads(out)
    assert code == 1 and not data["passed"]
    assert {r["provider"] for r in data["rows"]} == {"counting", "three-valued", "weighted(r1)"}


def test_limit(capsys):
    code, out, _ = call(
        capsys, "limit", "region_parabolas", "--schedule", "10,30", "--reference", "1/4", "--json"
    )
    rows = json.loads(out)["rows"]
    assert code == 0
    assert [r["value"] for r in rows] == ["2/17", "21/101"]
    assert rows[1]["error"] == str(Fraction(1, 4) - Fraction(21, 101))
    code, out, _ = call(capsys, "limit", "region_parabolas", "--schedule", "2")
    assert code == 0 and "0.000000" in out


def test_carnap(capsys):
    base = ["carnap", "--individuals", "2", "--granularity", "3"]
    assert call(capsys, *base, "--query", "h1")[1] == "1/4\n"
    assert call(capsys, *base, "--query", "x2", "--given", "x1")[1] == "7/9\n"
    assert call(capsys, *base, "--query", "x1", "--given", "h2")[1] == "2/3\n"


def test_output_is_byte_identical_across_processes():
    argv = [sys.executable, "-m", "plausible", "check", "--provider", "all", "--cases", "5",
            "--json", "--seed", "3"]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    assert first.returncode == second.returncode == 1
    assert first.stdout == second.stdout and first.stdout
