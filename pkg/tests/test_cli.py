"""End-to-end command line behaviour: formats, determinism, exit codes."""

import json

import pytest

from affinechar import cli
from affinechar.cli import main
from affinechar.rootdata import root_system
from affinechar.series import CharSlices

EIGHT_COEFFS = [
    [-1, 0, 0, 0, 0],
    [-2, 0, 0, 0, 1],
    [-2, 0, 0, 1, 0],
    [-3, 0, 0, 1, 1],
    [-3, 0, 1, 0, 0],
    [-2, 1, 0, 0, 0],
    [-3, 1, 0, 0, 1],
    [-3, 1, 0, 1, 0],
]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# -- compute ---------------------------------------------------------------


def test_closed_form_has_exactly_two_terms(capsys):
    code, out, _ = run(capsys, [
        "compute", "--formula", "sl2-closed", "--type", "A", "--rank", "1",
        "--s", "2",
    ])
    assert code == 0
    d = json.loads(out)
    assert len(d["terms"]) == 2
    coeffs = {tuple(t["exps"]): int(t["coeff"]) for t in d["terms"]}
    assert coeffs == {(0, 0): 1, (0, -3): -1}


def test_tower_numerator_top_coefficient(capsys):
    code, out, _ = run(capsys, [
        "compute", "--formula", "sl-first", "--type", "A", "--rank", "2",
        "--s", "0", "--order", "3",
    ])
    assert code == 0
    d = json.loads(out)
    top = [t for t in d["terms"] if t["exps"] == [0, 0, 0]]
    assert len(top) == 1 and top[0]["coeff"] == "1"
    assert d["level"] == "-1"


def test_screened_character_coefficients_are_integers(capsys):
    code, out, _ = run(capsys, [
        "compute", "--formula", "deligne", "--type", "D", "--rank", "4",
        "--weight", "-1", "0", "0", "0", "0", "--order", "2", "--character",
    ])
    assert code == 0
    d = json.loads(out)
    assert all(int(t["coeff"]) == int(t["coeff"]) for t in d["terms"])
    top = [t for t in d["terms"] if t["exps"] == [0, 0, 0, 0, 0]]
    assert top[0]["coeff"] == "1"
    assert all(int(t["coeff"]) > 0 for t in d["terms"])


def test_json_roundtrip_is_byte_stable(capsys):
    code, out, _ = run(capsys, [
        "compute", "--formula", "sl-first", "--type", "A", "--rank", "2",
        "--s", "1", "--order", "3", "--character",
    ])
    assert code == 0
    d = json.loads(out)
    ch = CharSlices.from_json_dict(root_system("A", 2), d)
    assert json.dumps(ch.to_json_dict(), indent=1) + "\n" == out


def test_jobs_do_not_change_the_bytes(capsys):
    base = [
        "compute", "--formula", "sp-a", "--type", "C", "--rank", "2",
        "--s", "1", "--order", "3",
    ]
    _, one, _ = run(capsys, base + ["--jobs", "1"])
    _, four, _ = run(capsys, base + ["--jobs", "4"])
    assert one == four


def test_tsv_and_pretty_formats(capsys):
    code, out, _ = run(capsys, [
        "compute", "--formula", "sl2-closed", "--type", "A", "--rank", "1",
        "--s", "0", "--format", "tsv",
    ])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "k0\tk1\tcoeff"
    assert len(lines) == 3
    code, out, _ = run(capsys, [
        "compute", "--formula", "sl2-closed", "--type", "A", "--rank", "1",
        "--s", "0", "--format", "pretty",
    ])
    assert code == 0
    assert "legend: q = e^(-delta)" in out


# -- qdim ---------------------------------------------------------------------


def test_qdim_formats(capsys):
    base = [
        "qdim", "--formula", "deligne", "--type", "D", "--rank", "4",
        "--weight", "-1", "0", "0", "0", "0", "--order", "2",
    ]
    code, out, _ = run(capsys, base)
    assert code == 0
    d = json.loads(out)
    assert d["qdim"] == ["1", "28", "434"]
    code, out, _ = run(capsys, base + ["--format", "tsv"])
    assert code == 0
    assert out.strip().split("\n") == ["m\tdim", "0\t1", "1\t28", "2\t434"]
    code, out, _ = run(capsys, base + ["--format", "pretty"])
    assert code == 0
    assert out.strip() == "1 + 28 q + 434 q^2"


# -- verify ---------------------------------------------------------------------


def test_verify_passing_checks(capsys):
    code, out, _ = run(capsys, [
        "verify", "sl2-closed", "flip-symmetry", "--order", "3",
        "--format", "pretty",
    ])
    assert code == 0
    assert out.count("pass") == 2 and "FAIL" not in out


def test_verify_json_shape(capsys):
    code, out, _ = run(capsys, [
        "verify", "window-negation", "--omega", "0,0;1,2", "--order", "4",
    ])
    assert code == 0
    d = json.loads(out)
    assert d["ok"] is True
    assert d["checks"][0]["mismatch"] is None


def test_verify_reports_failure_with_exit_one(capsys, monkeypatch):
    def forced(args):
        return {"identity": "forced", "order": 0, "terms": 0,
                "ok": False, "mismatch": "forced mismatch"}

    monkeypatch.setitem(cli.CHECK_FNS, "forced", forced)
    code, out, _ = run(capsys, ["verify", "forced", "--format", "pretty"])
    assert code == 1
    assert "FAIL" in out and "forced mismatch" in out
    # one failure poisons a batch that otherwise passes
    code, out, _ = run(capsys, ["verify", "sl2-closed", "forced"])
    assert code == 1
    assert json.loads(out)["ok"] is False


def test_verify_unknown_check(capsys):
    code, _, err = run(capsys, ["verify", "no-such-check"])
    assert code == 2
    assert "unknown check" in err


# -- list-deligne -----------------------------------------------------------------


def test_list_deligne_default_window(capsys):
    code, out, _ = run(capsys, [
        "list-deligne", "--type", "D", "--rank", "4", "--level", "-1",
    ])
    assert code == 0
    d = json.loads(out)
    assert d["count"] == 8 and d["window"] == 1
    assert [w["coeffs"] for w in d["weights"]] == EIGHT_COEFFS
    assert d["weights"][0]["alpha"] == [1, 2, 1, 1]


def test_list_deligne_wide_window(capsys):
    code, out, _ = run(capsys, [
        "list-deligne", "--type", "D", "--rank", "4", "--level", "-1",
        "--window", "4",
    ])
    assert code == 0
    assert json.loads(out)["count"] == 141


def test_list_deligne_deeper_vacuum(capsys):
    code, out, _ = run(capsys, [
        "list-deligne", "--type", "E", "--rank", "6", "--level", "-3",
        "--window", "0",
    ])
    assert code == 0
    d = json.loads(out)
    assert d["weights"] == [
        {"coeffs": [-3, 0, 0, 0, 0, 0, 0], "alpha": [1, 1, 2, 2, 2, 1]}
    ]


def test_list_deligne_tsv_header(capsys):
    code, out, _ = run(capsys, [
        "list-deligne", "--type", "D", "--rank", "4", "--level", "-1",
        "--format", "tsv",
    ])
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == "m0\tm1\tm2\tm3\tm4\ta1\ta2\ta3\ta4"
    assert len(lines) == 9


def test_list_deligne_guards(capsys):
    code, _, err = run(capsys, [
        "list-deligne", "--type", "D", "--rank", "4", "--level", "0",
    ])
    assert code == 2 and "negative" in err
    code, _, err = run(capsys, [
        "list-deligne", "--type", "A", "--rank", "3", "--level", "-1",
    ])
    assert code == 2 and "types D and E" in err


# -- error paths -------------------------------------------------------------------


def test_precondition_messages(capsys):
    code, _, err = run(capsys, [
        "compute", "--formula", "sl-first", "--type", "A", "--rank", "1",
        "--s", "0",
    ])
    assert code == 2 and "error:" in err
    code, _, err = run(capsys, [
        "compute", "--formula", "sp-b", "--type", "C", "--rank", "2",
        "--weight", "-2", "1", "0",
    ])
    assert code == 2
    code, _, err = run(capsys, [
        "compute", "--formula", "deligne", "--type", "D", "--rank", "4",
        "--weight", "-4", "1", "1", "0", "0",
    ])
    assert code == 2 and "not unique" in err


def test_wide_window_weight_cannot_be_normalized(capsys):
    # the screening passes but the numerator carries weight above the top
    # line, so the character division refuses it
    code, _, err = run(capsys, [
        "verify", "deligne-positivity", "--type", "D", "--rank", "4",
        "--weight", "-4", "3", "0", "0", "0", "--order", "2",
    ])
    assert code == 2 and "negative q-power" in err


def test_argparse_failures_exit_two(capsys):
    with pytest.raises(SystemExit) as e:
        main(["compute", "--formula", "sl-first"])
    assert e.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as e:
        main(["compute", "--formula", "no-such", "--type", "A", "--rank", "2"])
    assert e.value.code == 2
    capsys.readouterr()
    with pytest.raises(SystemExit) as e:
        main([
            "compute", "--formula", "sl-first", "--type", "A", "--rank", "3",
            "--s", "0", "--jobs", "0",
        ])
    assert e.value.code == 2
    capsys.readouterr()


def test_jobs_env_default(monkeypatch):
    monkeypatch.setenv("JOBS", "3")
    par = cli._build_parser()
    args = par.parse_args([
        "compute", "--formula", "sl2-closed", "--type", "A", "--rank", "1",
        "--s", "0",
    ])
    assert args.jobs == 3
    monkeypatch.setenv("JOBS", "many")
    par = cli._build_parser()
    args = par.parse_args([
        "compute", "--formula", "sl2-closed", "--type", "A", "--rank", "1",
        "--s", "0",
    ])
    assert args.jobs == 1
