import json

import pytest

from tstruct.cli import main
from tstruct.jsonio import dumps, loads

REPEATED_LEVEL = {
    "spectrum": {"ring": "Z"},
    "tail": {"kind": "finite", "primes": [2]},
    "window": {"start": 0, "end": 1},
    "levels": [{"kind": "finite", "primes": [2]}, {"kind": "finite", "primes": [2]}],
    "head": {"kind": "finite", "primes": []},
}
Z_STALK = {"minDeg": 0, "ranks": [1], "diffs": []}


@pytest.fixture
def files(tmp_path):
    def write(name, payload):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (loads(out) if out.strip() else None)


def test_check_cousin(files, capsys):
    path = files("f.json", REPEATED_LEVEL)
    code, out = run(capsys, "check-cousin", "-f", path)
    assert code == 0
    assert out["weak"] is False
    assert [1, "(2)", "0"] in out["witnesses"]
    assert out["schema"] == "tstruct/1"


def test_truncate_both_engines(files, capsys):
    f = files("f.json", REPEATED_LEVEL)
    x = files("x.json", Z_STALK)
    code, out = run(capsys, "truncate", "-f", f, "-x", x, "--engine", "both")
    assert code == 0
    assert out["enginesAgree"] is True
    assert out["fg"] == {"lower": False, "upper": False}
    assert out["determinate"] is True
    # byte-identical output on repeated runs
    main(["truncate", "-f", f, "-x", x, "--engine", "both"])
    second = capsys.readouterr().out
    main(["truncate", "-f", f, "-x", x, "--engine", "both"])
    third = capsys.readouterr().out
    assert second == third


def test_census_count_matches_library(files, capsys):
    code, out = run(capsys, "census", "--spectrum", "two-chain", "--window", "0..1",
                    "--count-only")
    assert code == 0 and out["count"] == 5
    code, out = run(capsys, "census", "--spectrum", "two-chain", "--window", "0..1")
    assert len(out["filtrations"]) == 5


def test_member(files, capsys):
    f = files("f.json", REPEATED_LEVEL)
    x = files("x.json", Z_STALK)
    code, out = run(capsys, "member", "-f", f, "-x", x, "--side", "aisle")
    assert code == 0 and out["member"] is False
    code, out = run(capsys, "member", "-f", f, "-x", x, "--side", "coaisle")
    assert code == 0 and out["member"] is False


def test_kashiwara(files, capsys):
    z = files("z.json", {"kind": "finite", "primes": [2]})
    x = files("x.json", Z_STALK)
    code, out = run(capsys, "kashiwara", "--lemma", "1", "-z", z, "-x", x, "-n", "0")
    assert code == 0 and out["conditions"] == [True, True, True]
    code, out = run(capsys, "kashiwara", "--lemma", "2", "-z", z, "-x", x, "-n", "1")
    assert code == 0 and out["conditions"] == [False, False]


def test_cm_and_dual_and_localize(files, capsys):
    code, out = run(capsys, "cm")
    assert code == 0 and out["levels"][0]["kind"] == "cofinite"
    f = files("canon.json", {
        "spectrum": {"ring": "Z"},
        "tail": {"kind": "whole"},
        "window": {"start": 1, "end": 0},
        "levels": [],
        "head": {"kind": "finite", "primes": []},
    })
    code, dual = run(capsys, "dual", "-f", f)
    assert code == 0 and dual == out  # dual of the canonical is the cm filtration
    code, loc = run(capsys, "localize", "-f", f, "--point", "(2)")
    assert code == 0 and loc["spectrum"]["points"] == [{"id": "0"}, {"id": "(2)"}]


def test_cm_check(files, capsys):
    x = files("x.json", Z_STALK)
    code, out = run(capsys, "cm-check", "-x", x)
    assert code == 0 and out["member"] is False
    shifted = files("y.json", {"minDeg": -1, "ranks": [1], "diffs": []})
    code, out = run(capsys, "cm-check", "-x", shifted)
    assert code == 0 and out["member"] is True


def test_verify_suite(files, capsys):
    code, out = run(capsys, "verify", "--suite", "filtration")
    assert code == 0 and out["ok"] is True


def test_usage_errors(files, capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code = main(["check-cousin", "-f", str(bad)])
    assert code == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err
    assert main(["verify", "--suite", "nonsense"]) == 2
    assert main(["census", "--window", "zz"]) == 2
    assert main(["nope"]) == 2


def test_bigint_roundtrip():
    blob = dumps({"n": 2**80}, schema=False)
    assert json.loads(blob)["n"] == str(2**80)
    assert loads(blob)["n"] == 2**80
