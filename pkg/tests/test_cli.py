import csv
import io
import json

import numpy as np
import pytest

from spincorr.cli import main, parse_ngrid
from spincorr.errors import ConfigError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    *rows, summary = out.rstrip("\n").split("\n")
    return code, list(csv.reader(io.StringIO("\n".join(rows)))), json.loads(summary)


def test_parse_ngrid():
    assert parse_ngrid("4,8,16") == [4, 8, 16]
    assert parse_ngrid("20:800:x2") == [20, 40, 80, 160, 320, 640, 800]
    assert parse_ngrid("30:3000:x10") == [30, 300, 3000]
    for bad in ("8,4", "0,1", "1:10:+2", "a,b", "5:1:x2"):
        with pytest.raises(ConfigError):
            parse_ngrid(bad)


def test_classify_example(capsys):
    code, rows, summary = run(capsys, "classify", "--family", "sw-standard", "--ngrid", "4,8,16")
    assert code == 0
    assert summary["isometric"] is True
    assert summary["mapping_positive"] is False
    assert summary["schema_version"] == 1
    assert rows[0] == ["n", "l", "c_l"]


def test_localize_example(capsys):
    code, rows, summary = run(capsys, "localize", "--family", "berezin", "--r", "0.25", "--f", "exp", "--ngrid", "20:800:x2")
    assert code == 0
    assert summary["verdict"] == "localizes"
    assert rows[0] == ["n", "k_n", "integral", "f_z0", "error"]
    assert len(rows) == 8


def test_edmonds_example(capsys):
    code, rows, summary = run(capsys, "edmonds", "--l", "3", "--r", "0.3333", "--ngrid", "30:3000:x2")
    errors = [float(r[-1]) for r in rows[1:]]
    assert code == 0 and summary["improves"]
    assert all(b < a for a, b in zip(errors, errors[1:]))


@pytest.mark.parametrize(
    "argv",
    [
        ["charnums", "--family", "toeplitz", "--ngrid", "3,5"],
        ["rho", "--family", "berezin", "--n", "8", "--r", "0.25"],
        ["moments", "--family", "berezin", "--ngrid", "20,40,80"],
        ["mu-analytic", "--family", "toeplitz", "--poles", "3", "--ngrid", "50,100,200"],
        ["bound-check", "--family", "sw", "--d", "0", "--nmax", "20"],
        ["quantize-norms", "--family", "berezin", "--dual", "--ngrid", "16,32,64"],
        ["expectation", "--family", "sw", "--ngrid", "50,100,200"],
        ["twisted", "--family", "berezin", "--n", "4", "--fh", "1,0", "--gh", "2,1"],
        ["poisson-diagnostic", "--ngrid", "6,12", "--pair", "1,0,1,1"],
        ["ground-sim", "--state", "flat", "--jgrid", "2,4,8"],
    ],
    ids=lambda a: a[0],
)
def test_every_subcommand_runs(capsys, argv):
    code, rows, summary = run(capsys, *argv)
    assert code == 0
    assert summary["command"] == argv[0]
    assert len(rows) >= 2


def test_out_files_are_deterministic(tmp_path):
    argv = ["--seed", "3", "localize", "--family", "toeplitz", "--f", "pole:3", "--ngrid", "10,20,40"]
    assert main(["--out", str(tmp_path / "a")] + argv) == 0
    assert main(["--out", str(tmp_path / "b")] + argv) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert json.loads((tmp_path / "a.json").read_text())["schema_version"] == 1


def test_exact_cells_use_17_digits(capsys):
    _, rows, _ = run(capsys, "charnums", "--family", "berezin", "--ngrid", "2", "--precision", "exact")
    assert rows[2] == ["2", "1", f"{0.5 ** 0.5:.17g}"]


def test_exit_codes(capsys):
    assert main(["localize", "--ngrid", "8,4"]) == 2
    assert main(["localize", "--r", "3"]) == 2
    assert main(["charnums", "--family", "warp"]) == 2
    assert main(["quantize-norms", "--family", '{"kind": "custom", "table": {"3": [1, 1, 0, 1]}}', "--ngrid", "3"]) == 3
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_negative_verdict_is_still_success(capsys):
    code, _, summary = run(
        capsys, "localize", "--family", '{"kind": "counterexample", "f": "exp"}', "--r", "0.5", "--rule", "centered",
        "--ngrid", "100,200,400",
    )
    assert code == 0
    assert summary["verdict"] == "does-not-localize"
