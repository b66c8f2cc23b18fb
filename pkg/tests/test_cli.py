import json

import pytest

from e36 import datasets
from e36.certificate import Certificate, RunConfig, canonical_json
from e36.cli import UsageError, export_dataset, main, run_suite


def test_export(tmp_path):
    A = json.loads(export_dataset("A"))
    assert A == datasets.load("A") and len(A) == 5 and len(A[0]) == 9
    assert len(json.loads(export_dataset("lines"))["lines"]) == 15
    assert len(json.loads(export_dataset("operators"))["operators"]) == 9
    export_dataset("ell", str(tmp_path))
    assert (tmp_path / "ell.json").exists()
    with pytest.raises(UsageError):
        export_dataset("nope")


def test_unknown_suite():
    with pytest.raises(UsageError):
        run_suite("nope")
    assert main(["nope"]) == 2


def test_blowup_suite_files(tmp_path, capsys):
    assert main(["blowup", "--out", str(tmp_path)]) == 0
    first = (tmp_path / "blowup.json").read_text()
    assert main(["blowup", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "blowup.json").read_text() == first
    assert json.loads(first)["status"] == "pass"
    assert "seconds" in (tmp_path / "timings.json").read_text()


def test_unwritable(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["blowup", "--out", str(blocker / "sub")]) == 2


def test_subcommands(tmp_path, capsys):
    out = str(tmp_path)
    assert main(["moduli", "check", "--suite", "pluecker", "--samples", "10", "--out", out]) == 0
    assert main(["blowup", "verify", "--suite", "flip", "--samples", "20", "--out", out]) == 0
    assert main(["pf", "verify", "--order", "6", "--out", out]) == 0
    assert main(["series", "check-box", "--ell", "0,0,-1,-1,1,0,0,0,1", "--order", "5", "--out", out]) == 0
    assert main(["series", "check-box", "--ell", "1,0,0,0,0,0,0,0,0", "--order", "5", "--out", out]) == 2
    assert main(["series", "residue", "--order", "3", "--out", out]) == 0
    assert main(["pf", "generate", "--ell", "1", "+4", "--out", out]) == 0
    text = capsys.readouterr().out
    assert '"z_term_sign": -1' in text
    z = tmp_path / "z.json"
    z.write_text('["1/10", "0", "0", "0"]')
    assert main(["pf", "discriminant", "--eval", str(z)]) == 0


def test_certificate_serialization():
    c = Certificate("x", {"a": 1}, {"w": {3, 1}})
    c.finish(True)
    text = canonical_json(c)
    assert json.loads(text)["witnesses"]["w"] == [1, 3]
    assert "runtime" not in text
    assert RunConfig(threads=4).to_json() == RunConfig().to_json()
