import contextlib
import io
import json
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from latticeforms.cli import main
from latticeforms.errors import NotEven, SchemaError
from latticeforms.io import (
    dumps,
    lattice_from_json,
    lattice_to_json,
    parse_lattice_file,
    sublattice_from_json,
    sublattice_to_json,
    table_from_json,
    table_to_json,
    zbasis_from_json,
)
from latticeforms.lattice import sublattice
from latticeforms.theta import theta_coefficients

from conftest import A1, A1H, A2, D4
from golden_cases import CASES, GOLDEN, resolve


def run(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def close(a, b, tol=1e-9, key=None):
    """Structural equality; floats compared with a relative-absolute tolerance.

    Finite-difference residuals divide rounding by h^2, so they only get an absolute check.
    """
    if isinstance(a, dict):
        return isinstance(b, dict) and list(a) == list(b) and all(close(a[k], b[k], tol, k) for k in a)
    if isinstance(a, list):
        return isinstance(b, list) and len(a) == len(b) and all(close(x, y, tol, key) for x, y in zip(a, b))
    if isinstance(a, bool) or isinstance(b, bool):
        return a == b
    if isinstance(a, float) or isinstance(b, float):
        if key is not None and key.endswith("residual"):
            return abs(a - b) <= 1e-7
        return abs(a - b) <= tol * max(1.0, abs(a), abs(b))
    return a == b


# -- formats -------------------------------------------------------------------------


@pytest.mark.parametrize("L", [A1, A2, D4, A1H], ids=["A1", "A2", "D4", "A1H"])
def test_lattice_roundtrip(L):
    doc = json.loads(dumps(lattice_to_json(L)))
    assert lattice_from_json(doc).gram == L.gram


def test_parse_lattice_file_examples(tmp_path):
    p = tmp_path / "l.json"
    p.write_text('{"gram":[[2]]}')
    assert parse_lattice_file(p).gram == ((2,),)
    p.write_text('{"gram":[[2,1],[1,2]]}')
    assert parse_lattice_file(p).signature == (2, 0)
    p.write_text('{"gram":[[1]]}')
    with pytest.raises(NotEven, match=r"gram\[0\]\[0\]"):
        parse_lattice_file(p)
    p.write_text('{"gram":[[2,\n x]]}')
    with pytest.raises(SchemaError, match="line 2 column 2"):
        parse_lattice_file(p)
    p.write_text('{"gram":[[true]]}')
    with pytest.raises(SchemaError, match=r"gram\[0\]\[0\]"):
        parse_lattice_file(p)
    p.write_text('{"matrix":[[2]]}')
    with pytest.raises(SchemaError, match="gram"):
        parse_lattice_file(p)
    with pytest.raises(OSError):
        parse_lattice_file(tmp_path / "missing.json")


def test_sublattice_roundtrip():
    M = sublattice(A2, [[1, 1], [-1, 2]])
    doc = json.loads(dumps(sublattice_to_json(M)))
    assert doc["basis"] == [[1, -1], [1, 2]]
    assert sublattice_from_json(A2, doc).basis == M.basis
    with pytest.raises(SchemaError):
        sublattice_from_json(A2, {"basis": [[1, 0]]})


def test_zbasis():
    assert zbasis_from_json({"vectors": [[1, "1/2"]]}) == [[1, Fraction(1, 2)]]
    with pytest.raises(SchemaError):
        zbasis_from_json({"vectors": [[1, "x"]]})


def test_table_roundtrip():
    t = theta_coefficients(A2, 8)
    doc = json.loads(dumps(table_to_json(t)))
    back = table_from_json(doc, A2)
    assert back.entries == t.entries
    z = table_from_json({"elementary_divisors": [2], "max_norm": "1", "entries": [
        {"coset": [1], "n": "1/4", "re": 0.5, "im": -1.0}]}, A1)
    assert z((1,), Fraction(1, 4)) == 0.5 - 1j
    assert json.loads(dumps(table_to_json(z)))["entries"][-1] == {"coset": [1], "n": "1/4", "re": 0.5, "im": -1.0}


def test_table_schema_errors():
    base = {"elementary_divisors": [2], "max_norm": "1", "entries": []}
    with pytest.raises(SchemaError, match="elementary_divisors"):
        table_from_json(base, A2)
    with pytest.raises(SchemaError, match="max_norm"):
        table_from_json({"elementary_divisors": [2], "entries": []})
    with pytest.raises(SchemaError, match=r"entries\[0\]"):
        table_from_json(dict(base, entries=[{"coset": [0], "n": "0"}]))
    with pytest.raises(SchemaError, match=r"entries\[0\].n"):
        table_from_json(dict(base, entries=[{"coset": [0], "n": "zero", "value": 1}]))


# -- dispatch ----------------------------------------------------------------------------


def test_spec_examples():
    code, out = run(resolve(["lattice-info", "a1.json"]))
    assert code == 0
    assert out == '{"rank":1,"signature":[1,0],"det":2,"level":4,"disc_order":2,"sig_mod8":1}\n'
    code, out = run(resolve(["weilrep", "a1.json", "--gen", "S"]))
    R = np.array([[complex(*z) for z in row] for row in json.loads(out)["matrix"]])
    want = np.exp(-2j * np.pi / 8) / np.sqrt(2) * np.array([[1, 1], [1, -1]])
    assert np.allclose(R, want, atol=1e-12)
    code, out = run(resolve(["split-represent", "a1_plus_h.json", "--coset", "1,0,0", "--n", "1/4"]))
    assert json.loads(out) == {"vector": ["1/2", "0", "1"], "primitive": True, "q": "1/4"}


def test_domain_errors(tmp_path):
    p = tmp_path / "odd.json"
    p.write_text('{"gram":[[1]]}')
    code, out = run(["lattice-info", str(p)])
    assert code == 1 and json.loads(out)["error"] == "NotEven"
    code, out = run(["lattice-info", str(tmp_path / "none.json")])
    assert code == 1 and json.loads(out)["error"] == "IoError"
    code, out = run(resolve(["eisenstein", "a1.json", "--coset", "1", "--weight", "1/2", "--s", "2",
                             "--tau", "0,1", "--cutoff", "3"]))
    assert code == 1 and json.loads(out)["error"] == "NotIsotropic"


@pytest.mark.parametrize(
    "argv",
    [["frobnicate"], [], ["theta", "x.json"], ["weilrep", "x.json", "--gen", "Q"], ["disc"]],
    ids=["unknown", "empty", "missing-bound", "bad-choice", "missing-file"],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    captured = capsys.readouterr()
    assert captured.out == "" and captured.err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "latticeforms", "frobnicate"], capture_output=True, text=True)
    assert proc.returncode == 2 and "invalid choice" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "latticeforms", *resolve(["lattice-info", "a1.json"])],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["det"] == 2


# -- golden files -------------------------------------------------------------------------


def test_every_subcommand_covered():
    covered = {argv[0] for argv in CASES.values()}
    assert covered == {"lattice-info", "disc", "weilrep", "theta", "siegel-theta", "arrows",
                       "eisenstein", "lseries", "split-represent"}
    for cmd in covered - {"lseries"}:
        files = {argv[1] for argv in CASES.values() if argv[0] == cmd}
        assert files == {"a1.json", "a1_plus_h.json"}, cmd


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    expected = json.loads((GOLDEN / f"{name}.json").read_text())
    assert expected["argv"] == CASES[name]
    code, out = run(resolve(CASES[name]))
    assert code == expected["exit"]
    assert close(json.loads(out), expected["stdout"]), out
    # emitted JSON re-parses and re-runs are byte-identical
    assert run(resolve(CASES[name])) == (code, out)
