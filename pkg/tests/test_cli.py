import json
import subprocess
import sys
from fractions import Fraction

import pytest

from qflags import cli, verify
from qflags.flag import flag_from_perm, standard_flag
from qflags.gfq import field_new
from qflags.kernel import GramMatrix
from qflags.perm import Permutation
from qflags.serialize import biflag_to_json, flag_to_json, read_gram_csv
from qflags.biflag import biflag_from_window, biflag_standard
from qflags.flag import Flag
from qflags.linalg import Subspace


def _run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_n3_q2(capsys):
    code, out, err = _run(capsys, "verify", "--n", "3", "--q", "2")
    assert code == 0
    rep = json.loads(out)
    assert rep["flag_count"] == 21 and rep["gram_rank"] == 8 and rep["steinberg_dim"] == 8
    assert rep["s"] == "8/21" and rep["is_psd"] is True and rep["b_invariant_dim"] == 1
    assert rep["timings"] is None
    assert all(c["pass"] for c in rep["checks"]) and len(rep["checks"]) == 14
    assert "[PASS] gram_psd" in err


def test_verify_is_byte_stable(capsys, tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        assert cli.run(["verify", "--n", "2", "--q", "3", "--out", str(tmp_path / name)]) == 0
        outs.append((tmp_path / name).read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1]


def test_verify_timings(capsys):
    code, out, _ = _run(capsys, "verify", "--n", "2", "--q", "2", "--timings")
    assert code == 0 and set(json.loads(out)["timings"]) >= {"gram", "psd"}


def test_injected_fault_exits_2(capsys, monkeypatch):
    real = verify.gram_matrix

    def corrupted(flags, full=False):
        g = real(flags, full)
        rows = [list(r) for r in g.entries]
        rows[0][1] = rows[1][0] = Fraction(5)
        return GramMatrix(tuple(map(tuple, rows)), g.labels)

    monkeypatch.setattr(verify, "gram_matrix", corrupted)
    code, out, err = _run(capsys, "verify", "--n", "3", "--q", "2")
    assert code == 2
    failed = {c["name"] for c in json.loads(out)["checks"] if not c["pass"]}
    assert "gram_psd" in failed and "[FAIL]" in err


def test_budget_errors_exit_1(capsys, monkeypatch):
    code, _, err = _run(capsys, "verify", "--n", "6", "--q", "2")
    assert code == 1 and "budget" in err
    code, _, _ = _run(capsys, "flags", "--n", "3", "--q", "2", "--budget", "20")
    assert code == 1
    monkeypatch.setenv("STEINBERG_BUDGET", "10")
    code, _, _ = _run(capsys, "flags", "--n", "3", "--q", "2")
    assert code == 1
    code, _, _ = _run(capsys, "flags", "--n", "3", "--q", "2", "--budget", "21")
    assert code == 0


def test_usage_errors_exit_1(capsys):
    assert _run(capsys, "verify", "--n", "3")[0] == 1
    assert _run(capsys, "nonsense")[0] == 1
    assert _run(capsys, "flags", "--n", "2", "--q", "6")[0] == 1
    assert _run(capsys, "flags", "--n", "0", "--q", "2")[0] == 1


def test_flags_and_cells(capsys):
    code, out, _ = _run(capsys, "flags", "--n", "3", "--q", "3")
    assert code == 0 and json.loads(out)["flag_count"] == 52
    code, out, _ = _run(capsys, "cells", "--n", "2", "--q", "2")
    assert code == 0
    assert out.splitlines() == ["sigma,inversions,size,kappa_value", '"(1,2)",0,1,1', '"(2,1)",1,2,-1/2']
    code, out, _ = _run(capsys, "cells", "--n", "3", "--q", "3", "--format", "json")
    sizes = {c["sigma"]: c["size"] for c in json.loads(out)["cells"]}
    assert sizes["(3,2,1)"] == 27 and sum(sizes.values()) == 52


def test_flags_csv_output(capsys, tmp_path):
    path = tmp_path / "flags.csv"
    assert cli.run(["flags", "--n", "2", "--q", "2", "--out", str(path)]) == 0
    assert len(path.read_text().splitlines()) == 4


def test_gram_csv(capsys, tmp_path):
    path = tmp_path / "g.csv"
    assert cli.run(["gram", "--n", "2", "--q", "2", "--out", str(path)]) == 0
    h = Fraction(-1, 2)
    with open(path) as fh:
        assert read_gram_csv(fh) == [[1, h, h], [h, 1, h], [h, h, 1]]


def test_kernel_commands(capsys, tmp_path):
    spec = field_new(2)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(flag_to_json(standard_flag(3, spec))))
    b.write_text(json.dumps(flag_to_json(flag_from_perm(Permutation((3, 2, 1)), spec))))
    code, out, _ = _run(capsys, "kernel", "--flag-a", str(a), "--flag-b", str(b))
    assert code == 0 and json.loads(out) == {"k": 3, "K": "-1/8"}

    line = Flag.from_subspaces(spec, 2, [Subspace.span(spec, 2, [(0, 1)])])
    a.write_text(json.dumps(biflag_to_json(biflag_standard(spec))))
    b.write_text(json.dumps(biflag_to_json(biflag_from_window(-1, 1, line))))
    code, out, _ = _run(capsys, "biflag", "kernel", "--a", str(a), "--b", str(b))
    assert code == 0 and json.loads(out) == {"k": 1, "K": "-1/2"}

    assert _run(capsys, "kernel", "--flag-a", str(tmp_path / "missing.json"), "--flag-b", str(b))[0] == 1


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "qflags.cli", "cells", "--n", "2", "--q", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and '"(2,1)",1,3,-1/3' in proc.stdout
