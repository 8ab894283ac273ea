import json
import subprocess
import sys

import pytest

from autolearn import fixture
from autolearn.cli import main
from autolearn.formats import parse_dfa, parse_kripke


@pytest.fixture
def files(tmp_path):
    def write(name, text=None):
        path = tmp_path / name
        path.write_text(fixture(name) if text is None else text, encoding="utf-8")
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_learn_lstar_writes_outputs(files, tmp_path, capsys):
    out = tmp_path / "out"
    code, stdout, _ = run(capsys, "learn", "--algorithm", "lstar", "--target", files("even0s.dfa"), "--out-dir", str(out))
    assert code == 0
    assert "equivalent to target: yes" in stdout
    report = json.loads((out / "report.json").read_text())
    assert (report["membership"], report["equivalence"], report["bookkeeping"]) == (11, 2, 3)
    assert report["states"] == 3 and report["equivalent"] is True
    assert parse_dfa((out / "hypothesis.dfa").read_text()).n_states == 3
    assert (out / "hypothesis.dot").read_text().startswith("digraph")
    assert "M 00 -> 1" in (out / "trace.log").read_text()


def test_out_dir_from_environment(files, tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("AUTOBENCH_OUT", str(tmp_path / "env"))
    code, _, _ = run(capsys, "learn", "--algorithm", "lstar", "--target", files("even0s.dfa"))
    assert code == 0 and (tmp_path / "env" / "report.json").exists()


def test_trace_flag_echoes_trace(files, tmp_path, capsys):
    code, stdout, _ = run(
        capsys, "learn", "--algorithm", "lstar", "--target", files("even0s.dfa"), "--out-dir", str(tmp_path), "--trace"
    )
    assert code == 0 and stdout.startswith("# table 1")


@pytest.mark.parametrize(
    "algorithm, extra",
    [
        ("id", ["--live-set", "id.live"]),
        ("iid", ["--schedule", "iid.schedule"]),
        ("ids", ["--schedule", "ids_closed.schedule"]),
        ("ids", ["--schedule", "ids_free.schedule", "--mode", "free"]),
    ],
)
def test_learn_id_family(files, tmp_path, capsys, algorithm, extra):
    extra = [files(x) if "." in x else x for x in extra]
    code, stdout, _ = run(
        capsys, "learn", "--algorithm", algorithm, "--target", files("bstar_aa_bstar.dfa"), "--out-dir", str(tmp_path), *extra
    )
    assert code == 0
    assert json.loads((tmp_path / "report.json").read_text())["equivalence"] == 0


def test_learn_ikl_writes_kripke(files, tmp_path, capsys):
    code, _, _ = run(
        capsys, "learn", "--algorithm", "ikl", "--target", files("ikl3.kripke"),
        "--schedule", files("ikl.queue"), "--out-dir", str(tmp_path),
    )
    assert code == 0
    assert parse_kripke((tmp_path / "hypothesis.kripke").read_text()).width == 3
    assert json.loads((tmp_path / "report.json").read_text())["equivalent"] is True


def test_learn_rpni_and_rpni2(files, tmp_path, capsys):
    code, _, _ = run(capsys, "learn", "--algorithm", "rpni", "--samples", files("s26.samples"), "--out-dir", str(tmp_path / "a"))
    assert code == 0
    report = json.loads((tmp_path / "a" / "report.json").read_text())
    assert (report["membership"], report["equivalence"]) == (0, 0)
    code, _, _ = run(
        capsys, "learn", "--algorithm", "rpni2", "--samples", files("s27.samples"),
        "--schedule", files("s27_new.samples"), "--out-dir", str(tmp_path / "b"),
    )
    assert code == 0
    h = parse_dfa((tmp_path / "b" / "hypothesis.dfa").read_text())
    assert not h.accepts("b") and h.accepts("babb")
    assert "split babb" in (tmp_path / "b" / "trace.log").read_text()


def test_inconsistent_sample_exits_2(files, tmp_path, capsys):
    code, _, err = run(capsys, "learn", "--algorithm", "rpni", "--samples", files("bad.samples", "+ a\n- a\n"), "--out-dir", str(tmp_path))
    assert code == 2 and "inconsistent" in err


def test_contradicting_stream_exits_2(files, tmp_path, capsys):
    code, _, _ = run(
        capsys, "learn", "--algorithm", "iid", "--target", files("bstar_aa_bstar.dfa"),
        "--schedule", files("bad.schedule", "+ a\n"), "--out-dir", str(tmp_path),
    )
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["learn", "--algorithm", "id", "--target", "even0s.dfa"],
        ["learn", "--algorithm", "lstar"],
        ["learn", "--algorithm", "lstar", "--target", "missing.dfa"],
        ["learn", "--algorithm", "lstar", "--target", "even0s.dfa", "--mode", "free"],
        ["oracle", "--target", "even0s.dfa", "--max-len", "13"],
    ],
)
def test_usage_errors_exit_1(files, tmp_path, capsys, argv):
    argv = [files(a) if a == "even0s.dfa" else a for a in argv]
    if argv[0] == "learn":
        argv += ["--out-dir", str(tmp_path)]
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("autolearn: error:")


def test_argparse_errors_exit_1():
    for argv in ([], ["learn", "--algorithm", "nope"]):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 1


def test_parse_error_exits_1(files, tmp_path, capsys):
    code, _, err = run(capsys, "learn", "--algorithm", "lstar", "--target", files("bad.dfa", "a b\nq0 1 1 q0\n"), "--out-dir", str(tmp_path))
    assert code == 1 and "line 2" in err


def test_verify(files, capsys):
    code, out, _ = run(capsys, "verify", files("even0s.dfa"), files("even0s.dfa"))
    assert (code, out) == (0, "equivalent\n")
    code, out, _ = run(capsys, "verify", files("even0s.dfa"), files("lstar_h1.dfa"))
    assert (code, out) == (0, "counterexample 00\n")


def test_oracle_lists_words(files, capsys):
    code, out, _ = run(capsys, "oracle", "--target", files("even0s.dfa"), "--max-len", "2")
    assert code == 0
    target = parse_dfa(fixture("even0s.dfa"))
    listed = [line.split(":") for line in out.splitlines()]
    assert [w for w, _ in listed] == ["λ", "0", "1", "00", "01", "10", "11"]
    assert all(target.accepts("" if w == "λ" else w) == (v == "1") for w, v in listed)
    assert listed[0] == ["λ", "0"] and listed[3] == ["00", "1"]


def test_stats_table(files, tmp_path, capsys):
    run(capsys, "learn", "--algorithm", "lstar", "--target", files("even0s.dfa"), "--out-dir", str(tmp_path / "l"))
    run(capsys, "learn", "--algorithm", "rpni", "--samples", files("s26.samples"), "--out-dir", str(tmp_path / "r"))
    code, out, _ = run(capsys, "stats", str(tmp_path / "l" / "report.json"), str(tmp_path / "r" / "report.json"), "--random-batch", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["algorithm", "membership", "bookkeeping", "lexicographical", "MQ", "EQ", "BK"]
    assert lines[2].split() == ["lstar", "Yes", "No", "No", "11", "2", "3"]
    assert lines[3].split() == ["rpni", "No", "No", "Yes", "0", "0", "0"]
    assert any(line.startswith("lstar n=6") for line in lines)


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "autolearn.cli", "oracle", "--target", "/nonexistent", "--max-len", "1"], capture_output=True, text=True)
    assert proc.returncode == 1 and "cannot read" in proc.stderr
