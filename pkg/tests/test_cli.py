import csv
import io

import pytest

from friendlycuts.cli import (
    CSV_COLUMNS,
    EXIT_GUARD,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_VERIFY,
    main,
)
from friendlycuts.graph import parse_graph, serialize_graph
from friendlycuts.generators import clique, path


def run(args):
    return main(list(args))


def test_gen_ghtree_verify_roundtrip(tmp_path, capsys):
    gpath = tmp_path / "g.txt"
    tpath = tmp_path / "t.txt"
    assert run(["gen", "--family", "dumbbell", "--n", "4", "--out", str(gpath)]) == EXIT_OK
    assert run(["ghtree", "--in", str(gpath), "--out", str(tpath)]) == EXIT_OK
    assert run(["verify", "--in", str(gpath), "--artifact", str(tpath)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "ok" in out


def test_accelerated_ghtree_cli(tmp_path, capsys):
    gpath = tmp_path / "g.txt"
    tpath = tmp_path / "t.txt"
    assert run(["gen", "--family", "gnp", "--n", "8", "--p", "0.6",
                "--seed", "3", "--out", str(gpath)]) == EXIT_OK
    assert run(["ghtree", "--in", str(gpath), "--algo", "accelerated",
                "--out", str(tpath)]) == EXIT_OK
    assert run(["verify", "--in", str(gpath), "--artifact", str(tpath)]) == EXIT_OK


def test_sparsify_and_verify(tmp_path, capsys):
    gpath = tmp_path / "g.txt"
    spath = tmp_path / "h.txt"
    gpath.write_text(serialize_graph(clique(8)))
    assert run(["sparsify", "--in", str(gpath), "--w", "2",
                "--mode", "iterative", "--out", str(spath)]) == EXIT_OK
    assert run(["verify", "--in", str(gpath), "--artifact", str(spath),
                "--w", "2"]) == EXIT_OK


def test_verify_detects_mismatched_graph(tmp_path, capsys):
    gpath = tmp_path / "g.txt"
    tpath = tmp_path / "t.txt"
    other = tmp_path / "other.txt"
    gpath.write_text(serialize_graph(path(5)))
    other.write_text(serialize_graph(clique(5)))
    assert run(["ghtree", "--in", str(gpath), "--out", str(tpath)]) == EXIT_OK
    assert run(["verify", "--in", str(other), "--artifact", str(tpath)]) == EXIT_VERIFY
    assert "verification failed" in capsys.readouterr().out


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("this is not a graph\n")
    assert run(["ghtree", "--in", str(bad)]) == EXIT_PARSE
    assert run(["ghtree", "--in", str(tmp_path / "missing.txt")]) == EXIT_PARSE


def test_guard_exit_code(tmp_path, capsys):
    gpath = tmp_path / "g.txt"
    spath = tmp_path / "h.txt"
    gpath.write_text(serialize_graph(clique(25)))
    assert run(["sparsify", "--in", str(gpath), "--w", "2",
                "--out", str(spath)]) == EXIT_OK
    assert run(["verify", "--in", str(gpath), "--artifact", str(spath),
                "--w", "2"]) == EXIT_GUARD


def test_sscut_modes(tmp_path, capsys):
    gpath = tmp_path / "g.txt"
    gpath.write_text(serialize_graph(clique(5)))
    for mode in ("exact", "unfriendly", "accelerated"):
        assert run(["sscut", "--in", str(gpath), "--source", "0",
                    "--mode", mode]) == EXIT_OK
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines == [f"{v} 4" for v in range(1, 5)]


def test_sscut_source_range(tmp_path):
    gpath = tmp_path / "g.txt"
    gpath.write_text(serialize_graph(path(4)))
    assert run(["sscut", "--in", str(gpath), "--source", "9"]) == EXIT_PARSE


def test_terminal_mode_needs_terminals(tmp_path):
    gpath = tmp_path / "g.txt"
    gpath.write_text(serialize_graph(clique(6)))
    assert run(["sparsify", "--in", str(gpath), "--mode", "terminal",
                "--w", "2"]) == EXIT_PARSE


def test_gen_writes_parseable_graph(tmp_path):
    gpath = tmp_path / "g.txt"
    assert run(["gen", "--family", "alt-cycle", "--n", "10", "--scale", "10",
                "--out", str(gpath)]) == EXIT_OK
    g = parse_graph(gpath.read_text())
    assert g.n == 10 and g.edge_count == 10


def test_bench_csv_schema_and_determinism(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    argv = ["bench", "--family", "gnp", "--sizes", "40,80", "--w-grid", "2,4",
            "--seed", "11"]
    assert run(argv + ["--csv", str(out1)]) == EXIT_OK
    assert run(argv + ["--csv", str(out2), "--threads", "2"]) == EXIT_OK
    rows1 = list(csv.DictReader(io.StringIO(out1.read_text())))
    rows2 = list(csv.DictReader(io.StringIO(out2.read_text())))
    assert rows1 and list(rows1[0]) == CSV_COLUMNS
    assert len(rows1) == 4
    for a, b in zip(rows1, rows2):
        for col in CSV_COLUMNS:
            if col != "wall_ms":
                assert a[col] == b[col]


def test_bench_rejects_unknown_family(tmp_path):
    assert run(["bench", "--family", "star", "--sizes", "10",
                "--w-grid", "2"]) == EXIT_PARSE
