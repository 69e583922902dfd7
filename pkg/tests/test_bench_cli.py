import csv
import io

import numpy as np
import pytest

from pslr.bench import (
    COLUMNS,
    BenchConfig,
    emit_spectrum,
    rows_to_csv,
    rows_to_markdown,
    run_bench,
)
from pslr.cli import main, parse_int_list
from pslr.errors import ConfigError, MatrixIOError
from pslr.krylov import as_operator
from pslr.mmio import mm_read, mm_write
from pslr.sparse import diagonal_matrix, identity

NON_TIMING = [c for c in COLUMNS if c not in ("o-t", "p-t", "i-t", "t-t")]


@pytest.mark.parametrize(
    "kw",
    [
        dict(problem="example1", method="gmres", x0="zero"),
        dict(problem="banded3", method="cg", x0="zero"),
        dict(problem="banded3", method="pcg_ic0", x0="zero"),
        dict(problem="banded5", method="adi", x0="zero"),
        dict(problem="tridiag_nonsym", method="jacobi_gmres", x0="zero"),
        dict(problem="tridiag_nonsym", method="pinv", x0="pre"),
        dict(problem="random_saddle", method="pslr_gmres", x0="random", n=40, p=20),
        dict(problem="example1", method="pslr_gmres", x0="pre", pslr_side="right"),
    ],
)
def test_run_bench_rows(kw):
    res = run_bench(BenchConfig(**kw))
    assert list(res.row) == list(COLUMNS)
    assert res.report.converged
    assert float(res.row["error"]) == pytest.approx(res.report.relative_residual, rel=1e-6)
    assert float(res.row["true_error"]) <= 1e-5


def test_reorder_returns_original_ordering():
    base = run_bench(BenchConfig(problem="random_saddle", method="gmres", x0="zero", n=30, p=10, tol=1e-10))
    re = run_bench(
        BenchConfig(problem="random_saddle", method="gmres", x0="zero", n=30, p=10, tol=1e-10, reorder=True)
    )
    np.testing.assert_allclose(re.x, base.x, atol=1e-7)
    assert float(re.row["o-t"]) > 0.0


@pytest.mark.parametrize(
    "kw",
    [
        dict(method="cg", x0="zero"),  # assembled saddle matrix is not symmetric
        dict(method="gmres", x0="pre"),
        dict(m=6),
        dict(tol=0.0),
        dict(problem="nope"),
        dict(pslr_side="left"),
        dict(problem="mm_file", path=None, method="gmres", x0="zero"),
    ],
)
def test_invalid_configs(kw):
    with pytest.raises(ConfigError):
        run_bench(BenchConfig(**kw))


def test_missing_file():
    with pytest.raises(MatrixIOError):
        run_bench(BenchConfig(problem="mm_file", path="/nonexistent.mtx", method="gmres", x0="zero"))


def test_large_m_needs_flag():
    res = run_bench(BenchConfig(problem="example1", m=7, allow_large_m=True))
    assert res.row["m"] == 7


def test_failure_markers():
    f = run_bench(BenchConfig(problem="banded3", method="gmres", x0="zero", maxit=3))
    assert f.row["n-iter"] == "F" and f.row["status"] == "MaxIterations"
    dash = run_bench(BenchConfig(problem="banded3", method="adi", x0="zero", maxit=3000, tol=1e-300))
    assert dash.row["n-iter"] == "-"


def test_mm_file_problem(tmp_path):
    path = tmp_path / "a.mtx"
    mm_write(path, diagonal_matrix(np.arange(1.0, 11.0)))
    res = run_bench(BenchConfig(problem="mm_file", path=str(path), method="cg", x0="zero"))
    assert res.report.converged
    res = run_bench(BenchConfig(problem="mm_saddle", path=str(path), p=4, m=3, r_k=4))
    assert res.report.converged


def test_csv_and_markdown():
    rows = [run_bench(BenchConfig(problem="banded3", method="gmres", x0="zero")).row]
    parsed = list(csv.DictReader(io.StringIO(rows_to_csv(rows))))
    assert list(parsed[0]) == list(COLUMNS)
    assert "o-t" not in rows_to_csv(rows, timings=False).splitlines()[0]
    md = rows_to_markdown(rows).splitlines()
    assert md[0].startswith("| problem") and md[1].startswith("|---")


def test_emit_spectrum(tmp_path):
    out = tmp_path / "s.csv"
    emit_spectrum(identity(3), out)
    assert out.read_text().splitlines() == ["re,im", "1.0,0.0", "1.0,0.0", "1.0,0.0"]
    emit_spectrum(as_operator(np.diag([3.0, 1.0, 2.0])), out)
    assert out.read_text().splitlines()[1:] == ["1.0,0.0", "2.0,0.0", "3.0,0.0"]
    with pytest.raises(ConfigError):
        emit_spectrum(identity(5), out, cap=4)


@pytest.mark.parametrize(
    "text, expected", [("3", [3]), ("0..5", [0, 1, 2, 3, 4, 5]), ("1,3..4", [1, 3, 4])]
)
def test_parse_int_list(text, expected):
    assert parse_int_list(text) == expected


def test_cli_solve_example1(capsys):
    code = main(["solve", "--problem", "example1", "--method", "pslr_gmres", "--m", "5", "--rk", "15", "--x0", "pre"])
    out = capsys.readouterr().out
    assert code == 0
    n_iter = int(next(l for l in out.splitlines() if l.startswith("n-iter:")).split(":")[1])
    assert 8 <= n_iter <= 14


def test_cli_gen(tmp_path):
    assert main(["gen", "--problem", "example1", "--out", str(tmp_path)]) == 0
    for name in ("ata.mtx", "b.mtx", "c.mtx"):
        assert (tmp_path / name).is_file()
    assert mm_read(tmp_path / "ata.mtx").shape == (128, 128)


def test_cli_bench_sweep(tmp_path):
    out, md = tmp_path / "t.csv", tmp_path / "t.md"
    code = main(["bench", "--problem", "example1", "--method", "pslr_gmres", "--m", "0..5", "--rk", "15",
                 "--out", str(out), "--md", str(md)])
    assert code in (0, 2)
    rows = list(csv.DictReader(out.open()))
    assert [r["m"] for r in rows] == ["0", "1", "2", "3", "4", "5"]
    assert md.read_text().count("\n") == 8


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["solve", "--problem", "banded3", "--method", "gmres", "--x0", "zero", "--maxit", "2"]) == 2
    assert main(["solve", "--problem", "mm_file", "--path", str(tmp_path / "x.mtx"), "--method", "gmres",
                 "--x0", "zero"]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--bogus"])
    assert exc.value.code == 64


def test_cli_deterministic(tmp_path):
    args = ["bench", "--problem", "random_saddle", "--n", "40", "--p", "20", "--method", "pslr_gmres,gmres",
            "--x0", "random", "--seed", "17", "--no-timings"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(args + ["--out", str(a)])
    main(args + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_cli_seed_env(monkeypatch, tmp_path):
    outs = []
    for seed in ("3", "3", "4"):
        monkeypatch.setenv("PSLR_SEED", seed)
        path = tmp_path / f"r{len(outs)}.csv"
        main(["bench", "--problem", "random_saddle", "--n", "30", "--p", "10", "--method", "gmres",
              "--x0", "random", "--no-timings", "--out", str(path)])
        outs.append(path.read_text())
    assert outs[0] == outs[1] != outs[2]


def test_cli_spectrum(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--problem", "random_saddle", "--n", "40", "--p", "20", "--m-norm", "0.8",
                 "--m", "3", "--rk", "5", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "re,im" and len(lines) == 21
