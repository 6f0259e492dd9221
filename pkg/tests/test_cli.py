import subprocess
import sys

import pytest

from rglab.cli import main
from rglab.models import Presentation, write_presentation
from rglab.words import enumerate_words


def write_triangle(path, n=2):
    pres = Presentation.make(n, list(enumerate_words(n, 3, "positive")))
    path.write_text(write_presentation(pres))
    return path


def test_sample_writes_presentation(tmp_path, capsys):
    out = tmp_path / "p.txt"
    code = main([
        "sample", "--n", "6", "--k", "6", "--d", "0.4",
        "--positive", "--seed", "3", "--out", str(out),
    ])
    assert code == 0
    assert "relators=" in capsys.readouterr().out
    text = out.read_text()
    assert "gens 6" in text and "rel " in text


def test_sample_stdout_and_determinism(tmp_path, capsys):
    argv = ["sample", "--n", "4", "--k", "3", "--d", "0.5", "--seed", "9"]
    assert main(argv) == 0
    first = capsys.readouterr()
    assert main(argv) == 0
    second = capsys.readouterr()
    assert first.out == second.out
    assert "density_eff=" in first.err


def test_sample_exhausted_space_exits_2(capsys):
    code = main([
        "sample", "--n", "1", "--k", "3", "--d", "0.5", "--count-override", "5",
    ])
    assert code == 2
    assert "SpaceExhausted" in capsys.readouterr().err


def test_certify_full_triangle_exits_0(tmp_path, capsys):
    pres = write_triangle(tmp_path / "t.txt")
    cert = tmp_path / "cert.txt"
    code = main(["certify", "--in", str(pres), "--out", str(cert)])
    assert code == 0
    assert "verdict=PropertyT" in capsys.readouterr().out
    assert cert.read_text().startswith("rglab certificate\n")


def test_certify_stdout_inconclusive_exits_3(tmp_path, capsys):
    empty = tmp_path / "e.txt"
    empty.write_text(write_presentation(Presentation.make(2, [])))
    code = main(["certify", "--in", str(empty)])
    assert code == 3
    out = capsys.readouterr().out
    assert "[VERDICT]\nInconclusive" in out


def test_certify_missing_file_exits_1(tmp_path, capsys):
    code = main(["certify", "--in", str(tmp_path / "nope.txt")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_certify_wrong_length_exits_1(tmp_path, capsys):
    path = tmp_path / "p.txt"
    path.write_text(write_presentation(Presentation.make(2, [(1, 2, 1, 2, 1)])))
    code = main(["certify", "--in", str(path), "--j", "2"])
    assert code == 1
    assert "WrongRelatorLength" in capsys.readouterr().err


def test_certify_insufficient_positive_exits_4(tmp_path, capsys):
    path = tmp_path / "p.txt"
    # one positive relator, no provenance; a dprime target needs far more
    path.write_text(
        write_presentation(Presentation.make(6, [(1, 2, 3, 4, 5, 6), (1, -2, 1, -2, 1, -2)]))
    )
    code = main(["certify", "--in", str(path), "--j", "2", "--dprime", "0.35"])
    assert code == 4
    assert "InsufficientPositiveRelators" in capsys.readouterr().err


def test_certify_reads_stdin(tmp_path, capsys, monkeypatch):
    import io
    pres = Presentation.make(2, list(enumerate_words(2, 3, "positive")))
    monkeypatch.setattr("sys.stdin", io.StringIO(write_presentation(pres)))
    assert main(["certify", "--in", "-"]) == 0
    assert "PropertyT" in capsys.readouterr().out


def test_fold_wjplus_prints_index(capsys):
    assert main(["fold", "--n", "2", "--wjplus", "--j", "2"]) == 0
    captured = capsys.readouterr()
    assert "index=2" in captured.out
    assert captured.out.startswith("base 0\n")


def test_fold_generators_infinite_index(tmp_path, capsys):
    gens = tmp_path / "g.txt"
    gens.write_text("# commutator\n1 2 -1 -2\n")
    assert main(["fold", "--n", "2", "--generators", str(gens)]) == 0
    assert "index=inf" in capsys.readouterr().out


def test_fold_flag_validation(capsys):
    assert main(["fold", "--n", "2"]) == 1
    assert main(["fold", "--n", "2", "--wjplus"]) == 1  # missing --j
    capsys.readouterr()


def test_lemma_audit_cli(capsys):
    assert main(["lemma-audit", "--n", "2", "--j", "2", "--max-len", "4"]) == 0
    assert "all pass" in capsys.readouterr().out


def test_spectrum_cli(tmp_path, capsys):
    pres = write_triangle(tmp_path / "t.txt")
    out = tmp_path / "eigs.csv"
    code = main(["spectrum", "--in", str(pres), "--out", str(out)])
    assert code == 0
    assert capsys.readouterr().out.startswith("certified lambda1=")
    assert out.read_text().startswith("index,eigenvalue\n")


def test_experiment_cli_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = [
        "experiment", "--model", "pos6", "--n", "8", "--d", "0.4",
        "--j", "2", "--dprime", "0.35", "--trials", "3", "--seed", "12",
    ]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "rate n=8" in capsys.readouterr().err
    lines = a.read_text().strip().split("\n")
    assert len(lines) == 4


def test_experiment_zero_trials_header_only(capsys):
    code = main([
        "experiment", "--model", "pos3", "--n", "4", "--d", "0.4",
        "--trials", "0", "--seed", "1",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("trial,n,k,j,d,")
    assert out.count("\n") == 1


def test_experiment_requires_seed(capsys):
    code = main([
        "experiment", "--model", "pos3", "--n", "4", "--d", "0.4",
        "--trials", "1",
    ])
    assert code == 1
    capsys.readouterr()


def test_experiment_rejects_mid_dprime(capsys):
    code = main([
        "experiment", "--model", "pos6", "--n", "8", "--d", "0.4",
        "--j", "2", "--dprime", "mid", "--trials", "1", "--seed", "1",
    ])
    assert code == 1
    assert "numeric" in capsys.readouterr().err


def test_usage_errors_exit_1(capsys):
    assert main([]) == 1
    assert main(["bogus"]) == 1
    assert main(["sample", "--n", "2"]) == 1  # missing required flags
    assert main(["sample", "--n", "2", "--k", "3", "--d", "0.4", "--what"]) == 1
    capsys.readouterr()


def test_fraction_density_argument(tmp_path, capsys):
    out = tmp_path / "p.txt"
    code = main([
        "sample", "--n", "2", "--k", "3", "--d", "1/3", "--out", str(out),
    ])
    assert code == 0
    assert "relators=3" in capsys.readouterr().out


def test_module_entry_point_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "rglab", "fold", "--n", "2", "--wjplus", "--j", "3"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert "index=3" in proc.stdout
