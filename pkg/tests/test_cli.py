import sys

import pytest

from rmcover.cli import main


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCli:
    def test_oracle_then_classify_agree(self, tmp_path, capsys):
        sub = tmp_path / "b123.cls"
        code, out, _ = run(
            ["oracle", "--s", "1", "--t", "2", "--m", "3", "--out", str(sub)], capsys
        )
        assert code == 0 and "classes 4" in out

        oracle = tmp_path / "b234.cls"
        code, out, _ = run(
            ["oracle", "--s", "2", "--t", "3", "--m", "4", "--out", str(oracle)],
            capsys,
        )
        assert code == 0 and "classes 5" in out

        result = tmp_path / "b234.pipeline.cls"
        report = tmp_path / "b234.report"
        code, out, _ = run(
            [
                "classify", "run",
                "--s", "2", "--t", "3", "--m", "4",
                "--sub", str(sub),
                "--out", str(result),
                "--report", str(report),
                "--seed", "0",
            ],
            capsys,
        )
        assert code == 0
        assert "classes 5" in out
        text = report.read_text()
        assert "# seed 0" in text and "# config" in text

        from rmcover import load_classification

        assert load_classification(str(result)).n_classes == 5

    def test_classify_replay_is_byte_identical(self, tmp_path, capsys):
        sub = tmp_path / "sub.cls"
        run(["oracle", "--s", "1", "--t", "1", "--m", "2", "--out", str(sub)], capsys)
        args = [
            "classify", "run",
            "--s", "2", "--t", "2", "--m", "3",
            "--sub", str(sub),
            "--seed", "7",
        ]
        out1 = tmp_path / "r1.cls"
        rep1 = tmp_path / "rep1"
        out2 = tmp_path / "r2.cls"
        rep2 = tmp_path / "rep2"
        run(args + ["--out", str(out1), "--report", str(rep1)], capsys)
        run(args + ["--out", str(out2), "--report", str(rep2)], capsys)
        assert out1.read_bytes() == out2.read_bytes()
        # reports differ only in the output-path config digest
        assert rep1.read_text().splitlines()[2:] == rep2.read_text().splitlines()[2:]

    def test_nl_exact(self, tmp_path, capsys):
        fns = tmp_path / "fns.txt"
        fns.write_text("ab+cd\n# comment\nanf:abc\n")
        code, out, _ = run(
            ["nl", "exact", "--k", "1", "--m", "4", "--in", str(fns)], capsys
        )
        assert code == 0
        assert "fn 0 nl 6" in out
        assert "fn 1 nl 2" in out

    def test_nl_probe_report(self, tmp_path, capsys):
        fns = tmp_path / "fns.txt"
        fns.write_text("ab+cd\n")
        code, out, _ = run(
            [
                "nl", "probe",
                "--k", "1", "--m", "4",
                "--limit", "6", "--iter", "200", "--seed", "3",
                "--in", str(fns),
            ],
            capsys,
        )
        assert code == 0
        assert "fn 0 found true best 6" in out
        assert "# seed 3" in out

    def test_nl_scan(self, tmp_path, capsys):
        reps = tmp_path / "reps.cls"
        run(["oracle", "--s", "2", "--t", "3", "--m", "4", "--out", str(reps)], capsys)
        code, out, _ = run(
            [
                "nl", "scan",
                "--k", "1", "--limit", "2", "--reps", str(reps),
                "--iter", "32", "--seed", "1",
            ],
            capsys,
        )
        assert code == 0
        assert "rep 0" in out and "found" in out

    def test_equiv_verdicts(self, tmp_path, capsys):
        sub = tmp_path / "sub.cls"
        run(["oracle", "--s", "1", "--t", "2", "--m", "3", "--out", str(sub)], capsys)
        code, out, _ = run(
            [
                "equiv", "--space", "2,3,4", "--sub", str(sub),
                "--f", "abc", "--g", "abd+acd",
                "--iter", "2048", "--seed", "5",
            ],
            capsys,
        )
        assert code == 0 and "verdict Equiv" in out and "witness" in out
        code, out, _ = run(
            [
                "equiv", "--space", "2,3,4", "--sub", str(sub),
                "--f", "abc", "--g", "ab+cd",
                "--iter", "2048", "--seed", "5",
            ],
            capsys,
        )
        assert code == 0 and "verdict NotEquiv" in out

    def test_radius_bounds(self, tmp_path, capsys):
        table = tmp_path / "radii.txt"
        table.write_text(
            "# known values\n"
            "rho 1 7 56\nrho 2 7 40\nrho 3 7 20\nrho 4 7 8\n"
            "rho 5 7 2\nrho 6 7 1\nrho 7 7 0\n"
            "rho 6 8 2\n"
            "rho_rel 4 6 8 0 26\n"
        )
        code, out, _ = run(["radius", "bounds", "--table", str(table)], capsys)
        assert code == 0
        assert "rho 4 8 20 28 interval" in out

    def test_radius_inconsistency_exits_nonzero(self, tmp_path, capsys):
        table = tmp_path / "bad.txt"
        table.write_text("rho 1 4 6\nrho 1 5 10\n")
        code, _, err = run(["radius", "bounds", "--table", str(table)], capsys)
        assert code == 2 and "error" in err

    def test_invariant_report(self, tmp_path, capsys):
        sub = tmp_path / "sub.cls"
        run(["oracle", "--s", "1", "--t", "2", "--m", "3", "--out", str(sub)], capsys)
        fns = tmp_path / "fns.txt"
        fns.write_text("abc\nabc+abd\n")
        code, out, _ = run(
            [
                "invariant", "--space", "2,3,4",
                "--sub", str(sub), "--in", str(fns),
            ],
            capsys,
        )
        assert code == 0
        assert out.count("J ") == 2 and out.count("Jhat ") == 2

    def test_unknown_subcommand(self, capsys):
        code = main(["frobnicate"])
        _ = capsys.readouterr()
        assert code != 0

    def test_version_flag(self, capsys):
        import rmcover

        code = main(["--version"])
        out = capsys.readouterr().out
        assert code == 0 and rmcover.__version__ in out

    def test_classify_oracle_alias(self, tmp_path, capsys):
        direct = tmp_path / "a.cls"
        alias = tmp_path / "b.cls"
        run(["oracle", "--s", "2", "--t", "2", "--m", "3", "--out", str(direct)], capsys)
        code, out, _ = run(
            ["classify", "oracle", "--s", "2", "--t", "2", "--m", "3", "--out", str(alias)],
            capsys,
        )
        assert code == 0
        assert direct.read_bytes() == alias.read_bytes()

    def test_malformed_input_line_number(self, tmp_path, capsys):
        fns = tmp_path / "fns.txt"
        fns.write_text("ab+cd\nzz!\n")
        code, _, err = run(
            ["nl", "exact", "--k", "1", "--m", "4", "--in", str(fns)], capsys
        )
        assert code == 2
        assert "fns.txt:2" in err

    def test_digest_mismatch_refused(self, tmp_path, capsys):
        sub = tmp_path / "sub.cls"
        run(["oracle", "--s", "1", "--t", "1", "--m", "2", "--out", str(sub)], capsys)
        tampered = sub.read_text().replace("R 1 3 a", "R 1 3 b")
        sub.write_text(tampered)
        code, _, err = run(
            [
                "classify", "run",
                "--s", "2", "--t", "2", "--m", "3",
                "--sub", str(sub), "--out", str(tmp_path / "x.cls"),
            ],
            capsys,
        )
        assert code == 2 and "digest" in err
