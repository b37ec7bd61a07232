import pytest

from ontosim.cli import main

LIN_CD = "0.630930"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def toy_built(toy_files, capsys):
    out = toy_files["dir"] / "toy.idx"
    code, _, _ = run(capsys, "build",
                     "--concepts", f"{toy_files['concepts']}:TOY",
                     "--relations", toy_files["relations"],
                     "--out", out)
    assert code == 0
    return out


class TestBuild:
    def test_counts_and_globals_printed(self, toy_files, capsys):
        out = toy_files["dir"] / "toy.idx"
        code, stdout, _ = run(capsys, "build",
                              "--concepts", f"{toy_files['concepts']}:TOY",
                              "--relations", toy_files["relations"],
                              "--out", out)
        assert code == 0
        assert "concepts 6" in stdout      # 5 from the file + virtual root
        assert "edges 5" in stdout         # 3 is-a + 2 root attachments
        assert "leaves 3" in stdout
        assert "max_depth 3" in stdout
        assert "max_ic 1.09861228867" in stdout
        assert out.exists()

    def test_missing_relations_file_exits_2(self, toy_files, capsys):
        code, _, err = run(capsys, "build",
                           "--concepts", f"{toy_files['concepts']}:TOY",
                           "--relations", toy_files["dir"] / "absent.csv",
                           "--out", toy_files["dir"] / "x.idx")
        assert code == 2
        assert "absent.csv" in err

    def test_cycle_exits_3_naming_cycle(self, toy_files, capsys):
        bad = toy_files["dir"] / "cyclic.csv"
        bad.write_text("child,parent\nA,B\nB,A\n")
        code, _, err = run(capsys, "build",
                           "--concepts", f"{toy_files['concepts']}:TOY",
                           "--relations", bad,
                           "--out", toy_files["dir"] / "x.idx")
        assert code == 3
        assert "cycle" in err and "A" in err and "B" in err

    def test_bad_header_exits_2(self, toy_files, capsys):
        bad = toy_files["dir"] / "bad.csv"
        bad.write_text("identifier,label\nX,x\n")
        code, _, err = run(capsys, "build",
                           "--concepts", f"{bad}:TOY",
                           "--relations", toy_files["relations"],
                           "--out", toy_files["dir"] / "x.idx")
        assert code == 2

    def test_mapping_merge(self, toy_files, capsys):
        other = toy_files["dir"] / "sct.csv"
        other.write_text("id,label\nSCT_1,Alpha (SCT)\nSCT_2,Under\n")
        rel2 = toy_files["dir"] / "sct_rel.csv"
        rel2.write_text("child,parent\nSCT_2,SCT_1\n")
        maps = toy_files["dir"] / "map.csv"
        maps.write_text("left,right\nA,SCT_1\n")
        out = toy_files["dir"] / "merged.idx"
        code, stdout, _ = run(capsys, "build",
                              "--concepts", f"{toy_files['concepts']}:TOY",
                              "--concepts", f"{other}:SCT",
                              "--relations", toy_files["relations"],
                              "--relations", rel2,
                              "--mappings", maps,
                              "--out", out)
        assert code == 0
        assert "concepts 7" in stdout  # 5 + 2 - 1 fused + root


class TestSim:
    def test_lin_pair(self, toy_built, capsys):
        code, stdout, _ = run(capsys, "sim", "--index", toy_built,
                              "--measure", "LIN", "C", "D")
        assert code == 0 and stdout.strip() == LIN_CD

    def test_sokal_identity(self, toy_built, capsys):
        code, stdout, _ = run(capsys, "sim", "--index", toy_built,
                              "--measure", "SOKAL", "C", "C")
        assert code == 0 and stdout.strip() == "1.000000"

    def test_unknown_id_exits_4(self, toy_built, capsys):
        code, _, err = run(capsys, "sim", "--index", toy_built,
                           "--measure", "LIN", "C", "nope")
        assert code == 4 and "nope" in err

    def test_unknown_measure_exits_4(self, toy_built, capsys):
        code, _, err = run(capsys, "sim", "--index", toy_built,
                           "--measure", "FOO", "C", "D")
        assert code == 4 and "FOO" in err


class TestSweep:
    def test_all_universe_row_count(self, toy_built, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code, stdout, _ = run(capsys, "sweep", "--index", toy_built,
                              "--centroid", "C", "--universe", "ALL",
                              "--out", out)
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 6 * 6  # 6 concepts incl. root x 6 measures
        for m in ("LCH", "WUPALMER", "INTRINSIC_RESNIK", "INTRINSIC_LIN",
                  "INTRINSIC_LCH", "SOKAL"):
            assert f"{m} min=" in stdout

    def test_vocabulary_universe_excludes_root(self, toy_built, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code, _, _ = run(capsys, "sweep", "--index", toy_built,
                         "--centroid", "C", "--universe", "ALL:TOY",
                         "--measure", "LIN", "--out", out)
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 5
        assert not any("__root__" in line for line in lines)

    def test_rescale_populates_unit_interval(self, toy_built, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code, _, _ = run(capsys, "sweep", "--index", toy_built,
                         "--centroid", "C", "--universe", "ALL",
                         "--rescale", "--out", out)
        assert code == 0
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        values = [float(r[4]) for r in rows]
        assert all(0.0 <= v <= 1.0 for v in values)

    def test_rerun_byte_identical(self, toy_built, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            code, _, _ = run(capsys, "sweep", "--index", toy_built,
                             "--centroid", "C", "--universe", "ALL",
                             "--rescale", "--out", out)
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_unknown_centroid_exits_4(self, toy_built, tmp_path, capsys):
        code, _, _ = run(capsys, "sweep", "--index", toy_built,
                         "--centroid", "zzz", "--universe", "ALL",
                         "--out", tmp_path / "x.csv")
        assert code == 4


@pytest.fixture
def toy_records(toy_built, tmp_path, capsys):
    out = tmp_path / "records.csv"
    code, _, _ = run(capsys, "sweep", "--index", toy_built,
                     "--centroid", "C", "--universe", "ALL:TOY",
                     "--out", out)
    assert code == 0
    return out


class TestCluster:
    def test_threshold_members(self, toy_records, tmp_path, capsys):
        out = tmp_path / "cluster.csv"
        code, stdout, _ = run(capsys, "cluster", "--records", toy_records,
                              "--measure", "LIN", "--threshold", 0.5,
                              "--out", out)
        assert code == 0 and "3 concepts" in stdout
        lines = out.read_text().splitlines()
        # descending score: C (1), A (0.77), D (0.63); B and E score 0
        assert lines[1].startswith("C,1")
        assert lines[2].startswith("A,0.77")
        assert lines[3].startswith("D,0.63")

    def test_threshold_above_max_is_empty(self, toy_records, tmp_path, capsys):
        out = tmp_path / "cluster.csv"
        code, _, _ = run(capsys, "cluster", "--records", toy_records,
                         "--measure", "LIN", "--threshold", 2.0, "--out", out)
        assert code == 0
        assert out.read_text().splitlines() == ["concept_id,score"]


class TestSample:
    def test_same_seed_identical_files(self, toy_records, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            code, _, _ = run(capsys, "sample", "--records", toy_records,
                             "--measure", "LIN", "--k", 3, "--seed", 7,
                             "--out", out)
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_k_above_count_returns_all(self, toy_records, tmp_path, capsys):
        out = tmp_path / "s.csv"
        code, _, _ = run(capsys, "sample", "--records", toy_records,
                         "--measure", "LIN", "--k", 200, "--out", out)
        assert code == 0
        assert len(out.read_text().splitlines()) == 1 + 5

    def test_requires_single_measure_group(self, toy_records, tmp_path, capsys):
        code, _, err = run(capsys, "sample", "--records", toy_records,
                           "--out", tmp_path / "s.csv")
        assert code == 5  # six measures mixed in one file


REFERENCE_CSV = """concept_id,source,expert_label
C,SMQ,1
D,HLGT,1
E,SSM_ONLY,0
"""


class TestEval:
    def test_single_set_best_f1(self, toy_records, tmp_path, capsys):
        ref = tmp_path / "ref.csv"
        ref.write_text(REFERENCE_CSV)
        code, stdout, _ = run(capsys, "eval", "--records", toy_records,
                              "--reference", ref, "--centroid", "C",
                              "--out", tmp_path / "ev")
        assert code == 0
        assert (tmp_path / "ev_sweep.csv").exists()
        for m in ("INTRINSIC_LIN", "SOKAL", "LCH"):
            assert f"{m} best_f1=1" in stdout

    def test_smq_standard_uses_source_tags(self, toy_records, tmp_path, capsys):
        ref = tmp_path / "ref.csv"
        ref.write_text(REFERENCE_CSV)
        code, stdout, _ = run(capsys, "eval", "--records", toy_records,
                              "--reference", ref, "--centroid", "C",
                              "--standard", "smq",
                              "--out", tmp_path / "ev")
        assert code == 0  # positives = {C} only; still separable
        assert "INTRINSIC_LIN best_f1=1" in stdout

    def test_macro_over_manifest(self, toy_built, tmp_path, capsys):
        refs = []
        recs = []
        for centroid in ("C", "D"):
            rec = tmp_path / f"rec_{centroid}.csv"
            code, _, _ = run(capsys, "sweep", "--index", toy_built,
                             "--centroid", centroid, "--universe", "ALL:TOY",
                             "--rescale", "--out", rec)
            assert code == 0
            ref = tmp_path / f"ref_{centroid}.csv"
            ref.write_text(
                "concept_id,source,expert_label\n"
                f"{centroid},SMQ,1\nA,HLGT,1\nE,SSM_ONLY,0\n")
            recs.append(rec)
            refs.append(ref)
        manifest = tmp_path / "sets.csv"
        manifest.write_text(
            "centroid,records,reference\n"
            + "".join(f"{c},{r.name},{f.name}\n"
                      for c, r, f in zip(("C", "D"), recs, refs)))
        code, stdout, _ = run(capsys, "eval", "--manifest", manifest,
                              "--scale", "rescaled", "--grid", 101,
                              "--out", tmp_path / "macro")
        assert code == 0
        assert (tmp_path / "macro_macro.csv").exists()
        assert (tmp_path / "macro_best.csv").exists()
        assert "mean_best_f1=" in stdout and "macro_curve_max_f1=" in stdout
        macro_lines = (tmp_path / "macro_macro.csv").read_text().splitlines()
        assert len(macro_lines) == 1 + 6 * 101

    def test_rescaled_scale_without_rescaled_column_exits_5(
            self, toy_records, tmp_path, capsys):
        ref = tmp_path / "ref.csv"
        ref.write_text(REFERENCE_CSV)
        code, _, err = run(capsys, "eval", "--records", toy_records,
                           "--reference", ref, "--centroid", "C",
                           "--scale", "rescaled", "--out", tmp_path / "ev")
        assert code == 5
        assert "rescaled" in err


class TestKappa:
    def _write(self, path, rows):
        path.write_text("concept_id,label\n"
                        + "".join(f"{c},{v}\n" for c, v in rows))

    def test_identical_files_kappa_one(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        rows = [("w", 1), ("x", 0), ("y", 1), ("z", 0)]
        self._write(a, rows)
        self._write(b, rows)
        code, stdout, _ = run(capsys, "kappa", "--labels-a", a,
                              "--labels-b", b, "--out", tmp_path / "k.csv")
        assert code == 0 and "kappa=1" in stdout

    def test_complete_disagreement_kappa_minus_one(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        self._write(a, [("1", 1), ("2", 1), ("3", 0), ("4", 0)])
        self._write(b, [("1", 0), ("2", 0), ("3", 1), ("4", 1)])
        out = tmp_path / "k.csv"
        code, stdout, _ = run(capsys, "kappa", "--labels-a", a,
                              "--labels-b", b, "--centroid", "10002424",
                              "--standard-a", "expert", "--standard-b", "smq",
                              "--out", out)
        assert code == 0 and "kappa=-1" in stdout
        assert out.read_text().splitlines()[1] == \
            "10002424,expert,smq,0,0.5,-1"

    def test_mismatched_ids_exit_5(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        self._write(a, [("x", 1)])
        self._write(b, [("y", 1)])
        code, _, _ = run(capsys, "kappa", "--labels-a", a, "--labels-b", b,
                         "--out", tmp_path / "k.csv")
        assert code == 5
