import os

import pytest

from foldreg.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture(scope="module")
def term_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("terms")
    assert main(["catalog", "--emit", str(d)]) == 0
    return d


def test_check_prime_ok(capsys, term_dir):
    code, out, err = run_cli(capsys, "check", str(term_dir / "reverse.term"),
                             "--flavor", "qf")
    assert code == 0
    assert "->" in out


def test_check_grade_violation_exit_2(capsys, term_dir):
    code, out, err = run_cli(capsys, "check",
                             str(term_dir / "exp_duplication.term"),
                             "--flavor", "poly")
    assert code == 2
    assert "grade violation" in err


def test_check_machine_format_error_kind(capsys, term_dir):
    code, out, err = run_cli(capsys, "--format", "machine", "check",
                             str(term_dir / "fold_tail.term"),
                             "--flavor", "poly")
    assert code == 2
    assert "kind=domain mismatch" in out


def test_run_and_parse_error_codes(capsys, term_dir, tmp_path):
    good = tmp_path / "w.val"
    good.write_text("[<1,><1,<1]")
    code, out, _ = run_cli(capsys, "run", str(term_dir / "reverse.term"),
                           "--flavor", "qf", "--input", str(good))
    assert code == 0
    assert out.strip() == "[<(),><(),<()]"
    bad = tmp_path / "bad.val"
    bad.write_text("oh no")
    code, _, err = run_cli(capsys, "run", str(term_dir / "reverse.term"),
                           "--flavor", "qf", "--input", str(bad))
    assert code == 3
    # the total wrapper maps ill-formatted input to a fixed element instead
    code, out, err = run_cli(capsys, "run", str(term_dir / "reverse.term"),
                             "--flavor", "qf", "--input", str(bad), "--total")
    assert code == 0
    assert out.strip() == "[]"


def test_run_type_error_exit_2(capsys, term_dir, tmp_path):
    good = tmp_path / "w.val"
    good.write_text("[]")
    code, _, err = run_cli(capsys, "run", str(term_dir / "duplicate.term"),
                           "--flavor", "qf", "--input", str(good))
    assert code == 2


def test_growth_machine_output_deterministic(capsys, term_dir):
    args = ["--format", "machine", "--seed", "5", "growth",
            str(term_dir / "squaring.term"), "--flavor", "poly",
            "--sizes", "5..30"]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert "degree=2" in out1


def test_seed_env_fallback(capsys, term_dir, monkeypatch):
    monkeypatch.setenv("FOLDREG_SEED", "9")
    args = ["--format", "machine", "growth",
            str(term_dir / "reverse.term"), "--flavor", "qf",
            "--sizes", "5..30"]
    code1, out_env, _ = run_cli(capsys, *args)
    monkeypatch.delenv("FOLDREG_SEED")
    code2, out_flag, _ = run_cli(capsys, "--format", "machine", "--seed", "9",
                                 *args[2:])
    assert code1 == code2 == 0
    assert out_env == out_flag


def test_fold_compare_pass(capsys, tmp_path):
    from foldreg.qf_logic import interp_to_text
    from foldreg.sst import letter_type, letter_value, sst_from_text, sst_to_qf
    from foldreg.structures import encode
    from foldreg.types_values import LeafAllocator

    sst_text = """ALPHABET-IN a b
ALPHABET-OUT a b
STATES qa qb
TRANS qa a -> qa
TRANS qa b -> qb
TRANS qb a -> qa
TRANS qb b -> qb
UPDATE qa: a$1
UPDATE qb: b$1
OUT: $1
"""
    machine = sst_from_text(sst_text)
    delta_t, init_value, interp = sst_to_qf(machine)
    (tmp_path / "step.qf").write_text(interp_to_text(interp))
    (tmp_path / "b0.dump").write_text(encode(init_value, delta_t).dump())
    letters = tmp_path / "letters"
    letters.mkdir()
    alloc = LeafAllocator(start=50)
    for i, a in enumerate("aab"):
        s = encode(letter_value(machine.input_alphabet, a, alloc.fresh()),
                   letter_type(machine.input_alphabet))
        (letters / f"{i:02d}.dump").write_text(s.dump())
    code, out, _ = run_cli(capsys, "fold", str(tmp_path / "step.qf"),
                           "--b0", str(tmp_path / "b0.dump"),
                           "--letters", str(letters), "--mode", "compare")
    assert code == 0
    assert "PASS" in out
    assert "UNIVERSE" in out
    code, out_naive, _ = run_cli(capsys, "fold", str(tmp_path / "step.qf"),
                                 "--b0", str(tmp_path / "b0.dump"),
                                 "--letters", str(letters), "--mode", "naive")
    assert code == 0
    code, out_stream, _ = run_cli(capsys, "fold", str(tmp_path / "step.qf"),
                                  "--b0", str(tmp_path / "b0.dump"),
                                  "--letters", str(letters),
                                  "--mode", "stream")
    assert out_naive == out_stream


def test_sst_run_compile_compare(capsys, tmp_path):
    sst_file = tmp_path / "dup.sst"
    sst_file.write_text("""ALPHABET-IN a b
ALPHABET-OUT a b
STATES qa qb
TRANS qa a -> qa
TRANS qa b -> qb
TRANS qb a -> qa
TRANS qb b -> qb
UPDATE qa: $1a
UPDATE qb: $1b
OUT: $1
""")
    code, out, _ = run_cli(capsys, "sst", "run", str(sst_file),
                           "--word", "abba")
    assert code == 0 and "abba" in out
    code, out, _ = run_cli(capsys, "sst", "compile", str(sst_file))
    assert code == 0
    assert "VOCAB-IN" in out and "UNIVERSE" in out
    code, out, _ = run_cli(capsys, "--seed", "1", "sst", "compare",
                           str(sst_file), "--trials", "5")
    assert code == 0 and "PASS" in out


def test_catalog_check_small_budget(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "--format", "machine", "catalog",
                           "--check", "--trials", "3", "--max-size", "5",
                           "--report-dir", str(tmp_path / "rep"))
    assert code == 0
    assert "reverse=PASS" in out
    assert (tmp_path / "rep" / "catalog_report.tsv").exists()
    assert (tmp_path / "rep" / "catalog_report.png").exists()


def test_growth_report_files(capsys, term_dir, tmp_path):
    code, out, _ = run_cli(capsys, "--report-dir", str(tmp_path / "g"),
                           "growth", str(term_dir / "reverse.term"),
                           "--flavor", "qf", "--sizes", "5..25")
    assert code == 0
    assert (tmp_path / "g" / "reverse_growth.tsv").exists()
    assert (tmp_path / "g" / "reverse_growth.png").exists()
    tsv = (tmp_path / "g" / "reverse_growth.tsv").read_text().splitlines()
    assert tsv[0] == "input_leaves\toutput_leaves"
    assert len(tsv) > 3


def test_missing_file_is_parse_error(capsys):
    code, _, err = run_cli(capsys, "check", "/does/not/exist.term")
    assert code == 3
