import json

import pytest

from tdlabel.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_label_verify_roundtrip(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    code, _, _ = run(capsys, "gen", "--scheme", "product", "--n", "25", "--seed", "3",
                     "--out", str(inst_path))
    assert code == 0
    labels_path = tmp_path / "labels.json"
    code, _, _ = run(capsys, "label", "--in", str(inst_path), "--out", str(labels_path))
    assert code == 0
    dump = json.loads(labels_path.read_text())
    assert dump["scheme"] == "product"
    assert len(dump["vertex_labels"]) == 25
    code, out, _ = run(capsys, "verify", "--in", str(inst_path), "--labels", str(labels_path))
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_verify_detects_flipped_bit_in_label_file(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    run(capsys, "gen", "--scheme", "product", "--n", "20", "--seed", "5",
        "--out", str(inst_path))
    labels_path = tmp_path / "labels.json"
    run(capsys, "label", "--in", str(inst_path), "--out", str(labels_path))
    dump = json.loads(labels_path.read_text())
    # Flip one bit in some vertex label's hex payload.
    key = sorted(dump["vertex_labels"])[0]
    rec = dump["vertex_labels"][key]
    digits = list(rec["hex"])
    digits[0] = format(int(digits[0], 16) ^ 8, "x")
    rec["hex"] = "".join(digits)
    labels_path.write_text(json.dumps(dump))
    code, out, _ = run(capsys, "verify", "--in", str(inst_path), "--labels", str(labels_path))
    assert code == 1
    assert json.loads(out)["pass"] is False


def test_verify_fault_bits_flag(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    run(capsys, "gen", "--scheme", "union", "--n", "12", "--seed", "9",
        "--out", str(inst_path))
    code, out, _ = run(capsys, "verify", "--in", str(inst_path), "--fault-bits", "20",
                       "--seed", "4")
    assert code == 0
    rep = json.loads(out)
    assert rep["fault_trials"] == 20
    assert rep["fault_detected"] == 20


def test_bench_csv(tmp_path, capsys):
    out_path = tmp_path / "bench.csv"
    code, _, err = run(capsys, "bench", "--scheme", "product", "--n-list", "32,64",
                       "--seed", "2", "--no-timings", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0].startswith("scheme,n,seed")
    assert len(lines) == 3
    assert "slack / (log2 n)^0.75" in err


def test_gen_requires_known_scheme(capsys):
    with pytest.raises(SystemExit):
        main(["gen", "--scheme", "bogus", "--n", "5"])


def test_missing_file_is_input_error(capsys):
    code, _, err = run(capsys, "verify", "--in", "/nonexistent/file.json")
    assert code == 2
    assert "error" in err


def test_selftest_small(capsys):
    code, out, _ = run(capsys, "selftest", "--max-n", "60")
    assert code == 0
    assert "pass" in out
