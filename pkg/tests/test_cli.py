import json

from coxsub import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_complex_pentagon(capsys):
    code, out, _ = run(capsys, "complex", "--group", "A2",
                       "--word", "1,2,1,2,1", "--pi", "w0")
    assert code == 0
    assert "f-vector (5, 5)" in out
    assert "h-vector (1, 3, 1)" in out
    assert "gamma    (1, 1)" in out
    assert "spherical True" in out


def test_complex_json(capsys):
    code, out, _ = run(capsys, "complex", "--group", "A2",
                       "--word", "1 2 1 2 1", "--pi", "w0", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["f_vector"] == [5, 5]
    assert doc["gamma"] == [1, 1]
    assert doc["flag"] is True
    assert len(doc["facets"]) == 5


def test_complex_void(capsys):
    code, out, _ = run(capsys, "complex", "--group", "A2",
                       "--word", "1,2", "--pi", "w0")
    assert code == 0
    assert "none (void complex)" in out


def test_classify_text_and_json(capsys):
    args = ("classify", "--group", "I2:5", "--word", "1,2,1,2,1,2,1",
            "--pos", "3", "--pi", "w0")
    code, out, _ = run(capsys, *args)
    assert code == 0
    assert "case 2" in out and "witness verified: True" in out
    code, out, _ = run(capsys, *args, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["case"] == 2 and doc["ok"] is True
    assert doc["conditions"]["B2"] is True and doc["conditions"]["A2"] is False
    assert doc["delta1"]["f_vector"] == [7, 7]
    assert doc["delta2"]["f_vector"] == [4, 4]
    assert doc["poly"]["delta_h"] == [[1, 1, -3]]


def test_chain_with_moves(capsys):
    code, out, _ = run(capsys, "chain", "--group", "A3",
                       "--word", "1,2,3,3,2,1,3,2,3", "--pi", "w0",
                       "--moves", "6,4,6,5,8,6,4,6", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert len(doc["words"]) == 9
    assert [s["case"] for s in doc["steps"]] == [1, 3, 1, 1, 1, 3, 3, 1]
    assert doc["rows"][-1]["f_vector"] == [9, 21, 14]


def test_chain_with_goal(capsys):
    code, out, _ = run(capsys, "chain", "--group", "A2", "--word", "1,2,1",
                       "--pi", "1,2,1", "--goal", "2,1,2")
    assert code == 0
    assert "sequence ok" in out


def test_poset_summary_and_artifacts(capsys, tmp_path):
    dot_path = tmp_path / "rho.dot"
    json_path = tmp_path / "rho.json"
    code, out, _ = run(capsys, "poset", "--group", "A3", "--Q", "1,2,3",
                       "--pi", "w0", "--dot", str(dot_path),
                       "--json", str(json_path))
    assert code == 0
    doc = json.loads(json_path.read_text())
    assert doc["word_count"] == 16 and doc["antisymmetric"] is True
    text = dot_path.read_text()
    assert text.startswith("digraph rho {") and text.count("->") == 18
    code, out, _ = run(capsys, "poset", "--group", "A3", "--Q", "1,2,3",
                       "--pi", "w0")
    assert code == 0
    assert "16 reduced words, 6 classes" in out
    assert "meet-semilattice: True   join-semilattice: True" in out


def test_poset_stdout_deterministic(capsys):
    argv = ("poset", "--group", "A3", "--Q", "1,2,3", "--pi", "w0", "--json", "-")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["word_count"] == 16


def test_demo_i2(capsys):
    code, out, _ = run(capsys, "demo", "i2", "--m", "5")
    assert code == 0
    assert "case 2" in out
    assert "f=(7, 7)" in out and "f=(4, 4)" in out
    assert "3*tau" in out
    assert "demo ok" in out


def test_demo_a3_chain(capsys):
    code, out, _ = run(capsys, "demo", "a3-chain")
    assert code == 0
    assert "gamma1 trajectory (0, 0, 1, 1, 1, 2, 3, 3)" in out
    assert "cases [1, 3, 1, 1, 1, 3, 3, 1]" in out
    assert "As^3" in out and "P^3" in out
    assert "demo ok" in out


def test_demo_deterministic(capsys):
    _, out1, _ = run(capsys, "demo", "a3-chain")
    _, out2, _ = run(capsys, "demo", "a3-chain")
    assert out1 == out2


def test_bench_json(capsys):
    code, out, _ = run(capsys, "bench", "--group", "A2", "--length", "9",
                       "--repeat", "1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["word_length"] == 9
    assert doc["masks"] > 0
    assert doc["python_ms"] > 0
    assert doc["active_backend"] in ("numba", "python")


def test_bad_input_exit_codes(capsys):
    code, _, err = run(capsys, "complex", "--group", "A2",
                       "--word", "1,7", "--pi", "w0")
    assert code == 2 and "error:" in err
    code, _, err = run(capsys, "classify", "--group", "A2",
                       "--word", "1,1,2", "--pos", "1", "--pi", "w0")
    assert code == 2
    code, _, err = run(capsys, "chain", "--group", "A2", "--word", "1,2,1",
                       "--pi", "w0")
    assert code == 2 and "--moves or --goal" in err
    code, _, err = run(capsys, "complex", "--group", "Q9",
                       "--word", "1", "--pi", "w0")
    assert code == 2


def test_group_spec_file(capsys, tmp_path):
    spec = tmp_path / "group.json"
    spec.write_text('{"matrix": [[1, 5], [5, 1]]}')
    code, out, _ = run(capsys, "complex", "--group", str(spec),
                       "--word", "1,2,1,2,1,2,1", "--pi", "w0")
    assert code == 0
    assert "f-vector (7, 7)" in out
