import json

import numpy as np
import pytest

from spherelets.cli import EXIT_DATA, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, main
from spherelets.datasets import load_csv


def run(*argv):
    return main(list(argv))


def test_generate_fit_project_pipeline(tmp_path):
    data = tmp_path / "euler.csv"
    model = tmp_path / "model.json"
    out = tmp_path / "proj.csv"
    assert run("generate", "--dataset", "euler", "--n", "400", "--seed", "0",
               "--out", str(data)) == EXIT_OK
    assert run("fit", "--input", str(data), "--d", "1", "--eps", "1e-6",
               "--method", "spca", "--out", str(model)) == EXIT_OK
    assert run("project", "--model", str(model), "--input", str(data),
               "--out", str(out), "--report-mse") == EXIT_OK
    X = load_csv(str(data))
    Y = load_csv(str(out))
    assert Y.shape == X.shape
    assert np.mean(np.sum((X - Y) ** 2, axis=1)) < 1e-4


def test_generate_clean_out_and_noise(tmp_path):
    noisy = tmp_path / "noisy.csv"
    clean = tmp_path / "clean.csv"
    assert run("generate", "--dataset", "spiral", "--n", "100", "--noise", "0.2",
               "--seed", "1", "--out", str(noisy), "--clean-out", str(clean)) == EXIT_OK
    a, b = load_csv(str(noisy)), load_csv(str(clean))
    assert a.shape == b.shape == (100, 2)
    assert not np.array_equal(a, b)


def test_generate_enneper_and_sphere(tmp_path):
    for name, cols in (("enneper", 3), ("sphere", 3)):
        out = tmp_path / f"{name}.csv"
        assert run("generate", "--dataset", name, "--n", "50", "--out", str(out)) == EXIT_OK
        assert load_csv(str(out)).shape == (50, cols)


def test_provenance_header_written(tmp_path):
    out = tmp_path / "d.csv"
    run("generate", "--dataset", "euler", "--n", "20", "--seed", "7", "--out", str(out))
    head = out.read_text().splitlines()[:3]
    assert head[0].startswith("# command: spherelets generate")
    assert head[1] == "# seed: 7"
    assert head[2].startswith("# version:")


def test_generate_rerun_identical_bytes(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run("generate", "--dataset", "euler", "--n", "50", "--seed", "3", "--out", str(a))
    run("generate", "--dataset", "euler", "--n", "50", "--seed", "3", "--out", str(b))
    assert a.read_text().replace(str(a), "X") == b.read_text().replace(str(b), "X")


def test_denoise_subcommand(tmp_path):
    data = tmp_path / "noisy.csv"
    out = tmp_path / "clean.csv"
    run("generate", "--dataset", "spiral", "--n", "200", "--noise", "0.2",
        "--seed", "2", "--out", str(data))
    assert run("denoise", "--input", str(data), "--method", "smbms", "--k", "20",
               "--sigma", "1.0", "--iters", "1", "--d", "1", "--out", str(out)) == EXIT_OK
    assert load_csv(str(out)).shape == (200, 2)


def test_embed_subcommand(tmp_path):
    data = tmp_path / "pts.csv"
    out = tmp_path / "emb.csv"
    log = tmp_path / "log.csv"
    run("generate", "--dataset", "sphere", "--n", "60", "--seed", "4", "--out", str(data))
    assert run("embed", "--input", str(data), "--mode", "spherical", "--d", "1",
               "--m", "2", "--k", "10", "--sigma", "5.0", "--iters", "120",
               "--lr", "50", "--seed", "0", "--out", str(out), "--log", str(log)) == EXIT_OK
    Y = load_csv(str(out))
    assert Y.shape == (60, 2)
    trace = load_csv(str(log))
    assert trace.shape[1] == 2
    kls = trace[:, 1]
    assert np.all(np.diff(kls) <= 1e-15)


def test_bench_subcommand(tmp_path):
    out = tmp_path / "bench.csv"
    assert run("bench", "--dataset", "euler:ntrain=300,ntest=300", "--d", "1",
               "--eps-grid", "1e-3,1e-5", "--methods", "spca,pca",
               "--seed", "0", "--out", str(out)) == EXIT_OK
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "method,eps,pieces,train_mse,test_mse,wall_time"
    assert len(lines) == 5  # header + 2 eps x 2 methods


def test_rate_subcommand(tmp_path):
    out = tmp_path / "rate.csv"
    assert run("rate", "--alpha-grid", "0.05,0.11,0.23,0.5",
               "--methods", "spca,pca", "--out", str(out)) == EXIT_OK
    text = out.read_text()
    assert "# slope spca:" in text
    assert "method,alpha,segment,mse" in text


def test_exit_usage_on_bad_flag(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run("generate", "--dataset", "mobius", "--n", "10", "--out", str(tmp_path / "x.csv"))
    assert exc.value.code == EXIT_USAGE


def test_exit_usage_on_parameter_error(tmp_path):
    data = tmp_path / "d.csv"
    run("generate", "--dataset", "euler", "--n", "30", "--out", str(data))
    code = run("denoise", "--input", str(data), "--method", "gbms", "--k", "0",
               "--sigma", "1.0", "--out", str(tmp_path / "o.csv"))
    assert code == EXIT_USAGE


def test_exit_data_on_missing_file(tmp_path):
    assert run("fit", "--input", str(tmp_path / "nope.csv"), "--d", "1",
               "--eps", "1e-4", "--out", str(tmp_path / "m.json")) == EXIT_DATA


def test_exit_data_on_malformed_csv(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,abc\n")
    assert run("fit", "--input", str(bad), "--d", "1", "--eps", "1e-4",
               "--out", str(tmp_path / "m.json")) == EXIT_DATA


def test_exit_numeric_on_singular_projection(tmp_path):
    model = {
        "version": 1, "d": 1, "D": 2, "fitter": "spca",
        "tree": {"leaf": 0, "members": []},
        "leaves": [{"id": 0, "kind": "sphere", "mu": [0.0, 0.0],
                    "frame": [[1.0, 0.0], [0.0, 1.0]],
                    "center": [0.0, 0.0], "radius": 1.0}],
    }
    mpath = tmp_path / "m.json"
    mpath.write_text(json.dumps(model))
    data = tmp_path / "center.csv"
    data.write_text("0,0\n")  # projects onto the sphere center
    assert run("project", "--model", str(mpath), "--input", str(data),
               "--out", str(tmp_path / "p.csv")) == EXIT_NUMERIC
