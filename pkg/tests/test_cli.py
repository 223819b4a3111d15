import numpy as np
import pytest

from abgc.cli import main
from abgc.datagen import planted_partition_abg
from abgc.pipeline import PipelineConfig, cluster_graph, format_report, run_pipeline


@pytest.fixture
def planted_files(tmp_path):
    assert main(["gen", "--k", "3", "--n-u", "300", "--n-v", "300", "--seed", "1",
                 "--prefix", str(tmp_path / "g")]) == 0
    return tmp_path / "g"


def _cluster_args(prefix, *extra):
    return ["cluster", "--edges", f"{prefix}.edges", "--attrs-u", f"{prefix}.attrs",
            "--k", "3", *extra]


def test_gen_writes_three_files(planted_files):
    for ext in ("edges", "attrs", "labels"):
        assert planted_files.with_suffix("." + ext).exists()


def test_cluster_end_to_end(planted_files, tmp_path):
    out, rep = tmp_path / "pred", tmp_path / "report"
    rc = main(_cluster_args(planted_files, "--labels", f"{planted_files}.labels",
                            "--out", str(out), "--metrics-out", str(rep)))
    assert rc == 0
    report = dict(line.split("=", 1) for line in rep.read_text().splitlines())
    assert float(report["acc"]) >= 0.95
    assert report["k"] == "3" and report["n"] == "300"
    assert "runtime_seconds.factorize" in report and "runtime_seconds.total" in report
    assert len(out.read_text().splitlines()) == 300


def test_cluster_is_deterministic(planted_files, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(_cluster_args(planted_files, "--out", str(a))) == 0
    assert main(_cluster_args(planted_files, "--out", str(b), "--dim", "off")) == 0
    c = tmp_path / "c"
    assert main(_cluster_args(planted_files, "--out", str(c))) == 0
    assert a.read_bytes() == c.read_bytes()


def test_cluster_to_stdout(planted_files, capsys):
    assert main(_cluster_args(planted_files, "--labels", f"{planted_files}.labels")) == 0
    captured = capsys.readouterr()
    assert len(captured.out.splitlines()) == 300
    assert captured.err.startswith("acc=")


def test_eval_command(tmp_path, capsys):
    (tmp_path / "t").write_text("0\n0\n1\n1\n")
    (tmp_path / "p").write_text("0\n1\n1\n1\n")
    (tmp_path / "q").write_text("1\n1\n0\n0\n")
    assert main(["eval", str(tmp_path / "p"), str(tmp_path / "t")]) == 0
    out = dict(l.split("=") for l in capsys.readouterr().out.splitlines())
    assert float(out["acc"]) == 0.75 and float(out["ari"]) == 0.0
    assert abs(float(out["nmi"]) - 0.3455) < 1e-3
    assert main(["eval", str(tmp_path / "t"), str(tmp_path / "t")]) == 0
    out = dict(l.split("=") for l in capsys.readouterr().out.splitlines())
    assert out["acc"] == out["nmi"] == out["ari"] == "1.000000"
    assert main(["eval", str(tmp_path / "q"), str(tmp_path / "t")]) == 0
    assert "acc=1.000000" in capsys.readouterr().out


def test_errors_return_exit_code_2(tmp_path, capsys):
    (tmp_path / "e").write_text("0 0\n0 oops\n")
    (tmp_path / "a").write_text("#dense 1 1\n1\n")
    rc = main(["cluster", "--edges", str(tmp_path / "e"), "--attrs-u", str(tmp_path / "a"),
               "--k", "2"])
    assert rc == 2
    assert ":2:" in capsys.readouterr().err
    assert main(["cluster", "--edges", str(tmp_path / "missing"), "--attrs-u",
                 str(tmp_path / "a"), "--k", "2"]) == 2


def test_bad_flags_rejected():
    with pytest.raises(SystemExit):
        main(["cluster", "--edges", "e", "--attrs-u", "a", "--k", "2", "--dim", "zero"])
    with pytest.raises(SystemExit):
        main(["cluster", "--edges", "e", "--attrs-u", "a", "--k", "2", "--target-side", "w"])


def test_oracle_hidden_but_callable(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "oracle" not in capsys.readouterr().out
    assert main(["oracle", "fixture"]) == 0
    out = capsys.readouterr().out
    assert out.strip().endswith("partition=0 0 1 1 1 2 2")


def test_config_validation():
    for bad in (dict(k=0), dict(k=2, alpha=1.5), dict(k=2, gamma=-1), dict(k=2, t_g=0),
                dict(k=2, reduced_dim=0), dict(k=2, target_side="W"), dict(k=2, t_f=-1)):
        with pytest.raises(ValueError):
            PipelineConfig(**bad)


def test_k_one_gives_single_cluster():
    g, _ = planted_partition_abg(2, 20, 20, 0.5, 0.1, 4, 0.1, seed=0)
    res = cluster_graph(g, 1)
    assert np.all(res.labels == 0)


def test_target_side_v(tmp_path):
    g, labels = planted_partition_abg(3, 90, 120, 0.3, 0.01, 12, 0.1, seed=3)
    from abgc.graph import write_attributes, write_edges

    write_edges(tmp_path / "e", g)
    write_attributes(tmp_path / "au", g.attrs_u)
    vx = np.repeat(np.eye(3), 40, axis=0)
    write_attributes(tmp_path / "av", vx)
    cfg = PipelineConfig(k=3, target_side="V", edges=tmp_path / "e",
                         attrs_u=tmp_path / "au", attrs_v=tmp_path / "av")
    res = run_pipeline(cfg)
    assert res.labels.shape == (120,)


def test_report_format():
    g, labels = planted_partition_abg(3, 60, 60, 0.4, 0.02, 6, 0.1, seed=0)
    res = cluster_graph(g, 3)
    text = format_report(res, 3)
    assert "k=3" in text and "n=60" in text
    assert set(res.timings) == {"adjacency", "reduce", "smooth", "random_features",
                                "factorize", "round"}


def test_thread_cap_env(monkeypatch):
    monkeypatch.setenv("ABGC_THREADS", "1")
    g, _ = planted_partition_abg(2, 40, 40, 0.4, 0.02, 4, 0.1, seed=0)
    assert cluster_graph(g, 2).labels.shape == (40,)
