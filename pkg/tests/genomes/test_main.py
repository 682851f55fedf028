import os

import pytest

from readlab.genomes.main import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from readlab.genomes.utils.runner import ExperimentRunner
from readlab.genomes.utils.sequence.fasta import read_reads_csv
from readlab.genomes.utils.tables import read_versioned_csv
from tests.conftest import tiny_config


@pytest.fixture
def simulated(tiny_snp_config, tmp_path):
    out = str(tmp_path / "reads")
    assert main(["simulate", "--config", tiny_snp_config, "--out", out]) == EXIT_OK
    return out


def test_help():
    assert main(["--help"]) == EXIT_OK


def test_unknown_command():
    assert main(["shuffle"]) == EXIT_USAGE


def test_probability_out_of_range(tmp_path):
    code = main(["degrade", "--reads", "r.csv", "--out", str(tmp_path / "o.csv"), "--kind", "snp", "--p", "1.5"])
    assert code == EXIT_USAGE


def test_missing_parameter(simulated, tmp_path):
    reads = os.path.join(simulated, "training_reads.csv")
    code = main(["degrade", "--reads", reads, "--out", str(tmp_path / "o.csv"), "--kind", "selective_snp", "--p", "0.5"])
    assert code == EXIT_USAGE


def test_foreign_parameter(simulated, tmp_path):
    reads = os.path.join(simulated, "training_reads.csv")
    code = main(
        ["degrade", "--reads", reads, "--out", str(tmp_path / "o.csv"), "--kind", "snp", "--p", "0.5", "--sel-p", "0.2"]
    )
    assert code == EXIT_USAGE


def test_missing_input_file(tmp_path):
    code = main(
        ["evaluate", "--model", str(tmp_path / "m.json"), "--reads", str(tmp_path / "r.csv"), "--out", str(tmp_path / "c.csv")]
    )
    assert code == EXIT_DATA
    assert main(["experiment", "--config", str(tmp_path / "none.json")]) == EXIT_DATA


def test_bad_config(tmp_path):
    path = tiny_config(tmp_path, {"kind": "shuffle", "grid": {}})
    assert main(["experiment", "--config", path]) == EXIT_DATA


def test_genome_shorter_than_reads(tmp_path):
    genomes = [
        {"label": "Adeno", "length": 2000, "markov": {"seed": 11}},
        {"label": "COVID", "length": 25, "markov": {"seed": 22}},
    ]
    path = tiny_config(tmp_path, {"kind": "snp", "grid": {"snp_probability": [0]}}, genomes=genomes)
    assert main(["simulate", "--config", path, "--out", str(tmp_path / "reads")]) == EXIT_DATA


def test_bad_hyperparams(simulated, tmp_path):
    reads = os.path.join(simulated, "training_reads.csv")
    code = main(["train", "--reads", reads, "--kind", "bayes", "--out", str(tmp_path / "m.json"), "--hyperparams", "{oops"])
    assert code == EXIT_USAGE


def test_simulate_writes_triplet_tables(simulated):
    triplets = read_versioned_csv(os.path.join(simulated, "validation_triplets.csv"), dtype={"id": str})
    assert list(triplets.columns[:3]) == ["id", "label", "AAA"]
    assert triplets.columns[-1] == "TTT" and len(triplets.columns) == 66
    assert len(triplets) == 90
    assert triplets.iloc[:, 2:].sum(axis=1).to_numpy() == pytest.approx(1.0)


def test_single_step_pipeline(simulated, tmp_path):
    training = os.path.join(simulated, "training_reads.csv")
    validation = os.path.join(simulated, "validation_reads.csv")
    degraded = str(tmp_path / "degraded.csv")
    model = str(tmp_path / "model.json")

    assert main(["degrade", "--reads", training, "--out", degraded, "--kind", "reduce", "--p", "0.5",
                 "--target-label", "COVID", "--seed", "3"]) == EXIT_OK
    assert len(read_reads_csv(degraded)) < len(read_reads_csv(training))

    assert main(["train", "--reads", degraded, "--kind", "partition_model", "--out", model,
                 "--hyperparams", '{"max_leaves": 8}']) == EXIT_OK
    assert main(["evaluate", "--model", model, "--reads", validation, "--out", str(tmp_path / "cm.csv")]) == EXIT_OK
    cm = read_versioned_csv(str(tmp_path / "cm.csv"))
    assert cm[["Adeno", "COVID", "SARS"]].to_numpy().sum() == 90

    assert main(["boundary", "--model", model, "--reads", validation, "--out", str(tmp_path / "b.csv"),
                 "--workers", "2"]) == EXIT_OK
    assert len(read_versioned_csv(str(tmp_path / "b.csv"))) == 90


def test_experiment_and_report(tmp_path):
    path = tiny_config(tmp_path, {"kind": "snp", "grid": {"snp_probability": [0, 0.5]}})
    run = str(tmp_path / "run")
    assert main(["experiment", "--config", path, "--out", run]) == EXIT_OK
    charts = os.path.join(run, "charts")
    assert os.path.exists(os.path.join(charts, "correct.svg"))
    assert os.path.exists(os.path.join(charts, "ns_bayes_p001.svg"))

    again = str(tmp_path / "again")
    assert main(["report", "--from", run, "--out", again]) == EXIT_OK
    for name in sorted(os.listdir(charts)):
        with open(os.path.join(charts, name), "rb") as a, open(os.path.join(again, name), "rb") as b:
            assert a.read() == b.read(), name

    assert main(["experiment", "--config", path, "--out", run, "--seed", "8", "--no-charts"]) == EXIT_DATA
    assert main(["experiment", "--config", path, "--out", run, "--workers", "2", "--no-charts"]) == EXIT_OK


def test_experiment_without_charts(tiny_snp_config, tmp_path):
    run = str(tmp_path / "bare")
    assert main(["experiment", "--config", tiny_snp_config, "--out", run, "--no-charts", "--seed", "3"]) == EXIT_OK
    assert not os.path.exists(os.path.join(run, "charts"))


def test_failed_points_exit_with_data_error(tiny_snp_config, tmp_path, monkeypatch):
    def broken(self, index, spec, workers=1):
        raise RuntimeError("no")

    monkeypatch.setattr(ExperimentRunner, "run_point", broken)
    assert main(["experiment", "--config", tiny_snp_config, "--out", str(tmp_path / "x"), "--no-charts"]) == EXIT_DATA


def test_report_needs_a_run(tmp_path):
    assert main(["report", "--from", str(tmp_path)]) == EXIT_DATA


def test_entropy_curve(tmp_path):
    out = str(tmp_path / "entropy")
    assert main(["entropy-curve", "--length", "3000", "--iterations", "2", "--p", "0.3", "--out", out]) == EXIT_OK
    values = read_versioned_csv(os.path.join(out, "entropy_curve.csv"))
    assert values["iteration"].tolist() == [0, 1, 2]
    assert os.path.exists(os.path.join(out, "entropy_curve.svg"))
