import json

import numpy as np
import pytest

from cardio_onto.cli import main
from cardio_onto.data import SplitSpec, load_csv, percentage_split, write_csv
from cardio_onto.figures import bar_chart_svg
from cardio_onto.metrics import EvaluationReport
from cardio_onto.ontology import OntologyClassifier, import_turtle, parse_swrl

from conftest import make_cardio

ALL_REPORTS = 16


@pytest.fixture(scope="module")
def raw(tmp_path_factory):
    d = make_cardio(400, seed=61)
    path = tmp_path_factory.mktemp("raw") / "cardio.csv"
    from cardio_onto.data import Dataset
    write_csv(Dataset(d.records + d.records[:7]), path, with_id=True)
    return path


@pytest.fixture(scope="module")
def prepared(raw, tmp_path_factory):
    out = tmp_path_factory.mktemp("prep")
    assert main(["prepare", "--input", str(raw), "--out", str(out)]) == 0
    return out


def test_prepare_removes_duplicates(prepared):
    summary = json.loads((prepared / "prepare_summary.json").read_text())
    assert (summary["rows_before"], summary["rows_after"], summary["removed"]) == (407, 400, 7)
    assert summary["absence"] + summary["presence"] == 400
    assert summary["config"]["input"] == "cardio.csv"
    assert len(summary["config"]["input_sha256"]) == 64
    assert len(load_csv(prepared / "cardio_clean.csv")) == 400


def test_prepare_clean_file_is_unchanged(prepared, tmp_path):
    clean = prepared / "cardio_clean.csv"
    assert main(["prepare", "--input", str(clean), "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "prepare_summary.json").read_text())["removed"] == 0
    assert (tmp_path / "cardio_clean.csv").read_bytes() == clean.read_bytes()


def test_prepare_is_repeatable(raw, tmp_path):
    for name in ("a", "b"):
        assert main(["prepare", "--input", str(raw), "--out", str(tmp_path / name)]) == 0
    for f in ("cardio_clean.csv", "prepare_summary.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_run_two_algorithms(prepared, tmp_path):
    clean = prepared / "cardio_clean.csv"
    assert main(["run", "--input", str(clean), "--out", str(tmp_path), "--algorithms", "dt,lr",
                 "--protocols", "folds10"]) == 0
    reports = sorted(p.name for p in (tmp_path / "reports").iterdir())
    assert reports == ["decision_tree_folds10.json", "logistic_regression_folds10.json"]
    rows = (tmp_path / "comparison.csv").read_text().splitlines()
    assert rows[0].startswith("# config: ")
    assert rows[1] == "classifier,accuracy_folds10,precision_folds10,recall_folds10,f_measure_folds10"
    assert len(rows) == 4
    report = EvaluationReport.load(tmp_path / "reports" / "decision_tree_folds10.json")
    assert report.confusion.total == 400
    assert report.config["seed"] == 1 and report.config["protocols"] == ["folds10"]


def test_overrides_reach_the_learner(prepared, tmp_path):
    clean = prepared / "cardio_clean.csv"
    assert main(["run", "--input", str(clean), "--out", str(tmp_path), "--algorithms", "knn,rf",
                 "--protocols", "split60", "--k", "3", "--trees", "4", "--seed", "9"]) == 0
    knn = json.loads((tmp_path / "reports" / "knn_split60.json").read_text())
    rf = json.loads((tmp_path / "reports" / "random_forest_split60.json").read_text())
    assert knn["hyperparameters"]["k"] == 3 and knn["seed"] == 9
    assert rf["hyperparameters"]["n_trees"] == 4 and rf["config"]["overrides"] == {"k": 3, "trees": 4}


@pytest.fixture(scope="module")
def full_run(prepared, tmp_path_factory):
    outs = []
    for name in ("first", "second"):
        out = tmp_path_factory.mktemp(name)
        args = ["run", "--input", str(prepared / "cardio_clean.csv"), "--out", str(out),
                "--algorithms", "all", "--protocols", "folds10,split60", "--trees", "10"]
        assert main(args) == 0
        assert main(["figures", "--out", str(out)]) == 0
        outs.append(out)
    return outs


def test_full_run_shape(full_run):
    out = full_run[0]
    assert len(list((out / "reports").iterdir())) == ALL_REPORTS
    rows = (out / "comparison.csv").read_text().splitlines()[2:]
    names = [r.split(",")[0] for r in rows]
    assert sorted(names) == sorted(["KNN", "NB", "ANN", "SVM", "RF", "LR", "DT", "Ontology"])
    acc = [float(r.split(",")[1]) for r in rows]
    assert acc == sorted(acc)
    md = (out / "comparison.md").read_text()
    assert "| Classifier | Accuracy Folds-10 | Accuracy Split-60% |" in md


def test_full_run_is_byte_identical(full_run):
    a, b = full_run
    assert (a / "comparison.csv").read_bytes() == (b / "comparison.csv").read_bytes()
    for metric in ("accuracy", "precision", "recall", "f_measure"):
        assert (a / "figures" / f"{metric}.svg").read_bytes() == (b / "figures" / f"{metric}.svg").read_bytes()


def test_figures_have_one_group_per_classifier(full_run):
    out = full_run[0]
    for metric in ("accuracy", "precision", "recall", "f_measure"):
        svg = (out / "figures" / f"{metric}.svg").read_text()
        assert svg.count('class="group"') == 8
        assert svg.count('class="bar"') == 16
        assert "<metadata>" in svg and "input_sha256" in svg


def test_single_classifier_chart(tmp_path):
    table = tmp_path / "t.csv"
    table.write_text("classifier,accuracy_folds10,accuracy_split60,precision_folds10,precision_split60,"
                     "recall_folds10,recall_split60,f_measure_folds10,f_measure_split60\n"
                     "DT,0.731,0.731,0.752,0.753,0.702,0.701,0.726,0.726\n")
    assert main(["figures", "--table", str(table), "--out", str(tmp_path)]) == 0
    svg = (tmp_path / "figures" / "recall.svg").read_text()
    assert svg.count('class="group"') == 1 and svg.count('class="bar"') == 2


def test_undefined_cells_draw_no_bar():
    svg = bar_chart_svg("precision", ["KNN"], ["Folds-10", "Split-60%"], [[None, 0.5]])
    assert svg.count('class="bar"') == 1


@pytest.fixture(scope="module")
def ontology_run(prepared, tmp_path_factory):
    out = tmp_path_factory.mktemp("onto")
    assert main(["ontology", "--input", str(prepared / "cardio_clean.csv"), "--out", str(out),
                 "--protocols", "split60,folds10"]) == 0
    return out


def test_rules_file_parses_back_to_extracted_rules(prepared, ontology_run):
    d = load_csv(prepared / "cardio_clean.csv")
    train, _ = percentage_split(d, SplitSpec(seed=1))
    expected = OntologyClassifier().fit(train.X, train.y).rules_
    parsed = parse_swrl((ontology_run / "rules.swrl").read_text())
    assert parsed == expected
    lines = (ontology_run / "rules.txt").read_text().splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1:] == expected.listing().splitlines()


def test_inference_summary_totals(ontology_run):
    split = json.loads((ontology_run / "inference_summary.json").read_text())
    pooled = split["pooled"]
    assert pooled["presence"] + pooled["absence"] == pooled["individuals"] == 160
    folds = json.loads((ontology_run / "folds10" / "inference_summary.json").read_text())
    assert folds["pooled"]["individuals"] == 400 and len(folds["parts"]) == 10
    assert len(list((ontology_run / "folds10").glob("rules_fold*.swrl"))) == 10


def test_ontology_outputs(ontology_run):
    onto = import_turtle((ontology_run / "ontology.ttl").read_text())
    assert len(onto.individuals) == 160
    assert all(c in (0, 1) for c in onto.inferred())
    for protocol in ("split60", "folds10"):
        report = json.loads((ontology_run / "reports" / f"ontology_{protocol}.json").read_text())
        assert report["details"]["matches_tree"] is True
    for f in ("rules.swrl", "rules.txt", "ontology.ttl", "folds10/rules_fold03.swrl"):
        assert "input_sha256" in (ontology_run / f).read_text().splitlines()[0]


def test_max_depth_one_gives_two_rules(prepared, tmp_path):
    assert main(["ontology", "--input", str(prepared / "cardio_clean.csv"), "--out", str(tmp_path),
                 "--max-depth", "1"]) == 0
    rules = parse_swrl((tmp_path / "rules.swrl").read_text())
    assert len(rules.rules) == 2
    (a,), (b,) = (r.antecedent for r in rules.rules)
    assert (a.attribute, a.value) == (b.attribute, b.value)
    assert {a.comparator.value, b.comparator.value} == {"lessThanOrEqual", "greaterThan"}


@pytest.mark.parametrize("argv, fragment", [
    (["run", "--input", "missing.csv"], "input file not found"),
    (["run", "--algorithms", "boosting"], "unknown algorithm 'boosting'"),
    (["run", "--protocols", "folds5"], "unknown protocol 'folds5'"),
    (["ontology", "--min-leaf", "0"], "min_leaf"),
])
def test_errors_exit_nonzero_with_one_line(argv, fragment, prepared, tmp_path, capsys):
    if "--input" not in argv:
        argv = argv + ["--input", str(prepared / "cardio_clean.csv")]
    assert main(argv + ["--out", str(tmp_path / "out")]) != 0
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and err.startswith("cardio-onto: error:") and fragment in err
    assert not (tmp_path / "out").exists()


def test_bad_data_writes_nothing(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("age;gender;height;weight;ap_hi;ap_lo;cholesterol;gluc;smoke;alco;active;cardio\n"
                   "18393;2;168;62.0;110;80;7;1;0;0;1;0\n")
    assert main(["run", "--input", str(bad), "--out", str(tmp_path / "out")]) == 1
    assert "row 1" in capsys.readouterr().err
    assert not (tmp_path / "out").exists()


def test_missing_table(tmp_path, capsys):
    assert main(["figures", "--out", str(tmp_path)]) == 1
    assert "comparison table not found" in capsys.readouterr().err


def test_module_entry_point(prepared):
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "cardio_onto", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "prepare" in proc.stdout
