import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cardio_onto.data import (
    COLUMNS,
    Dataset,
    LoadError,
    PatientRecord,
    SplitError,
    SplitSpec,
    deduplicate,
    load_csv,
    percentage_split,
    stratified_folds,
    write_csv,
)

from conftest import make_cardio

HEADER = "id;" + ";".join(COLUMNS)
ROW = "{id};18393;2;168;62.0;110;80;1;1;0;0;1;0"


def write(tmp_path, lines, name="data.csv"):
    p = tmp_path / name
    p.write_text("\n".join(lines) + "\n")
    return p


def test_load_kaggle_layout(tmp_path):
    p = write(tmp_path, [HEADER, ROW.format(id=0), "1;20228;1;156;85.0;140;90;3;1;0;0;1;1"])
    d = load_csv(p)
    assert len(d) == 2
    assert d[0] == PatientRecord(18393, 2, 168, 62.0, 110, 80, 1, 1, 0, 0, 1, 0)
    assert d[1].cholesterol == 3 and d[1].cardio == 1


def test_header_only_gives_empty_dataset(tmp_path):
    d = load_csv(write(tmp_path, [HEADER]))
    assert len(d) == 0
    assert d.X.shape == (0, 11)


def test_columns_matched_by_name(tmp_path):
    cols = list(reversed(COLUMNS))
    values = dict(zip(COLUMNS, "18393;2;168;62.0;110;80;1;1;0;0;1;0".split(";")))
    p = write(tmp_path, [",".join(cols), ",".join(values[c] for c in cols)])
    assert load_csv(p, delimiter=",")[0] == PatientRecord(18393, 2, 168, 62.0, 110, 80, 1, 1, 0, 0, 1, 0)


def test_domain_violation_names_row(tmp_path):
    bad = "1;20228;1;156;85.0;140;90;7;1;0;0;1;1"
    p = write(tmp_path, [HEADER, ROW.format(id=0), bad, ROW.format(id=2)])
    with pytest.raises(LoadError) as exc:
        load_csv(p)
    assert exc.value.line == 3
    assert "row 2" in str(exc.value) and "cholesterol" in str(exc.value)


@pytest.mark.parametrize("row, fragment", [
    ("1;20228;1;156;85.0;140;90;1;1;0;0;1", "expected 13 fields"),
    ("1;abc;1;156;85.0;140;90;1;1;0;0;1;1", "non-numeric"),
    ("1;20228;1;156;;140;90;1;1;0;0;1;1", "non-numeric"),
    ("1;20228;1;156;85.0;140.5;90;1;1;0;0;1;1", "integer"),
    ("1;-5;1;156;85.0;140;90;1;1;0;0;1;1", "positive"),
])
def test_malformed_rows(tmp_path, row, fragment):
    with pytest.raises(LoadError, match=fragment):
        load_csv(write(tmp_path, [HEADER, row]))


def test_bad_header(tmp_path):
    with pytest.raises(LoadError, match="header"):
        load_csv(write(tmp_path, ["a;b;c", "1;2;3"]))


def test_out_of_range_pressures_are_kept(tmp_path):
    p = write(tmp_path, [HEADER, "0;18393;2;168;62.0;-150;4100;1;1;0;0;1;0"])
    assert load_csv(p)[0].ap_hi == -150


def test_write_load_round_trip(tmp_path):
    d = make_cardio(200, seed=3)
    for with_id in (False, True):
        path = tmp_path / f"rt{with_id}.csv"
        write_csv(d, path, with_id=with_id)
        assert load_csv(path).records == d.records


def _pairwise_dedup(records):
    kept = []
    for r in records:
        if not any(all(a == b for a, b in zip(r, k)) for k in kept):
            kept.append(r)
    return kept


def test_dedup_matches_pairwise_oracle():
    rng = np.random.default_rng(5)
    base = list(make_cardio(800, seed=9).records)
    dupes = [base[i] for i in rng.integers(0, len(base), 200)]
    records = base + dupes
    order = rng.permutation(len(records))
    d = Dataset(tuple(records[i] for i in order))
    out = deduplicate(d)
    oracle = _pairwise_dedup(d.records)
    assert list(out.records) == oracle
    assert out.removed == len(d) - len(oracle)


def test_dedup_two_identical():
    r = PatientRecord(18393, 2, 168, 62.0, 110, 80, 1, 1, 0, 0, 1, 0)
    out = deduplicate(Dataset((r, r)))
    assert out.records == (r,) and out.removed == 1


def test_dedup_idempotent(cardio500):
    d = Dataset(cardio500.records + cardio500.records[:50])
    once = deduplicate(d)
    assert deduplicate(once).records == once.records


@pytest.mark.parametrize("n, train", [(10, 6), (69976, 41985), (7, 4)])
def test_split_sizes(n, train):
    d = Dataset(tuple(PatientRecord(i + 1, 1, 160, 60.0, 120, 80, 1, 1, 0, 0, 1, i % 2) for i in range(n)))
    tr, te = percentage_split(d, SplitSpec(), seed=3)
    assert (len(tr), len(te)) == (train, n - train)
    if n <= 10:
        assert sorted(tr.records + te.records) == sorted(d.records)
        assert not set(tr.records) & set(te.records)


def test_split_deterministic(cardio500):
    a = percentage_split(cardio500, SplitSpec(seed=4))
    b = percentage_split(cardio500, SplitSpec(seed=4))
    assert a[0].records == b[0].records and a[1].records == b[1].records
    c = percentage_split(cardio500, SplitSpec(seed=5))
    assert c[0].records != a[0].records


def test_split_rejects_tiny():
    d = Dataset((PatientRecord(1, 1, 160, 60.0, 120, 80, 1, 1, 0, 0, 1, 0),))
    with pytest.raises(SplitError):
        percentage_split(d)


def test_splitspec_validation():
    with pytest.raises(ValueError):
        SplitSpec(train_fraction=1.0)
    with pytest.raises(ValueError):
        SplitSpec(k=1)


def _labels_dataset(labels):
    return Dataset(tuple(PatientRecord(i + 1, 1, 160, 60.0, 120, 80, 1, 1, 0, 0, 1, int(c))
                         for i, c in enumerate(labels)))


def test_fold_sizes_for_69976_records():
    d = _labels_dataset([0] * 35004 + [1] * 34972)
    sizes = sorted(len(f) for f in stratified_folds(d, 10, seed=1))
    assert sizes == [6997] * 4 + [6998] * 6


def test_one_of_each_class_per_fold():
    d = _labels_dataset([0, 1] * 10)
    for fold in stratified_folds(d, 10, seed=2):
        assert sorted(d.y[fold].tolist()) == [0, 1]


def test_folds_partition_exhaustively():
    d = make_cardio(200, seed=1)
    folds = stratified_folds(d, 10, seed=3)
    for i, a in enumerate(folds):
        for b in folds[i + 1:]:
            assert not set(a.tolist()) & set(b.tolist())
    assert sorted(i for f in folds for i in f.tolist()) == list(range(200))


def test_fold_class_proportions():
    d = make_cardio(997, seed=4)
    counts = d.class_counts()
    for fold in stratified_folds(d, 10, seed=8):
        for c in (0, 1):
            share = np.sum(d.y[fold] == c) / len(fold)
            assert abs(share - counts[c] / len(d)) <= 1 / len(fold)


def test_too_few_members_for_stratification():
    with pytest.raises(SplitError, match="fewer than k"):
        stratified_folds(_labels_dataset([0] * 20 + [1] * 3), 10)
    # unstratified folding does not care
    assert len(stratified_folds(_labels_dataset([0] * 20 + [1] * 3), 10, stratified=False)) == 10


@settings(max_examples=50, deadline=None)
@given(n=st.integers(2, 300), k=st.integers(2, 12), seed=st.integers(0, 2**16))
def test_unstratified_folds_property(n, k, seed):
    if k > n:
        return
    d = _labels_dataset([i % 2 for i in range(n)])
    folds = stratified_folds(d, k, seed=seed, stratified=False)
    sizes = [len(f) for f in folds]
    assert sum(sizes) == n and max(sizes) - min(sizes) <= 1
    assert np.array_equal(np.sort(np.concatenate(folds)), np.arange(n))
