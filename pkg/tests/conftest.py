import os
from pathlib import Path

import numpy as np
import pytest

from cardio_onto.data import Dataset, PatientRecord

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"


def real_data_path():
    """Kaggle cardio_train.csv, from $CARDIO_DATA or <repo>/data/cardio_train.csv."""
    env = os.environ.get("CARDIO_DATA")
    path = Path(env) if env else ROOT / "data" / "cardio_train.csv"
    return path if path.is_file() else None


def make_cardio(n, seed=0):
    """Synthetic records shaped like the Kaggle file, with a noisy logistic target."""
    rng = np.random.default_rng(seed)
    age = rng.integers(10800, 23700, n)
    gender = rng.integers(1, 3, n)
    height = rng.normal(164, 8, n).round().astype(int).clip(120)
    weight = rng.normal(74, 14, n).round(1).clip(35.0)
    ap_hi = rng.normal(127, 17, n).round().astype(int)
    ap_lo = (ap_hi * 0.6 + rng.normal(5, 8, n)).round().astype(int)
    chol = rng.choice([1, 2, 3], n, p=[0.75, 0.14, 0.11])
    gluc = rng.choice([1, 2, 3], n, p=[0.85, 0.07, 0.08])
    smoke = (rng.random(n) < 0.09).astype(int)
    alco = (rng.random(n) < 0.05).astype(int)
    active = (rng.random(n) < 0.8).astype(int)
    z = (0.06 * (ap_hi - 127) + 0.00025 * (age - 19500) + 0.5 * (chol - 1)
         + 0.02 * (weight - 74) - 0.2 * active + rng.logistic(0, 1, n))
    cardio = (z > 0).astype(int)
    cols = (age, gender, height, weight, ap_hi, ap_lo, chol, gluc, smoke, alco, active, cardio)
    return Dataset(tuple(PatientRecord(*(c[i].item() for c in cols)) for i in range(n)))


def random_record(rng):
    return PatientRecord(
        int(rng.integers(10000, 24000)), int(rng.integers(1, 3)), int(rng.integers(140, 200)),
        float(np.round(rng.uniform(40, 120), 1)), int(rng.integers(80, 200)),
        int(rng.integers(50, 120)), int(rng.integers(1, 4)), int(rng.integers(1, 4)),
        int(rng.integers(0, 2)), int(rng.integers(0, 2)), int(rng.integers(0, 2)),
        int(rng.integers(0, 2)),
    )


@pytest.fixture(scope="session")
def cardio500():
    return make_cardio(500, seed=7)


@pytest.fixture(scope="session")
def cardio3000():
    return make_cardio(3000, seed=11)


# Small attribute grids that can be enumerated exhaustively. Each fixture
# samples a noisy training set from its grid; the whole grid is the probe set.
GRIDS = {
    "pressure": dict(
        values=dict(age=(14000, 20000), gender=(1, 2), height=(155, 170), weight=(60.0, 80.5),
                    ap_hi=(110, 130, 150), ap_lo=(70, 90), cholesterol=(1, 2, 3), gluc=(1, 2, 3),
                    smoke=(0, 1), alco=(0, 1), active=(0, 1)),
        label=lambda r: r.ap_hi >= 130 and (r.cholesterol >= 2 or r.age > 18000),
    ),
    "categorical": dict(
        values=dict(age=(15000,), gender=(1, 2), height=(160, 175), weight=(55.5, 70.0, 95.0),
                    ap_hi=(120, 140), ap_lo=(80,), cholesterol=(1, 2, 3), gluc=(1, 2, 3),
                    smoke=(0, 1), alco=(0, 1), active=(0, 1)),
        label=lambda r: (r.cholesterol == 2) != (r.gluc == 3) or bool(r.smoke and r.alco),
    ),
    "noise": dict(
        values=dict(age=(12000, 16000, 21000), gender=(1, 2), height=(150, 165, 180),
                    weight=(50.0, 75.0), ap_hi=(100, 125, 160), ap_lo=(60, 85), cholesterol=(1, 3),
                    gluc=(1, 2), smoke=(0, 1), alco=(0,), active=(0, 1)),
        label=None,
    ),
}


def grid_fixture(name, n_train=600, noise=0.1, seed=0):
    """(training Dataset, every grid point as a Dataset) for one named grid."""
    import itertools

    grid = GRIDS[name]
    rng = np.random.default_rng(seed)
    points = [PatientRecord(*combo, 0) for combo in itertools.product(*grid["values"].values())]
    picks = rng.integers(0, len(points), n_train)
    train = []
    for i in picks:
        r = points[i]
        y = int(rng.random() < 0.5) if grid["label"] is None else int(grid["label"](r))
        if rng.random() < noise:
            y = 1 - y
        train.append(r._replace(cardio=y))
    return Dataset(tuple(train)), Dataset(tuple(points))


# Acceptance criteria append one line each; they are repeated in the summary.
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
