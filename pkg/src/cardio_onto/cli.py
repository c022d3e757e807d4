"""Command line entry point: ``cardio-onto {prepare,run,ontology,figures}``."""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import learners
from .data import SplitSpec, deduplicate, load_csv, percentage_split, stratified_folds, write_csv
from .figures import charts_from_table
from .metrics import (
    ONTOLOGY,
    EvaluationReport,
    compare,
    evaluate_cv,
    evaluate_split,
    read_comparison_csv,
)
from .ontology import Ontology, build_ontology, export_turtle, infer, serialize_swrl
from .ontology.classifier import OntologyClassifier

log = logging.getLogger("cardio_onto")

ALIASES = {
    "dt": "decision_tree", "rf": "random_forest", "lr": "logistic_regression",
    "nb": "naive_bayes", "knn": "knn", "svm": "linear_svm", "mlp": "mlp", "ann": "mlp",
    "onto": ONTOLOGY, "ontology": ONTOLOGY,
}
ALL = learners.ALGORITHMS + (ONTOLOGY,)
PROTOCOLS = ("folds10", "split60")
CLEAN_NAME = "cardio_clean.csv"


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    input: str
    delimiter: str = ";"
    algorithms: tuple = ALL
    protocols: tuple = PROTOCOLS
    seed: int = 1
    overrides: dict = field(default_factory=dict)
    out: str = "out"
    input_sha256: str = ""

    def embedded(self) -> str:
        """JSON of everything that determines results (the output path excluded)."""
        d = asdict(self)
        d.pop("out")
        d["input"] = Path(self.input).name
        d["algorithms"] = list(self.algorithms)
        d["protocols"] = list(self.protocols)
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    def params_for(self, algorithm: str) -> dict:
        o = self.overrides
        p = {}
        if algorithm in ("decision_tree", ONTOLOGY):
            if o.get("min_leaf") is not None:
                p["min_leaf"] = o["min_leaf"]
            if o.get("max_depth") is not None:
                p["max_depth"] = o["max_depth"]
        if algorithm == "knn" and o.get("k") is not None:
            p["k"] = o["k"]
        if algorithm == "random_forest" and o.get("trees") is not None:
            p["n_trees"] = o["trees"]
        return p


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def _parse_list(text: str, known, aliases=None, what="value") -> tuple:
    items = [t.strip().lower() for t in text.split(",") if t.strip()]
    if items == ["all"]:
        return tuple(known)
    out = []
    for t in items:
        name = (aliases or {}).get(t, t)
        if name not in known:
            raise CliError(f"unknown {what} {t!r}; choose from {', '.join(known)} or 'all'")
        if name not in out:
            out.append(name)
    if not out:
        raise CliError(f"no {what} given")
    return tuple(out)


def _config(args, algorithms=ALL, protocols=PROTOCOLS) -> RunConfig:
    path = Path(args.input)
    if not path.is_file():
        raise CliError(f"input file not found: {path}")
    overrides = {k: getattr(args, k, None) for k in ("min_leaf", "max_depth", "k", "trees")}
    return RunConfig(
        input=str(path), delimiter=args.delimiter,
        algorithms=_parse_list(args.algorithms, ALL, ALIASES, "algorithm") if getattr(args, "algorithms", None) else algorithms,
        protocols=_parse_list(args.protocols, PROTOCOLS, what="protocol") if getattr(args, "protocols", None) else protocols,
        seed=args.seed, overrides={k: v for k, v in overrides.items() if v is not None},
        out=args.out, input_sha256=_sha256(path),
    )


def _write_all(files: dict) -> None:
    """Write every file only after all contents were computed."""
    for path, text in files.items():
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        log.info("wrote %s", path)


def cmd_prepare(args) -> int:
    cfg = _config(args)
    raw = load_csv(cfg.input, cfg.delimiter)
    clean = deduplicate(raw)
    counts = clean.class_counts()
    summary = {
        "rows_before": len(raw),
        "rows_after": len(clean),
        "removed": clean.removed,
        "absence": counts[0],
        "presence": counts[1],
        "config": json.loads(cfg.embedded()),
    }
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(clean, out / CLEAN_NAME)
    _write_all({out / "prepare_summary.json": json.dumps(summary, indent=2, sort_keys=True) + "\n"})
    print(f"{len(raw)} -> {len(clean)} records ({clean.removed} duplicates removed); "
          f"absence {counts[0]}, presence {counts[1]}")
    return 0


def _evaluate(cfg: RunConfig, d, algorithm: str, protocol: str) -> EvaluationReport:
    params = cfg.params_for(algorithm)
    if protocol == "folds10":
        report = evaluate_cv(algorithm, d, k=10, seed=cfg.seed, params=params)
    else:
        report = evaluate_split(algorithm, d, SplitSpec(train_fraction=0.6, seed=cfg.seed), params)
    report.config = json.loads(cfg.embedded())
    return report


def cmd_run(args) -> int:
    cfg = _config(args)
    d = load_csv(cfg.input, cfg.delimiter)
    reports = []
    for algorithm in cfg.algorithms:
        for protocol in cfg.protocols:
            log.info("evaluating %s / %s", algorithm, protocol)
            r = _evaluate(cfg, d, algorithm, protocol)
            log.info("%s / %s accuracy %.4f in %.1fs", algorithm, protocol,
                     float(r.metrics.accuracy), r.wall_time)
            reports.append(r)
    table = compare(reports)
    out = Path(cfg.out)
    comments = [f"config: {cfg.embedded()}"]
    files = {out / "reports" / f"{r.algorithm}_{r.protocol}.json": r.dumps() for r in reports}
    files[out / "comparison.csv"] = table.to_csv(comments)
    files[out / "comparison.md"] = table.to_markdown(comments)
    _write_all(files)
    print(table.to_markdown(), end="")
    return 0


def cmd_ontology(args) -> int:
    cfg = _config(args, protocols=("split60",))
    d = load_csv(cfg.input, cfg.delimiter)
    params = cfg.params_for(ONTOLOGY)
    comments = [f"config: {cfg.embedded()}"]
    out = Path(cfg.out)
    files = {}
    for protocol in cfg.protocols:
        if protocol == "split60":
            train, test = percentage_split(d, SplitSpec(train_fraction=0.6, seed=cfg.seed))
            parts = [(train, test, None)]
            base = out
        else:
            folds = stratified_folds(d, 10, cfg.seed)
            parts = []
            for i, held in enumerate(folds, start=1):
                rest = np.ones(len(d), dtype=bool)
                rest[held] = False
                parts.append((d.subset(np.flatnonzero(rest)), d.subset(held), i))
            base = out / "folds10"
        individuals, summaries = [], []
        for train, test, fold in parts:
            clf = OntologyClassifier(**params).fit(train.X, train.y)
            onto = build_ontology(test, prefix="patient_" if fold is None else f"fold{fold:02d}_patient_")
            rep = infer(onto, clf.rules_)
            name = "rules.swrl" if fold is None else f"rules_fold{fold:02d}.swrl"
            files[base / name] = serialize_swrl(clf.rules_, comments)
            files[base / name.replace(".swrl", ".txt")] = "".join(f"# {c}\n" for c in comments) + clf.rules_.listing()
            individuals.extend(onto.individuals)
            summaries.append({"fold": fold, **rep.to_dict()})
        files[base / "ontology.ttl"] = export_turtle(Ontology(individuals=individuals), comments)
        pooled = {k: sum(s[k] for s in summaries) for k in ("individuals", "presence", "absence", "fallback", "rules")}
        files[base / "inference_summary.json"] = json.dumps(
            {"protocol": protocol, "pooled": pooled, "parts": summaries,
             "config": json.loads(cfg.embedded())}, indent=2, sort_keys=True) + "\n"
        report = _evaluate(cfg, d, ONTOLOGY, protocol)
        files[out / "reports" / f"ontology_{protocol}.json"] = report.dumps()
        print(f"{protocol}: {pooled['individuals']} individuals, presence {pooled['presence']}, "
              f"absence {pooled['absence']}, fallback {pooled['fallback']}; "
              f"accuracy {float(report.metrics.accuracy):.4f}")
    _write_all(files)
    return 0


def cmd_figures(args) -> int:
    out = Path(args.out)
    table = Path(args.table) if args.table else out / "comparison.csv"
    if not table.is_file():
        raise CliError(f"comparison table not found: {table} (run 'cardio-onto run' first)")
    comments, header, rows = read_comparison_csv(table.read_text(encoding="utf-8"))
    charts = charts_from_table(header, rows, comments)
    _write_all({out / "figures" / f"{metric}.svg": svg for metric, svg in charts.items()})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cardio-onto", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, data=True):
        p.add_argument("--out", default="out", help="output directory (default: out)")
        if data:
            p.add_argument("--input", required=True, help="delimited dataset file")
            p.add_argument("--delimiter", default=";")
            p.add_argument("--seed", type=int, default=1)

    def tree_flags(p):
        p.add_argument("--min-leaf", dest="min_leaf", type=int)
        p.add_argument("--max-depth", dest="max_depth", type=int)

    p = sub.add_parser("prepare", help="validate and deduplicate the raw dataset")
    common(p)
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("run", help="evaluate classifiers and write the comparison table")
    common(p)
    p.add_argument("--algorithms", default="all",
                   help="comma list of dt,rf,lr,nb,knn,svm,mlp,onto or 'all'")
    p.add_argument("--protocols", default="folds10,split60", help="comma list of folds10,split60")
    tree_flags(p)
    p.add_argument("--k", type=int, help="neighbours for knn")
    p.add_argument("--trees", type=int, help="trees in the random forest")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("ontology", help="tree -> SWRL rules -> ontology -> inference")
    common(p)
    p.add_argument("--protocols", default="split60")
    tree_flags(p)
    p.set_defaults(func=cmd_ontology)

    p = sub.add_parser("figures", help="SVG bar charts from comparison.csv")
    common(p, data=False)
    p.add_argument("--table", help="comparison CSV (default: <out>/comparison.csv)")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CliError, ValueError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"cardio-onto: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
