"""Ontology-based cardiovascular risk classification.

A decision tree is grown on patient records, each leaf becomes a SWRL rule,
and a forward-chaining reasoner classifies the patient individuals of an
ontology with those rules. Six further classifiers and two evaluation
protocols (10-fold cross-validation, 60/40 split) serve as the benchmark.
"""
from .data import Dataset, PatientRecord, SplitSpec, deduplicate, load_csv, write_csv
from .rules import RuleAtom, RuleSet, SwrlRule, classify_with_rules, extract_rules

__version__ = "0.1.0"

__all__ = [
    "Dataset", "PatientRecord", "RuleAtom", "RuleSet", "SplitSpec", "SwrlRule",
    "classify_with_rules", "deduplicate", "extract_rules", "load_csv", "write_csv",
]
