"""Leaf-to-rule extraction from a fitted decision tree, and rule-based classification."""
from __future__ import annotations

import enum
import hashlib
import itertools
import json
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from decimal import Decimal
from typing import NamedTuple

from .data import FEATURES
from .learners._kernels import CATEGORICAL
from .learners.tree import DecisionTreeClassifier, Tree

CLASS_LABELS = {0: "absence", 1: "presence"}
LABEL_CLASSES = {v: k for k, v in CLASS_LABELS.items()}


class Comparator(enum.Enum):
    EQ = "equal"
    LE = "lessThanOrEqual"
    GT = "greaterThan"

    def holds(self, value, literal) -> bool:
        if self is Comparator.EQ:
            return value == literal
        if self is Comparator.LE:
            return value <= literal
        return value > literal

    @property
    def symbol(self) -> str:
        return {"EQ": "=", "LE": "<=", "GT": ">"}[self.name]


def format_number(value: float) -> str:
    """Plain decimal text (no exponent) that reads back to the same float.

    Integral values drop the fractional part: ``72.0 -> "72"``.
    """
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {value!r}")
    if value.is_integer():
        return str(int(value))
    return format(Decimal(repr(value)), "f")


@dataclass(frozen=True)
class RuleAtom:
    attribute: str
    comparator: Comparator
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))

    def holds(self, facts: Mapping) -> bool:
        return self.comparator.holds(facts[self.attribute], self.value)

    def __str__(self):
        return f"{self.attribute} {self.comparator.symbol} {format_number(self.value)}"


@dataclass(frozen=True)
class SwrlRule:
    """Conjunction of atoms over one patient variable implying a diagnostic class.

    An empty antecedent is the always-true rule. ``leaf`` and ``support``
    record provenance when the rule came from a tree; they take no part in
    equality.
    """

    antecedent: tuple[RuleAtom, ...]
    consequent: int
    variable: str = "pt"
    leaf: int | None = field(default=None, compare=False)
    support: tuple[int, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "antecedent", tuple(self.antecedent))
        if self.consequent not in CLASS_LABELS:
            raise ValueError(f"consequent must be 0 or 1, got {self.consequent!r}")

    def matches(self, facts: Mapping) -> bool:
        return all(atom.holds(facts) for atom in self.antecedent)

    @property
    def label(self) -> str:
        return CLASS_LABELS[self.consequent]

    def __str__(self):
        body = " AND ".join(str(a) for a in self.antecedent) or "TRUE"
        return f"IF {body} THEN {self.label}"


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[SwrlRule, ...]
    default_class: int = 0
    source: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def attributes(self) -> set[str]:
        return {a.attribute for r in self.rules for a in r.antecedent}

    def listing(self) -> str:
        """One ``IF ... THEN ...`` line per rule."""
        return "".join(f"{r}\n" for r in self.rules)


class Decision(NamedTuple):
    label: int
    rule_index: int | None  # None when the default class was used


def tree_fingerprint(tree: Tree) -> str:
    blob = json.dumps(tree.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def extract_rules(tree) -> RuleSet:
    """One rule per leaf, in left-to-right leaf order.

    Numeric and binary tests become ``LE``/``GT`` atoms in path order. A
    categorical attribute tested on the path contributes a single ``EQ`` atom,
    placed where the attribute was first tested; when the path only excludes
    values (``!=`` branches) the leaf yields one rule per remaining value.
    """
    if isinstance(tree, DecisionTreeClassifier):
        tree = tree.tree_
    names = tree.feature_names
    rules = []

    def emit(node, path, allowed):
        # path items: ("num", atom) or ("cat", feature index)
        cls = tree.node_class(node)
        support = (int(tree.count[node, 0]), int(tree.count[node, 1]))
        choices = []
        for kind, item in path:
            if kind == "num":
                choices.append([item])
            else:
                values = allowed[item]
                choices.append([RuleAtom(names[item], Comparator.EQ, v) for v in values])
        for combo in itertools.product(*choices):
            rules.append(SwrlRule(combo, cls, leaf=node, support=support))

    def walk(node, path, allowed):
        if tree.is_leaf(node):
            emit(node, path, allowed)
            return
        f = int(tree.feature[node])
        thr = float(tree.threshold[node])
        left, right = int(tree.left[node]), int(tree.right[node])
        if tree.kinds[f] == CATEGORICAL:
            current = allowed.get(f, tuple(tree.categories.get(f, ())) or (thr,))
            cat_path = path if f in allowed else path + [("cat", f)]
            walk(left, cat_path, {**allowed, f: tuple(v for v in current if v == thr)})
            walk(right, cat_path, {**allowed, f: tuple(v for v in current if v != thr)})
        else:
            walk(left, path + [("num", RuleAtom(names[f], Comparator.LE, thr))], allowed)
            walk(right, path + [("num", RuleAtom(names[f], Comparator.GT, thr))], allowed)

    walk(0, [], {})
    return RuleSet(tuple(rules), default_class=tree.majority_class, source=tree_fingerprint(tree))


def _facts(record) -> Mapping:
    if isinstance(record, Mapping):
        return record
    if hasattr(record, "_asdict"):
        return record._asdict()
    return dict(zip(FEATURES, record))


def decide(rules: RuleSet, record) -> Decision:
    """First matching rule's class, or the default class with ``rule_index=None``."""
    facts = _facts(record)
    for i, rule in enumerate(rules.rules):
        if rule.matches(facts):
            return Decision(rule.consequent, i)
    return Decision(rules.default_class, None)


def classify_with_rules(rules: RuleSet, record) -> int:
    return decide(rules, record).label
