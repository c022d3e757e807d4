"""Patient ontology: schema, individuals, and a forward-chaining rule reasoner."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..data import FEATURES, FLOAT_COLUMNS, TARGET, Dataset, PatientRecord
from ..rules import RuleSet

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class OntologySchema:
    classes: tuple = ("Patient", "Diagnostic", "presence", "absence")
    subclass_of: tuple = (("presence", "Diagnostic"), ("absence", "Diagnostic"))
    data_properties: tuple = FEATURES + (TARGET,)
    domain: str = "Patient"
    range: str = "decimal"


@dataclass
class Individual:
    iri_suffix: str
    assertions: dict
    inferred_class: int | None = None

    def to_record(self) -> PatientRecord:
        values = []
        for name in PatientRecord._fields:
            v = self.assertions[name]
            values.append(float(v) if name in FLOAT_COLUMNS else int(v))
        return PatientRecord(*values)


@dataclass
class Ontology:
    schema: OntologySchema = field(default_factory=OntologySchema)
    individuals: list = field(default_factory=list)

    def __len__(self):
        return len(self.individuals)

    def to_dataset(self) -> Dataset:
        return Dataset(tuple(ind.to_record() for ind in self.individuals))

    def inferred(self) -> list:
        return [ind.inferred_class for ind in self.individuals]


@dataclass(frozen=True)
class InferenceReport:
    """Counts of class assertions made by one reasoning pass."""

    individuals: int
    presence: int
    absence: int
    fallback: int  # individuals no rule matched; they got the default class
    rules: int

    def to_dict(self) -> dict:
        return {
            "individuals": self.individuals,
            "presence": self.presence,
            "absence": self.absence,
            "fallback": self.fallback,
            "rules": self.rules,
        }


class InferenceError(ValueError):
    pass


def build_ontology(d: Dataset, prefix: str = "patient_") -> Ontology:
    """One ``Patient`` individual per record, asserting all 12 data properties."""
    width = max(5, len(str(len(d))))
    individuals = [
        Individual(f"{prefix}{i:0{width}d}", dict(r._asdict()))
        for i, r in enumerate(d.records, start=1)
    ]
    return Ontology(OntologySchema(), individuals)


def infer(ontology: Ontology, rules: RuleSet) -> InferenceReport:
    """Fire ``rules`` over every individual and record the derived class.

    Rules conclude a class from data-property comparisons only, so a single
    pass reaches the fixpoint. The first matching rule wins; individuals that
    match none get ``rules.default_class`` and are counted as fallbacks.
    Only predictor properties are visible to the rules; the target property
    is never read.
    """
    used = sorted(rules.attributes())
    hidden = [a for a in used if a not in FEATURES]
    if hidden:
        raise InferenceError(f"rules reference properties outside the predictors: {hidden}")
    n = len(ontology.individuals)
    if n == 0:
        return InferenceReport(0, 0, 0, 0, len(rules))
    columns = {}
    for prop in used:
        try:
            columns[prop] = np.array([ind.assertions[prop] for ind in ontology.individuals],
                                     dtype=np.float64)
        except KeyError:
            missing = next(i.iri_suffix for i in ontology.individuals if prop not in i.assertions)
            raise InferenceError(f"rules use property {prop!r}, not asserted on {missing}") from None
    label = np.full(n, -1, dtype=np.int64)
    for rule in rules.rules:
        mask = label < 0
        if not mask.any():
            break
        for atom in rule.antecedent:
            mask &= atom.comparator.holds(columns[atom.attribute], atom.value)
        label[mask] = rule.consequent
    fallback = label < 0
    label[fallback] = rules.default_class
    n_fallback = int(fallback.sum())
    if n_fallback:
        log.warning("%d individual(s) matched no rule; default class used", n_fallback)
    for ind, cls in zip(ontology.individuals, label.tolist()):
        ind.inferred_class = cls
    n1 = int(label.sum())
    return InferenceReport(n, n1, n - n1, n_fallback, len(rules))
