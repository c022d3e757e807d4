"""Deterministic Turtle rendering of the patient ontology, and a reader for that output."""
from __future__ import annotations

import re

from ..data import FEATURES, FLOAT_COLUMNS
from ..rules import CLASS_LABELS, LABEL_CLASSES, format_number
from .model import Individual, Ontology, OntologySchema

BASE = "http://example.org/cardio-onto"
PREFIXES = (
    ("", BASE + "#"),
    ("owl", "http://www.w3.org/2002/07/owl#"),
    ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ("rdfs", "http://www.w3.org/2000/01/rdf-schema#"),
    ("xsd", "http://www.w3.org/2001/XMLSchema#"),
)


def _schema_lines(schema: OntologySchema) -> list[str]:
    parent = dict(schema.subclass_of)
    lines = [f"<{BASE}> rdf:type owl:Ontology .", ""]
    for cls in schema.classes:
        if cls in parent:
            lines += [f":{cls} rdf:type owl:Class ;", f"    rdfs:subClassOf :{parent[cls]} ."]
        else:
            lines.append(f":{cls} rdf:type owl:Class .")
    lines.append("")
    for prop in schema.data_properties:
        lines += [
            f":{prop} rdf:type owl:DatatypeProperty ;",
            f"    rdfs:domain :{schema.domain} ;",
            f"    rdfs:range xsd:{schema.range} .",
        ]
    return lines


def export_turtle(ontology: Ontology, comments=()) -> str:
    """Schema triples, then individuals sorted by name; properties in schema order."""
    lines = [f"# {c}" for c in comments]
    lines += [f"@prefix {p}: <{iri}> ." for p, iri in PREFIXES]
    lines.append("")
    lines += _schema_lines(ontology.schema)
    order = list(ontology.schema.data_properties)
    for ind in sorted(ontology.individuals, key=lambda i: i.iri_suffix):
        types = "owl:NamedIndividual , :Patient"
        if ind.inferred_class is not None:
            types += f" , :{CLASS_LABELS[ind.inferred_class]}"
        props = [p for p in order if p in ind.assertions]
        props += sorted(p for p in ind.assertions if p not in order)
        lines.append("")
        lines.append(f":{ind.iri_suffix} rdf:type {types}" + (" ;" if props else " ."))
        for j, p in enumerate(props):
            end = " ." if j == len(props) - 1 else " ;"
            lines.append(f'    :{p} "{format_number(ind.assertions[p])}"^^xsd:decimal{end}')
    return "\n".join(lines) + "\n"


_SUBJECT = re.compile(r"^:(\w+) rdf:type owl:NamedIndividual , :Patient((?: , :\w+)*) ([;.])$")
_PROPERTY = re.compile(r'^\s+:(\w+) "([^"]*)"\^\^xsd:decimal ([;.])$')


def import_turtle(text: str) -> Ontology:
    """Read back individuals written by :func:`export_turtle`.

    Only that layout is understood; the schema block is taken as the default
    schema rather than parsed.
    """
    individuals = []
    current = None
    for n, line in enumerate(text.splitlines(), start=1):
        if current is not None:
            m = _PROPERTY.match(line)
            if not m:
                raise ValueError(f"line {n}: expected a data property assertion")
            name, literal, end = m.groups()
            value = float(literal)
            if name not in FLOAT_COLUMNS and (name in FEATURES or name == "cardio") and value.is_integer():
                value = int(value)
            current.assertions[name] = value
            if end == ".":
                current = None
            continue
        m = _SUBJECT.match(line)
        if not m:
            continue
        name, extra, end = m.groups()
        inferred = None
        for cls in re.findall(r":(\w+)", extra):
            if cls not in LABEL_CLASSES:
                raise ValueError(f"line {n}: unknown class {cls}")
            inferred = LABEL_CLASSES[cls]
        ind = Individual(name, {}, inferred)
        individuals.append(ind)
        current = ind if end == ";" else None
    return Ontology(OntologySchema(), individuals)
