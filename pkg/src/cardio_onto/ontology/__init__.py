from .classifier import OntologyClassifier
from .model import (
    Individual,
    InferenceError,
    InferenceReport,
    Ontology,
    OntologySchema,
    build_ontology,
    infer,
)
from .swrl import SwrlSyntaxError, parse_swrl, serialize_rule, serialize_swrl
from .turtle import export_turtle, import_turtle

__all__ = [
    "Individual", "InferenceError", "InferenceReport", "Ontology", "OntologyClassifier",
    "OntologySchema", "SwrlSyntaxError", "build_ontology", "export_turtle", "import_turtle",
    "infer", "parse_swrl", "serialize_rule", "serialize_swrl",
]
