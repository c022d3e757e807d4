import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ..data import Dataset
from ..learners.base import check_features
from ..learners.tree import DecisionTreeClassifier
from ..rules import extract_rules
from .model import Individual, Ontology, build_ontology, infer


class OntologyClassifier(ClassifierMixin, BaseEstimator):
    """Tree-to-rules classifier: fit grows a decision tree and turns each leaf
    into a rule; predict loads the cases into an ontology and lets the
    reasoner assign the class.

    Tree parameters mirror :class:`DecisionTreeClassifier`.
    """

    def __init__(self, min_leaf=2, max_depth=None, use_gain_ratio=False, prune=True,
                 confidence=0.25):
        self.min_leaf = min_leaf
        self.max_depth = max_depth
        self.use_gain_ratio = use_gain_ratio
        self.prune = prune
        self.confidence = confidence

    def fit(self, X, y):
        self.tree_ = DecisionTreeClassifier(
            min_leaf=self.min_leaf, max_depth=self.max_depth, use_gain_ratio=self.use_gain_ratio,
            prune=self.prune, confidence=self.confidence,
        ).fit(X, y)
        self.rules_ = extract_rules(self.tree_)
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = self.tree_.n_features_in_
        return self

    def reason(self, ontology: Ontology):
        """Run inference over ``ontology`` in place; returns the inference report."""
        check_is_fitted(self, "rules_")
        return infer(ontology, self.rules_)

    def classify(self, d: Dataset):
        """Inferred classes for a dataset, with the populated ontology and report."""
        onto = build_ontology(d)
        report = self.reason(onto)
        return np.array(onto.inferred(), dtype=np.int64), onto, report

    def predict(self, X):
        check_is_fitted(self, "rules_")
        X = check_features(X, estimator=self, reset=False)
        names = self.tree_.tree_.feature_names
        onto = Ontology(individuals=[
            Individual(f"case_{i}", dict(zip(names, row))) for i, row in enumerate(X.tolist())
        ])
        self.reason(onto)
        return np.array(onto.inferred(), dtype=np.int64)
