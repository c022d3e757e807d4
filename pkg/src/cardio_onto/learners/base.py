"""Input validation shared by the estimators."""
import numpy as np
from sklearn.utils.validation import check_array, check_X_y


class SingleClassError(ValueError):
    pass


def check_features(X, y=None, *, estimator=None, reset=True):
    if y is None:
        X = check_array(X, dtype=np.float64, estimator=estimator)
    else:
        X, y = check_X_y(X, y, dtype=np.float64, estimator=estimator)
    if not reset and estimator is not None and X.shape[1] != estimator.n_features_in_:
        raise ValueError(
            f"X has {X.shape[1]} features, but {type(estimator).__name__} "
            f"was fitted with {estimator.n_features_in_}"
        )
    X = np.ascontiguousarray(X)
    return X if y is None else (X, y)


def check_binary_target(y, require_both=False):
    y = np.asarray(y)
    values = set(np.unique(y).tolist())
    if not values <= {0, 1}:
        raise ValueError(f"target must be binary 0/1, got values {sorted(values)}")
    if require_both and len(values) < 2:
        raise SingleClassError(
            f"training set holds only class {values.pop()}; this learner needs both classes"
        )
    return y.astype(np.int64)
