"""Scoring functions over plain lists."""


def _check_vector(name, values, allow_float):
    if not isinstance(values, (list, tuple)):
        raise TypeError(name + " must be a list")
    if len(values) == 0:
        raise ValueError(name + " must not be empty")
    for value in values:
        if isinstance(value, bool):
            raise TypeError(name + " entries must be numbers")
        if isinstance(value, float) and not allow_float:
            raise TypeError(name + " entries must be integers")
        if not isinstance(value, (int, float)):
            raise TypeError(name + " entries must be numbers")
    return list(values)


def accuracy_score(y_true, y_pred):
    """Fraction of positions where the two label lists agree."""
    true_values = _check_vector("y_true", y_true, allow_float=False)
    pred_values = _check_vector("y_pred", y_pred, allow_float=False)
    if len(true_values) != len(pred_values):
        raise ValueError("y_true and y_pred must have the same length")
    hits = 0
    for a, b in zip(true_values, pred_values):
        if a == b:
            hits = hits + 1
    return hits / len(true_values)


def mean_squared_error(y_true, y_pred, squared=True):
    """Mean squared (or root mean squared) prediction error."""
    true_values = _check_vector("y_true", y_true, allow_float=True)
    pred_values = _check_vector("y_pred", y_pred, allow_float=True)
    if len(true_values) != len(pred_values):
        raise ValueError("y_true and y_pred must have the same length")
    if not isinstance(squared, bool):
        raise TypeError("squared must be a boolean")
    total = 0.0
    for a, b in zip(true_values, pred_values):
        total = total + (a - b) * (a - b)
    error = total / len(true_values)
    if squared:
        return error
    return error ** 0.5
