"""Feature scaling on plain nested lists."""

from fixtureml.cluster import _check_matrix


class StandardScaler:
    """Column-wise standardization to zero mean and unit variance."""

    def __init__(self, with_mean=True, with_std=True):
        if not isinstance(with_mean, bool):
            raise TypeError("with_mean must be a boolean")
        if not isinstance(with_std, bool):
            raise TypeError("with_std must be a boolean")
        self.with_mean = with_mean
        self.with_std = with_std
        self.mean_ = None
        self.scale_ = None

    def fit(self, X):
        rows, width = _check_matrix(X)
        n = float(len(rows))
        means = [0.0] * width
        for row in rows:
            means = [m + v / n for m, v in zip(means, row)]
        variances = [0.0] * width
        for row in rows:
            variances = [s + (v - m) * (v - m) / n for s, m, v in zip(variances, means, row)]
        scales = []
        for variance in variances:
            if variance > 0:
                scales.append(variance ** 0.5)
            else:
                scales.append(1.0)
        self.mean_ = means
        self.scale_ = scales
        return self

    def transform(self, X):
        if self.mean_ is None:
            raise RuntimeError("fit must be called before transform")
        rows, width = _check_matrix(X)
        if width != len(self.mean_):
            raise ValueError("X width differs from the fitted data")
        out = []
        for row in rows:
            if self.with_mean:
                row = [v - m for v, m in zip(row, self.mean_)]
            if self.with_std:
                row = [v / s for v, s in zip(row, self.scale_)]
            out.append(row)
        return out

    def fit_transform(self, X):
        self.fit(X)
        return self.transform(X)
