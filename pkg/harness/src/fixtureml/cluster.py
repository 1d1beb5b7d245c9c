"""K-means clustering on plain nested lists."""


def _check_matrix(X):
    """Validate a 2-D numeric matrix; returns (row copies, width)."""
    if not isinstance(X, (list, tuple)):
        raise TypeError("X must be a list of rows")
    if len(X) == 0:
        raise ValueError("X must not be empty")
    width = -1
    for row in X:
        if not isinstance(row, (list, tuple)):
            raise TypeError("each row of X must be a list")
        if width == -1:
            width = len(row)
        elif len(row) != width:
            raise ValueError("rows of X must have equal length")
        for value in row:
            if isinstance(value, bool):
                raise TypeError("matrix entries must be numbers")
            if not isinstance(value, (int, float)):
                raise TypeError("matrix entries must be numbers")
    if width < 1:
        raise ValueError("rows of X must not be empty")
    return [list(row) for row in X], width


def _check_positive_int(name, value):
    if isinstance(value, bool):
        raise TypeError(name + " must be an integer")
    if not isinstance(value, int):
        raise TypeError(name + " must be an integer")
    if value < 1:
        raise ValueError(name + " must be positive")
    return value


def _check_weights(sample_weight, n_rows):
    if not isinstance(sample_weight, (list, tuple)):
        raise TypeError("sample_weight must be a list")
    if len(sample_weight) != n_rows:
        raise ValueError("sample_weight length must match the number of rows")
    out = []
    for value in sample_weight:
        if isinstance(value, bool):
            raise TypeError("weights must be numbers")
        if not isinstance(value, (int, float)):
            raise TypeError("weights must be numbers")
        if value < 0:
            raise ValueError("weights must be non-negative")
        out.append(float(value))
    return out


def _distance(a, b):
    total = 0.0
    for x, y in zip(a, b):
        total = total + (x - y) * (x - y)
    return total


class KMeans:
    """Lloyd's algorithm with strict input validation."""

    def __init__(self, n_clusters=2, max_iter=300, tol=0.0001, random_state=0):
        self.n_clusters = _check_positive_int("n_clusters", n_clusters)
        self.max_iter = _check_positive_int("max_iter", max_iter)
        if isinstance(tol, bool):
            raise TypeError("tol must be a float")
        if not isinstance(tol, (int, float)):
            raise TypeError("tol must be a float")
        if tol < 0:
            raise ValueError("tol must be non-negative")
        self.tol = float(tol)
        if isinstance(random_state, bool):
            raise TypeError("random_state must be an integer")
        if not isinstance(random_state, int):
            raise TypeError("random_state must be an integer")
        self.random_state = random_state
        self.cluster_centers_ = None

    def _assign(self, rows):
        labels = []
        for row in rows:
            best = 0
            best_dist = _distance(row, self.cluster_centers_[0])
            for k in range(1, len(self.cluster_centers_)):
                dist = _distance(row, self.cluster_centers_[k])
                if dist < best_dist:
                    best = k
                    best_dist = dist
            labels.append(best)
        return labels

    def fit(self, X, y=None, sample_weight=None):
        rows, width = _check_matrix(X)
        if sample_weight is None:
            weights = [1.0] * len(rows)
        else:
            weights = _check_weights(sample_weight, len(rows))
        if self.n_clusters > len(rows):
            raise ValueError("n_clusters cannot exceed the number of samples")
        # evenly spaced seeds keep initialization deterministic yet spread out
        step = len(rows) // self.n_clusters
        self.cluster_centers_ = [list(rows[i * step]) for i in range(self.n_clusters)]
        for _ in range(self.max_iter):
            labels = self._assign(rows)
            moved = 0.0
            for k in range(self.n_clusters):
                total_weight = 0.0
                sums = [0.0] * width
                for i in range(len(rows)):
                    if labels[i] != k:
                        continue
                    weight = weights[i]
                    total_weight = total_weight + weight
                    sums = [s + v * weight for s, v in zip(sums, rows[i])]
                if total_weight > 0:
                    center = [s / total_weight for s in sums]
                else:
                    center = self.cluster_centers_[k]
                moved = moved + _distance(center, self.cluster_centers_[k])
                self.cluster_centers_[k] = center
            if moved > self.tol:
                continue
            return self
        return self

    def predict(self, X):
        if self.cluster_centers_ is None:
            raise RuntimeError("fit must be called before predict")
        rows, width = _check_matrix(X)
        if width != len(self.cluster_centers_[0]):
            raise ValueError("X width differs from the fitted data")
        return self._assign(rows)
