"""Synthetic dataset construction."""


def make_blobs(n_samples=20, n_features=2, centers=2, random_state=0):
    """Deterministic isotropic point clouds around integer-grid centers."""
    for name, value in (("n_samples", n_samples), ("n_features", n_features), ("centers", centers)):
        if isinstance(value, bool):
            raise TypeError(name + " must be an integer")
        if not isinstance(value, int):
            raise TypeError(name + " must be an integer")
        if value < 1:
            raise ValueError(name + " must be positive")
    if isinstance(random_state, bool):
        raise TypeError("random_state must be an integer")
    if not isinstance(random_state, int):
        raise TypeError("random_state must be an integer")
    if centers > n_samples:
        raise ValueError("centers cannot exceed n_samples")
    state = (random_state + 1) * 48271 % 2147483647
    rows = []
    for i in range(n_samples):
        center = i % centers
        row = []
        for j in range(n_features):
            state = (state * 16807) % 2147483647
            jitter = (state % 1000) / 1000.0
            row.append(center * 10.0 + j + jitter)
        rows.append(row)
    return rows
