"""Dataset splitting utilities."""

from fixtureml.cluster import _check_matrix


def _shuffled_indices(n, random_state):
    # small deterministic LCG so splits never depend on global random state
    indices = list(range(n))
    state = random_state * 2654435761 % 2147483647
    for i in range(n - 1, 0, -1):
        state = (state * 1103515245 + 12345) % 2147483647
        j = state % (i + 1)
        indices[i], indices[j] = indices[j], indices[i]
    return indices


def train_test_split(X, test_size=0.25, shuffle=True, random_state=0):
    """Split rows of X into a (train, test) pair."""
    rows, _width = _check_matrix(X)
    if isinstance(test_size, bool):
        raise TypeError("test_size must be a float")
    if not isinstance(test_size, (int, float)):
        raise TypeError("test_size must be a float")
    if test_size <= 0 or test_size >= 1:
        raise ValueError("test_size must be strictly between 0 and 1")
    if not isinstance(shuffle, bool):
        raise TypeError("shuffle must be a boolean")
    if isinstance(random_state, bool):
        raise TypeError("random_state must be an integer")
    if not isinstance(random_state, int):
        raise TypeError("random_state must be an integer")
    n_test = int(len(rows) * test_size)
    if n_test < 1:
        n_test = 1
    if shuffle:
        order = _shuffled_indices(len(rows), random_state)
    else:
        order = list(range(len(rows)))
    test_rows = [rows[i] for i in order[:n_test]]
    train_rows = [rows[i] for i in order[n_test:]]
    return train_rows, test_rows
