from conftest import unit

B = unit(0)
E = {i: unit(i) for i in range(1, 9)}
X = (3, -1, -1, -1, -1, -1, -1, -1, -1)
H = tuple(3 * x for x in X)


def vec(*terms):
    """Sum of (coefficient, vector) pairs."""
    out = [0] * 9
    for c, v in terms:
        out = [a + c * b for a, b in zip(out, v)]
    return tuple(out)
