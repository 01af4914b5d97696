"""Exact Fincke-Pohst enumeration over a positive definite integer Gram matrix.

Pure Python with rational arithmetic. Used when the compiled kernel is not
available and as its reference implementation.
"""
from fractions import Fraction
from math import isqrt


class CellLimitExceeded(Exception):
    pass


def ldl(gram):
    """Exact ``G = L D L^T`` with unit lower-triangular ``L``.

    Returns ``(d, mu)`` with ``mu[i][j] = L[i][j]`` for ``i > j``.
    """
    n = len(gram)
    G = [[Fraction(x) for x in row] for row in gram]
    mu = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n
    for j in range(n):
        s = G[j][j] - sum(mu[j][k] ** 2 * d[k] for k in range(j))
        if s <= 0:
            raise ValueError("Gram matrix is not positive definite")
        d[j] = s
        for i in range(j + 1, n):
            mu[i][j] = (G[i][j] - sum(mu[i][k] * mu[j][k] * d[k] for k in range(j))) / s
    return d, mu


def _floor_sqrt(r):
    """Largest integer m with m*m <= r for a non-negative Fraction r."""
    # m*m <= r iff m*m <= floor(r) for integer m.
    return isqrt(r.numerator // r.denominator)


def _int_range(center, radius_sq):
    """Integers x with (x - center)^2 <= radius_sq, exact for rational inputs."""
    if radius_sq < 0:
        return range(0)
    lo = center - Fraction(_floor_sqrt(radius_sq) + 1)
    hi = center + Fraction(_floor_sqrt(radius_sq) + 1)
    a = -((-lo.numerator) // lo.denominator)  # ceil
    b = hi.numerator // hi.denominator        # floor
    while (a - center) ** 2 > radius_sq and a <= b:
        a += 1
    while (b - center) ** 2 > radius_sq and b >= a:
        b -= 1
    return range(a, b + 1)


def enumerate_short(gram, bound, cell_limit=10**8):
    """All nonzero integer vectors ``x`` with ``x^T G x <= bound``.

    Returns a list of tuples (unsorted). Raises :class:`CellLimitExceeded`
    once more than ``cell_limit`` search nodes have been visited.
    """
    n = len(gram)
    d, mu = ldl(gram)
    bound = Fraction(bound)
    x = [0] * n
    out = []
    nodes = 0
    # In coordinates y_i = x_i + sum_{j>i} mu[j][i] x_j the norm is sum d_i y_i^2.

    def recurse(i, remaining):
        nonlocal nodes
        c = -sum(mu[j][i] * x[j] for j in range(i + 1, n))
        for xi in _int_range(c, remaining / d[i]):
            nodes += 1
            if nodes > cell_limit:
                raise CellLimitExceeded(f"more than {cell_limit} search nodes")
            x[i] = xi
            rem = remaining - d[i] * (xi - c) ** 2
            if i == 0:
                if any(x):
                    out.append(tuple(x))
            else:
                recurse(i - 1, rem)
        x[i] = 0

    recurse(n - 1, bound)
    return out
