"""Exact (big-integer / rational) helpers for matrix iteration.

Matrices with rational entries are rescaled to integer matrices so that
iterates stay as Python ints; ratios of successive iterates are then exact
``Fraction`` values.
"""
from fractions import Fraction
from math import lcm

import numpy as np


def _as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    # Fraction(float) is the exact binary value of the float
    return Fraction(float(v))


def is_integral(a):
    """True if every entry of ``a`` is an integer value (ints, integral floats or Fractions)."""
    arr = np.asarray(a, dtype=object)
    for v in arr.flat:
        if isinstance(v, Fraction):
            if v.denominator != 1:
                return False
        elif isinstance(v, (int, np.integer)):
            continue
        else:
            fv = float(v)
            if not np.isfinite(fv) or fv != int(fv):
                return False
    return True


def integerize(a):
    """Return ``(ints, den)`` with ``a == ints / den`` exactly.

    ``ints`` is a nested list (matrix) or list (vector) of Python ints and
    ``den`` a positive int.
    """
    arr = np.asarray(a, dtype=object)
    fracs = [_as_fraction(v) for v in arr.flat]
    den = 1
    for f in fracs:
        den = lcm(den, f.denominator)
    ints = [int(f * den) for f in fracs]
    if arr.ndim == 1:
        return ints, den
    n, m = arr.shape
    return [ints[i * m:(i + 1) * m] for i in range(n)], den


def matvec(rows, x):
    return [sum(a * b for a, b in zip(row, x)) for row in rows]


def iterates(rows, x, count):
    """Yield ``x, Ax, A^2 x, ...`` (``count + 1`` vectors) in exact integers."""
    y = list(x)
    yield y
    for _ in range(count):
        y = matvec(rows, y)
        yield y


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))
