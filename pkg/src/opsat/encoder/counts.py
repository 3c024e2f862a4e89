"""Published closed-form sizes of each reduction rule.

Each entry maps a rule name to a function returning ``(aux_vars, clauses)``
for integer bits ``n``, fractional bits ``m`` and rule parameters.  These are
transcriptions, not derivations; :mod:`opsat.encoder.conformance` compares
them with what the emitters actually produce.
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, log2


def _int(x) -> int:
    x = Fraction(x)
    if x.denominator != 1:
        raise ValueError(f"closed form gave a non-integer count {x}")
    return int(x)


def full_adder(n, m):
    return 0, 10


def half_adder(n, m):
    return 0, 6


def complement(n, m):
    return m + n + 1, 8 * m + 8 * n + 5


def adder(n, m):
    return m + n + 1, 12 * m + 12 * n + 15


def multi_adder(n, m, k):
    t = 2 * k - 3
    return t * m + t * n + t, 12 * (k - 1) * m + 12 * (k - 1) * n + 15 * (k - 1)


def sum_(n, m, k):
    t = 4 * k - 1
    return t * m + t * n + t, (20 * k - 4) * m + (20 * k - 4) * n + (20 * k - 10)


def equal(n, m):
    return 1, 4 * m + 4 * n + 4


def not_equal(n, m):
    return m + n + 1, 4 * m + 4 * n + 6


def less_than(n, m):
    return 2 * m + 2 * n + 2, 15 * m + 11 * n + 6


def less_equal(n, m):
    return 2 * m + 2 * n + 3, 16 * m + 12 * n + 3


def multiplier(n, m):
    h = Fraction(3, 2)
    aux = 2 * m * m + 4 * m * n + m + h * n * n + h * n
    cls = 13 * m * m + 26 * m * n - 4 * m + 7 * n * n + 2 * n + 1
    return _int(aux), cls


def product(n, m, k):
    j = k - 1
    aux = (2 * j * m * m + 4 * j * m * n + Fraction(3, 2) * j * n * n
           + 2 * j * m + Fraction(5, 2) * j * n + 2 * k)
    cls = (13 * j * m * m + 26 * j * m * n + 7 * j * n * n
           + (7 - 3 * k) * m + (3 * k + 1) * n + 3 * (k + 1))
    return _int(aux), cls


def _power_blocks(n, m):
    aux = 2 * m * m + 4 * m * n + Fraction(3, 2) * n * n + 2 * m + Fraction(5, 2) * n + 4
    cls = 13 * m * m + 26 * m * n + m + 7 * n * n + m + 7 * n + 9
    return aux, cls


def power(n, m, k):
    W1 = m + n + 1
    if k == 0:
        return 0, W1
    if k == 1:
        return 0, 2 * (m + n) + 2
    pa, pc = _power_blocks(n, m)
    if k == -1:
        return _int(pa), pc
    K = abs(k)
    lg = floor(log2(K))
    extra = sum(K % (2 ** i) for i in range(2, lg + 1))
    aux = lg * (2 * m + 2 * n + 2) + extra * pa
    if k > 1:
        cls = lg * (3 * m + 3 * n + 1) + extra * pc + (1 + K % 2) * W1
    else:
        cls = ((lg - 1) * (3 * m + 3 * n + 1) + (1 + extra) * pc
               + (1 + K % 2) * W1 + 2 * (m + n))
    return _int(aux), _int(cls)


def absolute(n, m):
    return 0, 2 * m + 2 * n + 1


def floor_(n, m):
    return n + 3, 2 * m + 8 * n + 7


def ceil_(n, m):
    return n + 3, 2 * m + 8 * n + 7


def max_(n, m, k):
    return 3 * k * m + 3 * k * n + 5 * k, (21 * k + 2) * m + (17 * k + 2) * n + (9 * k + 3)


def min_(n, m, k):
    return max_(n, m, k)


def _log_gap(n, M):
    # Taken literally: log2 of floor(M), which is fractional unless floor(M)
    # is a power of two.  Integral results are returned as int.
    if M <= 0:
        return 0
    g = max(0, n - 1 - log2(floor(M)))
    return int(g) if float(g).is_integer() else g


def integer_domain(n, m, L, R):
    M = max(abs(L), abs(R))
    return 4 * m + 4 * n + 6, 33 * m + 24 * n + 8 + _log_gap(n, M)


def real_domain(n, m, L1, R1, L2, R2):
    M = max(abs(max(L1, L2)), abs(min(R1, R2)))
    return 8 * m + 8 * n + 10, 62 * m + 46 * n + 20 + _log_gap(n, M)


def enumeration_domain(n, m, k):
    return k * m + k * n + 2 * k, (5 * k + 2) * m + (5 * k + 2) * n + 6 * k + 3


def normalization(n, m):
    return m + n + 1, 8 * m + 8 * n + 5


CLOSED_FORMS = {
    "FullAdder": full_adder,
    "HalfAdder": half_adder,
    "Complement": complement,
    "Adder": adder,
    "MultiAdder": multi_adder,
    "Sum": sum_,
    "Equal": equal,
    "NotEqual": not_equal,
    "LessThan": less_than,
    "LessEqual": less_equal,
    "Multiplier": multiplier,
    "Product": product,
    "Power": power,
    "Absolute": absolute,
    "Floor": floor_,
    "Ceil": ceil_,
    "Max": max_,
    "Min": min_,
    "IntegerDomain": integer_domain,
    "RealDomain": real_domain,
    "EnumerationDomain": enumeration_domain,
    "Normalization": normalization,
}
