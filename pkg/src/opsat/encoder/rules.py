"""Clause-level reduction rules for fixed-point words.

Every rule writes its clauses through an :class:`Emitter` and allocates its
intermediate variables from the emitter's registry.  Output words are passed
in by the caller, so the fresh-variable delta of a call is exactly the rule's
intermediate-variable count.

Rules with known defects in their published clause lists read the
emitter's ``fixes`` set.  With the empty set the clauses are emitted exactly
as published; the corrected forms are described at each rule.
"""

from __future__ import annotations

from fractions import Fraction

from ..codec import BitWidth, FixedPointWord, encode_constant, is_const, neg as N
from ..errors import ArityError, BoundOverflow, EmptyDomain, WidthMismatch
from .emitter import (
    Emitter,
    FIX_DOMAIN_SKIP,
    FIX_MULTIPLIER_LSB,
    FIX_MULTIPLIER_OVERFLOW,
    FIX_OPPOSITE_SIGNS,
    FIX_ROUNDING_CARRY,
)


def _width(*words: FixedPointWord) -> BitWidth:
    w = words[0].width
    for other in words[1:]:
        if other.width != w:
            raise WidthMismatch(f"operand widths differ: {w} vs {other.width}")
    return w


# -- adders ------------------------------------------------------------------

def full_adder(em: Emitter, x, y, cin, z, cout) -> None:
    C = em.clause
    C(x, N(y), cin, z)
    C(x, y, N(cin), z)
    C(N(x), N(y), cin, N(z))
    C(N(x), y, N(cin), N(z))
    C(N(x), cout, z)
    C(x, N(cout), N(z))
    C(N(y), N(cin), cout)
    C(y, cin, N(cout))
    C(N(x), N(y), N(cin), z)
    C(x, y, cin, N(z))


def half_adder(em: Emitter, x, y, z, cout) -> None:
    C = em.clause
    C(x, N(y), z)
    C(N(x), N(y), N(z))
    C(N(x), cout, z)
    C(x, N(cout), N(z))
    C(y, N(cout))
    C(x, y, N(z))


def complement(em: Emitter, a: FixedPointWord, ap: FixedPointWord) -> None:
    """``ap`` is the two's complement form of the sign-magnitude word ``a``."""
    w = _width(a, ap)
    W = w.top
    C = em.clause
    s = a[W]
    d = em.fresh_many(W + 1)
    for i in range(W):
        C(s, N(a[i]), ap[i])
    for i in range(W):
        C(s, a[i], N(ap[i]))
    C(s, N(ap[W]))
    C(N(s), d[0])
    with em.guarded(N(s)):
        for i in range(W):
            half_adder(em, N(a[i]), d[i], ap[i], d[i + 1])
    C(N(s), d[W], ap[W])
    C(N(s), N(d[W]), N(ap[W]))
    C(*ap.bits[:W], N(ap[W]))


def adder(em: Emitter, a: FixedPointWord, b: FixedPointWord, c: FixedPointWord) -> None:
    """Two's complement ripple-carry adder; signed overflow is unsatisfiable.

    The carry chain needs ``d_0 .. d_{m+n+1}``: one carry into every bit
    plus the carry out of the sign position.
    """
    w = _width(a, b, c)
    W = w.top
    C = em.clause
    d = em.fresh_many(W + 2)
    C(N(d[0]))
    C(N(a[W]), N(b[W]), c[W])
    C(a[W], b[W], N(c[W]))
    for i in range(W + 1):
        C(a[i], b[i], N(d[i + 1]))
        C(N(a[i]), N(b[i]), d[i + 1])
    for i in range(W + 1):
        full_adder(em, a[i], b[i], d[i], c[i], d[i + 1])


def multi_adder(em: Emitter, words: list, c: FixedPointWord) -> None:
    k = len(words)
    if k < 2:
        raise ArityError("MultiAdder needs at least two operands")
    w = _width(*words, c)
    if k == 2:
        adder(em, words[0], words[1], c)
    elif k == 3:
        e = em.fresh_word(w)
        adder(em, words[0], words[1], e)
        adder(em, e, words[2], c)
    else:
        h = k // 2
        b1 = em.fresh_word(w)
        b2 = em.fresh_word(w)
        multi_adder(em, words[:h], b1)
        multi_adder(em, words[h:], b2)
        adder(em, b1, b2, c)


def sum_rule(em: Emitter, words: list, c: FixedPointWord) -> None:
    k = len(words)
    if k < 2:
        raise ArityError("Sum needs at least two operands")
    w = _width(*words, c)
    primes = []
    for a in words:
        ap = em.fresh_word(w)
        complement(em, a, ap)
        primes.append(ap)
    cp = em.fresh_word(w)
    multi_adder(em, primes, cp)
    complement(em, c, cp)


# -- relations ---------------------------------------------------------------

def _sign_link(em: Emitter, a, b, e) -> None:
    """``e`` holds iff the sign bits of ``a`` and ``b`` agree."""
    C = em.clause
    W = a.width.top
    C(N(a[W]), N(b[W]), e)
    C(a[W], b[W], e)
    C(a[W], N(b[W]), N(e))
    C(N(a[W]), b[W], N(e))


def equal(em: Emitter, a: FixedPointWord, b: FixedPointWord) -> None:
    w = _width(a, b)
    W = w.top
    C = em.clause
    e = em.fresh()
    _sign_link(em, a, b, e)
    for i in range(W):
        C(N(e), N(a[i]), b[i])
    for i in range(W):
        C(N(e), a[i], N(b[i]))
    for i in range(W):
        C(e, N(a[i]))
    for i in range(W):
        C(e, N(b[i]))


def not_equal(em: Emitter, a: FixedPointWord, b: FixedPointWord) -> None:
    w = _width(a, b)
    W = w.top
    C = em.clause
    e = em.fresh()
    p = em.fresh_many(W)
    _sign_link(em, a, b, e)
    for i in range(W):
        C(N(e), N(a[i]), b[i], p[i])
    for i in range(W):
        C(N(e), a[i], N(b[i]), p[i])
    for i in range(W):
        C(N(e), N(a[i]), N(b[i]), N(p[i]))
    for i in range(W):
        C(N(e), a[i], b[i], N(p[i]))
    C(N(e), *p)
    C(e, *a.bits[:W], *b.bits[:W])


def _order_chains(em: Emitter, a, b, d, q, p) -> None:
    """Clauses shared by LessThan and LessEqual.

    ``q_i`` holds when some position at or above ``i`` has ``a`` set and ``b``
    clear, ``p_i`` the converse.  On the fractional positions the chains are
    switched off when ``d`` (both fractions zero) holds.
    """
    w = a.width
    m, W = w.m, w.top
    C = em.clause
    C(N(q[W]))
    C(N(p[W]))
    for i in range(m, W):
        C(N(a[i]), b[i], q[i])
    for i in range(m, W):
        C(N(q[i + 1]), q[i])
    for i in range(m, W):
        C(a[i], q[i + 1], N(q[i]))
    for i in range(m, W):
        C(N(b[i]), q[i + 1], N(q[i]))
    for i in range(m, W):
        C(a[i], N(b[i]), p[i])
    for i in range(m, W):
        C(N(p[i + 1]), p[i])
    for i in range(m, W):
        C(N(a[i]), p[i + 1], N(p[i]))
    for i in range(m, W):
        C(b[i], p[i + 1], N(p[i]))
    C(*a.bits[:m], *b.bits[:m], d)
    for i in range(m):
        C(N(a[i]), N(d))
    for i in range(m):
        C(N(b[i]), N(d))
    for i in range(m):
        C(N(d), q[i])
    for i in range(m):
        C(N(d), p[i])
    for i in range(m):
        C(d, N(a[i]), b[i], q[i])
    for i in range(m):
        C(d, N(q[i + 1]), q[i])
    for i in range(m):
        C(d, a[i], q[i + 1], N(q[i]))
    for i in range(m):
        C(d, N(b[i]), q[i + 1], N(q[i]))
    for i in range(m):
        C(d, a[i], N(b[i]), p[i])
    for i in range(m):
        C(d, N(p[i + 1]), p[i])
    for i in range(m):
        C(d, N(a[i]), p[i + 1], N(p[i]))
    for i in range(m):
        C(d, b[i], p[i + 1], N(p[i]))


def _order_vars(em: Emitter, W: int):
    d = em.fresh()
    q = em.fresh_many(W + 1)
    p = em.fresh_many(W + 1)
    return d, q, p


def less_than(em: Emitter, a: FixedPointWord, b: FixedPointWord) -> None:
    w = _width(a, b)
    W = w.top
    C = em.clause
    d, q, p = _order_vars(em, W)
    C(a[W], N(b[W]))
    C(N(a[W]), b[W], *a.bits[:W], *b.bits[:W])
    _order_chains(em, a, b, d, q, p)
    # The magnitude ordering below is published unconditionally, which also
    # rejects a = -b != 0.  With the fix, t (only possible when a is negative
    # and b is not) releases it; the sign clauses above exclude -0 < +0.
    guard = ()
    if em.fixed(FIX_OPPOSITE_SIGNS):
        t = em.fresh()
        C(N(t), a[W])
        C(N(t), N(b[W]))
        guard = (t,)
    with em.guarded(*guard):
        C(q[0], p[0])
        for i in range(W):
            C(N(q[i]), N(p[i]), q[i + 1], p[i + 1])
    for i in range(W):
        C(a[W], b[W], N(q[i]), p[i])
    for i in range(W):
        C(N(a[W]), N(b[W]), q[i], N(p[i]))


def less_equal(em: Emitter, a: FixedPointWord, b: FixedPointWord) -> None:
    w = _width(a, b)
    W = w.top
    C = em.clause
    d, q, p = _order_vars(em, W)
    for i in range(W):
        C(a[W], N(b[W]), N(a[i]))
    for i in range(W):
        C(a[W], N(b[W]), N(b[i]))
    _order_chains(em, a, b, d, q, p)
    for i in range(W):
        C(a[W], b[W], N(q[i]), p[i])
    for i in range(W):
        C(N(a[W]), N(b[W]), q[i], N(p[i]))


# -- multiplication ----------------------------------------------------------

def multiplier(em: Emitter, a: FixedPointWord, b: FixedPointWord, c: FixedPointWord) -> None:
    """Array multiplier over the magnitudes, truncating toward zero.

    Partial products whose position exceeds the top output bit are forbidden,
    so overflow is unsatisfiable.  Two corrections exist:

    * ``multiplier-overflow``: the published overflow clause reads
      ``¬a_i ∨ ¬b_i``; the pair that overflows is ``(a_i, b_j)``.
    * ``multiplier-lsb``: the published array starts at ``i + j = 1``.  With no
      fractional bits position 0 is the output's least bit, so the corrected
      form adds ``T_{0,0}`` and ties the output bit to it.
    """
    w = _width(a, b, c)
    m, W = w.m, w.top
    C = em.clause
    lim = 2 * m + w.n - 1
    lsb_fix = em.fixed(FIX_MULTIPLIER_LSB) and m == 0

    aux: dict = {}

    def var(kind, i, j):
        key = (kind, i, j)
        v = aux.get(key)
        if v is None:
            v = aux[key] = em.fresh()
        return v

    T = lambda i, j: var("T", i, j)  # noqa: E731
    D = lambda i, j: var("d", i, j)  # noqa: E731
    E = lambda i, j: var("e", i, j)  # noqa: E731

    lo = 0 if lsb_fix else 1
    pairs = [(i, j) for i in range(W) for j in range(W) if lo <= i + j <= lim]

    C(N(a[W]), b[W], c[W])
    C(a[W], N(b[W]), c[W])
    C(N(a[W]), N(b[W]), N(c[W]))
    C(a[W], b[W], N(c[W]))
    for i, j in pairs:
        C(N(a[i]), N(b[j]), T(i, j))
    for i, j in pairs:
        C(a[i], N(T(i, j)))
    for i, j in pairs:
        C(b[j], N(T(i, j)))
    for i in range(1, W):
        C(N(D(i, 0)), T(i, 0))
    for i in range(1, W):
        C(D(i, 0), N(T(i, 0)))
    if lsb_fix:
        C(N(D(0, 0)), T(0, 0))
        C(D(0, 0), N(T(0, 0)))
    C(N(D(W, 0)))
    for i in range(1, W):
        C(N(E(0, i)))
    for i in range(W):
        for j in range(1, W):
            if 1 <= i + j <= lim:
                full_adder(em, T(i, j), D(i + 1, j - 1), E(i, j), D(i, j), E(i + 1, j))
    for j in range(1, m):
        C(N(D(W, j)), E(W, j))
    for j in range(1, m):
        C(D(W, j), N(E(W, j)))
    for i in range(W):
        t = min(i + m, W - 1)
        C(N(c[i]), D(i + m - t, t))
    for i in range(W):
        t = min(i + m, W - 1)
        C(c[i], N(D(i + m - t, t)))
    for j in range(m, W):
        C(N(E(2 * m + w.n - j, j)))
    fix_overflow = em.fixed(FIX_MULTIPLIER_OVERFLOW)
    for i in range(W):
        for j in range(W):
            if i + j > lim:
                C(N(a[i]), N(b[j] if fix_overflow else b[i]))


def product(em: Emitter, words: list, c: FixedPointWord) -> None:
    """``c`` is the product of ``words``; zero when some factor is zero.

    A product of nonzero factors that truncates to zero is unsatisfiable
    (``∨ c_j ∨ d``).
    """
    k = len(words)
    if k < 2:
        raise ArityError("Product needs at least two operands")
    w = _width(*words, c)
    W = w.top
    C = em.clause
    d = em.fresh()
    e = em.fresh_many(k)
    for a in words:
        C(*a.bits[:W], d)
    for i, a in enumerate(words):
        C(*a.bits[:W], e[i])
    for i, a in enumerate(words):
        for j in range(W):
            C(N(a[j]), N(e[i]))
    C(*e, N(d))
    C(*c.bits[:W], d)
    for j in range(W):
        C(N(d), N(c[j]))
    acc = em.fresh_word(w)
    with em.guarded(d):
        multiplier(em, words[0], words[1], acc)
    for a in words[2:]:
        nxt = em.fresh_word(w)
        with em.guarded(d):
            multiplier(em, acc, a, nxt)
        acc = nxt
    for j in range(W + 1):
        C(d, N(acc[j]), c[j])
    for j in range(W + 1):
        C(d, acc[j], N(c[j]))


def copy_word(em: Emitter, a: FixedPointWord, c: FixedPointWord) -> None:
    for i in range(a.width.size):
        em.clause(N(a[i]), c[i])
    for i in range(a.width.size):
        em.clause(a[i], N(c[i]))


def power(em: Emitter, a: FixedPointWord, k: int, c: FixedPointWord) -> None:
    """``c = a ** k`` for an integer constant ``k`` by repeated squaring.

    The case conditions on ``k`` are decided while emitting, so only the
    applicable branch produces clauses.
    """
    w = _width(a, c)
    W, m = w.top, w.m
    C = em.clause
    one = encode_constant(1, w)
    if k == 0:
        for i in range(W + 1):
            if i != m:
                C(N(c[i]))
        C(c[m])
        return
    if k == 1:
        copy_word(em, a, c)
        return
    if k == -1:
        product(em, [a, c], one)
        return
    mag = abs(k)
    d1 = em.fresh_word(w)
    power(em, a, mag // 2, d1)
    d2 = em.fresh_word(w)
    product(em, [d1, d1], d2)
    sel = d2
    if mag % 2 == 1:
        d3 = em.fresh_word(w)
        product(em, [d2, a], d3)
        sel = d3
    if k > 1:
        copy_word(em, sel, c)
    else:
        product(em, [sel, c], one)


# -- unary ---------------------------------------------------------------------

def absolute(em: Emitter, a: FixedPointWord, c: FixedPointWord) -> None:
    w = _width(a, c)
    W = w.top
    C = em.clause
    C(N(c[W]))
    for i in range(W):
        C(N(a[i]), c[i])
    for i in range(W):
        C(a[i], N(c[i]))


def _round_to_integer(em: Emitter, a: FixedPointWord, c: FixedPointWord, up: bool) -> None:
    """Shared body of Floor (``up=False``) and Ceil (``up=True``).

    ``e`` selects plain truncation of the fraction; otherwise the integer part
    is incremented in magnitude through a half-adder chain.  As published the
    chain's carry-in ``h_m`` is forced false, so the increment adds nothing.
    The ``rounding-carry`` correction forces ``h_m`` true and forbids a carry
    out of the top bit.
    """
    w = _width(a, c)
    m, W = w.m, w.top
    C = em.clause
    s = a[W]
    d = em.fresh()
    e = em.fresh()
    h = em.fresh_many(w.n + 1)  # h[i - m] is h_i for i = m..m+n
    for i in range(m):
        C(N(c[i]))
    C(N(s), c[W])
    C(s, N(c[W]))
    C(*a.bits[:m], d)
    for i in range(m):
        C(N(a[i]), N(d))
    C(N(d), e)
    if up:
        C(N(s), e)
        C(d, s, N(e))
    else:
        C(s, e)
        C(d, N(s), N(e))
    for i in range(m, W):
        C(N(e), N(a[i]), c[i])
    for i in range(m, W):
        C(N(e), a[i], N(c[i]))
    fix = em.fixed(FIX_ROUNDING_CARRY)
    C(h[0] if fix else N(h[0]))
    with em.guarded(e):
        for i in range(m, W):
            half_adder(em, a[i], h[i - m], c[i], h[i - m + 1])
    if fix:
        C(e, N(h[w.n]))


def floor_rule(em: Emitter, a: FixedPointWord, c: FixedPointWord) -> None:
    _round_to_integer(em, a, c, up=False)


def ceil_rule(em: Emitter, a: FixedPointWord, c: FixedPointWord) -> None:
    _round_to_integer(em, a, c, up=True)


def max_rule(em: Emitter, words: list, c: FixedPointWord) -> None:
    if not words:
        raise ArityError("Max needs at least one operand")
    for a in words:
        less_equal(em, a, c)
    enumeration_domain(em, c, words)


def min_rule(em: Emitter, words: list, c: FixedPointWord) -> None:
    if not words:
        raise ArityError("Min needs at least one operand")
    for a in words:
        less_equal(em, c, a)
    enumeration_domain(em, c, words)


# -- domains ---------------------------------------------------------------------

def enumeration_domain(em: Emitter, a: FixedPointWord, options: list) -> None:
    """``a`` equals one of ``options`` bit for bit."""
    k = len(options)
    if k == 0:
        raise EmptyDomain("enumeration domain has no elements")
    w = _width(a, *options)
    W = w.top
    C = em.clause
    d = [em.fresh_many(W + 1) for _ in range(k)]
    e = em.fresh_many(k)
    for i, b in enumerate(options):
        for j in range(W + 1):
            C(N(a[j]), N(b[j]), d[i][j])
    for i, b in enumerate(options):
        for j in range(W + 1):
            C(a[j], b[j], d[i][j])
    for i, b in enumerate(options):
        for j in range(W + 1):
            C(a[j], N(b[j]), N(d[i][j]))
    for i, b in enumerate(options):
        for j in range(W + 1):
            C(N(a[j]), b[j], N(d[i][j]))
    for i in range(k):
        C(*[N(x) for x in d[i]], e[i])
    for i in range(k):
        for j in range(W + 1):
            C(d[i][j], N(e[i]))
    C(*e)
    for j in range(W + 1):
        C(*[N(b[j]) for b in options], a[j])
    for j in range(W + 1):
        C(*[b[j] for b in options], N(a[j]))


def _ceil_log2(x: Fraction) -> int:
    """Smallest integer ``t`` with ``2**t >= x`` (``x > 0``)."""
    x = Fraction(x)
    t = 0
    while Fraction(2) ** t < x:
        t += 1
    while t > -4096 and Fraction(2) ** (t - 1) >= x:
        t -= 1
    return t


def _clamped_max(w: BitWidth, bound: Fraction) -> Fraction:
    """Largest magnitude left after removing bits heavier than ``bound``."""
    total = Fraction(0)
    for i in range(w.top):
        weight = Fraction(2) ** (i - w.m)
        if weight <= bound:
            total += weight
    return total


def integer_domain(em: Emitter, a: FixedPointWord, L: int, R: int) -> None:
    """``a`` is an integer with ``L <= a <= R``.

    The published form skips the ``L <= a`` comparator when
    ``|L - 1| = 2**ceil(log2 max(|L|, |R|))``, but the bit clamp only removes
    bits heavier than ``max(|L|, |R|)``, so the skip is unsound whenever that
    maximum is itself a power of two.  The ``domain-skip`` correction omits a
    comparator only when the clamp and sign clauses already imply it.
    """
    w = a.width
    m, n, W = w.m, w.n, w.top
    L, R = int(L), int(R)
    if L > R:
        raise EmptyDomain(f"integer range {L}..{R} is empty")
    top = 2 ** n - 1
    if L > top or R < -top:
        raise BoundOverflow(f"integer range {L}..{R} lies outside {w}")
    C = em.clause
    s = a[W]
    for i in range(m):
        C(N(a[i]))
    if L > 0:
        C(N(s))
    if R < 0:
        C(s)
    if L == 0:
        for i in range(m, W):
            C(N(s), N(a[i]))
    if R == 0:
        for i in range(m, W):
            C(s, N(a[i]))
    M = max(abs(L), abs(R))
    for i in range(m, W):
        if 2 ** (i - m) > M:
            C(N(a[i]))
    if em.fixed(FIX_DOMAIN_SKIP):
        cap = _clamped_max(BitWidth(n, 0), Fraction(M))
        need_lo = L != 0 and not (L < 0 and -L >= cap)
        need_hi = R != 0 and not (R > 0 and R >= cap)
        # Bounds outside the word's range are implied as well.
        need_lo = need_lo and L > -top
        need_hi = need_hi and R < top
    else:
        p = 2 ** _ceil_log2(Fraction(M)) if M > 0 else None
        need_lo = L != 0 and abs(L) < top and abs(L - 1) != p
        need_hi = R != 0 and abs(R) < top and abs(R + 1) != p
    if need_lo:
        less_equal(em, encode_constant(L, w), a)
    if need_hi:
        less_equal(em, a, encode_constant(R, w))


def real_domain(em: Emitter, a: FixedPointWord, L1=None, R1=None, L2=None, R2=None) -> None:
    """``L1 <= a <= R1`` and ``L2 < a < R2``; ``None`` leaves a side open.

    Absent bounds take the sentinel values ``-2**n`` / ``2**n``, which lie
    outside every word and so disable their comparators.  Bounds must be
    representable at the word's width; callers round them inward first.
    The ``domain-skip`` correction applies the same soundness test as in
    :func:`integer_domain` to the open comparators.
    """
    w = a.width
    m, n, W = w.m, w.n, w.top
    big = Fraction(2 ** n)
    L1 = -big if L1 is None else Fraction(L1)
    L2 = -big if L2 is None else Fraction(L2)
    R1 = big if R1 is None else Fraction(R1)
    R2 = big if R2 is None else Fraction(R2)
    lo, hi = max(L1, L2), min(R1, R2)
    if lo > hi or (lo == hi and not L2 < lo < R2):
        raise EmptyDomain(f"real range ({lo}, {hi}) is empty")
    C = em.clause
    s = a[W]
    if L1 > 0 or L2 >= 0:
        C(N(s))
    if R1 < 0 or R2 <= 0:
        C(s)
    if L1 == 0:
        for i in range(W):
            C(N(s), N(a[i]))
    if R1 == 0:
        for i in range(W):
            C(s, N(a[i]))
    if L2 == 0 or R2 == 0:
        C(*a.bits[:W])
    M = max(abs(lo), abs(hi))
    for i in range(W):
        if Fraction(2) ** (i - m) > M:
            C(N(a[i]))

    def word_of(v):
        if abs(v) > w.max_value:
            raise BoundOverflow(f"bound {v} does not fit in {w}")
        return encode_constant(v, w)

    if em.fixed(FIX_DOMAIN_SKIP):
        cap = _clamped_max(w, M)
        nonneg = L1 > 0 or L2 >= 0
        nonpos = R1 < 0 or R2 <= 0
        need_l1 = L1 != 0 and L1 > -cap and not (nonneg and L1 <= 0)
        need_r1 = R1 != 0 and R1 < cap and not (nonpos and R1 >= 0)
        need_l2 = L2 != 0 and L2 >= -cap and not (nonneg and L2 < 0)
        need_r2 = R2 != 0 and R2 <= cap and not (nonpos and R2 > 0)
    else:
        p = Fraction(2) ** _ceil_log2(M) if M > 0 else None
        need_l1 = L1 != 0 and abs(L1) < big
        need_l2 = L2 != 0 and abs(L2) < big and abs(L2) != p
        need_r1 = R1 != 0 and abs(R1) < big
        need_r2 = R2 != 0 and abs(R2) < big and abs(R2) != p
    if need_l1:
        less_equal(em, word_of(L1), a)
    if need_l2:
        less_than(em, word_of(L2), a)
    if need_r1:
        less_equal(em, a, word_of(R1))
    if need_r2:
        less_than(em, a, word_of(R2))


# -- objective -----------------------------------------------------------------

def normalization(em: Emitter, a: FixedPointWord, c: FixedPointWord) -> None:
    """``c`` read as unsigned equals ``a + 2**(m+n)`` (in units of the LSB)."""
    w = _width(a, c)
    W = w.top
    target = FixedPointWord(c.bits[:W] + (N(c[W]),), w)
    complement(em, a, target)


# -- relation helpers -----------------------------------------------------------

def indicator(em: Emitter, relation, a: FixedPointWord, b: FixedPointWord, r) -> None:
    """Tie Boolean ``r`` to the truth of ``a <relation> b``.

    The relation's clauses are emitted under ``¬r`` and its complement's under
    ``r``.
    """
    pos, negated = RELATION_PAIRS[relation]
    with em.guarded(N(r)):
        emit_relation(em, pos, a, b)
    with em.guarded(r):
        emit_relation(em, negated, a, b)


def emit_relation(em: Emitter, op: str, a: FixedPointWord, b: FixedPointWord) -> None:
    if op == "=":
        equal(em, a, b)
    elif op == "!=":
        not_equal(em, a, b)
    elif op == "<":
        less_than(em, a, b)
    elif op == "<=":
        less_equal(em, a, b)
    elif op == ">":
        less_than(em, b, a)
    elif op == ">=":
        less_equal(em, b, a)
    else:
        raise ValueError(f"unknown relation {op!r}")


RELATION_PAIRS = {
    "=": ("=", "!="),
    "!=": ("!=", "="),
    "<": ("<", ">="),
    "<=": ("<=", ">"),
    ">": (">", "<="),
    ">=": (">=", "<"),
}


def is_constant_word(word: FixedPointWord) -> bool:
    return all(is_const(b) for b in word.bits)
