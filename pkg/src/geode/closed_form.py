"""Two-dimensional Geode numbers: closed form and first-order step ratios."""

from __future__ import annotations

from fractions import Fraction
from math import factorial


def _pair(m1: int, m2: int) -> tuple[int, int]:
    if m1 < 0 or m2 < 0:
        raise ValueError(f"indices must be non-negative, got ({m1}, {m2})")
    return int(m1), int(m2)


def g2_closed(m1: int, m2: int) -> int:
    """G(m1, m2) = (2m1+3m2+3)! / ((2m1+2m2+3)(m1+m2+1)(m1+2m2+2)! m1! m2!)."""
    m1, m2 = _pair(m1, m2)
    num = factorial(2 * m1 + 3 * m2 + 3)
    den = ((2 * m1 + 2 * m2 + 3) * (m1 + m2 + 1)
           * factorial(m1 + 2 * m2 + 2) * factorial(m1) * factorial(m2))
    value, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"closed form not integral at ({m1}, {m2})")
    return value


def _m1_factors(m1: int, m2: int) -> tuple[int, int]:
    num = (2 * m1 + 3 * m2 + 2) * (2 * m1 + 3 * m2 + 3) * (2 * m1 + 2 * m2 + 1) * (m1 + m2)
    den = m1 * (2 * m1 + 2 * m2 + 3) * (m1 + m2 + 1) * (m1 + 2 * m2 + 2)
    return num, den


def _m2_factors(m1: int, m2: int) -> tuple[int, int]:
    num = ((2 * m1 + 3 * m2 + 1) * (2 * m1 + 3 * m2 + 2) * (2 * m1 + 3 * m2 + 3)
           * (2 * m1 + 2 * m2 + 1) * (m1 + m2))
    den = (m2 * (2 * m1 + 2 * m2 + 3) * (m1 + m2 + 1)
           * (m1 + 2 * m2 + 1) * (m1 + 2 * m2 + 2))
    return num, den


def g2_step_factor_m1(m1: int, m2: int) -> Fraction:
    """G(m1, m2) / G(m1 - 1, m2); requires m1 >= 1."""
    m1, m2 = _pair(m1, m2)
    if m1 == 0:
        raise ValueError("the m1 step ratio needs m1 >= 1")
    return Fraction(*_m1_factors(m1, m2))


def g2_step_factor_m2(m1: int, m2: int) -> Fraction:
    """G(m1, m2) / G(m1, m2 - 1); requires m2 >= 1."""
    m1, m2 = _pair(m1, m2)
    if m2 == 0:
        raise ValueError("the m2 step ratio needs m2 >= 1")
    return Fraction(*_m2_factors(m1, m2))


def _step(value: int, num: int, den: int) -> int:
    out, rem = divmod(value * num, den)
    if rem:
        raise ArithmeticError("step ratio left a fractional value")
    return out


def g2_fast(m1: int, m2: int) -> int:
    """G(m1, m2) by iterating the step ratios from G(0, 0) = 1.

    Walks up m2 at m1 = 0, then up m1; the running value stays an integer.
    """
    m1, m2 = _pair(m1, m2)
    value = 1
    for b in range(1, m2 + 1):
        value = _step(value, *_m2_factors(0, b))
    for a in range(1, m1 + 1):
        value = _step(value, *_m1_factors(a, m2))
    return value
