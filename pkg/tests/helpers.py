"""Independent reference computations and mutation tools shared by the tests.

Nothing here calls into the package's arithmetic: hyper-Catalan numbers come
straight from factorials and Geode numbers from textbook multivariate long
division, so agreement with the library is a genuine cross-check.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import comb, factorial

from geode.recurrence import IndexPolynomial, PureRecurrence, RationalCoeff, RecurrenceSystem


def naive_hyper_catalan(m) -> int:
    num = factorial(sum((i + 2) * x for i, x in enumerate(m)))
    den = factorial(1 + sum((i + 1) * x for i, x in enumerate(m)))
    for x in m:
        den *= factorial(x)
    assert num % den == 0
    return num // den


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def naive_P(n: int, k: int) -> dict:
    return {m: naive_hyper_catalan(m)
            for m in itertools.product(range(n + 1), repeat=k) if sum(m) == n}


def long_divide(p: dict, k: int) -> tuple[dict, dict]:
    """Divide p by t_1 + ... + t_k under lex order; returns (quotient, remainder)."""
    p = {e: c for e, c in p.items() if c}
    q: dict = {}
    r: dict = {}
    while p:
        lead = max(p)
        c = p.pop(lead)
        if lead[0] == 0:
            # t_1 does not divide the leading term: move it to the remainder
            r[lead] = c
            continue
        mono = (lead[0] - 1,) + lead[1:]
        q[mono] = q.get(mono, 0) + c
        for i in range(1, k):
            e = mono[:i] + (mono[i] + 1,) + mono[i + 1:]
            p[e] = p.get(e, 0) - c
            if not p[e]:
                del p[e]
    return q, r


def naive_geode(m) -> int:
    m = tuple(m)
    q, r = long_divide(naive_P(sum(m) + 1, len(m)), len(m))
    assert not r
    return q.get(m, 0)


# 2D step ratios written out factor by factor, independently of the library
def ratio_m1(m1: int, m2: int) -> Fraction:
    return Fraction((2 * m1 + 3 * m2 + 2) * (2 * m1 + 3 * m2 + 3) * (2 * m1 + 2 * m2 + 1) * (m1 + m2),
                    m1 * (2 * m1 + 2 * m2 + 3) * (m1 + m2 + 1) * (m1 + 2 * m2 + 2))


def ratio_m2(m1: int, m2: int) -> Fraction:
    return Fraction((2 * m1 + 3 * m2 + 1) * (2 * m1 + 3 * m2 + 2) * (2 * m1 + 3 * m2 + 3)
                    * (2 * m1 + 2 * m2 + 1) * (m1 + m2),
                    m2 * (2 * m1 + 2 * m2 + 3) * (m1 + m2 + 1) * (m1 + 2 * m2 + 1) * (m1 + 2 * m2 + 2))


def linear_product(factors) -> IndexPolynomial:
    """Product of linear forms given as (coefficients, constant) pairs."""
    out = IndexPolynomial.constant(len(factors[0][0]), 1)
    for coeffs, const in factors:
        out = out * IndexPolynomial.from_linear(coeffs, const)
    return out


def expected_2d(direction: int) -> PureRecurrence:
    """The two known first-order 2D recurrences as canonical PureRecurrences."""
    if direction == 1:
        num = linear_product([((2, 3), 2), ((2, 3), 3), ((2, 2), 1), ((1, 1), 0)])
        den = linear_product([((1, 0), 0), ((2, 2), 3), ((1, 1), 1), ((1, 2), 2)])
    else:
        num = linear_product([((2, 3), 1), ((2, 3), 2), ((2, 3), 3), ((2, 2), 1), ((1, 1), 0)])
        den = linear_product([((0, 1), 0), ((2, 2), 3), ((1, 1), 1), ((1, 2), 1), ((1, 2), 2)])
    # the ratio is stated at the target point m; the step uses G(m - e_d)
    return PureRecurrence(2, direction, (RationalCoeff(num, den),)).canonical()


def oracle_mod(m, p: int) -> int:
    """G(m1, m2, m3) mod p from the definition, sweeping the full reachable box."""
    m1, m2, m3 = m
    top = 2 * (m1 + m2 + m3 + 1) + 3 * m2 + 4 * m3 + 10
    f = [1] * (top + 1)
    for i in range(1, top + 1):
        f[i] = f[i - 1] * i % p
    fi = [1] * (top + 1)
    fi[top] = pow(f[top], -1, p)
    for i in range(top, 0, -1):
        fi[i - 1] = fi[i] * i % p

    def C(a, b, c):
        return f[2 * a + 3 * b + 4 * c] * fi[1 + a + 2 * b + 3 * c] % p * fi[a] % p * fi[b] % p * fi[c] % p

    above = None
    for b2 in range(m2, -1, -1):
        row = [0] * (m3 + 2)
        for b3 in range(m3, -1, -1):
            x2, x3 = m2 - b2, m3 - b3
            c = C(m1 + b2 + b3 + 1, x2, x3)
            if x2:
                c -= above[b3]
            if x3:
                c -= row[b3 + 1]
            row[b3] = c % p
        above = row
    return above[0]


# ---------------------------------------------------------------------------
# mutation fuzzing
# ---------------------------------------------------------------------------

def mutation_sites(rec: PureRecurrence) -> list[tuple[int, str, tuple]]:
    sites = []
    for j, c in enumerate(rec.coeffs):
        for part in ("numerator", "denominator"):
            for e in getattr(c, part).terms:
                sites.append((j, part, e))
    return sites


def perturb(rec: PureRecurrence, site, delta: int = 1) -> PureRecurrence:
    j, part, e = site
    c = rec.coeffs[j]
    poly = getattr(c, part)
    terms = dict(poly.terms)
    terms[e] = terms.get(e, 0) + delta
    new = RationalCoeff(**{**{"numerator": c.numerator, "denominator": c.denominator},
                           part: IndexPolynomial(poly.nvars, terms)})
    coeffs = list(rec.coeffs)
    coeffs[j] = new
    return PureRecurrence(rec.dimension, rec.direction, tuple(coeffs), rec.variables)


def random_mutations(system: RecurrenceSystem, count: int, seed: int = 0):
    """``count`` distinct (direction, site, delta, mutated system) tuples."""
    rng = random.Random(seed)
    catalog = [(d, s) for d in sorted(system.recurrences)
               for s in mutation_sites(system.recurrences[d])]
    for d, site in rng.sample(catalog, count):
        delta = rng.choice([-1, 1])
        recs = dict(system.recurrences)
        recs[d] = perturb(recs[d], site, delta)
        yield d, site, delta, RecurrenceSystem(recs.values(), system.window_size)
