"""Definitional computation of hyper-Catalan numbers, P_{n,k}, Q_{n,k} and Geode numbers.

Everything here is exact integer arithmetic and serves as the ground-truth
oracle for the faster paths in :mod:`geode.closed_form` and
:mod:`geode.recurrence`.

The Geode numbers are the coefficients of the quotient
``P_{n+1,k} / (t_1 + ... + t_k)``.  Because the divisor is monic in ``t_1``
under lex order, the quotient can be peeled off one coefficient at a time::

    q(m) = p(m + e_1) - sum_{i >= 2} q(m + e_1 - e_i)

with every right-hand index lex-greater than ``m``.  Specialised to
``p = P_{n+1,k}`` this is the identity ``sum_i G(m - e_i) = C(m)``.
"""

from __future__ import annotations

import itertools
import math
import os
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from types import MappingProxyType

from .errors import InconsistencyError, ResourceLimitError

DEFAULT_TERM_CAP = 10**7

MultiIndex = tuple[int, ...]


def term_cap() -> int:
    """Current term budget; ``GEODE_TERM_CAP`` overrides the default."""
    raw = os.environ.get("GEODE_TERM_CAP")
    if raw is None:
        return DEFAULT_TERM_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"GEODE_TERM_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError("GEODE_TERM_CAP must be positive")
    return cap


def _check_cap(count: int, what: str, cap: int | None) -> None:
    limit = term_cap() if cap is None else cap
    if count > limit:
        raise ResourceLimitError(f"{what} needs {count} terms, above the cap of {limit}")


def as_multi_index(m: Sequence[int]) -> MultiIndex:
    """Validate and normalise a list of non-negative integer exponents."""
    idx = tuple(m)
    if not idx:
        raise ValueError("a multi-index needs at least one entry")
    for x in idx:
        if isinstance(x, bool) or not isinstance(x, int):
            raise TypeError(f"multi-index entries must be integers, got {x!r}")
        if x < 0:
            raise ValueError(f"multi-index entries must be non-negative, got {idx}")
    return idx


def total(m: Sequence[int]) -> int:
    return sum(m)


def weight(m: Sequence[int]) -> int:
    """sum (i+1) m_i with 1-based i, i.e. 2 m_1 + 3 m_2 + ..."""
    return sum((i + 2) * x for i, x in enumerate(m))


def compositions(n: int, k: int) -> Iterator[MultiIndex]:
    """All length-k non-negative vectors summing to n, in decreasing lex order."""
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, k - 1):
            yield (first, *rest)


def count_compositions(n: int, k: int) -> int:
    return math.comb(n + k - 1, k - 1)


def hyper_catalan(m: Sequence[int]) -> int:
    """C(m) = (2m_1 + 3m_2 + ...)! / ((1 + m_1 + 2m_2 + ...)! m_1! ... m_k!).

    Evaluated as the falling product ``(s+n)!/(s+1)!`` over the multinomial
    denominators, where ``s = sum i m_i`` and ``n = total(m)``.
    """
    m = as_multi_index(m)
    n = total(m)
    if n == 0:
        return 1
    s = sum((i + 1) * x for i, x in enumerate(m))
    num = math.perm(s + n, n - 1)
    den = math.prod(math.factorial(x) for x in m)
    value, rem = divmod(num, den)
    if rem:
        raise InconsistencyError(f"hyper-Catalan quotient not integral at {m}")
    return value


@dataclass(frozen=True)
class HomogeneousPoly:
    """Sparse homogeneous polynomial in ``num_vars`` variables with integer coefficients."""

    degree: int
    num_vars: int
    terms: Mapping[MultiIndex, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 0 or self.num_vars < 1:
            raise ValueError("degree must be >= 0 and num_vars >= 1")
        clean = {}
        for exps, c in self.terms.items():
            exps = tuple(exps)
            if len(exps) != self.num_vars or sum(exps) != self.degree or min(exps) < 0:
                raise ValueError(f"exponent {exps} does not belong to degree {self.degree}")
            if c:
                clean[exps] = int(c)
        object.__setattr__(self, "terms", MappingProxyType(clean))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[MultiIndex, int]]:
        # all terms share the grade, so graded-lex descending is plain lex descending
        for exps in sorted(self.terms, reverse=True):
            yield exps, self.terms[exps]

    def __eq__(self, other):
        if not isinstance(other, HomogeneousPoly):
            return NotImplemented
        return (self.degree, self.num_vars, dict(self.terms)) == (
            other.degree, other.num_vars, dict(other.terms))

    def __hash__(self):
        return hash((self.degree, self.num_vars, frozenset(self.terms.items())))

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: HomogeneousPoly) -> HomogeneousPoly:
        if (self.degree, self.num_vars) != (other.degree, other.num_vars):
            raise ValueError("can only add polynomials of the same degree and arity")
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return HomogeneousPoly(self.degree, self.num_vars, out)

    def times_simplex(self) -> HomogeneousPoly:
        """Multiply by t_1 + ... + t_k."""
        out: dict[MultiIndex, int] = {}
        for e, c in self.terms.items():
            for i in range(self.num_vars):
                up = e[:i] + (e[i] + 1,) + e[i + 1:]
                out[up] = out.get(up, 0) + c
        return HomogeneousPoly(self.degree + 1, self.num_vars, out)


def build_P(n: int, k: int, cap: int | None = None) -> HomogeneousPoly:
    """The degree-n polynomial whose coefficient at t^m is C(m)."""
    if n < 1 or k < 1:
        raise ValueError("build_P needs n >= 1 and k >= 1")
    _check_cap(count_compositions(n, k), f"P_{{{n},{k}}}", cap)
    return HomogeneousPoly(n, k, {m: hyper_catalan(m) for m in compositions(n, k)})


def divide_by_simplex(p: HomogeneousPoly,
                      cap: int | None = None) -> tuple[HomogeneousPoly, HomogeneousPoly]:
    """Exact division by t_1 + ... + t_k via decreasing-lex peeling.

    Returns ``(quotient, remainder)`` with ``p = quotient * s + remainder``;
    the remainder only carries terms free of ``t_1``.
    """
    n, k = p.degree, p.num_vars
    if n < 1:
        raise ValueError("divide_by_simplex needs a polynomial of degree >= 1")
    _check_cap(count_compositions(n - 1, k), "quotient", cap)
    coeff = p.terms
    q: dict[MultiIndex, int] = {}
    for m in compositions(n - 1, k):
        up = (m[0] + 1,) + m[1:]
        c = coeff.get(up, 0)
        for i in range(1, k):
            if m[i]:
                c -= q.get(up[:i] + (up[i] - 1,) + up[i + 1:], 0)
        if c:
            q[m] = c
    rem: dict[MultiIndex, int] = {}
    for rest in compositions(n, k - 1) if k > 1 else ():
        m = (0,) + rest
        c = coeff.get(m, 0)
        for i in range(1, k):
            if m[i]:
                c -= q.get(m[:i] + (m[i] - 1,) + m[i + 1:], 0)
        if c:
            rem[m] = c
    return HomogeneousPoly(n - 1, k, q), HomogeneousPoly(n, k, rem)


def geode_poly(n: int, k: int, cap: int | None = None) -> HomogeneousPoly:
    """Q_{n,k} = P_{n+1,k} / (t_1 + ... + t_k)."""
    if n < 0 or k < 1:
        raise ValueError("geode_poly needs n >= 0 and k >= 1")
    quotient, remainder = divide_by_simplex(build_P(n + 1, k, cap), cap)
    if not remainder.is_zero():
        raise InconsistencyError(f"P_{{{n + 1},{k}}} left a nonzero remainder")
    return quotient


def geode_number_oracle(m: Sequence[int], cap: int | None = None) -> int:
    """G(m) from the definition, touching only quotient coefficients reachable from m.

    The reachable indices are ``(m_1 + |b|, m_2 - b_2, ..., m_k - b_k)`` for
    ``0 <= b_i <= m_i``; each depends only on lex-greater ``b``, so one sweep
    of the box in decreasing lex order suffices.
    """
    m = as_multi_index(m)
    k = len(m)
    if k == 1:
        return hyper_catalan((m[0] + 1,))
    tail = m[1:]
    _check_cap(math.prod(x + 1 for x in tail), f"oracle for {m}", cap)
    memo: dict[tuple[int, ...], int] = {}
    for b in itertools.product(*(range(x, -1, -1) for x in tail)):
        x1 = m[0] + sum(b) + 1
        up = (x1,) + tuple(t - bi for t, bi in zip(tail, b))
        c = hyper_catalan(up)
        for i in range(k - 1):
            if up[i + 1]:
                c -= memo[b[:i] + (b[i] + 1,) + b[i + 1:]]
        memo[b] = c
    return memo[(0,) * (k - 1)]


class GeodeTable(Mapping):
    """Read-only map MultiIndex -> G(m).

    ``complete_to`` is the largest total degree for which every index is
    present (``None`` for sparse tables such as diagonal data).  Lookups at
    indices with a negative entry return 0.
    """

    def __init__(self, k: int, values: Mapping[MultiIndex, int],
                 complete_to: int | None = None, source: str = "oracle"):
        self.k = k
        self.complete_to = complete_to
        self.source = source
        self._values = MappingProxyType(dict(values))

    def __getitem__(self, m):
        m = tuple(m)
        if any(x < 0 for x in m):
            return 0
        return self._values[m]

    def __contains__(self, m):
        m = tuple(m)
        return any(x < 0 for x in m) or m in self._values

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __repr__(self):
        return (f"GeodeTable(k={self.k}, size={len(self)}, "
                f"complete_to={self.complete_to}, source={self.source!r})")

    @property
    def max_total(self) -> int:
        return max(map(sum, self._values), default=-1)

    def diagonal(self) -> dict[int, int]:
        return {m[0]: v for m, v in self._values.items() if len(set(m)) == 1}


def geode_table(n_max: int, k: int, cap: int | None = None) -> GeodeTable:
    """G(m) for every m with total(m) <= n_max, one decreasing-lex pass per degree."""
    if n_max < 0 or k < 1:
        raise ValueError("geode_table needs n_max >= 0 and k >= 1")
    size = sum(count_compositions(n, k) for n in range(n_max + 1))
    _check_cap(size, f"table to total {n_max} (k={k})", cap)
    values: dict[MultiIndex, int] = {}
    for n in range(n_max + 1):
        for m in compositions(n, k):
            up = (m[0] + 1,) + m[1:]
            g = hyper_catalan(up)
            for i in range(1, k):
                if m[i]:
                    g -= values[up[:i] + (up[i] - 1,) + up[i + 1:]]
            values[m] = g
    return GeodeTable(k, values, complete_to=n_max)
