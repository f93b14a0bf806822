"""Pure linear recurrences with rational-function coefficients.

A :class:`PureRecurrence` in direction ``d`` states::

    G(m) = sum_{j=1..r} f_j(m) * G(m - j*e_d)

and a diagonal one states ``G(n,...,n) = sum_j f_j(n) G(n-j,...,n-j)``.
Each ``f_j`` is a :class:`RationalCoeff` over :class:`IndexPolynomial`.

Evaluation is exact.  Coefficients are evaluated as integers per step and
combined with a single division, so running values never become rationals.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import flint

from .core import GeodeTable, MultiIndex, geode_number_oracle, term_cap
from .errors import (InconsistencyError, NonIntegralStepError, OracleFallbackError,
                     ResourceLimitError, UnverifiedSystemError)

FORMAT_VERSION = 1

# G(1,1,1) and G(2,2,2)
DIAGONAL_3D_INIT = {1: 319, 2: 669123}


def default_variables(nvars: int) -> tuple[str, ...]:
    return ("n",) if nvars == 1 else tuple(f"m{i + 1}" for i in range(nvars))


def _grlex_key(e: tuple[int, ...]):
    return (sum(e), e)


class IndexPolynomial:
    """Sparse integer polynomial in the index variables (m_1..m_k, or n)."""

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], int] | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or min(e, default=0) < 0:
                raise ValueError(f"bad exponent vector {e} for {nvars} variables")
            c = int(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms = {e: c for e, c in clean.items() if c}

    @classmethod
    def constant(cls, nvars: int, c: int) -> IndexPolynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> IndexPolynomial:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def from_linear(cls, coeffs: Sequence[int], const: int) -> IndexPolynomial:
        n = len(coeffs)
        terms = {(0,) * n: const}
        for i, c in enumerate(coeffs):
            terms[tuple(int(j == i) for j in range(n))] = c
        return cls(n, terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in graded-lex descending order."""
        return [(e, self.terms[e]) for e in sorted(self.terms, key=_grlex_key, reverse=True)]

    @property
    def leading_coefficient(self) -> int:
        if not self.terms:
            return 0
        return self.terms[max(self.terms, key=_grlex_key)]

    def content(self) -> int:
        return math.gcd(*self.terms.values()) if self.terms else 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = IndexPolynomial.constant(self.nvars, other)
        if not isinstance(other, IndexPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __neg__(self):
        return IndexPolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, int):
            other = IndexPolynomial.constant(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return IndexPolynomial(self.nvars, out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IndexPolynomial(self.nvars, {e: c * other for e, c in self.terms.items()})
        return self.from_flint(self.to_flint() * other.to_flint())

    __rmul__ = __mul__

    def __call__(self, point: Sequence[int]) -> int:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        return sum(c * math.prod(x ** k for x, k in zip(point, e) if k)
                   for e, c in self.terms.items())

    def specialize(self, var: int, point: Sequence[int]) -> list[int]:
        """Univariate coefficients in variable ``var`` with the others fixed at ``point``."""
        out = [0] * (max((e[var] for e in self.terms), default=0) + 1)
        for e, c in self.terms.items():
            out[e[var]] += c * math.prod(x ** k for i, (x, k) in enumerate(zip(point, e))
                                         if k and i != var)
        return out

    def __repr__(self):
        return f"IndexPolynomial({self.nvars}, {self.format()!r})"

    def format(self, names: Sequence[str] | None = None) -> str:
        names = names or default_variables(self.nvars)
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # exact gcd and division are delegated to FLINT's multivariate arithmetic
    def _ctx(self):
        return flint.fmpz_mpoly_ctx.get(default_variables(self.nvars), "deglex")

    def to_flint(self):
        return self._ctx().from_dict(self.terms)

    def from_flint(self, p) -> IndexPolynomial:
        return IndexPolynomial(self.nvars, {tuple(e): int(c) for e, c in p.to_dict().items()})

    def gcd(self, other: IndexPolynomial) -> IndexPolynomial:
        return self.from_flint(self.to_flint().gcd(other.to_flint()))

    def exact_div(self, other: IndexPolynomial) -> IndexPolynomial:
        try:
            return self.from_flint(self.to_flint() / other.to_flint())
        except Exception as exc:  # flint raises a bare DomainError
            raise InconsistencyError(f"inexact polynomial division: {exc}") from None


@dataclass(frozen=True)
class RationalCoeff:
    numerator: IndexPolynomial
    denominator: IndexPolynomial

    def __post_init__(self):
        if self.denominator.is_zero():
            raise ValueError("denominator is identically zero")
        if self.numerator.nvars != self.denominator.nvars:
            raise ValueError("numerator and denominator disagree on the variable count")

    @property
    def nvars(self) -> int:
        return self.numerator.nvars

    @property
    def degrees(self) -> tuple[int, int]:
        return self.numerator.degree, self.denominator.degree

    def canonical(self) -> RationalCoeff:
        """Cancel the polynomial gcd; denominator gets a positive leading coefficient."""
        num, den = self.numerator, self.denominator
        if num.is_zero():
            return RationalCoeff(num, IndexPolynomial.constant(num.nvars, 1))
        g = num.gcd(den)
        num, den = num.exact_div(g), den.exact_div(g)
        if den.leading_coefficient < 0:
            num, den = -num, -den
        return RationalCoeff(num, den)

    def __call__(self, point: Sequence[int]) -> Fraction:
        return Fraction(self.numerator(point), self.denominator(point))


def _lcm(a: IndexPolynomial, b: IndexPolynomial) -> IndexPolynomial:
    return (a * b).exact_div(a.gcd(b))


@dataclass(frozen=True)
class PureRecurrence:
    """G(m) = sum_j coeffs[j-1](m) * G(m - j*e_direction).

    For ``direction == "diagonal"`` the single variable is ``n`` and
    ``dimension`` records the ambient k of ``G(n, ..., n)``.
    """

    dimension: int
    direction: int | str
    coeffs: tuple[RationalCoeff, ...]
    variables: tuple[str, ...] | None = None
    verification: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a recurrence needs order >= 1")
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if self.direction == "diagonal":
            nvars = 1
        elif isinstance(self.direction, int) and 1 <= self.direction <= self.dimension:
            nvars = self.dimension
        else:
            raise ValueError(f"direction must be 1..{self.dimension} or 'diagonal'")
        if any(c.nvars != nvars for c in self.coeffs):
            raise ValueError("coefficient arity does not match the recurrence")
        if self.variables is None:
            object.__setattr__(self, "variables", default_variables(nvars))
        elif len(self.variables) != nvars:
            raise ValueError("variable names do not match the arity")
        else:
            object.__setattr__(self, "variables", tuple(self.variables))

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def nvars(self) -> int:
        return 1 if self.direction == "diagonal" else self.dimension

    @property
    def is_diagonal(self) -> bool:
        return self.direction == "diagonal"

    @property
    def degrees(self) -> tuple[int, int]:
        """(max numerator degree, max denominator degree)."""
        return (max(c.numerator.degree for c in self.coeffs),
                max(c.denominator.degree for c in self.coeffs))

    def degree_report(self) -> dict:
        return {"numerator": self.degrees[0], "denominator": self.degrees[1]}

    def canonical(self) -> PureRecurrence:
        return replace(self, coeffs=tuple(c.canonical() for c in self.coeffs),
                       verification=None)

    @classmethod
    def from_operator(cls, polys: Sequence[IndexPolynomial], dimension: int,
                      direction: int | str) -> PureRecurrence:
        """From sum_{j=0..r} p_j(m) G(m - j e_d) = 0, i.e. f_j = -p_j / p_0."""
        p0 = polys[0]
        if p0.is_zero():
            raise ValueError("leading operator coefficient is zero")
        coeffs = tuple(RationalCoeff(-p, p0).canonical() for p in polys[1:])
        return cls(dimension, direction, coeffs)

    def operator(self) -> tuple[IndexPolynomial, ...]:
        """Polynomial form (p_0, ..., p_r): p_0 the lcm of denominators, jointly primitive."""
        p0 = self.coeffs[0].denominator
        for c in self.coeffs[1:]:
            p0 = _lcm(p0, c.denominator)
        if p0.leading_coefficient < 0:
            p0 = -p0
        ops = [p0] + [-(c.numerator * p0.exact_div(c.denominator)) for c in self.coeffs]
        g = math.gcd(*(p.content() for p in ops))
        return tuple(IndexPolynomial(p.nvars, {e: v // g for e, v in p.terms.items()})
                     for p in ops)

    def shifted(self, m: Sequence[int], j: int) -> tuple[int, ...]:
        if self.is_diagonal:
            return tuple(x - j for x in m)
        d = self.direction - 1
        return tuple(x - j if i == d else x for i, x in enumerate(m))

    def content_digest(self) -> str:
        body = recurrence_to_dict(self, include_verification=False)
        return hashlib.sha256(json.dumps(body, sort_keys=True, separators=(",", ":"))
                              .encode()).hexdigest()

    def is_verified(self) -> bool:
        return _stamp_ok(self.verification, self.content_digest())

    def stamped(self, window: int) -> PureRecurrence:
        return replace(self, verification=_make_stamp(window, self.content_digest()))

    def __str__(self):
        if self.is_diagonal:
            lhs = "G(n)"
            terms = [f"({c.numerator.format(self.variables)})/({c.denominator.format(self.variables)})"
                     f" * G(n-{j})" for j, c in enumerate(self.coeffs, 1)]
        else:
            lhs = "G(m)"
            terms = [f"({c.numerator.format(self.variables)})/({c.denominator.format(self.variables)})"
                     f" * G(m-{j}e{self.direction})" for j, c in enumerate(self.coeffs, 1)]
        return f"{lhs} = " + " + ".join(terms)


def canonicalize(rec: PureRecurrence) -> PureRecurrence:
    """Reduce every coefficient; the result's ``degree_report()`` gives the degree pair."""
    return rec.canonical()


def _make_stamp(window: int, digest: str) -> dict:
    return {"status": "pass", "window": int(window), "digest": digest}


def _stamp_ok(stamp: dict | None, digest: str) -> bool:
    return bool(stamp) and stamp.get("status") == "pass" and stamp.get("digest") == digest


# ---------------------------------------------------------------------------
# systems and evaluation
# ---------------------------------------------------------------------------

@dataclass
class EvaluationReport:
    steps: int = 0
    direction_switches: int = 0
    fallbacks: list[tuple[int, ...]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"steps": self.steps, "direction_switches": self.direction_switches,
                "oracle_fallbacks": [list(p) for p in self.fallbacks]}


class RecurrenceSystem:
    """One pure recurrence per direction plus the oracle-computed initial window.

    The window holds every m with all entries below ``window_size``.
    """

    def __init__(self, recurrences: Iterable[PureRecurrence], window_size: int | None = None,
                 verification: dict | None = None):
        recs = {}
        for rec in recurrences:
            if rec.is_diagonal:
                raise ValueError("a system holds pure (per-direction) recurrences only")
            recs[rec.direction] = rec
        dims = {r.dimension for r in recs.values()}
        if len(dims) != 1:
            raise ValueError("recurrences disagree on the dimension")
        self.k = dims.pop()
        if sorted(recs) != list(range(1, self.k + 1)):
            raise ValueError(f"need exactly one recurrence per direction 1..{self.k}")
        self.recurrences = recs
        max_order = max(r.order for r in recs.values())
        self.window_size = max_order if window_size is None else window_size
        if self.window_size < max_order:
            raise ValueError("window must be at least as wide as the largest order")
        self.verification = verification

    @cached_property
    def window(self) -> GeodeTable:
        import itertools
        pts = itertools.product(range(self.window_size), repeat=self.k)
        return GeodeTable(self.k, {m: geode_number_oracle(m) for m in pts}, source="window")

    def content_digest(self) -> str:
        body = system_to_dict(self, include_verification=False)
        return hashlib.sha256(json.dumps(body, sort_keys=True, separators=(",", ":"))
                              .encode()).hexdigest()

    def is_verified(self) -> bool:
        return _stamp_ok(self.verification, self.content_digest())

    def stamped(self, window: int) -> RecurrenceSystem:
        return RecurrenceSystem(self.recurrences.values(), self.window_size,
                                _make_stamp(window, self.content_digest()))

    def in_window(self, m: Sequence[int]) -> bool:
        return all(x < self.window_size for x in m)


def _horner(coeffs: list[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


class _LineEvaluator:
    """Caches coefficient polynomials specialised to the line through m along a direction."""

    def __init__(self, rec: PureRecurrence):
        self.rec = rec
        self.var = rec.direction - 1
        self.lines: dict[tuple, list[tuple[list[int], list[int]]]] = {}

    def values(self, m: Sequence[int]) -> list[tuple[int, int]]:
        key = tuple(x for i, x in enumerate(m) if i != self.var)
        line = self.lines.get(key)
        if line is None:
            line = [(c.numerator.specialize(self.var, m), c.denominator.specialize(self.var, m))
                    for c in self.rec.coeffs]
            self.lines[key] = line
        x = m[self.var]
        return [(_horner(n, x), _horner(d, x)) for n, d in line]


def poly_values(poly: IndexPolynomial, points: Sequence[Sequence[int]], var: int = 0) -> list[int]:
    """Exact values of ``poly`` at many points, specialising once per line along ``var``."""
    lines: dict[tuple, list[int]] = {}
    out = []
    for m in points:
        key = tuple(x for i, x in enumerate(m) if i != var)
        uni = lines.get(key)
        if uni is None:
            uni = lines[key] = poly.specialize(var, m)
        out.append(_horner(uni, m[var]))
    return out


def _combine(coeff_values: Sequence[tuple[int, int]], prev: Sequence[int]) -> tuple[int, int]:
    """sum_j (N_j/D_j) * prev_j as (quotient, remainder) over the product of the D_j."""
    den = math.prod(d for _, d in coeff_values)
    num = 0
    for (n, d), g in zip(coeff_values, prev):
        num += n * g * (den // d)
    return divmod(num, den)


def _oracle_fallback(m: tuple[int, ...], report: EvaluationReport | None) -> int:
    try:
        value = geode_number_oracle(m, cap=term_cap())
    except ResourceLimitError as exc:
        raise OracleFallbackError(
            f"every reduction direction is blocked at {m} and the oracle is out of budget") from exc
    if report is not None:
        report.fallbacks.append(m)
    return value


def eval_pure_many(sys: RecurrenceSystem, points: Iterable[Sequence[int]],
                   priority: Sequence[int] | None = None,
                   report: EvaluationReport | None = None,
                   require_verified: bool = True) -> dict[MultiIndex, int]:
    """G at several points, sharing one call-local cache."""
    if require_verified and not sys.is_verified():
        raise UnverifiedSystemError("recurrence system carries no valid verification record")
    k = sys.k
    priority = tuple(priority) if priority is not None else tuple(range(1, k + 1))
    if sorted(priority) != list(range(1, k + 1)):
        raise ValueError(f"priority must be a permutation of 1..{k}")
    evaluators = {d: _LineEvaluator(r) for d, r in sys.recurrences.items()}
    window = sys.window
    cache: dict[MultiIndex, int] = {}
    plans: dict[MultiIndex, tuple] = {}

    def plan(x):
        blocked = False
        for d in priority:
            rec = sys.recurrences[d]
            if x[d - 1] < rec.order:
                continue
            vals = evaluators[d].values(x)
            if any(den == 0 for _, den in vals):
                blocked = True
                continue
            if blocked and report is not None:
                report.direction_switches += 1
            return d, vals, [rec.shifted(x, j) for j in range(1, rec.order + 1)]
        return None

    out = {}
    for target in points:
        target = tuple(int(v) for v in target)
        if len(target) != k or min(target) < 0:
            raise ValueError(f"{target} is not a point of N^{k}")
        stack = [target]
        while stack:
            x = stack[-1]
            if x in cache:
                stack.pop()
                continue
            if sys.in_window(x):
                cache[x] = window[x]
                stack.pop()
                continue
            p = plans.get(x)
            if p is None:
                p = plan(x)
                if p is None:
                    cache[x] = _oracle_fallback(x, report)
                    stack.pop()
                    continue
                plans[x] = p
            d, vals, deps = p
            missing = [y for y in deps if y not in cache]
            if missing:
                stack.extend(missing)
                continue
            q, r = _combine(vals, [cache[y] for y in deps])
            if r:
                raise NonIntegralStepError(f"direction-{d} step at {x} is not integral", x)
            cache[x] = q
            del plans[x]
            if report is not None:
                report.steps += 1
            stack.pop()
        out[target] = cache[target]
    return out


def eval_pure(sys: RecurrenceSystem, m: Sequence[int], priority: Sequence[int] | None = None,
              report: EvaluationReport | None = None, require_verified: bool = True) -> int:
    """G(m) by reducing one coordinate at a time toward the initial window.

    A direction whose coefficient denominators vanish at the current point is
    skipped in favour of the next one in ``priority``; if all are blocked the
    definitional oracle is used and the point is recorded in ``report``.
    """
    m = tuple(m)
    return eval_pure_many(sys, [m], priority, report, require_verified)[m]


def diagonal_values(sys: RecurrenceSystem, n_max: int,
                    report: EvaluationReport | None = None,
                    require_verified: bool = True) -> dict[int, int]:
    """G(n, ..., n) for 0 <= n <= n_max via the pure system."""
    pts = [(n,) * sys.k for n in range(n_max + 1)]
    vals = eval_pure_many(sys, pts, report=report, require_verified=require_verified)
    return {p[0]: v for p, v in vals.items()}


def eval_diagonal(rec: PureRecurrence, n: int, init: Mapping[int, int] | None = None,
                  system: RecurrenceSystem | None = None,
                  report: EvaluationReport | None = None) -> int:
    """G(n, ..., n) by forward iteration of a diagonal recurrence.

    ``init`` maps consecutive starting indices to values; for k = 3 it defaults
    to G(1,1,1) = 319 and G(2,2,2) = 669123.  A step whose coefficient
    denominators vanish is delegated to ``system`` (and recorded), or fails.
    """
    if not rec.is_diagonal:
        raise ValueError("eval_diagonal needs a diagonal recurrence")
    if n < 0:
        raise ValueError("n must be non-negative")
    k = rec.dimension
    if init is None:
        if k == 3:
            init = DIAGONAL_3D_INIT
        else:
            init = {i: geode_number_oracle((i,) * k) for i in range(1, rec.order + 1)}
    values = {int(i): int(v) for i, v in init.items()}
    if n in values:
        return values[n]
    if n == 0:
        return 1
    start = min(values)
    if sorted(values) != list(range(start, start + len(values))) or len(values) < rec.order:
        raise ValueError("init must cover `order` consecutive indices")
    if n < start:
        return geode_number_oracle((n,) * k)
    polys = [(c.numerator.specialize(0, (0,)), c.denominator.specialize(0, (0,)))
             for c in rec.coeffs]
    r = rec.order
    window = [values[i] for i in range(start + len(values) - r, start + len(values))]
    for t in range(start + len(values), n + 1):
        vals = [(_horner(a, t), _horner(b, t)) for a, b in polys]
        if any(d == 0 for _, d in vals):
            if system is None:
                raise InconsistencyError(f"diagonal denominator vanishes at n={t}", (t,) * k)
            v = eval_pure(system, (t,) * k)
            if report is not None:
                report.fallbacks.append((t,) * k)
        else:
            q, rem = _combine(vals, window[::-1])
            if rem:
                raise NonIntegralStepError(f"diagonal step n={t} is not integral", (t,) * k)
            v = q
            if report is not None:
                report.steps += 1
        window = window[1:] + [v]
    return window[-1]


def digit_count(x: int) -> int:
    """Number of decimal digits of |x| (no string conversion)."""
    if x == 0:
        raise ValueError("digit_count is undefined for 0")
    a = abs(x)
    d = int((a.bit_length() - 1) * 0.30102999566398120) + 1
    while d > 1 and 10 ** (d - 1) > a:
        d -= 1
    while 10 ** d <= a:
        d += 1
    return d


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def _poly_to_list(p: IndexPolynomial) -> list[dict]:
    return [{"exponents": list(e), "coeff": str(c)} for e, c in p.sorted_terms()]


def _poly_from_list(nvars: int, items: list[dict]) -> IndexPolynomial:
    terms = {}
    for t in items:
        e = tuple(t["exponents"])
        if e in terms:
            raise ValueError(f"duplicate exponent {list(e)}")
        if not isinstance(t["coeff"], str):
            raise ValueError("coefficients must be decimal strings")
        terms[e] = int(t["coeff"])
    return IndexPolynomial(nvars, terms)


def recurrence_to_dict(rec: PureRecurrence, include_verification: bool = True) -> dict:
    out = {
        "format": FORMAT_VERSION,
        "kind": "diagonal" if rec.is_diagonal else "pure",
        "dimension": rec.dimension,
        "variables": list(rec.variables),
        "direction": rec.direction,
        "order": rec.order,
        "coefficients": [
            {"shift": j, "numerator": _poly_to_list(c.numerator),
             "denominator": _poly_to_list(c.denominator)}
            for j, c in enumerate(rec.coeffs, 1)
        ],
    }
    if include_verification and rec.verification:
        out["verification"] = dict(rec.verification)
    return out


def recurrence_from_dict(d: Mapping) -> PureRecurrence:
    kind = d["kind"]
    if kind not in ("pure", "diagonal"):
        raise ValueError(f"unknown recurrence kind {kind!r}")
    direction = d["direction"]
    if (kind == "diagonal") != (direction == "diagonal"):
        raise ValueError("kind and direction disagree")
    nvars = len(d["variables"])
    coeffs = sorted(d["coefficients"], key=lambda c: c["shift"])
    if [c["shift"] for c in coeffs] != list(range(1, len(coeffs) + 1)):
        raise ValueError("shifts must be 1..order")
    if d["order"] != len(coeffs):
        raise ValueError("order does not match the coefficient list")
    return PureRecurrence(
        dimension=d["dimension"], direction=direction,
        coeffs=tuple(RationalCoeff(_poly_from_list(nvars, c["numerator"]),
                                   _poly_from_list(nvars, c["denominator"])) for c in coeffs),
        variables=tuple(d["variables"]), verification=d.get("verification"))


def system_to_dict(sys: RecurrenceSystem, include_verification: bool = True) -> dict:
    out = {
        "format": FORMAT_VERSION,
        "kind": "system",
        "dimension": sys.k,
        "window_size": sys.window_size,
        "recurrences": [recurrence_to_dict(sys.recurrences[d], include_verification=False)
                        for d in sorted(sys.recurrences)],
    }
    if include_verification and sys.verification:
        out["verification"] = dict(sys.verification)
    return out


def system_from_dict(d: Mapping) -> RecurrenceSystem:
    if d["kind"] != "system":
        raise ValueError("not a recurrence system")
    recs = [recurrence_from_dict(r) for r in d["recurrences"]]
    sys = RecurrenceSystem(recs, d["window_size"], d.get("verification"))
    if sys.k != d["dimension"]:
        raise ValueError("dimension does not match the recurrences")
    return sys


def to_dict(obj) -> dict:
    if isinstance(obj, RecurrenceSystem):
        return system_to_dict(obj)
    return recurrence_to_dict(obj)


def from_dict(d: Mapping):
    return system_from_dict(d) if d.get("kind") == "system" else recurrence_from_dict(d)


def dumps(obj) -> str:
    """Canonical text form; loading and re-dumping reproduces it byte for byte."""
    return json.dumps(to_dict(obj), separators=(",", ":")) + "\n"


def loads(text: str):
    return from_dict(json.loads(text))


def save(obj, path: str | Path) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def load(path: str | Path):
    return loads(Path(path).read_text(encoding="utf-8"))
