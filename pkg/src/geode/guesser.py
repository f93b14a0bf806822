"""Recurrence guessing by undetermined coefficients.

For an ansatz of order ``r`` and degree ``d`` in direction ``e``, the unknowns
are the coefficients of polynomials ``p_0..p_r`` of total degree <= d in the
index variables, constrained by one linear equation per data point::

    sum_{j=0..r} p_j(m) * G(m - j*e) = 0

The nullspace is computed modulo word-sized primes and lifted to Q
(:mod:`geode.modular`).  Candidates are then checked exactly: first on rows
held out of the solve, then on every admissible row.
"""

from __future__ import annotations

import itertools
import logging
import math
import random
import time
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .core import GeodeTable
from .errors import InsufficientDataError, ReconstructionError
from .modular import solve_modular
from .recurrence import IndexPolynomial, PureRecurrence, poly_values, recurrence_to_dict

log = logging.getLogger(__name__)

DEFAULT_MARGIN = 0.2
DEFAULT_HOLDOUT = 0.1
MIN_HOLDOUT = 25


def monomials(degree: int, nvars: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= degree, graded then lex ascending."""
    out = []
    for t in range(degree + 1):
        out.extend(sorted(e for e in itertools.product(range(t + 1), repeat=nvars)
                          if sum(e) == t))
    return out


@dataclass(frozen=True)
class AnsatzSpec:
    k: int
    direction: int | str
    order: int
    degree: int

    def __post_init__(self):
        if self.order < 1 or self.degree < 0:
            raise ValueError("ansatz needs order >= 1 and degree >= 0")
        if self.direction != "diagonal" and not (
                isinstance(self.direction, int) and 1 <= self.direction <= self.k):
            raise ValueError(f"direction must be 1..{self.k} or 'diagonal'")

    @property
    def nvars(self) -> int:
        return 1 if self.direction == "diagonal" else self.k

    @cached_property
    def monomials(self) -> list[tuple[int, ...]]:
        return monomials(self.degree, self.nvars)

    @property
    def unknowns(self) -> int:
        return (self.order + 1) * math.comb(self.degree + self.nvars, self.nvars)

    def as_dict(self) -> dict:
        return {"k": self.k, "direction": self.direction, "order": self.order,
                "degree": self.degree, "unknowns": self.unknowns}


def rows_needed(spec: AnsatzSpec, margin: float = DEFAULT_MARGIN) -> int:
    return math.ceil(spec.unknowns * (1 + margin))


def admissible_points(data: GeodeTable, spec: AnsatzSpec) -> list[tuple[int, ...]]:
    """Index points whose every shift is in the table (index-variable coordinates)."""
    r = spec.order
    if spec.direction == "diagonal":
        diag = data.diagonal()
        return [(n,) for n in sorted(diag)
                if n >= r and all(n - j in diag for j in range(1, r + 1))]
    d = spec.direction - 1
    pts = []
    for m in data:
        if m[d] < r:
            continue
        if all(m[:d] + (m[d] - j,) + m[d + 1:] in data for j in range(1, r + 1)):
            pts.append(m)
    return sorted(pts, key=lambda m: (sum(m), m))


class LinearSystem:
    """The homogeneous system of one ansatz over one data table."""

    def __init__(self, data: GeodeTable, spec: AnsatzSpec, points: list[tuple[int, ...]]):
        self.spec = spec
        self.points = points
        r = spec.order
        if spec.direction == "diagonal":
            diag = data.diagonal()
            self.values = [[diag[n - j] for j in range(r + 1)] for (n,) in points]
            self.var = 0
        else:
            d = spec.direction - 1
            self.values = [[data[m[:d] + (m[d] - j,) + m[d + 1:]] for j in range(r + 1)]
                           for m in points]
            self.var = d

    @property
    def nrows(self) -> int:
        return len(self.points)

    @property
    def ncols(self) -> int:
        return self.spec.unknowns

    def matrix_mod(self, p: int, rows: Sequence[int] | None = None) -> np.ndarray:
        """Rows ``rows`` of the coefficient matrix reduced mod ``p`` (p < 2^31)."""
        idx = list(range(self.nrows)) if rows is None else list(rows)
        monos = self.spec.monomials
        P = np.array([self.points[i] for i in idx], dtype=np.int64).reshape(len(idx), -1) % p
        mono = np.ones((len(idx), len(monos)), dtype=np.int64)
        deg = self.spec.degree
        for v in range(self.spec.nvars):
            powers = [np.ones(len(idx), dtype=np.int64)]
            for _ in range(deg):
                powers.append(powers[-1] * P[:, v] % p)
            table = np.stack(powers, axis=1)
            mono = mono * table[:, [e[v] for e in monos]] % p
        G = np.array([[g % p for g in self.values[i]] for i in idx],
                     dtype=np.int64).reshape(len(idx), -1)
        return np.concatenate([mono * G[:, j:j + 1] % p for j in range(self.spec.order + 1)],
                              axis=1)

    def unpack(self, vec: Sequence[int]) -> list[IndexPolynomial]:
        nm = len(self.spec.monomials)
        return [IndexPolynomial(self.spec.nvars,
                                dict(zip(self.spec.monomials, vec[j * nm:(j + 1) * nm])))
                for j in range(self.spec.order + 1)]

    def residuals(self, polys: Sequence[IndexPolynomial],
                  rows: Iterable[int] | None = None) -> list[int]:
        """Exact left-hand sides sum_j p_j(m) G(m - j e) at the chosen rows."""
        idx = list(range(self.nrows)) if rows is None else list(rows)
        pts = [self.points[i] for i in idx]
        vals = [poly_values(p, pts, self.var) for p in polys]
        return [sum(vals[j][t] * self.values[i][j] for j in range(len(polys)))
                for t, i in enumerate(idx)]


def build_system(data: GeodeTable, spec: AnsatzSpec,
                 margin: float = DEFAULT_MARGIN) -> LinearSystem:
    if spec.k != data.k:
        raise ValueError(f"ansatz is {spec.k}-dimensional but the data is {data.k}-dimensional")
    points = admissible_points(data, spec)
    need = rows_needed(spec, margin)
    if len(points) < need:
        raise InsufficientDataError(
            f"{spec.unknowns} unknowns need {need} admissible rows, only {len(points)} available",
            rows_available=len(points), rows_needed=need)
    return LinearSystem(data, spec, points)


@dataclass
class GuessReport:
    spec: AnsatzSpec
    status: str  # "found" | "no-solution" | "insufficient-data"
    candidates: list[PureRecurrence] = field(default_factory=list)
    rows_available: int = 0
    rows_needed: int = 0
    rows_used: int = 0
    rows_heldout: int = 0
    nullity: int | None = None
    primes_used: list[int] = field(default_factory=list)
    primes_discarded: list[int] = field(default_factory=list)
    validation: dict = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)
    seconds: float = 0.0
    message: str = ""

    @property
    def found(self) -> bool:
        return self.status == "found"

    @property
    def best(self) -> PureRecurrence | None:
        return self.candidates[0] if self.candidates else None

    def as_dict(self) -> dict:
        return {
            "spec": self.spec.as_dict(),
            "status": self.status,
            "message": self.message,
            "nullity": self.nullity,
            "rows_available": self.rows_available,
            "rows_needed": self.rows_needed,
            "rows_used": self.rows_used,
            "rows_heldout": self.rows_heldout,
            "primes_used": list(self.primes_used),
            "prime_count": len(self.primes_used),
            "primes_discarded": list(self.primes_discarded),
            "validation": dict(self.validation),
            "flags": list(self.flags),
            "seconds": round(self.seconds, 3),
            "candidates": [{"degrees": c.degree_report(), "recurrence": recurrence_to_dict(c)}
                           for c in self.candidates],
        }


def _split(n_rows: int, unknowns: int, seed: int, fraction: float,
           minimum: int) -> tuple[list[int], list[int]]:
    n_hold = max(math.ceil(fraction * n_rows), minimum)
    # keep the solve overdetermined even when the minimum would starve it
    n_hold = max(0, min(n_hold, n_rows - unknowns - 1))
    held = set(random.Random(seed).sample(range(n_rows), n_hold))
    return [i for i in range(n_rows) if i not in held], sorted(held)


def guess(data: GeodeTable, spec: AnsatzSpec, seed: int = 0,
          holdout: float = DEFAULT_HOLDOUT, min_holdout: int = MIN_HOLDOUT,
          margin: float = DEFAULT_MARGIN, backend: str = "flint",
          max_primes: int = 40) -> GuessReport:
    """Solve one ansatz and validate its candidates exactly."""
    t0 = time.perf_counter()
    need = rows_needed(spec, margin)
    try:
        system = build_system(data, spec, margin)
    except InsufficientDataError as exc:
        return GuessReport(spec, "insufficient-data", rows_available=exc.rows_available,
                           rows_needed=exc.rows_needed, message=str(exc),
                           seconds=time.perf_counter() - t0)
    train, held = _split(system.nrows, spec.unknowns, seed, holdout, min_holdout)
    report = GuessReport(spec, "no-solution", rows_available=system.nrows, rows_needed=need,
                         rows_used=len(train), rows_heldout=len(held))
    try:
        sol = solve_modular(lambda p: system.matrix_mod(p, train), seed=seed,
                            max_primes=max_primes, backend=backend)
    except ReconstructionError as exc:
        report.message = str(exc)
        report.seconds = time.perf_counter() - t0
        return report
    report.nullity = sol.nullity
    report.primes_used = sol.primes_used
    report.primes_discarded = sol.primes_discarded

    candidates: list[PureRecurrence] = []
    rejected = {"trivial": 0, "heldout": 0, "soundness": 0}
    for vec in sol.basis:
        polys = system.unpack(vec)
        if polys[0].is_zero() or all(p.is_zero() for p in polys[1:]):
            rejected["trivial"] += 1
            continue
        rec = PureRecurrence.from_operator(polys, spec.k, spec.direction)
        op = rec.operator()
        if any(system.residuals(op, held)):
            rejected["heldout"] += 1
            continue
        if any(system.residuals(op)):
            rejected["soundness"] += 1
            continue
        if rec not in candidates:
            candidates.append(rec)
    candidates.sort(key=lambda c: (max(c.degrees), c.degrees))
    report.candidates = candidates
    report.validation = {"heldout_rows": len(held), "all_rows_checked": system.nrows,
                         "rejected": rejected, "passed": bool(candidates)}
    if candidates:
        report.status = "found"
        lead = candidates[0].operator()[0]
        zeros = [m for m, v in zip(system.points, poly_values(lead, system.points, system.var))
                 if v == 0]
        if zeros:
            report.flags.append(f"leading coefficient vanishes at {len(zeros)} data points, "
                                f"first {list(zeros[0])}")
    elif sol.nullity:
        report.message = "nullspace candidates failed exact validation"
    report.seconds = time.perf_counter() - t0
    log.info("guess %s -> %s (nullity %s, %d primes, %.2fs)", spec.as_dict(), report.status,
             report.nullity, len(report.primes_used), report.seconds)
    return report


def search(data: GeodeTable, direction: int | str, orders: Iterable[int],
           degrees: Iterable[int], exhaustive: bool = False, **guess_kwargs) -> list[GuessReport]:
    """Try ansatz shapes in increasing unknown count; stop at the first hit unless exhaustive."""
    specs = sorted((AnsatzSpec(data.k, direction, r, d) for r in orders for d in degrees),
                   key=lambda s: (s.unknowns, s.order, s.degree))
    reports = []
    for spec in specs:
        rep = guess(data, spec, **guess_kwargs)
        reports.append(rep)
        if rep.status == "insufficient-data":
            log.info("%s: need %d rows, have %d", spec.as_dict(), rep.rows_needed,
                     rep.rows_available)
        if rep.found and not exhaustive:
            break
    return reports
