"""Checks that tie recurrences back to the definition.

Window verification compares the recurrence-defined values G' with the
definitional oracle on the cube ``0 <= m_i < K`` and also checks that

    F(m) = sum_i G'(m - e_i) - C(m)

vanishes there.  If the orders of the holonomic function F were known to be
at most K this would prove G' = G everywhere.  Those order bounds are not
computed here, so a passing window is evidence, not a proof, and reports
say so.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .core import (GeodeTable, build_P, divide_by_simplex, geode_number_oracle, geode_table,
                   hyper_catalan)
from .errors import InconsistencyError
from .recurrence import (EvaluationReport, PureRecurrence, RecurrenceSystem, eval_diagonal,
                         eval_pure_many, poly_values)

EVIDENCE_NOTE = ("window agreement only; the order bounds on F that would turn this into a "
                 "proof are not computed")


@dataclass
class Check:
    name: str
    parameters: dict
    passed: bool
    counterexample: dict | None = None
    note: str = ""

    def as_dict(self) -> dict:
        out = {"name": self.name, "parameters": self.parameters,
               "status": "pass" if self.passed else "fail"}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    subject: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {"subject": self.subject, "status": "pass" if self.passed else "fail",
                "checks": [c.as_dict() for c in self.checks]}


def _as_list(point):
    return list(point) if point is not None else None


def cube(k: int, K: int) -> list[tuple[int, ...]]:
    return sorted(itertools.product(range(K), repeat=k), key=lambda m: (sum(m), m))


def _oracle_table(k: int, K: int) -> GeodeTable:
    return geode_table(k * (K - 1), k)


def _relation_failures(rec: PureRecurrence, points: Sequence[tuple[int, ...]],
                       values) -> tuple[list[tuple], int]:
    """Points where G(m) != sum f_j(m) G(m - j e) using ``values``; also the skip count."""
    var = 0 if rec.is_diagonal else rec.direction - 1
    pts = [m for m in points if m[var] >= rec.order]
    nums = [poly_values(c.numerator, pts, var) for c in rec.coeffs]
    dens = [poly_values(c.denominator, pts, var) for c in rec.coeffs]
    bad, skipped = [], 0
    for t, m in enumerate(pts):
        ds = [d[t] for d in dens]
        if 0 in ds:
            skipped += 1
            continue
        lhs = values(m)
        # G(m) * prod D_j == sum N_j * G(m - j e) * prod_{i != j} D_i
        total = 1
        for d in ds:
            total *= d
        rhs = sum(nums[j][t] * values(rec.shifted(m, j + 1)) * (total // ds[j])
                  for j in range(rec.order))
        if lhs * total != rhs:
            bad.append(m)
    return bad, skipped


def verify_window(sys: RecurrenceSystem, K: int, priority: Sequence[int] | None = None,
                  table: GeodeTable | None = None) -> VerificationReport:
    """Compare the system with the oracle on {0..K-1}^k."""
    k = sys.k
    report = VerificationReport(f"system k={k}")
    oracle = table if table is not None else _oracle_table(k, K)
    pts = cube(k, K)
    params = {"K": K, "points": len(pts), "window_size": sys.window_size}
    vacuous = K <= sys.window_size

    ev = EvaluationReport()
    eval_error = None
    note = "window too small: only the initial conditions are compared" if vacuous else EVIDENCE_NOTE
    try:
        got = eval_pure_many(sys, pts, priority=priority, report=ev, require_verified=False)
    except InconsistencyError as exc:
        got = None
        bad = [exc.point]
        cex = eval_error = {"point": _as_list(exc.point), "error": str(exc)}
    else:
        bad = [m for m in pts if got[m] != oracle[m]]
        cex = None
        if bad:
            m = bad[0]
            cex = {"point": list(m), "recurrence": str(got[m]), "oracle": str(oracle[m]),
                   "mismatches": len(bad)}
    report.checks.append(Check("window_agreement",
                               {**params, "vacuous": vacuous, **ev.as_dict()},
                               not bad, cex, note))

    for d in sorted(sys.recurrences):
        rec = sys.recurrences[d]
        fails, skipped = _relation_failures(rec, pts, oracle.__getitem__)
        cex = {"point": list(fails[0]), "failures": len(fails)} if fails else None
        report.checks.append(Check(f"relation_direction_{d}",
                                   {"K": K, "skipped_vanishing_denominator": skipped},
                                   not fails, cex))

    def g_prime(m):
        return 0 if min(m) < 0 else got[m]

    fbad = None
    for m in pts if got is not None else ():
        if sum(m) == 0:
            continue
        f = sum(g_prime(m[:i] + (m[i] - 1,) + m[i + 1:]) for i in range(k)) - hyper_catalan(m)
        if f:
            fbad = {"point": list(m), "F": str(f)}
            break
    if got is None:
        fbad = {"point": eval_error["point"], "error": "recurrence values unavailable"}
    report.checks.append(Check("defining_identity_residual", {"K": K}, fbad is None, fbad))
    return report


def verify_identity(table: GeodeTable) -> VerificationReport:
    """sum_i G(m - e_i) == C(m) for 1 <= total(m) <= table.complete_to."""
    if table.complete_to is None:
        raise ValueError("the identity check needs a table complete up to some degree")
    k = table.k
    report = VerificationReport(f"identity k={k}")
    cex, checked = None, 0
    for m in sorted(table, key=lambda m: (sum(m), m)):
        if not 1 <= sum(m) <= table.complete_to:
            continue
        lhs = sum(table[m[:i] + (m[i] - 1,) + m[i + 1:]] for i in range(k))
        checked += 1
        if lhs != hyper_catalan(m):
            cex = {"point": list(m), "lhs": str(lhs), "C": str(hyper_catalan(m))}
            break
    report.checks.append(Check("defining_identity",
                               {"k": k, "max_total": table.complete_to, "points": checked},
                               cex is None, cex))
    return report


def verify_divisibility(n_max: int, k: int, cap: int | None = None) -> VerificationReport:
    """P_{n,k} is divisible by t_1 + ... + t_k for 1 <= n <= n_max."""
    report = VerificationReport(f"divisibility k={k}")
    cex = None
    for n in range(1, n_max + 1):
        _, rem = divide_by_simplex(build_P(n, k, cap), cap)
        if not rem.is_zero():
            cex = {"n": n, "remainder_terms": len(rem)}
            break
    report.checks.append(Check("simplex_divides_P", {"n_max": n_max, "k": k}, cex is None, cex))
    return report


def random_points(k: int, max_total: int, count: int, seed: int = 0) -> list[tuple[int, ...]]:
    """Distinct random points of N^k with total <= max_total (sorted, reproducible)."""
    rng = random.Random(seed)
    pts: set[tuple[int, ...]] = set()
    while len(pts) < count:
        t = rng.randint(0, max_total)
        cuts = sorted(rng.randint(0, t) for _ in range(k - 1))
        pts.add(tuple(b - a for a, b in zip([0] + cuts, cuts + [t])))
    return sorted(pts, key=lambda m: (sum(m), m))


def verify_compatibility(sys: RecurrenceSystem,
                         sample: Iterable[Sequence[int]]) -> VerificationReport:
    """Every ordering of reduction directions gives the same value at each sample point."""
    pts = sorted({tuple(m) for m in sample}, key=lambda m: (sum(m), m))
    report = VerificationReport(f"system k={sys.k}")
    orders = list(itertools.permutations(range(1, sys.k + 1)))
    cex = None
    results = []
    for o in orders:
        try:
            results.append(eval_pure_many(sys, pts, priority=o, require_verified=False))
        except InconsistencyError as exc:
            cex = {"point": _as_list(exc.point), "ordering": "".join(map(str, o)), "error": str(exc)}
            break
    for m in pts if cex is None else ():
        vals = {r[m] for r in results}
        if len(vals) > 1:
            cex = {"point": list(m),
                   "values": {"".join(map(str, o)): str(r[m]) for o, r in zip(orders, results)}}
            break
    report.checks.append(Check("path_independence",
                               {"points": len(pts), "orderings": len(orders)}, cex is None, cex))
    return report


def verify_recurrence(rec: PureRecurrence, K: int) -> VerificationReport:
    """Check a single recurrence against the oracle on a window of size K."""
    k = rec.dimension
    label = "diagonal" if rec.is_diagonal else f"direction {rec.direction}"
    report = VerificationReport(f"{label} k={k}")
    vacuous = K <= rec.order
    note = "window too small: only the initial conditions are compared" if vacuous else EVIDENCE_NOTE
    if rec.is_diagonal:
        diag = {n: geode_number_oracle((n,) * k) for n in range(K)}
        fails, skipped = _relation_failures(rec, [(n,) for n in range(K)],
                                            lambda m: diag[m[0]])
        cex = {"point": list(fails[0]), "failures": len(fails)} if fails else None
        report.checks.append(Check("relation_diagonal",
                                   {"K": K, "skipped_vanishing_denominator": skipped,
                                    "vacuous": vacuous}, not fails, cex, note))
        init = {n: diag[n] for n in range(1, rec.order + 1) if n in diag}
        bad = None
        if len(init) == rec.order:
            for n in range(K):
                try:
                    v = eval_diagonal(rec, n, init=init)
                except InconsistencyError as exc:
                    bad = {"point": _as_list(exc.point), "error": str(exc)}
                    break
                if v != diag[n]:
                    bad = {"point": [n] * k, "recurrence": str(v), "oracle": str(diag[n])}
                    break
        report.checks.append(Check("diagonal_agreement", {"K": K}, bad is None, bad))
        return report
    table = _oracle_table(k, K)
    fails, skipped = _relation_failures(rec, cube(k, K), table.__getitem__)
    cex = {"point": list(fails[0]), "failures": len(fails)} if fails else None
    report.checks.append(Check(f"relation_direction_{rec.direction}",
                               {"K": K, "skipped_vanishing_denominator": skipped,
                                "vacuous": vacuous}, not fails, cex, note))
    return report


def verify(obj, K: int) -> VerificationReport:
    """Dispatch on a loaded recurrence file: systems get the full window check."""
    if isinstance(obj, RecurrenceSystem):
        return verify_window(obj, K)
    return verify_recurrence(obj, K)
