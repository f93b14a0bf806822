"""Command-line interface: ``geode hc|geode|guess|verify|bench``.

Every command prints one JSON envelope on stdout.  Exit codes:
0 success/found, 1 checked-and-negative, 2 usage, 3 integrity, 4 resource cap.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from importlib import resources
from pathlib import Path

from . import recurrence as rec_mod
from .closed_form import g2_closed, g2_fast
from .core import GeodeTable, geode_number_oracle, geode_table, hyper_catalan
from .errors import GeodeError, ResourceLimitError, UnverifiedSystemError
from .guesser import search
from .recurrence import (PureRecurrence, RecurrenceSystem, diagonal_values, digit_count,
                         eval_diagonal, eval_pure)
from .verifier import verify

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTEGRITY, EXIT_RESOURCE = 0, 1, 2, 3, 4

BUNDLED_SYSTEM = "geode3_system.json"
BUNDLED_DIAGONAL = "geode3_diagonal.json"

log = logging.getLogger("geode")


class UsageError(Exception):
    pass


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("geode") / "data" / name))


def schema(name: str) -> dict:
    """One of the shipped JSON schemas: envelope, recurrence, system, guess_report,
    verification_report."""
    return json.loads(bundled_path(f"schema_{name}.json").read_text(encoding="utf-8"))


def load_verified(path: str | Path | None, default: str, kind: type):
    """Load a recurrence file and insist on a valid verification stamp."""
    path = Path(path) if path else bundled_path(default)
    try:
        obj = rec_mod.load(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except (ValueError, KeyError, TypeError) as exc:
        raise UnverifiedSystemError(f"{path} is not a valid recurrence file: {exc}") from None
    if not isinstance(obj, kind) or (kind is PureRecurrence and not obj.is_diagonal):
        raise UsageError(f"{path} does not hold the expected kind of recurrence")
    if not obj.is_verified():
        raise UnverifiedSystemError(f"{path} has no valid verification stamp")
    return obj


def _envelope(command: str, inputs: dict, result, started: float) -> dict:
    out = {"command": command, "inputs": inputs}
    if isinstance(result, int):
        out["result"] = str(result)
        out["digits"] = digit_count(result) if result else 1
    else:
        out["result"] = result
        out["digits"] = None
    out["wall_ms"] = round((time.perf_counter() - started) * 1000, 3)
    return out


def _parse_index(values: list[str]) -> tuple[int, ...]:
    try:
        m = tuple(int(v) for v in values)
    except ValueError:
        raise UsageError(f"indices must be integers, got {values}") from None
    if not m or min(m) < 0:
        raise UsageError("give at least one non-negative integer index")
    return m


def geode_value(m: tuple[int, ...], method: str = "auto", recurrence: str | None = None):
    """(value, method actually used) for G(m)."""
    k = len(m)
    if method == "auto":
        if k == 2:
            method = "closed2"
        elif k == 3 and len(set(m)) == 1 and m[0] > 2:
            method = "diag"
        elif k == 3 and max(m) > 2:
            method = "rec3"
        else:
            method = "oracle"
    if method == "oracle":
        return geode_number_oracle(m), method
    if method == "closed2":
        if k != 2:
            raise UsageError("closed2 needs exactly two indices")
        return g2_closed(*m), method
    if method == "rec2":
        if k != 2:
            raise UsageError("rec2 needs exactly two indices")
        return g2_fast(*m), method
    if method == "rec3":
        if k != 3:
            raise UsageError("rec3 needs exactly three indices")
        sys_ = load_verified(recurrence, BUNDLED_SYSTEM, RecurrenceSystem)
        return eval_pure(sys_, m), method
    if method == "diag":
        if k != 3 or len(set(m)) != 1:
            raise UsageError("diag needs three equal indices")
        rec = load_verified(recurrence, BUNDLED_DIAGONAL, PureRecurrence)
        return eval_diagonal(rec, m[0]), method
    raise UsageError(f"unknown method {method!r}")


def cmd_hc(args) -> tuple[dict, int]:
    t0 = time.perf_counter()
    m = _parse_index(args.m)
    return _envelope("hc", {"m": list(m)}, hyper_catalan(m), t0), EXIT_OK


def cmd_geode(args) -> tuple[dict, int]:
    t0 = time.perf_counter()
    m = _parse_index(args.m)
    value, used = geode_value(m, args.method, args.recurrence)
    env = _envelope("geode", {"m": list(m), "method": args.method}, value, t0)
    env["method_used"] = used
    return env, EXIT_OK


def _guess_data(args, direction) -> GeodeTable:
    k = args.k
    if direction != "diagonal":
        return geode_table(args.table_max, k)
    if k == 3 and args.diag_source == "system":
        sys_ = load_verified(args.system, BUNDLED_SYSTEM, RecurrenceSystem)
        vals = diagonal_values(sys_, args.diag_max)
        return GeodeTable(3, {(n,) * 3: v for n, v in vals.items()}, source="system")
    vals = {(n,) * k: geode_number_oracle((n,) * k) for n in range(args.table_max // k + 1)}
    return GeodeTable(k, vals, source="oracle")


def cmd_guess(args) -> tuple[dict, int]:
    t0 = time.perf_counter()
    if args.diagonal:
        directions = ["diagonal"]
    elif args.direction == "all":
        directions = list(range(1, args.k + 1))
    else:
        try:
            directions = [int(args.direction)]
        except (TypeError, ValueError):
            raise UsageError("--direction must be an integer, 'all', or use --diagonal") from None
        if not 1 <= directions[0] <= args.k:
            raise UsageError(f"--direction must lie in 1..{args.k}")
    if args.table_max is None:
        args.table_max = 30 if args.k <= 3 else 20
    orders = range(args.order_min, args.order_max + 1)
    degrees = range(args.degree_min, args.degree_max + 1)
    data_cache: dict = {}
    found: dict = {}
    reports = []
    for d in directions:
        key = "diagonal" if d == "diagonal" else "pure"
        if key not in data_cache:
            data_cache[key] = _guess_data(args, d)
        reps = search(data_cache[key], d, orders, degrees, exhaustive=args.exhaustive,
                      seed=args.seed)
        reports.extend(r.as_dict() for r in reps)
        hits = [r for r in reps if r.found]
        if hits:
            found[d] = min((r.best for r in hits), key=lambda c: (max(c.degrees), c.degrees))
    complete = len(found) == len(directions)
    written = None
    if complete and args.out:
        if len(directions) > 1:
            obj = RecurrenceSystem([found[d] for d in directions])
        else:
            obj = found[directions[0]]
        rec_mod.save(obj, args.out)
        written = str(args.out)
    result = {"found": complete, "directions": [str(d) for d in directions],
              "written": written, "reports": reports}
    inputs = {"k": args.k, "directions": [str(d) for d in directions],
              "order_max": args.order_max, "degree_max": args.degree_max,
              "table_max": args.table_max, "seed": args.seed}
    return _envelope("guess", inputs, result, t0), EXIT_OK if complete else EXIT_NEGATIVE


def cmd_verify(args) -> tuple[dict, int]:
    t0 = time.perf_counter()
    path = Path(args.file)
    if not path.exists():
        raise UsageError(f"no such file: {path}")
    try:
        obj = rec_mod.load(path)
    except (ValueError, KeyError, TypeError) as exc:
        raise UnverifiedSystemError(f"{path} is not a valid recurrence file: {exc}") from None
    report = verify(obj, args.window)
    if report.passed and args.stamp:
        rec_mod.save(obj.stamped(args.window), path)
    env = _envelope("verify", {"file": str(path), "window": args.window}, report.as_dict(), t0)
    return env, EXIT_OK if report.passed else EXIT_NEGATIVE


def _timed(fn, *a):
    t = time.perf_counter()
    v = fn(*a)
    return v, round((time.perf_counter() - t) * 1000, 3)


def cmd_bench(args) -> tuple[dict, int]:
    t0 = time.perf_counter()
    rows = []
    if args.suite == "definitional":
        for m in [(1, 1), (10, 10), (25, 25), (2, 2, 2), (4, 7, 8), (6, 6, 6), (8, 8, 8)]:
            ref, ms = _timed(geode_number_oracle, m)
            rows.append({"point": list(m), "method": "oracle", "ms": ms,
                         "digits": digit_count(ref), "agrees": True})
            fast = "closed2" if len(m) == 2 else "rec3"
            v, ms = _timed(lambda x: geode_value(x, fast)[0], m)
            rows.append({"point": list(m), "method": fast, "ms": ms,
                         "digits": digit_count(v), "agrees": v == ref})
    else:
        for m, methods in [((5000, 5000), ("closed2", "rec2")),
                           ((100, 100, 100), ("rec3", "diag")),
                           ((1000, 1000, 1000), ("diag", "rec3"))]:
            vals = []
            for meth in methods:
                v, ms = _timed(lambda x: geode_value(x, meth)[0], m)
                vals.append(v)
                rows.append({"point": list(m), "method": meth, "ms": ms,
                             "digits": digit_count(v), "agrees": v == vals[0]})
    ok = all(r["agrees"] for r in rows)
    env = _envelope("bench", {"suite": args.suite}, {"rows": rows}, t0)
    if args.text:
        width = max(len(str(r["point"])) for r in rows)
        lines = [f"{'point':<{width}}  {'method':<8} {'ms':>10} {'digits':>7}  agrees"]
        lines += [f"{str(r['point']):<{width}}  {r['method']:<8} {r['ms']:>10.3f} "
                  f"{r['digits']:>7}  {r['agrees']}" for r in rows]
        env["table"] = "\n".join(lines)
    return env, EXIT_OK if ok else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geode", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hc", help="hyper-Catalan number C(m)")
    p.add_argument("m", nargs="+")
    p.set_defaults(func=cmd_hc)

    p = sub.add_parser("geode", help="Geode number G(m)")
    p.add_argument("m", nargs="+")
    p.add_argument("--method", default="auto",
                   choices=["auto", "oracle", "closed2", "rec2", "rec3", "diag"])
    p.add_argument("--recurrence", help="verified recurrence file for rec3/diag "
                                        "(defaults to the bundled one)")
    p.set_defaults(func=cmd_geode)

    p = sub.add_parser("guess", help="guess pure or diagonal recurrences from exact data")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--direction", default="1", help="1..k or 'all'")
    p.add_argument("--diagonal", action="store_true")
    p.add_argument("--order-min", type=int, default=1)
    p.add_argument("--order-max", type=int, required=True)
    p.add_argument("--degree-min", type=int, default=0)
    p.add_argument("--degree-max", type=int, required=True)
    p.add_argument("--table-max", type=int, help="largest total degree of oracle data")
    p.add_argument("--diag-max", type=int, default=150,
                   help="diagonal data length when generated from a 3D system")
    p.add_argument("--diag-source", choices=["system", "oracle"], default="system")
    p.add_argument("--system", help="verified 3D system for diagonal data")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--out", help="write the found recurrence(s) here")
    p.set_defaults(func=cmd_guess)

    p = sub.add_parser("verify", help="verify a recurrence file against the oracle")
    p.add_argument("file")
    p.add_argument("--window", type=int, default=8)
    p.add_argument("--stamp", action="store_true", help="record a passing verification in the file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="timing comparison of definitional and fast paths")
    p.add_argument("--suite", choices=["definitional", "recurrence"], default="recurrence")
    p.add_argument("--text", action="store_true", help="include a plain-text table")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        env, code = args.func(args)
    except UsageError as exc:
        env, code = {"command": args.command, "error": str(exc)}, EXIT_USAGE
    except UnverifiedSystemError as exc:
        env, code = {"command": args.command, "error": str(exc)}, EXIT_INTEGRITY
    except ResourceLimitError as exc:
        env, code = {"command": args.command, "error": str(exc)}, EXIT_RESOURCE
    except (GeodeError, ValueError) as exc:
        env, code = {"command": args.command, "error": str(exc)}, EXIT_USAGE
    text = env.pop("table", None)
    sys.stdout.write(json.dumps(env) + "\n")
    if text:
        sys.stdout.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
