"""Nullspaces over Q via word-sized primes, CRT, and rational reconstruction.

Every prime yields the *canonical* nullspace basis of the reduced row echelon
form: one vector per free column ``f`` with a 1 at ``f``, zeros at the other
free columns, and ``-R[i, f]`` at pivot ``i``.  The true rational basis has
the same shape, so residues from different primes can be combined entrywise.
A prime is unlucky when its pivot structure differs from the rational one;
the rational structure has maximal rank and lexicographically smallest
pivots, which is how unlucky primes are recognised and dropped.
"""

from __future__ import annotations

import logging
import math
import random
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import flint
import numpy as np

from .errors import ReconstructionError

log = logging.getLogger(__name__)

PRIME_BITS = 31  # products of two residues must fit in int64


def prime_sequence(seed: int = 0, bits: int = PRIME_BITS) -> Iterator[int]:
    """Deterministic stream of distinct random primes in [2^(bits-1), 2^bits)."""
    rng = random.Random(seed)
    seen = set()
    lo, hi = 1 << (bits - 1), (1 << bits) - 1
    while True:
        p = rng.randrange(lo, hi) | 1
        while not flint.fmpz(p).is_prime():
            p += 2
        if p < hi and p not in seen:
            seen.add(p)
            yield p


@dataclass
class ModularNullspace:
    prime: int
    ncols: int
    pivots: tuple[int, ...]
    free: tuple[int, ...]
    basis: list[list[int]]  # one residue vector per free column

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def nullity(self) -> int:
        return len(self.free)


def _rref_numpy(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(A, dtype=np.int64) % p
    nrows, ncols = A.shape
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r, c:] = A[r, c:] * pow(int(A[r, c]), -1, p) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            f = A[others, c].copy()
            A[np.ix_(others, np.arange(c, ncols))] = (
                A[others, c:] - np.outer(f, A[r, c:]) % p) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def nullspace_mod(A: np.ndarray, p: int, backend: str = "flint") -> ModularNullspace:
    """Canonical nullspace basis of ``A`` (entries already reduced mod ``p``)."""
    nrows, ncols = A.shape
    if backend == "numpy":
        R, pivots = _rref_numpy(A, p)
        free = [c for c in range(ncols) if c not in set(pivots)]
        basis = []
        for f in free:
            v = [0] * ncols
            v[f] = 1
            for i, pc in enumerate(pivots):
                v[pc] = int(-R[i, f] % p)
            basis.append(v)
        return ModularNullspace(p, ncols, tuple(pivots), tuple(free), basis)
    if backend != "flint":
        raise ValueError(f"unknown backend {backend!r}")
    M = flint.nmod_mat(A.tolist(), p) if nrows else flint.nmod_mat(0, ncols, p)
    X, nullity = M.nullspace()
    basis = [[int(X[i, j]) for i in range(ncols)] for j in range(nullity)]
    # FLINT's basis is the RREF one; each vector's last nonzero sits on its free column
    free = []
    for v in basis:
        f = max(i for i, x in enumerate(v) if x)
        if v[f] != 1:
            inv = pow(v[f], -1, p)
            v[:] = [x * inv % p for x in v]
        free.append(f)
    order = sorted(range(len(free)), key=free.__getitem__)
    basis = [basis[i] for i in order]
    free = sorted(free)
    fs = set(free)
    pivots = tuple(c for c in range(ncols) if c not in fs)
    return ModularNullspace(p, ncols, pivots, tuple(free), basis)


def rational_reconstruction(a: int, m: int) -> Fraction | None:
    """r/s with r = a*s (mod m), |r|, s <= sqrt(m/2); None if no such pair exists."""
    a %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def crt_pair(a: int, m: int, b: int, p: int) -> int:
    """x = a (mod m), x = b (mod p), 0 <= x < m*p."""
    return a + m * ((b - a) * pow(m, -1, p) % p)


def _structure_key(ns: ModularNullspace):
    # larger rank first, then lexicographically smaller pivot list
    return (-ns.rank, ns.pivots)


def _clear_denominators(vec: Sequence[Fraction]) -> list[int]:
    den = math.lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = math.gcd(*ints)
    return [x // g for x in ints] if g else ints


@dataclass
class ModularSolution:
    basis: list[list[int]]  # primitive integer vectors, one per free column
    free: tuple[int, ...]
    primes_used: list[int] = field(default_factory=list)
    primes_discarded: list[int] = field(default_factory=list)

    @property
    def nullity(self) -> int:
        return len(self.basis)


def solve_modular(matrix_mod: Callable[[int], np.ndarray], primes: Sequence[int] | None = None,
                  seed: int = 0, max_primes: int = 40, backend: str = "flint",
                  min_primes: int = 2) -> ModularSolution:
    """Rational nullspace basis of an integer matrix given as ``p -> A mod p``.

    Primes are consumed until the reconstructed basis is unchanged by one more
    prime (and at least ``min_primes`` agree).  Raises
    :class:`ReconstructionError` after ``max_primes``.
    """
    stream = iter(primes) if primes is not None else prime_sequence(seed)
    used: list[int] = []
    discarded: list[int] = []
    ref = None
    residues: list[list[int]] = []
    modulus = 1
    previous = None
    for count, p in enumerate(stream, 1):
        if count > max_primes:
            break
        ns = nullspace_mod(matrix_mod(p), p, backend)
        if ref is not None and _structure_key(ns) != _structure_key(ref):
            if _structure_key(ns) > _structure_key(ref):
                log.debug("prime %d has a degenerate pivot structure; discarded", p)
                discarded.append(p)
                continue
            log.debug("prime %d exposes a better pivot structure; restarting", p)
            discarded.extend(used)
            ref, used, residues, modulus, previous = None, [], [], 1, None
        if ref is None:
            ref = ns
            residues = [list(v) for v in ns.basis]
            modulus = p
        else:
            residues = [[crt_pair(a, modulus, b, p) for a, b in zip(va, vb)]
                        for va, vb in zip(residues, ns.basis)]
            modulus *= p
        used.append(p)
        if ns.nullity == 0:
            # rank mod p never exceeds the rational rank
            return ModularSolution([], (), used, discarded)
        lifted = []
        for vec in residues:
            rat = []
            for x in vec:
                q = rational_reconstruction(x, modulus)
                if q is None:
                    break
                rat.append(q)
            else:
                lifted.append(_clear_denominators(rat))
                continue
            break
        current = lifted if len(lifted) == len(residues) else None
        if current is not None and current == previous and len(used) >= min_primes:
            return ModularSolution(current, ref.free, used, discarded)
        previous = current
    raise ReconstructionError(
        f"rational reconstruction did not stabilise within {max_primes} primes")
