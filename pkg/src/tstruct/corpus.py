"""Seeded random corpora for the property suites.

Everything is driven by an explicit ``random.Random`` so a fixed seed
reproduces the same complexes, objects and subsets byte for byte.
Random free complexes are built as direct sums of stalks and two-term
resolutions and then disguised by unimodular changes of basis, which
reaches every isomorphism class of bounded free complexes over a
principal ideal domain.
"""

from __future__ import annotations

import random

from .elementary import ElementaryModule
from .derived import FormalObject
from .spectrum import ZSubset
from .zmodules import FgZModule, FreeComplex, direct_sum, identity, matmul

DEFAULT_SEED = 987654321
DEFAULT_PRIMES = (2, 3, 5)


def rng_from_seed(seed: int) -> random.Random:
    return random.Random(int(seed) & 0xFFFFFFFFFFFFFFFF)


def random_fg_module(
    rng: random.Random,
    primes=DEFAULT_PRIMES,
    max_rank: int = 2,
    max_exp: int = 3,
    max_pieces: int = 2,
) -> FgZModule:
    rank = rng.randint(0, max_rank)
    torsion = []
    for _ in range(rng.randint(0, max_pieces)):
        torsion.append((rng.choice(primes), rng.randint(1, max_exp), 1))
    return FgZModule(rank, tuple(torsion))


def random_fg_object(
    rng: random.Random,
    degree_window=(-3, 3),
    primes=DEFAULT_PRIMES,
    max_degrees: int = 3,
) -> FormalObject:
    lo, hi = degree_window
    degs = rng.sample(range(lo, hi + 1), rng.randint(1, max_degrees))
    graded = []
    for d in degs:
        M = random_fg_module(rng, primes)
        if not M.is_zero:
            graded.append((d, ElementaryModule.from_fg(M)))
    return FormalObject(tuple(graded))


def random_subset_z(rng: random.Random, primes=DEFAULT_PRIMES) -> ZSubset:
    roll = rng.random()
    if roll < 0.2:
        return ZSubset.whole()
    chosen = [p for p in primes if rng.random() < 0.5]
    return ZSubset.finite(chosen)


def random_formal_object(
    rng: random.Random,
    degree_window=(-3, 3),
    primes=DEFAULT_PRIMES,
    max_degrees: int = 3,
) -> FormalObject:
    """A formal object that may carry localized and Pruefer atoms."""
    lo, hi = degree_window
    degs = rng.sample(range(lo, hi + 1), rng.randint(1, max_degrees))
    graded = []
    for d in degs:
        E = ElementaryModule.zero()
        for _ in range(rng.randint(1, 2)):
            kind = rng.random()
            if kind < 0.35:
                E = E + ElementaryModule.free(rng.randint(1, 2))
            elif kind < 0.7:
                E = E + ElementaryModule.cyclic_torsion(
                    rng.choice(primes), rng.randint(1, 3)
                )
            elif kind < 0.85:
                S = ZSubset.finite([p for p in primes if rng.random() < 0.5])
                E = E + ElementaryModule.localized_free(S, 1)
            else:
                S = ZSubset.finite(
                    [p for p in primes if rng.random() < 0.5] or [rng.choice(primes)]
                )
                E = E + ElementaryModule.prufer_sum(S, 1)
        if not E.is_zero:
            graded.append((d, E))
    return FormalObject(tuple(graded))


# ---------------------------------------------------------------------------
# random free complexes


def _random_unimodular_with_inverse(rng: random.Random, n: int, moves: int):
    """U and its exact inverse, built from the same elementary operations."""
    U = identity(n)
    V = identity(n)  # V = U^{-1}: apply the inverse op on the other side
    for _ in range(moves):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.choice((-1, 1))
        for k in range(n):
            U[i][k] += c * U[j][k]
        for k in range(n):
            V[k][j] -= c * V[k][i]
    return U, V


def random_free_complex(
    rng: random.Random,
    max_terms: int = 6,
    max_rank: int = 3,
    max_entry: int = 20,
    degree_window=(-3, 3),
    primes=DEFAULT_PRIMES,
    max_exp: int = 3,
) -> FreeComplex:
    """A bounded free complex with small ranks and bounded entries.

    >>> X = random_free_complex(rng_from_seed(11))
    >>> all(abs(x) <= 20 for M in X.diffs for row in M for x in row)
    True
    """
    lo, hi = degree_window
    while True:
        pieces = []
        for _ in range(rng.randint(1, max_terms // 2)):
            d = rng.randint(lo + 1, hi)
            if rng.random() < 0.4:
                pieces.append(FreeComplex.stalk_free(rng.randint(1, 2), d))
            else:
                p = rng.choice(primes)
                e = rng.randint(1, max_exp)
                pieces.append(FreeComplex.cyclic_resolution(p**e, d))
        X = FreeComplex.zero()
        for piece in pieces:
            X = direct_sum(X, piece)
        if len(X.ranks) > max_terms or any(r > max_rank for r in X.ranks):
            continue
        # disguise the direct sum by unimodular changes of basis
        us = []
        for r in X.ranks:
            moves = rng.randint(0, 2 * r)
            us.append(_random_unimodular_with_inverse(rng, r, moves))
        diffs = []
        for k in range(len(X.ranks) - 1):
            M = X.diff_at(X.min_degree + k)
            if X.ranks[k] and X.ranks[k + 1]:
                M = matmul(matmul(us[k + 1][0], M), us[k][1])
            diffs.append(tuple(tuple(row) for row in M))
        if any(abs(x) > max_entry for M in diffs for row in M for x in row):
            continue
        return FreeComplex(X.min_degree, X.ranks, tuple(diffs))
