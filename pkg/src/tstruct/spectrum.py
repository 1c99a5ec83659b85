"""Spectra as specialization posets.

Two models of the prime spectrum of a commutative Noetherian ring are
supported:

* ``FinPoset`` -- an arbitrary finite poset of "primes", ordered by
  inclusion and described by its covering relation.
* ``SPEC_Z`` -- the arithmetic spectrum of the integers: one generic
  point (the zero ideal) below the maximal ideals (p), one per prime
  number p.

Subsets stable under specialization ("sp-subsets") are the basic
currency of the whole package: over a finite poset they are up-sets,
over Spec(Z) they are the whole space or a finite/cofinite set of
maximal ideals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional


# ---------------------------------------------------------------------------
# primality (64-bit, deterministic)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit integers.

    >>> [p for p in range(2, 30) if is_prime(p)]
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    >>> is_prime(2**61 - 1)
    True
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of an odd composite n (Brent's cycle variant)."""
    from math import gcd

    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        y, c, m = seed, seed, 128
        g = r = q = 1
        ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def _iroot(n: int, k: int) -> int:
    """Floor of the k-th root of n, by Newton iteration on integers."""
    if n < 2:
        return n
    x = 1 << (n.bit_length() // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _perfect_power(n: int):
    """(root, k) with root**k == n and k maximal, or None."""
    for k in range(n.bit_length(), 1, -1):
        r = _iroot(n, k)
        if r > 1 and r**k == n:
            return r, k
    return None


def factorint(n: int) -> dict[int, int]:
    """Prime factorization: trial division for small factors, then perfect
    powers and Pollard rho for whatever remains (invariant factors can
    carry 64-bit primes, e.g. from resolutions of Z/p^e with p large).

    >>> factorint(360)
    {2: 3, 3: 2, 5: 1}
    >>> factorint((2**61 - 1) * 4) == {2: 2, 2**61 - 1: 1}
    True
    >>> factorint((2**61 - 1) ** 2) == {2**61 - 1: 2}
    True
    """
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n and p < 10_000:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    stack = [(n, 1)] if n > 1 else []
    while stack:
        m, mult = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + mult
            continue
        power = _perfect_power(m)
        if power:
            stack.append((power[0], mult * power[1]))
            continue
        d = _pollard_rho(m)
        stack += [(d, mult), (m // d, mult)]
    return dict(sorted(out.items()))


def next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n


MAX_PRIME = 2**63 - 1


# ---------------------------------------------------------------------------
# points

GENERIC = 0  # the zero ideal of Z, i.e. the generic point of Spec(Z)


@dataclass(frozen=True, order=True)
class SpecZPoint:
    """A point of Spec(Z): the generic point (p == 0) or a maximal ideal (p).

    >>> SpecZPoint(0).is_generic
    True
    >>> print(SpecZPoint(7))
    (7)
    """

    p: int

    def __post_init__(self):
        if self.p != 0:
            if not (2 <= self.p <= MAX_PRIME):
                raise ValueError(f"prime out of 64-bit range: {self.p}")
            if not is_prime(self.p):
                raise ValueError(f"not a prime number: {self.p}")

    @property
    def is_generic(self) -> bool:
        return self.p == 0

    def __str__(self) -> str:
        return "0" if self.p == 0 else f"({self.p})"


def zpoint(p) -> SpecZPoint:
    if isinstance(p, SpecZPoint):
        return p
    return SpecZPoint(int(p))


# ---------------------------------------------------------------------------
# the two spectrum models


class FinPoset:
    """A finite poset of primes given by its covering relation.

    ``covers`` contains the pairs ``(p, q)`` with p strictly below q and
    nothing strictly between ("p is maximal under q").  The full order is
    the transitive closure; it must be a strict partial order and every
    listed pair must be a genuine cover.

    >>> P = FinPoset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    >>> sorted(P.strictly_below("c"))
    ['a', 'b']
    >>> FinPoset(["a", "b"], [("a", "b"), ("b", "a")])
    Traceback (most recent call last):
        ...
    ValueError: covers contain a cycle
    """

    def __init__(self, points: Iterable[str], covers: Iterable[tuple[str, str]] = ()):
        self.points: tuple[str, ...] = tuple(dict.fromkeys(points))
        pts = set(self.points)
        if len(pts) != len(self.points):
            raise ValueError("duplicate point identifiers")
        cov = set()
        for p, q in covers:
            if p not in pts or q not in pts:
                raise ValueError(f"unknown point in cover ({p!r}, {q!r})")
            if p == q:
                raise ValueError("covers contain a cycle")
            cov.add((p, q))
        self.covers: frozenset[tuple[str, str]] = frozenset(cov)
        self._below = self._transitive_closure()
        for p, q in self.covers:
            between = self._below[q] & {r for r in pts if p in self._below[r]}
            if between:
                raise ValueError(
                    f"({p!r}, {q!r}) is not a covering pair: {sorted(between)!r} lies between"
                )

    def _transitive_closure(self) -> dict[str, frozenset[str]]:
        # below[q] = set of points strictly below q; cycle check by DFS.
        children: dict[str, set[str]] = {p: set() for p in self.points}
        for p, q in self.covers:
            children[q].add(p)
        below: dict[str, frozenset[str]] = {}
        state: dict[str, int] = {}

        def visit(q: str):
            if state.get(q) == 1:
                raise ValueError("covers contain a cycle")
            if state.get(q) == 2:
                return
            state[q] = 1
            acc: set[str] = set()
            for c in children[q]:
                visit(c)
                acc.add(c)
                acc |= below[c]
            if q in acc:
                raise ValueError("covers contain a cycle")
            below[q] = frozenset(acc)
            state[q] = 2

        for q in self.points:
            visit(q)
        return below

    # -- order calculus -----------------------------------------------------

    def has_point(self, p: str) -> bool:
        return p in self._below

    def check_point(self, p: str) -> str:
        if p not in self._below:
            raise ValueError(f"unknown point identifier: {p!r}")
        return p

    def lt(self, p: str, q: str) -> bool:
        return p in self._below[q]

    def leq(self, p: str, q: str) -> bool:
        return p == q or p in self._below[q]

    def strictly_below(self, q: str) -> frozenset[str]:
        return self._below[self.check_point(q)]

    def up_set(self, p: str) -> frozenset[str]:
        """All specializations of p (p itself included)."""
        self.check_point(p)
        return frozenset(q for q in self.points if self.leq(p, q))

    def __eq__(self, other):
        return (
            isinstance(other, FinPoset)
            and set(self.points) == set(other.points)
            and self.covers == other.covers
        )

    def __hash__(self):
        return hash((frozenset(self.points), self.covers))

    def __repr__(self):
        return f"FinPoset({list(self.points)!r}, {sorted(self.covers)!r})"

    @property
    def is_specz(self) -> bool:
        return False

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "points": [{"id": p} for p in self.points],
            "covers": [list(c) for c in sorted(self.covers)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FinPoset":
        return cls(
            [entry["id"] for entry in obj["points"]],
            [tuple(c) for c in obj.get("covers", ())],
        )


class SpecZ:
    """The spectrum of the integers.

    A singleton stand-in: the point set is infinite, so the class only
    offers the order calculus (generic point below every maximal ideal).
    """

    def has_point(self, p) -> bool:
        try:
            zpoint(p)
        except (ValueError, TypeError):
            return False
        return True

    def check_point(self, p) -> SpecZPoint:
        return zpoint(p)

    @property
    def is_specz(self) -> bool:
        return True

    def __eq__(self, other):
        return isinstance(other, SpecZ)

    def __hash__(self):
        return hash("SpecZ")

    def __repr__(self):
        return "SPEC_Z"

    def to_json(self) -> dict:
        return {"ring": "Z"}


SPEC_Z = SpecZ()


def spectrum_from_json(obj: dict):
    if obj.get("ring") == "Z":
        return SPEC_Z
    return FinPoset.from_json(obj)


# ---------------------------------------------------------------------------
# sp-subsets


@dataclass(frozen=True)
class PosetSubset:
    """An up-set of a finite poset (a subset stable under specialization)."""

    spectrum: FinPoset
    points: frozenset[str]

    def __post_init__(self):
        for p in self.points:
            self.spectrum.check_point(p)
        for p in self.points:
            for q in self.spectrum.points:
                if self.spectrum.lt(p, q) and q not in self.points:
                    raise ValueError(
                        f"not stable under specialization: {p!r} in, {q!r} out"
                    )

    def contains(self, p: str) -> bool:
        return p in self.points

    @property
    def is_empty(self) -> bool:
        return not self.points

    @property
    def is_whole(self) -> bool:
        return self.points == frozenset(self.spectrum.points)

    def issubset(self, other: "PosetSubset") -> bool:
        return self.points <= other.points

    def meet(self, other: "PosetSubset") -> "PosetSubset":
        return PosetSubset(self.spectrum, self.points & other.points)

    def join(self, other: "PosetSubset") -> "PosetSubset":
        return PosetSubset(self.spectrum, self.points | other.points)

    def __str__(self):
        return "{" + ",".join(sorted(self.points)) + "}"

    def to_json(self) -> dict:
        return {"kind": "points", "points": sorted(self.points)}


@dataclass(frozen=True)
class ZSubset:
    """A canonical sp-subset of Spec(Z).

    Three shapes: the whole spectrum, a finite set of maximal ideals, or
    a cofinite set of maximal ideals (every (p) outside a finite excluded
    set).  Any subset containing the generic point is forced whole, since
    the generic point specializes to everything.

    >>> ZSubset.finite([5, 2]).issubset(ZSubset.cofinite([3]))
    True
    >>> ZSubset.cofinite([2]).meet(ZSubset.finite([2, 7]))
    ZSubset.finite([7])
    """

    kind: str  # "whole" | "finite" | "cofinite"
    primes: frozenset[int]

    def __post_init__(self):
        if self.kind not in ("whole", "finite", "cofinite"):
            raise ValueError(f"bad subset kind {self.kind!r}")
        if self.kind == "whole" and self.primes:
            raise ValueError("whole subset carries no prime data")
        for p in self.primes:
            zpoint(p)

    # -- constructors --------------------------------------------------------

    @staticmethod
    def whole() -> "ZSubset":
        return ZSubset("whole", frozenset())

    @staticmethod
    def empty() -> "ZSubset":
        return ZSubset("finite", frozenset())

    @staticmethod
    def finite(primes: Iterable[int]) -> "ZSubset":
        return ZSubset("finite", frozenset(int(p) for p in primes))

    @staticmethod
    def cofinite(excluded: Iterable[int]) -> "ZSubset":
        return ZSubset("cofinite", frozenset(int(p) for p in excluded))

    # -- predicates ----------------------------------------------------------

    @property
    def is_whole(self) -> bool:
        return self.kind == "whole"

    @property
    def is_empty(self) -> bool:
        return self.kind == "finite" and not self.primes

    @property
    def contains_generic(self) -> bool:
        return self.kind == "whole"

    def contains(self, point) -> bool:
        pt = zpoint(point)
        if self.kind == "whole":
            return True
        if pt.is_generic:
            return False
        if self.kind == "finite":
            return pt.p in self.primes
        return pt.p not in self.primes

    def issubset(self, other: "ZSubset") -> bool:
        if other.kind == "whole":
            return True
        if self.kind == "whole":
            return False
        if self.kind == "finite":
            if other.kind == "finite":
                return self.primes <= other.primes
            return not (self.primes & other.primes)
        # cofinite self
        if other.kind == "finite":
            return False  # a cofinite set of maximals is infinite
        return other.primes <= self.primes

    # -- boolean algebra (within the maximal-only shapes) ---------------------

    def meet(self, other: "ZSubset") -> "ZSubset":
        if self.kind == "whole":
            return other
        if other.kind == "whole":
            return self
        if self.kind == "finite" and other.kind == "finite":
            return ZSubset.finite(self.primes & other.primes)
        if self.kind == "finite":
            return ZSubset.finite(self.primes - other.primes)
        if other.kind == "finite":
            return ZSubset.finite(other.primes - self.primes)
        return ZSubset.cofinite(self.primes | other.primes)

    def join(self, other: "ZSubset") -> "ZSubset":
        if self.kind == "whole" or other.kind == "whole":
            return ZSubset.whole()
        if self.kind == "finite" and other.kind == "finite":
            return ZSubset.finite(self.primes | other.primes)
        if self.kind == "cofinite" and other.kind == "cofinite":
            return ZSubset.cofinite(self.primes & other.primes)
        fin, cof = (self, other) if self.kind == "finite" else (other, self)
        return ZSubset.cofinite(cof.primes - fin.primes)

    def minus(self, other: "ZSubset") -> "ZSubset":
        """Set difference, staying among maximal ideals (whole \\ X drops 0)."""
        if other.kind == "whole":
            return ZSubset.empty()
        if self.kind == "whole":
            return ZSubset.cofinite(other.primes) if other.kind == "finite" else ZSubset.finite(other.primes)
        if self.kind == "finite":
            if other.kind == "finite":
                return ZSubset.finite(self.primes - other.primes)
            return ZSubset.finite(self.primes & other.primes)
        if other.kind == "finite":
            return ZSubset.cofinite(self.primes | other.primes)
        return ZSubset.finite(other.primes - self.primes)

    def sample_prime(self) -> Optional[int]:
        """Some maximal ideal in the subset, if one exists."""
        if self.kind == "finite":
            return min(self.primes) if self.primes else None
        if self.kind == "cofinite":
            p = 2
            while p in self.primes:
                p = next_prime(p)
            return p
        return 2

    def __repr__(self):
        if self.kind == "whole":
            return "ZSubset.whole()"
        name = "finite" if self.kind == "finite" else "cofinite"
        return f"ZSubset.{name}({sorted(self.primes)!r})"

    def __str__(self):
        if self.kind == "whole":
            return "Spec(Z)"
        if self.kind == "finite":
            return "{" + ",".join(f"({p})" for p in sorted(self.primes)) + "}"
        return "maximals minus {" + ",".join(f"({p})" for p in sorted(self.primes)) + "}"

    def to_json(self) -> dict:
        if self.kind == "whole":
            return {"kind": "whole"}
        return {"kind": self.kind, "primes": sorted(self.primes)}


def subset_from_json(obj: dict, spectrum):
    kind = obj["kind"]
    if kind == "points":
        return PosetSubset(spectrum, frozenset(obj["points"]))
    if kind == "whole":
        if spectrum.is_specz:
            return ZSubset.whole()
        return PosetSubset(spectrum, frozenset(spectrum.points))
    if kind == "finite":
        return ZSubset.finite(obj.get("primes", ()))
    if kind == "cofinite":
        return ZSubset.cofinite(obj.get("primes", ()))
    raise ValueError(f"bad subset kind {kind!r}")


def whole_subset(spectrum):
    if spectrum.is_specz:
        return ZSubset.whole()
    return PosetSubset(spectrum, frozenset(spectrum.points))


def empty_subset(spectrum):
    if spectrum.is_specz:
        return ZSubset.empty()
    return PosetSubset(spectrum, frozenset())


# ---------------------------------------------------------------------------
# operations


def specialization_closure(points, spectrum):
    """Smallest sp-subset containing the given points.

    >>> P = FinPoset("abc", [("a", "b"), ("b", "c")])
    >>> sorted(specialization_closure({"a"}, P).points)
    ['a', 'b', 'c']
    >>> specialization_closure({SpecZPoint(0)}, SPEC_Z)
    ZSubset.whole()
    """
    if spectrum.is_specz:
        pts = [zpoint(p) for p in points]
        if any(p.is_generic for p in pts):
            return ZSubset.whole()
        return ZSubset.finite(p.p for p in pts)
    closure: set[str] = set()
    for p in points:
        closure |= spectrum.up_set(p)
    return PosetSubset(spectrum, frozenset(closure))


def immediate_generalizations(q, spectrum) -> frozenset:
    """The points covered by q: those maximal under q.

    >>> immediate_generalizations(SpecZPoint(2), SPEC_Z)
    frozenset({SpecZPoint(p=0)})
    """
    if spectrum.is_specz:
        pt = zpoint(q)
        if pt.is_generic:
            return frozenset()
        return frozenset({SpecZPoint(GENERIC)})
    spectrum.check_point(q)
    return frozenset(p for (p, qq) in spectrum.covers if qq == q)


def is_open_closed(Z, spectrum=None):
    """Is the sp-subset also stable under generalization?

    Returns ``(True, None)`` or ``(False, (q, p))`` where q lies in Z and
    its immediate generalization p does not.  Such subsets are exactly
    the unions of connected components of the spectrum.

    >>> is_open_closed(ZSubset.finite([2]))
    (False, (SpecZPoint(p=2), SpecZPoint(p=0)))
    """
    if isinstance(Z, ZSubset):
        if Z.is_whole or Z.is_empty:
            return True, None
        p = Z.sample_prime()
        return False, (SpecZPoint(p), SpecZPoint(GENERIC))
    poset = Z.spectrum
    for (p, q) in sorted(poset.covers):
        if q in Z.points and p not in Z.points:
            return False, (q, p)
    return True, None


def connected_components(spectrum) -> list[frozenset]:
    """Components of the comparability graph.

    >>> P = FinPoset("abc", [("a", "b")])
    >>> sorted(sorted(c) for c in connected_components(P))
    [['a', 'b'], ['c']]
    """
    if spectrum.is_specz:
        return [frozenset({"Spec(Z)"})]  # a single component (never enumerated)
    parent = {p: p for p in spectrum.points}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, q in spectrum.covers:
        parent[find(p)] = find(q)
    comps: dict[str, set[str]] = {}
    for p in spectrum.points:
        comps.setdefault(find(p), set()).add(p)
    return [frozenset(c) for c in comps.values()]


def is_connected(spectrum) -> bool:
    if spectrum.is_specz:
        return True
    return len(connected_components(spectrum)) <= 1


# ---------------------------------------------------------------------------
# codimension functions


@dataclass(frozen=True)
class CodimFn:
    """A total integer-valued map on points, candidate codimension function.

    Over a finite poset the values are carried explicitly; over Spec(Z)
    two numbers suffice (one for the generic point, one shared by all
    maximal ideals).
    """

    spectrum: object
    values: tuple  # poset: tuple of (point, value); Spec(Z): (generic, maximal)

    @staticmethod
    def for_poset(spectrum: FinPoset, values: dict) -> "CodimFn":
        missing = [p for p in spectrum.points if p not in values]
        if missing:
            raise ValueError(f"codimension function not total, missing {missing!r}")
        return CodimFn(spectrum, tuple(sorted((p, int(values[p])) for p in spectrum.points)))

    @staticmethod
    def for_specz(generic_value: int, maximal_value: int) -> "CodimFn":
        return CodimFn(SPEC_Z, (int(generic_value), int(maximal_value)))

    def value(self, point) -> int:
        if self.spectrum.is_specz:
            g, m = self.values
            return g if zpoint(point).is_generic else m
        return dict(self.values)[self.spectrum.check_point(point)]

    def min_value(self) -> int:
        if self.spectrum.is_specz:
            return min(self.values)
        return min(v for _, v in self.values)

    def max_value(self) -> int:
        if self.spectrum.is_specz:
            return max(self.values)
        return max(v for _, v in self.values)


def validate_codim_fn(d: CodimFn, spectrum=None):
    """Check d(q) = d(p) + 1 across every covering pair.

    >>> P = FinPoset("ab", [("a", "b")])
    >>> validate_codim_fn(CodimFn.for_poset(P, {"a": 0, "b": 2}))
    (False, ('a', 'b'))
    """
    spec = d.spectrum
    if spec.is_specz:
        g, m = d.values
        if m != g + 1:
            return False, (SpecZPoint(GENERIC), SpecZPoint(2))
        return True, None
    for (p, q) in sorted(spec.covers):
        if d.value(q) != d.value(p) + 1:
            return False, (p, q)
    return True, None


def krull_dimension(spectrum) -> int:
    """Length of the longest chain (number of strict inclusions).

    >>> krull_dimension(SPEC_Z)
    1
    """
    if spectrum.is_specz:
        return 1
    if not spectrum.points:
        return 0
    depth: dict[str, int] = {}

    def height(q: str) -> int:
        if q not in depth:
            below = spectrum.strictly_below(q)
            depth[q] = 0 if not below else 1 + max(height(p) for p in below)
        return depth[q]

    return max(height(q) for q in spectrum.points)


def minimal_points(spectrum) -> frozenset:
    if spectrum.is_specz:
        return frozenset({SpecZPoint(GENERIC)})
    return frozenset(
        p for p in spectrum.points if not spectrum.strictly_below(p)
    )


def all_up_sets(spectrum, cap: Optional[int] = None) -> list[PosetSubset]:
    """Every sp-subset of a finite poset (the lattice of up-sets).

    >>> P = FinPoset("ab", [("a", "b")])
    >>> sorted(str(u) for u in all_up_sets(P))
    ['{a,b}', '{b}', '{}']
    """
    pts = spectrum.points
    if cap is not None and 2 ** len(pts) > cap:
        raise ValueError(f"up-set enumeration over {len(pts)} points exceeds cap {cap}")
    out = []
    for mask in range(2 ** len(pts)):
        subset = frozenset(p for k, p in enumerate(pts) if mask >> k & 1)
        ok = all(
            q in subset
            for p in subset
            for q in spectrum.points
            if spectrum.lt(p, q)
        )
        if ok:
            out.append(PosetSubset(spectrum, subset))
    return out
