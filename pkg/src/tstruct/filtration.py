"""Filtrations by supports and the weak Cousin condition.

A filtration by supports is a decreasing map j -> (sp-subset of the
spectrum).  We represent the eventually-constant ones: a constant tail
value for j < start, an explicit window of levels, and a constant head
value beyond (the head is empty for the filtrations "determined in an
interval", which are the ones with interesting truncation theory).

The weak Cousin condition asks that whenever q lies in level j, every
immediate generalization of q lies in level j - 1; the strong version
adds the converse on covering pairs.  These conditions govern exactly
when the associated truncation functors preserve finitely generated
homology, which is what the census and report machinery here feeds.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .spectrum import (
    CodimFn,
    FinPoset,
    GENERIC,
    PosetSubset,
    SPEC_Z,
    SpecZPoint,
    ZSubset,
    all_up_sets,
    empty_subset,
    is_connected,
    is_open_closed,
    next_prime,
    specialization_closure,
    subset_from_json,
    spectrum_from_json,
    validate_codim_fn,
    whole_subset,
    zpoint,
)


@dataclass(frozen=True)
class SpFiltration:
    """An eventually-constant decreasing filtration by sp-subsets.

    ``tail`` is the value for j < start, ``levels[k]`` the value at
    start + k, ``head`` the value past the window.  Stored in canonical
    minimal-window form: no level equals the adjacent constant value.

    >>> f = canonical_filtration(SPEC_Z)
    >>> f.value(0), f.value(1)
    (ZSubset.whole(), ZSubset.finite([]))
    """

    spectrum: object
    tail: object
    start: int
    levels: tuple
    head: object

    def __post_init__(self):
        subsets = (self.tail, *self.levels, self.head)
        for s in subsets:
            _check_subset(self.spectrum, s)
        prev = self.tail
        for s in (*self.levels, self.head):
            if not s.issubset(prev):
                raise ValueError(f"not decreasing: {s} after {prev}")
            prev = s
        # canonical minimal window
        levels = list(self.levels)
        start = self.start
        while levels and levels[0] == self.tail:
            levels.pop(0)
            start += 1
        while levels and levels[-1] == self.head:
            levels.pop()
        if not levels and self.tail == self.head:
            start = 0
        object.__setattr__(self, "levels", tuple(levels))
        object.__setattr__(self, "start", start)

    # -- access ---------------------------------------------------------------

    def value(self, j: int):
        if j < self.start:
            return self.tail
        k = j - self.start
        if k < len(self.levels):
            return self.levels[k]
        return self.head

    @property
    def window_end(self) -> int:
        """Last explicit level index (start - 1 when the window is empty)."""
        return self.start + len(self.levels) - 1

    @property
    def is_constant(self) -> bool:
        return not self.levels and self.tail == self.head

    @property
    def is_finite(self) -> bool:
        """Determined in an interval, or constant (length-0) filtration."""
        return self.is_constant or self.head.is_empty

    def determined_interval(self) -> tuple[int, int]:
        """The interval [s, n] with value(j) = value(s) for j <= s, a strict
        drop after s, and value(n + 1) the first empty level."""
        if self.is_constant:
            raise ValueError("a constant filtration is not determined in an interval")
        if not self.head.is_empty:
            raise ValueError("filtration does not reach the empty set")
        s = self.start - 1
        n = self.window_end if self.levels else self.start - 1
        return s, n

    def length(self) -> int:
        """Number of truncation steps: 0 for constants, n - s + 1 otherwise."""
        if self.is_constant:
            return 0
        s, n = self.determined_interval()
        return n - s + 1

    def shift(self, k: int) -> "SpFiltration":
        """The translate with value(j) = original value(j - k)."""
        return SpFiltration(self.spectrum, self.tail, self.start + k, self.levels, self.head)

    def check_range(self) -> range:
        """Indices j that see every transition plus both constant plateaus."""
        return range(self.start - 1, self.window_end + 3)

    def all_level_values(self) -> list:
        return [self.tail, *self.levels, self.head]

    def mentioned_primes(self) -> frozenset[int]:
        """Primes named in finite/cofinite level data (Spec(Z) only)."""
        out: set[int] = set()
        for s in self.all_level_values():
            out |= set(s.primes)
        return frozenset(out)

    def fresh_prime(self) -> int:
        """A prime unnamed in any level, standing in for the cofinite bulk."""
        p = 2
        named = self.mentioned_primes()
        while p in named:
            p = next_prime(p)
        return p

    def __str__(self):
        if self.is_constant:
            return f"constant {self.tail}"
        rng = ", ".join(
            f"{j}: {self.value(j)}" for j in range(self.start - 1, self.window_end + 2)
        )
        return f"filtration[{rng}, then {self.head}]"

    def to_json(self) -> dict:
        return {
            "spectrum": self.spectrum.to_json(),
            "tail": self.tail.to_json(),
            "window": {"start": self.start, "end": self.window_end},
            "levels": [s.to_json() for s in self.levels],
            "head": self.head.to_json(),
        }

    @staticmethod
    def from_json(obj: dict) -> "SpFiltration":
        spectrum = spectrum_from_json(obj["spectrum"])
        return SpFiltration(
            spectrum,
            subset_from_json(obj["tail"], spectrum),
            obj["window"]["start"],
            tuple(subset_from_json(s, spectrum) for s in obj.get("levels", ())),
            subset_from_json(obj["head"], spectrum),
        )


def _check_subset(spectrum, s):
    if spectrum.is_specz:
        if not isinstance(s, ZSubset):
            raise ValueError("levels over Spec(Z) must be ZSubset values")
    else:
        if not isinstance(s, PosetSubset) or s.spectrum != spectrum:
            raise ValueError("level subset belongs to a different spectrum")


# -- constructors ------------------------------------------------------------


def make_filtration(spectrum, tail, start, levels, head) -> SpFiltration:
    """Canonicalize raw window data into a filtration (errors if not
    decreasing or if a level is invalid)."""
    return SpFiltration(spectrum, tail, start, tuple(levels), head)


def constant_filtration(spectrum, value) -> SpFiltration:
    return SpFiltration(spectrum, value, 0, (), value)


def canonical_filtration(spectrum) -> SpFiltration:
    """Whole spectrum for j <= 0, empty after: the standard aisle at 0."""
    return SpFiltration(spectrum, whole_subset(spectrum), 1, (), empty_subset(spectrum))


def step_filtration(spectrum, i: int, Z) -> SpFiltration:
    """Z for j <= i, empty after (a length-1 filtration when Z is nonempty)."""
    return SpFiltration(spectrum, Z, i + 1, (), empty_subset(spectrum))


def from_values(spectrum, values: dict, tail, head) -> SpFiltration:
    """Filtration from an explicit window map {j: subset}."""
    if not values:
        return SpFiltration(spectrum, tail, 0, (), head)
    lo, hi = min(values), max(values)
    levels = []
    for j in range(lo, hi + 1):
        if j not in values:
            raise ValueError(f"window map misses level {j}")
        levels.append(values[j])
    return SpFiltration(spectrum, tail, lo, tuple(levels), head)


# ---------------------------------------------------------------------------
# covering-pair iteration, uniform over both spectrum models


def _cover_pairs(filtration: SpFiltration):
    """Covering pairs (p, q) relevant to Cousin checks.

    Over a finite poset these are the poset covers.  Over Spec(Z) every
    cover is (generic, (q)); the named primes of the filtration plus one
    fresh prime represent all of them faithfully, because membership of
    unnamed primes in every level is uniform.
    """
    spec = filtration.spectrum
    if not spec.is_specz:
        return sorted(spec.covers)
    primes = sorted(filtration.mentioned_primes()) + [filtration.fresh_prime()]
    return [(SpecZPoint(GENERIC), SpecZPoint(q)) for q in primes]


@dataclass(frozen=True)
class CousinReport:
    holds: bool
    witnesses: tuple  # ((j, q, p), ...) with q in level j, p not in level j-1

    def __bool__(self):
        return self.holds


def _cousin(filtration: SpFiltration, want_converse: bool) -> CousinReport:
    witnesses = []
    pairs = _cover_pairs(filtration)
    for j in filtration.check_range():
        lvl, prev = filtration.value(j), filtration.value(j - 1)
        for p, q in pairs:
            if lvl.contains(q) and not prev.contains(p):
                witnesses.append((j, q, p))
            elif want_converse and prev.contains(p) and not lvl.contains(q):
                witnesses.append((j, q, p))
    return CousinReport(not witnesses, tuple(witnesses))


def weak_cousin(filtration: SpFiltration) -> CousinReport:
    """Does every point of level j have all immediate generalizations in
    level j - 1?

    >>> f = from_values(SPEC_Z, {0: ZSubset.finite([2]), 1: ZSubset.finite([2])},
    ...                 ZSubset.finite([2]), ZSubset.empty())
    >>> weak_cousin(f).witnesses[0]
    (1, SpecZPoint(p=2), SpecZPoint(p=0))

    (At level 1 the ideal (2) is present but the generic point is missing
    from level 0.)
    """
    return _cousin(filtration, want_converse=False)


def strong_cousin(filtration: SpFiltration) -> CousinReport:
    """Weak Cousin plus the converse implication on covering pairs."""
    return _cousin(filtration, want_converse=True)


# ---------------------------------------------------------------------------
# localization


def localize_spectrum(spectrum, q):
    """The sub-spectrum of generalizations of q, as a finite poset, with a
    membership predicate for transporting subsets."""
    if spectrum.is_specz:
        pt = zpoint(q)
        if pt.is_generic:
            sub = FinPoset(["0"], [])
            return sub, lambda level: frozenset(["0"]) if level.is_whole else frozenset()
        name = str(pt)
        sub = FinPoset(["0", name], [("0", name)])

        def transport(level, name=name, p=pt.p):
            pts = set()
            if level.is_whole:
                pts.add("0")
            if level.contains(p):
                pts.add(name)
            return frozenset(pts)

        return sub, transport
    spectrum.check_point(q)
    keep = {p for p in spectrum.points if spectrum.leq(p, q)}
    sub = FinPoset(
        [p for p in spectrum.points if p in keep],
        [c for c in spectrum.covers if c[0] in keep and c[1] in keep],
    )
    return sub, lambda level: frozenset(level.points & keep)


def localize(filtration: SpFiltration, q) -> SpFiltration:
    """Restrict a filtration to the generalizations of q, intersecting
    every level with the localized spectrum.

    >>> f = canonical_filtration(SPEC_Z)
    >>> g = localize(f, 2)
    >>> sorted(g.value(0).points), sorted(g.value(1).points)
    (['(2)', '0'], [])
    """
    sub, transport = localize_spectrum(filtration.spectrum, q)
    return SpFiltration(
        sub,
        PosetSubset(sub, transport(filtration.tail)),
        filtration.start,
        tuple(PosetSubset(sub, transport(s)) for s in filtration.levels),
        PosetSubset(sub, transport(filtration.head)),
    )


# ---------------------------------------------------------------------------
# Cohen-Macaulay and dual filtrations


def cm_filtration(codim: CodimFn) -> SpFiltration:
    """Level i = {p : codim(p) > i}; satisfies the strong Cousin condition.

    >>> f = cm_filtration(CodimFn.for_specz(0, 1))
    >>> f.value(-1), f.value(0), f.value(1)
    (ZSubset.whole(), ZSubset.cofinite([]), ZSubset.finite([]))
    """
    ok, witness = validate_codim_fn(codim)
    if not ok:
        raise ValueError(f"not a codimension function, witness {witness!r}")
    spec = codim.spectrum
    lo, hi = codim.min_value(), codim.max_value()
    if spec.is_specz:
        levels = tuple(ZSubset.cofinite([]) for _ in range(lo, hi))
        return SpFiltration(spec, ZSubset.whole(), lo, levels, ZSubset.empty())
    levels = tuple(
        PosetSubset(spec, frozenset(p for p in spec.points if codim.value(p) > i))
        for i in range(lo, hi)
    )
    return SpFiltration(spec, whole_subset(spec), lo, levels, empty_subset(spec))


def _candidate_points(filtration: SpFiltration):
    spec = filtration.spectrum
    if spec.is_specz:
        yield SpecZPoint(GENERIC)
        for p in sorted(filtration.mentioned_primes()):
            yield SpecZPoint(p)
        yield SpecZPoint(filtration.fresh_prime())
    else:
        yield from spec.points


def dual_filtration(filtration: SpFiltration, codim: CodimFn) -> SpFiltration:
    """The dual of a finite filtration with respect to a codimension
    function: level k collects the points q with

        V(q) /\\ (level i)  contained in  (CM level k + i)   for all i.

    For a one-step filtration this is the closed-form dual of the
    corresponding local-cohomology aisle; for longer windows the levels
    are intersected pointwise.  The orthogonality machinery in the
    duality module validates the formula before results are trusted.

    >>> dual_filtration(canonical_filtration(SPEC_Z), CodimFn.for_specz(0, 1)) \\
    ...     == cm_filtration(CodimFn.for_specz(0, 1))
    True
    """
    if not filtration.is_finite:
        raise ValueError("dual filtration needs a finite filtration")
    ok, witness = validate_codim_fn(codim)
    if not ok:
        raise ValueError(f"not a codimension function, witness {witness!r}")
    spec = filtration.spectrum
    cm = cm_filtration(codim)
    if filtration.is_constant:
        const = filtration.tail
        if const.is_empty:
            return constant_filtration(spec, whole_subset(spec))
        # only points whose closure misses the constant value survive at all k
        members = [
            q
            for q in _candidate_points(filtration)
            if specialization_closure([q], spec).meet(const).is_empty
        ]
        return constant_filtration(spec, _collect_points(filtration, spec, members))

    s, n = filtration.determined_interval()
    lo, hi = codim.min_value(), codim.max_value()
    kmin = lo - n - 1           # one below: level there is provably whole
    kmax = hi - s               # from here on: level equals the head below

    def passes(q, k):
        closure = specialization_closure([q], spec)
        for i in range(s, n + 1):
            if not closure.meet(filtration.value(i)).issubset(cm.value(k + i)):
                return False
        return True

    head_members = [
        q
        for q in _candidate_points(filtration)
        if specialization_closure([q], spec).meet(filtration.value(s)).is_empty
    ]
    head = _collect_points(filtration, spec, head_members)
    levels = []
    for k in range(kmin, kmax + 1):
        members = [q for q in _candidate_points(filtration) if passes(q, k)]
        levels.append(_collect_points(filtration, spec, members))
    return SpFiltration(spec, whole_subset(spec), kmin, tuple(levels), head)


def _collect_points(filtration: SpFiltration, spec, members) -> object:
    """Rebuild a canonical subset from the finite membership sample."""
    if not spec.is_specz:
        return PosetSubset(spec, frozenset(members))
    pts = [zpoint(m) for m in members]
    if any(p.is_generic for p in pts):
        return ZSubset.whole()
    named = filtration.mentioned_primes()
    fresh = filtration.fresh_prime()
    primes = {p.p for p in pts}
    if fresh in primes:
        return ZSubset.cofinite(named - primes)
    return ZSubset.finite(primes)


# ---------------------------------------------------------------------------
# stabilization / discreteness


@dataclass(frozen=True)
class StabilizationReport:
    stable_from: int
    bottom_value: object
    bottom_open_closed: bool
    bottom_witness: Optional[tuple]
    intersection: object
    intersection_open_closed: bool
    separated: bool
    eventually_empty: bool
    weak_cousin_holds: bool


def stabilization_report(filtration: SpFiltration) -> StabilizationReport:
    """Where the filtration stabilizes and how its limits sit topologically.

    For a weak-Cousin filtration the bottom value and the intersection
    are open and closed; on a connected spectrum a nonconstant weak-Cousin
    filtration must bottom out at the whole space and die at the top
    (raises if that provable combination fails, since it would mean a
    broken engine).
    """
    wc = weak_cousin(filtration).holds
    bottom = filtration.tail
    inter = filtration.head  # decreasing and eventually constant
    b_oc, b_w = is_open_closed(bottom)
    i_oc, _ = is_open_closed(inter)
    report = StabilizationReport(
        stable_from=filtration.start - 1,
        bottom_value=bottom,
        bottom_open_closed=b_oc,
        bottom_witness=b_w,
        intersection=inter,
        intersection_open_closed=i_oc,
        separated=inter.is_empty,
        eventually_empty=filtration.head.is_empty,
        weak_cousin_holds=wc,
    )
    if wc:
        if not (b_oc and i_oc):
            raise ArithmeticError(
                "weak-Cousin filtration with a bottom or intersection that is "
                "not open-closed: engine bug"
            )
        if is_connected(filtration.spectrum) and not filtration.is_constant:
            if not bottom.is_whole or not filtration.head.is_empty:
                raise ArithmeticError(
                    "nonconstant weak-Cousin filtration on a connected spectrum "
                    "must run from the whole space to the empty set"
                )
    return report


def bousfield_class(filtration: SpFiltration):
    """For a constant filtration, its value and whether that value is
    open-closed (the case restricting to finitely generated objects);
    None otherwise."""
    if not filtration.is_constant:
        return None
    oc, _ = is_open_closed(filtration.tail)
    return filtration.tail, oc


# ---------------------------------------------------------------------------
# lattice operations


def meet(f: SpFiltration, g: SpFiltration) -> SpFiltration:
    """Pointwise intersection of levels (the aisle of the meet is the
    intersection of the aisles).

    >>> f = canonical_filtration(SPEC_Z)
    >>> meet(f, f.shift(-1)) == f.shift(-1)
    True
    """
    if f.spectrum != g.spectrum:
        raise ValueError("filtrations live on different spectra")
    lo = min(f.start, g.start)
    hi = max(f.window_end, g.window_end)
    levels = tuple(f.value(j).meet(g.value(j)) for j in range(lo, hi + 1))
    return SpFiltration(
        f.spectrum, f.tail.meet(g.tail), lo, levels, f.head.meet(g.head)
    )


def stalk_in_aisle(filtration: SpFiltration, point, i: int) -> bool:
    """Is the cyclic generator at point, placed in degree i, in the aisle?

    By the classification of compactly generated aisles this is exactly
    the support inclusion V(point) in level i.
    """
    closure = specialization_closure([point], filtration.spectrum)
    return closure.issubset(filtration.value(i))


def read_back(filtration: SpFiltration, points=None) -> bool:
    """Classification round trip: recovering each level from aisle
    membership of stalk generators returns the filtration unchanged."""
    spec = filtration.spectrum
    if spec.is_specz:
        pts = list(_candidate_points(filtration))
    else:
        pts = list(spec.points) if points is None else list(points)
    for j in filtration.check_range():
        lvl = filtration.value(j)
        for p in pts:
            if stalk_in_aisle(filtration, p, j) != lvl.contains(p):
                return False
    return True


# ---------------------------------------------------------------------------
# census enumeration


def _level_universe(spectrum, universe, cap):
    if spectrum.is_specz:
        if universe is None:
            raise ValueError("a prime universe is required over Spec(Z)")
        primes = sorted(set(int(p) for p in universe))
        values = [ZSubset.whole()]
        for r in range(len(primes) + 1):
            for comb in itertools.combinations(primes, r):
                values.append(ZSubset.finite(comb))
        return values
    return all_up_sets(spectrum, cap=cap)


def _pair_ok(filtration_spectrum, pairs, prev, lvl) -> bool:
    # weak Cousin on one transition: q in lvl forces p in prev
    return all(not lvl.contains(q) or prev.contains(p) for p, q in pairs)


def enumerate_census_class(
    spectrum,
    window: tuple[int, int],
    universe=None,
    cap: int = 2_000_000,
) -> list[SpFiltration]:
    """Every filtration of the census representation class, Cousin or not:
    constants plus the decreasing window chains with constant tail and
    empty head.  The weak-Cousin census is the filtered sublist."""
    a, b = window
    if b < a:
        raise ValueError("empty census window")
    values = _level_universe(spectrum, universe, cap)
    if len(values) ** (b - a + 1) > cap:
        raise ValueError(
            f"census of size {len(values)}^{b - a + 1} exceeds cap {cap}"
        )
    empty = empty_subset(spectrum)
    out: dict = {}

    def key(f: SpFiltration):
        return str(f.to_json())

    for v in values:
        f = constant_filtration(spectrum, v)
        out[key(f)] = f

    def extend(chain):
        if len(chain) == b - a + 1:
            f = from_values(
                spectrum,
                {a + k: chain[k] for k in range(len(chain))},
                chain[0],
                empty,
            )
            out[key(f)] = f
            return
        for v in values:
            if not chain or v.issubset(chain[-1]):
                extend(chain + [v])

    extend([])
    return [out[k] for k in sorted(out)]


def enumerate_weak_cousin(
    spectrum,
    window: tuple[int, int],
    universe=None,
    cap: int = 2_000_000,
    modulo_translation: bool = False,
) -> list[SpFiltration]:
    """The census: every weak-Cousin filtration in the representation
    class "constant before the window, empty after it, or constant".

    Enumerates decreasing level chains over the window with inline
    Cousin pruning; duplicates collapse under canonicalization.  With
    ``modulo_translation`` each shift class is reported once, by the
    representative whose determined interval starts at 0.

    >>> P = FinPoset("pm", [("p", "m")])
    >>> len(enumerate_weak_cousin(P, (0, 1)))
    5
    >>> len(enumerate_weak_cousin(P, (0, 1), modulo_translation=True))
    4
    """
    a, b = window
    if b < a:
        raise ValueError("empty census window")
    values = _level_universe(spectrum, universe, cap)
    if len(values) ** (b - a + 1) > cap:
        raise ValueError(
            f"census of size {len(values)}^{b - a + 1} exceeds cap {cap}"
        )
    if spectrum.is_specz:
        named = sorted(set(int(p) for p in universe))
        fresh = 2
        while fresh in named:
            fresh = next_prime(fresh)
        pairs = [(SpecZPoint(GENERIC), SpecZPoint(q)) for q in named + [fresh]]
    else:
        pairs = sorted(spectrum.covers)
    empty = empty_subset(spectrum)
    out: dict = {}

    def key(f: SpFiltration):
        return str(f.to_json())

    # constants: exactly the open-closed values
    for v in values:
        if _pair_ok(spectrum, pairs, v, v):
            f = constant_filtration(spectrum, v)
            out[key(f)] = f

    # windowed: tail = first level (must be self-consistent), empty head
    def extend(chain):
        j = len(chain)
        if j == b - a + 1:
            f = from_values(
                spectrum,
                {a + k: chain[k] for k in range(len(chain))},
                chain[0],
                empty,
            )
            out[key(f)] = f
            return
        for v in values:
            if not chain:
                if _pair_ok(spectrum, pairs, v, v):
                    extend([v])
            elif v.issubset(chain[-1]) and _pair_ok(spectrum, pairs, chain[-1], v):
                extend(chain + [v])

    extend([])
    if modulo_translation:
        shifted = {}
        for f in out.values():
            rep = f if f.is_constant else f.shift(-f.determined_interval()[0])
            shifted[key(rep)] = rep
        out = shifted
    census = [out[k] for k in sorted(out)]
    for f in census:
        assert weak_cousin(f).holds
    return census
