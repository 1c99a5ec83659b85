"""Cross-cutting property tests with independent in-test oracles."""

import itertools

from tstruct.corpus import random_free_complex, rng_from_seed
from tstruct.derived import (
    from_free_complex,
    in_aisle,
    in_coaisle,
    orthogonality_check,
    tau_filtration,
)
from tstruct.duality import DUALIZING
from tstruct.filtration import (
    cm_filtration,
    constant_filtration,
    dual_filtration,
    enumerate_weak_cousin,
    from_values,
    weak_cousin,
)
from tstruct.spectrum import (
    SPEC_Z,
    CodimFn,
    FinPoset,
    GENERIC,
    SpecZPoint,
    ZSubset,
    specialization_closure,
)

W = ZSubset.whole()
E = ZSubset.empty()


def zf(*ps):
    return ZSubset.finite(ps)


# -- census over Spec(Z) against a from-scratch enumerator --------------------


def brute_census_z(window, universe):
    a, b = window
    values = [W] + [
        ZSubset.finite(c)
        for r in range(len(universe) + 1)
        for c in itertools.combinations(universe, r)
    ]
    fresh = 7 if 7 not in universe else 11
    witnesses = list(universe) + [fresh]

    def cousin_ok(f):
        for j in range(a - 2, b + 3):
            lvl, prev = f.value(j), f.value(j - 1)
            for q in witnesses:
                if lvl.contains(q) and not prev.is_whole:
                    return False
        return True

    found = {}
    for v in values:
        f = constant_filtration(SPEC_Z, v)
        if cousin_ok(f):
            found[str(f.to_json())] = f
    for chain in itertools.product(values, repeat=b - a + 1):
        if any(not chain[i + 1].issubset(chain[i]) for i in range(len(chain) - 1)):
            continue
        f = from_values(
            SPEC_Z, {a + i: chain[i] for i in range(len(chain))}, chain[0], E
        )
        if cousin_ok(f):
            found[str(f.to_json())] = f
    return found


def test_census_z_sound_and_complete():
    for window, universe in (((-1, 1), (2, 3)), ((0, 2), (2,)), ((-1, 0), (2, 3, 5))):
        fast = {
            str(f.to_json()): f
            for f in enumerate_weak_cousin(SPEC_Z, window, universe=universe)
        }
        brute = brute_census_z(window, universe)
        assert set(fast) == set(brute), (window, universe)


# -- dual filtration against the direct formula on posets ---------------------


POSETS = [
    FinPoset(["p", "m"], [("p", "m")]),
    FinPoset("abc", [("a", "b"), ("b", "c")]),
    FinPoset("abc", [("a", "c"), ("b", "c")]),
]


def height_codim(P: FinPoset) -> CodimFn:
    values = {}
    for p in P.points:
        below = P.strictly_below(p)
        values[p] = 1 + max((values[q] for q in below), default=-1)
    return CodimFn.for_poset(P, values)


def direct_dual_level(f, cm, k, s, n):
    members = []
    for q in f.spectrum.points:
        closure = specialization_closure([q], f.spectrum)
        if all(
            closure.meet(f.value(i)).issubset(cm.value(k + i))
            for i in range(s - 3, n + 4)
        ):
            members.append(q)
    return frozenset(members)


def test_dual_filtration_matches_direct_formula_on_posets():
    for P in POSETS:
        codim = height_codim(P)
        if not weak_cousin(cm_filtration(codim)).holds:
            continue
        for f in enumerate_weak_cousin(P, (0, 2)):
            if f.is_constant:
                continue
            s, n = f.determined_interval()
            cm = cm_filtration(codim)
            dual = dual_filtration(f, codim)
            lo = codim.min_value() - n - 3
            hi = codim.max_value() - s + 3
            for k in range(lo, hi + 1):
                assert dual.value(k).points == direct_dual_level(f, cm, k, s, n), (
                    repr(P),
                    str(f),
                    k,
                )
            # duality is involutive on the census
            assert dual_filtration(dual, codim) == f


def test_dual_filtration_involution_on_z_census():
    codim = DUALIZING.codim
    for f in enumerate_weak_cousin(SPEC_Z, (-2, 2), universe=(2, 3)):
        dual = dual_filtration(f, codim)
        assert weak_cousin(dual).holds
        assert dual_filtration(dual, codim) == f, str(f)


# -- truncation contract under arbitrary finite filtrations --------------------


def rand_filtration(rng):
    a = rng.randint(-2, 0)
    width = rng.randint(1, 4)
    chain = []
    cur = W if rng.random() < 0.6 else zf(*[p for p in (2, 3, 5) if rng.random() < 0.5])
    for _ in range(width):
        chain.append(cur)
        cur = cur.meet(zf(*[p for p in (2, 3, 5) if rng.random() < 0.6]))
    return from_values(SPEC_Z, {a + i: chain[i] for i in range(width)}, chain[0], E)


def test_truncation_contract_on_random_filtrations():
    # the contract holds for every finite filtration, Cousin or not; only
    # finite generation needs the Cousin condition
    rng = rng_from_seed(314159)
    for _ in range(120):
        f = rand_filtration(rng)
        X = from_free_complex(random_free_complex(rng))
        res = tau_filtration(f, X)
        assert res.determinate
        assert in_aisle(f, res.lower)
        assert in_coaisle(f, res.upper)
        assert orthogonality_check(f, res.upper, (-7, 7)).holds
        # co-aisle membership, generator orthogonality and a vanishing lower
        # vertex are three faces of the same predicate
        lower_zero = tau_filtration(f, X).lower.is_zero
        assert (
            orthogonality_check(f, X, (-7, 7)).holds
            == in_coaisle(f, X)
            == lower_zero
        )
        if weak_cousin(f).holds:
            assert res.lower.is_fg and res.upper.is_fg
