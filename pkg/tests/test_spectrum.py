import pytest
from hypothesis import given, settings, strategies as st

from tstruct.spectrum import (
    SPEC_Z,
    CodimFn,
    FinPoset,
    PosetSubset,
    SpecZPoint,
    ZSubset,
    all_up_sets,
    connected_components,
    immediate_generalizations,
    is_open_closed,
    is_prime,
    krull_dimension,
    minimal_points,
    specialization_closure,
    spectrum_from_json,
    subset_from_json,
    validate_codim_fn,
    zpoint,
)

CHAIN3 = FinPoset("abc", [("a", "b"), ("b", "c")])


def test_point_validation():
    assert SpecZPoint(0).is_generic
    assert str(SpecZPoint(7)) == "(7)"
    with pytest.raises(ValueError):
        SpecZPoint(6)
    with pytest.raises(ValueError):
        SpecZPoint(2**63 + 9)
    assert is_prime(2**61 - 1)


def test_poset_validation():
    with pytest.raises(ValueError):
        FinPoset("ab", [("a", "b"), ("b", "a")])
    with pytest.raises(ValueError):
        # (a, c) is transitively implied, not a covering pair
        FinPoset("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    with pytest.raises(ValueError):
        FinPoset("ab", [("a", "z")])


def test_specialization_closure():
    assert specialization_closure({"a"}, CHAIN3).points == frozenset("abc")
    assert specialization_closure({SpecZPoint(0)}, SPEC_Z) == ZSubset.whole()
    assert specialization_closure([2, 5], SPEC_Z) == ZSubset.finite([2, 5])
    closed = specialization_closure({"b"}, CHAIN3)
    assert specialization_closure(closed.points, CHAIN3) == closed  # idempotent
    with pytest.raises(ValueError):
        specialization_closure({"zz"}, CHAIN3)


def test_immediate_generalizations():
    assert immediate_generalizations(2, SPEC_Z) == frozenset({SpecZPoint(0)})
    assert immediate_generalizations(0, SPEC_Z) == frozenset()
    vee = FinPoset("abc", [("a", "c"), ("b", "c")])
    assert immediate_generalizations("c", vee) == frozenset({"a", "b"})
    assert immediate_generalizations("a", vee) == frozenset()


def test_is_open_closed():
    assert is_open_closed(ZSubset.whole()) == (True, None)
    ok, witness = is_open_closed(ZSubset.finite([2]))
    assert not ok and witness == (SpecZPoint(2), SpecZPoint(0))
    ok, witness = is_open_closed(ZSubset.cofinite([3]))
    assert not ok and witness[1].is_generic
    # a whole chain inside a disjoint union of two chains is open-closed
    two_chains = FinPoset("abcd", [("a", "b"), ("c", "d")])
    assert is_open_closed(PosetSubset(two_chains, frozenset("ab")))[0]
    assert not is_open_closed(PosetSubset(two_chains, frozenset("b")))[0]
    # brute force: open-closed iff union of connected components
    comps = connected_components(two_chains)
    for U in all_up_sets(two_chains):
        expected = all(not (U.points & c) or c <= U.points for c in comps)
        assert is_open_closed(U)[0] == expected


def test_connected_components():
    parts = connected_components(FinPoset("abc", [("a", "b")]))
    assert sorted(sorted(c) for c in parts) == [["a", "b"], ["c"]]
    assert connected_components(FinPoset([], [])) == []


def test_codim_validation():
    assert validate_codim_fn(CodimFn.for_specz(0, 1)) == (True, None)
    assert validate_codim_fn(CodimFn.for_specz(3, 4)) == (True, None)
    assert not validate_codim_fn(CodimFn.for_specz(0, 2))[0]
    P = FinPoset("ab", [("a", "b")])
    ok, witness = validate_codim_fn(CodimFn.for_poset(P, {"a": 0, "b": 2}))
    assert not ok and witness == ("a", "b")
    single = FinPoset(["x"], [])
    assert validate_codim_fn(CodimFn.for_poset(single, {"x": 5}))[0]
    with pytest.raises(ValueError):
        CodimFn.for_poset(P, {"a": 0})


def test_krull_dimension_and_minimal():
    assert krull_dimension(SPEC_Z) == 1
    assert minimal_points(SPEC_Z) == frozenset({SpecZPoint(0)})
    chain4 = FinPoset("wxyz", [("w", "x"), ("x", "y"), ("y", "z")])
    assert krull_dimension(chain4) == 3
    anti = FinPoset("abc", [])
    assert krull_dimension(anti) == 0
    assert minimal_points(anti) == frozenset("abc")


def test_up_set_enumeration():
    assert len(all_up_sets(CHAIN3)) == 4  # chains have n+1 up-sets
    with pytest.raises(ValueError):
        all_up_sets(CHAIN3, cap=3)


small_prime = st.sampled_from([2, 3, 5, 7, 11])
zsubsets = st.one_of(
    st.just(ZSubset.whole()),
    st.sets(small_prime, max_size=4).map(ZSubset.finite),
    st.sets(small_prime, max_size=4).map(ZSubset.cofinite),
)


@given(zsubsets, zsubsets)
@settings(max_examples=200, deadline=None)
def test_zsubset_algebra_laws(A, B):
    assert A.meet(B) == B.meet(A)
    assert A.join(B) == B.join(A)
    assert A.meet(B).issubset(A) and A.meet(B).issubset(B)
    assert A.issubset(A.join(B)) and B.issubset(A.join(B))
    assert A.minus(B).meet(B).is_empty
    if not A.is_whole:
        assert A.minus(B).join(A.meet(B)) == A
    else:
        # set difference stays among maximal ideals, so rejoining loses
        # the generic point exactly when B misses it
        rejoined = A.minus(B).join(A.meet(B))
        assert rejoined == (A if B.is_whole else ZSubset.cofinite([]))
    # membership is consistent with the predicates
    for p in (2, 3, 5, 7, 11, 13):
        assert A.meet(B).contains(p) == (A.contains(p) and B.contains(p))
        assert A.join(B).contains(p) == (A.contains(p) or B.contains(p))
        assert A.minus(B).contains(p) == (A.contains(p) and not B.contains(p))


@given(zsubsets, zsubsets)
@settings(max_examples=200, deadline=None)
def test_zsubset_inclusion_via_membership(A, B):
    witnessable = [2, 3, 5, 7, 11, 13, 17]
    if A.issubset(B):
        assert all(B.contains(p) for p in witnessable if A.contains(p))
        assert not (A.contains_generic and not B.contains_generic)


def test_json_round_trips():
    assert spectrum_from_json(CHAIN3.to_json()) == CHAIN3
    assert spectrum_from_json(SPEC_Z.to_json()) == SPEC_Z
    for s in (ZSubset.whole(), ZSubset.finite([2, 5]), ZSubset.cofinite([3])):
        assert subset_from_json(s.to_json(), SPEC_Z) == s
    U = PosetSubset(CHAIN3, frozenset("bc"))
    assert subset_from_json(U.to_json(), CHAIN3) == U


def test_up_set_invariant_rejected():
    with pytest.raises(ValueError):
        PosetSubset(CHAIN3, frozenset("a"))  # not closed upward
