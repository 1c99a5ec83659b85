import pytest

from tstruct.cech import (
    LocFreeComplex,
    NotStabilizedError,
    OracleScopeError,
    cech_model,
    check_object,
    cone_of_augmentation,
    divisible_rank_detection,
    formal_object_model,
    observables,
    observables_stabilized,
    predicted_observables,
    rq_model_complex,
    tensor,
    validate_rgamma,
    validate_rq,
    validate_tau_filtration,
    validate_tau_single,
)
from tstruct.derived import FormalObject, from_free_complex, rgamma
from tstruct.elementary import ElementaryModule as EM
from tstruct.filtration import canonical_filtration, constant_filtration, from_values
from tstruct.spectrum import SPEC_Z, ZSubset
from tstruct.zmodules import FreeComplex

W = ZSubset.whole()
E = ZSubset.empty()


def zf(*ps):
    return ZSubset.finite(ps)


def test_model_shapes():
    C = cech_model(zf(2, 3))
    assert [len(C.labels_at(d)) for d in C.degrees()] == [1, 1]
    assert C.labels_at(1) == (frozenset({2, 3}),)
    assert cech_model(W).labels_at(0) == (frozenset(),)
    assert cech_model(E).is_zero
    Q = rq_model_complex(zf(2))
    # terms Z in degree -1 and Z[1/2] (+) Z in degree 0, exact model of Z[1/2]
    assert [len(Q.labels_at(d)) for d in Q.degrees()] == [1, 2]
    assert rq_model_complex(W).is_zero
    assert rq_model_complex(E).labels_at(0) == (frozenset(),)


def test_label_discipline():
    with pytest.raises(ValueError):
        # a map out of a more inverted summand into a less inverted one
        LocFreeComplex(0, ((frozenset({2}),), (frozenset(),)), (((1,),),))
    with pytest.raises(ValueError):
        LocFreeComplex(0, ((frozenset(),), (frozenset(),), (frozenset(),)),
                       (((1,),), ((1,),)))  # d o d != 0


def test_observables_divisible_signature():
    # derived 2-torsion of the ring: length grows as t with corank 1
    W2 = tensor(LocFreeComplex.unit(), cech_model(zf(2)))
    rep = observables(W2, (2,), 6)
    for t in range(1, 7):
        assert rep.row(2, 0)[t - 1] == (t,)
    assert rep.rank_at(0) == 0 and rep.rank_at(1) == 0
    assert rep.growth_corank(2, 0) == 1
    assert rep.divisible_signals() == ((2, 0),)
    # engine's answer (a Pruefer sum in degree 1) predicts the same table
    claimed = rgamma(zf(2), FormalObject.free_stalk(1, 0))
    assert check_object(claimed, W2, (2,), 6).ok


def test_observables_stabilizing_torsion():
    X = FreeComplex.cyclic_resolution(4, 0)
    W4 = tensor(LocFreeComplex.from_free_complex(X), cech_model(zf(2)))
    rep = observables(W4, (2,), 6)
    # degree 0 carries Z/4 (exponent capped at 2), degree 1 nothing
    assert rep.row(2, 0)[5] == (2,)
    assert rep.row(2, 1)[5] == ()
    assert rep.finite_part(2, 0) == (2,)
    assert rep.growth_corank(2, 0) == 0
    assert rep.divisible_signals() == ()


def test_whole_level_is_identity():
    X = FreeComplex.koszul([4, 6])
    WX = tensor(LocFreeComplex.from_free_complex(X), cech_model(W))
    assert check_object(from_free_complex(X), WX, (2, 3), 8).ok


def test_rgamma_rq_validation_fixtures():
    assert validate_rgamma(zf(2), FreeComplex.stalk_free(1, 0)).ok
    assert validate_rgamma(zf(2), FreeComplex.cyclic_resolution(4, 0)).ok
    assert validate_rgamma(zf(2, 3), FreeComplex.koszul([6])).ok
    assert validate_rq(zf(2), FreeComplex.stalk_free(1, 0)).ok
    assert validate_rq(zf(2, 5), FreeComplex.koszul([4, 6])).ok
    assert validate_rgamma(W, FreeComplex.koszul([4, 6])).ok
    assert validate_rgamma(E, FreeComplex.koszul([4, 6])).ok
    assert validate_rq(E, FreeComplex.koszul([4, 6])).ok


def test_validation_catches_wrong_claims():
    # the honest model of Z[1/2] does not match the split claim Z (+) Pruefer
    wrong = FormalObject.free_stalk(1, 0) + FormalObject.stalk(
        EM.prufer_sum(zf(2), 1), 1
    )
    model = formal_object_model(
        FormalObject.stalk(EM.localized_free(zf(2), 1), 0)
    )
    assert not check_object(wrong, model, (2,), 8).ok
    # and the right claim does
    right = FormalObject.stalk(EM.localized_free(zf(2), 1), 0)
    assert check_object(right, model, (2,), 8).ok


def test_tau_validation_fixtures():
    X = FormalObject.free_stalk(1, 0)
    assert validate_tau_single(1, zf(2), X).ok
    assert validate_tau_single(0, zf(2), X).ok
    assert validate_tau_single(-1, zf(2), X).ok
    repeated_level = from_values(SPEC_Z, {0: zf(2), 1: zf(2)}, zf(2), E)
    assert validate_tau_filtration(repeated_level, X).ok
    assert validate_tau_filtration(canonical_filtration(SPEC_Z), X).ok
    assert validate_tau_filtration(constant_filtration(SPEC_Z, zf(3)), X).ok
    mixed = FormalObject(
        (
            (-1, EM.free(2)),
            (0, EM.free(1) + EM.cyclic_torsion(2, 2)),
            (1, EM.cyclic_torsion(3, 1, 2)),
        )
    )
    for i in (-2, -1, 0, 1, 2):
        assert validate_tau_single(i, zf(2, 3), mixed).ok


def test_scope_errors():
    with pytest.raises(OracleScopeError):
        cech_model(ZSubset.cofinite([2]))
    with pytest.raises(OracleScopeError):
        formal_object_model(
            FormalObject.stalk(EM.prufer_sum(ZSubset.cofinite([]), 1), 0)
        )


def test_stabilization_cap():
    # an exponent at the cap boundary triggers doubling until resolved
    boundary = FormalObject.stalk(EM.cyclic_torsion(2, 11), 0)
    rep = observables_stabilized(formal_object_model(boundary), (2,), 12)
    assert rep.tcap >= 24 and rep.finite_part(2, 0) == (11,)
    assert rep.growth_corank(2, 0) == 0
    # an object unstable at every doubling stage is reported, not guessed
    stuck = FormalObject.stalk(
        EM.cyclic_torsion(2, 11)
        + EM.cyclic_torsion(2, 23)
        + EM.cyclic_torsion(2, 47),
        0,
    )
    with pytest.raises(NotStabilizedError):
        observables_stabilized(formal_object_model(stuck), (2,), 12)


def test_divisible_rank_detection():
    assert divisible_rank_detection(
        FormalObject.stalk(EM.prufer_sum(zf(2), 1), 1)
    ) == ((2, 0),)
    assert divisible_rank_detection(
        FormalObject.stalk(EM.localized_free(zf(3), 1), 0), primes=(3,)
    ) == ((3, 0),)
    fg = FormalObject.free_stalk(2, 0) + FormalObject.cyclic_stalk(8, 1)
    assert divisible_rank_detection(fg, primes=(2, 3)) == ()


def test_predicted_observables_consistency():
    # prediction and observation coincide on an honest model of any object
    F = FormalObject(
        (
            (0, EM.free(1) + EM.cyclic_torsion(2, 3)),
            (1, EM.prufer_sum(zf(2, 5), 2) + EM.localized_free(zf(3), 1)),
        )
    )
    model = formal_object_model(F)
    got = observables(model, (2, 3, 5), 10, -1, 2)
    want = predicted_observables(F, (2, 3, 5), 10, -1, 2)
    assert got == want


def test_cone_of_augmentation_requires_unit():
    with pytest.raises(ValueError):
        cone_of_augmentation(LocFreeComplex(0, ((frozenset({2}),),), ()))
