import pytest

from tstruct.derived import (
    FormalObject,
    from_free_complex,
    gamma_and_r1,
    in_aisle,
    in_coaisle,
    orthogonality_check,
    generator_reduction_crosscheck,
    q_localize,
    rgamma,
    rq,
    tau_filtration,
    tau_single,
    cousin_failure_witness,
)
from tstruct.elementary import ElementaryModule as EM
from tstruct.filtration import (
    canonical_filtration,
    constant_filtration,
    from_values,
    localize,
    step_filtration,
)
from tstruct.spectrum import SPEC_Z, ZSubset
from tstruct.zmodules import FreeComplex

W = ZSubset.whole()
E = ZSubset.empty()


def zf(*ps):
    return ZSubset.finite(ps)


def obj(**kw):
    return FormalObject(tuple((d, e) for d, e in kw.items()))


Z_STALK = FormalObject.free_stalk(1, 0)
REPEATED_LEVEL = from_values(SPEC_Z, {0: zf(2), 1: zf(2)}, zf(2), E)
CANONICAL = canonical_filtration(SPEC_Z)


def test_from_free_complex():
    assert str(from_free_complex(FreeComplex.koszul([2]))) == "{0: Z/2}"
    assert from_free_complex(FreeComplex.stalk_free(1, 0)) == Z_STALK
    acyclic = FreeComplex(0, (1, 1), (((1,),),))
    assert from_free_complex(acyclic).is_zero


def test_gamma_rules():
    g, r1 = gamma_and_r1(zf(2), EM.free(1))
    assert g.is_zero and r1 == EM.prufer_sum(zf(2), 1)
    g, r1 = gamma_and_r1(zf(2), EM.cyclic_torsion(2, 2))
    assert g == EM.cyclic_torsion(2, 2) and r1.is_zero
    any_mod = EM.free(2) + EM.cyclic_torsion(3, 1)
    assert gamma_and_r1(W, any_mod) == (any_mod, EM.zero())
    g, r1 = gamma_and_r1(zf(2), EM.localized_free(zf(3), 1))
    assert g.is_zero and r1 == EM.prufer_sum(zf(2), 1)
    g, r1 = gamma_and_r1(zf(2), EM.localized_free(zf(2), 1))
    assert g.is_zero and r1.is_zero
    g, r1 = gamma_and_r1(zf(2, 3), EM.prufer_sum(zf(3, 5), 1))
    assert g == EM.prufer_sum(zf(3), 1) and r1.is_zero


def test_rgamma_rq_fixtures():
    assert str(rgamma(zf(2), Z_STALK)) == "{1: Z(2^oo)}"
    assert str(rgamma(zf(2, 3), FormalObject.cyclic_stalk(6, 0))) == "{0: Z/2 + Z/3}"
    assert rgamma(E, Z_STALK).is_zero
    assert str(rq(zf(2), Z_STALK)) == "{0: Z[1/2]}"
    assert rq(zf(2), FormalObject.cyclic_stalk(2, 0)).is_zero
    assert rq(E, Z_STALK) == Z_STALK
    assert rq(W, Z_STALK).is_zero
    # localization rules on atoms
    assert q_localize(zf(2), EM.localized_free(zf(3), 1)) == EM.localized_free(zf(2, 3), 1)
    assert q_localize(zf(2), EM.prufer_sum(zf(2, 3), 1)) == EM.prufer_sum(zf(3), 1)


def test_tau_single_fixtures():
    lo, up = tau_single(0, zf(2), Z_STALK)
    assert lo.is_zero and up == Z_STALK
    lo, up = tau_single(1, zf(2), Z_STALK)
    assert str(lo) == "{1: Z(2^oo)}" and str(up) == "{0: Z[1/2]}"
    inside = FormalObject.cyclic_stalk(4, -1)
    lo, up = tau_single(0, zf(2), inside)
    assert lo == inside and up.is_zero


def test_tau_filtration_fixtures():
    f = from_values(SPEC_Z, {1: zf(2, 3)}, W, E)
    lo, up = tau_filtration(f, Z_STALK)
    assert lo == Z_STALK and up.is_zero
    lo, up = tau_filtration(REPEATED_LEVEL, Z_STALK)
    assert str(lo) == "{1: Z(2^oo)}" and str(up) == "{0: Z[1/2]}"
    assert not lo.is_fg and not up.is_fg
    inside = obj(**{})  # zero object
    lo, up = tau_filtration(REPEATED_LEVEL, inside)
    assert lo.is_zero and up.is_zero
    # object already in the aisle by supports
    member = FormalObject.cyclic_stalk(2, 1)
    lo, up = tau_filtration(REPEATED_LEVEL, member)
    assert lo == member and up.is_zero


def test_tau_constant_filtration():
    const = constant_filtration(SPEC_Z, zf(2))
    lo, up = tau_filtration(const, Z_STALK)
    assert str(lo) == "{1: Z(2^oo)}" and str(up) == "{0: Z[1/2]}"
    lo2, up2 = tau_filtration(const, lo)
    assert lo2 == lo and up2.is_zero


def test_membership_fixtures():
    f = from_values(SPEC_Z, {1: zf(2)}, W, E)
    assert in_aisle(f, FormalObject.cyclic_stalk(2, 1))
    assert not in_aisle(f, FormalObject.cyclic_stalk(3, 1))
    assert in_aisle(CANONICAL, Z_STALK)
    assert not in_aisle(CANONICAL, FormalObject.free_stalk(1, 1))
    assert in_coaisle(CANONICAL, FormalObject.free_stalk(1, 1))
    assert in_aisle(CANONICAL, FormalObject.zero())
    assert in_coaisle(CANONICAL, FormalObject.zero())
    # localized homology in degree 0 is not finitely supported: needs Whole
    assert not in_aisle(
        from_values(SPEC_Z, {0: ZSubset.cofinite([])}, W, E),
        FormalObject.stalk(EM.localized_free(zf(2), 1), 0),
    )


def test_truncation_contract_and_idempotence():
    for f in (REPEATED_LEVEL, CANONICAL, from_values(SPEC_Z, {0: W, 1: zf(2)}, W, E)):
        for X in (
            Z_STALK,
            obj(**{}),
            FormalObject.cyclic_stalk(12, 0) + FormalObject.free_stalk(2, -1),
        ):
            lo, up = tau_filtration(f, X)
            assert in_aisle(f, lo)
            assert in_coaisle(f, up)
            assert orthogonality_check(f, up, (-5, 5)).holds
            again_lo, again_up = tau_filtration(f, lo)
            assert again_lo == lo and again_up.is_zero
            again_lo, again_up = tau_filtration(f, up)
            assert again_lo.is_zero and again_up == up


def test_euler_characteristic_conservation():
    # degreewise rational rank is conserved when all vertices are fg
    f = from_values(SPEC_Z, {0: W, 1: zf(2), 2: zf(2)}, W, E)
    X = FormalObject.free_stalk(2, 0) + FormalObject.cyclic_stalk(4, 2)
    lo, up = tau_filtration(f, X)
    assert lo.is_fg and up.is_fg
    for d in range(-3, 5):
        total = lo.component(d).rational_rank + up.component(d).rational_rank
        assert total == X.component(d).rational_rank


def test_orthogonality_fixtures():
    f = from_values(SPEC_Z, {1: zf(2)}, zf(2), E)
    half = FormalObject.stalk(EM.localized_free(zf(2), 1), 0)
    assert orthogonality_check(f, half, (-3, 3)).holds
    rep = orthogonality_check(CANONICAL, Z_STALK, (-3, 3))
    assert not rep.holds
    assert ("0", 0, 0, "Z") in rep.witnesses
    assert orthogonality_check(CANONICAL, FormalObject.zero(), (-3, 3)).holds


def test_shift_equivariance():
    X = FormalObject.cyclic_stalk(8, 0) + FormalObject.free_stalk(1, 1)
    res = tau_filtration(REPEATED_LEVEL, X)
    for s in (-2, 1, 3):
        shifted = tau_filtration(REPEATED_LEVEL.shift(-s), X.shift(s))
        assert shifted.lower == res.lower.shift(s)
        assert shifted.upper == res.upper.shift(s)


def test_generator_reduction_fixtures():
    half = FormalObject.stalk(EM.localized_free(zf(2), 1), 0)
    rep = generator_reduction_crosscheck(FreeComplex.koszul([2]), half, (-3, 3))
    assert rep.agree and rep.via_hom_complex and rep.via_stalk_generators
    rep = generator_reduction_crosscheck(FreeComplex.stalk_free(1, 0), Z_STALK, (-3, 3))
    assert rep.agree and not rep.via_hom_complex
    acyclic = FreeComplex(0, (1, 1), (((1,),),))
    rep = generator_reduction_crosscheck(acyclic, Z_STALK, (-3, 3))
    assert rep.agree and rep.via_hom_complex


def test_cousin_failure_witness_fixtures():
    rep = cousin_failure_witness(0, 2, 1, REPEATED_LEVEL)
    assert rep.holds
    assert str(rep.lower) == "{1: Z(2^oo)}"
    assert str(rep.upper) == "{0: Z[1/2]}"
    assert rep.offending
    # one degree lower with (3): everything shifts by one
    f3 = from_values(SPEC_Z, {-1: zf(3), 0: zf(3)}, zf(3), E)
    rep3 = cousin_failure_witness(0, 3, 0, f3)
    assert rep3.holds
    assert str(rep3.lower) == "{0: Z(3^oo)}"
    assert str(rep3.upper) == "{-1: Z[1/3]}"
    with pytest.raises(ValueError):
        cousin_failure_witness(0, 3, 1, REPEATED_LEVEL)  # (3) not in level 1
    with pytest.raises(ValueError):
        cousin_failure_witness(0, 2, 0, canonical_filtration(SPEC_Z))  # generic in level -1


def test_localization_membership_is_pointwise():
    f = from_values(SPEC_Z, {0: W, 1: zf(2)}, W, E)
    X = FormalObject.cyclic_stalk(2, 1)
    assert in_aisle(f, X)
    loc = localize(f, 2)
    assert loc.value(1).points == frozenset({"(2)"})
    # the support of X localized at (3) is empty, so membership holds there
    loc3 = localize(f, 3)
    assert loc3.value(1).is_empty


def test_radical_invariance_of_generators():
    # generators for an ideal and for its radical see the same objects
    from tstruct.zmodules import FgZModule, hom_ext_tables

    targets = [
        FormalObject.stalk(EM.localized_free(zf(2), 1), 0),
        FormalObject.cyclic_stalk(3, 0),
        FormalObject.free_stalk(1, 0),
        FormalObject.stalk(EM.prufer_sum(zf(2), 1), 1),
    ]
    for m, rad in ((4, 2), (8, 2), (12, 6), (18, 6)):
        for Y in targets:
            for i in range(-3, 4):
                verdicts = []
                for gen in (m, rad):
                    G = EM.from_fg(FgZModule.cyclic(gen))
                    ok = True
                    for b, comp in Y.graded:
                        hom, ext = hom_ext_tables(G, comp)
                        for mm, group in ((b - i, hom), (b - i + 1, ext)):
                            if mm <= 0 and not group.is_zero:
                                ok = False
                    verdicts.append(ok)
                assert verdicts[0] == verdicts[1], (m, rad, str(Y), i)


def test_indeterminate_objects_are_rejected():
    from tstruct.derived import ExtensionCertificate, IndeterminateObjectError, rgamma

    cert = ExtensionCertificate(0, EM.free(1), EM.prufer_sum(zf(2), 1))
    stuck = FormalObject(((0, EM.free(1)),), (cert,))
    assert not stuck.is_determinate
    with pytest.raises(IndeterminateObjectError):
        rgamma(zf(2), stuck)
    with pytest.raises(IndeterminateObjectError):
        tau_filtration(CANONICAL, stuck)
    resolved = FormalObject(
        ((0, EM.free(1)),),
        (ExtensionCertificate(0, EM.free(1), EM.prufer_sum(zf(2), 1),
                              EM.localized_free(zf(2), 1)),),
    )
    assert resolved.is_determinate


def test_large_primes_stay_exact():
    # the spectrum admits any 64-bit prime; arithmetic must stay exact
    from tstruct.cech import validate_rgamma, validate_rq, validate_tau_filtration
    from tstruct.duality import cm_membership, codim_from_dualizing
    from tstruct.zmodules import FreeComplex

    big = 2**61 - 1
    assert codim_from_dualizing(big) == 1
    f = from_values(SPEC_Z, {0: zf(big), 1: zf(big)}, zf(big), E)
    rep = cousin_failure_witness(0, big, 1, f)
    assert rep.holds
    assert str(rep.upper) == "{0: Z[1/%d]}" % big
    X = FreeComplex.cyclic_resolution(big, 0)
    assert validate_rgamma(zf(big), X, primes=(big,)).ok
    assert validate_rq(zf(big), X, primes=(big,)).ok
    assert validate_tau_filtration(f, FormalObject.free_stalk(1, 0), primes=(big,)).ok
    assert cm_membership(FormalObject.cyclic_stalk(big, 0))
