import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import betti_q
from wfilt.complexes import (
    ChainMap,
    CochainComplex,
    ComplexError,
    cohomology,
    cone,
    direct_sum,
    formal_complex,
    induced_on_cohomology,
    is_quasi_iso,
    shift,
)
from wfilt.linalg import GF, QQ, ZZ, Matrix, ModulePresentation
from wfilt.randomized import random_filtered_complex
from wfilt.spaces import (
    CellMap,
    DeltaModel,
    circle,
    cochains,
    collapse,
    disjoint_union,
    identify_vertices,
    induced,
    point,
    points,
    sphere2,
    torus,
    vertex_inclusion,
    wedge_circles,
)

KLEIN = DeltaModel((1, 3, 2), ([(0, 0)] * 3, [(1, 2, 0), (2, 1, 0)]))


def ranks(K, ring=None):
    return {n: cohomology(K, n) for n in K.degrees()}


def free(*rs):
    return [ModulePresentation(r) for r in rs]


@pytest.mark.parametrize(
    "model, expected",
    [
        (point(), [1]),
        (circle(), [1, 1]),
        (wedge_circles(3), [1, 3]),
        (sphere2(), [1, 0, 1]),
        (torus(), [1, 2, 1]),
        (disjoint_union(sphere2(), circle()), [2, 1, 1]),
        (identify_vertices(sphere2(), 0, 1), [1, 1, 1]),
    ],
)
def test_betti_numbers_of_models(model, expected):
    K = cochains(model, ZZ)
    assert [cohomology(K, n) for n in range(len(expected))] == free(*expected)
    dims = {n: K.dim(n) for n in K.degrees()}
    diffs = {n: [list(r) for r in K.d(n).data] for n in K.degrees()}
    assert list(betti_q(dims, diffs).values()) == expected


def test_torsion_of_klein_bottle():
    K = cochains(KLEIN, ZZ)
    assert cohomology(K, 1) == ModulePresentation(1)
    assert cohomology(K, 2) == ModulePresentation(0, (2,))
    K2 = cochains(KLEIN, GF(2))
    assert [cohomology(K2, n).free_rank for n in range(3)] == [1, 2, 1]


def test_euler_characteristic():
    for model, chi in ((sphere2(), 2), (torus(), 0), (KLEIN, 0), (wedge_circles(4), -3)):
        assert cochains(model, QQ).euler_characteristic() == chi


def test_face_identities_are_enforced():
    with pytest.raises(ComplexError):
        DeltaModel((2, 1, 1), ([(1, 0)], [(0, 0, 0)]))
    with pytest.raises(ComplexError):
        DeltaModel((1, 1), ([(0, 1)],))


def test_cell_maps_and_pullbacks():
    S = sphere2()
    f = collapse(S)
    F = induced(f, ZZ)
    assert induced_on_cohomology(F, 0) == Matrix.identity(ZZ, 1)
    inc = vertex_inclusion(points(2), S, [0, 2])
    G = induced(inc, QQ)
    assert G.f(0).shape == (2, 3)
    # a loop may collapse onto its vertex
    assert CellMap(circle(), points(2), [(0,), (None,)]).cells == ((0,), (None,))
    with pytest.raises(ComplexError):
        vertex_inclusion(points(2), circle(), [0, 1])
    with pytest.raises(ComplexError):
        # an edge joining two different vertices cannot collapse
        CellMap(DeltaModel((2, 1), ([(1, 0)],)), points(2), [(0, 1), (None,)])


def test_d_squared_must_vanish():
    d = Matrix.from_rows(ZZ, [[1]], 1)
    with pytest.raises(ComplexError):
        CochainComplex(ZZ, 0, (1, 1, 1), (d, d))


def test_shift_and_cone_conventions():
    K = cochains(torus(), ZZ)
    S = shift(K, 1)
    assert S.n0 == -1 and cohomology(S, 0) == cohomology(K, 1)
    C = cone(K.identity())
    assert C.is_acyclic()
    zero = ChainMap(K, K, {})
    Cz = cone(zero)
    assert cohomology(Cz, 0) == cohomology(K, 0) + cohomology(K, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from(["Z", "Q"]))
def test_cone_of_identity_is_acyclic(seed, ring_name):
    ring = ZZ if ring_name == "Z" else QQ
    K = random_filtered_complex(ring, random.Random(seed), degrees=4, max_rank=3).carrier
    assert cone(K.identity()).is_acyclic()
    assert is_quasi_iso(K.identity())
    if any(cohomology(K, n).ngens for n in K.degrees()):
        assert not is_quasi_iso(ChainMap(K, K, {}))


def test_direct_sum_and_formal():
    F = formal_complex(QQ, {0: 1, 2: 3})
    D = direct_sum([F, cochains(circle(), QQ)])
    assert [cohomology(D, n).free_rank for n in range(3)] == [2, 1, 3]
