import dataclasses

import pytest

from wfilt.checks import gysin_acyclic, mayer_vietoris
from wfilt.complexes import ComplexError
from wfilt.descent import (
    GeneralWeightDatum,
    GysinAugmentation,
    blowup_synthesize,
    e2_compare,
    filtration_bounds,
    gysin_descent_acyclic,
    mayer_vietoris_check,
    singularity_ss,
    weight_compact,
    weight_general,
    weight_smooth,
)
from wfilt.golden import BUILDERS
from wfilt.gysin import GysinDatum, GysinMorphismDatum, compose, gysin_complex, gysin_map, identity_morphism
from wfilt.linalg import GF, QQ, ZZ, Matrix


def _doc(name):
    return BUILDERS[name]()


def _ranks(result, degrees):
    return {n: result.graded_ranks(n) for n in degrees}


# golden values, computed by hand from the geometry of each example

@pytest.mark.parametrize("name", ["nodal_punctured_torus", "nodal_punctured_torus_zz"])
def test_nodal_torus_singularity_filtration(name):
    res = singularity_ss(_doc(name).payload)
    assert _ranks(res, [0, 1]) == {0: {0: 1}, 1: {0: 1, 1: 3}}


def test_singularity_e2_is_resolution_independent():
    a = singularity_ss(_doc("nodal_punctured_torus").payload)
    b = singularity_ss(_doc("nodal_punctured_torus_blown_up").payload)
    assert e2_compare(a, b).equal


@pytest.mark.parametrize("name,expected", [
    ("nodal_sphere", {1: {0: 1}, 2: {2: 1}}),
    ("two_sphere_cycle", {1: {0: 1}, 2: {2: 2}}),
])
def test_compact_nodal_spaces(name, expected):
    R = _doc(name).payload
    s, w = singularity_ss(R), weight_compact(R)
    assert _ranks(s, [1, 2]) == expected
    assert e2_compare(s, w).equal


def test_node_times_cstar():
    s = singularity_ss(_doc("node_times_cstar_singularity").payload)
    assert _ranks(s, [1, 2]) == {1: {0: 1, 1: 1}, 2: {1: 1, 2: 1}}
    w = weight_general(_doc("node_times_cstar_weight").payload)
    assert _ranks(w, [1, 2, 3]) == {1: {0: 1, 2: 1}, 2: {2: 2}, 3: {4: 1}}
    assert w.warnings


@pytest.mark.parametrize("name", ["cstar_cstar_p1xp1", "cstar_cstar_bundle"])
def test_cstar_cstar_weights(name):
    res = weight_smooth(_doc(name).payload)
    got = _ranks(res, [0, 1, 2])
    expected = {
        "cstar_cstar_p1xp1": {0: {0: 1}, 1: {2: 2}, 2: {4: 1}},
        "cstar_cstar_bundle": {0: {0: 1}, 1: {1: 2}, 2: {2: 1}},
    }[name]
    assert got == expected
    assert filtration_bounds(res) == []


@pytest.mark.parametrize("name,weight", [("real_punctured_plane", 2), ("real_cylinder", 1)])
def test_real_mode(name, weight):
    res = weight_smooth(_doc(name).payload)
    assert res.graded_ranks(1) == {weight: 1}


def test_real_mode_requires_f2():
    with pytest.raises(ComplexError, match="Z/2"):
        GysinDatum(QQ, 0, {0: {0: 1}}, {}, mode="real")
    with pytest.raises(ComplexError, match="Z/2"):
        GysinDatum(GF(3), 0, {0: {0: 1}}, {}, mode="real")


def test_gysin_datum_validation():
    with pytest.raises(ComplexError, match="empty set"):
        GysinDatum(QQ, 1, {1: {0: 1}}, {})
    with pytest.raises(ComplexError, match="downward closed"):
        GysinDatum(QQ, 2, {0: {0: 1}, 3: {0: 1}}, {})
    with pytest.raises(ComplexError, match="shape"):
        GysinDatum(QQ, 1, {0: {0: 1, 2: 1}, 1: {0: 1}}, {(0, 1): {0: Matrix.identity(QQ, 2)}})


# functoriality: z -> z^a on a projective line with boundary {0}

def _line():
    return GysinDatum(ZZ, 1, {0: {0: 1, 2: 1}, 1: {0: 1}}, {(0, 1): {0: Matrix.identity(ZZ, 1)}})


def _power(G, a):
    one = Matrix.identity(ZZ, 1)
    return GysinMorphismDatum(G, G, Matrix.from_rows(ZZ, [[a]], 1),
                              {(0, 0): {0: one, 2: one.scale(a)}, (1, 1): {0: one}})


def test_gysin_maps_compose():
    G = _line()
    f, g = _power(G, 2), _power(G, 3)
    fg = compose(f, g)
    assert fg.multiplicity == Matrix.from_rows(ZZ, [[6]], 1)
    for q in G.row_range():
        lhs = gysin_map(fg, q)
        rhs = gysin_map(g, q)
        rhs_f = gysin_map(f, q)
        for p in lhs.source.degrees():
            assert lhs.f(p) == rhs.f(p) @ rhs_f.f(p)


def test_identity_morphism_is_identity():
    G = _doc("cstar_cstar_p1xp1").payload
    I = identity_morphism(G)
    for q in G.row_range():
        K = gysin_complex(G, q)
        m = gysin_map(I, q)
        for p in K.degrees():
            assert m.f(p) == Matrix.identity(G.ring, K.dim(p))


def test_morphism_must_be_chain_map():
    # pulling back the point class with the wrong degree breaks the row differential
    G = _line()
    one = Matrix.identity(ZZ, 1)
    with pytest.raises(ComplexError, match="chain-map"):
        GysinMorphismDatum(G, G, Matrix.from_rows(ZZ, [[2]], 1),
                           {(0, 0): {0: one, 2: one.scale(3)}, (1, 1): {0: one}})


def test_multiplicities_must_be_nonnegative_integers():
    G = _line()
    with pytest.raises(ComplexError, match="nonnegative"):
        GysinMorphismDatum(G, G, Matrix.from_rows(ZZ, [[-1]], 1), {})


# Mayer-Vietoris on synthesized blow-up squares

@pytest.mark.parametrize("HX,m", [
    ({0: 1, 2: 1}, 1),
    ({0: 1, 2: 1, 4: 1}, 2),
    ({0: 1, 2: 2, 4: 1}, 2),
    ({0: 1, 2: 1, 4: 1, 6: 1}, 3),
    ({0: 1, 2: 1, 4: 1, 6: 1}, 2),
])
@pytest.mark.parametrize("ring", [QQ, ZZ], ids=["Q", "Z"])
def test_blowup_squares_are_exact(HX, m, ring):
    S = blowup_synthesize(HX, {0: 1}, m, ring=ring)
    assert mayer_vietoris(S) == []
    assert S.HXt.get(2, 0) == HX.get(2, 0) + (1 if m > 1 else 0)


def test_corrupted_square_is_detected():
    S = _doc("blowup_p2_point").payload
    # drop the degree-2 pullback to the blow-up and the matching restriction, keeping commutativity
    zero_f = Matrix.zero(S.ring, S.HXt[2], S.HX[2])
    zero_j = Matrix.zero(S.ring, S.HYt.get(2, 0), S.HXt[2])
    bad = dataclasses.replace(S, f={**S.f, 2: zero_f}, j={**S.j, 2: zero_j})
    assert not mayer_vietoris_check(bad)[2].exact
    assert mayer_vietoris(bad)


def test_square_must_commute():
    S = _doc("blowup_p2_point").payload
    zero_f = Matrix.zero(S.ring, S.HXt[0], S.HX[0])
    with pytest.raises(ComplexError, match="commute"):
        dataclasses.replace(S, f={**S.f, 0: zero_f})


# descent of Gysin data

@pytest.mark.parametrize("name", ["blowup_interior_square", "blowup_boundary_square"])
def test_gysin_squares_are_acyclic(name):
    doc = _doc(name)
    assert all(gysin_descent_acyclic(doc.payload, doc.extra).values())
    assert gysin_acyclic(doc.payload, doc.extra) == []


def test_blowup_alone_is_not_acyclic():
    doc = _doc("blowup_interior_square")
    D, aug = doc.payload, doc.extra
    lone = GeneralWeightDatum(D.ring, 0, {1: D.at[1]}, {})
    verdicts = gysin_descent_acyclic(lone, GysinAugmentation(aug.base, {1: aug.maps[1]}))
    assert not all(verdicts.values())
    assert [q for q, ok in verdicts.items() if not ok] == [2]


def test_e2_compare_reports_differences():
    a = singularity_ss(_doc("nodal_sphere").payload)
    b = singularity_ss(_doc("two_sphere_cycle").payload)
    cmp = e2_compare(a, b)
    assert not cmp and any("H^2" in d for d in cmp.differences)


def test_filtration_bounds_flag_out_of_range_weights():
    res = weight_smooth(_doc("cstar_cstar_p1xp1").payload)
    assert filtration_bounds(res) == []
    assert filtration_bounds(dataclasses.replace(res, rule="L"))


def test_p1xp1_top_row_ranks():
    from oracles import rank_q

    G = _doc("cstar_cstar_p1xp1").payload
    row = gysin_complex(G, 4)
    assert {p: row.dim(p) for p in row.degrees()} == {-2: 4, -1: 4, 0: 1}
    assert [rank_q([list(r) for r in row.d(p).data]) for p in (-2, -1)] == [3, 1]
    row2 = gysin_complex(G, 2)
    assert {p: row2.dim(p) for p in row2.degrees() if row2.dim(p)} == {-1: 4, 0: 2}
