"""Builders for the shipped example documents.

``python -m wfilt.golden DIR`` regenerates every document; the test suite
checks that the files on disk are byte-identical to a fresh build.
"""
from __future__ import annotations

import random
import sys
from pathlib import Path

from .complexes import ChainMap, CochainComplex, formal_complex
from .cubical import AugmentedDiagram, CubicalDiagram
from .descent import GeneralWeightDatum, GysinAugmentation, ResolutionDatum, blowup_synthesize
from .filtered import FilteredComplex, canonical_filtration
from .gysin import GysinDatum, GysinMorphismDatum
from .linalg import GF, QQ, ZZ, Matrix, Ring
from .randomized import random_diagram
from .serialize import Document, dumps
from .spaces import (
    CellMap,
    DeltaModel,
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
)

__all__ = ["build_all", "write_all"]


def _m(ring: Ring, rows, ncols: int | None = None) -> Matrix:
    if not rows:
        return Matrix.zero(ring, 0, ncols or 0)
    return Matrix.from_rows(ring, rows, ncols)


def _col(ring: Ring, *xs) -> Matrix:
    return _m(ring, [[x] for x in xs], 1)


def _glue(M: DeltaModel, pairs: list[tuple[int, int]]) -> tuple[DeltaModel, CellMap]:
    """Quotient of ``M`` gluing vertex ``w`` onto ``v`` for each pair, with the quotient map."""
    where = list(range(M.counts[0]))
    Q = M
    for v, w in pairs:
        v, w = where[v], where[w]
        Q = identify_vertices(Q, v, w)
        where = [v if x == w else x - (x > w) for x in where]
    cells = [tuple(where)] + [tuple(range(c)) for c in M.counts[1:]]
    return Q, CellMap(M, Q, cells)


def _resolution(ring, models: dict, cell_maps: dict, base=None, base_maps=None) -> ResolutionDatum:
    """Resolution cube from vertex models and cell maps ``{(a, b): model_b -> model_a}``."""
    at = {a: cochains(M, ring) for a, M in models.items()}
    cof = {k: induced(f, ring) for k, f in cell_maps.items()}
    D = CubicalDiagram(ring, 1, at, cof)
    if base is None:
        return ResolutionDatum(diagram=D)
    aug = {i: induced(f, ring) for i, f in base_maps.items()}
    return ResolutionDatum.from_augmented(AugmentedDiagram(cochains(base, ring), D, aug))


def _formal_map(ring, src: CochainComplex, tgt: CochainComplex, maps: dict) -> ChainMap:
    return ChainMap(src, tgt, {k: _m(ring, rows, src.dim(k)) for k, rows in maps.items()})


# ---------------------------------------------------------------------------
# singular spaces


def nodal_punctured_torus(ring: Ring = QQ) -> Document:
    """Torus minus two points with two further points glued.

    The normalization is modelled by two vertices joined by an arc with three
    loops at the first vertex; the preimage of the node is both vertices.
    """
    Xt = DeltaModel((2, 4), ([(1, 0), (0, 0), (0, 0), (0, 0)],))
    X, quot = _glue(Xt, [(0, 1)])
    Yt, Y = points(2), point()
    R = _resolution(
        ring, {1: Xt, 2: Y, 3: Yt},
        {(1, 3): vertex_inclusion(Yt, Xt, [0, 1]), (2, 3): collapse(Yt)},
        X, {1: quot, 2: vertex_inclusion(Y, X, [0])},
    )
    return Document("resolution", ring, R, "nodal_punctured_torus",
                    "Genus-one surface with two points glued and two removed; minimal resolution.",
                    {"expected_H": {"0": 1, "1": 4}})


def nodal_punctured_torus_blown_up(ring: Ring = QQ) -> Document:
    """Second resolution: the normalization blown up at an extra point ``q``.

    Cohomology of the blow-up comes from ``blowup_synthesize``; the centre is
    added to the discriminant, so ``Y = {node, q}`` and ``Y~`` has three points.
    """
    Xt = formal_complex(ring, {0: 1, 1: 3})
    S = blowup_synthesize({0: 1, 1: 3}, {0: 1}, 1, ring=ring)
    Xb = formal_complex(ring, S.HXt)
    # restriction of the normalization to the two preimages of the node, moved along f*
    node = _m(ring, [[1], [1]], 1) @ _inverse_of_identity(S.map("f", 0))
    h0 = _m(ring, [list(r) for r in node.data] + [list(r) for r in S.map("j", 0).data], Xb.dim(0))
    Y, Yt = formal_complex(ring, {0: 2}), formal_complex(ring, {0: 3})
    cof = {
        (1, 3): ChainMap(Xb, Yt, {0: h0}),
        (2, 3): _formal_map(ring, Y, Yt, {0: [[1, 0], [1, 0], [0, 1]]}),
    }
    D = CubicalDiagram(ring, 1, {1: Xb, 2: Y, 3: Yt}, cof)
    assert Xt.dims == Xb.dims
    return Document("resolution", ring, ResolutionDatum(diagram=D), "nodal_punctured_torus_blown_up",
                    "Same space as nodal_punctured_torus, resolved after one extra point blow-up.",
                    {"expected_H": {"0": 1, "1": 4}})


def _inverse_of_identity(M: Matrix) -> Matrix:
    if M != Matrix.identity(M.ring, M.rows):
        raise ValueError("expected the identity pullback of a point blow-up on a curve")
    return M


def nodal_sphere(ring: Ring = QQ) -> Document:
    S = sphere2()
    X, quot = _glue(S, [(0, 1)])
    Yt, Y = points(2), point()
    R = _resolution(
        ring, {1: S, 2: Y, 3: Yt},
        {(1, 3): vertex_inclusion(Yt, S, [0, 1]), (2, 3): collapse(Yt)},
        X, {1: quot, 2: vertex_inclusion(Y, X, [0])},
    )
    return Document("resolution", ring, R, "nodal_sphere", "Sphere with two points glued (compact).",
                    {"expected_H": {"0": 1, "1": 1, "2": 1}})


def two_sphere_cycle(ring: Ring = QQ) -> Document:
    """Two spheres glued at two pairs of points, forming a cycle (compact)."""
    Xt = disjoint_union(sphere2(), sphere2())
    X, quot = _glue(Xt, [(0, 3), (1, 4)])
    Yt, Y = points(4), points(2)
    R = _resolution(
        ring, {1: Xt, 2: Y, 3: Yt},
        {(1, 3): vertex_inclusion(Yt, Xt, [0, 1, 3, 4]), (2, 3): vertex_inclusion(Yt, Y, [0, 1, 0, 1])},
        X, {1: quot, 2: vertex_inclusion(Y, X, [quot.cells[0][0], quot.cells[0][1]])},
    )
    return Document("resolution", ring, R, "two_sphere_cycle", "Two projective lines meeting in two points.",
                    {"expected_H": {"0": 1, "1": 1, "2": 2}})


def node_times_cstar_singularity(ring: Ring = QQ) -> Document:
    """Resolution of node x C* by formal cohomology models.

    Normalization P1 x C* ~ S2 x S1, discriminant node x C* ~ S1, its preimage
    two circles; restrictions are the identity on every copy of H^0 and H^1.
    """
    Xt = formal_complex(ring, {0: 1, 1: 1, 2: 1, 3: 1})
    Y = formal_complex(ring, {0: 1, 1: 1})
    Yt = formal_complex(ring, {0: 2, 1: 2})
    cof = {
        (1, 3): _formal_map(ring, Xt, Yt, {0: [[1], [1]], 1: [[1], [1]]}),
        (2, 3): _formal_map(ring, Y, Yt, {0: [[1], [1]], 1: [[1], [1]]}),
    }
    D = CubicalDiagram(ring, 1, {1: Xt, 2: Y, 3: Yt}, cof)
    return Document("resolution", ring, ResolutionDatum(diagram=D), "node_times_cstar_singularity",
                    "Rational node times C*: singularity filtration from formal models.",
                    {"expected_H": {"0": 1, "1": 2, "2": 2, "3": 1}})


def node_times_cstar_weight(ring: Ring = QQ) -> Document:
    """Cube of compactifications: P1 x P1 (two horizontal lines), P1 (two points), two copies of P1."""
    one = {0: Matrix.identity(ring, 1)}
    Xt = GysinDatum(ring, 2, {0: {0: 1, 2: 2, 4: 1}, 1: {0: 1, 2: 1}, 2: {0: 1, 2: 1}},
                    {(0, 1): {0: _col(ring, 1, 0), 2: _col(ring, 1)},
                     (0, 2): {0: _col(ring, 1, 0), 2: _col(ring, 1)}})
    Y = GysinDatum(ring, 2, {0: {0: 1, 2: 1}, 1: {0: 1}, 2: {0: 1}},
                   {(0, 1): {0: _col(ring, 1)}, (0, 2): {0: _col(ring, 1)}})
    Yt = GysinDatum(ring, 4, {0: {0: 2, 2: 2}, 1: {0: 1}, 2: {0: 1}, 4: {0: 1}, 8: {0: 1}},
                    {(0, 1): {0: _col(ring, 1, 0)}, (0, 2): {0: _col(ring, 1, 0)},
                     (0, 4): {0: _col(ring, 0, 1)}, (0, 8): {0: _col(ring, 0, 1)}})
    mult = _m(ZZ, [[1, 0, 1, 0], [0, 1, 0, 1]], 4)
    to_pair = {(1, 1): one, (1, 4): one, (2, 2): one, (2, 8): one}
    e13 = GysinMorphismDatum(Yt, Xt, mult, {
        (0, 0): {0: _col(ring, 1, 1), 2: _m(ring, [[1, 0], [1, 0]], 2)}, **to_pair})
    e23 = GysinMorphismDatum(Yt, Y, mult, {
        (0, 0): {0: _col(ring, 1, 1), 2: _col(ring, 1, 1)}, **to_pair})
    D = GeneralWeightDatum(ring, 1, {1: Xt, 2: Y, 3: Yt}, {(1, 3): e13, (2, 3): e23})
    return Document("general_weight", ring, D, "node_times_cstar_weight",
                    "Rational node times C*: cube of normal-crossings compactifications.",
                    {"expected_H": {"0": 1, "1": 2, "2": 2, "3": 1}})


# ---------------------------------------------------------------------------
# smooth spaces


def cstar_cstar_p1xp1(ring: Ring = QQ) -> Document:
    """C* x C* inside P1 x P1 with the four coordinate lines as boundary."""
    a, b = _col(ring, 1, 0), _col(ring, 0, 1)
    strata = {0: {0: 1, 2: 2, 4: 1}, 1: {0: 1, 2: 1}, 2: {0: 1, 2: 1}, 4: {0: 1, 2: 1}, 8: {0: 1, 2: 1},
              5: {0: 1}, 9: {0: 1}, 6: {0: 1}, 10: {0: 1}}
    gys = {(0, 1): {0: b, 2: _col(ring, 1)}, (0, 2): {0: b, 2: _col(ring, 1)},
           (0, 4): {0: a, 2: _col(ring, 1)}, (0, 8): {0: a, 2: _col(ring, 1)}}
    for J in (5, 9, 6, 10):
        for i in range(4):
            if J >> i & 1:
                gys[(J & ~(1 << i), J)] = {0: _col(ring, 1)}
    G = GysinDatum(ring, 4, strata, gys)
    return Document("gysin", ring, G, "cstar_cstar_p1xp1", "C* x C* compactified by P1 x P1.",
                    {"mode": "complex", "expected_H": {"0": 1, "1": 2, "2": 1}})


def cstar_cstar_bundle(ring: Ring = QQ) -> Document:
    """Alternate compactification: a P1-bundle over an elliptic curve minus one section.

    Only the cohomology enters: the total space has ranks 1, 2, 2, 2, 1, the
    section is an elliptic curve whose Gysin map is injective in degree 0 and
    an isomorphism onto the top classes in degrees 1 and 2.
    """
    G = GysinDatum(ring, 1, {0: {0: 1, 1: 2, 2: 2, 3: 2, 4: 1}, 1: {0: 1, 1: 2, 2: 1}},
                   {(0, 1): {0: _col(ring, 1, 0), 1: Matrix.identity(ring, 2), 2: _col(ring, 1)}})
    return Document("gysin", ring, G, "cstar_cstar_bundle",
                    "C* x C* compactified by a P1-bundle over an elliptic curve.",
                    {"mode": "complex", "expected_H": {"0": 1, "1": 2, "2": 1}})


def real_punctured_plane() -> Document:
    """R^2 - {pt} inside the blow-up of RP^2 at the point; boundary: line at infinity and exceptional circle."""
    F2 = GF(2)
    G = GysinDatum(F2, 2, {0: {0: 1, 1: 2, 2: 1}, 1: {0: 1, 1: 1}, 2: {0: 1, 1: 1}},
                   {(0, 1): {0: _col(F2, 1, 0), 1: _col(F2, 1)}, (0, 2): {0: _col(F2, 0, 1), 1: _col(F2, 1)}},
                   mode="real")
    return Document("gysin", F2, G, "real_punctured_plane", "Punctured real plane, blown-up projective compactification.",
                    {"mode": "real", "expected_H": {"0": 1, "1": 1}})


def real_cylinder() -> Document:
    """RP1 x R inside the torus RP1 x RP1; boundary: one circle."""
    F2 = GF(2)
    G = GysinDatum(F2, 1, {0: {0: 1, 1: 2, 2: 1}, 1: {0: 1, 1: 1}},
                   {(0, 1): {0: _col(F2, 0, 1), 1: _col(F2, 1)}}, mode="real")
    return Document("gysin", F2, G, "real_cylinder", "Infinite real cylinder compactified by a torus.",
                    {"mode": "real", "expected_H": {"0": 1, "1": 1}})


# ---------------------------------------------------------------------------
# acyclic squares


def _plane_with_line(ring):
    return GysinDatum(ring, 1, {0: {0: 1, 2: 1, 4: 1}, 1: {0: 1, 2: 1}},
                      {(0, 1): {0: _col(ring, 1), 2: _col(ring, 1)}})


def blowup_interior_square(ring: Ring = QQ) -> Document:
    """P2 minus a line, blown up at an interior point; the exceptional curve misses the boundary.

    Cube vertices: 1 = blow-up, 2 = the point, 3 = exceptional line. ``H^2`` of the
    blow-up has basis (h, e) with the proper line in class h.
    """
    X = _plane_with_line(ring)
    Xt = GysinDatum(ring, 1, {0: {0: 1, 2: 2, 4: 1}, 1: {0: 1, 2: 1}},
                    {(0, 1): {0: _col(ring, 1, 0), 2: _col(ring, 1)}})
    Y = GysinDatum(ring, 0, {0: {0: 1}}, {})
    E = GysinDatum(ring, 0, {0: {0: 1, 2: 1}}, {})
    none = Matrix.zero(ZZ, 1, 0)
    e13 = GysinMorphismDatum(E, Xt, none, {(0, 0): {0: _col(ring, 1), 2: _m(ring, [[0, -1]], 2)}})
    e23 = GysinMorphismDatum(E, Y, Matrix.zero(ZZ, 0, 0), {(0, 0): {0: _col(ring, 1)}})
    D = GeneralWeightDatum(ring, 1, {1: Xt, 2: Y, 3: E}, {(1, 3): e13, (2, 3): e23})
    one = Matrix.identity(ring, 1)
    aug = GysinAugmentation(X, {
        1: GysinMorphismDatum(Xt, X, Matrix.identity(ZZ, 1), {
            (0, 0): {0: one, 2: _col(ring, 1, 0), 4: one}, (1, 1): {0: one, 2: one}}),
        2: GysinMorphismDatum(Y, X, Matrix.zero(ZZ, 1, 0), {(0, 0): {0: one}}),
    })
    return Document("general_weight", ring, D, "blowup_interior_square",
                    "Acyclic square of compactification data: blow-up of an interior point.",
                    {"expected_H": {"0": 1}}, aug)


def blowup_boundary_square(ring: Ring = QQ) -> Document:
    """P2 minus a line, blown up at a point of the line; the complement does not change.

    The blow-up carries the proper line (class h - e), the exceptional line (class e)
    and their intersection point; the pulled-back boundary is their sum.
    """
    X = _plane_with_line(ring)
    one = Matrix.identity(ring, 1)
    Xt = GysinDatum(ring, 2, {0: {0: 1, 2: 2, 4: 1}, 1: {0: 1, 2: 1}, 2: {0: 1, 2: 1}, 3: {0: 1}},
                    {(0, 1): {0: _col(ring, 1, -1), 2: one}, (0, 2): {0: _col(ring, 0, 1), 2: one},
                     (1, 3): {0: one}, (2, 3): {0: one}})
    D = GeneralWeightDatum(ring, 0, {1: Xt}, {})
    aug = GysinAugmentation(X, {1: GysinMorphismDatum(Xt, X, _m(ZZ, [[1, 1]], 2), {
        (0, 0): {0: one, 2: _col(ring, 1, 0), 4: one},
        (1, 1): {0: one, 2: one},
        (1, 2): {0: one},
    })})
    return Document("general_weight", ring, D, "blowup_boundary_square",
                    "Blow-up centred on the boundary divisor: an isomorphism on complements.",
                    {"expected_H": {"0": 1}}, aug)


def blowup_p2_point(ring: Ring = QQ) -> Document:
    S = blowup_synthesize({0: 1, 2: 1, 4: 1}, {0: 1}, 2, ring=ring)
    return Document("square", ring, S, "blowup_p2_point", "Cohomology square of the blow-up of P2 at a point.")


# ---------------------------------------------------------------------------
# plain filtered objects


def empty(ring: Ring = QQ) -> Document:
    FK = FilteredComplex(CochainComplex.zero(ring), 0, 0, {})
    return Document("filtered_complex", ring, FK, "empty", "The zero complex.")


def torus_canonical(ring: Ring = ZZ) -> Document:
    FK = canonical_filtration(cochains(torus(), ring))
    return Document("filtered_complex", ring, FK, "torus_canonical",
                    "Cellular cochains of the torus with the canonical filtration.")


def cube_sample(ring: Ring = QQ) -> Document:
    D = random_diagram(ring, random.Random(7), n=1, degrees=3, max_rank=2)
    return Document("cubical", ring, D, "cube_sample", "Seeded random commuting square of filtered complexes.")


BUILDERS = {
    "nodal_punctured_torus": nodal_punctured_torus,
    "nodal_punctured_torus_zz": lambda: _renamed(nodal_punctured_torus(ZZ), "nodal_punctured_torus_zz"),
    "nodal_punctured_torus_blown_up": nodal_punctured_torus_blown_up,
    "nodal_sphere": nodal_sphere,
    "two_sphere_cycle": two_sphere_cycle,
    "node_times_cstar_singularity": node_times_cstar_singularity,
    "node_times_cstar_weight": node_times_cstar_weight,
    "cstar_cstar_p1xp1": cstar_cstar_p1xp1,
    "cstar_cstar_bundle": cstar_cstar_bundle,
    "real_punctured_plane": real_punctured_plane,
    "real_cylinder": real_cylinder,
    "blowup_interior_square": blowup_interior_square,
    "blowup_boundary_square": blowup_boundary_square,
    "blowup_p2_point": blowup_p2_point,
    "empty": empty,
    "torus_canonical": torus_canonical,
    "cube_sample": cube_sample,
}


def _renamed(doc: Document, name: str) -> Document:
    doc.name = name
    return doc


def build_all() -> dict[str, Document]:
    return {name: build() for name, build in BUILDERS.items()}


def write_all(directory) -> list[Path]:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, doc in build_all().items():
        path = out / f"{name}.json"
        path.write_text(dumps(doc), encoding="utf-8")
        written.append(path)
    return written


if __name__ == "__main__":
    for p in write_all(sys.argv[1] if len(sys.argv) > 1 else "documents"):
        print(p)
