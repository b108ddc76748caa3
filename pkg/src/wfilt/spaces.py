"""Finite Delta-complex models of small spaces and their cellular cochains.

``faces[k][s]`` lists the ``k + 1`` faces of the ``k``-cell ``s`` as indices of
``(k-1)``-cells, face ``i`` omitting vertex ``i``. Noncompact spaces are
represented by homotopy-equivalent finite models.
"""
from __future__ import annotations

from dataclasses import dataclass

from .complexes import ChainMap, CochainComplex, ComplexError
from .linalg import Matrix, Ring

__all__ = [
    "DeltaModel",
    "CellMap",
    "cochains",
    "induced",
    "point",
    "points",
    "circle",
    "wedge_circles",
    "sphere2",
    "torus",
    "identify_vertices",
    "disjoint_union",
    "vertex_inclusion",
    "collapse",
]


@dataclass(frozen=True)
class DeltaModel:
    """``counts[k]`` cells in dimension ``k``; ``faces[k-1]`` holds the faces of the ``k``-cells."""

    counts: tuple
    faces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(self.counts))
        object.__setattr__(self, "faces", tuple(tuple(tuple(f) for f in fk) for fk in self.faces))
        if len(self.faces) != max(len(self.counts) - 1, 0):
            raise ComplexError("need one face table per positive dimension")
        for k, table in enumerate(self.faces, start=1):
            if len(table) != self.counts[k]:
                raise ComplexError(f"face table of dimension {k} has {len(table)} rows, expected {self.counts[k]}")
            for s, f in enumerate(table):
                if len(f) != k + 1 or not all(0 <= x < self.counts[k - 1] for x in f):
                    raise ComplexError(f"{k}-cell {s} has invalid faces {f}")
        # face identities d_i d_j = d_{j-1} d_i for i < j
        for k in range(2, len(self.counts)):
            for s, f in enumerate(self.faces[k - 1]):
                for j in range(k + 1):
                    for i in range(j):
                        if self.faces[k - 2][f[j]][i] != self.faces[k - 2][f[i]][j - 1]:
                            raise ComplexError(f"face identity fails on {k}-cell {s}")

    @property
    def dim(self) -> int:
        return len(self.counts) - 1

    def face(self, k: int, s: int, i: int) -> int:
        return self.faces[k - 1][s][i]


def cochains(M: DeltaModel, ring: Ring) -> CochainComplex:
    """``(delta phi)(s) = sum_i (-1)^i phi(d_i s)``."""
    dims = dict(enumerate(M.counts))
    diffs = {}
    for k in range(M.dim):
        rows = [[0] * M.counts[k] for _ in range(M.counts[k + 1])]
        for s, f in enumerate(M.faces[k]):
            for i, t in enumerate(f):
                rows[s][t] += -1 if i % 2 else 1
        diffs[k] = Matrix.from_rows(ring, rows, M.counts[k]) if rows else Matrix.zero(ring, 0, M.counts[k])
    return CochainComplex.build(ring, dims, diffs)


@dataclass(frozen=True)
class CellMap:
    """``cells[k][s]`` is the image ``k``-cell of ``s``, or ``None`` if ``s`` collapses."""

    source: DeltaModel
    target: DeltaModel
    cells: tuple

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(tuple(c) for c in self.cells))
        S, T = self.source, self.target
        if len(self.cells) != len(S.counts):
            raise ComplexError("cell map needs an assignment per source dimension")
        for k, table in enumerate(self.cells):
            if len(table) != S.counts[k]:
                raise ComplexError(f"cell map assigns {len(table)} cells in dimension {k}, expected {S.counts[k]}")
            for s, t in enumerate(table):
                if t is None:
                    if k == 0:
                        raise ComplexError("vertices cannot collapse")
                    continue
                if k >= len(T.counts) or not 0 <= t < T.counts[k]:
                    raise ComplexError(f"{k}-cell {s} maps outside the target")
                if k:
                    for i in range(k + 1):
                        img = self.cells[k - 1][S.face(k, s, i)]
                        if img != T.face(k, t, i):
                            raise ComplexError(f"cell map does not respect face {i} of {k}-cell {s}")
        # a collapsed cell must have all its vertices on one target vertex
        for k in range(1, len(self.cells)):
            for s, t in enumerate(self.cells[k]):
                if t is None:
                    verts = {self.cells[0][v] for v in _vertices(S, k, s)}
                    if len(verts) != 1:
                        raise ComplexError(f"collapsed {k}-cell {s} does not land on a single vertex")


def _vertices(M: DeltaModel, k: int, s: int) -> set:
    cells = {s}
    for d in range(k, 0, -1):
        cells = {M.face(d, c, i) for c in cells for i in range(d + 1)}
    return cells


def induced(f: CellMap, ring: Ring) -> ChainMap:
    """Pullback on normalized cochains: ``(f* phi)(s) = phi(f(s))``, zero on collapsed cells."""
    S, T = cochains(f.target, ring), cochains(f.source, ring)
    maps = {}
    for k, table in enumerate(f.cells):
        if k >= len(f.target.counts):
            continue
        rows = [[0] * f.target.counts[k] for _ in range(f.source.counts[k])]
        for s, t in enumerate(table):
            if t is not None:
                rows[s][t] = 1
        if rows and f.target.counts[k]:
            maps[k] = Matrix.from_rows(ring, rows, f.target.counts[k])
    return ChainMap(S, T, maps)


def point() -> DeltaModel:
    return points(1)


def points(k: int) -> DeltaModel:
    return DeltaModel((k,))


def circle() -> DeltaModel:
    return wedge_circles(1)


def wedge_circles(k: int) -> DeltaModel:
    return DeltaModel((1, k), ([(0, 0)] * k,))


def sphere2() -> DeltaModel:
    """Two triangles glued along their boundary; edges ``01, 02, 12``."""
    tri = (2, 1, 0)  # d0 = [12], d1 = [02], d2 = [01]
    return DeltaModel((3, 3, 2), ([(1, 0), (2, 0), (2, 1)], [tri, tri]))


def torus() -> DeltaModel:
    """One vertex, edges ``a, b, c`` and two triangles with faces ``(b, c, a)`` and ``(a, c, b)``."""
    return DeltaModel((1, 3, 2), ([(0, 0)] * 3, [(1, 2, 0), (0, 2, 1)]))


def identify_vertices(M: DeltaModel, v: int, w: int) -> DeltaModel:
    """Quotient model with vertex ``w`` glued onto vertex ``v``."""
    if v == w:
        return M
    keep = [u for u in range(M.counts[0]) if u != w]
    new = {u: i for i, u in enumerate(keep)}
    new[w] = new[v]
    faces = list(M.faces)
    if faces:
        faces[0] = tuple(tuple(new[x] for x in f) for f in faces[0])
    return DeltaModel((M.counts[0] - 1,) + M.counts[1:], faces)


def disjoint_union(*models: DeltaModel) -> DeltaModel:
    top = max(m.dim for m in models)
    counts = [sum(m.counts[k] if k <= m.dim else 0 for m in models) for k in range(top + 1)]
    faces = []
    for k in range(1, top + 1):
        table, off = [], 0
        for m in models:
            if k <= m.dim:
                table += [tuple(x + off for x in f) for f in m.faces[k - 1]]
            off += m.counts[k - 1] if k - 1 <= m.dim else 0
        faces.append(table)
    return DeltaModel(counts, faces)


def vertex_inclusion(source: DeltaModel, target: DeltaModel, images: list[int]) -> CellMap:
    """Map from a finite set of points onto chosen vertices of ``target``."""
    if source.dim != 0:
        raise ComplexError("vertex_inclusion needs a zero-dimensional source")
    return CellMap(source, target, (tuple(images),))


def collapse(source: DeltaModel, target: DeltaModel | None = None) -> CellMap:
    """Constant map to a single vertex (``target`` defaults to a point)."""
    target = target or point()
    cells = [tuple(0 for _ in range(source.counts[0]))]
    cells += [tuple(None for _ in range(source.counts[k])) for k in range(1, len(source.counts))]
    return CellMap(source, target, cells)
