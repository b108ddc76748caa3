"""Seeded generators of random filtered complexes and cubical diagrams.

Used by the property suites. Every generator takes a ``random.Random`` so runs
are reproducible from a seed. Objects are first built basis-aligned (vector
``i`` of degree ``n`` enters the filtration at ``levels[n][i]``) and then moved
by a random change of basis, so that filtration steps stop being coordinate
subspaces.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .complexes import ChainMap, CochainComplex, cone
from .cubical import CubicalDiagram, edges, vertices, weight
from .filtered import FilteredComplex, FilteredMap
from .linalg import Matrix, Ring, Submodule, _left_kernel

__all__ = [
    "random_unimodular",
    "random_filtered_complex",
    "random_filtered_map_pair",
    "random_diagram",
]


def random_unimodular(ring: Ring, n: int, rng: random.Random, steps: int = 6) -> tuple[Matrix, Matrix]:
    """A random invertible matrix together with its inverse."""
    U = [[ring(int(i == j)) for j in range(n)] for i in range(n)]
    Ui = [row[:] for row in U]
    if n >= 2:
        for _ in range(steps):
            i, j = rng.sample(range(n), 2)
            c = rng.choice([-2, -1, 1, 2])
            # U <- (I + c e_ij) U and U^{-1} <- U^{-1} (I - c e_ij)
            U[i] = [ring(a + c * b) for a, b in zip(U[i], U[j])]
            for row in Ui:
                row[j] = ring(row[j] - c * row[i])
    return Matrix.from_rows(ring, U, n), Matrix.from_rows(ring, Ui, n)


def _small(rng: random.Random) -> int:
    return rng.choice([-2, -1, -1, 0, 0, 0, 1, 1, 2])


@dataclass
class Aligned:
    """Basis-aligned filtered complex on degrees ``0..len(dims)-1``."""

    ring: Ring
    dims: list
    levels: dict
    diffs: dict

    def d(self, n: int) -> Matrix:
        if n in self.diffs:
            return self.diffs[n]
        return Matrix.zero(self.ring, self.dim(n + 1), self.dim(n))

    def dim(self, n: int) -> int:
        return self.dims[n] if 0 <= n < len(self.dims) else 0


def random_aligned(ring: Ring, rng: random.Random, degrees: int = 3, max_rank: int = 3,
                   levels: tuple = (0, 1, 2)) -> Aligned:
    dims = [rng.randint(0, max_rank) for _ in range(degrees)]
    lev = {n: [rng.choice(levels) for _ in range(dims[n])] for n in range(degrees)}
    diffs = {}
    for n in range(degrees - 1):
        prev = diffs.get(n - 1)
        rows = []
        for i in range(dims[n + 1]):
            allowed = [j for j in range(dims[n]) if lev[n][j] >= lev[n + 1][i]]
            row = [ring(0)] * dims[n]
            if prev is None:
                for j in allowed:
                    row[j] = ring(_small(rng))
            elif allowed:
                basis = _left_kernel(ring, [list(prev.data[j]) for j in allowed], prev.cols)
                for b in basis:
                    c = _small(rng)
                    for pos, j in enumerate(allowed):
                        row[j] = ring(row[j] + c * b[pos])
            rows.append(row)
        diffs[n] = Matrix.from_rows(ring, rows, dims[n]) if rows else Matrix.zero(ring, 0, dims[n])
    return Aligned(ring, dims, lev, diffs)


def _filtered_matrix(ring, rng, src_levels, tgt_levels, shift=0) -> Matrix:
    """Random matrix sending level ``l`` vectors into levels ``<= l``."""
    rows = [[ring(_small(rng)) if t <= s + shift else ring(0) for s in src_levels] for t in tgt_levels]
    return Matrix.from_rows(ring, rows, len(src_levels)) if rows else Matrix.zero(ring, 0, len(src_levels))


def _realize(A: Aligned, U: dict) -> FilteredComplex:
    """Filtered complex of ``A`` after the base change ``x -> U[n][0] x`` in degree ``n``."""
    ring = A.ring
    degrees = len(A.dims)
    diffs = {n: U[n + 1][0] @ A.d(n) @ U[n][1] for n in range(degrees - 1)}
    K = CochainComplex.build(ring, dict(enumerate(A.dims)), diffs)
    if not K.dims:
        return FilteredComplex(K, 0, 0, {})
    allv = [l for n in range(degrees) for l in A.levels[n]]
    cols = {n: U[n][0].T.data for n in range(degrees)}

    def W(p, n):
        return Submodule.span(ring, A.dim(n), [cols[n][i] for i in range(A.dim(n)) if A.levels[n][i] <= p])

    return FilteredComplex.from_function(K, min(allv), max(allv), W)


def _base_change(A: Aligned, rng: random.Random, enabled: bool) -> dict:
    if enabled:
        return {n: random_unimodular(A.ring, A.dims[n], rng) for n in range(len(A.dims))}
    return {n: (Matrix.identity(A.ring, A.dims[n]),) * 2 for n in range(len(A.dims))}


def random_filtered_complex(ring: Ring, rng: random.Random, degrees: int = 3, max_rank: int = 3,
                            levels: tuple = (0, 1, 2), base_change: bool = True) -> FilteredComplex:
    A = random_aligned(ring, rng, degrees, max_rank, levels)
    return _realize(A, _base_change(A, rng, base_change))


def random_filtered_map_pair(ring: Ring, rng: random.Random, **kw):
    """``(B, C, B -> C)`` with ``C = cone(id_B)`` filtered so that ``B`` carries the induced filtration."""
    FB = random_filtered_complex(ring, rng, **kw)
    B = FB.carrier
    C = cone(B.identity())

    def W(p, n):
        return FB.W(p, n + 1).embed(C.dim(n), 0) + FB.W(p, n).embed(C.dim(n), B.dim(n + 1))

    FC = FilteredComplex.from_function(C, FB.pmin, FB.pmax, W)
    inc = {n: Matrix.blocks(ring, [B.dim(n + 1), B.dim(n)], [B.dim(n)], {(1, 0): Matrix.identity(ring, B.dim(n))})
           for n in B.degrees()}
    return FB, FC, FilteredMap(ChainMap(B, C, inc), FB, FC)


def _stack(parts: list[Aligned]) -> tuple[Aligned, list[list[int]]]:
    """Direct sum of aligned complexes with the offsets of each part per degree."""
    ring = parts[0].ring
    degrees = len(parts[0].dims)
    dims = [sum(P.dims[n] for P in parts) for n in range(degrees)]
    lev = {n: [l for P in parts for l in P.levels[n]] for n in range(degrees)}
    diffs = {n: Matrix.blocks(ring, [P.dim(n + 1) for P in parts], [P.dim(n) for P in parts],
                              {(i, i): P.d(n) for i, P in enumerate(parts)})
             for n in range(degrees - 1)}
    offs = [[sum(P.dims[n] for P in parts[:i]) for i in range(len(parts))] for n in range(degrees)]
    return Aligned(ring, dims, lev, diffs), offs


def random_diagram(ring: Ring, rng: random.Random, n: int = 1, degrees: int = 3, max_rank: int = 2,
                   levels: tuple = (0, 1, 2), base_change: bool = True) -> CubicalDiagram:
    """Random commuting ``n``-cube of filtered complexes with filtered cofaces.

    Vertex ``alpha`` is ``(+)_{i in alpha} K_i (+) M_alpha``. A coface adding
    ``j`` includes each ``K_i`` scaled by ``c[i][j]`` (so squares commute) and
    kills ``M_alpha``. On the 1-cube the coface into the top vertex is further
    perturbed by a null-homotopic filtered map ``d h + h d``.
    """
    K = [random_aligned(ring, rng, degrees, max_rank, levels) for _ in range(n + 1)]
    M = {a: random_aligned(ring, rng, degrees, max_rank, levels) for a in vertices(n)}
    c = [[rng.choice([-1, 1, 1, 2]) for _ in range(n + 1)] for _ in range(n + 1)]
    if ring.kind == "GF":
        c = [[x if ring(x) else 1 for x in row] for row in c]
    aligned, offs = {}, {}
    for a in vertices(n):
        idx = [i for i in range(n + 1) if a >> i & 1]
        aligned[a], offs[a] = _stack([K[i] for i in idx] + [M[a]])
    maps = {}
    for a, b, j in edges(n):
        ia = [i for i in range(n + 1) if a >> i & 1]
        ib = [i for i in range(n + 1) if b >> i & 1]
        f = {}
        for deg in range(degrees):
            rows = [[ring(0)] * aligned[a].dim(deg) for _ in range(aligned[b].dim(deg))]
            for pos, i in enumerate(ia):
                so, to = offs[a][deg][pos], offs[b][deg][ib.index(i)]
                for t in range(K[i].dim(deg)):
                    rows[to + t][so + t] = ring(c[i][j])
            f[deg] = Matrix.from_rows(ring, rows, aligned[a].dim(deg)) if rows \
                else Matrix.zero(ring, 0, aligned[a].dim(deg))
        if n == 1 and weight(b) == 1:
            h = {deg: _filtered_matrix(ring, rng, aligned[a].levels[deg], aligned[b].levels[deg - 1])
                 for deg in range(1, degrees)}
            for deg in range(degrees):
                extra = Matrix.zero(ring, aligned[b].dim(deg), aligned[a].dim(deg))
                if deg + 1 < degrees:
                    extra = extra + h[deg + 1] @ aligned[a].d(deg)
                if deg >= 1:
                    extra = extra + aligned[b].d(deg - 1) @ h[deg]
                f[deg] = f[deg] + extra
        maps[(a, b)] = f
    U = {a: _base_change(aligned[a], rng, base_change) for a in vertices(n)}
    at = {a: _realize(aligned[a], U[a]) for a in vertices(n)}
    cof = {}
    for (a, b), f in maps.items():
        fm = {deg: U[b][deg][0] @ f[deg] @ U[a][deg][1] for deg in range(degrees)}
        src, tgt = at[a].carrier, at[b].carrier
        fm = {deg: m for deg, m in fm.items() if m.shape == (tgt.dim(deg), src.dim(deg))}
        cof[(a, b)] = FilteredMap(ChainMap(src, tgt, fm), at[a], at[b])
    return CubicalDiagram(ring, n, at, cof)
