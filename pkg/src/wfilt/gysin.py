"""Gysin complexes of normal-crossings compactification data and their
functoriality through minors of multiplicity matrices.

A datum describes ``(X, U)`` with ``X`` compact and ``X - U = D_0 u ... u D_{N-1}``.
Strata ``D_I`` are keyed by bitmasks ``I`` over the components (``I = 0`` is
``X`` itself); their cohomology is free and given by ranks per degree. In
complex mode Gysin maps raise degree by 2, in real mode (over ``Z/2``) by 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import ChainMap, CochainComplex, ComplexError
from .linalg import ZZ, Matrix, Ring, determinant

__all__ = ["GysinDatum", "GysinMorphismDatum", "gysin_complex", "gysin_map", "compose", "identity_morphism"]


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def members(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


@dataclass(frozen=True, eq=False)
class GysinDatum:
    """``strata[I] = {degree: rank}``; ``gysin[(I, J)] = {k: H^k(D_J) -> H^{k+shift}(D_I)}``."""

    ring: Ring
    N: int
    strata: dict
    gysin: dict = field(repr=False)
    mode: str = "complex"

    def __post_init__(self):
        if self.mode not in ("complex", "real"):
            raise ComplexError(f"unknown mode {self.mode!r}")
        if self.mode == "real" and not (self.ring.kind == "GF" and self.ring.p == 2):
            raise ComplexError("real mode requires coefficients Z/2")
        if 0 not in self.strata:
            raise ComplexError("strata must contain the empty set (the compact space itself)")
        for I in self.strata:
            if I >> self.N:
                raise ComplexError(f"stratum {I:b} uses a component beyond N = {self.N}")
            for i in members(I):
                if I & ~(1 << i) not in self.strata:
                    raise ComplexError(f"strata are not downward closed at {I:b}")
        for (I, J), maps in self.gysin.items():
            if I not in self.strata or J not in self.strata or I & J != I or popcount(J) != popcount(I) + 1:
                raise ComplexError(f"Gysin map {J:b} -> {I:b} is not along a codimension-one inclusion")
            for k, M in maps.items():
                if M.shape != (self.rank(I, k + self.shift), self.rank(J, k)):
                    raise ComplexError(f"Gysin map {J:b} -> {I:b} in degree {k} has shape {M.shape}")
        for q in self.row_range():
            gysin_complex(self, q)

    @property
    def shift(self) -> int:
        return 2 if self.mode == "complex" else 1

    def rank(self, I: int, k: int) -> int:
        return self.strata.get(I, {}).get(k, 0)

    def max_degree(self) -> int:
        return max((k for h in self.strata.values() for k, r in h.items() if r), default=0)

    def row_range(self) -> range:
        """Rows ``q`` that can carry a nonzero term."""
        return range(0, self.max_degree() + self.shift * self.N + 1)

    def layer(self, size: int) -> list[int]:
        return sorted(I for I in self.strata if popcount(I) == size)

    def gysin_matrix(self, I: int, J: int, k: int) -> Matrix:
        m = self.gysin.get((I, J), {}).get(k)
        if m is None:
            return Matrix.zero(self.ring, self.rank(I, k + self.shift), self.rank(J, k))
        return m


def _term(G: GysinDatum, q: int, p: int) -> list[tuple[int, int, int]]:
    """``(I, degree, rank)`` summands of ``G^q`` in position ``p``."""
    k = q + G.shift * p
    return [(I, k, G.rank(I, k)) for I in G.layer(-p)]


def gysin_complex(G: GysinDatum, q: int) -> CochainComplex:
    """Row ``q``: ``(+)_{|I| = -p} H^{q + shift p}(D_I)`` in degree ``p``, ``-N <= p <= 0``."""
    ring = G.ring
    dims, diffs = {}, {}
    for p in range(-G.N, 1):
        dims[p] = sum(r for _, _, r in _term(G, q, p))
    for p in range(-G.N, 0):
        src, tgt = _term(G, q, p), _term(G, q, p + 1)
        parts = {}
        for a, (J, k, _) in enumerate(src):
            for pos, i in enumerate(members(J)):
                I = J & ~(1 << i)
                b = next(b for b, t in enumerate(tgt) if t[0] == I)
                sign = -1 if pos % 2 else 1
                parts[(b, a)] = G.gysin_matrix(I, J, k).scale(sign)
        diffs[p] = Matrix.blocks(ring, [r for *_, r in tgt], [r for *_, r in src], parts)
    try:
        return CochainComplex.build(ring, dims, diffs)
    except ComplexError as e:
        raise ComplexError(f"Gysin row q = {q} is not a complex: {e}") from None


@dataclass(frozen=True, eq=False)
class GysinMorphismDatum:
    """Datum of ``f: (X', U') -> (X, U)``; ``source`` describes ``X'`` and ``target`` ``X``.

    ``multiplicity`` is an integer ``N x N'`` matrix (``f^{-1} D_i = sum_j m_ij D'_j``) and
    ``pullbacks[(I, J)] = {k: H^k(D_I) -> H^k(D'_J)}`` for the pairs with
    ``f(D'_J) inside D_I``.
    """

    source: GysinDatum
    target: GysinDatum
    multiplicity: Matrix
    pullbacks: dict = field(repr=False)

    def __post_init__(self):
        S, T = self.source, self.target
        if self.multiplicity.shape != (T.N, S.N):
            raise ComplexError(f"multiplicity matrix must be {T.N} x {S.N}")
        if self.multiplicity.ring.kind != "Z" or any(x < 0 for row in self.multiplicity.data for x in row):
            raise ComplexError("multiplicities must be nonnegative integers")
        if S.mode != T.mode or S.ring != T.ring:
            raise ComplexError("source and target data differ in mode or ring")
        for (I, J), maps in self.pullbacks.items():
            if I not in T.strata or J not in S.strata or popcount(I) != popcount(J):
                raise ComplexError(f"pullback {I:b} -> {J:b} must join strata of equal codimension")
            for k, M in maps.items():
                if M.shape != (S.rank(J, k), T.rank(I, k)):
                    raise ComplexError(f"pullback {I:b} -> {J:b} in degree {k} has shape {M.shape}")
        for q in sorted(set(S.row_range()) | set(T.row_range())):
            gysin_map(self, q)

    def minor(self, I: int, J: int):
        rows, cols = members(I), members(J)
        if not rows:
            return self.multiplicity.ring(1)
        sub = [[self.multiplicity[i, j] for j in cols] for i in rows]
        return determinant(Matrix.from_rows(self.multiplicity.ring, sub, len(cols)))

    def pullback(self, I: int, J: int, k: int) -> Matrix:
        m = self.pullbacks.get((I, J), {}).get(k)
        if m is None:
            return Matrix.zero(self.source.ring, self.source.rank(J, k), self.target.rank(I, k))
        return m


def gysin_map(M: GysinMorphismDatum, q: int) -> ChainMap:
    """``G^q(X, U) -> G^q(X', U')`` with components ``det(m_IJ) f*_IJ``."""
    S, T = M.source, M.target
    src, tgt = gysin_complex(T, q), gysin_complex(S, q)
    ring = S.ring
    maps = {}
    for p in range(-max(S.N, T.N), 1):
        a_terms, b_terms = _term(T, q, p), _term(S, q, p)
        parts = {}
        for a, (I, k, _) in enumerate(a_terms):
            for b, (J, _, _) in enumerate(b_terms):
                if (I, J) in M.pullbacks:
                    m = M.minor(I, J)
                    if m:
                        parts[(b, a)] = M.pullback(I, J, k).scale(m)
        if a_terms or b_terms:
            maps[p] = Matrix.blocks(ring, [r for *_, r in b_terms], [r for *_, r in a_terms], parts)
    maps = {p: m for p, m in maps.items() if m.shape == (tgt.dim(p), src.dim(p))}
    try:
        return ChainMap(src, tgt, maps)
    except ComplexError as e:
        raise ComplexError(f"Gysin morphism fails the chain-map identity on row {q}: {e}") from None


def identity_morphism(G: GysinDatum) -> GysinMorphismDatum:
    ring = G.ring
    pulls = {(I, I): {k: Matrix.identity(ring, r) for k, r in G.strata[I].items()} for I in G.strata}
    return GysinMorphismDatum(G, G, Matrix.identity(ZZ, G.N), pulls)


def compose(f: GysinMorphismDatum, g: GysinMorphismDatum) -> GysinMorphismDatum:
    """Datum of ``f o g`` where ``g: X'' -> X'`` and ``f: X' -> X``.

    Multiplicity matrices multiply; the pullback for ``(I, K)`` factors through
    any intermediate stratum ``J`` carrying both pullbacks (all such factorings
    must agree, as they are restrictions between the same strata).
    """
    if g.target is not f.source and g.target.strata != f.source.strata:
        raise ComplexError("morphisms are not composable")
    pulls = {}
    for (I, J), fmaps in f.pullbacks.items():
        for (J2, K), gmaps in g.pullbacks.items():
            if J2 != J:
                continue
            degs = set(fmaps) | set(gmaps)
            comp = {k: g.pullback(J, K, k) @ f.pullback(I, J, k) for k in degs}
            comp = {k: m for k, m in comp.items() if m.rows and m.cols}
            if (I, K) in pulls and pulls[(I, K)] != comp:
                raise ComplexError(f"pullbacks {I:b} -> {K:b} disagree through different strata")
            pulls[(I, K)] = comp
    return GysinMorphismDatum(g.source, f.target, f.multiplicity @ g.multiplicity, pulls)


def total_row_ranks(G: GysinDatum) -> dict:
    """``{q: {p: rank}}`` of all nonzero row terms (for reports)."""
    out = {}
    for q in G.row_range():
        K = gysin_complex(G, q)
        row = {p: K.dim(p) for p in K.degrees() if K.dim(p)}
        if row:
            out[q] = row
    return out
