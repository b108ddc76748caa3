"""Cubical diagrams of (filtered) complexes, their simple complexes and the
r-shifted filtrations on them.

Vertices are nonempty subsets of ``{0..n}`` encoded as bitmasks; a vertex of
cardinality ``k`` has weight ``w = k - 1`` and sits ``w`` degrees up in the
simple complex. A coface adds one index ``j`` and carries the sign
``(-1)^{#(alpha below j)}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .complexes import ChainMap, CochainComplex, ComplexError
from .filtered import FilteredComplex, FilteredMap, decalage, is_er_quasi_iso, trivial_filtration
from .linalg import Matrix, Ring, Submodule
from .spectral import SpectralSequence, SubquotientLine

__all__ = [
    "CubicalDiagram",
    "AugmentedDiagram",
    "simple",
    "simple_r",
    "augmentation_map",
    "is_descent_acyclic",
    "decalage_diagram",
    "simple_of_pages",
    "weight",
    "coface_sign",
    "vertices",
]


def weight(mask: int) -> int:
    return bin(mask).count("1") - 1


def vertices(n: int) -> list[int]:
    """Nonempty subsets of ``{0..n}`` ordered by weight, then bitmask."""
    return sorted(range(1, 1 << (n + 1)), key=lambda a: (weight(a), a))


def coface_sign(alpha: int, j: int) -> int:
    return -1 if bin(alpha & ((1 << j) - 1)).count("1") % 2 else 1


def edges(n: int):
    """Pairs ``(alpha, beta, j)`` with ``beta = alpha + {j}``."""
    for a in vertices(n):
        for j in range(n + 1):
            if not a >> j & 1:
                yield a, a | 1 << j, j


def _carrier(x):
    return x.carrier if isinstance(x, (FilteredComplex, FilteredMap)) else x


@dataclass(frozen=True, eq=False)
class CubicalDiagram:
    """``at[alpha]`` complexes (all plain or all filtered) and ``coface[(alpha, beta)]`` maps."""

    ring: Ring
    n: int
    at: dict
    coface: dict = field(repr=False)

    def __post_init__(self):
        verts = vertices(self.n)
        if set(self.at) != set(verts):
            raise ComplexError(f"a {self.n}-cube needs vertices {verts}, got {sorted(self.at)}")
        kinds = {isinstance(v, FilteredComplex) for v in self.at.values()}
        if len(kinds) > 1:
            raise ComplexError("mixing filtered and plain vertices")
        for v in self.at.values():
            if _carrier(v).ring != self.ring:
                raise ComplexError("vertex over the wrong ring")
        want = {(a, b) for a, b, _ in edges(self.n)}
        if set(self.coface) != want:
            raise ComplexError(f"cofaces must be given exactly on edges {sorted(want)}")
        for (a, b), f in self.coface.items():
            if self.filtered != isinstance(f, FilteredMap):
                raise ComplexError("coface kind does not match vertex kind")
            if _carrier(f).source != _carrier(self.at[a]) or _carrier(f).target != _carrier(self.at[b]):
                raise ComplexError(f"coface {a}->{b} has the wrong endpoints")
        for a in verts:
            for j in range(self.n + 1):
                for k in range(j + 1, self.n + 1):
                    if a >> j & 1 or a >> k & 1:
                        continue
                    b1, b2, c = a | 1 << j, a | 1 << k, a | 1 << j | 1 << k
                    for deg in _carrier(self.at[a]).degrees():
                        left = self.map(b1, c).f(deg) @ self.map(a, b1).f(deg)
                        right = self.map(b2, c).f(deg) @ self.map(a, b2).f(deg)
                        if left != right:
                            raise ComplexError(f"square {a}->{c} does not commute in degree {deg}")

    @property
    def filtered(self) -> bool:
        return isinstance(next(iter(self.at.values())), FilteredComplex)

    def complex(self, alpha: int) -> CochainComplex:
        return _carrier(self.at[alpha])

    def map(self, a: int, b: int) -> ChainMap:
        return _carrier(self.coface[(a, b)])

    def carriers(self) -> "CubicalDiagram":
        if not self.filtered:
            return self
        return CubicalDiagram(self.ring, self.n, {a: v.carrier for a, v in self.at.items()},
                              {k: f.carrier for k, f in self.coface.items()})

    def with_trivial_filtrations(self) -> "CubicalDiagram":
        if self.filtered:
            return self
        at = {a: trivial_filtration(K) for a, K in self.at.items()}
        cof = {(a, b): FilteredMap(f, at[a], at[b]) for (a, b), f in self.coface.items()}
        return CubicalDiagram(self.ring, self.n, at, cof)

    @cached_property
    def _range(self) -> tuple[int, int]:
        lo = [self.complex(a).n0 + weight(a) for a in self.at if self.complex(a).dims]
        hi = [self.complex(a).support[1] + weight(a) for a in self.at if self.complex(a).dims]
        return (min(lo), max(hi)) if lo else (0, -1)

    def layout(self, m: int) -> list[tuple[int, int, int]]:
        """``(alpha, offset, rank)`` of the summands of ``s(D)^m``."""
        out, off = [], 0
        for a in vertices(self.n):
            r = self.complex(a).dim(m - weight(a))
            out.append((a, off, r))
            off += r
        return out


def simple(D: CubicalDiagram) -> CochainComplex:
    """Total complex ``s(D)^m = (+)_alpha D_alpha^{m-w}``."""
    ring = D.ring
    lo, hi = D._range
    dims = {m: sum(r for _, _, r in D.layout(m)) for m in range(lo, hi + 1)}
    diffs = {}
    for m in range(lo, hi):
        src = {a: (off, r) for a, off, r in D.layout(m)}
        tgt = {a: (off, r) for a, off, r in D.layout(m + 1)}
        rows = [[ring(0)] * dims[m] for _ in range(dims[m + 1])]

        def put(M: Matrix, a, b, sign):
            ro, co = tgt[b][0], src[a][0]
            for i, row in enumerate(M.data):
                for j, x in enumerate(row):
                    if x:
                        rows[ro + i][co + j] = ring(rows[ro + i][co + j] + sign * x)

        for a in src:
            w = weight(a)
            put(D.complex(a).d(m - w), a, a, -1 if w % 2 else 1)
        for a, b, j in edges(D.n):
            put(D.map(a, b).f(m - weight(a)), a, b, coface_sign(a, j))
        diffs[m] = Matrix.from_rows(ring, rows, dims[m]) if rows else Matrix.zero(ring, 0, dims[m])
    return CochainComplex.build(ring, dims, diffs)


def _direct_sum_sub(D: CubicalDiagram, m: int, part) -> Submodule:
    """``(+)_alpha part(alpha, m - w)`` inside ``s(D)^m``."""
    lay = D.layout(m)
    total = sum(r for _, _, r in lay)
    S = Submodule.zero(D.ring, total)
    for a, off, r in lay:
        if r:
            S = S + part(a, m - weight(a)).embed(total, off)
    return S


def simple_r(D: CubicalDiagram, r: int) -> FilteredComplex:
    """``s(D)`` with ``W(r)_p = (+)_alpha W^alpha_{p + r w(alpha)}``."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    D = D.with_trivial_filtrations()
    K = simple(D)
    if not K.dims:
        return FilteredComplex(K, 0, 0, {})
    pmin = min(v.pmin - r * weight(a) for a, v in D.at.items())
    pmax = max(v.pmax - r * weight(a) for a, v in D.at.items())

    def W(p, m):
        return _direct_sum_sub(D, m, lambda a, k: D.at[a].W(p + r * weight(a), k))

    return FilteredComplex.from_function(K, pmin, pmax, W)


def decalage_diagram(D: CubicalDiagram) -> CubicalDiagram:
    """Vertexwise décalage; cofaces stay filtered because Dec is functorial."""
    D = D.with_trivial_filtrations()
    at = {a: decalage(v) for a, v in D.at.items()}
    cof = {(a, b): FilteredMap(f.carrier, at[a], at[b]) for (a, b), f in D.coface.items()}
    return CubicalDiagram(D.ring, D.n, at, cof)


@dataclass(frozen=True, eq=False)
class AugmentedDiagram:
    """``base -> D`` through maps into the singleton vertices."""

    base: object
    diagram: CubicalDiagram
    augmentation: dict

    def __post_init__(self):
        D = self.diagram
        B = _carrier(self.base)
        singletons = [1 << i for i in range(D.n + 1)]
        if set(self.augmentation) != set(singletons):
            raise ComplexError(f"augmentation must be given on singletons {singletons}")
        for i, e in self.augmentation.items():
            if _carrier(e).source != B or _carrier(e).target != D.complex(i):
                raise ComplexError(f"augmentation into vertex {i} has the wrong endpoints")
        for i in singletons:
            for k in singletons:
                if i < k:
                    c = i | k
                    for deg in B.degrees():
                        left = D.map(i, c).f(deg) @ _carrier(self.augmentation[i]).f(deg)
                        right = D.map(k, c).f(deg) @ _carrier(self.augmentation[k]).f(deg)
                        if left != right:
                            raise ComplexError(f"augmentation square into {c} does not commute in degree {deg}")


def augmentation_map(A: AugmentedDiagram) -> ChainMap:
    """Chain map ``base -> s(D)`` landing in the weight-zero summands."""
    D = A.diagram
    B = _carrier(A.base)
    S = simple(D)
    maps = {}
    for m in B.degrees():
        rows = [[D.ring(0)] * B.dim(m) for _ in range(S.dim(m))]
        for a, off, r in D.layout(m):
            if weight(a) == 0:
                M = _carrier(A.augmentation[a]).f(m)
                for i, row in enumerate(M.data):
                    rows[off + i] = list(row)
        maps[m] = Matrix.from_rows(D.ring, rows, B.dim(m)) if rows else Matrix.zero(D.ring, 0, B.dim(m))
    return ChainMap(B, S, maps)


def is_descent_acyclic(A: AugmentedDiagram, r: int) -> bool:
    """Whether ``base -> s^r(D)`` is an ``E_r``-quasi-isomorphism."""
    base = A.base if isinstance(A.base, FilteredComplex) else trivial_filtration(A.base)
    target = simple_r(A.diagram, r)
    return is_er_quasi_iso(FilteredMap(augmentation_map(A), base, target), r)


def simple_of_pages(D: CubicalDiagram, r: int) -> SubquotientLine:
    """``s E_r(D)`` as a subquotient of ``s(D)`` with the total differential.

    The vertex ``alpha`` page sits shifted by ``w(alpha) * (r, 1 - r)``, so the
    combined differential has the bidegree ``(r, 1 - r)`` of ``d_r``.
    """
    D = D.with_trivial_filtrations()
    K = simple(D)
    ss = {a: SpectralSequence(v) for a, v in D.at.items()}

    def Z(p, m):
        return _direct_sum_sub(D, m, lambda a, k: ss[a].Z(r, p - r * weight(a), k))

    def B(p, m):
        return _direct_sum_sub(D, m, lambda a, k: ss[a].B(r, p - r * weight(a), k))

    lo = min(-v.pmax + r * weight(a) for a, v in D.at.items())
    hi = max(-v.pmin + r * weight(a) for a, v in D.at.items())
    return SubquotientLine(K, r, Z, B, range(lo, hi + 1))
