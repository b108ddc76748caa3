"""Bounded cochain complexes of based free modules and chain maps."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .linalg import (
    Matrix,
    ModulePresentation,
    Quotient,
    Ring,
    Submodule,
    image,
    induced_matrix,
    is_isomorphism,
    kernel,
)

__all__ = ["CochainComplex", "ChainMap", "cohomology", "cone", "shift", "is_quasi_iso", "induced_on_cohomology"]


class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class CochainComplex:
    """``K^n`` free of rank ``dims[n - n0]`` for ``n0 <= n < n0 + len(dims)``.

    ``diffs[i]`` is ``d(n0 + i): K^{n0+i} -> K^{n0+i+1}``.
    """

    ring: Ring
    n0: int
    dims: tuple
    diffs: tuple = field(repr=False)

    def __post_init__(self):
        dims = tuple(self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "diffs", tuple(self.diffs))
        if any(d < 0 for d in dims):
            raise ComplexError("negative rank")
        if len(self.diffs) != max(len(dims) - 1, 0):
            raise ComplexError(f"expected {max(len(dims) - 1, 0)} differentials, got {len(self.diffs)}")
        for i, d in enumerate(self.diffs):
            if d.ring != self.ring:
                raise ComplexError("differential over the wrong ring")
            if d.shape != (dims[i + 1], dims[i]):
                raise ComplexError(f"d({self.n0 + i}) has shape {d.shape}, expected {(dims[i + 1], dims[i])}")
        for i in range(len(self.diffs) - 1):
            if not (self.diffs[i + 1] @ self.diffs[i]).is_zero():
                raise ComplexError(f"d({self.n0 + i + 1}) d({self.n0 + i}) != 0")

    @classmethod
    def build(cls, ring: Ring, dims: Mapping[int, int], diffs: Mapping[int, Matrix] | None = None) -> "CochainComplex":
        """From sparse ``{degree: rank}`` and ``{degree: d(degree)}``; trims zero ends."""
        diffs = dict(diffs or {})
        degs = [n for n, r in dims.items() if r]
        if not degs:
            return cls(ring, 0, (), ())
        lo, hi = min(degs), max(degs)
        dd = tuple(dims.get(n, 0) for n in range(lo, hi + 1))
        ds = []
        for n in range(lo, hi):
            m = diffs.get(n)
            ds.append(m if m is not None else Matrix.zero(ring, dd[n + 1 - lo], dd[n - lo]))
        return cls(ring, lo, dd, tuple(ds))

    @classmethod
    def zero(cls, ring: Ring) -> "CochainComplex":
        return cls(ring, 0, (), ())

    @property
    def support(self) -> tuple[int, int]:
        """``(n0, n1)``; empty complexes report ``(0, -1)``."""
        return self.n0, self.n0 + len(self.dims) - 1

    def degrees(self) -> range:
        return range(self.n0, self.n0 + len(self.dims))

    def dim(self, n: int) -> int:
        i = n - self.n0
        return self.dims[i] if 0 <= i < len(self.dims) else 0

    def d(self, n: int) -> Matrix:
        i = n - self.n0
        if 0 <= i < len(self.diffs):
            return self.diffs[i]
        return Matrix.zero(self.ring, self.dim(n + 1), self.dim(n))

    def cocycles(self, n: int) -> Submodule:
        return kernel(self.d(n))

    def coboundaries(self, n: int) -> Submodule:
        return image(self.d(n - 1))

    def cohomology_quotient(self, n: int) -> Quotient:
        return Quotient(self.cocycles(n), self.coboundaries(n))

    def is_acyclic(self) -> bool:
        return all(cohomology(self, n).is_zero for n in self.degrees())

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * self.dim(n) for n in self.degrees())

    def identity(self) -> "ChainMap":
        return ChainMap(self, self, {n: Matrix.identity(self.ring, self.dim(n)) for n in self.degrees()})


def cohomology(K: CochainComplex, n: int) -> ModulePresentation:
    return K.cohomology_quotient(n).presentation


@dataclass(frozen=True)
class ChainMap:
    """``maps[n]: K^n -> L^n``; missing degrees are zero."""

    source: CochainComplex
    target: CochainComplex
    maps: dict = field(repr=False)

    def __post_init__(self):
        S, T = self.source, self.target
        if S.ring != T.ring:
            raise ComplexError("chain map between complexes over different rings")
        for n, m in self.maps.items():
            if m.shape != (T.dim(n), S.dim(n)):
                raise ComplexError(f"f({n}) has shape {m.shape}, expected {(T.dim(n), S.dim(n))}")
        for n in range(min(S.n0, T.n0) - 1, max(S.support[1], T.support[1]) + 1):
            if not (self.f(n + 1) @ S.d(n) - T.d(n) @ self.f(n)).is_zero():
                raise ComplexError(f"chain map identity fails in degree {n}")

    def f(self, n: int) -> Matrix:
        m = self.maps.get(n)
        if m is None:
            return Matrix.zero(self.source.ring, self.target.dim(n), self.source.dim(n))
        return m

    def degrees(self) -> range:
        lo = min(self.source.n0, self.target.n0)
        hi = max(self.source.support[1], self.target.support[1])
        return range(lo, hi + 1)

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """Composition ``self o other``."""
        if other.target != self.source:
            raise ComplexError("composing chain maps with mismatched complexes")
        return ChainMap(other.source, self.target, {n: self.f(n) @ other.f(n) for n in other.source.degrees()})

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, self.target, {n: self.f(n) + other.f(n) for n in self.source.degrees()})

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: self.f(n).scale(c) for n in self.source.degrees()})


def shift(K: CochainComplex, r: int) -> CochainComplex:
    """``K[r]^n = K^{n+r}`` with differential ``(-1)^r d``."""
    sign = -1 if r % 2 else 1
    return CochainComplex(K.ring, K.n0 - r, K.dims, tuple(d.scale(sign) for d in K.diffs))


def cone(f: ChainMap) -> CochainComplex:
    """``cone(f)^n = K^{n+1} + L^n`` with ``d = [[-d_K, 0], [-f, d_L]]``."""
    K, L = f.source, f.target
    ring = K.ring
    lo = min(K.n0 - 1, L.n0)
    hi = max(K.support[1] - 1, L.support[1])
    dims, diffs = {}, {}
    for n in range(lo, hi + 1):
        dims[n] = K.dim(n + 1) + L.dim(n)
    for n in range(lo, hi):
        diffs[n] = Matrix.blocks(
            ring,
            [K.dim(n + 2), L.dim(n + 1)],
            [K.dim(n + 1), L.dim(n)],
            {(0, 0): -K.d(n + 1), (1, 0): -f.f(n + 1), (1, 1): L.d(n)},
        )
    return CochainComplex.build(ring, dims, diffs)


def induced_on_cohomology(f: ChainMap, n: int) -> Matrix:
    """Matrix of ``H^n(f)`` in the canonical generators of both cohomology groups."""
    return induced_matrix(f.f(n), f.source.cohomology_quotient(n), f.target.cohomology_quotient(n))


def is_quasi_iso(f: ChainMap) -> bool:
    return all(
        is_isomorphism(f.f(n), f.source.cohomology_quotient(n), f.target.cohomology_quotient(n))
        for n in f.degrees()
    )


def direct_sum(parts: Sequence[CochainComplex]) -> CochainComplex:
    ring = parts[0].ring
    degs = sorted({n for K in parts for n in K.degrees()})
    if not degs:
        return CochainComplex.zero(ring)
    dims = {n: sum(K.dim(n) for K in parts) for n in degs}
    diffs = {
        n: Matrix.blocks(ring, [K.dim(n + 1) for K in parts], [K.dim(n) for K in parts],
                         {(i, i): K.d(n) for i, K in enumerate(parts)})
        for n in degs
    }
    return CochainComplex.build(ring, dims, diffs)


def formal_complex(ring: Ring, ranks: Mapping[int, int] | Sequence[int]) -> CochainComplex:
    """Complex with zero differential and the given rank in each degree."""
    if not isinstance(ranks, Mapping):
        ranks = dict(enumerate(ranks))
    return CochainComplex.build(ring, ranks)
