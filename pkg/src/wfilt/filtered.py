"""Increasing filtrations on cochain complexes and Deligne's décalage.

A filtration is stored as explicit submodules ``W(p, n)`` of ``K^n`` for
``pmin <= p < pmax``; below ``pmin`` it is zero and from ``pmax`` on it is
everything. Steps need not be spanned by basis vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from .complexes import ChainMap, CochainComplex, ComplexError, shift
from .linalg import Matrix, Submodule, image, is_isomorphism, kernel, preimage

__all__ = [
    "FilteredComplex",
    "FilteredMap",
    "decalage",
    "canonical_filtration",
    "trivial_filtration",
    "translate",
    "reindex",
    "is_er_quasi_iso",
]


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    carrier: CochainComplex
    pmin: int
    pmax: int
    steps: dict = field(repr=False)

    def __post_init__(self):
        K = self.carrier
        if self.pmax < self.pmin:
            raise ComplexError("pmax < pmin")
        for (p, n), S in self.steps.items():
            if not self.pmin <= p < self.pmax:
                raise ComplexError(f"stored step W({p}, {n}) outside [{self.pmin}, {self.pmax})")
            if S.ambient != K.dim(n) or S.ring != K.ring:
                raise ComplexError(f"W({p}, {n}) lives in the wrong module")
        for n in K.degrees():
            for p in range(self.pmin - 1, self.pmax):
                if not self.W(p, n) <= self.W(p + 1, n):
                    raise ComplexError(f"W({p}, {n}) is not contained in W({p + 1}, {n})")
                if not image(K.d(n), self.W(p, n)) <= self.W(p, n + 1):
                    raise ComplexError(f"d({n}) does not preserve W({p})")

    @classmethod
    def from_function(cls, carrier: CochainComplex, pmin: int, pmax: int,
                      W: Callable[[int, int], Submodule]) -> "FilteredComplex":
        steps = {(p, n): W(p, n) for p in range(pmin, pmax) for n in carrier.degrees()}
        return cls(carrier, pmin, pmax, steps)

    @classmethod
    def from_levels(cls, carrier: CochainComplex, levels: Mapping[int, list[int]]) -> "FilteredComplex":
        """Basis-aligned filtration: basis vector ``i`` of ``K^n`` enters at ``levels[n][i]``."""
        ring = carrier.ring
        allv = [l for n in carrier.degrees() for l in levels[n]]
        if not allv:
            return trivial_filtration(carrier)
        pmin, pmax = min(allv), max(allv)

        def W(p, n):
            rows = [[1 if j == i else 0 for j in range(carrier.dim(n))]
                    for i, l in enumerate(levels[n]) if l <= p]
            return Submodule.span(ring, carrier.dim(n), rows)

        return cls.from_function(carrier, pmin, pmax, W)

    @property
    def ring(self):
        return self.carrier.ring

    def W(self, p: int, n: int) -> Submodule:
        dim = self.carrier.dim(n)
        if p < self.pmin:
            return Submodule.zero(self.ring, dim)
        if p >= self.pmax:
            return Submodule.full(self.ring, dim)
        return self.steps.get((p, n)) or Submodule.zero(self.ring, dim)

    def F(self, p: int, n: int) -> Submodule:
        """Decreasing convention ``F^p = W_{-p}``."""
        return self.W(-p, n)

    def same_as(self, other: "FilteredComplex") -> bool:
        """Equality of carriers and of every canonical step."""
        if self.carrier != other.carrier:
            return False
        lo, hi = min(self.pmin, other.pmin) - 1, max(self.pmax, other.pmax)
        return all(self.W(p, n) == other.W(p, n) for n in self.carrier.degrees() for p in range(lo, hi + 1))

    def __eq__(self, other):
        return isinstance(other, FilteredComplex) and self.same_as(other)

    def __hash__(self):
        return hash(self.carrier)

    def subcomplex(self, p: int) -> CochainComplex:
        """``W_p K`` as a complex in the basis given by the canonical generators."""
        K = self.carrier
        dims, diffs = {}, {}
        for n in K.degrees():
            dims[n] = self.W(p, n).rank
        for n in K.degrees():
            src, tgt = self.W(p, n), self.W(p, n + 1)
            rows = [tgt.coordinates(K.d(n).apply(g)) for g in src.gens]
            diffs[n] = Matrix.from_rows(K.ring, list(zip(*rows)), src.rank) if rows and tgt.rank \
                else Matrix.zero(K.ring, tgt.rank, src.rank)
        return CochainComplex.build(K.ring, dims, diffs)


@dataclass(frozen=True)
class FilteredMap:
    carrier: ChainMap
    source: FilteredComplex
    target: FilteredComplex

    def __post_init__(self):
        f = self.carrier
        if f.source != self.source.carrier or f.target != self.target.carrier:
            raise ComplexError("filtered map carrier does not match the filtered complexes")
        lo = min(self.source.pmin, self.target.pmin) - 1
        hi = max(self.source.pmax, self.target.pmax)
        for n in f.degrees():
            for p in range(lo, hi + 1):
                if not image(f.f(n), self.source.W(p, n)) <= self.target.W(p, n):
                    raise ComplexError(f"map does not respect W({p}) in degree {n}")

    def f(self, n: int) -> Matrix:
        return self.carrier.f(n)


def decalage(FK: FilteredComplex) -> FilteredComplex:
    """``(Dec W)_p K^n = W_{p-n} K^n  ∩  d^{-1}(W_{p-n-1} K^{n+1})``."""
    K = FK.carrier
    degs = list(K.degrees())
    if not degs:
        return FK
    pmin = min(FK.pmin + n for n in degs)
    pmax = max(FK.pmax + n + 1 for n in degs)

    def W(p, n):
        return FK.W(p - n, n) & preimage(K.d(n), FK.W(p - n - 1, n + 1))

    return FilteredComplex.from_function(K, pmin, pmax, W)


def canonical_filtration(K: CochainComplex) -> FilteredComplex:
    """``tau_{<=p} K = (... -> K^{p-1} -> ker d -> 0 -> ...)``."""
    degs = list(K.degrees())
    if not degs:
        return trivial_filtration(K)

    def W(p, n):
        if n < p:
            return Submodule.full(K.ring, K.dim(n))
        if n == p:
            return kernel(K.d(n))
        return Submodule.zero(K.ring, K.dim(n))

    return FilteredComplex.from_function(K, degs[0], degs[-1] + 1, W)


def trivial_filtration(K: CochainComplex) -> FilteredComplex:
    """``0 = W_{-1} ⊂ W_0 = K``."""
    return FilteredComplex(K, 0, 0, {})


def translate(FK: FilteredComplex, r: int) -> FilteredComplex:
    """``(K, W) -> (K[r], W(-r))`` where ``W(-r)_p K[r]^n = W_{p-r} K^{n+r}``."""
    K = shift(FK.carrier, r)
    steps = {(p + r, n - r): S for (p, n), S in FK.steps.items()}
    return FilteredComplex(K, FK.pmin + r, FK.pmax + r, steps)


def reindex(FK: FilteredComplex, k: int) -> FilteredComplex:
    """Same carrier with ``W'_p = W_{p+k}``."""
    steps = {(p - k, n): S for (p, n), S in FK.steps.items()}
    return FilteredComplex(FK.carrier, FK.pmin - k, FK.pmax - k, steps)


def is_er_quasi_iso(f: FilteredMap, r: int) -> bool:
    """Whether ``f`` induces an isomorphism on every cell of page ``r + 1``."""
    from .spectral import SpectralSequence

    if r < 0:
        raise ValueError("r must be nonnegative")
    src, tgt = f.source, f.target
    ss, st = SpectralSequence(src), SpectralSequence(tgt)
    prange = range(min(-src.pmax, -tgt.pmax), max(-src.pmin, -tgt.pmin) + 1)
    degs = sorted(set(src.carrier.degrees()) | set(tgt.carrier.degrees()))
    for n in degs:
        for p in prange:
            if not is_isomorphism(f.f(n), ss.quotient(r + 1, p, n), st.quotient(r + 1, p, n)):
                return False
    return True
