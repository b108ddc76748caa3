"""Spectral sequence of a filtered complex, computed page by page with exact
submodule arithmetic.

Internally the filtration is decreasing, ``F^p = W_{-p}``, and

    Z_r^p(n) = F^p K^n  ∩  d^{-1}(F^{p+r} K^{n+1})
    B_r^p(n) = Z_{r-1}^{p+1}(n) + d(Z_{r-1}^{p-r+1}(n-1))
    E_r^{p,q} = Z_r^p(p+q) / B_r^p(p+q)

with ``d_r: E_r^{p,q} -> E_r^{p+r,q-r+1}`` induced by ``d``. Cells are keyed
by ``(p, q)`` in this decreasing convention, which is the indexing used when
reporting both the singularity and weight spectral sequences.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .filtered import FilteredComplex
from .linalg import (
    Matrix,
    ModulePresentation,
    Quotient,
    Submodule,
    image,
    induced_matrix,
    kernel,
    preimage,
)

__all__ = [
    "SpectralSequence",
    "SSPage",
    "FiltrationOnCohomology",
    "page",
    "page_quotients",
    "stabilize",
    "abutment_filtration",
    "recenter",
    "compose_is_zero",
    "SubquotientLine",
]


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("WFILT_THREADS", "1")))
    except ValueError:
        return 1


def compose_is_zero(second: Matrix, first: Matrix, orders: list) -> bool:
    """Whether ``second @ first`` vanishes in a target with generator ``orders``."""
    if first.cols == 0 or second.rows == 0:
        return True
    prod = second @ first
    for i, row in enumerate(prod.data):
        d = orders[i]
        for x in row:
            if (x % d if d else x) != 0:
                return False
    return True


@dataclass
class SSPage:
    r: int
    cells: dict
    d: dict = field(repr=False)
    quotients: dict = field(repr=False, default_factory=dict)

    def cell(self, p: int, q: int) -> ModulePresentation:
        return self.cells.get((p, q), ModulePresentation())

    def nonzero_cells(self) -> dict:
        return {k: v for k, v in sorted(self.cells.items()) if not v.is_zero}

    def differentials_vanish(self) -> bool:
        return all(m.is_zero() or self._reduced_zero(k, m) for k, m in self.d.items())

    def _reduced_zero(self, key, m: Matrix) -> bool:
        p, q = key
        tgt = self.quotients.get((p + self.r, q - self.r + 1))
        if tgt is None:
            return m.is_zero()
        orders = tgt.orders
        return all((x % orders[i] if orders[i] else x) == 0 for i, row in enumerate(m.data) for x in row)

    def total_degree(self, n: int) -> dict:
        return {(p, q): v for (p, q), v in self.cells.items() if p + q == n}


class SpectralSequence:
    """Lazy cache of ``Z``, ``B`` and page quotients for one filtered complex."""

    def __init__(self, FK: FilteredComplex):
        self.FK = FK
        self.K = FK.carrier
        self._Z: dict = {}
        self._B: dict = {}
        self._Q: dict = {}
        self._pre: dict = {}

    @property
    def prange(self) -> range:
        return range(-self.FK.pmax, -self.FK.pmin + 1)

    @property
    def length(self) -> int:
        """Pages from ``r = length + 1`` on have vanishing differentials."""
        return self.FK.pmax - self.FK.pmin

    def Z(self, r: int, p: int, n: int) -> Submodule:
        key = (r, p, n)
        if key not in self._Z:
            # the preimage depends on p + r only, and is shared across pages
            pre = self._pre.get((p + r, n))
            if pre is None:
                pre = self._pre[(p + r, n)] = preimage(self.K.d(n), self.FK.F(p + r, n + 1))
            self._Z[key] = self.FK.F(p, n) & pre
        return self._Z[key]

    def B(self, r: int, p: int, n: int) -> Submodule:
        key = (r, p, n)
        if key not in self._B:
            inner = image(self.K.d(n - 1), self.Z(r - 1, p - r + 1, n - 1))
            self._B[key] = self.Z(r - 1, p + 1, n) + inner
        return self._B[key]

    def quotient(self, r: int, p: int, n: int) -> Quotient:
        key = (r, p, n)
        if key not in self._Q:
            self._Q[key] = Quotient(self.Z(r, p, n), self.B(r, p, n))
        return self._Q[key]

    def page(self, r: int, workers: int | None = None) -> SSPage:
        if r < 0:
            raise ValueError("page index must be nonnegative")
        keys = [(p, n) for n in self.K.degrees() for p in self.prange]
        workers = workers or _workers()
        if workers > 1 and len(keys) > 1:
            with ThreadPoolExecutor(workers) as ex:
                list(ex.map(lambda k: self.quotient(r, k[0], k[1]), keys))
        cells, d, quots = {}, {}, {}
        for p, n in keys:
            Q = self.quotient(r, p, n)
            cells[(p, n - p)] = Q.presentation
            quots[(p, n - p)] = Q
        for p, n in keys:
            src = quots[(p, n - p)]
            tkey = (p + r, n + 1 - (p + r))
            tgt = quots.get(tkey) or self.quotient(r, p + r, n + 1)
            quots.setdefault(tkey, tgt)
            d[(p, n - p)] = induced_matrix(self.K.d(n), src, tgt)
        return SSPage(r, cells, d, quots)


    def line(self, r: int) -> "SubquotientLine":
        """``(E_r, d_r)`` as a subquotient complex of the carrier."""
        return SubquotientLine(self.K, r, lambda p, n: self.Z(r, p, n), lambda p, n: self.B(r, p, n), self.prange)


class SubquotientLine:
    """Subquotients ``Z(p, n) / B(p, n)`` of a complex ``K`` on which ``d`` has
    bidegree ``(r, 1 - r)`` in ``(p, n - p)``.
    """

    def __init__(self, K, r: int, Z, B, prange: range):
        self.K, self.r, self.Z, self.B, self.prange = K, r, Z, B, prange

    def term(self, p: int, n: int) -> Quotient:
        return Quotient(self.Z(p, n), self.B(p, n))

    def cohomology(self, p: int, n: int) -> Quotient:
        d, r = self.K.d, self.r
        cyc = self.Z(p, n) & preimage(d(n), self.B(p + r, n + 1))
        bnd = image(d(n - 1), self.Z(p - r, n - 1)) + self.B(p, n)
        return Quotient(cyc, bnd)

    def cells(self) -> dict:
        """Cohomology presentations keyed by ``(p, q)``."""
        return {(p, n - p): self.cohomology(p, n).presentation
                for n in self.K.degrees() for p in self.prange}


def page_quotients(FK: FilteredComplex, r: int, p: int, n: int) -> Quotient:
    return SpectralSequence(FK).quotient(r, p, n)


def page(FK: FilteredComplex, r: int) -> SSPage:
    return SpectralSequence(FK).page(r)


def stabilize(FK: FilteredComplex, r_min: int = 0, ss: SpectralSequence | None = None):
    """Least ``r >= r_min`` from which every differential vanishes, with that page.

    Returns ``(r_stable, pages)`` where ``pages`` maps each computed ``r`` to its
    page; ``pages[r_stable]`` is ``E_infinity``.
    """
    ss = ss or SpectralSequence(FK)
    top = max(r_min, ss.length + 1)
    pages = {r: ss.page(r) for r in range(r_min, top + 1)}
    r_stable = top
    for r in range(top, r_min - 1, -1):
        if not pages[r].differentials_vanish():
            break
        r_stable = r
    return r_stable, pages


@dataclass
class FiltrationOnCohomology:
    """Increasing filtration on ``H^n`` through its graded pieces.

    ``graded[s]`` is ``Gr_s``; ``steps[s]`` (when known) presents the step
    itself. ``offset`` is the amount already added to the raw indices
    (``n`` after recentering).
    """

    n: int
    total: ModulePresentation | None
    graded: dict
    steps: dict = field(default_factory=dict)
    offset: int = 0
    rule: str | None = None

    def nonzero_graded(self) -> dict:
        return {s: g for s, g in sorted(self.graded.items()) if not g.is_zero}

    def support(self) -> tuple[int, int] | None:
        nz = list(self.nonzero_graded())
        return (nz[0], nz[-1]) if nz else None

    def is_pure(self, weight: int | None = None) -> bool:
        nz = list(self.nonzero_graded())
        if len(nz) > 1:
            return False
        return weight is None or not nz or nz[0] == weight

    def ranks(self) -> dict:
        return {s: g.free_rank for s, g in self.nonzero_graded().items()}

    def step(self, s: int) -> ModulePresentation | None:
        if not self.steps:
            return None
        keys = sorted(self.steps)
        if s < keys[0]:
            return ModulePresentation()
        if s > keys[-1]:
            return self.steps[keys[-1]]
        return self.steps[s]


def abutment_filtration(FK: FilteredComplex, n: int) -> FiltrationOnCohomology:
    """``W'_s H^n = image(H^n(W_s K) -> H^n(K))``, with graded pieces."""
    K = FK.carrier
    Zn = kernel(K.d(n))
    Bn = image(K.d(n - 1))
    total = Quotient(Zn, Bn).presentation
    S = {s: (FK.W(s, n) & Zn) + Bn for s in range(FK.pmin - 1, FK.pmax + 1)}
    steps = {s: Quotient(S[s], Bn).presentation for s in S}
    graded = {s: Quotient(S[s], S[s - 1]).presentation for s in range(FK.pmin, FK.pmax + 1)}
    return FiltrationOnCohomology(n, total, graded, steps)


def recenter(f: FiltrationOnCohomology, rule: str = "W") -> FiltrationOnCohomology:
    """``L_p H^n := L'_{p-n}`` (and the same for ``W``): every index moves up by ``n``."""
    if rule not in ("L", "W"):
        raise ValueError("rule must be 'L' or 'W'")
    k = f.n
    return FiltrationOnCohomology(
        f.n,
        f.total,
        {s + k: g for s, g in f.graded.items()},
        {s + k: g for s, g in f.steps.items()},
        f.offset + k,
        rule,
    )


def einf_graded(einf: SSPage, n: int) -> dict:
    """``E_inf`` cells on total degree ``n`` keyed by increasing index ``s = -p``."""
    return {-p: v for (p, q), v in einf.cells.items() if p + q == n}


def graded_discrepancies(f: FiltrationOnCohomology, einf: SSPage) -> list[str]:
    """Differences between abutment graded pieces and ``E_inf`` (possible over ZZ)."""
    raw = {s - f.offset: g for s, g in f.graded.items()}
    cells = einf_graded(einf, f.n)
    out = []
    for s in sorted(set(raw) | set(cells)):
        a = raw.get(s, ModulePresentation())
        b = cells.get(s, ModulePresentation())
        if a != b:
            out.append(f"H^{f.n}: Gr_{s + f.offset} = {a} but E_inf^{(-s, f.n + s)} = {b}")
    return out
