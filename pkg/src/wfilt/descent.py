"""Singularity and weight spectral sequences assembled from resolution and
compactification data, plus Mayer-Vietoris and blow-up oracles.

Chain-level assemblies (a cubical diagram of cochain complexes) compute every
page of the simple complex with its weight-shifted filtration. Page-level
assemblies (Gysin rows, or supplied ``E_1`` rows) stop at ``E_2`` and read the
filtration on cohomology from ``E_2``, assuming degeneration there.

Everything reported uses the cohomological indexing ``E^{p,q} => H^{p+q}``
and ``Gr_m H^n = E^{n-m, m}`` for the recentered filtration.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import ChainMap, ComplexError, cohomology, formal_complex, is_quasi_iso
from .cubical import (
    AugmentedDiagram,
    CubicalDiagram,
    augmentation_map,
    edges,
    is_descent_acyclic,
    simple,
    simple_r,
    vertices,
)
from .gysin import GysinDatum, gysin_complex, gysin_map
from .linalg import (
    Matrix,
    ModulePresentation,
    Quotient,
    Ring,
    Submodule,
    image,
    kernel,
)
from .spectral import (
    FiltrationOnCohomology,
    SpectralSequence,
    SSPage,
    abutment_filtration,
    graded_discrepancies,
    recenter,
    stabilize,
)

__all__ = [
    "ResolutionDatum",
    "PageLevelDatum",
    "GeneralWeightDatum",
    "SquareCohomologyDatum",
    "SpectralResult",
    "singularity_ss",
    "weight_compact",
    "weight_smooth",
    "weight_general",
    "mayer_vietoris_check",
    "blowup_synthesize",
    "square_to_augmented",
    "e2_compare",
    "filtration_bounds",
    "descent_acyclic_square",
    "GysinAugmentation",
    "gysin_descent_acyclic",
]


# ---------------------------------------------------------------------------
# data


@dataclass(frozen=True, eq=False)
class PageLevelDatum:
    """``E_1`` given by rows: ``rows[q]`` is the complex ``(E_1^{*,q}, d_1)``."""

    ring: Ring
    rows: dict

    def __post_init__(self):
        for q, K in self.rows.items():
            if K.ring != self.ring:
                raise ComplexError(f"row {q} is over the wrong ring")


@dataclass(frozen=True, eq=False)
class ResolutionDatum:
    """Chain-level (``diagram``, optionally augmented) or page-level (``rows``) resolution."""

    diagram: CubicalDiagram | None = None
    augmented: AugmentedDiagram | None = None
    page_level: PageLevelDatum | None = None

    def __post_init__(self):
        given = [x is not None for x in (self.diagram, self.page_level)]
        if sum(given) != 1:
            raise ComplexError("a resolution is either chain-level or page-level")
        if self.augmented is not None and self.augmented.diagram is not self.diagram:
            raise ComplexError("augmentation belongs to a different diagram")
        if self.diagram is not None and self.diagram.filtered:
            raise ComplexError("resolution vertices carry plain complexes (trivial filtrations)")

    @classmethod
    def from_augmented(cls, A: AugmentedDiagram) -> "ResolutionDatum":
        return cls(diagram=A.diagram, augmented=A)

    @property
    def ring(self) -> Ring:
        return self.diagram.ring if self.diagram is not None else self.page_level.ring

    @property
    def level(self) -> str:
        return "chain" if self.diagram is not None else "page"

    @classmethod
    def smooth(cls, ring: Ring, ranks: dict) -> "ResolutionDatum":
        """A smooth compact space resolves itself: one vertex carrying its cohomology."""
        K = formal_complex(ring, {n: r for n, r in ranks.items() if r})
        return cls(diagram=CubicalDiagram(ring, 0, {1: K}, {}))


@dataclass(frozen=True, eq=False)
class GeneralWeightDatum:
    """Cube of compactification data: ``at[alpha]`` a Gysin datum, ``edge[(alpha, beta)]``
    the datum of the restriction ``X_beta -> X_alpha``."""

    ring: Ring
    n: int
    at: dict
    edge: dict

    def __post_init__(self):
        if set(self.at) != set(vertices(self.n)):
            raise ComplexError("every vertex of the cube needs a Gysin datum")
        want = {(a, b) for a, b, _ in edges(self.n)}
        if set(self.edge) != want:
            raise ComplexError(f"edges must be exactly {sorted(want)}")
        for (a, b), M in self.edge.items():
            if M.target is not self.at[a] or M.source is not self.at[b]:
                raise ComplexError(f"edge {a}->{b} does not join the vertex data")
        self.row_diagram(0)

    def row_range(self) -> range:
        hi = max(G.row_range().stop for G in self.at.values())
        return range(0, hi)

    def row_diagram(self, q: int) -> CubicalDiagram:
        at = {a: gysin_complex(G, q) for a, G in self.at.items()}
        cof = {k: gysin_map(M, q) for k, M in self.edge.items()}
        return CubicalDiagram(self.ring, self.n, at, cof)


@dataclass(frozen=True, eq=False)
class SquareCohomologyDatum:
    """Cohomology of an acyclic square ``Y~ -> X~``, ``Y -> X`` with its pullbacks.

    Ranks are ``{degree: rank}``; ``f``: H(X) -> H(X~), ``i``: H(X) -> H(Y),
    ``j``: H(X~) -> H(Y~), ``g``: H(Y) -> H(Y~), each ``{degree: Matrix}``.
    """

    ring: Ring
    HX: dict
    HXt: dict
    HY: dict
    HYt: dict
    f: dict
    i: dict
    j: dict
    g: dict

    def __post_init__(self):
        for name, src, tgt in (("f", self.HX, self.HXt), ("i", self.HX, self.HY),
                               ("j", self.HXt, self.HYt), ("g", self.HY, self.HYt)):
            for k in self.degrees():
                M = self.map(name, k)
                if M.shape != (tgt.get(k, 0), src.get(k, 0)):
                    raise ComplexError(f"{name}* in degree {k} has shape {M.shape}")
        for k in self.degrees():
            if self.map("j", k) @ self.map("f", k) != self.map("g", k) @ self.map("i", k):
                raise ComplexError(f"square of pullbacks does not commute in degree {k}")

    def degrees(self) -> list[int]:
        ks = set()
        for h in (self.HX, self.HXt, self.HY, self.HYt):
            ks |= {k for k, r in h.items() if r}
        return sorted(ks)

    def map(self, name: str, k: int) -> Matrix:
        src, tgt = {"f": (self.HX, self.HXt), "i": (self.HX, self.HY),
                    "j": (self.HXt, self.HYt), "g": (self.HY, self.HYt)}[name]
        m = getattr(self, name).get(k)
        return m if m is not None else Matrix.zero(self.ring, tgt.get(k, 0), src.get(k, 0))


# ---------------------------------------------------------------------------
# results


@dataclass
class SpectralResult:
    """Output of an assembly.

    ``pages[r]`` are pages in cohomological indexing; ``filtrations[n]`` the
    recentered filtration on ``H^n``; ``level`` is ``"chain"`` or ``"page"``.
    """

    label: str
    rule: str
    level: str
    ring: Ring
    pages: dict
    filtrations: dict
    r_stable: int | None = None
    warnings: list = field(default_factory=list)

    @property
    def e2(self) -> SSPage:
        return self.pages[2]

    def graded(self, n: int) -> dict:
        f = self.filtrations.get(n)
        return f.nonzero_graded() if f else {}

    def graded_ranks(self, n: int) -> dict:
        return {m: g.free_rank for m, g in self.graded(n).items()}


def _row_pages(ring: Ring, rows: dict) -> tuple[SSPage, SSPage]:
    """``E_1`` from ``d_1`` rows, and ``E_2`` as their cohomology."""
    cells1, d1, cells2 = {}, {}, {}
    for q, K in rows.items():
        for p in K.degrees():
            if K.dim(p):
                cells1[(p, q)] = ModulePresentation(K.dim(p))
                d1[(p, q)] = K.d(p)
            h = cohomology(K, p)
            if not h.is_zero:
                cells2[(p, q)] = h
    return SSPage(1, cells1, d1), SSPage(2, cells2, {})


def _filtrations_from_e2(e2: SSPage, rule: str, expected: dict | None, ring: Ring) -> tuple[dict, list]:
    """Filtrations on ``H^n`` read off ``E_2`` (assuming degeneration there)."""
    by_n: dict = {}
    for (p, q), v in e2.cells.items():
        by_n.setdefault(p + q, {})[q] = v
    out, warnings = {}, []
    for n in sorted(by_n):
        graded = dict(sorted(by_n[n].items()))
        lo, hi = min(graded), max(graded)
        steps, acc = {}, ModulePresentation()
        for m in range(lo - 1, hi + 1):
            if m in graded:
                acc = acc + graded[m]
            steps[m] = acc
        total = acc if ring.is_field or all(not g.torsion for g in graded.values()) else None
        out[n] = FiltrationOnCohomology(n, total, graded, steps, offset=n, rule=rule)
    if expected:
        for n in sorted(set(expected) | set(out)):
            want = expected.get(n, ModulePresentation())
            if isinstance(want, int):
                want = ModulePresentation(want)
            got = out[n].total if n in out else ModulePresentation()
            if got is not None and got.free_rank != want.free_rank:
                warnings.append(f"H^{n}: E_2 total rank {got.free_rank} differs from the supplied rank "
                                f"{want.free_rank}; the spectral sequence does not degenerate at E_2")
    return out, warnings


def _chain_level(R: ResolutionDatum, label: str, rule: str) -> SpectralResult:
    FK = simple_r(R.diagram, 1)
    ss = SpectralSequence(FK)
    r_stable, pages = stabilize(FK, r_min=1, ss=ss)
    if 2 not in pages:
        pages[2] = ss.page(2)
    filt, warnings = {}, []
    einf = pages[r_stable]
    for n in FK.carrier.degrees():
        raw = abutment_filtration(FK, n)
        warnings += graded_discrepancies(raw, einf)
        filt[n] = recenter(raw, rule)
    return SpectralResult(label, rule, "chain", R.ring, pages, filt, r_stable, warnings)


def _page_level(ring: Ring, rows: dict, label: str, rule: str, expected=None) -> SpectralResult:
    e1, e2 = _row_pages(ring, rows)
    filt, warnings = _filtrations_from_e2(e2, rule, expected, ring)
    warnings = ["page-level assembly: filtration read from E_2 assuming degeneration"] + warnings
    return SpectralResult(label, rule, "page", ring, {1: e1, 2: e2}, filt, None, warnings)


# ---------------------------------------------------------------------------
# assemblies


def singularity_ss(R: ResolutionDatum) -> SpectralResult:
    """``E_1^{p,q} = (+)_{w(alpha) = p} H^q(X_alpha)`` converging to ``H^{p+q}(X)`` with ``L``."""
    if R.level == "chain":
        return _chain_level(R, "singularity", "L")
    return _page_level(R.ring, R.page_level.rows, "singularity", "L")


def weight_compact(R: ResolutionDatum) -> SpectralResult:
    """Weight spectral sequence of a compact space: same complex, ``W`` labels."""
    if R.level == "chain":
        return _chain_level(R, "weight", "W")
    return _page_level(R.ring, R.page_level.rows, "weight", "W")


def weight_smooth(G: GysinDatum, expected_H: dict | None = None) -> SpectralResult:
    """Rows of ``E_1`` are the Gysin complexes; weight ``m`` on ``H^n`` is ``E_2^{n-m, m}``."""
    rows = {q: gysin_complex(G, q) for q in G.row_range()}
    return _page_level(G.ring, rows, "weight", "W", expected_H)


def weight_general(D: GeneralWeightDatum, expected_H: dict | None = None) -> SpectralResult:
    """Rows are simple complexes of the cube of Gysin rows along the restriction maps."""
    rows = {q: simple(D.row_diagram(q)) for q in D.row_range()}
    return _page_level(D.ring, rows, "weight", "W", expected_H)


# ---------------------------------------------------------------------------
# squares


@dataclass
class MVVerdict:
    degree: int
    injective: bool
    middle_exact: bool
    surjective: bool

    @property
    def exact(self) -> bool:
        return self.injective and self.middle_exact and self.surjective


def mayer_vietoris_check(S: SquareCohomologyDatum) -> dict:
    """Exactness of ``0 -> H(X) -> H(X~) + H(Y) -> H(Y~) -> 0`` per degree.

    The maps are ``x -> (f* x, -i* x)`` and ``(a, b) -> j* a + g* b``.
    """
    ring = S.ring
    out = {}
    for k in S.degrees():
        nx, nxt, ny, nyt = (h.get(k, 0) for h in (S.HX, S.HXt, S.HY, S.HYt))
        A = Matrix.blocks(ring, [nxt, ny], [nx], {(0, 0): S.map("f", k), (1, 0): -S.map("i", k)})
        B = Matrix.blocks(ring, [nyt], [nxt, ny], {(0, 0): S.map("j", k), (0, 1): S.map("g", k)})
        out[k] = MVVerdict(
            k,
            kernel(A).rank == 0,
            kernel(B) == image(A),
            image(B) == Submodule.full(ring, nyt),
        )
    return out


def square_to_augmented(S: SquareCohomologyDatum) -> AugmentedDiagram:
    """Formal (zero-differential) augmented square ``X -> {X~, Y} -> Y~``."""
    ring = S.ring

    def formal(h):
        return formal_complex(ring, {k: r for k, r in h.items() if r})

    X, Xt, Y, Yt = formal(S.HX), formal(S.HXt), formal(S.HY), formal(S.HYt)

    def chain(src, tgt, name):
        return ChainMap(src, tgt, {k: S.map(name, k) for k in S.degrees()
                                   if S.map(name, k).shape == (tgt.dim(k), src.dim(k))})

    D = CubicalDiagram(ring, 1, {1: Xt, 2: Y, 3: Yt}, {(1, 3): chain(Xt, Yt, "j"), (2, 3): chain(Y, Yt, "g")})
    return AugmentedDiagram(X, D, {1: chain(X, Xt, "f"), 2: chain(X, Y, "i")})


def _ranks(h) -> dict:
    return {k: (v.free_rank if isinstance(v, ModulePresentation) else int(v)) for k, v in h.items()}


def blowup_synthesize(HX: dict, HY: dict, m: int, chern_action: dict | None = None,
                      restrict: dict | None = None, gysin: dict | None = None, ring: Ring | None = None
                      ) -> SquareCohomologyDatum:
    """Cohomology square of the blow-up of ``X`` along ``Y`` of codimension ``m``.

    ``H(Y~) = (+)_{j<m} H(Y) zeta^j`` with ``zeta^m = -sum_{i>=1} c_i zeta^{m-i}``
    and ``H^q(X~)`` the cokernel of ``H^{q-2m}(Y) -> H^{q-2}(Y~) + H^q(X)``,
    ``y -> (c_{m-1}(E) y, -i_* y)`` with ``c_{m-1}(E) = sum_i c_i zeta^{m-1-i}``.

    ``chern_action[i][k]``: ``H^k(Y) -> H^{k+2i}(Y)`` (``c_i`` of the normal
    bundle, ``1 <= i <= m``, default zero); ``restrict[k]``: ``i*`` (default:
    identity on ``H^0`` when both have rank one); ``gysin[k]``:
    ``i_*: H^k(Y) -> H^{k+2m}(X)`` (default: ``H^0(Y)`` onto the generator of
    ``H^{2m}(X)`` when that has rank one).
    """
    from .linalg import ZZ

    ring = ring or ZZ
    if m < 1:
        raise ComplexError("codimension must be at least 1")
    HX, HY = _ranks(HX), _ranks(HY)
    chern_action = chern_action or {}
    for i, maps in chern_action.items():
        if not 1 <= i <= m:
            raise ComplexError(f"Chern class index {i} outside 1..{m}")
        for k, M in maps.items():
            if M.shape != (HY.get(k + 2 * i, 0), HY.get(k, 0)):
                raise ComplexError(f"c_{i} action in degree {k} has shape {M.shape}")

    def hx(k):
        return HX.get(k, 0)

    def hy(k):
        return HY.get(k, 0)

    def c(i, k) -> Matrix:
        if i == 0:
            return Matrix.identity(ring, hy(k))
        M = chern_action.get(i, {}).get(k)
        return M if M is not None else Matrix.zero(ring, hy(k + 2 * i), hy(k))

    def istar(k) -> Matrix:
        if restrict and k in restrict:
            return restrict[k]
        if k == 0 and hx(0) == 1 and hy(0) == 1:
            return Matrix.identity(ring, 1)
        return Matrix.zero(ring, hy(k), hx(k))

    def ilower(k) -> Matrix:
        if gysin and k in gysin:
            return gysin[k]
        if k == 0 and hy(0) == 1 and hx(2 * m) == 1:
            return Matrix.identity(ring, 1)
        return Matrix.zero(ring, hx(k + 2 * m), hy(k))

    def yt_blocks(q):
        return [hy(q - 2 * j) for j in range(m)]

    HYt = {q: sum(yt_blocks(q)) for q in range(0, max(list(HY) + [0]) + 2 * m)}
    HYt = {q: r for q, r in HYt.items() if r}

    def zeta(q) -> Matrix:
        """Multiplication by ``zeta``: ``H^q(Y~) -> H^{q+2}(Y~)``."""
        parts = {}
        for j in range(m - 1):
            parts[(j + 1, j)] = Matrix.identity(ring, hy(q - 2 * j))
        for i in range(1, m + 1):
            parts[(m - i, m - 1)] = -c(i, q - 2 * (m - 1))
        return Matrix.blocks(ring, yt_blocks(q + 2), yt_blocks(q), parts)

    def g_up(q) -> Matrix:
        return Matrix.blocks(ring, yt_blocks(q), [hy(q)], {(0, 0): Matrix.identity(ring, hy(q))})

    def relation(q) -> Matrix:
        """``H^{q-2m}(Y) -> H^{q-2}(Y~) + H^q(X)``."""
        k = q - 2 * m
        parts = {(m - 1 - i, 0): c(i, k) for i in range(m)}
        top = Matrix.blocks(ring, yt_blocks(q - 2), [hy(k)], parts)
        return Matrix.blocks(ring, [top.rows, hx(q)], [hy(k)], {(0, 0): top, (1, 0): -ilower(k)})

    qmax = max(list(HX) + [q + 2 for q in HYt] + [0])
    HXt, f, i_maps, j_maps, g_maps = {}, {}, {}, {}, {}
    for q in range(0, qmax + 1):
        R = relation(q)
        amb = R.rows
        if amb == 0:
            continue
        Q = Quotient(Submodule.full(ring, amb), image(R))
        if Q.presentation.torsion:
            raise ComplexError(f"H^{q} of the blow-up would have torsion; check the Gysin data")
        n = Q.ngens
        split = sum(yt_blocks(q - 2))
        HXt[q] = n
        lifts = Q.basis_lifts()
        # f*: x -> class of (0, x)
        cols = [Q.coords((0,) * split + tuple(int(t == s) for t in range(hx(q)))) for s in range(hx(q))]
        f[q] = _from_cols(ring, cols, n, hx(q))
        # j*: class of (a, x) -> -zeta a + g* i* x
        jz = zeta(q - 2) if split else Matrix.zero(ring, sum(yt_blocks(q)), 0)
        gi = g_up(q) @ istar(q)
        jcols = []
        for v in lifts:
            a, x = v[:split], v[split:]
            jcols.append(tuple(ring(-s + t) for s, t in zip(jz.apply(a), gi.apply(x))))
        j_maps[q] = _from_cols(ring, jcols, sum(yt_blocks(q)), n)
        for y in image(R).gens:
            a, x = y[:split], y[split:]
            val = [ring(-s + t) for s, t in zip(jz.apply(a), gi.apply(x))]
            if any(val):
                raise ComplexError(f"restriction to the exceptional divisor is not well defined in degree {q}; "
                                   "the self-intersection i* i_* must equal c_m")
    for q in set(HX) | set(HY) | set(HYt):
        i_maps[q] = istar(q)
        g_maps[q] = g_up(q)
    HXt = {q: r for q, r in HXt.items() if r}
    return SquareCohomologyDatum(ring, dict(HX), HXt, dict(HY), HYt, f, i_maps, j_maps, g_maps)


def _from_cols(ring: Ring, cols: list, rows: int, ncols: int) -> Matrix:
    if not rows or not ncols:
        return Matrix.zero(ring, rows, ncols)
    return Matrix.from_rows(ring, [list(r) for r in zip(*cols)], ncols)


# ---------------------------------------------------------------------------
# comparisons and bounds


@dataclass
class Comparison:
    equal: bool
    differences: list

    def __bool__(self) -> bool:
        return self.equal


def e2_compare(A: SpectralResult, B: SpectralResult) -> Comparison:
    """Equality of ``E_2`` cells and of the recentered filtrations on cohomology."""
    diffs = []
    if A.ring != B.ring:
        return Comparison(False, [f"rings differ: {A.ring} vs {B.ring}"])
    ca, cb = A.e2.nonzero_cells(), B.e2.nonzero_cells()
    for key in sorted(set(ca) | set(cb)):
        x, y = ca.get(key, ModulePresentation()), cb.get(key, ModulePresentation())
        if x != y:
            diffs.append(f"E_2^{key}: {x.describe(A.ring)} vs {y.describe(B.ring)}")
    for n in sorted(set(A.filtrations) | set(B.filtrations)):
        ga, gb = A.graded(n), B.graded(n)
        if ga != gb:
            diffs.append(f"Gr H^{n}: {_fmt(ga, A.ring)} vs {_fmt(gb, B.ring)}")
    return Comparison(not diffs, diffs)


def _fmt(graded: dict, ring: Ring) -> str:
    return "{" + ", ".join(f"{m}: {g.describe(ring)}" for m, g in graded.items()) + "}"


def filtration_bounds(result: SpectralResult) -> list[str]:
    """Violations of ``0 = F_{-1} <= F_0 <= ... <= F_top = H^n`` (``top = n`` for L, ``2n`` for W)."""
    problems = []
    for n, f in result.filtrations.items():
        top = n if result.rule == "L" else 2 * n
        for m in f.nonzero_graded():
            if m < 0 or m > top:
                problems.append(f"H^{n}: graded piece in index {m} outside [0, {top}]")
        if f.total is not None and f.steps:
            if f.step(-1) is not None and not f.step(-1).is_zero:
                problems.append(f"H^{n}: step -1 is nonzero")
            if f.step(top) != f.total:
                problems.append(f"H^{n}: step {top} is {f.step(top)} but H^{n} is {f.total}")
    return problems


def descent_acyclic_square(S: SquareCohomologyDatum, r: int = 1) -> bool:
    return is_descent_acyclic(square_to_augmented(S), r)


@dataclass(eq=False)
class GysinAugmentation:
    """Morphism data from every singleton vertex of a ``GeneralWeightDatum`` to a ``base`` datum."""

    base: GysinDatum
    maps: dict

    def __post_init__(self):
        for i, M in self.maps.items():
            if M.target is not self.base:
                raise ComplexError(f"augmentation into vertex {i} does not start at the base")


def gysin_descent_acyclic(D: GeneralWeightDatum, aug: GysinAugmentation) -> dict:
    """``{q: bool}``: whether ``G^q(base) -> s(G^q(D))`` is a quasi-isomorphism on each row.

    On a 0-cube this is the acyclicity of the cone of a single Gysin morphism;
    on a square it is the acyclicity of the total complex of the augmented square.
    """
    for i, M in aug.maps.items():
        if M.source is not D.at.get(i):
            raise ComplexError(f"augmentation into vertex {i} does not end at that vertex")
    rows = range(0, max(D.row_range().stop, aug.base.row_range().stop))
    out = {}
    for q in rows:
        A = AugmentedDiagram(gysin_complex(aug.base, q), D.row_diagram(q),
                             {i: gysin_map(M, q) for i, M in aug.maps.items()})
        out[q] = is_quasi_iso(augmentation_map(A))
    return out
