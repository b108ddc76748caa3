"""Structural checks shared by the command line and the test suites.

Each check returns a list of human-readable mismatches; an empty list passes.
"""
from __future__ import annotations

from .cubical import CubicalDiagram, decalage_diagram, simple_of_pages, simple_r
from .descent import (
    GeneralWeightDatum,
    GysinAugmentation,
    ResolutionDatum,
    SquareCohomologyDatum,
    descent_acyclic_square,
    e2_compare,
    gysin_descent_acyclic,
    mayer_vietoris_check,
    singularity_ss,
    weight_compact,
)
from .filtered import FilteredComplex, decalage
from .linalg import Matrix, induced_matrix, is_isomorphism
from .spectral import SpectralSequence

__all__ = [
    "decalage_shift",
    "decalage_simple_exchange",
    "page_simple_exchange",
    "mayer_vietoris",
    "gysin_acyclic",
    "e2_independence",
    "compact_coincidence",
]


def _equal_mod(A: Matrix, B: Matrix, orders: list) -> bool:
    for i, (ra, rb) in enumerate(zip(A.data, B.data)):
        d = orders[i]
        for x, y in zip(ra, rb):
            diff = (x - y) % d if d else x - y
            if diff:
                return False
    return True


def decalage_shift(FK: FilteredComplex, r: int) -> list[str]:
    """``E_r^{p,q}(Dec K)`` against ``E_{r+1}^{p+n,-p}(K)`` through the identity of ``K``.

    Every cell must be identified isomorphically, and ``d_r`` of ``Dec K`` must
    match ``d_{r+1}`` of ``K`` under these identifications.
    """
    K = FK.carrier
    sd, sk = SpectralSequence(decalage(FK)), SpectralSequence(FK)
    out = []
    ident = {n: Matrix.identity(K.ring, K.dim(n)) for n in range(K.support[0] - 1, K.support[1] + 2)}
    transfer = {}

    def T(p, n):
        if (p, n) not in transfer:
            qd, qk = sd.quotient(r, p, n), sk.quotient(r + 1, p + n, n)
            iso = is_isomorphism(ident[n], qd, qk)
            M = induced_matrix(ident[n], qd, qk) if iso else None
            transfer[(p, n)] = (M, qd, qk, iso)
        return transfer[(p, n)]

    for n in K.degrees():
        for p in sd.prange:
            M, qd, qk, iso = T(p, n)
            if qd.presentation != qk.presentation or not iso:
                out.append(f"r={r} n={n}: E_r^({p},{n - p})(Dec) = {qd.presentation} "
                           f"vs E_{r + 1}^({p + n},{-p}) = {qk.presentation}")
                continue
            Mt, td, tk, _ = T(p + r, n + 1)
            if Mt is None:
                continue  # target cell mismatch is reported on its own
            dd = induced_matrix(K.d(n), qd, td)
            dk = induced_matrix(K.d(n), qk, tk)
            if not _equal_mod(Mt @ dd, dk @ M, tk.orders):
                out.append(f"r={r} n={n} p={p}: d_r of Dec does not match d_{r + 1}")
    return out


def decalage_simple_exchange(D: CubicalDiagram) -> list[str]:
    """``Dec(s_2 D)`` against ``s_1(Dec D)``, step by step."""
    left = decalage(simple_r(D, 2))
    right = simple_r(decalage_diagram(D), 1)
    if left.carrier != right.carrier:
        return ["carriers differ"]
    out = []
    lo, hi = min(left.pmin, right.pmin) - 1, max(left.pmax, right.pmax)
    for n in left.carrier.degrees():
        for p in range(lo, hi + 1):
            if left.W(p, n) != right.W(p, n):
                out.append(f"W({p}, {n}) differs")
    return out


def page_simple_exchange(D: CubicalDiagram, r: int) -> list[str]:
    """Cohomology of ``(E_r, d_r)`` of ``s_r(D)`` against that of ``s E_r(D)``."""
    line_total = SpectralSequence(simple_r(D, r)).line(r)
    line_pages = simple_of_pages(D, r)
    prange = range(min(line_total.prange.start, line_pages.prange.start),
                   max(line_total.prange.stop, line_pages.prange.stop))
    out = []
    for n in line_total.K.degrees():
        for p in prange:
            a = line_total.cohomology(p, n).presentation
            b = line_pages.cohomology(p, n).presentation
            if a != b:
                out.append(f"r={r} ({p},{n - p}): {a} vs {b}")
    return out


def mayer_vietoris(S: SquareCohomologyDatum) -> list[str]:
    out = [f"degree {k}: sequence not exact ({v})" for k, v in mayer_vietoris_check(S).items() if not v.exact]
    if not descent_acyclic_square(S, 1):
        out.append("augmented square is not E_1-acyclic")
    return out


def gysin_acyclic(D: GeneralWeightDatum, aug: GysinAugmentation | None) -> list[str]:
    if aug is None:
        return ["document carries no augmentation to check"]
    return [f"row {q}: augmentation is not a quasi-isomorphism"
            for q, ok in gysin_descent_acyclic(D, aug).items() if not ok]


def e2_independence(R1: ResolutionDatum, R2: ResolutionDatum) -> list[str]:
    return e2_compare(singularity_ss(R1), singularity_ss(R2)).differences


def compact_coincidence(R: ResolutionDatum) -> list[str]:
    return e2_compare(singularity_ss(R), weight_compact(R)).differences
