import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wfilt.checks import decalage_shift
from wfilt.complexes import ChainMap, CochainComplex, ComplexError, cohomology
from wfilt.filtered import (
    FilteredComplex,
    FilteredMap,
    canonical_filtration,
    decalage,
    is_er_quasi_iso,
    reindex,
    translate,
    trivial_filtration,
)
from wfilt.linalg import QQ, ZZ, Matrix, ModulePresentation, Submodule
from wfilt.randomized import random_aligned, random_filtered_complex
from wfilt.spaces import cochains, torus
from wfilt.spectral import (
    SpectralSequence,
    abutment_filtration,
    compose_is_zero,
    graded_discrepancies,
    recenter,
    stabilize,
)

rings = st.sampled_from(["Z", "Q"])


def _ring(name):
    return ZZ if name == "Z" else QQ


def _fk(seed, ring_name, **kw):
    return random_filtered_complex(_ring(ring_name), random.Random(seed), **kw)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), rings)
def test_next_page_is_cohomology_of_previous(seed, ring_name):
    FK = _fk(seed, ring_name, degrees=3, max_rank=3)
    ss = SpectralSequence(FK)
    for r in range(0, 3):
        line = ss.line(r)
        nxt = ss.page(r + 1)
        for n in FK.carrier.degrees():
            for p in ss.prange:
                assert line.cohomology(p, n).presentation == nxt.cell(p, n - p)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), rings)
def test_differentials_square_to_zero(seed, ring_name):
    FK = _fk(seed, ring_name)
    ss = SpectralSequence(FK)
    for r in range(0, 3):
        page = ss.page(r)
        for (p, q), d in page.d.items():
            second = page.d.get((p + r, q - r + 1))
            tgt = page.quotients.get((p + 2 * r, q - 2 * r + 2))
            if second is None or tgt is None:
                continue
            assert compose_is_zero(second, d, tgt.orders)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_abutment_matches_e_infinity_over_q(seed):
    FK = _fk(seed, "Q")
    r_stable, pages = stabilize(FK)
    assert r_stable <= SpectralSequence(FK).length + 1
    for n in FK.carrier.degrees():
        f = abutment_filtration(FK, n)
        assert graded_discrepancies(f, pages[r_stable]) == []
        assert f.total == cohomology(FK.carrier, n)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), rings)
def test_page_zero_is_associated_graded(seed, ring_name):
    A = random_aligned(_ring(ring_name), random.Random(seed), degrees=3, max_rank=3)
    K = CochainComplex.build(A.ring, dict(enumerate(A.dims)), A.diffs)
    if not K.dims:
        return
    FK = FilteredComplex.from_levels(K, {n: A.levels[n] for n in range(len(A.dims))})
    page = SpectralSequence(FK).page(0)
    for n in K.degrees():
        for level in set(A.levels[n]):
            assert page.cell(-level, n + level).free_rank == A.levels[n].count(level)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), rings, st.sampled_from([1, 2]))
def test_decalage_shifts_pages(seed, ring_name, r):
    FK = _fk(seed, ring_name, degrees=3, max_rank=4)
    assert decalage_shift(FK, r) == []


def test_decalage_check_detects_wrong_reindexing(monkeypatch):
    # an undecorated filtration is not page-shifted, so the check must object
    import wfilt.checks as checks

    monkeypatch.setattr(checks, "decalage", lambda F: F)
    for seed in (0, 1, 3):
        FK = random_filtered_complex(QQ, random.Random(seed), degrees=3, max_rank=4)
        assert checks.decalage_shift(FK, 1)


def test_decalage_of_trivial_filtration_is_canonical():
    K = cochains(torus(), QQ)
    D = decalage(trivial_filtration(K))
    C = canonical_filtration(K)
    for n in K.degrees():
        for p in range(-3, 4):
            assert D.W(p, n) == C.W(p, n)


def test_canonical_filtration_weights():
    K = cochains(torus(), ZZ)
    FK = canonical_filtration(K)
    for n in K.degrees():
        f = abutment_filtration(FK, n)
        assert list(f.nonzero_graded()) == [n]
        assert recenter(f, "L").support() == (2 * n, 2 * n)


def test_translate_and_reindex():
    FK = random_filtered_complex(ZZ, random.Random(11), degrees=3, max_rank=3)
    T = translate(FK, 2)
    R = reindex(FK, 1)
    ss, st_, sr = SpectralSequence(FK), SpectralSequence(T), SpectralSequence(R)
    for n in FK.carrier.degrees():
        for p in ss.prange:
            assert ss.quotient(1, p, n).presentation == st_.quotient(1, p - 2, n - 2).presentation
            assert ss.quotient(1, p, n).presentation == sr.quotient(1, p + 1, n).presentation


def _line(levels_by_degree, dims, diffs):
    K = CochainComplex.build(QQ, dims, {n: Matrix.from_rows(QQ, m, dims[n]) for n, m in diffs.items()})
    return FilteredComplex.from_levels(K, levels_by_degree)


def test_er_quasi_isomorphism_levels():
    src = _line({0: [0]}, {0: 1}, {})
    same_level = _line({0: [0, 0], 1: [0]}, {0: 2, 1: 1}, {0: [[0, 1]]})
    split_level = _line({0: [0, 1], 1: [0]}, {0: 2, 1: 1}, {0: [[0, 1]]})
    inc = Matrix.from_rows(QQ, [[1], [0]], 1)
    f = FilteredMap(ChainMap(src.carrier, same_level.carrier, {0: inc}), src, same_level)
    g = FilteredMap(ChainMap(src.carrier, split_level.carrier, {0: inc}), src, split_level)
    assert is_er_quasi_iso(f, 0)
    assert not is_er_quasi_iso(g, 0) and is_er_quasi_iso(g, 1)


def test_filtration_must_be_compatible():
    K = CochainComplex.build(QQ, {0: 1, 1: 1}, {0: Matrix.identity(QQ, 1)})
    with pytest.raises(ComplexError):
        FilteredComplex.from_levels(K, {0: [0], 1: [1]})
    with pytest.raises(ComplexError):
        FilteredComplex(K, 0, 2, {(0, 0): Submodule.full(QQ, 1), (1, 0): Submodule.zero(QQ, 1)})


def test_integral_torsion_page():
    # Z --2--> Z, both in filtration level 0: E_1 carries Z/2 in degree 1
    K = CochainComplex.build(ZZ, {0: 1, 1: 1}, {0: Matrix.from_rows(ZZ, [[2]], 1)})
    FK = FilteredComplex.from_levels(K, {0: [0], 1: [0]})
    assert SpectralSequence(FK).page(1).cell(0, 1) == ModulePresentation(0, (2,))
