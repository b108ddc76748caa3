"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (collected in the pytest
summary as well). Run directly with ``python3 tests/test_acceptance.py`` to
see only those lines.
"""
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from conftest import DOCUMENTS  # noqa: E402

from wfilt.checks import (  # noqa: E402
    compact_coincidence,
    decalage_shift,
    decalage_simple_exchange,
    e2_independence,
    gysin_acyclic,
    mayer_vietoris,
    page_simple_exchange,
)
from wfilt.cubical import simple_r  # noqa: E402
from wfilt.descent import (  # noqa: E402
    ResolutionDatum,
    blowup_synthesize,
    filtration_bounds,
    singularity_ss,
    weight_compact,
    weight_general,
    weight_smooth,
)
from wfilt.gysin import GysinDatum  # noqa: E402
from wfilt.linalg import QQ, ZZ  # noqa: E402
from wfilt.randomized import random_diagram, random_filtered_complex  # noqa: E402
from wfilt.serialize import load  # noqa: E402
from wfilt.spectral import abutment_filtration, graded_discrepancies, stabilize  # noqa: E402

LINES = []


def _doc(name):
    return load(DOCUMENTS / f"{name}.json")


def _ranks(res, n):
    return res.graded_ranks(n)


def _record(number, title, problems, started):
    status = "PASS" if not problems else "FAIL"
    line = f"{status} criterion {number:>2}: {title} ({time.perf_counter() - started:.1f}s)"
    if problems:
        line += "\n    " + "\n    ".join(problems[:8])
    LINES.append(line)
    print(line)
    assert not problems, problems


def _expect(problems, label, got, want):
    if got != want:
        problems.append(f"{label}: got {got}, expected {want}")


def test_criterion_01_nodal_punctured_torus():
    t0, problems = time.perf_counter(), []
    for name in ("nodal_punctured_torus", "nodal_punctured_torus_zz"):
        res = singularity_ss(_doc(name).payload)
        _expect(problems, f"{name} Gr^L H^1", _ranks(res, 1), {0: 1, 1: 3})
        torsion = {m: g.torsion for m, g in res.graded(1).items() if g.torsion}
        _expect(problems, f"{name} torsion", torsion, {})
    _record(1, "nodal punctured torus, Gr^L H^1 = (1, 3) over Q and Z", problems, t0)


def test_criterion_02_node_times_cstar():
    t0, problems = time.perf_counter(), []
    w = weight_general(_doc("node_times_cstar_weight").payload)
    _expect(problems, "Gr^W H^1", _ranks(w, 1), {0: 1, 2: 1})
    _expect(problems, "Gr^W_2 H^2", _ranks(w, 2).get(2), 2)
    s = singularity_ss(_doc("node_times_cstar_singularity").payload)
    _expect(problems, "Gr^L H^2", _ranks(s, 2), {1: 1, 2: 1})
    _record(2, "node x C*, weight and singularity filtrations", problems, t0)


def test_criterion_03_compactification_dependence():
    t0, problems = time.perf_counter(), []
    a = weight_smooth(_doc("cstar_cstar_p1xp1").payload)
    b = weight_smooth(_doc("cstar_cstar_bundle").payload)
    _expect(problems, "P1xP1 Gr^W H^1", _ranks(a, 1), {2: 2})
    _expect(problems, "bundle Gr^W H^1", _ranks(b, 1), {1: 2})
    if _ranks(a, 1) == _ranks(b, 1):
        problems.append("the two compactifications agree")
    _record(3, "C* x C*: pure weight 2 vs pure weight 1", problems, t0)


def test_criterion_04_real_mode():
    t0, problems = time.perf_counter(), []
    _expect(problems, "punctured plane Gr^W H^1", _ranks(weight_smooth(_doc("real_punctured_plane").payload), 1), {2: 1})
    _expect(problems, "cylinder Gr^W H^1", _ranks(weight_smooth(_doc("real_cylinder").payload), 1), {1: 1})
    _record(4, "real Z/2 weights: plane minus point 2, cylinder 1", problems, t0)


def test_criterion_05_decalage_shift():
    t0, problems = time.perf_counter(), []
    for seed in range(200):
        ring = (QQ, ZZ)[seed % 2]
        FK = random_filtered_complex(ring, random.Random(seed), degrees=3, max_rank=6, levels=(0, 1, 2))
        for r in (1, 2):
            problems += [f"seed {seed} over {ring}: {p}" for p in decalage_shift(FK, r)]
    _record(5, "decalage shifts pages on 200 random filtered complexes", problems, t0)


def test_criterion_06_decalage_simple_exchange():
    t0, problems = time.perf_counter(), []
    for seed in range(100):
        ring = (QQ, ZZ)[seed % 2]
        D = random_diagram(ring, random.Random(seed), n=1)
        problems += [f"seed {seed}: {p}" for p in decalage_simple_exchange(D)]
    _record(6, "Dec(s_2 D) = s_1(Dec D) on 100 random squares", problems, t0)


def test_criterion_07_page_simple_exchange():
    t0, problems = time.perf_counter(), []
    for seed in range(100):
        ring = (QQ, ZZ)[seed % 2]
        D = random_diagram(ring, random.Random(1000 + seed), n=1)
        for r in (0, 1):
            problems += [f"seed {seed}: {p}" for p in page_simple_exchange(D, r)]
    _record(7, "H(E_r s_r D) = H(s E_r D), r = 0, 1, on 100 random squares", problems, t0)


def test_criterion_08_mayer_vietoris_and_gysin_descent():
    t0, problems = time.perf_counter(), []
    models = {"P2": {0: 1, 2: 1, 4: 1}, "P1xP1": {0: 1, 2: 2, 4: 1}, "S2": {0: 1, 2: 1}}
    for label, HX in models.items():
        for m in (1, 2, 3):
            for ring in (QQ, ZZ):
                S = blowup_synthesize(HX, {0: 1}, m, ring=ring)
                problems += [f"{label} m={m} {ring}: {p}" for p in mayer_vietoris(S)]
    for name in ("blowup_interior_square", "blowup_boundary_square"):
        doc = _doc(name)
        problems += [f"{name}: {p}" for p in gysin_acyclic(doc.payload, doc.extra)]
    _record(8, "Mayer-Vietoris on the blow-up grid; golden Gysin squares acyclic", problems, t0)


def test_criterion_09_e2_independence():
    t0 = time.perf_counter()
    problems = e2_independence(_doc("nodal_punctured_torus").payload,
                               _doc("nodal_punctured_torus_blown_up").payload)
    _record(9, "E_2 of the singularity sequence is resolution independent", problems, t0)


def test_criterion_10_compact_coincidence():
    t0, problems = time.perf_counter(), []
    for name in ("nodal_sphere", "two_sphere_cycle"):
        problems += [f"{name}: {p}" for p in compact_coincidence(_doc(name).payload)]
    _record(10, "singularity and weight filtrations agree on compact spaces", problems, t0)


def _smooth_problems(name, G):
    out = []
    res = weight_smooth(G)
    out += [f"{name} W: {p}" for p in filtration_bounds(res)]
    for n, f in res.filtrations.items():
        out += [f"{name}: H^{n} weight {m} outside [{n}, {2 * n}]" for m in f.nonzero_graded() if not n <= m <= 2 * n]
    ranks = {n: f.total.free_rank for n, f in res.filtrations.items()}
    L = singularity_ss(ResolutionDatum.smooth(G.ring, ranks))
    out += [f"{name} L: {p}" for p in filtration_bounds(L)]
    for n, f in L.filtrations.items():
        if any(m != n for m in f.nonzero_graded()):
            out.append(f"{name}: L on H^{n} is not trivial")
    X = weight_smooth(GysinDatum(G.ring, 0, {0: G.strata[0]}, {}, mode=G.mode))
    for n, f in X.filtrations.items():
        if any(m != n for m in f.nonzero_graded()):
            out.append(f"{name}: W on H^{n} of the compactification is not pure")
    return out


def test_criterion_11_structural_bounds():
    t0, problems = time.perf_counter(), []
    for path in sorted(DOCUMENTS.glob("*.json")):
        doc, name = load(path), path.stem
        if doc.kind == "resolution":
            for res in (singularity_ss(doc.payload), weight_compact(doc.payload)):
                problems += [f"{name} {res.rule}: {p}" for p in filtration_bounds(res)]
        elif doc.kind == "gysin":
            problems += _smooth_problems(name, doc.payload)
        elif doc.kind == "general_weight":
            problems += [f"{name} W: {p}" for p in filtration_bounds(weight_general(doc.payload))]
            for alpha, G in doc.payload.at.items():
                problems += _smooth_problems(f"{name}[{alpha}]", G)
        elif doc.kind == "square":
            S = doc.payload
            for label, h in (("X", S.HX), ("X~", S.HXt), ("Y", S.HY), ("Y~", S.HYt)):
                problems += _smooth_problems(f"{name} {label}", GysinDatum(S.ring, 0, {0: h}, {}))
        else:
            FK = doc.payload if doc.kind == "filtered_complex" else simple_r(doc.payload, 1)
            r, pages = stabilize(FK)
            for n in FK.carrier.degrees():
                f = abutment_filtration(FK, n)
                problems += [f"{name} H^{n}: {p}" for p in graded_discrepancies(f, pages[r])]
    _record(11, "filtration bounds on every shipped document; smooth inputs", problems, t0)


if __name__ == "__main__":
    failed = 0
    for key, fn in sorted(globals().items()):
        if key.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
