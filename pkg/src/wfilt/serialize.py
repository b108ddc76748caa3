"""JSON documents (``"schema": 1``) for every input kind, and canonical output.

Integers beyond 64 bits are written as decimal strings; rationals as
``[numerator, denominator]`` in lowest terms. Strata and cube vertices are
keyed by bitmask. ``dumps`` is canonical: sorted keys, fixed layout, so
``dumps(load(dumps(x)))`` reproduces the same bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from gmpy2 import mpq

from .complexes import ChainMap, CochainComplex, ComplexError
from .cubical import AugmentedDiagram, CubicalDiagram
from .descent import GeneralWeightDatum, GysinAugmentation, PageLevelDatum, ResolutionDatum, SquareCohomologyDatum, blowup_synthesize
from .filtered import FilteredComplex, FilteredMap
from .gysin import GysinDatum, GysinMorphismDatum
from .linalg import ZZ, Matrix, Ring, Submodule
from .spaces import CellMap, DeltaModel, cochains, induced

__all__ = ["Document", "DocumentError", "load", "loads", "dumps", "document_to_json", "KINDS"]

SCHEMA = 1
KINDS = ("filtered_complex", "cubical", "resolution", "gysin", "general_weight", "square")
_INT64 = 1 << 63


class DocumentError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalars and matrices


def _int_out(x: int):
    x = int(x)
    return str(x) if not -_INT64 <= x < _INT64 else x


def _int_in(x, where: str) -> int:
    if isinstance(x, bool):
        raise DocumentError(f"{where}: expected an integer, got a boolean")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise DocumentError(f"{where}: expected an integer, got {x!r}")


def scalar_out(x, ring: Ring):
    if ring.kind == "Q":
        q = mpq(x)
        if q.denominator == 1:
            return _int_out(q.numerator)
        return [_int_out(q.numerator), _int_out(q.denominator)]
    return _int_out(x)


def scalar_in(x, ring: Ring, where: str):
    if isinstance(x, list):
        if ring.kind == "Z" or len(x) != 2:
            raise DocumentError(f"{where}: rational entry {x!r} not allowed here")
        num, den = _int_in(x[0], where), _int_in(x[1], where)
        if den == 0:
            raise DocumentError(f"{where}: zero denominator")
        return ring(mpq(num, den))
    return ring(_int_in(x, where))


def matrix_out(M: Matrix) -> dict:
    return {"shape": [M.rows, M.cols], "entries": [[scalar_out(x, M.ring) for x in r] for r in M.data]}


def matrix_in(obj, ring: Ring, where: str) -> Matrix:
    if not isinstance(obj, dict) or "shape" not in obj:
        raise DocumentError(f"{where}: a matrix needs a 'shape'")
    rows, cols = (_int_in(v, where) for v in obj["shape"])
    entries = obj.get("entries", [])
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise DocumentError(f"{where}: entries do not match shape {rows}x{cols}")
    if rows == 0:
        return Matrix.zero(ring, 0, cols)
    return Matrix.from_rows(ring, [[scalar_in(x, ring, where) for x in r] for r in entries], cols)


def _graded_maps_out(maps: dict) -> dict:
    return {str(k): matrix_out(M) for k, M in sorted(maps.items()) if M.rows or M.cols}


def _graded_maps_in(obj, ring: Ring, where: str) -> dict:
    return {int(k): matrix_in(v, ring, f"{where}[{k}]") for k, v in (obj or {}).items()}


def _ranks_out(ranks: dict) -> dict:
    return {str(k): int(r) for k, r in sorted(ranks.items()) if r}


def _ranks_in(obj, where: str) -> dict:
    return {int(k): _int_in(v, where) for k, v in (obj or {}).items()}


# ---------------------------------------------------------------------------
# complexes


def complex_out(K: CochainComplex) -> dict:
    return {
        "support": list(K.support),
        "dims": list(K.dims),
        "differentials": [matrix_out(d) for d in K.diffs],
    }


def complex_in(obj, ring: Ring, where: str) -> CochainComplex:
    if "model" in obj:
        return cochains(model_in(obj["model"], where), ring)
    n0, n1 = obj.get("support", [0, -1])
    dims = obj.get("dims", [])
    if len(dims) != n1 - n0 + 1:
        raise DocumentError(f"{where}: support [{n0}, {n1}] does not match {len(dims)} ranks")
    diffs = [matrix_in(m, ring, f"{where}.d[{i}]") for i, m in enumerate(obj.get("differentials", []))]
    try:
        K = CochainComplex(ring, n0, tuple(dims), tuple(diffs))
    except ComplexError as e:
        raise DocumentError(f"{where}: {e}") from None
    return CochainComplex.build(ring, {n: K.dim(n) for n in K.degrees()}, {n: K.d(n) for n in K.degrees()})


def chain_map_out(f: ChainMap) -> dict:
    return {"maps": _graded_maps_out({n: f.f(n) for n in f.degrees()})}


def chain_map_in(obj, source: CochainComplex, target: CochainComplex, ring: Ring, where: str,
                 models=None) -> ChainMap:
    if "cell_map" in obj:
        # cohomology is contravariant: the cells map from the target's model to the source's
        if not models or models[0] is None or models[1] is None:
            raise DocumentError(f"{where}: a cell map needs model endpoints")
        try:
            return induced(CellMap(models[1], models[0], [tuple(c) for c in obj["cell_map"]]), ring)
        except ComplexError as e:
            raise DocumentError(f"{where}: {e}") from None
    maps = _graded_maps_in(obj.get("maps"), ring, where)
    try:
        return ChainMap(source, target, maps)
    except ComplexError as e:
        raise DocumentError(f"{where}: {e}") from None


def model_out(M: DeltaModel) -> dict:
    return {"counts": list(M.counts), "faces": [[list(f) for f in t] for t in M.faces]}


def model_in(obj, where: str) -> DeltaModel:
    try:
        return DeltaModel(tuple(obj["counts"]), tuple(tuple(tuple(f) for f in t) for t in obj.get("faces", [])))
    except (KeyError, ComplexError, TypeError) as e:
        raise DocumentError(f"{where}: invalid model ({e})") from None


def filtered_out(FK: FilteredComplex) -> dict:
    steps = []
    for (p, n), S in sorted(FK.steps.items()):
        steps.append({"p": p, "n": n, "generators": matrix_out(S.matrix())})
    return {"complex": complex_out(FK.carrier), "pmin": FK.pmin, "pmax": FK.pmax, "steps": steps}


def filtered_in(obj, ring: Ring, where: str) -> FilteredComplex:
    K = complex_in(obj["complex"], ring, f"{where}.complex")
    try:
        if "levels" in obj:
            return FilteredComplex.from_levels(K, {int(n): list(v) for n, v in obj["levels"].items()})
        steps = {}
        for s in obj.get("steps", []):
            G = matrix_in(s["generators"], ring, f"{where}.steps")
            steps[(s["p"], s["n"])] = Submodule.span(ring, K.dim(s["n"]), G.data)
        return FilteredComplex(K, obj.get("pmin", 0), obj.get("pmax", 0), steps)
    except (ComplexError, ValueError) as e:
        raise DocumentError(f"{where}: {e}") from None


# ---------------------------------------------------------------------------
# diagrams


def _vertex_in(v, ring, where):
    if "filtered" in v:
        return filtered_in(v["filtered"], ring, where), None
    model = model_in(v["complex"]["model"], where) if "model" in v.get("complex", {}) else None
    return complex_in(v["complex"], ring, where), model


def cubical_out(D: CubicalDiagram) -> dict:
    verts = []
    for a in sorted(D.at):
        v = D.at[a]
        verts.append({"mask": a, **({"filtered": filtered_out(v)} if D.filtered else {"complex": complex_out(v)})})
    cof = [{"from": a, "to": b, **chain_map_out(D.map(a, b))} for (a, b) in sorted(D.coface)]
    return {"n": D.n, "vertices": verts, "cofaces": cof}


def cubical_in(obj, ring: Ring, where: str) -> tuple[CubicalDiagram, dict]:
    n = obj["n"]
    at, models = {}, {}
    for v in obj["vertices"]:
        at[v["mask"]], models[v["mask"]] = _vertex_in(v, ring, f"{where}.vertex[{v['mask']}]")
    cof = {}
    for c in obj["cofaces"]:
        a, b = c["from"], c["to"]
        if a not in at or b not in at:
            raise DocumentError(f"{where}: coface {a}->{b} joins unknown vertices")
        src = at[a].carrier if isinstance(at[a], FilteredComplex) else at[a]
        tgt = at[b].carrier if isinstance(at[b], FilteredComplex) else at[b]
        f = chain_map_in(c, src, tgt, ring, f"{where}.coface[{a}->{b}]", (models[a], models[b]))
        cof[(a, b)] = FilteredMap(f, at[a], at[b]) if isinstance(at[a], FilteredComplex) else f
    try:
        return CubicalDiagram(ring, n, at, cof), models
    except ComplexError as e:
        raise DocumentError(f"{where}: {e}") from None


def resolution_out(R: ResolutionDatum) -> dict:
    if R.level == "page":
        return {"page_level": {"rows": {str(q): complex_out(K) for q, K in sorted(R.page_level.rows.items())}}}
    out = {"diagram": cubical_out(R.diagram)}
    if R.augmented is not None:
        A = R.augmented
        out["augmentation"] = {
            "base": complex_out(A.base),
            "maps": [{"to": i, **chain_map_out(A.augmentation[i])} for i in sorted(A.augmentation)],
        }
    return out


def resolution_in(obj, ring: Ring, where: str) -> ResolutionDatum:
    try:
        if "page_level" in obj:
            rows = {int(q): complex_in(K, ring, f"{where}.row[{q}]") for q, K in obj["page_level"]["rows"].items()}
            return ResolutionDatum(page_level=PageLevelDatum(ring, rows))
        D, models = cubical_in(obj["diagram"], ring, f"{where}.diagram")
        if "augmentation" not in obj:
            return ResolutionDatum(diagram=D)
        aug = obj["augmentation"]
        base_model = model_in(aug["base"]["model"], where) if "model" in aug["base"] else None
        base = complex_in(aug["base"], ring, f"{where}.base")
        maps = {m["to"]: chain_map_in(m, base, D.complex(m["to"]), ring, f"{where}.augmentation[{m['to']}]",
                                      (base_model, models.get(m["to"])))
                for m in aug["maps"]}
        return ResolutionDatum.from_augmented(AugmentedDiagram(base, D, maps))
    except ComplexError as e:
        raise DocumentError(f"{where}: {e}") from None


# ---------------------------------------------------------------------------
# Gysin data


def gysin_out(G: GysinDatum) -> dict:
    return {
        "N": G.N,
        "mode": G.mode,
        "strata": [{"mask": I, "ranks": _ranks_out(G.strata[I])} for I in sorted(G.strata)],
        "gysin": [{"from": J, "to": I, "maps": _graded_maps_out(G.gysin[(I, J)])}
                  for (I, J) in sorted(G.gysin, key=lambda t: (t[1], t[0]))],
    }


def gysin_in(obj, ring: Ring, where: str) -> GysinDatum:
    try:
        strata = {s["mask"]: _ranks_in(s.get("ranks"), where) for s in obj["strata"]}
        gys = {(g["to"], g["from"]): _graded_maps_in(g.get("maps"), ring, f"{where}.gysin")
               for g in obj.get("gysin", [])}
        return GysinDatum(ring, obj["N"], strata, gys, obj.get("mode", "complex"))
    except ComplexError as e:
        raise DocumentError(f"{where}: {e}") from None
    except KeyError as e:
        raise DocumentError(f"{where}: missing field {e}") from None


def morphism_out(M: GysinMorphismDatum) -> dict:
    return {
        "multiplicity": matrix_out(M.multiplicity),
        "pullbacks": [{"from": I, "to": J, "maps": _graded_maps_out(M.pullbacks[(I, J)])}
                      for (I, J) in sorted(M.pullbacks)],
    }


def morphism_in(obj, source: GysinDatum, target: GysinDatum, ring: Ring, where: str) -> GysinMorphismDatum:
    try:
        mult = matrix_in(obj["multiplicity"], ZZ, f"{where}.multiplicity")
        pulls = {(p["from"], p["to"]): _graded_maps_in(p.get("maps"), ring, f"{where}.pullbacks")
                 for p in obj.get("pullbacks", [])}
        return GysinMorphismDatum(source, target, mult, pulls)
    except ComplexError as e:
        raise DocumentError(f"{where}: {e}") from None


def general_weight_out(D: GeneralWeightDatum, aug: GysinAugmentation | None = None) -> dict:
    out = {
        "n": D.n,
        "vertices": [{"mask": a, "datum": gysin_out(D.at[a])} for a in sorted(D.at)],
        "edges": [{"from": a, "to": b, "morphism": morphism_out(D.edge[(a, b)])} for (a, b) in sorted(D.edge)],
    }
    if aug is not None:
        out["augmentation"] = {
            "base": gysin_out(aug.base),
            "maps": [{"to": i, "morphism": morphism_out(aug.maps[i])} for i in sorted(aug.maps)],
        }
    return out


def general_weight_in(obj, ring: Ring, where: str):
    at = {v["mask"]: gysin_in(v["datum"], ring, f"{where}.vertex[{v['mask']}]") for v in obj["vertices"]}
    edges = {}
    for e in obj["edges"]:
        a, b = e["from"], e["to"]
        edges[(a, b)] = morphism_in(e["morphism"], at[b], at[a], ring, f"{where}.edge[{a}->{b}]")
    try:
        D = GeneralWeightDatum(ring, obj["n"], at, edges)
    except ComplexError as e:
        raise DocumentError(f"{where}: {e}") from None
    aug = None
    if "augmentation" in obj:
        base = gysin_in(obj["augmentation"]["base"], ring, f"{where}.base")
        maps = {m["to"]: morphism_in(m["morphism"], at[m["to"]], base, ring, f"{where}.augmentation")
                for m in obj["augmentation"]["maps"]}
        aug = GysinAugmentation(base, maps)
    return D, aug


# ---------------------------------------------------------------------------
# squares


def square_out(S: SquareCohomologyDatum) -> dict:
    return {
        "HX": _ranks_out(S.HX), "HXt": _ranks_out(S.HXt), "HY": _ranks_out(S.HY), "HYt": _ranks_out(S.HYt),
        **{name: _graded_maps_out({k: S.map(name, k) for k in S.degrees()}) for name in "fijg"},
    }


def square_in(obj, ring: Ring, where: str) -> SquareCohomologyDatum:
    try:
        if "synthesize" in obj:
            s = obj["synthesize"]
            chern = {int(i): _graded_maps_in(m, ring, where) for i, m in s.get("chern_action", {}).items()}
            return blowup_synthesize(_ranks_in(s["HX"], where), _ranks_in(s["HY"], where), s["m"],
                                     chern or None,
                                     _graded_maps_in(s.get("restrict"), ring, where) or None,
                                     _graded_maps_in(s.get("gysin"), ring, where) or None, ring)
        return SquareCohomologyDatum(
            ring, _ranks_in(obj["HX"], where), _ranks_in(obj["HXt"], where), _ranks_in(obj["HY"], where),
            _ranks_in(obj["HYt"], where), *(_graded_maps_in(obj.get(n), ring, f"{where}.{n}") for n in "fijg"))
    except ComplexError as e:
        raise DocumentError(f"{where}: {e}") from None


# ---------------------------------------------------------------------------
# documents


@dataclass(eq=False)
class Document:
    kind: str
    ring: Ring
    payload: object
    name: str = ""
    description: str = ""
    options: dict = field(default_factory=dict)
    extra: object = None  # Gysin augmentation of a general weight datum

    @property
    def expected(self) -> dict | None:
        e = self.options.get("expected_H")
        return {int(k): int(v) for k, v in e.items()} if e else None


def document_to_json(doc: Document) -> dict:
    enc = {
        "filtered_complex": filtered_out,
        "cubical": cubical_out,
        "resolution": resolution_out,
        "gysin": gysin_out,
        "square": square_out,
    }
    if doc.kind == "general_weight":
        payload = general_weight_out(doc.payload, doc.extra)
    else:
        payload = enc[doc.kind](doc.payload)
    out = {"schema": SCHEMA, "kind": doc.kind, "ring": _ring_out(doc.ring), "payload": payload}
    if doc.name:
        out["name"] = doc.name
    if doc.description:
        out["description"] = doc.description
    if doc.options:
        out["options"] = doc.options
    return out


def _ring_out(ring: Ring) -> str:
    return {"Z": "Z", "Q": "Q"}.get(ring.kind) or f"Z/{ring.p}"


def from_json(obj) -> Document:
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object")
    if obj.get("schema") != SCHEMA:
        raise DocumentError(f"unsupported schema {obj.get('schema')!r}; expected {SCHEMA}")
    kind = obj.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    try:
        ring = Ring.parse(str(obj.get("ring", "")))
    except ValueError as e:
        raise DocumentError(f"ring: {e}") from None
    options = obj.get("options", {})
    mode = options.get("mode")
    if mode == "real" and not (ring.kind == "GF" and ring.p == 2):
        raise DocumentError("options.mode is real but the ring is not Z/2")
    payload = obj.get("payload")
    if not isinstance(payload, dict):
        raise DocumentError("payload must be an object")
    extra = None
    try:
        if kind == "filtered_complex":
            value = filtered_in(payload, ring, "payload")
        elif kind == "cubical":
            value = cubical_in(payload, ring, "payload")[0]
        elif kind == "resolution":
            value = resolution_in(payload, ring, "payload")
        elif kind == "gysin":
            value = gysin_in(payload, ring, "payload")
            if mode and value.mode != mode:
                raise DocumentError(f"options.mode {mode} disagrees with payload mode {value.mode}")
        elif kind == "general_weight":
            value, extra = general_weight_in(payload, ring, "payload")
        else:
            value = square_in(payload, ring, "payload")
    except DocumentError:
        raise
    except (KeyError, TypeError, IndexError) as e:
        raise DocumentError(f"payload: malformed ({type(e).__name__}: {e})") from None
    except (ComplexError, ValueError) as e:
        raise DocumentError(f"payload: {e}") from None
    return Document(kind, ring, value, obj.get("name", ""), obj.get("description", ""), options, extra)


def loads(text: str) -> Document:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"not valid JSON: {e}") from None
    return from_json(obj)


def load(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, scalar lists kept on one line."""
    if isinstance(obj, Document):
        obj = document_to_json(obj)
    return _pretty(obj, 0) + "\n"


def _pretty(x, level: int) -> str:
    pad = "  " * (level + 1)
    end = "  " * level
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_pretty(x[k], level + 1)}" for k in sorted(x, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(x, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in x) or \
                all(isinstance(v, (list, tuple)) and all(not isinstance(w, (dict, list, tuple)) for w in v) for v in x) \
                and len(json.dumps(x)) <= 100:
            return json.dumps(x, ensure_ascii=False)
        return "[\n" + ",\n".join(pad + _pretty(v, level + 1) for v in x) + "\n" + end + "]"
    return json.dumps(x, ensure_ascii=False)
