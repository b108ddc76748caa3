"""Exact matrix and submodule arithmetic over ZZ, QQ and GF(p).

Vectors are row tuples. A :class:`Matrix` of shape ``(rows, cols)`` acts on
column vectors, so it represents a map ``R^cols -> R^rows``; applying it to a
row vector ``v`` is ``v @ M.T``.

Submodules of ``R^n`` are stored by a canonical generating matrix: the row
Hermite normal form over ZZ (positive pivots, entries above a pivot reduced
into ``[0, pivot)``) and the reduced row echelon form over a field. Two
submodules are equal iff their canonical matrices are equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpq
from typing import Iterable, Sequence

__all__ = [
    "Ring",
    "ZZ",
    "QQ",
    "GF",
    "Matrix",
    "Submodule",
    "ModulePresentation",
    "Quotient",
    "smith_normal_form",
    "echelon",
    "kernel",
    "image",
    "preimage",
    "submodule_sum",
    "intersect",
    "quotient_presentation",
    "induced_matrix",
    "is_isomorphism",
    "determinant",
]


_MPQ = type(mpq(0))


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: ``kind`` is ``"Z"``, ``"Q"`` or ``"GF"`` (with prime ``p``)."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "GF"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "GF" and not _is_prime(self.p):
            raise ValueError(f"Z/{self.p} is not a field; only prime moduli are supported")
        if self.kind != "GF" and self.p:
            raise ValueError("modulus given for a non-modular ring")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    def __call__(self, x):
        """Coerce ``x`` to the canonical representative."""
        t = type(x)
        if self.kind == "Z":
            if t is int:
                return x
            if isinstance(x, (Fraction, _MPQ)):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return int(x.numerator)
            if isinstance(x, bool) or not isinstance(x, int):
                raise TypeError(f"expected int, got {type(x).__name__}")
            return x
        if self.kind == "Q":
            return x if t is _MPQ else mpq(x)
        if t is int:
            return x % self.p
        if isinstance(x, (Fraction, _MPQ)):
            return (int(x.numerator) * pow(int(x.denominator), -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.kind == "Q":
            return 1 / mpq(x)
        if self.kind == "GF":
            return pow(x, -1, self.p)
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def __str__(self) -> str:
        if self.kind == "GF":
            return f"Z/{self.p}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "Ring":
        t = text.strip().upper().replace("ZZ", "Z").replace("QQ", "Q")
        if t == "Z":
            return ZZ
        if t == "Q":
            return QQ
        for prefix in ("Z/", "GF(", "GF", "F"):
            if t.startswith(prefix):
                return GF(int(t[len(prefix):].rstrip(")")))
        raise ValueError(f"cannot parse ring {text!r}")


ZZ = Ring("Z")
QQ = Ring("Q")


def GF(p: int) -> Ring:
    return Ring("GF", p)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class Matrix:
    ring: Ring
    rows: int
    cols: int
    data: tuple = field(repr=False)

    @classmethod
    def from_rows(cls, ring: Ring, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = [tuple(ring(x) for x in r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        return cls(ring, len(rows), ncols, tuple(rows))

    @classmethod
    def zero(cls, ring: Ring, rows: int, cols: int) -> "Matrix":
        z = ring(0)
        return cls(ring, rows, cols, tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        return cls.from_rows(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def diagonal(cls, ring: Ring, values: Sequence) -> "Matrix":
        n = len(values)
        return cls.from_rows(ring, [[values[i] if i == j else 0 for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def tolist(self) -> list[list]:
        return [list(r) for r in self.data]

    @property
    def T(self) -> "Matrix":
        return Matrix(self.ring, self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def _check(self, other: "Matrix"):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ring = self.ring
        ot = other.T.data
        out = []
        for r in self.data:
            out.append(tuple(ring(sum(a * b for a, b in zip(r, c) if a and b)) for c in ot))
        return Matrix(ring, self.rows, other.cols, tuple(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        ring = self.ring
        return Matrix(ring, self.rows, self.cols,
                      tuple(tuple(ring(a + b) for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        ring = self.ring
        return Matrix(ring, self.rows, self.cols, tuple(tuple(ring(c * a) for a in r) for r in self.data))

    def apply(self, v: Sequence) -> tuple:
        """``M v`` for a vector ``v`` of length ``cols``."""
        ring = self.ring
        return tuple(ring(sum(a * b for a, b in zip(r, v) if a and b)) for r in self.data)

    def block(self, row_slice: slice, col_slice: slice) -> "Matrix":
        rows = [r[col_slice] for r in self.data[row_slice]]
        ncols = len(range(*col_slice.indices(self.cols)))
        return Matrix(self.ring, len(rows), ncols, tuple(tuple(r) for r in rows))

    @staticmethod
    def blocks(ring: Ring, row_dims: Sequence[int], col_dims: Sequence[int], parts: dict) -> "Matrix":
        """Assemble from ``parts[(i, j)]`` blocks; missing blocks are zero."""
        nrows, ncols = sum(row_dims), sum(col_dims)
        out = [[ring(0)] * ncols for _ in range(nrows)]
        roff = [sum(row_dims[:i]) for i in range(len(row_dims))]
        coff = [sum(col_dims[:j]) for j in range(len(col_dims))]
        for (i, j), m in parts.items():
            if m.shape != (row_dims[i], col_dims[j]):
                raise ValueError(f"block {(i, j)} has shape {m.shape}, expected {(row_dims[i], col_dims[j])}")
            for a in range(m.rows):
                row = out[roff[i] + a]
                for b in range(m.cols):
                    if m.data[a][b]:
                        row[coff[j] + b] = ring(row[coff[j] + b] + m.data[a][b])
        return Matrix(ring, nrows, ncols, tuple(tuple(r) for r in out))

    def __str__(self) -> str:
        return "[" + ",\n ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.data) + "]"


# ---------------------------------------------------------------------------
# elimination


def _field_echelon(ring: Ring, A: list[list], ncols: int, track: list[list] | None = None):
    """In-place reduced row echelon form; returns pivot columns.

    Entries must already be canonical ring elements.
    """
    if ring.kind == "GF":
        p = ring.p

        def norm(row):
            return [x % p for x in row]
    else:
        def norm(row):
            return row
    pivots = []
    r = 0
    nrows = len(A)
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        if track is not None:
            track[r], track[piv] = track[piv], track[r]
        inv = ring.inv(A[r][c])
        if inv != 1:
            A[r] = norm([x * inv for x in A[r]])
            if track is not None:
                track[r] = norm([x * inv for x in track[r]])
        pr = A[r]
        tr = track[r] if track is not None else None
        for i in range(nrows):
            if i != r:
                f = A[i][c]
                if f != 0:
                    A[i] = norm([x - f * y if y else x for x, y in zip(A[i], pr)])
                    if tr is not None:
                        track[i] = norm([x - f * y if y else x for x, y in zip(track[i], tr)])
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def _int_echelon(A: list[list[int]], ncols: int, track: list[list[int]] | None = None):
    """In-place row Hermite normal form over ZZ; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(A)

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        if track is not None:
            track[i], track[j] = track[j], track[i]

    def axpy(i, q, j):  # row_i -= q * row_j
        A[i] = [x - q * y for x, y in zip(A[i], A[j])]
        if track is not None:
            track[i] = [x - q * y for x, y in zip(track[i], track[j])]

    for c in range(ncols):
        if r == nrows:
            break
        while True:
            nz = [i for i in range(r, nrows) if A[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(A[i][c]))
            if best != r:
                swap(r, best)
            clean = True
            for i in range(r + 1, nrows):
                if A[i][c] != 0:
                    axpy(i, A[i][c] // A[r][c], r)
                    if A[i][c] != 0:
                        clean = False
            if clean:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            if track is not None:
                track[r] = [-x for x in track[r]]
        for i in range(r):
            if A[i][c] != 0:
                q = A[i][c] // A[r][c]
                if q:
                    axpy(i, q, r)
        pivots.append(c)
        r += 1
    return pivots


def echelon(ring: Ring, rows: Iterable[Sequence], ncols: int) -> tuple[tuple, ...]:
    """Canonical generating rows (HNF over ZZ, RREF over a field), zero rows dropped."""
    A = [[ring(x) for x in r] for r in rows]
    if ring.is_field:
        piv = _field_echelon(ring, A, ncols)
    else:
        piv = _int_echelon(A, ncols)
    return tuple(tuple(r) for r in A[: len(piv)])


def _left_kernel(ring: Ring, A: list[list], ncols: int) -> list[list]:
    """Basis of ``{y : y A = 0}`` for the ``len(A) x ncols`` matrix ``A``."""
    m = len(A)
    work = [list(r) for r in A]
    one, zero = ring(1), ring(0)
    track = [[one if i == j else zero for j in range(m)] for i in range(m)]
    if ring.is_field:
        piv = _field_echelon(ring, work, ncols, track)
    else:
        piv = _int_echelon(work, ncols, track)
    return [track[i] for i in range(len(piv), m)]


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(S, U, V)`` with ``U @ M @ V == S``, ``S`` diagonal.

    Over ZZ the diagonal is nonnegative with ``S[i,i] | S[i+1,i+1]`` and zeros
    last; over a field it is ``1, ..., 1, 0, ..., 0``.
    """
    S, U, V, _ = _snf(M)
    return S, U, V


def _snf(M: Matrix):
    ring = M.ring
    m, n = M.shape
    A = [list(r) for r in M.data]
    U = [[ring(int(i == j)) for j in range(m)] for i in range(m)]
    V = [[ring(int(i == j)) for j in range(n)] for i in range(n)]
    Vinv = [[ring(int(i == j)) for j in range(n)] for i in range(n)]

    def row_op(i, q, j):  # row_i -= q row_j
        A[i] = [ring(x - q * y) for x, y in zip(A[i], A[j])]
        U[i] = [ring(x - q * y) for x, y in zip(U[i], U[j])]

    def col_op(i, q, j):  # col_i -= q col_j ; V^{-1}: row_j += q row_i
        for r in A:
            r[i] = ring(r[i] - q * r[j])
        for r in V:
            r[i] = ring(r[i] - q * r[j])
        Vinv[j] = [ring(x + q * y) for x, y in zip(Vinv[j], Vinv[i])]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def quo(a, b):
        return a // b if ring.kind == "Z" else ring(a * ring.inv(b))

    size = lambda x: abs(x) if ring.kind == "Z" else (0 if x == 0 else 1)

    for t in range(min(m, n)):
        cand = [(size(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j] != 0]
        if not cand:
            break
        _, i0, j0 = min(cand)
        row_swap(t, i0)
        col_swap(t, j0)
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    row_op(i, quo(A[i][t], A[t][t]), t)
                    if A[i][t] != 0:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    col_op(j, quo(A[t][j], A[t][t]), t)
                    if A[t][j] != 0:
                        changed = True
            if changed:
                cand = [(size(A[i][t]), i, t) for i in range(t, m) if A[i][t] != 0]
                cand += [(size(A[t][j]), t, j) for j in range(t, n) if A[t][j] != 0]
                _, i0, j0 = min(cand)
                row_swap(t, i0)
                col_swap(t, j0)
                continue
            if ring.kind == "Z":
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if A[i][j] % A[t][t] != 0), None)
                if bad is not None:
                    row_op(t, -1, bad[0])
                    continue
            break
        if ring.kind == "Z" and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        elif ring.is_field and A[t][t] != 1:
            inv = ring.inv(A[t][t])
            A[t] = [ring(x * inv) for x in A[t]]
            U[t] = [ring(x * inv) for x in U[t]]

    mk = lambda rows, c: Matrix(ring, len(rows), c, tuple(tuple(r) for r in rows))
    return mk(A, n), mk(U, m), mk(V, n), mk(Vinv, n)


def determinant(M: Matrix):
    """Determinant by fraction-free (Bareiss) elimination."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    ring = M.ring
    n = M.rows
    if n == 0:
        return ring(1)
    if ring.kind == "GF":
        A = [list(r) for r in M.data]
        det = ring(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if A[i][c] != 0), None)
            if piv is None:
                return ring(0)
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                det = ring(-det)
            det = ring(det * A[c][c])
            inv = ring.inv(A[c][c])
            for i in range(c + 1, n):
                f = ring(A[i][c] * inv)
                A[i] = [ring(x - f * y) for x, y in zip(A[i], A[c])]
        return det
    A = [list(r) for r in M.data]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if piv is None:
                return ring(0)
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j])
                A[i][j] = A[i][j] // prev if ring.kind == "Z" else A[i][j] / prev
        prev = A[k][k]
    return ring(sign * A[n - 1][n - 1])


# ---------------------------------------------------------------------------
# submodules


@dataclass(frozen=True)
class Submodule:
    """A submodule of ``ring^ambient`` held in canonical echelon form."""

    ring: Ring
    ambient: int
    gens: tuple

    @classmethod
    def span(cls, ring: Ring, ambient: int, rows: Iterable[Sequence] = ()) -> "Submodule":
        rows = list(rows)
        for r in rows:
            if len(r) != ambient:
                raise ValueError(f"generator of length {len(r)} in ambient rank {ambient}")
        return cls(ring, ambient, echelon(ring, rows, ambient))

    @classmethod
    def zero(cls, ring: Ring, ambient: int) -> "Submodule":
        return cls(ring, ambient, ())

    @classmethod
    def full(cls, ring: Ring, ambient: int) -> "Submodule":
        return cls.span(ring, ambient, Matrix.identity(ring, ambient).data)

    @property
    def rank(self) -> int:
        return len(self.gens)

    def matrix(self) -> Matrix:
        return Matrix(self.ring, len(self.gens), self.ambient, self.gens)

    def _pivots(self):
        return [next(j for j, x in enumerate(g) if x != 0) for g in self.gens]

    def coordinates(self, v: Sequence) -> tuple | None:
        """Coefficients ``c`` with ``c @ gens == v``, or ``None`` if ``v`` is not a member."""
        ring = self.ring
        v = [ring(x) for x in v]
        if len(v) != self.ambient:
            raise ValueError("vector length does not match ambient rank")
        coeffs = []
        for g, c in zip(self.gens, self._pivots()):
            if ring.kind == "Z":
                if v[c] % g[c] != 0:
                    return None
                q = v[c] // g[c]
            else:
                q = ring(v[c] * ring.inv(g[c]))
            coeffs.append(q)
            if q:
                v = [ring(x - q * y) for x, y in zip(v, g)]
        if any(x != 0 for x in v):
            return None
        return tuple(coeffs)

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def __le__(self, other: "Submodule") -> bool:
        _compatible(self, other)
        return all(other.contains(g) for g in self.gens)

    def __add__(self, other: "Submodule") -> "Submodule":
        return submodule_sum(self, other)

    def __and__(self, other: "Submodule") -> "Submodule":
        return intersect(self, other)

    def __bool__(self) -> bool:
        return bool(self.gens)

    def is_full(self) -> bool:
        # canonical forms of the full module are the identity rows (RREF and HNF alike)
        n = self.ambient
        return len(self.gens) == n and all(g[i] == 1 for i, g in enumerate(self.gens))

    def embed(self, ambient: int, offset: int) -> "Submodule":
        """Image under the coordinate inclusion ``R^n -> R^ambient`` at ``offset``."""
        z = self.ring(0)
        rows = [(z,) * offset + g + (z,) * (ambient - offset - self.ambient) for g in self.gens]
        return Submodule(self.ring, ambient, tuple(rows))


def _compatible(a: Submodule, b: Submodule):
    if a.ring != b.ring or a.ambient != b.ambient:
        raise ValueError(f"incompatible submodules: {a.ring}^{a.ambient} vs {b.ring}^{b.ambient}")


def submodule_sum(a: Submodule, b: Submodule) -> Submodule:
    _compatible(a, b)
    if not b.gens:
        return a
    if not a.gens:
        return b
    return Submodule.span(a.ring, a.ambient, a.gens + b.gens)


def intersect(a: Submodule, b: Submodule) -> Submodule:
    _compatible(a, b)
    ring = a.ring
    if not a.gens or not b.gens:
        return Submodule.zero(ring, a.ambient)
    if a.gens == b.gens or b.is_full():
        return a
    if a.is_full():
        return b
    stacked = [list(g) for g in a.gens] + [[ring(-x) for x in g] for g in b.gens]
    rows = []
    for y in _left_kernel(ring, stacked, a.ambient):
        coeff = y[: a.rank]
        rows.append([ring(sum(c * g[j] for c, g in zip(coeff, a.gens) if c)) for j in range(a.ambient)])
    return Submodule.span(ring, a.ambient, rows)


def kernel(M: Matrix) -> Submodule:
    """``{x : M x = 0}`` as a submodule of ``ring^cols``."""
    ring = M.ring
    rows = _left_kernel(ring, [list(r) for r in M.T.data], M.rows)
    return Submodule.span(ring, M.cols, rows)


def image(M: Matrix, S: Submodule | None = None) -> Submodule:
    """``M(S)`` (default ``S`` = whole source) as a submodule of ``ring^rows``."""
    if S is None:
        return Submodule.span(M.ring, M.rows, M.T.data)
    if S.ambient != M.cols:
        raise ValueError("submodule ambient rank does not match matrix columns")
    return Submodule.span(M.ring, M.rows, [M.apply(g) for g in S.gens])


def preimage(M: Matrix, S: Submodule) -> Submodule:
    """``{x : M x in S}``."""
    if S.ambient != M.rows:
        raise ValueError("submodule ambient rank does not match matrix rows")
    ring = M.ring
    n = M.cols
    if S.is_full():
        return Submodule.full(ring, n)
    stacked = [list(r) for r in M.T.data] + [[ring(-x) for x in g] for g in S.gens]
    rows = [y[:n] for y in _left_kernel(ring, stacked, M.rows)]
    return Submodule.span(ring, n, rows)


# ---------------------------------------------------------------------------
# quotients


@dataclass(frozen=True)
class ModulePresentation:
    """``R^free_rank + sum_i R/(torsion[i])`` with ``torsion`` a divisibility chain."""

    free_rank: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        t = tuple(self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.free_rank < 0 or any(d <= 1 for d in t):
            raise ValueError(f"invalid presentation {self.free_rank}, {t}")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError(f"torsion {t} is not a divisibility chain")

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def ngens(self) -> int:
        return len(self.torsion) + self.free_rank

    def __add__(self, other: "ModulePresentation") -> "ModulePresentation":
        return direct_sum([self, other])

    def describe(self, ring: Ring) -> str:
        parts = []
        base = {"Z": "Z", "Q": "Q", "GF": f"Z/{ring.p}"}[ring.kind]
        if self.free_rank:
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def direct_sum(mods: Iterable[ModulePresentation]) -> ModulePresentation:
    """Canonical form of a direct sum (invariant factors recomputed from prime powers)."""
    mods = list(mods)
    free = sum(m.free_rank for m in mods)
    tors = [d for m in mods for d in m.torsion]
    if not tors:
        return ModulePresentation(free, ())
    S, _, _ = smith_normal_form(Matrix.diagonal(ZZ, tors))
    diag = [S[i, i] for i in range(len(tors))]
    return ModulePresentation(free, tuple(d for d in diag if d > 1))


class Quotient:
    """The subquotient ``num / den`` of a free module, with coordinate maps.

    ``coords`` sends a member of ``num`` to its coordinates on the canonical
    generators (torsion generators first, then free ones; torsion entries
    reduced modulo their order). ``lift`` returns an ambient representative.
    """

    def __init__(self, num: Submodule, den: Submodule):
        _compatible(num, den)
        if not den <= num:
            raise ValueError("denominator is not contained in numerator")
        self.num, self.den = num, den
        ring = num.ring
        self.ring = ring
        k = num.rank
        rel = [num.coordinates(g) for g in den.gens]
        if k == 0:
            self.presentation = ModulePresentation()
            self._keep, self._orders, self._V, self._Vinv = [], [], None, None
            return
        R = Matrix(ring, len(rel), k, tuple(rel)) if rel else Matrix.zero(ring, 0, k)
        S, _, V, Vinv = _snf(R)
        diag = [S[i, i] if i < S.rows else ring(0) for i in range(k)]
        keep, orders = [], []
        for i, d in enumerate(diag):
            if d == 0:
                continue
            if ring.kind == "Z" and d > 1:
                keep.append(i)
                orders.append(d)
        tors_n = len(keep)
        for i, d in enumerate(diag):
            if d == 0:
                keep.append(i)
                orders.append(0)
        self._keep, self._orders, self._V, self._Vinv = keep, orders, V, Vinv
        self.presentation = ModulePresentation(len(keep) - tors_n, tuple(orders[:tors_n]))

    @property
    def ngens(self) -> int:
        return len(self._keep)

    @property
    def orders(self) -> list:
        """Order of each generator (0 for free generators)."""
        return list(self._orders)

    def coords(self, v: Sequence) -> tuple:
        c = self.num.coordinates(v)
        if c is None:
            raise ValueError("vector is not in the numerator module")
        if not self._keep:
            return ()
        y = Matrix(self.ring, 1, len(c), (c,)) @ self._V
        out = []
        for i, d in zip(self._keep, self._orders):
            out.append(y[0, i] % d if d else y[0, i])
        return tuple(out)

    def lift(self, y: Sequence) -> tuple:
        ring = self.ring
        k = self.num.rank
        full = [ring(0)] * k
        for i, val in zip(self._keep, y):
            full[i] = ring(val)
        if not k:
            return (ring(0),) * self.num.ambient
        c = Matrix(ring, 1, k, (tuple(full),)) @ self._Vinv
        return (c @ self.num.matrix()).data[0]

    def basis_lifts(self) -> list[tuple]:
        n = self.ngens
        return [self.lift([1 if i == j else 0 for j in range(n)]) for i in range(n)]

    def is_zero_class(self, v: Sequence) -> bool:
        return self.den.contains(v)


def quotient_presentation(num: Submodule, den: Submodule) -> tuple[ModulePresentation, Quotient]:
    q = Quotient(num, den)
    return q.presentation, q


def induced_matrix(F: Matrix, source: Quotient, target: Quotient) -> Matrix:
    """Matrix of the map ``source -> target`` induced by the ambient map ``F``.

    Column ``j`` holds the target coordinates of the image of generator ``j``.
    Raises if ``F`` does not respect the numerators and denominators.
    """
    ring = F.ring
    for g in source.den.gens:
        if not target.den.contains(F.apply(g)):
            raise ValueError("map does not send denominator into denominator")
    cols = []
    for v in source.basis_lifts():
        cols.append(target.coords(F.apply(v)))
    if not cols:
        return Matrix.zero(ring, target.ngens, 0)
    return Matrix.from_rows(ring, list(zip(*cols)), len(cols)) if target.ngens else Matrix.zero(ring, 0, len(cols))


def is_isomorphism(F: Matrix, source: Quotient, target: Quotient) -> bool:
    """Whether ``F`` induces an isomorphism ``source.num/source.den -> target.num/target.den``."""
    if image(F, source.num) + target.den != target.num:
        return False
    return preimage(F, target.den) & source.num == source.den
