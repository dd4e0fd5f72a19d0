"""Modules over the linearly oriented quiver 1 -> 2 -> ... -> n-1.

An isomorphism class is a multisegment: ``mult[i][j]`` (1 <= i < j <= n) is
the multiplicity of the interval module M(i, j), which is one-dimensional at
the vertices ``i, ..., j-1`` with identity maps between them. ``S_i = M(i, i+1)``
and the indecomposable projectives are ``P_i = M(i, n)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from . import gfcount


class DimVectorMismatch(ValueError):
    pass


class InconsistentRanks(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Multisegment:
    """Multiplicities of interval modules, stored 0-based as an n x n matrix.

    ``mult[i-1][j-1]`` holds the multiplicity of M(i, j); only entries strictly
    above the diagonal may be nonzero.
    """

    n: int
    mult: tuple

    def __post_init__(self):
        n = self.n
        if len(self.mult) != n or any(len(row) != n for row in self.mult):
            raise ValueError(f"multiplicity matrix must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                v = self.mult[i][j]
                if v < 0 or (j <= i and v):
                    raise ValueError(f"bad multiplicity {v} at M({i + 1},{j + 1})")

    @classmethod
    def zero(cls, n: int) -> "Multisegment":
        return cls(n, tuple((0,) * n for _ in range(n)))

    @classmethod
    def from_matrix(cls, A) -> "Multisegment":
        """The module determined by the strict upper part of ``A``."""
        n = len(A)
        return cls(n, tuple(tuple(A[i][j] if j > i else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_triples(cls, n: int, triples: Iterable[Sequence[int]]) -> "Multisegment":
        m = [[0] * n for _ in range(n)]
        for i, j, k in triples:
            if not (1 <= i < j <= n):
                raise ValueError(f"interval M({i},{j}) not allowed for n={n}")
            m[i - 1][j - 1] += int(k)
        return cls(n, tuple(tuple(row) for row in m))

    @classmethod
    def interval(cls, n: int, i: int, j: int, k: int = 1) -> "Multisegment":
        return cls.from_triples(n, [(i, j, k)])

    @classmethod
    def simple(cls, n: int, i: int, k: int = 1) -> "Multisegment":
        return cls.interval(n, i, i + 1, k)

    def triples(self) -> list[tuple[int, int, int]]:
        n = self.n
        return [
            (i + 1, j + 1, self.mult[i][j])
            for i in range(n)
            for j in range(i + 1, n)
            if self.mult[i][j]
        ]

    def intervals(self) -> list[tuple[int, int]]:
        """Summands as (i, j) pairs, repeated by multiplicity."""
        return [(i, j) for i, j, k in self.triples() for _ in range(k)]

    def to_json(self) -> dict:
        return {"n": self.n, "segments": [list(t) for t in self.triples()]}

    @classmethod
    def from_json(cls, data) -> "Multisegment":
        return cls.from_triples(int(data["n"]), data["segments"])

    def as_matrix(self):
        return self.mult

    def __add__(self, other: "Multisegment") -> "Multisegment":
        """Direct sum."""
        if self.n != other.n:
            raise ValueError("different quivers")
        return Multisegment(
            self.n,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.mult, other.mult)),
        )

    def with_change(self, i: int, j: int, delta: int) -> "Multisegment":
        """Adjust the multiplicity of M(i, j) (1-based) by ``delta``."""
        m = [list(row) for row in self.mult]
        m[i - 1][j - 1] += delta
        return Multisegment(self.n, tuple(tuple(row) for row in m))

    def __str__(self) -> str:
        if not self.triples():
            return "0"
        parts = []
        for i, j, k in self.triples():
            s = f"M({i},{j})"
            parts.append(s if k == 1 else f"{s}^{k}")
        return " + ".join(parts)


def dim_vector(M: Multisegment) -> tuple[int, ...]:
    """Dimensions at the vertices 1..n-1."""
    n = M.n
    return tuple(
        sum(M.mult[i][j] for i in range(l + 1) for j in range(l + 1, n))
        for l in range(n - 1)
    )


def total_dim(M: Multisegment) -> int:
    return sum(dim_vector(M))


def indec_count(M: Multisegment) -> int:
    """Number of indecomposable summands."""
    return sum(sum(row) for row in M.mult)


def _interval_hom(a: int, b: int, c: int, d: int) -> int:
    return 1 if c <= a < d <= b else 0


def hom_dim(M: Multisegment, N: Multisegment) -> int:
    """dim Hom(M, N), extended bilinearly from dim Hom(M(a,b), M(c,d)) = [c <= a < d <= b]."""
    if M.n != N.n:
        raise ValueError("different quivers")
    total_ = 0
    for a, b, x in M.triples():
        for c, d, y in N.triples():
            if c <= a < d <= b:
                total_ += x * y
    return total_


def end_dim(M: Multisegment) -> int:
    return hom_dim(M, M)


def euler_form(x: Sequence[int], y: Sequence[int]) -> int:
    """<x, y> = sum x_i y_i - sum over arrows x_i y_{i+1}; equals hom - ext."""
    return sum(a * b for a, b in zip(x, y)) - sum(x[i] * y[i + 1] for i in range(len(x) - 1))


def ext_dim(M: Multisegment, N: Multisegment) -> int:
    """dim Ext^1(M, N) = hom(M, N) - <dim M, dim N>."""
    return hom_dim(M, N) - euler_form(dim_vector(M), dim_vector(N))


@lru_cache(maxsize=None)
def all_intervals(n: int) -> tuple[Multisegment, ...]:
    return tuple(Multisegment.interval(n, i, j) for i in range(1, n) for j in range(i + 1, n + 1))


def deg_leq(X: Multisegment, Y: Multisegment) -> bool:
    """True iff the orbit of Y lies in the closure of the orbit of X."""
    if dim_vector(X) != dim_vector(Y):
        raise DimVectorMismatch(f"{dim_vector(X)} != {dim_vector(Y)}")
    return all(hom_dim(X, U) <= hom_dim(Y, U) for U in all_intervals(X.n))


@dataclass(frozen=True)
class RankTable:
    """``ranks[(i, j)]`` for 1 <= i <= j <= n-1: rank of the composite map i -> j."""

    n: int
    ranks: dict

    def get(self, i: int, j: int) -> int:
        if i <= 0 or j >= self.n:
            return 0
        return self.ranks[(i, j)]


def rank_table(M: Multisegment) -> RankTable:
    """Ranks read off the multisegment: r[i][j] = sum over a <= i, b > j of mult(a, b)."""
    n = M.n
    ranks = {}
    for i in range(1, n):
        for j in range(i, n):
            ranks[(i, j)] = sum(
                M.mult[a - 1][b - 1] for a in range(1, i + 1) for b in range(j + 1, n + 1)
            )
    return RankTable(n, ranks)


def iso_type_from_ranks(T: RankTable) -> Multisegment:
    n = T.n
    m = [[0] * n for _ in range(n)]
    for a in range(1, n):
        for b in range(a + 1, n + 1):
            v = T.get(a, b - 1) - T.get(a - 1, b - 1) - T.get(a, b) + T.get(a - 1, b)
            if v < 0:
                raise InconsistentRanks(f"negative multiplicity {v} for M({a},{b})")
            m[a - 1][b - 1] = v
    return Multisegment(n, tuple(tuple(row) for row in m))


def min_projective_resolution(M: Multisegment) -> tuple[Multisegment, Multisegment]:
    """(P, Q) with 0 -> Q -> P -> M -> 0 minimal; P_i = M(i, n) and P_n = 0."""
    n = M.n
    P = Multisegment.zero(n)
    Q = Multisegment.zero(n)
    for i, j, k in M.triples():
        P = P.with_change(i, n, k)
        if j < n:
            Q = Q.with_change(j, n, k)
    return P, Q


@lru_cache(maxsize=None)
def multisegments_with_dim(n: int, dv: tuple) -> tuple[Multisegment, ...]:
    """Every isomorphism class with dimension vector ``dv``."""
    dv = tuple(dv)
    if len(dv) != n - 1:
        raise ValueError("dimension vector has wrong length")
    cells = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
    out = []

    def rec(idx: int, remaining: list, chosen: dict):
        if idx == len(cells):
            if not any(remaining):
                m = [[0] * n for _ in range(n)]
                for (i, j), k in chosen.items():
                    m[i - 1][j - 1] = k
                out.append(Multisegment(n, tuple(tuple(row) for row in m)))
            return
        i, j = cells[idx]
        cap = min(remaining[l - 1] for l in range(i, j))
        for k in range(cap + 1):
            for l in range(i, j):
                remaining[l - 1] -= k
            if k:
                chosen[(i, j)] = k
            rec(idx + 1, remaining, chosen)
            chosen.pop((i, j), None)
            for l in range(i, j):
                remaining[l - 1] += k

    rec(0, list(dv), {})
    return tuple(sorted(out))


def multisegments_up_to(n: int, max_total_dim: int) -> list[Multisegment]:
    """All classes of total dimension <= ``max_total_dim``, zero module included."""
    out = []
    for d in range(max_total_dim + 1):
        for dv in _compositions(d, n - 1):
            out.extend(multisegments_with_dim(n, dv))
    return out


def multisegments_by_count(n: int, max_summands: int) -> list[Multisegment]:
    """All classes with at most ``max_summands`` indecomposable summands."""
    cells = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
    out = []
    for s in range(max_summands + 1):
        for combo in _compositions(s, len(cells)):
            out.append(Multisegment.from_triples(n, [(i, j, k) for (i, j), k in zip(cells, combo) if k]))
    return sorted(out)


def _compositions(total_: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total_ == 0:
            yield ()
        return
    for first in range(total_ + 1):
        for rest in _compositions(total_ - first, parts - 1):
            yield (first,) + rest


# -- explicit representations over F_p ------------------------------------


@dataclass(frozen=True)
class Representation:
    """Vector spaces F_p^dims[l] at the vertices and matrices on the arrows.

    ``maps[l]`` is a ``dims[l+1] x dims[l]`` matrix (list of rows) for the
    arrow from vertex ``l+1`` to ``l+2`` (0-based list positions).
    """

    p: int
    dims: tuple
    maps: tuple

    @property
    def n(self) -> int:
        return len(self.dims) + 1

    def composite(self, i: int, j: int):
        """Matrix of the path from vertex i to vertex j (1-based, i <= j)."""
        size_ = self.dims[i - 1]
        if any(self.dims[l] == 0 for l in range(i - 1, j)):
            return [[0] * size_ for _ in range(self.dims[j - 1])]
        M = [[1 if a == b else 0 for b in range(size_)] for a in range(size_)]
        for l in range(i - 1, j - 1):
            M = mat_mul(self.maps[l], M, self.p)
        return M


def mat_mul(A, B, p: int):
    """A (m x k) times B (k x l) over F_p; handles empty shapes."""
    k = len(B)
    cols = len(B[0]) if B else 0
    return [
        [sum(A[a][t] * B[t][c] for t in range(k)) % p for c in range(cols)]
        for a in range(len(A))
    ]


def realize(M: Multisegment, p: int) -> Representation:
    """Direct sum of interval modules with identity maps along each interval."""
    n = M.n
    ivs = M.intervals()
    basis = [[(s, l) for s, (i, j) in enumerate(ivs) if i <= l < j] for l in range(1, n)]
    maps = []
    for l in range(n - 2):
        src, dst = basis[l], basis[l + 1]
        pos = {s: t for t, (s, _) in enumerate(dst)}
        mat = [[0] * len(src) for _ in range(len(dst))]
        for c, (s, _) in enumerate(src):
            if s in pos:
                mat[pos[s]][c] = 1
        maps.append(mat)
    return Representation(p, tuple(len(b) for b in basis), tuple(maps))


def representation_ranks(rep: Representation) -> RankTable:
    n = rep.n
    ranks = {}
    for i in range(1, n):
        for j in range(i, n):
            if i == j:
                ranks[(i, j)] = rep.dims[i - 1]
            else:
                C = rep.composite(i, j)
                ranks[(i, j)] = gfcount.rank([list(col) for col in zip(*C)], rep.p) if C and C[0] else 0
    return RankTable(n, ranks)


def iso_type(rep: Representation) -> Multisegment:
    return iso_type_from_ranks(representation_ranks(rep))
