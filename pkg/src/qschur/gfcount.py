"""Linear algebra over prime fields, n-step flags and their relative position.

Subspaces of F_p^r are stored by their reduced row echelon basis (a tuple of
row tuples), so equal subspaces are equal as Python values. A flag keeps
the whole chain ``V_1 <= ... <= V_n = F_p^r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterator, Sequence

from . import matrix as mx
from .matrix import Matrix


class DimensionMismatch(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


@lru_cache(maxsize=None)
def _inverses(p: int) -> tuple[int, ...]:
    return (0,) + tuple(pow(a, p - 2, p) for a in range(1, p))


def rref(rows: Sequence[Sequence[int]], p: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form with zero rows dropped."""
    if not rows:
        return ()
    inv = _inverses(p)
    m = [[x % p for x in row] for row in rows]
    width = len(m[0])
    out = []
    for c in range(width):
        piv = None
        for k, row in enumerate(m):
            if row[c]:
                piv = k
                break
        if piv is None:
            continue
        row = m.pop(piv)
        s = inv[row[c]]
        if s != 1:
            row = [(x * s) % p for x in row]
        for other in m:
            f = other[c]
            if f:
                for t in range(c, width):
                    other[t] = (other[t] - f * row[t]) % p
        for other in out:
            f = other[c]
            if f:
                for t in range(c, width):
                    other[t] = (other[t] - f * row[t]) % p
        out.append(row)
        if not m:
            break
    return tuple(tuple(row) for row in out)


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank over F_p (plain forward elimination)."""
    if not rows:
        return 0
    inv = _inverses(p)
    m = [[x % p for x in row] for row in rows]
    width = len(m[0])
    rk = 0
    for c in range(width):
        piv = None
        for k in range(rk, len(m)):
            if m[k][c]:
                piv = k
                break
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        row = m[rk]
        s = inv[row[c]]
        for k in range(rk + 1, len(m)):
            f = m[k][c]
            if f:
                f = (f * s) % p
                other = m[k]
                for t in range(c, width):
                    other[t] = (other[t] - f * row[t]) % p
        rk += 1
        if rk == len(m):
            break
    return rk


def nullspace(rows: Sequence[Sequence[int]], width: int, p: int) -> tuple[tuple[int, ...], ...]:
    """Basis of ``{x : M x = 0}`` for the matrix with the given rows."""
    R = rref(rows, p) if rows else ()
    pivots = []
    for row in R:
        pivots.append(next(c for c, x in enumerate(row) if x))
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * width
        v[fcol] = 1
        for row, pc in zip(R, pivots):
            v[pc] = (-row[fcol]) % p
        basis.append(tuple(v))
    return tuple(basis)


def span_sum(U, W, p: int):
    return rref(list(U) + list(W), p)


def intersection(U, W, p: int):
    """Intersection of two subspaces given by basis rows."""
    if not U or not W:
        return ()
    # x in U cap W  <=>  x = a.U = b.W ; solve [U; -W]^T (a, b) = 0
    width = len(U[0])
    k = len(U)
    cols = [
        [U[t][c] for t in range(k)] + [(-W[t][c]) % p for t in range(len(W))]
        for c in range(width)
    ]
    kernel = nullspace(cols, k + len(W), p)
    vecs = []
    for sol in kernel:
        a = sol[:k]
        vecs.append([sum(a[t] * U[t][c] for t in range(k)) % p for c in range(width)])
    return rref(vecs, p)


@dataclass(frozen=True)
class Subspace:
    p: int
    ambient_dim: int
    basis: tuple

    @classmethod
    def spanned_by(cls, rows, p: int, ambient_dim: int) -> "Subspace":
        return cls(p, ambient_dim, rref(rows, p))

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class FlagChain:
    """``V_1 <= V_2 <= ... <= V_n = F_p^r``; ``steps[i]`` is an RREF basis."""

    p: int
    r: int
    steps: tuple

    @property
    def n(self) -> int:
        return len(self.steps)

    def dims(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.steps)

    def step_dims(self) -> tuple[int, ...]:
        d = self.dims()
        return tuple(d[i] - (d[i - 1] if i else 0) for i in range(len(d)))

    def subspace(self, i: int) -> Subspace:
        return Subspace(self.p, self.r, self.steps[i])

    def transform(self, g: Sequence[Sequence[int]]) -> "FlagChain":
        """Image under the invertible matrix ``g`` acting on column vectors."""
        p = self.p
        steps = []
        for basis in self.steps:
            img = [
                [sum(g[a][b] * v[b] for b in range(self.r)) % p for a in range(self.r)]
                for v in basis
            ]
            steps.append(rref(img, p))
        return FlagChain(p, self.r, tuple(steps))

    def is_valid(self) -> bool:
        p = self.p
        for a, b in zip(self.steps, self.steps[1:]):
            if rank(list(a) + list(b), p) != len(b):
                return False
        return len(self.steps[-1]) == self.r if self.steps else self.r == 0


def _identity_rows(r: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


def _coordinate_span(indices, r: int) -> tuple:
    return tuple(
        tuple(1 if c == i else 0 for c in range(r)) for i in sorted(indices)
    )


def _intersection_dims(f: FlagChain, f2: FlagChain) -> list[list[int]]:
    """``d[i][j] = dim(V_i cap V'_j)`` with the index 0 meaning the zero space."""
    n = f.n
    p = f.p
    d = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        Vi = f.steps[i - 1]
        for j in range(1, n + 1):
            Wj = f2.steps[j - 1]
            if not Vi or not Wj:
                continue
            d[i][j] = len(Vi) + len(Wj) - rank(list(Vi) + list(Wj), p)
    return d


def relative_position(f: FlagChain, f2: FlagChain) -> Matrix:
    """The matrix ``a_ij = dim(V_{i-1} + V_i cap V'_j) - dim(V_{i-1} + V_i cap V'_{j-1})``.

    Uses ``dim(V_{i-1} + V_i cap V'_j) = dim V_{i-1} + d(i, j) - d(i-1, j)``
    with ``d(i, j) = dim(V_i cap V'_j)``.
    """
    if f.p != f2.p or f.r != f2.r or f.n != f2.n:
        raise DimensionMismatch("flags live in different spaces")
    n = f.n
    d = _intersection_dims(f, f2)
    return tuple(
        tuple(
            d[i][j] - d[i - 1][j] - d[i][j - 1] + d[i - 1][j - 1]
            for j in range(1, n + 1)
        )
        for i in range(1, n + 1)
    )


def relative_position_literal(f: FlagChain, f2: FlagChain) -> Matrix:
    """Same matrix, evaluated term by term with explicit sums and intersections."""
    if f.p != f2.p or f.r != f2.r or f.n != f2.n:
        raise DimensionMismatch("flags live in different spaces")
    p, n = f.p, f.n
    V = [()] + list(f.steps)
    W = [()] + list(f2.steps)

    def term(i, j):
        return len(span_sum(V[i - 1], intersection(V[i], W[j], p), p))

    return tuple(
        tuple(term(i, j) - term(i, j - 1) for j in range(1, n + 1))
        for i in range(1, n + 1)
    )


def standard_flag(step_dims: Sequence[int], p: int) -> FlagChain:
    """The flag spanned by initial segments of the standard basis."""
    r = sum(step_dims)
    steps = []
    s = 0
    for d in step_dims:
        s += d
        steps.append(_coordinate_span(range(s), r))
    return FlagChain(p, r, tuple(steps))


def standard_pair(A: Matrix, p: int) -> tuple[FlagChain, FlagChain]:
    """A pair of coordinate flags in relative position ``A``.

    Basis vectors are handed out to the cells ``(i, j)`` in row-major order,
    ``a_ij`` of them each; the first flag's step ``i`` spans the cells of rows
    ``<= i`` and the second flag's step ``j`` the cells of columns ``<= j``.
    The first flag is therefore always ``standard_flag(ro(A))``.
    """
    n = len(A)
    r = mx.total(A)
    cells = {}
    k = 0
    for i in range(n):
        for j in range(n):
            cells[(i, j)] = range(k, k + A[i][j])
            k += A[i][j]
    f1 = []
    f2 = []
    for t in range(n):
        f1.append(_coordinate_span(
            [v for (i, j), rg in cells.items() if i <= t for v in rg], r))
        f2.append(_coordinate_span(
            [v for (i, j), rg in cells.items() if j <= t for v in rg], r))
    return FlagChain(p, r, tuple(f1)), FlagChain(p, r, tuple(f2))


def grassmannian(k: int, m: int, p: int) -> Iterator[tuple]:
    """All k-dimensional subspaces of F_p^m as RREF bases."""
    if k == 0:
        yield ()
        return
    for pivots in combinations(range(m), k):
        free = [
            (t, c)
            for t, pc in enumerate(pivots)
            for c in range(pc + 1, m)
            if c not in pivots
        ]
        for values in product(range(p), repeat=len(free)):
            rows = [[0] * m for _ in range(k)]
            for t, pc in enumerate(pivots):
                rows[t][pc] = 1
            for (t, c), v in zip(free, values):
                rows[t][c] = v
            yield tuple(tuple(row) for row in rows)


def _complement_basis(basis, r: int) -> list[tuple]:
    pivots = {next(c for c, x in enumerate(row) if x) for row in basis}
    return [tuple(1 if c == i else 0 for c in range(r)) for i in range(r) if i not in pivots]


def enumerate_flags(step_dims: Sequence[int], p: int) -> Iterator[FlagChain]:
    """Every flag with the given step-quotient dimensions, each exactly once."""
    step_dims = tuple(int(d) for d in step_dims)
    if any(d < 0 for d in step_dims):
        raise ValueError("negative step dimension")
    r = sum(step_dims)

    def extend(prefix: list, current: tuple, idx: int):
        if idx == len(step_dims):
            yield FlagChain(p, r, tuple(prefix))
            return
        d = step_dims[idx]
        if d == 0:
            yield from extend(prefix + [current], current, idx + 1)
            return
        comp = _complement_basis(current, r)
        for sub in grassmannian(d, len(comp), p):
            lifted = [
                [sum(coef * comp[t][c] for t, coef in enumerate(row)) for c in range(r)]
                for row in sub
            ]
            nxt = rref(list(current) + lifted, p)
            yield from extend(prefix + [nxt], nxt, idx + 1)

    yield from extend([], (), 0)


@lru_cache(maxsize=None)
def _flags(step_dims: tuple, p: int) -> tuple:
    return tuple(enumerate_flags(step_dims, p))


@lru_cache(maxsize=256)
def position_buckets(row_type: tuple, col_type: tuple, p: int) -> dict:
    """Flags ``f`` of type ``col_type`` grouped by ``relative_position(std, f)``.

    ``std`` is ``standard_flag(row_type)``, the first flag of every
    ``standard_pair`` whose row sums are ``row_type``.
    """
    std = standard_flag(row_type, p)
    out: dict = {}
    for f in _flags(col_type, p):
        out.setdefault(relative_position(std, f), []).append(f)
    return out


def count_intermediate(A: Matrix, A2: Matrix, A3: Matrix, p: int) -> int:
    """``|{f : (f1, f) in O_A, (f, f2) in O_A2}|`` for ``(f1, f2) = standard_pair(A3)``."""
    if mx.co(A) != mx.ro(A2):
        raise PreconditionViolated("co(A) != ro(A2)")
    if mx.ro(A3) != mx.ro(A) or mx.co(A3) != mx.co(A2):
        raise PreconditionViolated("A3 margins do not match ro(A), co(A2)")
    _, f2 = standard_pair(A3, p)
    bucket = position_buckets(mx.ro(A), mx.co(A), p).get(A, ())
    return sum(1 for f in bucket if relative_position(f, f2) == A2)


def count_intermediate_bruteforce(A: Matrix, A2: Matrix, A3: Matrix, p: int) -> int:
    """Reference count: scan every flag of type co(A) with no bucketing."""
    if mx.co(A) != mx.ro(A2):
        raise PreconditionViolated("co(A) != ro(A2)")
    if mx.ro(A3) != mx.ro(A) or mx.co(A3) != mx.co(A2):
        raise PreconditionViolated("A3 margins do not match ro(A), co(A2)")
    f1, f2 = standard_pair(A3, p)
    return sum(
        1
        for f in enumerate_flags(mx.co(A), p)
        if relative_position(f1, f) == A and relative_position(f, f2) == A2
    )


def intermediate_counts(A: Matrix, A2: Matrix, p: int) -> dict:
    """Counts for every candidate ``A3`` with ``ro(A3) = ro(A)``, ``co(A3) = co(A2)``."""
    if mx.co(A) != mx.ro(A2):
        raise PreconditionViolated("co(A) != ro(A2)")
    bucket = position_buckets(mx.ro(A), mx.co(A), p).get(A, ())
    out = {}
    for A3 in mx.with_margins(mx.ro(A), mx.co(A2)):
        _, f2 = standard_pair(A3, p)
        out[A3] = sum(1 for f in bucket if relative_position(f, f2) == A2)
    return out


def random_invertible(r: int, p: int, rng) -> list[list[int]]:
    while True:
        g = [[rng.randrange(p) for _ in range(r)] for _ in range(r)]
        if rank(g, p) == r:
            return g


def general_linear(r: int, p: int) -> Iterator[list[list[int]]]:
    """Every element of GL_r(F_p); only sensible for tiny r and p."""
    for flat in product(range(p), repeat=r * r):
        g = [list(flat[i * r:(i + 1) * r]) for i in range(r)]
        if rank(g, p) == r:
            yield g
