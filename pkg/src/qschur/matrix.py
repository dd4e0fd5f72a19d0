"""Natural-number square matrices indexing the standard basis of S_q(n, r).

A matrix is a tuple of row tuples, so it hashes and orders naturally.
Indices in the public helpers (``elementary``) are 1-based to match the
usual ``E_{ij}`` notation; everything else is positional.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Matrix = tuple  # tuple[tuple[int, ...], ...]


def as_matrix(data: Iterable[Iterable[int]]) -> Matrix:
    rows = tuple(tuple(int(x) for x in row) for row in data)
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise ValueError(f"not a square matrix: {data!r}")
    if any(x < 0 for row in rows for x in row):
        raise ValueError(f"negative entry in {data!r}")
    return rows


def size(A: Matrix) -> int:
    return len(A)


def total(A: Matrix) -> int:
    return sum(sum(row) for row in A)


def ro(A: Matrix) -> tuple[int, ...]:
    """Row sums."""
    return tuple(sum(row) for row in A)


def co(A: Matrix) -> tuple[int, ...]:
    """Column sums."""
    return tuple(sum(col) for col in zip(*A))


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A))


def reverse(A: Matrix) -> Matrix:
    """Reverse both index orders, ``A[i][j] -> A[n-1-i][n-1-j]``."""
    return tuple(tuple(reversed(row)) for row in reversed(A))


def zero(n: int) -> Matrix:
    return tuple((0,) * n for _ in range(n))


def diag(d: Sequence[int]) -> Matrix:
    n = len(d)
    return tuple(tuple(d[i] if i == j else 0 for j in range(n)) for i in range(n))


def diagonal(A: Matrix) -> tuple[int, ...]:
    return tuple(A[i][i] for i in range(len(A)))


def elementary(n: int, i: int, j: int) -> Matrix:
    """E_{ij}, 1-based."""
    return tuple(
        tuple(1 if (a, b) == (i - 1, j - 1) else 0 for b in range(n)) for a in range(n)
    )


def add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def sub(A: Matrix, B: Matrix) -> Matrix:
    """Entrywise difference; the caller guarantees non-negativity."""
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(A, B))


def scale(A: Matrix, k: int) -> Matrix:
    return tuple(tuple(k * x for x in row) for row in A)


def is_upper(A: Matrix) -> bool:
    return all(A[i][j] == 0 for i in range(len(A)) for j in range(i))


def is_diagonal(A: Matrix) -> bool:
    return all(A[i][j] == 0 for i in range(len(A)) for j in range(len(A)) if i != j)


def strict_upper(A: Matrix) -> Matrix:
    n = len(A)
    return tuple(tuple(A[i][j] if j > i else 0 for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def compositions(r: int, n: int) -> tuple[tuple[int, ...], ...]:
    """All n-tuples of naturals summing to r, in lexicographic order."""
    if n == 0:
        return ((),) if r == 0 else ()
    if n == 1:
        return ((r,),)
    out = []
    for first in range(r + 1):
        for rest in compositions(r - first, n - 1):
            out.append((first,) + rest)
    return tuple(out)


def diagonals(n: int, s: int) -> list[Matrix]:
    """The set D_s: diagonal natural matrices of trace s."""
    return [diag(d) for d in compositions(s, n)]


@lru_cache(maxsize=None)
def with_margins(rows: tuple[int, ...], cols: tuple[int, ...]) -> tuple[Matrix, ...]:
    """All natural matrices with the given row and column sums."""
    if sum(rows) != sum(cols):
        return ()
    n = len(rows)
    out: list[Matrix] = []

    def fill(i: int, remaining: tuple[int, ...], acc: list):
        if i == n - 1:
            if sum(remaining) == rows[i]:
                out.append(tuple(acc) + (remaining,))
            return
        for row in _bounded_compositions(rows[i], remaining):
            fill(i + 1, tuple(c - x for c, x in zip(remaining, row)), acc + [row])

    fill(0, tuple(cols), [])
    return tuple(sorted(out))


def _bounded_compositions(total_: int, bounds: Sequence[int]) -> Iterator[tuple[int, ...]]:
    if not bounds:
        if total_ == 0:
            yield ()
        return
    for first in range(min(total_, bounds[0]) + 1):
        for rest in _bounded_compositions(total_ - first, bounds[1:]):
            yield (first,) + rest


@lru_cache(maxsize=None)
def theta(n: int, r: int) -> tuple[Matrix, ...]:
    """All n x n natural matrices with entry sum r."""
    out = []
    for flat in compositions(r, n * n):
        out.append(tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n)))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def theta_upper(n: int, r: int) -> tuple[Matrix, ...]:
    return tuple(A for A in theta(n, r) if is_upper(A))


def to_json(A: Matrix) -> list[list[int]]:
    return [list(row) for row in A]
