"""The q-Schur algebra S_q(n, r) over Z[q].

Basis elements ``e_A`` are indexed by natural n x n matrices of entry sum r.
Structure constants come from counting intermediate flags over several
prime fields and interpolating; closed forms for products with Chevalley
generators are provided separately and are checked against the counts.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from pathlib import Path

from filelock import FileLock

from . import gfcount
from . import matrix as mx
from .gfcount import PreconditionViolated
from .matrix import Matrix, co, ro
from .poly import ONE, IntPolynomial, PolyCombination, fit_counts, q_integer

__all__ = [
    "SchurElement",
    "StructureCache",
    "ro",
    "co",
    "degree_bound",
    "multiply",
    "count_product",
    "product",
    "chevalley_left",
    "chevalley_right",
    "e",
    "l_element",
    "E",
    "unit",
    "specialize0",
    "left_E",
    "right_E",
    "set_cache",
]


class SchurElement(PolyCombination):
    """Finite sum of ``e_A`` with polynomial coefficients."""

    __slots__ = ()

    def to_json(self) -> list[dict]:
        return [{"matrix": mx.to_json(A), "coeff": c.to_json()} for A, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "SchurElement":
        return cls({mx.as_matrix(t["matrix"]): IntPolynomial.from_json(t["coeff"]) for t in data})

    def __mul__(self, other):
        if isinstance(other, SchurElement):
            return product(self, other)
        if isinstance(other, (int, IntPolynomial)):
            return self.scale(other)
        return NotImplemented


def e(A) -> SchurElement:
    return SchurElement({mx.as_matrix(A): ONE})


# -- disk cache ----------------------------------------------------------------


def _key(A: Matrix, A2: Matrix) -> str:
    return f"{json.dumps(mx.to_json(A), separators=(',', ':'))}|{json.dumps(mx.to_json(A2), separators=(',', ':'))}"


class StructureCache:
    """Structure constants on disk, one JSON document per (n, r).

    Each document maps ``"A|A2"`` to the JSON term list of ``e_A e_A2``.
    Writers hold a file lock and replace the document atomically, so readers
    never see a partial file.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        self._mem: dict = {}
        self._lock = threading.Lock()

    def path(self, n: int, r: int) -> Path:
        return self.directory / f"schur_n{n}_r{r}.json"

    def _load(self, n: int, r: int) -> dict:
        with self._lock:
            if (n, r) not in self._mem:
                path = self.path(n, r)
                self._mem[(n, r)] = json.loads(path.read_text()) if path.exists() else {}
            return self._mem[(n, r)]

    def get(self, A: Matrix, A2: Matrix):
        doc = self._load(len(A), mx.total(A))
        terms = doc.get(_key(A, A2))
        return None if terms is None else SchurElement.from_json(terms)

    def put_many(self, n: int, r: int, entries: dict) -> None:
        """Merge ``{(A, A2): SchurElement}`` into the (n, r) document."""
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path(n, r)
        with FileLock(str(path) + ".lock"):
            doc = json.loads(path.read_text()) if path.exists() else {}
            for (A, A2), x in entries.items():
                doc[_key(A, A2)] = x.to_json()
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=path.name, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
            os.replace(tmp, path)
        with self._lock:
            self._mem[(n, r)] = doc

    def put(self, A: Matrix, A2: Matrix, x: SchurElement) -> None:
        self.put_many(len(A), mx.total(A), {(A, A2): x})


_disk_cache: StructureCache | None = None
_memo: dict = {}
_memo_lock = threading.Lock()


def set_cache(cache: StructureCache | None) -> None:
    """Install (or remove, with ``None``) the process-wide disk cache."""
    global _disk_cache
    _disk_cache = cache


# -- multiplication by counting -------------------------------------------------


def degree_bound(A: Matrix) -> int:
    """sum_{i<j} c_i c_j for c = co(A): dimension of the flag variety of type c."""
    c = co(A)
    return sum(c[i] * c[j] for i in range(len(c)) for j in range(i + 1, len(c)))


def _check_pair(A: Matrix, A2: Matrix) -> None:
    if len(A) != len(A2) or mx.total(A) != mx.total(A2):
        raise PreconditionViolated("e_A and e_A2 live in different algebras")


def count_product(A: Matrix, A2: Matrix, primes=None) -> SchurElement:
    """Uncached counting product; assumes co(A) = ro(A2)."""
    counts: dict = {}

    def count(p):
        if p not in counts:
            counts[p] = gfcount.intermediate_counts(A, A2, p)
        return counts[p]

    out = {}
    for A3 in mx.with_margins(ro(A), co(A2)):
        out[A3] = fit_counts(lambda p: count(p)[A3], degree_bound(A), primes)
    return SchurElement(out)


def multiply(A, A2, primes=None) -> SchurElement:
    """``e_A e_A2`` by flag counting and interpolation.

    With ``primes=None`` results are memoized and go through the disk cache
    when one is installed; an explicit prime list always recounts.
    """
    A, A2 = mx.as_matrix(A), mx.as_matrix(A2)
    _check_pair(A, A2)
    if co(A) != ro(A2):
        return SchurElement()
    if primes is not None:
        return count_product(A, A2, primes)
    key = (A, A2)
    with _memo_lock:
        hit = _memo.get(key)
    if hit is not None:
        return hit
    cache = _disk_cache
    x = cache.get(A, A2) if cache else None
    if x is None:
        x = count_product(A, A2, None)
        if cache:
            cache.put(A, A2, x)
    with _memo_lock:
        _memo[key] = x
    return x


def product(x: SchurElement, y: SchurElement) -> SchurElement:
    """Bilinear extension of :func:`multiply`."""
    by_row: dict = {}
    for A2, b in y.items():
        by_row.setdefault(ro(A2), []).append((A2, b))
    out = SchurElement()
    for A, a in x.items():
        for A2, b in by_row.get(co(A), ()):
            out = out + multiply(A, A2).scale(a * b)
    return out


# -- closed forms for Chevalley generators -------------------------------------


def _chevalley_index(B: Matrix) -> int:
    """The 0-based h with B - E_{h,h+1} diagonal, or raise."""
    n = len(B)
    for h in range(n - 1):
        if B[h][h + 1] == 1:
            rest = [row[:] for row in map(list, B)]
            rest[h][h + 1] = 0
            if mx.is_diagonal(tuple(map(tuple, rest))):
                return h
    raise PreconditionViolated(f"{B} is not E_(h,h+1) plus a diagonal matrix")


def chevalley_left(B, A) -> SchurElement:
    """``e_B e_A`` for B = E_{h,h+1} + diagonal, in closed form.

    The sum runs over columns p with a_{h+1,p} > 0; each term moves one unit
    from row h+1 to row h in column p, weighted by
    ``q^(sum_{j>p} a_{hj}) [a_{hp}+1]``.
    """
    B, A = mx.as_matrix(B), mx.as_matrix(A)
    _check_pair(B, A)
    h = _chevalley_index(B)
    if co(B) != ro(A):
        raise PreconditionViolated("co(B) != ro(A)")
    n = len(A)
    out = {}
    for p in range(n):
        if A[h + 1][p] == 0:
            continue
        weight = IntPolynomial.monomial(sum(A[h][p + 1:])) * q_integer(A[h][p] + 1)
        rows = [list(row) for row in A]
        rows[h][p] += 1
        rows[h + 1][p] -= 1
        out[tuple(map(tuple, rows))] = weight
    return SchurElement(out)


def _flip(A: Matrix) -> Matrix:
    return mx.reverse(mx.transpose(A))


def chevalley_right(A, B) -> SchurElement:
    """``e_A e_B`` for B = E_{h,h+1} + diagonal.

    Uses ``g_{A,B,C} = g_{rho(B^T), rho(A^T), rho(C^T)}`` where rho reverses
    both index orders; this turns the right factor into a left Chevalley
    factor.
    """
    A, B = mx.as_matrix(A), mx.as_matrix(B)
    _check_pair(A, B)
    _chevalley_index(B)
    if co(A) != ro(B):
        raise PreconditionViolated("co(A) != ro(B)")
    flipped = chevalley_left(_flip(B), _flip(A))
    return SchurElement({_flip(C): c for C, c in flipped.items()})


def _diagonal_partner(n: int, h: int, margin, side: str) -> Matrix | None:
    # Diagonal D with E_{h,h+1} + D having the required column (left) or row (right) sums.
    d = list(margin)
    d[h + 1 if side == "left" else h] -= 1
    if min(d) < 0:
        return None
    return mx.add(mx.elementary(n, h + 1, h + 2), mx.diag(d))


def left_E(i: int, x: SchurElement) -> SchurElement:
    """``E_i x`` via :func:`chevalley_left` (i is 1-based)."""
    out = SchurElement()
    for A, c in x.items():
        B = _diagonal_partner(len(A), i - 1, ro(A), "left")
        if B is not None:
            out = out + chevalley_left(B, A).scale(c)
    return out


def right_E(x: SchurElement, i: int) -> SchurElement:
    """``x E_i`` via :func:`chevalley_right` (i is 1-based)."""
    out = SchurElement()
    for A, c in x.items():
        B = _diagonal_partner(len(A), i - 1, co(A), "right")
        if B is not None:
            out = out + chevalley_right(A, B).scale(c)
    return out


# -- distinguished elements --------------------------------------------------------


def l_element(S, r: int) -> SchurElement:
    """``l_{S,r} = sum over diagonal D of trace r - |S| of e_{S+D}``; zero if |S| > r.

    ``S`` may be a matrix or anything with ``as_matrix()`` (a multisegment).
    """
    S = mx.as_matrix(S.as_matrix() if hasattr(S, "as_matrix") else S)
    s = mx.total(S)
    if s > r:
        return SchurElement()
    return SchurElement({mx.add(S, D): ONE for D in mx.diagonals(len(S), r - s)})


def E(i: int, n: int, r: int) -> SchurElement:
    """The Chevalley generator ``E_i = l_{E_{i,i+1}, r}``."""
    if not 1 <= i < n:
        raise ValueError(f"E_{i} undefined for n = {n}")
    return l_element(mx.elementary(n, i, i + 1), r)


def unit(n: int, r: int) -> SchurElement:
    return l_element(mx.zero(n), r)


def specialize0(x: SchurElement) -> SchurElement:
    """Evaluate every coefficient at q = 0."""
    return x.specialize(0)


ZERO_ELEMENT = SchurElement()
