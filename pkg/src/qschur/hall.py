"""Hall numbers, Hall polynomials and the generic-extension monoid.

Hall numbers ``F^X_{MN}`` count submodules ``U <= X`` with ``U ~ N`` and
``X/U ~ M``. Two counting routes are available over F_p:

* :func:`hall_number` enumerates subrepresentations of an explicit
  realization of ``X`` directly;
* :func:`hall_number_ext` enumerates Ext^1(M, N) classes and applies
  Riedtmann's formula
  ``F^X_{MN} = |Ext^1(M,N)_X| |Aut X| / (|Aut M| |Aut N| |Hom(M,N)|)``.

:func:`hall_polynomial` interpolates whichever route is cheaper at each
prime. Generic extensions are found from the support of the Hall product
(least element in the degeneration order) and checked against the explicit
one-simple-at-a-time rules of :func:`monoid_product`.
"""

from __future__ import annotations

import threading
from collections import Counter
from functools import lru_cache
from itertools import product

from . import gfcount
from .poly import (
    IntPolynomial,
    PolyCombination,
    evaluate,
    fit_counts,
    gl_order,
)
from .quivermod import (
    DimVectorMismatch,
    Multisegment,
    RankTable,
    Representation,
    deg_leq,
    dim_vector,
    end_dim,
    euler_form,
    ext_dim,
    hom_dim,
    iso_type,
    iso_type_from_ranks,
    mat_mul,
    multisegments_with_dim,
    realize,
)


class OracleDisagreement(RuntimeError):
    pass


class EmptySupport(RuntimeError):
    pass


class HallElement(PolyCombination):
    """Linear combination of isomorphism classes with polynomial coefficients."""

    def to_json(self) -> list[dict]:
        return [
            {"multisegment": M.to_json(), "polynomial": c.to_json()}
            for M, c in self.items()
        ]


def _check_dims(X: Multisegment, M: Multisegment, N: Multisegment):
    if not (X.n == M.n == N.n):
        raise ValueError("modules over different quivers")
    want = tuple(a + b for a, b in zip(dim_vector(M), dim_vector(N)))
    if dim_vector(X) != want:
        raise DimVectorMismatch(f"dim X = {dim_vector(X)} but dim M + dim N = {want}")


# -- automorphism groups ----------------------------------------------------


@lru_cache(maxsize=None)
def aut_order(M: Multisegment) -> IntPolynomial:
    """|Aut M| as a polynomial in q.

    Every interval module has endomorphism ring k, so End(M) modulo its
    radical is a product of matrix rings, one per isotypic summand.
    """
    mults = [k for _, _, k in M.triples()]
    semisimple = sum(k * k for k in mults)
    out = IntPolynomial.monomial(end_dim(M) - semisimple)
    for k in mults:
        out = out * gl_order(k)
    return out


# -- route 1: submodule enumeration ------------------------------------------


def _preimage(phi, U, cols_in: int, p: int):
    """Basis of {v in F_p^cols_in : phi v in span(U)}; ``phi`` is a list of rows."""
    rows_out = len(phi)
    if cols_in == 0:
        return ()
    if rows_out == 0:
        return gfcount.rref([[1 if a == b else 0 for b in range(cols_in)] for a in range(cols_in)], p)
    k = len(U)
    # unknowns (v, c): phi v - U^T c = 0
    eqs = [
        list(phi[a]) + [(-U[t][a]) % p for t in range(k)]
        for a in range(rows_out)
    ]
    ker = gfcount.nullspace(eqs, cols_in + k, p)
    return gfcount.rref([list(sol[:cols_in]) for sol in ker], p)


def _subspaces_of(W, d: int, width: int, p: int):
    """All d-dimensional subspaces of span(W) as RREF bases in F_p^width."""
    for sub in gfcount.grassmannian(d, len(W), p):
        rows = [
            [sum(coef * W[t][c] for t, coef in enumerate(row)) % p for c in range(width)]
            for row in sub
        ]
        yield gfcount.rref(rows, p)


def subrepresentations(rep: Representation, dv) -> "iter":
    """Every subrepresentation of ``rep`` with dimension vector ``dv``."""
    p = rep.p
    dims = rep.dims
    last = len(dims) - 1

    def rec(l: int, chosen: list):
        if l < 0:
            yield tuple(reversed(chosen))
            return
        if l == last:
            W = gfcount.rref([[1 if a == b else 0 for b in range(dims[l])] for a in range(dims[l])], p) if dims[l] else ()
        else:
            W = _preimage(rep.maps[l], chosen[-1], dims[l], p)
        if dv[l] > len(W):
            return
        for U in _subspaces_of(W, dv[l], dims[l], p):
            yield from rec(l - 1, chosen + [U])

    yield from rec(last, [])


@lru_cache(maxsize=4096)
def submodule_census(X: Multisegment, dv: tuple, p: int) -> dict:
    """Counter of (iso type of X/U, iso type of U) over subrepresentations U of dim ``dv``."""
    rep = realize(X, p)
    n = X.n
    images = {}
    for i in range(1, n):
        for j in range(i + 1, n):
            C = rep.composite(i, j)
            cols = [list(col) for col in zip(*C)] if C and C[0] else []
            images[(i, j)] = gfcount.rref(cols, p) if cols else ()
    tally: Counter = Counter()
    for U in subrepresentations(rep, dv):
        sub_r = {}
        quo_r = {}
        for i in range(1, n):
            sub_r[(i, i)] = len(U[i - 1])
            quo_r[(i, i)] = rep.dims[i - 1] - len(U[i - 1])
            for j in range(i + 1, n):
                if U[i - 1]:
                    C = rep.composite(i, j)
                    img = [
                        [sum(C[a][t] * v[t] for t in range(len(v))) % p for a in range(len(C))]
                        for v in U[i - 1]
                    ]
                    sub_r[(i, j)] = gfcount.rank(img, p) if img and img[0] else 0
                else:
                    sub_r[(i, j)] = 0
                both = list(images[(i, j)]) + list(U[j - 1])
                quo_r[(i, j)] = (gfcount.rank(both, p) if both else 0) - len(U[j - 1])
        tally[(iso_type_from_ranks(RankTable(n, quo_r)), iso_type_from_ranks(RankTable(n, sub_r)))] += 1
    return dict(tally)


def hall_number(X: Multisegment, M: Multisegment, N: Multisegment, p: int) -> int:
    """F^X_{MN} over F_p by enumerating subrepresentations of X."""
    _check_dims(X, M, N)
    return submodule_census(X, dim_vector(N), p).get((M, N), 0)


# -- route 2: Ext classes and Riedtmann's formula ----------------------------


def _ext_complement(repM: Representation, repN: Representation):
    """Cocycle coordinates spanning a complement of the coboundaries.

    A cocycle is a tuple of matrices ``z_l : M_l -> N_{l+1}``, flattened
    row-major arrow by arrow. Returns (shapes, complement coordinate list).
    """
    p = repM.p
    m, nn = repM.dims, repN.dims
    arrows = len(m) - 1
    shapes = [(nn[l + 1], m[l]) for l in range(arrows)]
    offsets = []
    off = 0
    for rows, cols in shapes:
        offsets.append(off)
        off += rows * cols
    width = off
    if width == 0:
        return shapes, offsets, []
    gens = []
    for l in range(len(m)):
        for a in range(nn[l]):
            for b in range(m[l]):
                # h_l = unit matrix e_{ab}: M_l -> N_l; coboundary N_phi h - h M_phi
                vec = [0] * width
                if l < arrows:  # N_phi_l h_l lands on arrow l
                    Nphi = repN.maps[l]
                    rows, cols = shapes[l]
                    for x in range(rows):
                        val = Nphi[x][a] if nn[l] else 0
                        if val:
                            vec[offsets[l] + x * cols + b] += val
                if l >= 1:  # - h_l M_phi_{l-1} lands on arrow l-1
                    Mphi = repM.maps[l - 1]
                    rows, cols = shapes[l - 1]
                    for y in range(cols):
                        val = Mphi[b][y] if m[l] else 0
                        if val:
                            vec[offsets[l - 1] + a * cols + y] -= val
                gens.append([v % p for v in vec])
    B = gfcount.rref(gens, p) if gens else ()
    pivots = {next(c for c, x in enumerate(row) if x) for row in B}
    return shapes, offsets, [c for c in range(width) if c not in pivots]


def _block_maps(repM, repN, shapes, offsets, z):
    maps = []
    for l, (rows, cols) in enumerate(shapes):
        Nphi, Mphi = repN.maps[l], repM.maps[l]
        n_src, m_src = repN.dims[l], repM.dims[l]
        n_dst, m_dst = repN.dims[l + 1], repM.dims[l + 1]
        mat = []
        for x in range(n_dst):
            mat.append(
                [Nphi[x][c] for c in range(n_src)]
                + [z[offsets[l] + x * cols + c] for c in range(m_src)]
            )
        for x in range(m_dst):
            mat.append([0] * n_src + [Mphi[x][c] for c in range(m_src)])
        maps.append(mat)
    return maps


def extension_representation(M: Multisegment, N: Multisegment, z, p: int) -> Representation:
    """The representation on N ⊕ M with block maps [[N, z], [0, M]]; N is a subrepresentation."""
    repM, repN = realize(M, p), realize(N, p)
    shapes, offsets, _ = _ext_complement(repM, repN)
    maps = _block_maps(repM, repN, shapes, offsets, z)
    dims = tuple(a + b for a, b in zip(repN.dims, repM.dims))
    return Representation(p, dims, tuple(maps))


def cocycle_width(M: Multisegment, N: Multisegment) -> int:
    m, nn = dim_vector(M), dim_vector(N)
    return sum(nn[l + 1] * m[l] for l in range(len(m) - 1))


@lru_cache(maxsize=4096)
def extension_census(M: Multisegment, N: Multisegment, p: int) -> dict:
    """Counter X -> |{classes in Ext^1(M, N) with middle term X}|."""
    repM, repN = realize(M, p), realize(N, p)
    shapes, offsets, free = _ext_complement(repM, repN)
    if len(free) != ext_dim(M, N):
        raise AssertionError(
            f"complement of coboundaries has dim {len(free)}, expected ext = {ext_dim(M, N)}"
        )
    width = offsets[-1] + shapes[-1][0] * shapes[-1][1] if shapes else 0
    dims = tuple(a + b for a, b in zip(repN.dims, repM.dims))
    tally: Counter = Counter()
    z = [0] * width
    for values in product(range(p), repeat=len(free)):
        for c, v in zip(free, values):
            z[c] = v
        maps = _block_maps(repM, repN, shapes, offsets, z)
        tally[iso_type(Representation(p, dims, tuple(maps)))] += 1
    return dict(tally)


def hall_number_ext(X: Multisegment, M: Multisegment, N: Multisegment, p: int) -> int:
    """F^X_{MN} over F_p from Ext^1 classes and Riedtmann's formula."""
    _check_dims(X, M, N)
    cnt = extension_census(M, N, p).get(X, 0)
    if not cnt:
        return 0
    num = cnt * evaluate(aut_order(X), p)
    den = evaluate(aut_order(M), p) * evaluate(aut_order(N), p) * p ** hom_dim(M, N)
    if num % den:
        raise AssertionError(f"Riedtmann quotient not integral for {X}, {M}, {N} at {p}")
    return num // den


# -- Hall polynomials ---------------------------------------------------------


def _gauss_count(m: int, k: int, p: int) -> int:
    num = den = 1
    for i in range(k):
        num *= p ** (m - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def grassmannian_degree_bound(X: Multisegment, N: Multisegment) -> int:
    """sum_i n_i (x_i - n_i): dimension of the ambient product of Grassmannians."""
    return sum(b * (a - b) for a, b in zip(dim_vector(X), dim_vector(N)))


def degree_bound(X: Multisegment, M: Multisegment, N: Multisegment) -> int:
    """A valid upper bound for deg F^X_{MN}.

    The smallest of: the Grassmannian bound; hom(N, X) - end(N) (submodules
    isomorphic to N number at most q^hom(N,X) / |Aut N|); and
    end(X) - end(M) - end(N) - <M, N> (Riedtmann with |Ext_X| <= q^ext).
    """
    bounds = [
        grassmannian_degree_bound(X, N),
        hom_dim(N, X) - end_dim(N),
        end_dim(X) - end_dim(M) - end_dim(N) - euler_form(dim_vector(M), dim_vector(N)),
    ]
    return max(0, min(bounds))


def _count(X: Multisegment, M: Multisegment, N: Multisegment, p: int) -> int:
    sub_cost = 1
    for a, b in zip(dim_vector(X), dim_vector(N)):
        sub_cost *= _gauss_count(a, b, p)
    ext_cost = p ** ext_dim(M, N)
    if ext_cost <= sub_cost:
        return hall_number_ext(X, M, N, p)
    return hall_number(X, M, N, p)


_poly_cache: dict = {}
_poly_lock = threading.Lock()


def hall_polynomial(X: Multisegment, M: Multisegment, N: Multisegment, primes=None) -> IntPolynomial:
    """The Hall polynomial F^X_{MN}(q), cached by (X, M, N)."""
    _check_dims(X, M, N)
    key = (X, M, N)
    if primes is None:
        with _poly_lock:
            if key in _poly_cache:
                return _poly_cache[key]
    P = fit_counts(lambda p: _count(X, M, N, p), degree_bound(X, M, N), primes)
    if primes is None:
        with _poly_lock:
            _poly_cache[key] = P
    return P


def hall_product(M: Multisegment, N: Multisegment) -> HallElement:
    """M N = sum over X of F^X_{MN}(q) X."""
    if M.n != N.n:
        raise ValueError("modules over different quivers")
    dv = tuple(a + b for a, b in zip(dim_vector(M), dim_vector(N)))
    return HallElement({X: hall_polynomial(X, M, N) for X in multisegments_with_dim(M.n, dv)})


def hall_multiply(x: HallElement, y: HallElement) -> HallElement:
    out = HallElement()
    for M, a in x.items():
        for N, b in y.items():
            out = out + hall_product(M, N).scale(a * b)
    return out


# -- generic extensions ------------------------------------------------------


def _left_simple(i: int, Y: Multisegment) -> Multisegment:
    """S_i * Y: glue S_i on top of the longest interval starting at i + 1."""
    n = Y.n
    for d in range(n, i + 1, -1):
        if i + 1 < d and i + 1 <= n - 1 and Y.mult[i][d - 1]:
            return Y.with_change(i + 1, d, -1).with_change(i, d, 1)
    return Y.with_change(i, i + 1, 1)


def simple_word(M: Multisegment) -> list[int]:
    """Indices i_1, ..., i_k with M = S_{i_1} * ... * S_{i_k}.

    Summands are taken in decreasing order of their first vertex (so Ext^1
    between earlier and later ones vanishes) and M(a, b) = S_a * ... * S_{b-1}.
    """
    word = []
    for a, b in sorted(M.intervals(), key=lambda iv: -iv[0]):
        word.extend(range(a, b))
    return word


def monoid_product(M: Multisegment, N: Multisegment) -> Multisegment:
    """M * N by the explicit rules, one simple at a time."""
    if M.n != N.n:
        raise ValueError("modules over different quivers")
    X = N
    for i in reversed(simple_word(M)):
        X = _left_simple(i, X)
    return X


def least_element(candidates):
    """The unique element below every other in the degeneration order, else None."""
    cands = list(candidates)
    for X in cands:
        if all(deg_leq(X, Y) for Y in cands):
            return X
    return None


def generic_extension(M: Multisegment, N: Multisegment, method: str = "support") -> Multisegment:
    """The isomorphism class M * N of the generic extension (quotient M, submodule N).

    ``method="support"`` takes the least element of the Hall-product support
    under the degeneration order and requires it to agree with the explicit
    rules; ``method="rules"`` uses :func:`monoid_product` alone.
    """
    if method == "rules":
        return monoid_product(M, N)
    if method != "support":
        raise ValueError(f"unknown method {method!r}")
    support = [X for X, c in hall_product(M, N).items() if c]
    if not support:
        raise EmptySupport(f"no extension of {M} by {N}")
    X = least_element(support)
    if X is None:
        raise OracleDisagreement(f"support of {M} . {N} has no least element: {support}")
    other = monoid_product(M, N)
    if other != X:
        raise OracleDisagreement(f"support gives {X}, explicit rules give {other}")
    return X


def closure_sum(M: Multisegment, max_summands: int | None = None) -> list[Multisegment]:
    """Classes in the orbit closure of M (all Y with M <= Y), optionally capped by summand count."""
    out = []
    for Y in multisegments_with_dim(M.n, dim_vector(M)):
        if deg_leq(M, Y) and (max_summands is None or sum(k for *_, k in Y.triples()) <= max_summands):
            out.append(Y)
    return out
