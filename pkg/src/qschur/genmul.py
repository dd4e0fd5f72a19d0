"""Generic multiplication on upper triangular indices and its verification suites.

``A o A2`` is the index of the dense orbit among compatible flag triples:
the strict upper part is the generic extension of the modules given by the
strict parts of A and A2, and the diagonal restores the row sums of A.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from . import hall, schur
from . import matrix as mx
from .gfcount import PreconditionViolated
from .matrix import Matrix, co, ro
from .poly import Q, evaluate
from .quivermod import (
    Multisegment,
    dim_vector,
    indec_count,
    multisegments_up_to,
    multisegments_with_dim,
    total_dim,
)
from .schur import SchurElement


class NegativeDiagonal(RuntimeError):
    pass


class NotUnique(RuntimeError):
    pass


class UnknownSuite(ValueError):
    pass


class _Zero:
    """The absorbing zero of the generic product."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Zero"

    def __reduce__(self):
        return (_Zero, ())


ZERO = _Zero()


def _require_upper(*mats: Matrix) -> None:
    for A in mats:
        if not mx.is_upper(A):
            raise PreconditionViolated(f"{A} is not upper triangular")


@lru_cache(maxsize=None)
def _star(M: Multisegment, N: Multisegment) -> Multisegment:
    return hall.monoid_product(M, N)


def generic_multiply(A, A2):
    """``A o A2`` as a matrix, or :data:`ZERO` when co(A) != ro(A2)."""
    A, A2 = mx.as_matrix(A), mx.as_matrix(A2)
    _require_upper(A, A2)
    if len(A) != len(A2) or mx.total(A) != mx.total(A2):
        raise PreconditionViolated("indices from different algebras")
    if co(A) != ro(A2):
        return ZERO
    X = _star(Multisegment.from_matrix(A), Multisegment.from_matrix(A2)).as_matrix()
    d = [a - b for a, b in zip(ro(A), ro(X))]
    if min(d) < 0:
        raise NegativeDiagonal(f"{A} o {A2}: diagonal {d}")
    out = mx.add(X, mx.diag(d))
    if co(out) != co(A2):
        raise NegativeDiagonal(f"{A} o {A2}: column sums {co(out)} != {co(A2)}")
    return out


def generic_multiply_oracle(A, A2):
    """``A o A2`` read off the support of ``e_A e_A2`` (flag counting)."""
    A, A2 = mx.as_matrix(A), mx.as_matrix(A2)
    _require_upper(A, A2)
    if co(A) != ro(A2):
        return ZERO
    support = schur.multiply(A, A2).keys()
    by_module = {Multisegment.from_matrix(C): C for C in support}
    least = hall.least_element(by_module)
    if least is None or len(by_module) != len(support):
        raise NotUnique(f"support of e_A e_A2 has no least element: {support}")
    return by_module[least]


def circ(x: SchurElement, y: SchurElement) -> SchurElement:
    """Bilinear extension of ``o`` to combinations of upper triangular indices."""
    out = SchurElement()
    for A, a in x.items():
        for B, b in y.items():
            C = generic_multiply(A, B)
            if C is not ZERO:
                out = out + SchurElement({C: a * b})
    return out


def theta(M: Multisegment, r: int) -> SchurElement:
    return schur.l_element(M, r)


def gamma(M: Multisegment, r: int) -> SchurElement:
    if indec_count(M) > r:
        return SchurElement()
    return theta(M, r)


def closure_element(M: Multisegment, r: int) -> SchurElement:
    """``b_M = sum of l_Y`` over degenerations Y of M with at most r summands."""
    out = SchurElement()
    for Y in hall.closure_sum(M, max_summands=r):
        out = out + schur.l_element(Y, r)
    return out


# -- verification suites ------------------------------------------------------------


@dataclass
class Report:
    suite: str
    parameters: dict
    cases_run: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "parameters": self.parameters,
            "cases_run": self.cases_run,
            "failures": self.failures,
        }


def _js(x):
    """JSON view of the values that appear in suite reports."""
    if x is ZERO:
        return "zero"
    if isinstance(x, (SchurElement, hall.HallElement)):
        return x.to_json()
    if isinstance(x, Multisegment):
        return x.to_json()
    if isinstance(x, tuple) and x and isinstance(x[0], tuple):
        return mx.to_json(x)
    if isinstance(x, (list, tuple)):
        return [_js(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


def _fail(inputs, expected, got) -> dict:
    return {"inputs": _js(inputs), "expected": _js(expected), "got": _js(got)}


def _run(check: Callable, cases: list, jobs: int) -> tuple[int, list]:
    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(check, cases, chunksize=max(1, len(cases) // (4 * jobs))))
    else:
        results = [check(c) for c in cases]
    return len(cases), [f for f in results if f is not None]


def _modules(n: int, max_dim: int) -> list[Multisegment]:
    return sorted(multisegments_up_to(n, max_dim))


# serre


def _serre_case(case):
    n, r, i, j, form = case
    Ej = schur.E(j, n, r)
    if abs(i - j) == 1:
        EiEj = schur.left_E(i, Ej)
        first = schur.left_E(i, EiEj)
        mid = schur.right_E(EiEj, i)
        last = schur.left_E(j, schur.right_E(schur.E(i, n, r), i))
        if form == "literal" or j == i + 1:
            got = first - mid.scale(Q + 1) + last.scale(Q)
        else:
            # j = i - 1: the arrow points the other way, so the outer weights swap.
            got = first.scale(Q) - mid.scale(Q + 1) + last
    else:
        got = schur.left_E(i, Ej) - schur.right_E(Ej, i)
    return None if not got else _fail([i, j], [], got)


def _cases_serre(n, r, bounds):
    form = bounds.get("form", "oriented")
    if form not in ("oriented", "literal"):
        raise ValueError(f"unknown Serre form {form!r}")
    return [(n, r, i, j, form) for i in range(1, n) for j in range(1, n) if i != j]


# assoc


def _assoc_case(case):
    A, B, C = case
    AB, BC = generic_multiply(A, B), generic_multiply(B, C)
    left = ZERO if AB is ZERO else generic_multiply(AB, C)
    right = ZERO if BC is ZERO else generic_multiply(A, BC)
    return None if left == right else _fail(case, left, right)


def _cases_assoc(n, r, bounds):
    upper = mx.theta_upper(n, r)
    by_row: dict = {}
    for B in upper:
        by_row.setdefault(ro(B), []).append(B)
    samples = bounds.get("samples")
    if samples is None:
        return [(A, B, C) for A in upper for B in by_row.get(co(A), ()) for C in by_row.get(co(B), ())]
    rng = random.Random(bounds.get("seed", 0))
    out = []
    while len(out) < samples:
        A = rng.choice(upper)
        B = rng.choice(by_row[co(A)])
        C = rng.choice(by_row[co(B)])
        out.append((A, B, C))
    return out


# unit


def _unit_case(case):
    n, r, A, kind = case
    one = schur.unit(n, r)
    x = schur.e(A)
    if kind == "circ":
        left, right = circ(one, x), circ(x, one)
    else:
        left, right = schur.product(one, x), schur.product(x, one)
    if left == x and right == x:
        return None
    return _fail([A, kind], x, [left, right])


def _cases_unit(n, r, bounds):
    cases = [(n, r, A, "circ") for A in mx.theta_upper(n, r)]
    if bounds.get("polynomial", True):
        cases += [(n, r, A, "schur") for A in mx.theta(n, r)]
    return cases


# gamma_hom and ker_gamma


def _gamma_hom_case(case):
    r, M, N = case
    want = gamma(_star(M, N), r)
    got = circ(gamma(M, r), gamma(N, r))
    return None if want == got else _fail([M, N], want, got)


def _cases_gamma_hom(n, r, bounds):
    mods = _modules(n, bounds.get("max_dim", 4))
    return [(r, M, N) for M in mods for N in mods]


def _ker_gamma_case(case):
    r, M = case
    vanishes = not gamma(M, r)
    return None if vanishes == (indec_count(M) > r) else _fail([M], indec_count(M) > r, vanishes)


def _cases_ker_gamma(n, r, bounds):
    return [(r, M) for M in _modules(n, bounds.get("max_dim", 4))]


# mult_basis and zero_schur


def strict_modules(n: int, r: int) -> list[Multisegment]:
    return sorted({Multisegment.from_matrix(A) for s in range(r + 1) for A in mx.theta_upper(n, s)})


def _mult_basis_case(case):
    r, M, N = case
    got = schur.specialize0(schur.product(theta(M, r), theta(N, r)))
    want = gamma(_star(M, N), r)
    return None if got == want else _fail([M, N], want, got)


def _cases_pairs(n, r, bounds):
    mods = strict_modules(n, r)
    return [(r, M, N) for M in mods for N in mods]


def _zero_schur_case(case):
    r, M, N = case
    got = schur.specialize0(schur.product(closure_element(M, r), closure_element(N, r)))
    want = closure_element(_star(M, N), r)
    return None if got == want else _fail([M, N], want, got)


# theta_hom


def _theta_hom_case(case):
    r, M, N = case
    want = SchurElement()
    for X, c in hall.hall_product(M, N).items():
        want = want + schur.l_element(X, r).scale(c)
    got = schur.product(schur.l_element(M, r), schur.l_element(N, r))
    return None if want == got else _fail([M, N], want, got)


def _cases_theta_hom(n, r, bounds):
    mods = _modules(n, bounds.get("max_dim", r))
    pairs = [(r, M, N) for M in mods for N in mods]
    samples = bounds.get("samples")
    if samples is not None and samples < len(pairs):
        pairs = random.Random(bounds.get("seed", 0)).sample(pairs, samples)
    return pairs


# Hall and monoid checks


def _hall_pairs(n, bounds):
    limit = bounds.get("max_dim", 5)
    sized = [(M, total_dim(M)) for M in _modules(n, limit)]
    return [(M, N) for M, a in sized for N, b in sized if a + b <= limit]


def _hall_zero_case(case):
    M, N = case
    G = _star(M, N)
    dv = tuple(a + b for a, b in zip(dim_vector(M), dim_vector(N)))
    for X in multisegments_with_dim(M.n, dv):
        value = evaluate(hall.hall_polynomial(X, M, N), 0)
        if value != (1 if X == G else 0):
            return _fail([X, M, N], 1 if X == G else 0, value)
    return None


def _hall_closure_case(case):
    M, N = case

    def bracket(Z):
        return hall.HallElement({Y: 1 for Y in hall.closure_sum(Z)})

    got = hall.hall_multiply(bracket(M), bracket(N)).specialize(0)
    want = bracket(_star(M, N))
    return None if got == want else _fail([M, N], want, got)


def _cases_hall(n, r, bounds):
    return _hall_pairs(n, bounds)


def _monoid_assoc_case(case):
    M, N, L = case
    left, right = _star(_star(M, N), L), _star(M, _star(N, L))
    return None if left == right else _fail(case, left, right)


def _cases_monoid_assoc(n, r, bounds):
    limit = bounds.get("max_dim", 5)
    sized = [(M, total_dim(M)) for M in _modules(n, limit)]
    return [
        (M, N, L)
        for M, a in sized
        for N, b in sized
        if a + b <= limit
        for L, c in sized
        if a + b + c <= limit
    ]


def _generic_oracle_case(case):
    A, B = case
    got, want = generic_multiply(A, B), generic_multiply_oracle(A, B)
    return None if got == want else _fail([A, B], want, got)


def _cases_generic_oracle(n, r, bounds):
    upper = mx.theta_upper(n, r)
    return [(A, B) for A in upper for B in upper if co(A) == ro(B)]


def _generic_ext_case(case):
    M, N = case
    try:
        hall.generic_extension(M, N)
    except (hall.OracleDisagreement, hall.EmptySupport) as exc:
        return _fail([M, N], "agreement", str(exc))
    return None


SUITES: dict = {
    "serre": (_cases_serre, _serre_case),
    "assoc": (_cases_assoc, _assoc_case),
    "unit": (_cases_unit, _unit_case),
    "gamma_hom": (_cases_gamma_hom, _gamma_hom_case),
    "ker_gamma": (_cases_ker_gamma, _ker_gamma_case),
    "mult_basis": (_cases_pairs, _mult_basis_case),
    "zero_schur": (_cases_pairs, _zero_schur_case),
    "theta_hom": (_cases_theta_hom, _theta_hom_case),
    "hall_zero": (_cases_hall, _hall_zero_case),
    "hall_closure": (_cases_hall, _hall_closure_case),
    "monoid_assoc": (_cases_monoid_assoc, _monoid_assoc_case),
    "generic_ext": (_cases_hall, _generic_ext_case),
    "generic_oracle": (_cases_generic_oracle, _generic_oracle_case),
}


def verify_suite(name: str, n: int, r: int, bounds: dict | None = None, jobs: int = 1) -> Report:
    """Run a named check over its exhaustive (or sampled) case list.

    ``bounds`` may hold ``max_dim`` (module dimension cap), ``samples`` and
    ``seed`` (random sampling), ``polynomial=False`` (unit suite: skip the
    counting-based half), or ``form="literal"`` (Serre suite: apply
    ``E_i^2 E_j - (q+1) E_i E_j E_i + q E_j E_i^2`` to both neighbours j = i +- 1
    instead of mirroring the weights when j = i - 1).
    """
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    bounds = dict(bounds or {})
    make_cases, check = SUITES[name]
    cases = make_cases(n, r, bounds)
    ran, failures = _run(check, cases, jobs)
    return Report(name, {"n": n, "r": r, **bounds}, ran, failures)
