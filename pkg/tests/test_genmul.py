import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from qschur import genmul, hall, schur
from qschur import matrix as mx
from qschur.genmul import ZERO, gamma, generic_multiply, generic_multiply_oracle, theta
from qschur.gfcount import PreconditionViolated, intermediate_counts
from qschur.quivermod import Multisegment, multisegments_up_to
from qschur.schur import SchurElement, l_element

E = mx.elementary
I = Multisegment.interval
S = Multisegment.simple


def test_worked_generic_product():
    A = mx.add(E(3, 1, 2), mx.diag((0, 0, 1)))
    A2 = mx.add(E(3, 2, 3), mx.diag((0, 0, 1)))
    want = mx.add(E(3, 1, 3), mx.diag((0, 0, 1)))
    assert generic_multiply(A, A2) == want == generic_multiply_oracle(A, A2)


def test_unit_and_zero():
    for A in mx.theta_upper(3, 2):
        assert generic_multiply(A, mx.diag(mx.co(A))) == A
        assert generic_multiply(mx.diag(mx.ro(A)), A) == A
    assert generic_multiply(mx.diag((2, 0, 0)), mx.diag((0, 2, 0))) is ZERO


def test_requires_upper_triangular():
    with pytest.raises(PreconditionViolated):
        generic_multiply(((0, 0), (1, 0)), mx.diag((1, 0)))


def test_zero_survives_pickling():
    import pickle

    assert pickle.loads(pickle.dumps(ZERO)) is ZERO


@pytest.mark.parametrize("n,r", [(2, 2), (3, 1), (3, 2), (3, 3)])
def test_oracle_agreement_exhaustive(n, r):
    upper = mx.theta_upper(n, r)
    for A in upper:
        for B in upper:
            assert generic_multiply(A, B) == generic_multiply_oracle(A, B)


def test_composable_pairs_always_have_intermediate_flags():
    for r in (1, 2):
        basis = mx.theta(3, r)
        for A in basis:
            for B in basis:
                if mx.co(A) == mx.ro(B):
                    assert sum(intermediate_counts(A, B, 2).values()) > 0
                else:
                    assert schur.multiply(A, B) == SchurElement()


def test_theta_examples():
    n, r = 3, 2
    assert theta(I(n, 1, 3), r) == l_element(E(n, 1, 3), r)
    assert theta(S(n, 1), r) == schur.E(1, n, r)
    assert theta(S(n, 1, 3), r) == SchurElement()


def test_gamma_examples():
    assert gamma(Multisegment.zero(3), 2) == schur.unit(3, 2)
    assert gamma(S(3, 1, 3), 2) == SchurElement()
    assert gamma(I(3, 1, 3), 2) == l_element(E(3, 1, 3), 2)


def test_circ_is_bilinear_with_absorbing_zero():
    one = schur.unit(3, 2)
    x = schur.e(mx.add(E(3, 1, 2), mx.diag((0, 1, 0))))
    assert genmul.circ(one, x) == x == genmul.circ(x, one)
    assert genmul.circ(schur.e(mx.diag((2, 0, 0))), schur.e(mx.diag((0, 2, 0)))) == SchurElement()


@pytest.mark.parametrize(
    "name,n,r,bounds",
    [
        ("serre", 3, 2, {}),
        ("serre", 4, 3, {}),
        ("assoc", 3, 2, {}),
        ("unit", 3, 2, {}),
        ("gamma_hom", 3, 3, {"max_dim": 3}),
        ("ker_gamma", 4, 2, {"max_dim": 4}),
        ("zero_schur", 3, 2, {}),
        ("theta_hom", 3, 2, {}),
        ("hall_closure", 3, 0, {"max_dim": 4}),
        ("monoid_assoc", 3, 0, {"max_dim": 4}),
        ("generic_ext", 3, 0, {"max_dim": 4}),
        ("generic_oracle", 3, 2, {}),
    ],
)
def test_suites_pass(name, n, r, bounds):
    report = genmul.verify_suite(name, n, r, bounds)
    assert report.cases_run > 0
    assert report.passed, report.failures[:3]


def test_literal_serre_form_fails_for_the_reversed_pair():
    report = genmul.verify_suite("serre", 3, 2, {"form": "literal"})
    assert [f["inputs"] for f in report.failures] == [[2, 1]]


def test_mult_basis_counterexample():
    # l_{E12} l_{E23} at q = 0 is a sum of two basis elements.
    report = genmul.verify_suite("mult_basis", 3, 2)
    assert not report.passed
    r = 2
    got = schur.specialize0(l_element(E(3, 1, 2), r) * l_element(E(3, 2, 3), r))
    assert got == l_element(E(3, 1, 3), r) + l_element(mx.add(E(3, 1, 2), E(3, 2, 3)), r)


def test_report_json_and_parallel_determinism():
    a = genmul.verify_suite("mult_basis", 3, 2)
    b = genmul.verify_suite("mult_basis", 3, 2, jobs=2)
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    assert set(a.to_json()) == {"suite", "parameters", "cases_run", "failures"}
    assert set(a.failures[0]) == {"inputs", "expected", "got"}


def test_unknown_suite():
    with pytest.raises(genmul.UnknownSuite):
        genmul.verify_suite("nope", 3, 2)


upper33 = st.sampled_from(mx.theta_upper(3, 3))


@given(upper33, upper33)
def test_generic_product_margins(A, B):
    C = generic_multiply(A, B)
    if mx.co(A) != mx.ro(B):
        assert C is ZERO
    else:
        assert mx.is_upper(C) and mx.ro(C) == mx.ro(A) and mx.co(C) == mx.co(B)


mods4 = st.sampled_from(multisegments_up_to(4, 3))


@settings(deadline=None)
@given(mods4, mods4, st.integers(min_value=1, max_value=3))
def test_gamma_morphism_random(M, N, r):
    assert gamma(hall.monoid_product(M, N), r) == genmul.circ(gamma(M, r), gamma(N, r))
