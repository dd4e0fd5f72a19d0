import json
import random
from multiprocessing import get_context

import pytest

from qschur import matrix as mx
from qschur import schur
from qschur.gfcount import PreconditionViolated
from qschur.poly import ONE, Q
from qschur.quivermod import Multisegment
from qschur.schur import SchurElement, StructureCache, e, l_element

E = mx.elementary


def test_margins():
    assert schur.ro(mx.diag((2, 1))) == schur.co(mx.diag((2, 1))) == (2, 1)
    assert schur.ro(((0, 1), (1, 0))) == schur.co(((0, 1), (1, 0))) == (1, 1)
    A = mx.add(E(3, 1, 2), mx.diag((0, 0, 1)))
    assert schur.ro(A) == (1, 0, 1) and schur.co(A) == (0, 1, 1)


def test_worked_product_is_q():
    assert schur.multiply([[1, 1], [0, 0]], [[0, 1], [1, 0]]) == SchurElement({((1, 1), (0, 0)): Q})


def test_right_unit_by_counting():
    for A in mx.theta(3, 2):
        assert schur.multiply(A, mx.diag(mx.co(A))) == e(A)
        assert schur.multiply(mx.diag(mx.ro(A)), A) == e(A)


def test_vanishing_when_margins_differ():
    assert schur.multiply(mx.diag((2, 0)), mx.diag((1, 1))) == SchurElement()


def test_precondition_different_algebras():
    with pytest.raises(PreconditionViolated):
        schur.multiply(mx.diag((1, 1)), mx.diag((1, 0, 1)))


def test_explicit_primes_give_the_same_polynomial():
    A, B = ((1, 1), (0, 0)), ((0, 1), (1, 0))
    assert schur.multiply(A, B, primes=[2, 3, 5, 7, 11, 13, 17, 19]) == schur.multiply(A, B)


def test_chevalley_left_examples():
    assert schur.chevalley_left([[1, 1], [0, 0]], [[0, 1], [1, 0]]) == SchurElement({((1, 1), (0, 0)): Q})
    assert schur.chevalley_left([[0, 1], [0, 1]], [[0, 0], [1, 1]]) == SchurElement(
        {((1, 0), (0, 1)): ONE, ((0, 1), (1, 0)): ONE}
    )
    with pytest.raises(PreconditionViolated):
        schur.chevalley_left(mx.diag((1, 1)), mx.diag((1, 1)))
    with pytest.raises(PreconditionViolated):
        schur.chevalley_left([[0, 1], [0, 1]], mx.diag((1, 1)))


def test_chevalley_forms_match_counting():
    for n, r in ((2, 1), (2, 2), (2, 3), (3, 1), (3, 2)):
        basis = mx.theta(n, r)
        for B in basis:
            try:
                schur._chevalley_index(B)
            except PreconditionViolated:
                continue
            for A in basis:
                if mx.co(B) == mx.ro(A):
                    assert schur.chevalley_left(B, A) == schur.multiply(B, A)
                if mx.co(A) == mx.ro(B):
                    assert schur.chevalley_right(A, B) == schur.multiply(A, B)


def test_chevalley_right_unit():
    B = mx.add(E(2, 1, 2), mx.diag((0, 1)))
    assert schur.chevalley_right(mx.diag(mx.ro(B)), B) == e(B)


def test_l_element():
    x = l_element(E(3, 1, 2), 2)
    assert len(x) == 3
    assert l_element(mx.zero(3), 2) == schur.unit(3, 2)
    assert len(schur.unit(3, 2)) == 6
    assert l_element(mx.scale(E(3, 1, 2), 3), 2) == SchurElement()
    assert l_element(Multisegment.interval(3, 1, 3), 2) == l_element(E(3, 1, 3), 2)


def test_specialize0():
    A = mx.diag((1, 1))
    assert schur.specialize0(SchurElement({A: Q + 1})) == e(A)
    assert schur.specialize0(SchurElement({A: Q})) == SchurElement()


@pytest.mark.parametrize("r", [2, 3])
def test_generator_product_lines(r):
    n = 3
    E1, E2 = schur.E(1, n, r), schur.E(2, n, r)
    l = lambda A: l_element(A, r)  # noqa: E731
    e12, e23, e13 = E(n, 1, 2), E(n, 2, 3), E(n, 1, 3)
    assert E1 * E2 == l(e13) + l(mx.add(e12, e23))
    assert E2 * E1 == l(mx.add(e12, e23))
    assert E1 * E1 == l(mx.scale(e12, 2)).scale(Q + 1)
    assert E1 * l(e13) == l(mx.add(e12, e13)).scale(Q)
    assert E1 * l(mx.add(e12, e23)) == l(mx.add(e12, e13)) + l(mx.add(mx.scale(e12, 2), e23)).scale(Q + 1)
    assert E2 * E1 * E1 == l(mx.add(mx.scale(e12, 2), e23)).scale(Q + 1)
    assert schur.specialize0(E1 * E2) == l(e13) + l(mx.add(e12, e23))


def test_closed_form_generator_actions_match_counting():
    for n, r in ((3, 2), (3, 3)):
        for i in range(1, n):
            for A in mx.theta(n, r):
                x = e(A)
                assert schur.left_E(i, x) == schur.E(i, n, r) * x
                assert schur.right_E(x, i) == x * schur.E(i, n, r)


def _assoc(triples):
    for A, B, C in triples:
        x, y, z = e(A), e(B), e(C)
        assert (x * y) * z == x * (y * z)


def _composable(basis):
    by_row = {}
    for B in basis:
        by_row.setdefault(mx.ro(B), []).append(B)
    return [(A, B, C) for A in basis for B in by_row.get(mx.co(A), ()) for C in by_row.get(mx.co(B), ())]


def test_associativity_exhaustive_small():
    for n, r in ((2, 1), (2, 2), (3, 1), (3, 2)):
        _assoc(_composable(mx.theta(n, r)))


def test_associativity_sampled_n3_r3():
    triples = _composable(mx.theta(3, 3))
    _assoc(random.Random(3).sample(triples, 60))


def test_unit_is_two_sided():
    for n, r in ((2, 2), (3, 2)):
        one = schur.unit(n, r)
        for A in mx.theta(n, r):
            assert one * e(A) == e(A) == e(A) * one


def test_schur_element_json():
    x = SchurElement({((1, 1), (0, 0)): Q})
    assert x.to_json() == [{"matrix": [[1, 1], [0, 0]], "coeff": ["0", "1"]}]
    assert SchurElement.from_json(json.loads(json.dumps(x.to_json()))) == x


# -- disk cache -----------------------------------------------------------------


def test_cache_round_trip(tmp_path):
    cache = StructureCache(tmp_path)
    A, B = ((1, 1), (0, 0)), ((0, 1), (1, 0))
    assert cache.get(A, B) is None
    cache.put(A, B, schur.multiply(A, B))
    fresh = StructureCache(tmp_path)
    assert fresh.get(A, B) == SchurElement({A: Q})
    doc = json.loads(fresh.path(2, 2).read_text())
    assert list(doc) == ["[[1,1],[0,0]]|[[0,1],[1,0]]"]


def test_cache_hit_skips_counting(tmp_path, monkeypatch):
    A, B = ((1, 1), (0, 0)), ((0, 1), (1, 0))
    cache = StructureCache(tmp_path)
    planted = SchurElement({A: Q + 5})
    cache.put(A, B, planted)
    monkeypatch.setattr(schur, "_memo", {})
    schur.set_cache(cache)
    try:
        assert schur.multiply(A, B) == planted
    finally:
        schur.set_cache(None)
        schur._memo.pop((A, B), None)




def test_concurrent_writers_do_not_lose_entries(tmp_path):
    keys = [(mx.diag((a, 3 - a)), mx.diag((a, 3 - a))) for a in range(4)]

    with get_context("fork").Pool(4) as pool:
        pool.map(_put_one, [(str(tmp_path), a) for a in range(4)] * 3)
    cache = StructureCache(tmp_path)
    for A, B in keys:
        assert cache.get(A, B) == e(A)
    assert not list(tmp_path.glob("*.tmp"))


def _put_one(args):
    directory, a = args
    D = mx.diag((a, 3 - a))
    StructureCache(directory).put_many(2, 3, {(D, D): e(D)})
