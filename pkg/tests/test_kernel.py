"""Kernel construction, structural maps, predicates, and category laws."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given

from pmc import kernel as K
from pmc.errors import (
    NegativeProbability,
    RowMassExceedsOne,
    TypeMismatch,
    UnknownLabel,
)
from pmc.kernel import Alphabet, Obj, SubKernel, UNIT, make_kernel, obj

from conftest import kernels, objects

B = Alphabet("bool", ("t", "f"))
BO = obj(B)
HALF = Fraction(1, 2)


def bk(table):
    return make_kernel(BO, BO, table)


# -- construction and validation --------------------------------------------


def test_make_kernel_accepts_bare_labels_and_strings():
    f = bk({"t": {"t": "1/2", "f": "1/4"}, "f": {"f": 1}})
    assert f.prob("t", "t") == HALF
    assert f.prob("t", "f") == Fraction(1, 4)
    assert f.prob("f", "f") == 1
    assert f.prob("f", "t") == 0


def test_make_kernel_drops_zero_entries_and_empty_rows():
    f = bk({"t": {"t": 0}, "f": {"f": 1}})
    assert ("t",) not in f.rows
    assert f.mass("t") == 0


def test_make_kernel_rejects_negative_probability():
    with pytest.raises(NegativeProbability):
        bk({"t": {"t": Fraction(-1, 2)}})


def test_make_kernel_rejects_row_mass_above_one():
    with pytest.raises(RowMassExceedsOne) as err:
        bk({"t": {"t": HALF, "f": Fraction(3, 4)}})
    assert "('t',)" in str(err.value)


def test_make_kernel_rejects_unknown_labels():
    with pytest.raises(UnknownLabel):
        bk({"x": {"t": 1}})
    with pytest.raises(UnknownLabel):
        bk({"t": {"x": 1}})
    with pytest.raises(UnknownLabel):
        make_kernel(BO, BO, {("t", "t"): {"t": 1}})


def test_alphabet_rejects_duplicates_and_empty():
    with pytest.raises(UnknownLabel):
        Alphabet("bad", ("a", "a"))
    with pytest.raises(UnknownLabel):
        Alphabet("bad", ())


def test_compose_requires_matching_types():
    with pytest.raises(TypeMismatch):
        K.compose(K.discard(BO), K.identity(BO))


# -- failure-mass bookkeeping ------------------------------------------------


def test_failure_probability_masses():
    f = bk({"t": {"t": HALF, "f": Fraction(1, 4)}, "f": {"f": 1}})
    fp = K.failure_probability(f)
    assert fp.prob("t", ()) == Fraction(3, 4)
    assert fp.prob("f", ()) == 1


# -- structural maps ---------------------------------------------------------


def test_copy_discard_swap_compare_shapes():
    A = Alphabet("pair", ("x", "y"))
    AB = obj(A, B)
    cp = K.copy(AB)
    assert cp.prob(("x", "t"), ("x", "t", "x", "t")) == 1
    assert K.discard(AB).prob(("x", "t"), ()) == 1
    sw = K.swap(obj(A), BO)
    assert sw.prob(("x", "t"), ("t", "x")) == 1
    cmp_ = K.compare(BO)
    assert cmp_.prob(("t", "t"), "t") == 1
    assert cmp_.mass(("t", "f")) == 0


def test_copy_on_tensor_interleaves():
    # copy on a two-factor object duplicates the whole tuple.
    A = Alphabet("pair", ("x", "y"))
    cp = K.copy(obj(A, B))
    for a in A.labels:
        for b in B.labels:
            assert cp.prob((a, b), (a, b, a, b)) == 1


def test_unit_structural_maps_are_identity():
    assert K.copy(UNIT) == K.identity(UNIT)
    assert K.discard(UNIT) == K.identity(UNIT)
    assert K.compare(UNIT) == K.identity(UNIT)


def test_dirac_is_deterministic_total_state():
    d = K.dirac(BO, "t")
    assert d.prob((), "t") == 1
    assert K.is_total(d) and K.is_deterministic(d)
    with pytest.raises(UnknownLabel):
        K.dirac(BO, "x")


# -- predicates --------------------------------------------------------------


def test_predicates_on_coin():
    coin = K.state(BO, {"t": HALF, "f": HALF})
    assert K.is_total(coin)
    assert K.is_quasi_total(coin)
    assert not K.is_deterministic(coin)


def test_predicates_on_partial_kernels():
    half = K.state(BO, {"t": HALF})
    assert not K.is_total(half)
    assert not K.is_quasi_total(half)
    assert not K.is_deterministic(half)
    empty = SubKernel(UNIT, BO, {})
    assert not K.is_total(empty)
    assert K.is_quasi_total(empty)
    assert K.is_deterministic(empty)


def test_deterministic_partial_function_is_quasi_total():
    f = bk({"t": {"f": 1}})
    assert K.is_deterministic(f)
    assert K.is_quasi_total(f)
    assert not K.is_total(f)


def test_coin_is_not_deterministic_via_copy_equation():
    coin = K.state(BO, {"t": HALF, "f": HALF})
    lhs = K.compose(coin, K.copy(BO))
    rhs = K.compose(K.copy(UNIT), K.tensor(coin, coin))
    assert lhs.prob((), ("t", "f")) == 0
    assert rhs.prob((), ("t", "f")) == Fraction(1, 4)
    assert lhs != rhs


# -- algebraic laws (hypothesis) ---------------------------------------------


@given(kernels())
def test_identity_neutral(f):
    assert K.compose(K.identity(f.dom), f) == f
    assert K.compose(f, K.identity(f.cod)) == f


@given(objects(), objects(), objects())
def test_compose_associative(x, y, z):
    from pmc.laws import _rand_kernel, _stable_rng

    rng = _stable_rng("assoc", x, y, z)
    f = _rand_kernel(rng, x, y)
    g = _rand_kernel(rng, y, z)
    h = _rand_kernel(rng, z, x)
    assert K.compose(K.compose(f, g), h) == K.compose(f, K.compose(g, h))


@given(kernels(), kernels())
def test_tensor_respects_unit_and_associativity(f, g):
    unit_id = K.identity(UNIT)
    assert K.tensor(f, unit_id) == f
    assert K.tensor(unit_id, f) == f
    h = K.identity(BO)
    assert K.tensor(K.tensor(f, g), h) == K.tensor(f, K.tensor(g, h))


@given(objects(max_factors=1))
def test_comonoid_laws(x):
    cp = K.copy(x)
    ident = K.identity(x)
    assert K.compose(cp, K.tensor(K.discard(x), ident)) == ident
    assert K.compose(cp, K.tensor(ident, K.discard(x))) == ident
    assert K.compose(cp, K.tensor(cp, ident)) == K.compose(
        cp, K.tensor(ident, cp)
    )
    assert K.compose(cp, K.swap(x, x)) == cp


@given(objects(max_factors=1))
def test_frobenius_laws(x):
    cp, cmp_, ident = K.copy(x), K.compare(x), K.identity(x)
    frob = K.compose(cmp_, cp)
    assert K.compose(K.tensor(cp, ident), K.tensor(ident, cmp_)) == frob
    assert K.compose(K.tensor(ident, cp), K.tensor(cmp_, ident)) == frob
    assert K.compose(cp, cmp_) == ident


@given(kernels(), kernels())
def test_swap_naturality(f, g):
    lhs = K.compose(K.tensor(f, g), K.swap(f.cod, g.cod))
    rhs = K.compose(K.swap(f.dom, g.dom), K.tensor(g, f))
    assert lhs == rhs


@given(kernels())
def test_row_masses_bounded(f):
    for x in f.dom.outcomes():
        assert 0 <= f.mass(x) <= 1
