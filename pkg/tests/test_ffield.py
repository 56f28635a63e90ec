import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cmbound import polyfp
from cmbound.errors import CapExceeded
from cmbound.ffield import (
    enumerate_field,
    inv,
    is_square,
    make_field,
    multiplicative_order,
    primitive_element,
    roots,
    tables,
)

FIELDS = [(5, 1), (5, 2), (5, 3), (7, 2), (11, 1), (13, 2)]


def _first_irreducible_sympy(p, f):
    x = sympy.symbols("x")
    # index order: leading coefficients compared first
    for low in itertools.product(range(p), repeat=f):
        low = tuple(reversed(low))
        poly = sympy.Poly(list(reversed(low + (1,))), x, modulus=p)
        if poly.is_irreducible:
            return low + (1,)


@pytest.mark.parametrize("p,f", [(5, 2), (5, 3), (5, 4), (7, 2), (7, 3), (11, 2)])
def test_modulus_is_first_irreducible_in_index_order(p, f):
    assert make_field(p, f).modulus == _first_irreducible_sympy(p, f)


def test_documented_moduli():
    assert make_field(5, 2).modulus == (2, 0, 1)
    assert make_field(5, 3).modulus == (1, 1, 0, 1)


@pytest.mark.parametrize("p,f", [(4, 1), (9, 2), (2, 3), (3, 2)])
def test_rejects_bad_characteristic(p, f):
    with pytest.raises(ValueError):
        make_field(p, f)


def test_rejects_degree_and_cap():
    with pytest.raises(ValueError):
        make_field(5, 0)
    with pytest.raises(CapExceeded):
        make_field(5, 9)


def test_enumeration_order_and_size():
    F = make_field(5, 2)
    els = enumerate_field(F)
    assert len(els) == 25 == len(set(els))
    assert [e.index for e in els] == list(range(25))
    assert els[0] == F.zero and els[1] == F.one


def test_inverse_and_square_edge_cases():
    F = make_field(5, 2)
    with pytest.raises(ZeroDivisionError):
        inv(F.zero)
    with pytest.raises(ValueError):
        is_square(F.zero)
    # half the units are squares
    assert sum(is_square(a) for a in enumerate_field(F)[1:]) == 12


@pytest.mark.parametrize("p,f", FIELDS)
def test_primitive_element_generates(p, f):
    F = make_field(p, f)
    g = primitive_element(F)
    assert multiplicative_order(g) == F.q - 1


def test_roots_of_modulus_in_extension():
    F = make_field(5, 2)
    assert len(roots([2, 0, 1], F)) == 2
    assert roots([2, 0, 1], make_field(5, 1)) == []


@pytest.mark.parametrize("p,f", FIELDS)
def test_tables_agree_with_element_arithmetic(p, f):
    F = make_field(p, f)
    t = tables(F)
    els = enumerate_field(F)
    import numpy as np

    idx = np.arange(F.q)
    for a in els[:: max(1, F.q // 17)]:
        prod = t.mul(a.index, idx)
        s = t.add(np.full(F.q, a.index), idx)
        assert all(prod[b.index] == (a * b).index for b in els)
        assert all(s[b.index] == (a + b).index for b in els)
    for b in els[1:]:
        assert (t.chi[b.index] == 1) == is_square(b)


def _elem(draw_idx, F):
    return F.from_index(draw_idx % F.q)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(0, 10**6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_field_axioms(pf, i, j, k):
    F = make_field(*pf)
    a, b, c = _elem(i, F), _elem(j, F), _elem(k, F)
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + F.zero == a and a * F.one == a
    assert a - a == F.zero
    if a:
        assert a * inv(a) == F.one
        assert a ** (F.q - 1) == F.one
    assert (a + b) ** F.p == a ** F.p + b ** F.p


def test_polyfp_irreducible_matches_sympy():
    x = sympy.symbols("x")
    for low in itertools.product(range(5), repeat=3):
        cand = tuple(low) + (1,)
        ref = sympy.Poly(list(reversed(cand)), x, modulus=5).is_irreducible
        assert polyfp.is_irreducible(cand, 5) == ref
