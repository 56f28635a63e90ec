import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cmbound.errors import InadmissibleField
from cmbound.numfield import (
    Cyclotomic,
    Quadratic,
    contains_zeta5,
    cyclotomic_factor_mod5,
    cyclotomic_factor_shape,
    degree1_roots,
    normalize,
    ok_add,
    ok_mul,
    parse_descriptor,
    reduce_element,
    reduction_maps,
    splits_completely,
    splitting_of_5,
    totient,
)

x = sympy.symbols("x")
ADMISSIBLE_N = [n for n in range(3, 61) if n % 4 != 2 and n % 5]


def _sympy_shape(n):
    _, facs = sympy.Poly(sympy.cyclotomic_poly(n, x), x, modulus=5).factor_list()
    degs = sorted(f.degree() for f, m in facs for _ in range(m))
    return len(degs), set(degs)


@pytest.mark.parametrize("m,efr", [(1, (1, 1, 2)), (2, (1, 2, 1)), (5, (2, 1, 1)),
                                    (3, (1, 2, 1)), (11, (1, 1, 2)), (15, (2, 1, 1))])
def test_quadratic_splitting(m, efr):
    s = splitting_of_5(Quadratic(m))
    assert (s.e, s.f, s.r) == efr


@pytest.mark.parametrize("n", ADMISSIBLE_N)
def test_cyclotomic_splitting_matches_sympy(n):
    s = splitting_of_5(Cyclotomic(n))
    count, degs = _sympy_shape(n)
    assert s.e == 1 and (s.r, {s.f}) == (count, degs)
    assert s.r * s.f == totient(n)
    assert cyclotomic_factor_shape(n) == (s.r, s.f)
    assert len(cyclotomic_factor_mod5(n)) == s.r


def test_named_examples():
    assert cyclotomic_factor_mod5(8) == [(2, 0, 1), (3, 0, 1)]
    s = splitting_of_5(Cyclotomic(11))
    assert (s.e, s.f, s.r) == (1, 5, 2)


def test_normalization_and_errors():
    assert normalize(Cyclotomic(6)) == Cyclotomic(3)
    assert parse_descriptor("Q(zeta_14)") == Cyclotomic(7)
    assert parse_descriptor(" Q(sqrt-2) ") == Quadratic(2)
    with pytest.raises(InadmissibleField):
        parse_descriptor("Q(zeta10)")
    with pytest.raises(InadmissibleField):
        normalize(Cyclotomic(15))
    with pytest.raises(ValueError):
        normalize(Cyclotomic(2))
    with pytest.raises(ValueError):
        normalize(Quadratic(4))
    with pytest.raises(ValueError):
        parse_descriptor("Q(sqrt 2)")
    assert contains_zeta5(Cyclotomic(20)) and not contains_zeta5(Quadratic(5))


def test_reduction_map_images():
    assert [rm.generator_image.index for rm in reduction_maps(Quadratic(1))] == [2, 3]
    assert [rm.generator_image.index for rm in reduction_maps(Quadratic(5))] == [0]
    (inert,) = reduction_maps(Quadratic(2))
    assert inert.target.q == 25
    for d in [Quadratic(1), Quadratic(2), Quadratic(3), Quadratic(5), Cyclotomic(8), Cyclotomic(3)]:
        s = splitting_of_5(d)
        maps = reduction_maps(d)
        assert len(maps) == s.r and all(rm.target.q == 5**s.f for rm in maps)


FIELDS = [Quadratic(1), Quadratic(2), Quadratic(3), Quadratic(5), Quadratic(7),
          Cyclotomic(3), Cyclotomic(8), Cyclotomic(12), Cyclotomic(7)]


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_reduction_maps_are_ring_homomorphisms(d, data):
    coords = st.lists(st.integers(-50, 50), min_size=d.degree, max_size=d.degree)
    a, b = data.draw(coords), data.draw(coords)
    for rm in reduction_maps(d):
        ra, rb = reduce_element(a, rm), reduce_element(b, rm)
        assert reduce_element(ok_mul(d, a, b), rm) == ra * rb
        assert reduce_element(ok_add(a, b), rm) == ra + rb
        assert reduce_element((1,) + (0,) * (d.degree - 1), rm) == rm.target.one


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_ok_mul_against_sympy(d, data):
    coords = st.lists(st.integers(-20, 20), min_size=d.degree, max_size=d.degree)
    a, b = data.draw(coords), data.draw(coords)
    mp = sympy.Poly(list(reversed(d.min_poly)), x)
    pa = sympy.Poly(list(reversed(a)), x)
    pb = sympy.Poly(list(reversed(b)), x)
    rem = (pa * pb).rem(mp)
    ref = [int(c) for c in reversed(rem.all_coeffs())]
    ref += [0] * (d.degree - len(ref))
    if not any(ref):
        ref = [0] * d.degree
    assert list(ok_mul(d, a, b)) == ref


@pytest.mark.parametrize("l", [p for p in range(7, 200) if sympy.isprime(p)])
def test_degree1_splitting_laws(l):
    assert splits_completely(Quadratic(1), l) == (l % 4 == 1)
    assert splits_completely(Cyclotomic(3), l) == (l % 3 == 1)
    assert splits_completely(Cyclotomic(8), l) == (l % 8 == 1)
    assert splits_completely(Quadratic(2), l) == (sympy.legendre_symbol(-2 % l, l) == 1)


def test_degree1_roots_are_roots():
    d = Cyclotomic(12)
    for r in degree1_roots(d, 13):
        assert sum(c * r**i for i, c in enumerate(d.min_poly)) % 13 == 0
