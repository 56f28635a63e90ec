import numpy as np
import pytest
import sympy

from cmbound.errors import CapExceeded
from cmbound.ffcurves import (
    CurveClass,
    FFPair,
    census,
    class_table,
    classify,
    count_points,
    deuring_coefficient,
    discriminant,
    hasse_terms,
    trace,
    trace_cross_check,
)
from cmbound.ffield import enumerate_field, make_field

X, A_, B_ = sympy.symbols("x A B")


def _sympy_hasse(p):
    expr = sympy.expand((X**3 + A_ * X + B_) ** ((p - 1) // 2))
    coeff = sympy.Poly(expr, X).coeff_monomial(X ** (p - 1))
    terms = sympy.Poly(coeff, A_, B_).terms()
    return tuple(sorted((int(c) % p, j, k) for (j, k), c in terms if int(c) % p))


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17, 19])
def test_hasse_terms_match_symbolic_expansion(p):
    assert hasse_terms(p) == _sympy_hasse(p)


def test_hasse_terms_p5():
    assert hasse_terms(5) == ((2, 1, 0),)


@pytest.mark.parametrize("p,a,b", [(5, 1, 1), (5, 0, 1), (7, 1, 0), (7, 3, 5), (11, 2, 7), (13, 1, 1)])
def test_deuring_coefficient_against_expansion(p, a, b):
    F = make_field(p, 1)
    ref = sympy.Poly(sympy.expand((X**3 + a * X + b) ** ((p - 1) // 2)), X).coeff_monomial(X ** (p - 1))
    assert deuring_coefficient(FFPair.of(F, a, b)) == int(ref) % p


def test_deuring_p7_cm_curve_is_zero():
    # (x^3 + x)^3 has no x^6 term; y^2 = x^3 + x is supersingular at 7
    F = make_field(7, 1)
    pair = FFPair.of(F, 1, 0)
    assert deuring_coefficient(pair) == 0
    assert classify(pair) is CurveClass.SUPERSINGULAR
    assert trace(pair) % 7 == 0


def test_small_examples_over_f5():
    F = make_field(5, 1)
    assert count_points(FFPair.of(F, 0, 1)) == 6
    assert count_points(FFPair.of(F, 1, 1)) == 9
    assert count_points(FFPair.of(F, 1, 0)) == 4
    assert deuring_coefficient(FFPair.of(F, 1, 1)) == 2
    assert classify(FFPair.of(F, 0, 0)) is CurveClass.SINGULAR
    with pytest.raises(ValueError):
        count_points(FFPair.of(F, 0, 0))


def _full_expansion_coefficient(pair):
    F = pair.spec
    poly = [F.one]
    cubic = [pair.B, pair.A, F.zero, F.one]
    for _ in range((F.p - 1) // 2):
        out = [F.zero] * (len(poly) + 3)
        for i, u in enumerate(poly):
            for j, v in enumerate(cubic):
                out[i + j] = out[i + j] + u * v
        poly = out
    return poly[F.p - 1]


@pytest.mark.parametrize("f", [1, 2])
def test_census_matches_element_loop(f):
    F = make_field(5, f)
    els = enumerate_field(F)
    counts = {0: 0, 1: 0, 2: 0}
    for a in els:
        for b in els:
            pair = FFPair(a, b)
            if not discriminant(pair):
                counts[0] += 1
            elif not _full_expansion_coefficient(pair):
                counts[1] += 1
            else:
                counts[2] += 1
    res = census(f)
    assert (res.singular, res.supersingular, res.ordinary) == (counts[0], counts[1], counts[2])


@pytest.mark.parametrize("f,expected", [
    (1, (25, 5, 4, 16)),
    (2, (625, 25, 24, 576)),
    (3, (15625, 125, 124, 15376)),
    (4, (390625, 625, 624, 389376)),
])
def test_census_counts(f, expected):
    r = census(f)
    assert (r.total, r.singular, r.supersingular, r.ordinary) == expected


def test_class_table_codes():
    F = make_field(5, 2)
    tab = class_table(F)
    els = enumerate_field(F)
    code = {CurveClass.SINGULAR: 0, CurveClass.SUPERSINGULAR: 1, CurveClass.ORDINARY: 2}
    for a in els[::3]:
        for b in els[::2]:
            assert tab[a.index, b.index] == code[classify(FFPair(a, b))]


def test_census_caps():
    with pytest.raises(CapExceeded):
        census(6)
    with pytest.raises(ValueError):
        census(9)
    with pytest.raises(ValueError):
        census(0)


@pytest.mark.parametrize("f", [1, 2, 3])
def test_trace_cross_check_f5(f):
    tc = trace_cross_check(f)
    assert tc.mismatches == 0 and tc.hasse_violations == 0
    assert tc.checked == 5 ** (2 * f) - 5**f


@pytest.mark.parametrize("p,f", [(7, 1), (7, 2), (11, 1), (13, 1)])
def test_trace_cross_check_other_primes(p, f):
    tc = trace_cross_check(f, p)
    assert tc.mismatches == 0 and tc.hasse_violations == 0


def test_trace_cross_check_cap():
    with pytest.raises(CapExceeded):
        trace_cross_check(4)


def test_kernel_traces_match_character_sum():
    from cmbound import kernels
    from cmbound.ffield import tables

    F = make_field(5, 2)
    t = tables(F)
    idx = np.arange(F.q)
    classes = class_table(F)
    tr = kernels.pair_traces(5, F.q, t.digits, t.pw, t.exp, t.log, t.chi, t.power(idx, 3), classes)
    for i in range(0, F.q, 4):
        for j in range(0, F.q, 3):
            pair = FFPair(F.from_index(i), F.from_index(j))
            if classes[i, j]:
                assert tr[i, j] == trace(pair)
