import math

import numpy as np
import pytest

from cmbound import gimage
from cmbound.gimage import (
    WitnessFlags,
    certify_sl2,
    checklist,
    dg_congruence_ok,
    dg_equivalence_oracle,
    dg_find,
    dg_ratio_ok,
    frob_trace,
    frob_traces,
    good_degree1_primes,
    is_perfect_sl2,
    scan_heights,
    subgroup_oracle,
    subgroup_witnesses,
    verify_dg_prime,
    witness_flags,
)
from cmbound.gl2 import gl2
from cmbound.numfield import Cyclotomic, Quadratic, degree1_roots

QI = Quadratic(1)


def _naive_trace(a, b, l):
    n = 1 + sum(1 for x in range(l) for y in range(l) if (y * y - x**3 - a * x - b) % l == 0)
    return l + 1 - n


def test_witness_rule_examples():
    assert witness_flags(1, 13).square
    for l in (3, 7, 11, 13, 17, 19):
        assert not witness_flags(0, l).square
    assert witness_flags(2, 3).exceptional
    with pytest.raises(ValueError):
        witness_flags(1, 5)


def test_flags_are_monotone():
    f = WitnessFlags()
    for a, l in [(1, 13), (0, 17), (2, 3), (4, 7)]:
        g = f | witness_flags(a, l)
        assert all(not v or getattr(g, k) for k, v in vars(f).items())
        f = g


def test_good_primes_splitting_laws():
    assert all(l % 4 == 1 for l in good_degree1_primes(QI, ((1,), (1,)), 500))
    assert all(l % 3 == 1 for l in good_degree1_primes(Cyclotomic(3), ((1,), (1,)), 500))
    primes = good_degree1_primes(QI, ((1,), (1,)), 20)
    assert 13 in primes and 17 in primes


def test_bad_reduction_is_excluded():
    # Delta(1,1) = -16 * 31, and 31 is inert in Q(i); use Q(zeta3) where 31 splits
    d = Cyclotomic(3)
    assert 31 not in good_degree1_primes(d, ((1,), (1,)), 100)
    with pytest.raises(ValueError):
        frob_traces(d, ((1,), (1,)), 31)


def test_frobenius_traces_examples():
    assert [s.a for s in frob_traces(QI, ((1,), (1,)), 13)] == [-4, -4]
    assert [s.a for s in frob_traces(QI, ((1,), (1,)), 17)] == [0, 0]
    s = frob_trace(QI, ((1,), (1,)), 13, 1)
    assert s.N == s.l + 1 - s.a


@pytest.mark.parametrize("d,pair", [
    (QI, ((2, 1), (3, -1))),
    (Quadratic(2), ((1, 1), (0, 2))),
    (Quadratic(3), ((-1, 2), (5, 1))),
    (Cyclotomic(8), ((1, 0, 1, 0), (0, 1, 0, 2))),
])
def test_traces_against_naive_count(d, pair):
    for l in good_degree1_primes(d, pair, 120):
        roots = degree1_roots(d, l)
        for s, r in zip(frob_traces(d, pair, l), roots):
            a = sum(c * r**i for i, c in enumerate(pair[0])) % l
            b = sum(c * r**i for i, c in enumerate(pair[1])) % l
            assert s.a == _naive_trace(a, b, l)
            assert abs(s.a) <= 2 * math.sqrt(l)


def test_integer_curves_have_equal_traces_above_l():
    for l in good_degree1_primes(QI, ((3,), (-2,)), 300):
        a = {s.a for s in frob_traces(QI, ((3,), (-2,)), l)}
        assert len(a) == 1


def test_subgroup_oracle_soundness():
    rep = subgroup_oracle()
    assert rep.subgroup_count == 466
    assert rep.sound and rep.gl2_complete
    assert rep.relevant_count > 0
    assert all(missing for _, missing in rep.maximal_missing)


def test_named_subgroups_lack_a_witness():
    G = gl2(5)
    assert not subgroup_witnesses(gimage.borel_mask(G), G).nonsquare
    assert gimage.split_cartan_normalizer_mask(G).sum() == 32
    assert not subgroup_witnesses(gimage.split_cartan_normalizer_mask(G), G).complete
    ns = gimage.nonsplit_cartan_normalizer_mask(G)
    assert ns.sum() == 48
    assert not subgroup_witnesses(ns, G).square
    assert subgroup_witnesses(np.ones(G.order, dtype=bool), G).complete


def test_perfectness():
    assert is_perfect_sl2()


def test_dg_equivalence_oracle():
    rows = dg_equivalence_oracle()
    assert len(rows) == 20
    assert all(c == r for _, _, c, r in rows)
    assert not dg_congruence_ok(2, 11)  # a^2 = 4 = 4l when l = 1 mod 5


def test_dg_find_example():
    pair = ((1,), (1,))
    assert not dg_ratio_ok(-4, 13)
    assert dg_find(QI, pair, 1000) == 17
    assert verify_dg_prime(QI, pair, 17)
    assert not verify_dg_prime(QI, pair, 13)
    assert dg_find(QI, pair, 16) is None


@pytest.mark.parametrize("d,pair", [
    (QI, ((2, 1), (3, -1))), (Quadratic(2), ((1, 1), (0, 2))), (Cyclotomic(8), ((1,), (2,))),
    (Quadratic(7), ((4,), (1, 1))), (Cyclotomic(12), ((1, 1), (3,))),
])
def test_dg_primes_reverify(d, pair):
    l = dg_find(d, pair, 1000)
    assert l is not None and verify_dg_prime(d, pair, l)


def test_certification_examples():
    assert certify_sl2(QI, ((1,), (1,)), 1000).certified
    cm = certify_sl2(QI, ((1,), (0,)), 1000)
    assert not cm.certified and not cm.flags.nonsquare
    assert cm.primes_scanned > 50
    with pytest.raises(ValueError):
        certify_sl2(QI, ((0,), (0,)))
    with pytest.raises(ValueError):
        certify_sl2(QI, ((-3,), (2,)))  # 4(-27) + 27*4 = 0
    with pytest.raises(ValueError):
        certify_sl2(Cyclotomic(20), ((1,), (1,)))


def test_singular_rejection_example():
    assert gimage.is_singular(QI, (-3,), (2,))
    assert not gimage.is_singular(QI, (3,), (2,))


def test_checklist_examples():
    ok = checklist(QI, ((1,), (1,)))
    assert (ok.irreducible, ok.ordinary, ok.decomposed_generic) == ("certified", "verified", "verified")
    assert ok.dg_prime == 17 and ok.verdict == "hypotheses empirically verified"
    cm = checklist(QI, ((1,), (0,)))
    assert cm.irreducible == "inconclusive" and cm.verdict == "not verified"
    # A = 2 + i lies in the prime above 5 where i -> 3
    bad = checklist(QI, ((2, 1), (1,)))
    assert bad.ordinary == "inconclusive"


def test_scan_heights_cm_and_determinism():
    rows = scan_heights(QI, [2], 10, seed=5, force_cm=True)
    assert rows[0].fraction == 1.0
    a = [r.to_dict() for r in scan_heights(QI, [2, 3], 30, seed=11)]
    b = [r.to_dict() for r in scan_heights(QI, [2, 3], 30, seed=11)]
    assert a == b
