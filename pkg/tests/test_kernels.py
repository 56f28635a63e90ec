"""The numba and numpy backends must agree exactly on every kernel."""

import numpy as np
import pytest

from cmbound.ffcurves import _census_inputs
from cmbound.ffield import make_field
from cmbound.gl2 import gl2
from cmbound.kernels import _numba, _numpy

BACKENDS = (_numba, _numpy)


@pytest.mark.parametrize("m,half", [(1, False), (2, False), (3, True), (5, False), (7, True), (11, True)])
@pytest.mark.parametrize("limit", [-1, 0, 1, 3, 4, 100, 12345, 10**7, 10**12 + 7])
def test_disk_hist(m, half, limit):
    a, b = (k.disk_residue_hist(m, half, limit) for k in BACKENDS)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("p,f", [(5, 1), (5, 2), (5, 3), (7, 2), (11, 1)])
def test_classify_and_traces(p, f):
    F = make_field(p, f)
    t, n4a3, t27b2, terms = _census_inputs(F)
    c = [k.classify_pairs(p, F.q, t.digits, t.pw, t.exp, t.log, n4a3, t27b2, terms) for k in BACKENDS]
    assert np.array_equal(*c)
    cube = t.power(np.arange(F.q), 3)
    tr = [k.pair_traces(p, F.q, t.digits, t.pw, t.exp, t.log, t.chi, cube, c[0]) for k in BACKENDS]
    assert np.array_equal(*tr)


@pytest.mark.parametrize("l", [3, 7, 13, 101, 997])
def test_legendre_and_prime_traces(l):
    chis = [k.legendre_table(l) for k in BACKENDS]
    assert np.array_equal(*chis)
    rng = np.random.default_rng(l)
    av, bv = rng.integers(0, l, size=(2, 50))
    assert np.array_equal(*(k.prime_traces(av, bv, l, chis[0]) for k in BACKENDS))


def test_group_closure():
    G = gl2(5)
    rng = np.random.default_rng(1)
    for _ in range(25):
        gens = rng.integers(0, G.order, size=rng.integers(1, 3))
        start = np.array([G.identity])
        a, b = (k.group_closure(G.table, start, gens) for k in BACKENDS)
        assert np.array_equal(a, b)


@pytest.mark.parametrize("shape", [(1, 1), (4, 4), (6, 3), (3, 7), (12, 12)])
def test_rank_and_nullspace(shape):
    rng = np.random.default_rng(sum(shape))
    for p in (5, 7):
        m = rng.integers(0, p, size=shape)
        m[-1] = (m[0] * 2) % p  # force a dependency when possible
        ranks = [k.rank_mod_p(m.copy(), p) for k in BACKENDS]
        assert ranks[0] == ranks[1]
        ns = [k.nullspace_mod_p(m.copy(), p) for k in BACKENDS]
        assert np.array_equal(*ns)
        for v in ns[0]:
            assert not ((m @ v) % p).any()
        assert len(ns[0]) == shape[1] - ranks[0]


def _cli(backend, *argv):
    import os
    import subprocess
    import sys

    env = dict(os.environ, CMBOUND_BACKEND=backend)
    return subprocess.run([sys.executable, "-m", "cmbound.cli", *argv], env=env,
                          capture_output=True, text=True)


def test_backend_flag_end_to_end():
    for argv in (["census", "--f", "2"], ["density", "--field", "Q(sqrt-3)", "--X", "2"]):
        a, b = _cli("numba", *argv), _cli("numpy", *argv)
        assert a.returncode == b.returncode == 0
        assert a.stdout == b.stdout
    bad = _cli("fortran", "bound", "--efr", "1,1,2")
    assert bad.returncode != 0 and "CMBOUND_BACKEND" in bad.stderr
