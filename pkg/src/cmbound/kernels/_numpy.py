"""Pure-numpy kernels. Same signatures and results as ``_numba``."""

from __future__ import annotations

import numpy as np

_ROW_CHUNK = 1 << 20  # bounds memory for very large disks


def _isqrt(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    s = np.floor(np.sqrt(v.astype(np.float64))).astype(np.int64)
    for _ in range(2):
        s = np.where(s * s > v, s - 1, s)
        s = np.where((s + 1) * (s + 1) <= v, s + 1, s)
    return s


def _count_class(lo: np.ndarray, hi: np.ndarray, c: int) -> np.ndarray:
    # integers in [lo, hi] congruent to c mod 5; zero for empty intervals
    n = np.floor_divide(hi - c, 5) - np.floor_divide(lo - 1 - c, 5)
    return np.where(hi >= lo, n, 0)


def disk_residue_hist(m: int, half: bool, limit: int) -> np.ndarray:
    """Counts of lattice points x + y*w with scaled norm <= limit, binned by (x mod 5, y mod 5).

    Scaled norm is x^2 + m y^2, or (2x + y)^2 + m y^2 when w = (1 + sqrt(-m))/2.
    """
    hist = np.zeros((5, 5), dtype=np.int64)
    if limit < 0:
        return hist
    ymax = int(_isqrt(np.array([limit // m]))[0])
    for start in range(-ymax, ymax + 1, _ROW_CHUNK):
        y = np.arange(start, min(start + _ROW_CHUNK, ymax + 1), dtype=np.int64)
        s = _isqrt(limit - m * y * y)
        if half:
            lo = np.floor_divide(-s - y + 1, 2)  # ceil((-s - y) / 2)
            hi = np.floor_divide(s - y, 2)
        else:
            lo, hi = -s, s
        ymod = y % 5
        for c in range(5):
            cnt = _count_class(lo, hi, c)
            hist[c] += np.bincount(ymod, weights=cnt, minlength=5).astype(np.int64)
    return hist


def _ff_add(a, b, digits, pw, p):
    return ((digits[a] + digits[b]) % p) @ pw


def _ff_mul(a, b, exp, log, q):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    a, b = np.broadcast_arrays(a, b)
    out = np.zeros(a.shape, dtype=np.int64)
    nz = (a != 0) & (b != 0)
    out[nz] = exp[(log[a[nz]] + log[b[nz]]) % (q - 1)]
    return out


def classify_pairs(p, q, digits, pw, exp, log, neg_four_a3, t27b2, terms):
    """Class code per (A, B): 0 singular, 1 supersingular, 2 ordinary.

    ``terms`` rows (c, j, k) encode the Hasse-invariant polynomial sum c*A^j*B^k.
    """
    out = np.empty((q, q), dtype=np.int8)
    bidx = np.arange(q, dtype=np.int64)
    for a in range(q):
        acc = np.zeros(q, dtype=np.int64)
        for c, j, k in terms:
            if c == 0 or (j > 0 and a == 0):
                continue
            la = 0 if j == 0 else j * log[a]
            val = np.zeros(q, dtype=np.int64)
            if k == 0:
                val[:] = exp[(log[c] + la) % (q - 1)]
            else:
                nz = bidx != 0
                val[nz] = exp[(log[c] + la + k * log[bidx[nz]]) % (q - 1)]
            acc = _ff_add(acc, val, digits, pw, p)
        row = np.where(acc == 0, 1, 2).astype(np.int8)
        row[t27b2 == neg_four_a3[a]] = 0
        out[a] = row
    return out


def pair_traces(p, q, digits, pw, exp, log, chi, cube, classes):
    """Frobenius trace q + 1 - #E(F_q) for every nonsingular (A, B); 0 where singular."""
    out = np.zeros((q, q), dtype=np.int64)
    x = np.arange(q, dtype=np.int64)
    x3 = cube[x]
    for a in range(q):
        ax = _ff_mul(a, x, exp, log, q)
        base = _ff_add(x3, ax, digits, pw, p)  # x^3 + a x, shape (q,)
        rhs = _ff_add(base[None, :], np.arange(q, dtype=np.int64)[:, None], digits, pw, p)
        n = 1 + q + chi[rhs].sum(axis=1)
        row = q + 1 - n
        row[classes[a] == 0] = 0
        out[a] = row
    return out


def legendre_table(l: int) -> np.ndarray:
    chi = -np.ones(l, dtype=np.int64)
    r = np.arange(1, l, dtype=np.int64)
    chi[(r * r) % l] = 1
    chi[0] = 0
    return chi


def prime_traces(avals, bvals, l, chi):
    """Traces of y^2 = x^3 + a x + b over F_l for arrays of reduced coefficients."""
    avals = np.asarray(avals, dtype=np.int64)
    bvals = np.asarray(bvals, dtype=np.int64)
    x = np.arange(l, dtype=np.int64)
    x3 = (x * x % l) * x % l
    rhs = (x3[None, :] + avals[:, None] * x[None, :] + bvals[:, None]) % l
    n = 1 + l + chi[rhs].sum(axis=1)
    return l + 1 - n


def group_closure(table, start, gens):
    """Smallest set containing ``start`` closed under right multiplication by ``gens``."""
    mask = np.zeros(table.shape[0], dtype=np.bool_)
    mask[start] = True
    frontier = np.flatnonzero(mask)
    gens = np.asarray(gens, dtype=np.int64)
    while frontier.size:
        new = np.unique(table[np.ix_(frontier, gens)].ravel())
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return mask


def _echelon(m, p):
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod_p(m, p):
    return len(_echelon(m, p)[1])


def nullspace_mod_p(m, p):
    """Basis (as rows) of {v : m @ v == 0 mod p}, in reduced form."""
    a, pivots = _echelon(m, p)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-a[r, fc]) % p
    return basis
