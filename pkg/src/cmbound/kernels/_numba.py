"""numba-compiled kernels. Same signatures and results as ``_numpy``."""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def _isqrt(v):
    if v < 0:
        return -1
    s = np.int64(math.sqrt(v))
    while s * s > v:
        s -= 1
    while (s + 1) * (s + 1) <= v:
        s += 1
    return s


@njit(cache=True)
def _count_class(lo, hi, c):
    if hi < lo:
        return 0
    return (hi - c) // 5 - (lo - 1 - c) // 5


@njit(cache=True)
def _disk_residue_hist(m, half, limit):
    hist = np.zeros((5, 5), dtype=np.int64)
    if limit < 0:
        return hist
    ymax = _isqrt(limit // m)
    for y in range(-ymax, ymax + 1):
        s = _isqrt(limit - m * y * y)
        if half:
            lo = (-s - y + 1) // 2
            hi = (s - y) // 2
        else:
            lo = -s
            hi = s
        ym = y % 5
        for c in range(5):
            hist[c, ym] += _count_class(lo, hi, c)
    return hist


def disk_residue_hist(m, half, limit):
    """Counts of lattice points x + y*w with scaled norm <= limit, binned by (x mod 5, y mod 5)."""
    return _disk_residue_hist(np.int64(m), bool(half), np.int64(limit))


@njit(cache=True)
def _ff_add(a, b, digits, pw, p):
    out = 0
    for i in range(pw.shape[0]):
        out += ((digits[a, i] + digits[b, i]) % p) * pw[i]
    return out


@njit(cache=True)
def _classify_pairs(p, q, digits, pw, exp, log, neg_four_a3, t27b2, terms):
    out = np.empty((q, q), dtype=np.int8)
    for a in range(q):
        for b in range(q):
            if t27b2[b] == neg_four_a3[a]:
                out[a, b] = 0
                continue
            acc = 0
            for t in range(terms.shape[0]):
                c = terms[t, 0]
                j = terms[t, 1]
                k = terms[t, 2]
                if c == 0 or (j > 0 and a == 0) or (k > 0 and b == 0):
                    continue
                e = log[c]
                if j > 0:
                    e += j * log[a]
                if k > 0:
                    e += k * log[b]
                acc = _ff_add(acc, exp[e % (q - 1)], digits, pw, p)
            out[a, b] = 1 if acc == 0 else 2
    return out


def classify_pairs(p, q, digits, pw, exp, log, neg_four_a3, t27b2, terms):
    """Class code per (A, B): 0 singular, 1 supersingular, 2 ordinary."""
    return _classify_pairs(p, q, digits, pw, exp, log, neg_four_a3, t27b2,
                           np.asarray(terms, dtype=np.int64).reshape(-1, 3))


@njit(cache=True)
def _ff_mul(a, b, exp, log, q):
    if a == 0 or b == 0:
        return 0
    return exp[(log[a] + log[b]) % (q - 1)]


@njit(cache=True)
def pair_traces(p, q, digits, pw, exp, log, chi, cube, classes):
    """Frobenius trace q + 1 - #E(F_q) for every nonsingular (A, B); 0 where singular."""
    out = np.zeros((q, q), dtype=np.int64)
    base = np.empty(q, dtype=np.int64)
    for a in range(q):
        for x in range(q):
            base[x] = _ff_add(cube[x], _ff_mul(a, x, exp, log, q), digits, pw, p)
        for b in range(q):
            if classes[a, b] == 0:
                continue
            s = 0
            for x in range(q):
                s += chi[_ff_add(base[x], b, digits, pw, p)]
            out[a, b] = -s
    return out


@njit(cache=True)
def legendre_table(l):
    chi = -np.ones(l, dtype=np.int64)
    for r in range(1, l):
        chi[(r * r) % l] = 1
    chi[0] = 0
    return chi


@njit(cache=True)
def _prime_traces(avals, bvals, l, chi):
    out = np.empty(avals.shape[0], dtype=np.int64)
    for i in range(avals.shape[0]):
        a = avals[i]
        b = bvals[i]
        s = 0
        for x in range(l):
            s += chi[(x * x % l * x + a * x + b) % l]
        out[i] = -s
    return out


def prime_traces(avals, bvals, l, chi):
    """Traces of y^2 = x^3 + a x + b over F_l for arrays of reduced coefficients."""
    return _prime_traces(np.asarray(avals, dtype=np.int64), np.asarray(bvals, dtype=np.int64),
                         np.int64(l), chi)


@njit(cache=True)
def _group_closure(table, start, gens):
    n = table.shape[0]
    mask = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    tail = 0
    for s in start:
        if not mask[s]:
            mask[s] = True
            queue[tail] = s
            tail += 1
    head = 0
    while head < tail:
        e = queue[head]
        head += 1
        for g in gens:
            h = table[e, g]
            if not mask[h]:
                mask[h] = True
                queue[tail] = h
                tail += 1
    return mask


def group_closure(table, start, gens):
    """Smallest set containing ``start`` closed under right multiplication by ``gens``."""
    return _group_closure(table, np.asarray(start, dtype=np.int64), np.asarray(gens, dtype=np.int64))


@njit(cache=True)
def _echelon(a, p):
    rows, cols = a.shape
    pivots = np.full(min(rows, cols), -1, dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = 1
        base = a[r, c]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for j in range(cols):
            a[r, j] = a[r, j] * inv % p
        for i in range(rows):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return a, pivots[:r]


def rank_mod_p(m, p):
    a = np.array(m, dtype=np.int64) % p
    return len(_echelon(a, np.int64(p))[1])


def nullspace_mod_p(m, p):
    """Basis (as rows) of {v : m @ v == 0 mod p}, in reduced form."""
    a = np.array(m, dtype=np.int64) % p
    a, pivots = _echelon(a, np.int64(p))
    cols = a.shape[1]
    pivset = set(pivots.tolist())
    free = [c for c in range(cols) if c not in pivset]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-a[r, fc]) % p
    return basis
