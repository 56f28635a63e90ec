"""Dense univariate polynomials over a prime field F_p.

A polynomial a_0 + a_1 x + ... + a_d x^d is a tuple ``(a_0, ..., a_d)`` of
residues in ``range(p)`` with ``a_d != 0``; the zero polynomial is ``()``.

Polynomials are ordered by :func:`sort_key`, which reads the coefficient
vector as a base-p numeral with the leading coefficient most significant.
The same order is used for field elements, so "first in order" means the
same thing everywhere in the package.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

Poly = tuple[int, ...]


def trim(coeffs: Sequence[int], p: int) -> Poly:
    out = [c % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def degree(a: Poly) -> int:
    return len(a) - 1


def sort_key(a: Poly) -> tuple[int, tuple[int, ...]]:
    return (len(a), tuple(reversed(a)))


def add(a: Poly, b: Poly, p: int) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return trim(out, p)


def sub(a: Poly, b: Poly, p: int) -> Poly:
    return add(a, tuple((-c) % p for c in b), p)


def scale(a: Poly, c: int, p: int) -> Poly:
    return trim([c * x for x in a], p)


def mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out, p)


def divmod_(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1 - db, -1, -1):
        c = (r[k + db] * inv_lead) % p
        q[k] = c
        if c:
            for j, y in enumerate(b):
                r[k + j] = (r[k + j] - c * y) % p
    return trim(q, p), trim(r[:db], p)


def mod(a: Poly, b: Poly, p: int) -> Poly:
    return divmod_(a, b, p)[1]


def monic(a: Poly, p: int) -> Poly:
    if not a:
        return a
    return scale(a, pow(a[-1], -1, p), p)


def gcd(a: Poly, b: Poly, p: int) -> Poly:
    """Monic greatest common divisor."""
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def powmod(base: Poly, e: int, m: Poly, p: int) -> Poly:
    result: Poly = (1,)
    base = mod(base, m, p)
    while e:
        if e & 1:
            result = mod(mul(result, base, p), m, p)
        e >>= 1
        if e:
            base = mod(mul(base, base, p), m, p)
    return mod(result, m, p)


def evaluate(a: Poly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def derivative(a: Poly, p: int) -> Poly:
    return trim([i * c for i, c in enumerate(a)][1:], p)


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(a: Poly, p: int) -> bool:
    """Rabin's test: x^(p^d) == x mod a, and gcd(x^(p^(d/s)) - x, a) = 1 for primes s | d."""
    d = degree(a)
    if d < 1:
        return False
    if d == 1:
        return True
    a = monic(a, p)
    x: Poly = (0, 1)
    for s in _prime_factors(d):
        h = powmod(x, p ** (d // s), a, p)
        if degree(gcd(sub(h, x, p), a, p)) > 0:
            return False
    return mod(sub(powmod(x, p**d, a, p), x, p), a, p) == ()


def frobenius_matrix(a: Poly, p: int) -> np.ndarray:
    """Row i holds the coefficients of x^(p*i) mod a (Berlekamp's Q matrix)."""
    d = degree(a)
    q = np.zeros((d, d), dtype=np.int64)
    xp = powmod((0, 1), p, a, p)
    row: Poly = (1,)
    for i in range(d):
        q[i, : len(row)] = row
        row = mod(mul(row, xp, p), a, p)
    return q


def berlekamp_factor(a: Poly, p: int) -> list[Poly]:
    """Monic irreducible factors of a squarefree polynomial, sorted by :func:`sort_key`."""
    from cmbound.kernels import nullspace_mod_p

    a = monic(a, p)
    if degree(a) < 1:
        return []
    if degree(gcd(a, derivative(a, p), p)) > 0:
        raise ValueError("berlekamp_factor requires a squarefree polynomial")
    d = degree(a)
    q = frobenius_matrix(a, p)
    q -= np.eye(d, dtype=np.int64)
    # fixed vectors v with v(x)^p == v(x) mod a: left kernel of Q - I
    basis = nullspace_mod_p(np.ascontiguousarray((q.T) % p), p)
    count = basis.shape[0]
    factors = [a]
    for vec in basis:
        if len(factors) == count:
            break
        v = trim(vec.tolist(), p)
        if degree(v) < 1:
            continue
        refined = []
        for g in factors:
            if degree(g) == 1:
                refined.append(g)
                continue
            rest = g
            for c in range(p):
                h = gcd(rest, sub(v, (c,), p), p)
                if 0 < degree(h):
                    refined.append(h)
                    rest = divmod_(rest, h, p)[0]
                if degree(rest) == 0:
                    break
            if degree(rest) > 0:
                refined.append(monic(rest, p))
        factors = refined
    return sorted(factors, key=sort_key)


def factor_count(a: Poly, p: int) -> int:
    """Number of distinct irreducible factors of a squarefree polynomial (Berlekamp rank)."""
    from cmbound.kernels import rank_mod_p

    a = monic(a, p)
    d = degree(a)
    q = frobenius_matrix(a, p) - np.eye(d, dtype=np.int64)
    return d - rank_mod_p(np.ascontiguousarray(q % p), p)
