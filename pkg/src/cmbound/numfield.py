"""Imaginary quadratic and cyclotomic fields: splitting of 5 and residue maps.

Both families have a power integral basis, so the ring of integers is
Z[w] for a generator w with monic minimal polynomial ``min_poly`` and a
prime above l corresponds to an irreducible factor of ``min_poly`` mod l.
Elements of O_K are integer coordinate vectors in the basis 1, w, w^2, ...
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

from cmbound import polyfp
from cmbound.errors import InadmissibleField
from cmbound.ffield import FFElem, FieldSpec, enumerate_field, make_field, prime_factors

P = 5


def _squarefree(m: int) -> bool:
    return all(m % (s * s) for s in prime_factors(m))


def totient(n: int) -> int:
    out = n
    for s in prime_factors(n):
        out -= out // s
    return out


def multiplicative_order(a: int, n: int) -> int:
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not a unit mod {n}")
    if n == 1:
        return 1
    k, x = 1, a % n
    while x != 1:
        x = x * a % n
        k += 1
    return k


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients (low-to-high) of the n-th cyclotomic polynomial."""
    # prod over d | n of (x^d - 1)^mu(n/d): multiply the mu = +1 factors, divide the rest
    def mobius(k: int) -> int:
        fs = prime_factors(k)
        prod = 1
        for s in fs:
            prod *= s
        return 0 if prod != k else (-1) ** len(fs)

    divs = [d for d in range(1, n + 1) if n % d == 0]
    poly = [1]
    for d in divs:
        if mobius(n // d) == 1:
            nxt = [0] * (len(poly) + d)
            for i, c in enumerate(poly):
                nxt[i] -= c
                nxt[i + d] += c
            poly = nxt
    for d in divs:
        if mobius(n // d) == -1:
            # exact division by x^d - 1: q_k = q_{k-d} - a_k, scanning upward
            deg = len(poly) - 1 - d
            quot = [0] * (deg + 1)
            for k in range(deg + 1):
                quot[k] = -poly[k] + (quot[k - d] if k >= d else 0)
            poly = quot
    return tuple(poly)


@dataclass(frozen=True)
class Quadratic:
    """K = Q(sqrt(-m)), m squarefree positive."""

    m: int

    @property
    def half(self) -> bool:
        return self.m % 4 == 3

    @property
    def degree(self) -> int:
        return 2

    @property
    def min_poly(self) -> tuple[int, ...]:
        if self.half:
            return ((1 + self.m) // 4, -1, 1)
        return (self.m, 0, 1)

    @property
    def disc(self) -> int:
        return -self.m if self.half else -4 * self.m

    def ramified_primes(self) -> list[int]:
        return prime_factors(abs(self.disc))

    def __str__(self) -> str:
        return f"Q(sqrt-{self.m})"


@dataclass(frozen=True)
class Cyclotomic:
    """K = Q(zeta_n), n >= 3 and n not 2 mod 4."""

    n: int

    @property
    def degree(self) -> int:
        return totient(self.n)

    @property
    def min_poly(self) -> tuple[int, ...]:
        return cyclotomic_poly(self.n)

    def ramified_primes(self) -> list[int]:
        return prime_factors(self.n)

    def __str__(self) -> str:
        return f"Q(zeta{self.n})"


FieldDescriptor = Union[Quadratic, Cyclotomic]

_QUAD_RE = re.compile(r"^Q\(sqrt\s*-\s*(\d+)\)$")
_CYCLO_RE = re.compile(r"^Q\(zeta_?(\d+)\)$")


def parse_descriptor(text: str) -> FieldDescriptor:
    """Parse ``Q(sqrt-<m>)`` or ``Q(zeta<n>)`` and normalize."""
    s = text.strip().replace(" ", "")
    if mq := _QUAD_RE.match(s):
        return normalize(Quadratic(int(mq.group(1))))
    if mc := _CYCLO_RE.match(s):
        return normalize(Cyclotomic(int(mc.group(1))))
    raise ValueError(f"cannot parse field descriptor {text!r}")


def normalize(d: Union[FieldDescriptor, str]) -> FieldDescriptor:
    """Validate a descriptor; Q(zeta_n) with n = 2 mod 4 becomes Q(zeta_{n/2}).

    Raises ``InadmissibleField`` when zeta_5 lies in K.
    """
    if isinstance(d, str):
        return parse_descriptor(d)
    if isinstance(d, Quadratic):
        if d.m < 1 or not _squarefree(d.m):
            raise ValueError(f"m = {d.m} is not a positive squarefree integer")
        return d
    if isinstance(d, Cyclotomic):
        n = d.n
        if n % 4 == 2:
            n //= 2
        if n < 3:
            raise ValueError(f"Q(zeta{d.n}) is not a CM field (n < 3 after normalization)")
        if n % P == 0:
            raise InadmissibleField(f"Q(zeta{n}) contains zeta_5")
        return Cyclotomic(n)
    raise TypeError(f"unsupported descriptor {d!r}")


def contains_zeta5(d: FieldDescriptor) -> bool:
    return isinstance(d, Cyclotomic) and d.n % P == 0


@dataclass(frozen=True)
class SplittingData:
    e: int
    f: int
    r: int

    def __post_init__(self):
        if min(self.e, self.f, self.r) < 1:
            raise ValueError("e, f, r must be positive")


def splitting_of_5(d: FieldDescriptor) -> SplittingData:
    d = normalize(d)
    if isinstance(d, Quadratic):
        if d.m % P == 0:
            return SplittingData(2, 1, 1)
        if pow(-d.m % P, (P - 1) // 2, P) == 1:
            return SplittingData(1, 1, 2)
        return SplittingData(1, 2, 1)
    f = multiplicative_order(P, d.n)
    return SplittingData(1, f, totient(d.n) // f)


def cyclotomic_factor_mod5(n: int) -> list[tuple[int, ...]]:
    """Monic irreducible factors of Phi_n over F_5 in index order."""
    if n % P == 0:
        raise InadmissibleField("Phi_n is inseparable mod 5 when 5 | n")
    return polyfp.berlekamp_factor(polyfp.trim(cyclotomic_poly(n), P), P)


def cyclotomic_factor_shape(n: int) -> tuple[int, int]:
    """(number of factors, common degree) of Phi_n mod 5, without splitting it.

    The count comes from the Berlekamp rank; the degree is the least d with
    x^(5^d) = x modulo Phi_n, found by iterating the Frobenius matrix.
    """
    import numpy as np

    if n % P == 0:
        raise InadmissibleField("Phi_n is inseparable mod 5 when 5 | n")
    phi = polyfp.trim(cyclotomic_poly(n), P)
    count = polyfp.factor_count(phi, P)
    q = polyfp.frobenius_matrix(phi, P)
    deg = len(phi) - 1
    if deg == 1:
        return count, 1
    x = np.zeros(deg, dtype=np.int64)
    x[1] = 1
    v = x.copy()
    for d in range(1, deg + 1):
        v = (v @ q) % P
        if np.array_equal(v, x):
            return count, d
    raise AssertionError("Frobenius did not return to x within deg steps")


@dataclass(frozen=True)
class ReductionMap:
    target: FieldSpec
    generator_image: FFElem
    prime_index: int


@dataclass(frozen=True)
class OKElement:
    coords: tuple[int, ...]

    @classmethod
    def of(cls, *coords: int) -> "OKElement":
        return cls(tuple(int(c) for c in coords))


def _canonical_root(g: Sequence[int], spec: FieldSpec) -> FFElem:
    for a in enumerate_field(spec):
        acc = spec.zero
        for c in reversed(g):
            acc = acc * a + c
        if not acc:
            return a
    raise ValueError(f"{tuple(g)} has no root in F_{spec.q}")


def reduction_maps(d: FieldDescriptor) -> list[ReductionMap]:
    """One residue map O_K -> F_{5^f} per prime above 5, in a fixed documented order.

    Quadratic split: the two roots in F_5 ascending. Inert: first root in F_25.
    Ramified: the double root. Cyclotomic: one map per factor of Phi_n mod 5
    in index order, sending zeta to that factor's first root.
    """
    d = normalize(d)
    split = splitting_of_5(d)
    spec = make_field(P, split.f)
    mp = polyfp.trim(d.min_poly, P)
    if isinstance(d, Quadratic):
        rts = [a for a in enumerate_field(spec) if not _eval(mp, a)]
        if split.f == 2:
            rts = rts[:1]
        return [ReductionMap(spec, a, i) for i, a in enumerate(rts)]
    factors = cyclotomic_factor_mod5(d.n)
    return [ReductionMap(spec, _canonical_root(g, spec), i) for i, g in enumerate(factors)]


def _eval(poly: Sequence[int], a: FFElem) -> FFElem:
    acc = a.spec.zero
    for c in reversed(poly):
        acc = acc * a + c
    return acc


def reduce_element(a: Union[OKElement, Sequence[int]], rmap: ReductionMap) -> FFElem:
    coords = a.coords if isinstance(a, OKElement) else tuple(a)
    return _eval(coords, rmap.generator_image)


def ok_mul(d: FieldDescriptor, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Product in O_K = Z[w]/(min_poly), coordinates in the power basis."""
    n = d.degree
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    mp = d.min_poly
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for j in range(n + 1):
                prod[k - n + j] -= c * mp[j]
    out = prod[:n] + [0] * max(0, n - len(prod))
    return tuple(out)


def ok_add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    n = max(len(a), len(b))
    a = tuple(a) + (0,) * (n - len(a))
    b = tuple(b) + (0,) * (n - len(b))
    return tuple(x + y for x, y in zip(a, b))


def degree1_roots(d: FieldDescriptor, l: int) -> list[int]:
    """Roots in F_l of the generator's minimal polynomial, ascending.

    When l splits completely these index the primes of K above l.
    """
    mp = [c % l for c in d.min_poly]
    return [x for x in range(l) if polyfp.evaluate(tuple(mp), x, l) == 0]


def splits_completely(d: FieldDescriptor, l: int) -> bool:
    if l in d.ramified_primes():
        return False
    return len(degree1_roots(d, l)) == d.degree
