"""Finite fields F_{p^f} for odd primes p >= 5.

Elements are coefficient vectors modulo a fixed monic irreducible polynomial.
Each element also has an integer *index* ``sum(c_i * p**i)``; enumeration
order, the choice of modulus and every "first root" rule elsewhere in the
package follow this index order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from cmbound import polyfp
from cmbound.errors import CapExceeded

MAX_FIELD_SIZE = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    return polyfp._prime_factors(n)


@dataclass(frozen=True)
class FieldSpec:
    p: int
    f: int
    modulus: tuple[int, ...]  # monic, low-to-high, length f + 1

    @property
    def q(self) -> int:
        return self.p**self.f

    def __call__(self, value: Union[int, Sequence[int], "FFElem"]) -> "FFElem":
        if isinstance(value, FFElem):
            if value.spec != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (int, np.integer)):
            coeffs = [int(value) % self.p] + [0] * (self.f - 1)
        else:
            coeffs = list(value)
            if len(coeffs) > self.f:
                coeffs = list(polyfp.mod(polyfp.trim(coeffs, self.p), self.modulus, self.p))
            coeffs = [c % self.p for c in coeffs] + [0] * (self.f - len(coeffs))
        return FFElem(self, tuple(coeffs))

    def from_index(self, index: int) -> "FFElem":
        if not 0 <= index < self.q:
            raise ValueError(f"index {index} out of range for F_{self.q}")
        coeffs = []
        for _ in range(self.f):
            index, c = divmod(index, self.p)
            coeffs.append(c)
        return FFElem(self, tuple(coeffs))

    @property
    def zero(self) -> "FFElem":
        return self(0)

    @property
    def one(self) -> "FFElem":
        return self(1)

    def __repr__(self) -> str:
        return f"FieldSpec(p={self.p}, f={self.f}, modulus={self.modulus})"


@dataclass(frozen=True)
class FFElem:
    spec: FieldSpec = field(repr=False)
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * self.spec.p + c
        return out

    def _coerce(self, other) -> "FFElem":
        if isinstance(other, FFElem):
            if other.spec != self.spec:
                raise ValueError("operands belong to different fields")
            return other
        if isinstance(other, (int, np.integer)):
            return self.spec(int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return sub(self, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return sub(other, self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        p = self.spec.p
        return FFElem(self.spec, tuple((-c) % p for c in self.coeffs))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, inv(other))

    def __pow__(self, e: int):
        return power(self, e)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            return self == self.spec(int(other))
        if not isinstance(other, FFElem):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs))

    def __repr__(self) -> str:
        if self.spec.f == 1:
            return f"F{self.spec.q}({self.coeffs[0]})"
        return f"F{self.spec.q}{list(self.coeffs)}"


def _check(a: FFElem, b: FFElem) -> None:
    if a.spec != b.spec:
        raise ValueError("operands belong to different fields")


def add(a: FFElem, b: FFElem) -> FFElem:
    _check(a, b)
    p = a.spec.p
    return FFElem(a.spec, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))


def sub(a: FFElem, b: FFElem) -> FFElem:
    _check(a, b)
    p = a.spec.p
    return FFElem(a.spec, tuple((x - y) % p for x, y in zip(a.coeffs, b.coeffs)))


def mul(a: FFElem, b: FFElem) -> FFElem:
    _check(a, b)
    spec = a.spec
    prod = polyfp.mod(polyfp.mul(polyfp.trim(a.coeffs, spec.p), polyfp.trim(b.coeffs, spec.p), spec.p),
                      spec.modulus, spec.p)
    return FFElem(spec, tuple(prod) + (0,) * (spec.f - len(prod)))


def power(a: FFElem, e: int) -> FFElem:
    """Square-and-multiply; negative exponents go through :func:`inv`."""
    if e < 0:
        return power(inv(a), -e)
    result = a.spec.one
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def inv(a: FFElem) -> FFElem:
    if not a:
        raise ZeroDivisionError("inverse of zero in a finite field")
    return power(a, a.spec.q - 2)


def is_square(a: FFElem) -> bool:
    """Euler's criterion. Zero is outside the contract: callers treat it as one root."""
    if not a:
        raise ValueError("is_square is defined for nonzero elements only")
    return power(a, (a.spec.q - 1) // 2) == a.spec.one


def enumerate_field(spec: FieldSpec) -> list[FFElem]:
    """All q elements in index order; 0 first, then 1."""
    return [spec.from_index(i) for i in range(spec.q)]


@lru_cache(maxsize=None)
def make_field(p: int, f: int) -> FieldSpec:
    """F_{p^f} modulo the first monic irreducible of degree f in index order."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p in (2, 3):
        raise ValueError("characteristic 2 and 3 are not supported")
    if f < 1:
        raise ValueError("extension degree must be >= 1")
    if p**f > MAX_FIELD_SIZE:
        raise CapExceeded(f"{p}^{f} exceeds the field size cap {MAX_FIELD_SIZE}")
    if f == 1:
        return FieldSpec(p, 1, (0, 1))
    for idx in range(p**f):
        low = []
        for _ in range(f):
            idx, c = divmod(idx, p)
            low.append(c)
        cand = tuple(low) + (1,)
        if low[0] == 0:
            continue
        if any(polyfp.evaluate(cand, r, p) == 0 for r in range(p)):
            continue
        if polyfp.is_irreducible(cand, p):
            return FieldSpec(p, f, cand)
    raise AssertionError("no irreducible polynomial found")  # unreachable for f >= 1


def multiplicative_order(a: FFElem) -> int:
    if not a:
        raise ValueError("zero has no multiplicative order")
    n = a.spec.q - 1
    order = n
    for s in prime_factors(n):
        while order % s == 0 and power(a, order // s) == a.spec.one:
            order //= s
    return order


def primitive_element(spec: FieldSpec) -> FFElem:
    """First element in index order that generates the multiplicative group."""
    for i in range(1, spec.q):
        a = spec.from_index(i)
        if multiplicative_order(a) == spec.q - 1:
            return a
    raise AssertionError("finite field without a primitive element")


def roots(poly: Iterable[FFElem], spec: FieldSpec) -> list[FFElem]:
    """Roots in F_q of a polynomial with coefficients (low-to-high) coercible into ``spec``."""
    coeffs = [spec(c) for c in poly]
    out = []
    for a in enumerate_field(spec):
        acc = spec.zero
        for c in reversed(coeffs):
            acc = acc * a + c
        if not acc:
            out.append(a)
    return out


@dataclass(frozen=True)
class FieldTables:
    """Index-level lookup tables consumed by the kernels."""

    spec: FieldSpec
    digits: np.ndarray  # (q, f) coefficient vectors
    pw: np.ndarray  # (f,) powers of p
    exp: np.ndarray  # (q - 1,) index of g^k
    log: np.ndarray  # (q,) discrete log, log[0] = -1
    chi: np.ndarray  # (q,) quadratic character, chi[0] = 0

    def mul(self, a, b):
        q = self.spec.q
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        out[nz] = self.exp[(self.log[a[nz]] + self.log[b[nz]]) % (q - 1)]
        return out

    def add(self, a, b):
        return ((self.digits[a] + self.digits[b]) % self.spec.p) @ self.pw

    def neg(self, a):
        return ((-self.digits[a]) % self.spec.p) @ self.pw

    def power(self, a, e: int):
        q = self.spec.q
        a = np.asarray(a, dtype=np.int64)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = a != 0
        out[nz] = self.exp[(e * self.log[a[nz]]) % (q - 1)]
        if e == 0:
            out[:] = 1
        return out

    def scalar(self, c: int) -> int:
        return int(c) % self.spec.p


@lru_cache(maxsize=None)
def tables(spec: FieldSpec) -> FieldTables:
    q, p, f = spec.q, spec.p, spec.f
    idx = np.arange(q, dtype=np.int64)
    pw = np.array([p**i for i in range(f)], dtype=np.int64)
    digits = (idx[:, None] // pw[None, :]) % p
    g = primitive_element(spec)
    exp = np.empty(q - 1, dtype=np.int64)
    log = np.full(q, -1, dtype=np.int64)
    cur = spec.one
    for k in range(q - 1):
        i = cur.index
        exp[k] = i
        log[i] = k
        cur = cur * g
    chi = np.where(log % 2 == 0, 1, -1).astype(np.int64)
    chi[0] = 0
    for arr in (digits, pw, exp, log, chi):
        arr.setflags(write=False)
    return FieldTables(spec, digits, pw, exp, log, chi)
