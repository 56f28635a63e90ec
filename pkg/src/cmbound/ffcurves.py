"""Short-Weierstrass curves y^2 = x^3 + A x + B over F_q.

Supersingularity is decided by the coefficient of x^(p-1) in
(x^3 + A x + B)^((p-1)/2) (the Hasse invariant). Point counting by
character sum is kept as an independent cross-check of that rule.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from cmbound import kernels
from cmbound.errors import CapExceeded
from cmbound.ffield import MAX_FIELD_SIZE, FFElem, FieldSpec, enumerate_field, is_square, make_field, tables

CENSUS_MAX_F = 5
TRACE_CHECK_MAX_F = 3


class CurveClass(enum.Enum):
    SINGULAR = "singular"
    SUPERSINGULAR = "supersingular"
    ORDINARY = "ordinary"


@dataclass(frozen=True)
class FFPair:
    A: FFElem
    B: FFElem

    def __post_init__(self):
        if self.A.spec != self.B.spec:
            raise ValueError("A and B must lie in the same field")

    @property
    def spec(self) -> FieldSpec:
        return self.A.spec

    @classmethod
    def of(cls, spec: FieldSpec, A, B) -> "FFPair":
        return cls(spec(A), spec(B))


@dataclass(frozen=True)
class CensusResult:
    q: int
    total: int
    singular: int
    supersingular: int
    ordinary: int

    def __post_init__(self):
        if self.singular + self.supersingular + self.ordinary != self.total:
            raise ValueError("census classes do not partition the pairs")

    def to_dict(self) -> dict:
        return asdict(self)


def discriminant(pair: FFPair) -> FFElem:
    A, B = pair.A, pair.B
    return -16 * (4 * A**3 + 27 * B**2)


def _truncated_mul(a: list, b: list, cap: int, zero) -> list:
    out = [zero] * min(len(a) + len(b) - 1, cap + 1)
    for i, x in enumerate(a):
        if not x or i > cap:
            continue
        for j, y in enumerate(b[: cap + 1 - i]):
            out[i + j] = out[i + j] + x * y
    return out


def deuring_coefficient(pair: FFPair) -> FFElem:
    """Coefficient of x^(p-1) in (x^3 + A x + B)^((p-1)/2), via truncated powering."""
    spec = pair.spec
    p = spec.p
    zero = spec.zero
    cubic = [pair.B, pair.A, zero, spec.one]
    cap = p - 1
    result = [spec.one]
    base = cubic
    e = (p - 1) // 2
    while e:
        if e & 1:
            result = _truncated_mul(result, base, cap, zero)
        e >>= 1
        if e:
            base = _truncated_mul(base, base, cap, zero)
    return result[cap] if len(result) > cap else zero


def classify(pair: FFPair) -> CurveClass:
    if not discriminant(pair):
        return CurveClass.SINGULAR
    if not deuring_coefficient(pair):
        return CurveClass.SUPERSINGULAR
    return CurveClass.ORDINARY


def count_points(pair: FFPair) -> int:
    """#E(F_q) including the point at infinity, by the quadratic character sum."""
    if not discriminant(pair):
        raise ValueError("point count requested for a singular curve")
    spec = pair.spec
    n = 1
    for x in enumerate_field(spec):
        rhs = x**3 + pair.A * x + pair.B
        if not rhs:
            n += 1
        elif is_square(rhs):
            n += 2
    return n


def trace(pair: FFPair) -> int:
    return pair.spec.q + 1 - count_points(pair)


def is_supersingular_trace(pair: FFPair) -> bool:
    return trace(pair) % pair.spec.p == 0


@lru_cache(maxsize=None)
def hasse_terms(p: int) -> tuple[tuple[int, int, int], ...]:
    """The Hasse invariant as a polynomial in (A, B): rows (c, j, k) for c * A^j * B^k.

    Obtained by expanding (x^3 + A x + B)^((p-1)/2) with A and B symbolic,
    keeping only the x^(p-1) coefficient, all coefficients reduced mod p.
    """
    # poly: dict x_degree -> dict (j, k) -> coeff
    n = (p - 1) // 2
    cubic = {3: {(0, 0): 1}, 1: {(1, 0): 1}, 0: {(0, 1): 1}}
    acc = {0: {(0, 0): 1}}
    for _ in range(n):
        nxt: dict = {}
        for d1, m1 in acc.items():
            for d2, m2 in cubic.items():
                d = d1 + d2
                if d > p - 1:
                    continue
                slot = nxt.setdefault(d, {})
                for (j1, k1), c1 in m1.items():
                    for (j2, k2), c2 in m2.items():
                        key = (j1 + j2, k1 + k2)
                        slot[key] = (slot.get(key, 0) + c1 * c2) % p
        acc = nxt
    top = acc.get(p - 1, {})
    return tuple(sorted((c, j, k) for (j, k), c in top.items() if c))


def _census_inputs(spec: FieldSpec):
    t = tables(spec)
    idx = np.arange(spec.q, dtype=np.int64)
    a3 = t.power(idx, 3)
    neg_four_a3 = t.neg(t.mul(t.scalar(4), a3))
    t27b2 = t.mul(t.scalar(27), t.power(idx, 2))
    terms = np.array(hasse_terms(spec.p), dtype=np.int64).reshape(-1, 3)
    return t, neg_four_a3, t27b2, terms


def class_table(spec: FieldSpec) -> np.ndarray:
    """(q, q) int8 codes over (A index, B index): 0 singular, 1 supersingular, 2 ordinary."""
    t, neg_four_a3, t27b2, terms = _census_inputs(spec)
    return kernels.classify_pairs(spec.p, spec.q, t.digits, t.pw, t.exp, t.log,
                                  neg_four_a3, t27b2, terms)


def census(f: int, p: int = 5) -> CensusResult:
    """Classify all q^2 pairs over F_{p^f}, iterating A then B in index order.

    Degrees whose field would exceed the field-size cap are invalid input
    (``ValueError``); valid fields beyond ``CENSUS_MAX_F`` raise ``CapExceeded``.
    """
    if f < 1 or p**f > MAX_FIELD_SIZE:
        raise ValueError(f"no supported field F_{p}^{f}")
    if f > CENSUS_MAX_F:
        raise CapExceeded(f"census is capped at f <= {CENSUS_MAX_F}")
    spec = make_field(p, f)
    counts = np.bincount(class_table(spec).ravel(), minlength=3)
    q = spec.q
    return CensusResult(q=q, total=q * q, singular=int(counts[0]),
                        supersingular=int(counts[1]), ordinary=int(counts[2]))


@dataclass(frozen=True)
class TraceCheck:
    q: int
    checked: int
    mismatches: int
    hasse_violations: int


def trace_cross_check(f: int, p: int = 5) -> TraceCheck:
    """Compare the Hasse-invariant class with p | trace on every nonsingular pair."""
    spec = make_field(p, f)
    if f > TRACE_CHECK_MAX_F:
        raise CapExceeded(f"trace cross-check is capped at f <= {TRACE_CHECK_MAX_F}")
    t = tables(spec)
    classes = class_table(spec)
    idx = np.arange(spec.q, dtype=np.int64)
    cube = t.power(idx, 3)
    traces = kernels.pair_traces(p, spec.q, t.digits, t.pw, t.exp, t.log, t.chi, cube, classes)
    nonsingular = classes != 0
    by_trace = (traces % p == 0)
    by_hasse = classes == 1
    mismatches = int(np.count_nonzero((by_trace != by_hasse) & nonsingular))
    bound = 2 * math.sqrt(spec.q)
    hasse = int(np.count_nonzero((np.abs(traces) > bound) & nonsingular))
    return TraceCheck(spec.q, int(np.count_nonzero(nonsingular)), mismatches, hasse)
