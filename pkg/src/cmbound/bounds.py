"""Exact evaluation of the residue-density lower bound (1 - 5^-f)^(2r).

The bound depends on f and r only; e is carried along for reporting.
The cyclotomic envelope (1 - 1/(n+1))^(2n / log_5(n+1)) involves a real
logarithm and is evaluated in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from cmbound.numfield import SplittingData

DECIMAL_DIGITS = 12
_CTX = Context(prec=DECIMAL_DIGITS, rounding=ROUND_HALF_EVEN)


def to_decimal(x: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    """Correctly rounded decimal string with ``digits`` significant digits (no padding)."""
    ctx = _CTX if digits == DECIMAL_DIGITS else Context(prec=digits, rounding=ROUND_HALF_EVEN)
    d = ctx.divide(Decimal(x.numerator), Decimal(x.denominator))
    s = format(d.normalize(ctx), "f")
    return s


@dataclass(frozen=True)
class BoundResult:
    exact: Fraction
    e: Optional[int]
    f: int
    r: int
    note: str = field(default="bound depends on f and r only; e is not used", compare=False)

    @property
    def decimal(self) -> str:
        return to_decimal(self.exact)

    @property
    def base(self) -> Fraction:
        return 1 - Fraction(1, 5**self.f)

    @property
    def exponent(self) -> int:
        return 2 * self.r

    def formula(self) -> str:
        b = self.base
        return f"({b.numerator}/{b.denominator})^{self.exponent}"

    def to_dict(self) -> dict:
        return {
            "e": self.e,
            "f": self.f,
            "r": self.r,
            "exact": f"{self.exact.numerator}/{self.exact.denominator}",
            "decimal": self.decimal,
            "note": self.note,
        }


def lower_bound(s: Union[SplittingData, tuple[int, int, int]]) -> BoundResult:
    if not isinstance(s, SplittingData):
        s = SplittingData(*s)
    exact = (1 - Fraction(1, 5**s.f)) ** (2 * s.r)
    return BoundResult(exact, s.e, s.f, s.r)


def generic_bound(degree: int) -> BoundResult:
    """(4/5)^(2 * degree): the worst case f = 1, r = degree."""
    if degree < 2 or degree % 2:
        raise ValueError("a CM field has even degree >= 2")
    return BoundResult(Fraction(4, 5) ** (2 * degree), None, 1, degree,
                       note="worst case f = 1, r = [K:Q]")


def _log5_exact(k: int) -> Optional[int]:
    e, v = 0, 1
    while v < k:
        v *= 5
        e += 1
    return e if v == k else None


def envelope_exact(n: int) -> Optional[Fraction]:
    """Exact envelope value when n + 1 is a power of 5 and the exponent is an integer."""
    k = _log5_exact(n + 1)
    if k is None or (2 * n) % k:
        return None
    return Fraction(n, n + 1) ** (2 * n // k)


def envelope(n: int) -> float:
    """(1 - 1/(n+1))^(2n / log_5(n+1)) as a float; relative error below 1e-12.

    Defined for every integer n >= 2; the cyclotomic comparison is meaningful
    for 5 not dividing n.
    """
    if n < 2:
        raise ValueError("envelope is defined for n >= 2")
    ex = envelope_exact(n)
    if ex is not None:
        return float(ex)
    expo = 2 * n * math.log(5) / math.log(n + 1)
    return math.exp(expo * math.log1p(-1 / (n + 1)))


def envelope_array(ns: np.ndarray) -> np.ndarray:
    return np.array([envelope(int(n)) for n in ns], dtype=np.float64)


@dataclass(frozen=True)
class ThresholdResult:
    N: int
    level: Fraction
    scan_max: int
    monotone_from: int  # envelope is strictly increasing on [monotone_from, scan_max]
    decreases: tuple[int, ...]  # n with envelope(n + 1) <= envelope(n)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "level": float(self.level),
            "scan_max": self.scan_max,
            "monotone_from": self.monotone_from,
            "decreases": list(self.decreases),
        }


def threshold(eps: Union[float, Fraction], scan_max: int) -> ThresholdResult:
    """Least N in [2, scan_max] with envelope(n) >= 1 - eps for all n in [N, scan_max].

    The comparison is exact (floats converted to Fraction). Monotonicity of
    the envelope is measured over the scanned range, not assumed.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if scan_max < 3:
        raise ValueError("scan_max must be >= 3")
    level = 1 - eps
    ns = np.arange(2, scan_max + 1)
    vals = envelope_array(ns)
    if Fraction(float(vals[-1])) < level:
        raise ValueError(f"envelope({scan_max}) = {vals[-1]!r} < 1 - eps; increase scan_max")
    ok = np.array([Fraction(float(v)) >= level for v in vals])
    bad = np.flatnonzero(~ok)
    N = int(ns[bad[-1] + 1]) if bad.size else 2
    diffs = np.diff(vals)
    dec = np.flatnonzero(diffs <= 0)
    monotone_from = int(ns[dec[-1] + 1]) if dec.size else 2
    return ThresholdResult(N, level, scan_max, monotone_from, tuple(int(ns[i]) for i in dec))
