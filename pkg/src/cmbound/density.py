"""Residue-criterion density of curve coefficients over imaginary quadratic fields.

A pair (A, B) with |A| < X^4 and |B| < X^6 (complex absolute value, strict)
passes the criterion when, at every prime above 5, A and the discriminant
both reduce to nonzero residues. Reduction mod 5 O_K only sees the
coordinates mod 5, so each disk is summarized by a 5 x 5 histogram of
(x mod 5, y mod 5) and the density is a weighted sum over 625 cell pairs.

Disk membership is decided in integer arithmetic: with w = sqrt(-m) the
squared absolute value of x + y w is x^2 + m y^2; with w = (1 + sqrt(-m))/2
four times it is (2x + y)^2 + m y^2.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist
from typing import Optional, Sequence, Union

import numpy as np

from cmbound import kernels
from cmbound.bounds import BoundResult, lower_bound
from cmbound.errors import CapExceeded
from cmbound.numfield import (
    Cyclotomic,
    FieldDescriptor,
    OKElement,
    Quadratic,
    ReductionMap,
    normalize,
    reduce_element,
    reduction_maps,
    splitting_of_5,
)

ENUMERATE_CAP = 10**9
MATERIALIZE_CAP = 5 * 10**7
HIST_ROW_CAP = 10**8
# scaled norms must stay well inside int64
_INT64_SAFE = 2**62
MC_BLOCK = 1 << 16
LABEL = "residue-criterion density"

Real = Union[int, float, Fraction]


def _quadratic(d: Union[FieldDescriptor, str]) -> Quadratic:
    d = normalize(d)
    if isinstance(d, Cyclotomic):
        raise ValueError("density machinery supports imaginary quadratic fields only")
    return d


def _frac(x: Real) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class DiskSpec:
    descriptor: Quadratic
    Y: Fraction

    def __init__(self, descriptor, Y: Real):
        object.__setattr__(self, "descriptor", _quadratic(descriptor))
        Y = _frac(Y)
        if Y < 1:
            raise ValueError("disk radius must be >= 1")
        object.__setattr__(self, "Y", Y)

    @property
    def scale(self) -> int:
        return 4 if self.descriptor.half else 1

    @property
    def limit(self) -> int:
        """Largest admissible scaled norm: scaled < scale * Y^2, as an integer bound."""
        v = self.scale * self.Y * self.Y
        lim = math.ceil(v) - 1
        if lim >= _INT64_SAFE:
            raise CapExceeded("disk radius too large for 64-bit exact comparison")
        return lim

    def expected_count(self) -> float:
        return 2 * math.pi * float(self.Y) ** 2 / math.sqrt(abs(self.descriptor.disc))


def scaled_norm(d: Quadratic, x, y):
    if d.half:
        return (2 * x + y) ** 2 + d.m * y * y
    return x * x + d.m * y * y


def embedding_abs(a: Union[OKElement, Sequence[int]], d: FieldDescriptor) -> float:
    """|sigma(a)|, equal for both complex embeddings of an imaginary quadratic field."""
    d = _quadratic(d)
    x, y = a.coords if isinstance(a, OKElement) else tuple(a)
    s = 4 if d.half else 1
    return math.sqrt(Fraction(scaled_norm(d, int(x), int(y)), s))


def enumerate_disk(spec: DiskSpec) -> np.ndarray:
    """All (x, y) with |x + y w| < Y, by a row-wise bounding-box scan; shape (k, 2).

    Rows are ordered by y, then x, both ascending.
    """
    d, lim = spec.descriptor, spec.limit
    if spec.expected_count() > min(ENUMERATE_CAP, MATERIALIZE_CAP):
        raise CapExceeded("disk too large to materialize")
    ymax = math.isqrt(lim // d.m)
    xmax = math.isqrt(lim) + ymax + 1
    xs = np.arange(-xmax, xmax + 1, dtype=np.int64)
    rows = []
    for y in range(-ymax, ymax + 1):
        keep = xs[scaled_norm(d, xs, np.int64(y)) <= lim]
        if keep.size:
            rows.append(np.column_stack([keep, np.full(keep.size, y, dtype=np.int64)]))
    if not rows:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(rows)


def disk_histogram(spec: DiskSpec) -> np.ndarray:
    """5 x 5 counts of disk points by (x mod 5, y mod 5)."""
    rows = 2 * math.isqrt(spec.limit // spec.descriptor.m) + 1
    if rows > HIST_ROW_CAP:
        raise CapExceeded("disk too large")
    return kernels.disk_residue_hist(spec.descriptor.m, spec.descriptor.half, spec.limit)


def disk_count(spec: DiskSpec) -> int:
    return int(disk_histogram(spec).sum())


@dataclass(frozen=True)
class ResidueDistribution:
    counts: dict  # r-tuple of residue indices -> count
    total: int
    num_maps: int

    def ratio_max_min(self, classes: int) -> float:
        vals = list(self.counts.values())
        if len(vals) < classes:
            return math.inf
        return max(vals) / min(vals)


def _cell_residues(maps: Sequence[ReductionMap]) -> list[list[tuple[int, ...]]]:
    return [[tuple(reduce_element((i, j), rm).index for rm in maps) for j in range(5)]
            for i in range(5)]


def residue_distribution(spec: DiskSpec, maps: Optional[Sequence[ReductionMap]] = None
                         ) -> ResidueDistribution:
    if maps is None:
        maps = reduction_maps(spec.descriptor)
    hist = disk_histogram(spec)
    cells = _cell_residues(maps)
    counts: dict = {}
    for i in range(5):
        for j in range(5):
            if hist[i, j]:
                key = cells[i][j]
                counts[key] = counts.get(key, 0) + int(hist[i, j])
    return ResidueDistribution(counts, int(hist.sum()), len(maps))


def good_table(d: Quadratic, maps: Optional[Sequence[ReductionMap]] = None) -> np.ndarray:
    """Boolean (r, 5, 5, 5, 5) table: criterion holds at prime i for cells (A cell, B cell)."""
    if maps is None:
        maps = reduction_maps(d)
    out = np.zeros((len(maps), 5, 5, 5, 5), dtype=bool)
    for k, rm in enumerate(maps):
        red = [[reduce_element((i, j), rm) for j in range(5)] for i in range(5)]
        for ai in range(5):
            for aj in range(5):
                a = red[ai][aj]
                if not a:
                    continue
                a3 = 4 * a**3
                for bi in range(5):
                    for bj in range(5):
                        b = red[bi][bj]
                        out[k, ai, aj, bi, bj] = bool(a3 + 27 * b * b)
    return out


def wilson_interval(k: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = k / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass
class DensityReport:
    field: str
    X: Fraction
    mode: str
    countA: int
    countB: int
    pair_total: int
    delta_zero_pairs: Optional[int]
    empirical_density: float
    theoretical: BoundResult
    per_prime: list
    exact: Optional[Fraction] = None
    ci: Optional[tuple] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    label: str = LABEL

    @property
    def nonsingular_pairs(self) -> Optional[int]:
        if self.delta_zero_pairs is None:
            return None
        return self.pair_total - self.delta_zero_pairs

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "X": str(self.X),
            "mode": self.mode,
            "label": self.label,
            "countA": self.countA,
            "countB": self.countB,
            "pair_total": self.pair_total,
            "delta_zero_pairs": self.delta_zero_pairs,
            "nonsingular_pairs": self.nonsingular_pairs,
            "empirical_density": self.empirical_density,
            "exact": None if self.exact is None else f"{self.exact.numerator}/{self.exact.denominator}",
            "ci95": None if self.ci is None else list(self.ci),
            "per_prime": self.per_prime,
            "samples": self.samples,
            "seed": self.seed,
            "theoretical": self.theoretical.to_dict(),
        }


def _boxes(d: Quadratic, X: Fraction) -> tuple[DiskSpec, DiskSpec]:
    return DiskSpec(d, X**4), DiskSpec(d, X**6)


def ordinary_density_exact(d: Union[FieldDescriptor, str], X: Real,
                           count_delta_zero: bool = True) -> DensityReport:
    """Exact proportion of pairs in the (X^4, X^6) box passing the residue criterion."""
    d = _quadratic(d)
    X = _frac(X)
    diskA, diskB = _boxes(d, X)
    hA = disk_histogram(diskA)
    hB = disk_histogram(diskB)
    table = good_table(d)
    nA, nB = int(hA.sum()), int(hB.sum())
    total = nA * nB
    # weights are exact integers; numbers stay far below 2^63 for enumerable boxes
    wAB = hA[:, :, None, None].astype(object) * hB[None, None, :, :].astype(object)
    good_all = table.all(axis=0)
    exact = Fraction(int((wAB * good_all).sum()), total)
    per = [float(Fraction(int((wAB * table[k]).sum()), total)) for k in range(table.shape[0])]
    dz = None
    if count_delta_zero:
        all_pairs, nonsingular = count_EX(d, X)
        dz = all_pairs - nonsingular
    return DensityReport(str(d), X, "exact", nA, nB, total, dz, float(exact),
                         lower_bound(splitting_of_5(d)), per, exact=exact)


# --- Delta = 0 locus -------------------------------------------------------------


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    n, dd = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(dd)
    if rn * rn != n or rd * rd != dd:
        return None
    return Fraction(rn, rd)


def ok_sqrt(d: Quadratic, x: int, y: int) -> list[tuple[int, int]]:
    """All beta in O_K with beta^2 = x + y w (zero, one pair +-beta, or none)."""
    m = d.m
    if d.half:
        u, v = Fraction(2 * x + y, 2), Fraction(y, 2)
    else:
        u, v = Fraction(x), Fraction(y)
    w = _rational_sqrt(u * u + m * v * v)
    if w is None:
        return []
    a2, b2 = (u + w) / 2, (w - u) / (2 * m)
    a, b = _rational_sqrt(a2), _rational_sqrt(b2)
    if a is None or b is None:
        return []
    if v != 0:
        b = v / (2 * a)
    cand = []
    for sa, sb in ((a, b), (-a, -b)):
        if d.half:
            yy, xx = 2 * sb, sa - sb
        else:
            xx, yy = sa, sb
        if xx.denominator == 1 and yy.denominator == 1:
            cand.append((int(xx), int(yy)))
    return sorted(set(cand))


def _ok_cube_coords(d: Quadratic, x: np.ndarray, y: np.ndarray):
    # (x + y w)^2 and ^3 in the power basis, using w^2 = -c0 - c1 w
    c0, c1 = d.min_poly[0], d.min_poly[1]

    def mul(a0, a1, b0, b1):
        t = a1 * b1
        return a0 * b0 - c0 * t, a0 * b1 + a1 * b0 - c1 * t

    s0, s1 = mul(x, y, x, y)
    return mul(s0, s1, x, y)


def count_EX(d: Union[FieldDescriptor, str], X: Real) -> tuple[int, int]:
    """(|E'_X|, |E_X|): all pairs in the box, and those with nonzero discriminant.

    For each A the pairs with 4A^3 + 27B^2 = 0 are found by taking a square
    root of -4A^3/27 in O_K and testing membership of B in the X^6 disk.
    """
    d = _quadratic(d)
    X = _frac(X)
    diskA, diskB = _boxes(d, X)
    pts = enumerate_disk(diskA)
    nB = disk_count(diskB)
    total = len(pts) * nB
    x, y = pts[:, 0], pts[:, 1]
    c0, c1 = _ok_cube_coords(d, x, y)
    c0, c1 = -4 * c0, -4 * c1
    cand = np.flatnonzero((c0 % 27 == 0) & (c1 % 27 == 0))
    limB = diskB.limit
    zero_pairs = 0
    for i in cand:
        for bx, by in ok_sqrt(d, int(c0[i]) // 27, int(c1[i]) // 27):
            if scaled_norm(d, bx, by) <= limB:
                zero_pairs += 1
    return total, total - zero_pairs


# --- Monte Carlo -----------------------------------------------------------------


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("CMBOUND_WORKERS", "1")))
    except ValueError:
        return 1


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Philox4x64 stream keyed by (seed, block); independent of scheduling."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(block,))))


def sample_disk(rng: np.random.Generator, spec: DiskSpec, n: int) -> np.ndarray:
    """n lattice points uniform on the disk, by rejection from its bounding box."""
    d, lim = spec.descriptor, spec.limit
    ymax = math.isqrt(lim // d.m)
    s = math.isqrt(lim)
    if d.half:
        xlo, xhi = -((s + ymax + 1) // 2), (s + ymax) // 2
    else:
        xlo, xhi = -s, s
    out = np.empty((n, 2), dtype=np.int64)
    got = 0
    while got < n:
        k = max(64, int(1.5 * (n - got)) + 16)
        xs = rng.integers(xlo, xhi, size=k, endpoint=True)
        ys = rng.integers(-ymax, ymax, size=k, endpoint=True)
        ok = scaled_norm(d, xs, ys) <= lim
        take = min(int(ok.sum()), n - got)
        out[got:got + take, 0] = xs[ok][:take]
        out[got:got + take, 1] = ys[ok][:take]
        got += take
    return out


def sample_pairs(d: Quadratic, X: Fraction, n: int, seed: int, block: int = 0
                 ) -> tuple[np.ndarray, np.ndarray]:
    diskA, diskB = _boxes(d, X)
    rng = block_rng(seed, block)
    return sample_disk(rng, diskA, n), sample_disk(rng, diskB, n)


def montecarlo_density(d: Union[FieldDescriptor, str], X: Real, samples: int, seed: int
                       ) -> DensityReport:
    """Density estimate from uniform samples of the two disks, with a Wilson 95% interval."""
    d = _quadratic(d)
    X = _frac(X)
    if samples < 1000:
        raise ValueError("at least 10^3 samples are required")
    diskA, diskB = _boxes(d, X)
    table = good_table(d)
    good_all = table.all(axis=0)
    nblocks = -(-samples // MC_BLOCK)

    def run(b: int):
        n = min(MC_BLOCK, samples - b * MC_BLOCK)
        A, B = sample_pairs(d, X, n, seed, b)
        ax, ay, bx, by = A[:, 0] % 5, A[:, 1] % 5, B[:, 0] % 5, B[:, 1] % 5
        per = [int(table[k, ax, ay, bx, by].sum()) for k in range(table.shape[0])]
        return int(good_all[ax, ay, bx, by].sum()), per

    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        results = list(pool.map(run, range(nblocks)))
    hits = sum(r[0] for r in results)
    per = [sum(r[1][k] for r in results) / samples for k in range(table.shape[0])]
    nA, nB = disk_count(diskA), disk_count(diskB)
    return DensityReport(str(d), X, "mc", nA, nB, nA * nB, None, hits / samples,
                         lower_bound(splitting_of_5(d)), per,
                         ci=wilson_interval(hits, samples), samples=samples, seed=seed)
