"""Mod-5 image witnesses, decomposed generic primes, and their group-theory oracles.

Frobenius at a degree-1 prime v above l acts on E[5] with trace a_v (mod 5)
and determinant l (mod 5). Three trace/determinant signatures rule out the
proper det-surjective subgroups of GL_2(F_5) not containing SL_2(F_5):

* nonsquare: a^2 - 4l is a nonsquare mod 5 (irreducible characteristic polynomial);
* square: a^2 - 4l is a nonzero square and a != 0 mod 5;
* exceptional: a^2 = 3l mod 5, i.e. projective order 6.

Seeing all three certifies that the image contains SL_2(F_5), relative to
:func:`subgroup_oracle`. Not seeing them is inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from cmbound import kernels, polyfp
from cmbound.density import DiskSpec, block_rng, sample_disk, wilson_interval
from cmbound.ffield import make_field, roots
from cmbound.gl2 import GL2, all_subgroups, commutator_closure, gl2
from cmbound.numfield import (
    FieldDescriptor,
    Quadratic,
    degree1_roots,
    normalize,
    ok_add,
    ok_mul,
    splits_completely,
)

P = 5
DEFAULT_L = 1000
_SCAN_STREAM = 1 << 32  # keeps scan streams apart from density blocks

Coords = tuple[int, ...]


@dataclass(frozen=True)
class WitnessFlags:
    square: bool = False
    nonsquare: bool = False
    exceptional: bool = False

    def __or__(self, other: "WitnessFlags") -> "WitnessFlags":
        return WitnessFlags(self.square or other.square, self.nonsquare or other.nonsquare,
                            self.exceptional or other.exceptional)

    @property
    def complete(self) -> bool:
        return self.square and self.nonsquare and self.exceptional

    def missing(self) -> list[str]:
        return [k for k, v in asdict(self).items() if not v]


def witness_flags(a: int, l: int) -> WitnessFlags:
    """Witnesses contributed by one Frobenius with trace a and determinant l (mod 5)."""
    if l % P == 0:
        raise ValueError("determinant must be prime to 5")
    D = (a * a - 4 * l) % P
    return WitnessFlags(
        square=D in (1, 4) and a % P != 0,
        nonsquare=D in (2, 3),
        exceptional=(a * a - 3 * l) % P == 0,
    )


@dataclass(frozen=True)
class FrobSample:
    l: int
    prime_index: int
    a: int
    N: int


# --- curves over K -----------------------------------------------------------------


def _coords(d: FieldDescriptor, v: Sequence[int]) -> Coords:
    v = tuple(int(c) for c in v)
    n = d.degree
    if len(v) > n:
        raise ValueError(f"too many coordinates for a degree-{n} field")
    return v + (0,) * (n - len(v))


def discriminant_core(d: FieldDescriptor, A: Sequence[int], B: Sequence[int]) -> Coords:
    """4A^3 + 27B^2 in O_K; the discriminant is -16 times this."""
    A, B = _coords(d, A), _coords(d, B)
    a3 = ok_mul(d, ok_mul(d, A, A), A)
    b2 = ok_mul(d, B, B)
    return ok_add(tuple(4 * c for c in a3), tuple(27 * c for c in b2))


def is_singular(d: FieldDescriptor, A: Sequence[int], B: Sequence[int]) -> bool:
    return not any(discriminant_core(d, A, B))


def _reduce(coords: Sequence[int], r: int, l: int) -> int:
    acc = 0
    for c in reversed(coords):
        acc = (acc * r + c) % l
    return acc


@lru_cache(maxsize=None)
def _primes_upto(L: int) -> tuple[int, ...]:
    if L < 2:
        return ()
    sieve = np.ones(L + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(L) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return tuple(int(x) for x in np.flatnonzero(sieve))


@lru_cache(maxsize=None)
def _split_primes(d: FieldDescriptor, L: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    bad = set(d.ramified_primes()) | {2, P}
    out = []
    for l in _primes_upto(L):
        if l in bad:
            continue
        rts = degree1_roots(d, l)
        if len(rts) == d.degree:
            out.append((l, tuple(rts)))
    return tuple(out)


@lru_cache(maxsize=None)
def _legendre(l: int) -> np.ndarray:
    return kernels.legendre_table(l)


def good_degree1_primes(d: Union[FieldDescriptor, str], pair, L: int) -> list[int]:
    """Primes l <= L, prime to 10 disc(K), split completely, with good reduction above l."""
    d = normalize(d)
    A, B = (_coords(d, v) for v in pair)
    core = discriminant_core(d, A, B)
    out = []
    for l, rts in _split_primes(d, L):
        if all(_reduce(core, r, l) for r in rts):
            out.append(l)
    return out


def frob_traces(d: FieldDescriptor, pair, l: int) -> list[FrobSample]:
    """One sample per prime of K above l, in ascending order of the root of min_poly."""
    d = normalize(d)
    A, B = (_coords(d, v) for v in pair)
    if not splits_completely(d, l) or l in (2, P):
        raise ValueError(f"{l} is not a usable split prime of {d}")
    rts = degree1_roots(d, l)
    core = discriminant_core(d, A, B)
    if any(_reduce(core, r, l) == 0 for r in rts):
        raise ValueError(f"bad reduction above {l}")
    av = np.array([_reduce(A, r, l) for r in rts], dtype=np.int64)
    bv = np.array([_reduce(B, r, l) for r in rts], dtype=np.int64)
    traces = kernels.prime_traces(av, bv, l, _legendre(l))
    return [FrobSample(l, i, int(t), l + 1 - int(t)) for i, t in enumerate(traces)]


def frob_trace(d: FieldDescriptor, pair, l: int, prime_index: int) -> FrobSample:
    return frob_traces(d, pair, l)[prime_index]


# --- certification -----------------------------------------------------------------


@dataclass(frozen=True)
class ScanReport:
    curve: str
    field: str
    flags: WitnessFlags
    certified: bool
    samples_used: int
    L: int
    primes_scanned: int

    def to_dict(self) -> dict:
        return {
            "curve": self.curve,
            "field": self.field,
            "flags": asdict(self.flags),
            "certified": self.certified,
            "samples_used": self.samples_used,
            "L": self.L,
            "primes_scanned": self.primes_scanned,
        }


def curve_id(A: Sequence[int], B: Sequence[int]) -> str:
    return f"A={list(A)};B={list(B)}"


def _det_surjective(d: FieldDescriptor) -> bool:
    # K and Q(zeta_5) meet in Q: imaginary quadratic fields never contain sqrt(5),
    # Q(zeta_n) with 5 not dividing n is linearly disjoint from Q(zeta_5)
    if isinstance(d, Quadratic):
        return True
    return d.n % P != 0


def certify_sl2(d: Union[FieldDescriptor, str], pair, L: int = DEFAULT_L) -> ScanReport:
    """Scan split primes up to L, stopping once all three witnesses have appeared."""
    d = normalize(d)
    if not _det_surjective(d):
        raise ValueError(f"determinant surjectivity is not guaranteed over {d}")
    A, B = (_coords(d, v) for v in pair)
    if is_singular(d, A, B):
        raise ValueError("singular Weierstrass pair")
    flags = WitnessFlags()
    used = scanned = 0
    for l in good_degree1_primes(d, (A, B), L):
        scanned += 1
        for s in frob_traces(d, (A, B), l):
            used += 1
            flags = flags | witness_flags(s.a, l)
        if flags.complete:
            break
    return ScanReport(curve_id(A, B), str(d), flags, flags.complete, used, L, scanned)


# --- group-theory oracles ----------------------------------------------------------


def _element_flags(G: GL2, idx: np.ndarray) -> WitnessFlags:
    flags = WitnessFlags()
    for tr, det in set(zip(G.trace[idx].tolist(), G.det[idx].tolist())):
        flags = flags | witness_flags(tr, det)
    return flags


def subgroup_witnesses(mask: np.ndarray, G: Optional[GL2] = None) -> WitnessFlags:
    G = G or gl2(P)
    return _element_flags(G, np.flatnonzero(mask))


@dataclass
class OracleReport:
    subgroup_count: int
    relevant_count: int  # det-surjective, not containing SL_2
    sound: bool  # no relevant subgroup shows all three witnesses
    gl2_complete: bool
    maximal_missing: list = field(default_factory=list)  # (order, missing witnesses) for maximal relevant H

    def to_dict(self) -> dict:
        return asdict(self)


@lru_cache(maxsize=1)
def subgroup_oracle() -> OracleReport:
    """Check the witness rules against every subgroup of GL_2(F_5)."""
    G = gl2(P)
    subs = all_subgroups(G)
    sl2 = G.sl2_mask()
    relevant = []
    for H in subs:
        dets = set(G.det[H.mask].tolist())
        if len(dets) == P - 1 and (sl2 & ~H.mask).any():
            relevant.append(H)
    flags = [subgroup_witnesses(H.mask, G) for H in relevant]
    sound = not any(f.complete for f in flags)
    maximal = []
    for H, f in zip(relevant, flags):
        if not any((H.mask & ~K.mask).sum() == 0 and K.order > H.order for K in relevant):
            maximal.append((H.order, f.missing()))
    whole = subgroup_witnesses(np.ones(G.order, dtype=bool), G)
    return OracleReport(len(subs), len(relevant), sound, whole.complete, sorted(maximal))


def is_perfect_sl2() -> bool:
    G = gl2(P)
    sl2 = G.sl2_mask()
    return bool(np.array_equal(commutator_closure(G, sl2), sl2))


def borel_mask(G: Optional[GL2] = None) -> np.ndarray:
    G = G or gl2(P)
    return G.mats[:, 2] == 0


def split_cartan_normalizer_mask(G: Optional[GL2] = None) -> np.ndarray:
    G = G or gl2(P)
    diag = (G.mats[:, 1] == 0) & (G.mats[:, 2] == 0)
    anti = (G.mats[:, 0] == 0) & (G.mats[:, 3] == 0)
    return diag | anti


def nonsplit_cartan_normalizer_mask(G: Optional[GL2] = None) -> np.ndarray:
    """Normalizer of F_25^x embedded via the basis {1, sqrt(2)}."""
    G = G or gl2(P)
    # a + b sqrt2 acts as [[a, 2b], [b, a]]; conjugation sqrt2 -> -sqrt2 is diag(1, -1)
    gens = [G.index(2, 2, 1, 2), G.index(1, 0, 0, 4)]
    return G.closure(gens)


# --- decomposed generic primes -----------------------------------------------------


def dg_congruence_ok(a: int, l: int) -> bool:
    """Frobenius eigenvalue ratio avoids {1, l, 1/l}, read off from (a, l) mod 5."""
    return (a * a - 4 * l) % P != 0 and (a - (1 + l)) % P != 0 and (a + (1 + l)) % P != 0


def dg_ratio_ok(a: int, det: int) -> bool:
    """Same condition computed from the eigenvalues themselves in F_25."""
    F = make_field(P, 2)
    eig = roots([det % P, (-a) % P, 1], F)
    if len(eig) == 1:  # repeated eigenvalue
        return False
    alpha, beta = eig
    ratio = alpha / beta
    dv = F(det)
    bad = (F.one, dv, F.one / dv)
    return ratio not in bad and (beta / alpha) not in bad


def dg_equivalence_oracle() -> list[tuple[int, int, bool, bool]]:
    """(a, det, congruence verdict, eigenvalue verdict) for all a in F_5, det in F_5^x."""
    return [(a, det, dg_congruence_ok(a, det), dg_ratio_ok(a, det))
            for a in range(P) for det in range(1, P)]


def dg_find(d: Union[FieldDescriptor, str], pair, Lmax: int) -> Optional[int]:
    """Smallest prime l <= Lmax that is decomposed generic for the mod-5 representation."""
    d = normalize(d)
    for l in good_degree1_primes(d, pair, Lmax):
        if all(dg_congruence_ok(s.a, l) for s in frob_traces(d, pair, l)):
            return l
    return None


def _count_points_mod(a: int, b: int, l: int) -> int:
    n = 1
    for x in range(l):
        rhs = (x * x * x + a * x + b) % l
        n += 1 if rhs == 0 else (2 if pow(rhs, (l - 1) // 2, l) == 1 else 0)
    return n


def verify_dg_prime(d: Union[FieldDescriptor, str], pair, l: int) -> bool:
    """Recheck every defining condition for l, recomputing traces by a separate route.

    Roots come from direct evaluation, point counts from Euler's criterion and
    the eigenvalue test is done in F_25 rather than by congruence.
    """
    d = normalize(d)
    A, B = (_coords(d, v) for v in pair)
    if l < 3 or l == P or any(l % q == 0 for q in range(2, math.isqrt(l) + 1)):
        return False
    if any(l % q == 0 for q in d.ramified_primes()):
        return False
    rts = [r for r in range(l) if _reduce(d.min_poly, r, l) == 0]
    if len(rts) != d.degree:
        return False
    for r in rts:
        a_red, b_red = _reduce(A, r, l), _reduce(B, r, l)
        if (4 * a_red**3 + 27 * b_red**2) % l == 0:
            return False
        a = l + 1 - _count_points_mod(a_red, b_red, l)
        if not dg_ratio_ok(a, l):
            return False
    return True


# --- height scans ------------------------------------------------------------------


@dataclass(frozen=True)
class HeightRow:
    X: str
    samples: int
    uncertified: int
    fraction: float
    ci: tuple[float, float]

    def to_dict(self) -> dict:
        return {"X": self.X, "samples": self.samples, "uncertified": self.uncertified,
                "fraction": self.fraction, "ci95": list(self.ci)}


def sample_nonsingular_pairs(d: Quadratic, X, n: int, seed: int, stream: int = 0,
                             force_cm: bool = False) -> list[tuple[Coords, Coords]]:
    """n pairs drawn uniformly from the (X^4, X^6) box with nonzero discriminant."""
    X = Fraction(X)
    diskA, diskB = DiskSpec(d, X**4), DiskSpec(d, X**6)
    rng = block_rng(seed, _SCAN_STREAM + stream)
    out: list = []
    while len(out) < n:
        k = n - len(out)
        As = sample_disk(rng, diskA, k)
        Bs = sample_disk(rng, diskB, k)
        for a, b in zip(As.tolist(), Bs.tolist()):
            if force_cm:
                b = [0, 0]
            if not is_singular(d, a, b):
                out.append((tuple(a), tuple(b)))
    return out


def scan_heights(d: Union[FieldDescriptor, str], X_list: Iterable, samples: int, seed: int,
                 L: int = DEFAULT_L, force_cm: bool = False) -> list[HeightRow]:
    """Fraction of sampled curves not certified at depth L, per box size X."""
    d = normalize(d)
    if not isinstance(d, Quadratic):
        raise ValueError("height scans sample imaginary quadratic boxes only")
    rows = []
    for i, X in enumerate(X_list):
        pairs = sample_nonsingular_pairs(d, X, samples, seed, stream=i, force_cm=force_cm)
        bad = sum(not certify_sl2(d, pr, L).certified for pr in pairs)
        rows.append(HeightRow(str(Fraction(X)), samples, bad, bad / samples,
                              wilson_interval(bad, samples)))
    return rows


# --- hypothesis checklist ----------------------------------------------------------


def residue_criterion(d: FieldDescriptor, A: Sequence[int], B: Sequence[int]) -> list[bool]:
    """Per prime above 5: A and 4A^3 + 27B^2 both nonzero modulo that prime.

    A prime above 5 is (5, g(w)) for an irreducible factor g of min_poly mod 5;
    an element vanishes there exactly when g divides its coordinate polynomial.
    """
    mp = polyfp.trim(d.min_poly, P)
    g0 = polyfp.gcd(mp, polyfp.derivative(mp, P), P)
    sqfree = polyfp.divmod_(mp, g0, P)[0] if polyfp.degree(g0) > 0 else mp
    factors = polyfp.berlekamp_factor(sqfree, P)
    core = discriminant_core(d, A, B)
    a_poly = polyfp.trim(_coords(d, A), P)
    c_poly = polyfp.trim(core, P)
    out = []
    for g in factors:
        out.append(polyfp.mod(a_poly, g, P) != () and polyfp.mod(c_poly, g, P) != ())
    return out


@dataclass
class Checklist:
    curve: str
    field: str
    irreducible: str  # "certified" | "inconclusive"
    ordinary: str  # "verified" | "inconclusive"
    decomposed_generic: str  # "verified" | "inferred" | "inconclusive"
    dg_prime: Optional[int]
    scan: ScanReport
    verdict: str

    def to_dict(self) -> dict:
        out = asdict(self)
        out["scan"] = self.scan.to_dict()
        return out


def checklist(d: Union[FieldDescriptor, str], pair, L: int = DEFAULT_L) -> Checklist:
    d = normalize(d)
    A, B = (_coords(d, v) for v in pair)
    scan = certify_sl2(d, (A, B), L)
    irreducible = "certified" if scan.certified else "inconclusive"
    ordinary = "verified" if all(residue_criterion(d, A, B)) else "inconclusive"
    l = dg_find(d, (A, B), L)
    if l is not None:
        dg = "verified"
    elif scan.certified:
        dg = "inferred"
    else:
        dg = "inconclusive"
    ok = scan.certified and ordinary == "verified" and dg != "inconclusive"
    verdict = "hypotheses empirically verified" if ok else "not verified"
    return Checklist(curve_id(A, B), str(d), irreducible, ordinary, dg, l, scan, verdict)
