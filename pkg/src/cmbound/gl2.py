"""GL_2(F_p) for small p as an explicit permutation of indices.

Matrices [[a, b], [c, d]] are indexed in lexicographic order of (a, b, c, d).
Subgroups are boolean masks over those indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from cmbound import kernels


@dataclass(frozen=True)
class GL2:
    p: int
    mats: np.ndarray  # (n, 4)
    table: np.ndarray  # (n, n) product indices
    trace: np.ndarray
    det: np.ndarray
    identity: int
    lookup: np.ndarray  # matrix code -> index, -1 for singular matrices

    @property
    def order(self) -> int:
        return self.mats.shape[0]

    def index(self, a: int, b: int, c: int, d: int) -> int:
        p = self.p
        code = ((a % p) * p + b % p) * p * p + (c % p) * p + d % p
        return int(self.lookup[code])

    def closure(self, gens) -> np.ndarray:
        gens = np.asarray(list(gens), dtype=np.int64)
        if gens.size == 0:
            mask = np.zeros(self.order, dtype=bool)
            mask[self.identity] = True
            return mask
        return kernels.group_closure(self.table, np.array([self.identity]), gens)

    def inverse(self) -> np.ndarray:
        inv = np.empty(self.order, dtype=np.int64)
        rows, cols = np.nonzero(self.table == self.identity)
        inv[rows] = cols
        return inv

    def sl2_mask(self) -> np.ndarray:
        return self.det == 1


@lru_cache(maxsize=None)
def gl2(p: int = 5) -> GL2:
    r = np.arange(p)
    a, b, c, d = (g.ravel() for g in np.meshgrid(r, r, r, r, indexing="ij"))
    det = (a * d - b * c) % p
    keep = det != 0
    mats = np.column_stack([a[keep], b[keep], c[keep], d[keep]]).astype(np.int64)
    n = mats.shape[0]
    lookup = np.full(p**4, -1, dtype=np.int64)
    codes = ((mats[:, 0] * p + mats[:, 1]) * p + mats[:, 2]) * p + mats[:, 3]
    lookup[codes] = np.arange(n)
    A, B, C, D = (mats[:, i] for i in range(4))
    pa = (A[:, None] * A[None, :] + B[:, None] * C[None, :]) % p
    pb = (A[:, None] * B[None, :] + B[:, None] * D[None, :]) % p
    pc = (C[:, None] * A[None, :] + D[:, None] * C[None, :]) % p
    pd = (C[:, None] * B[None, :] + D[:, None] * D[None, :]) % p
    table = lookup[((pa * p + pb) * p + pc) * p + pd]
    ident = int(lookup[(1 * p * p * p) + 1])
    for arr in (mats, table, lookup):
        arr.setflags(write=False)
    return GL2(p, mats, table, (A + D) % p, det[keep].astype(np.int64), ident, lookup)


@dataclass(frozen=True)
class Subgroup:
    mask: np.ndarray
    gens: tuple[int, ...]

    @property
    def order(self) -> int:
        return int(self.mask.sum())


def _key(mask: np.ndarray) -> bytes:
    return np.packbits(mask).tobytes()


def cyclic_subgroups(G: GL2) -> list[Subgroup]:
    seen: dict[bytes, Subgroup] = {}
    for g in range(G.order):
        mask = G.closure([g])
        k = _key(mask)
        if k not in seen:
            seen[k] = Subgroup(mask, (g,))
    return list(seen.values())


def all_subgroups(G: GL2) -> list[Subgroup]:
    """Every subgroup: cyclic subgroups, then joins with cyclic subgroups to a fixpoint.

    Any subgroup is the join of the cyclic subgroups of its elements, so
    repeatedly joining each new subgroup with every cyclic subgroup not
    already inside it reaches all of them.
    """
    cyc = cyclic_subgroups(G)
    found: dict[bytes, Subgroup] = {_key(s.mask): s for s in cyc}
    frontier = list(cyc)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyc:
                g = C.gens[0]
                if H.mask[g]:
                    continue
                gens = H.gens + (g,)
                mask = G.closure(gens)
                k = _key(mask)
                if k not in found:
                    S = Subgroup(mask, gens)
                    found[k] = S
                    nxt.append(S)
        frontier = nxt
    return sorted(found.values(), key=lambda s: (s.order, _key(s.mask)))


def commutator_closure(G: GL2, mask: np.ndarray) -> np.ndarray:
    """Subgroup generated by all commutators x y x^-1 y^-1 with x, y in ``mask``."""
    inv = G.inverse()
    idx = np.flatnonzero(mask)
    t = G.table
    xy = t[np.ix_(idx, idx)]
    xinv_yinv = t[np.ix_(inv[idx], inv[idx])]
    comm = np.unique(t[xy, xinv_yinv])
    return G.closure(comm)
