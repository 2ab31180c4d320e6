"""Finite abelian groups Z/r_1 x ... x Z/r_n with r_1 | ... | r_n.

Subgroups are explicit subsets (two subgroups are the same only if they are
equal as sets).  Elements are tuples; internally they are also addressed by a
mixed-radix index so that subgroup closure can run on numpy index arrays.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .ffield import prime_factors

SUBGROUP_CAP = 256

GroupVec = tuple  # (a_1, ..., a_n), 0 <= a_j < r_j


@dataclass(frozen=True)
class GroupSpec:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        rs = tuple(int(r) for r in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", rs)
        for r in rs:
            if r < 2:
                raise ValueError(f"invariant factors must be >= 2, got {rs}")
        for a, b in zip(rs, rs[1:]):
            if b % a:
                raise ValueError(f"invariant factors must divide each other: {rs}")

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        text = text.strip()
        if text in ("", "1", "trivial"):
            return cls(())
        return cls(tuple(int(t) for t in text.replace("x", ",").split(",") if t.strip()))

    @property
    def n(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def elements(self) -> list[GroupVec]:
        return [tuple(reversed(v)) for v in
                itertools.product(*(range(r) for r in reversed(self.invariant_factors)))]

    def nonzero(self) -> list[GroupVec]:
        """The set R of nonzero vectors, in index order."""
        return self.elements()[1:]

    def reduce(self, v) -> GroupVec:
        return tuple(int(a) % r for a, r in zip(v, self.invariant_factors))

    def add(self, u, v) -> GroupVec:
        return tuple((a + b) % r for a, b, r in zip(u, v, self.invariant_factors))

    def neg(self, v) -> GroupVec:
        return tuple(-a % r for a, r in zip(v, self.invariant_factors))

    def scale(self, m: int, v) -> GroupVec:
        return tuple(m * a % r for a, r in zip(v, self.invariant_factors))

    def zero(self) -> GroupVec:
        return (0,) * self.n

    def index(self, v) -> int:
        idx, mul = 0, 1
        for a, r in zip(v, self.invariant_factors):
            idx += a * mul
            mul *= r
        return idx

    def dot(self, u, v) -> int:
        """u . v = sum (r_n / r_j) u_j v_j mod r_n."""
        rn = self.exponent
        return sum((rn // r) * a * b for a, b, r in zip(u, v, self.invariant_factors)) % rn

    def __str__(self):
        return "x".join(f"Z/{r}" for r in self.invariant_factors) or "1"


def element_order(G: GroupSpec, v) -> int:
    out = 1
    for a, r in zip(v, G.invariant_factors):
        out = math.lcm(out, r // math.gcd(r, a % r))
    return out


def phi(G: GroupSpec, s: int) -> int:
    if G.exponent % s:
        raise ValueError(f"{s} does not divide the exponent {G.exponent}")
    return sum(1 for v in G.elements() if element_order(G, v) == s)


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def weight(G: GroupSpec, v) -> int:
    """Riemann-Hurwitz weight c(v) = |G| - |G|/e(v)."""
    return G.order - G.order // element_order(G, v)


# ----------------------------------------------------------------------------
# abstract types

def type_from_counts(torsion: dict[int, list[int]]) -> tuple[int, ...]:
    """Invariant factors from p-torsion sizes.

    ``torsion[p][k]`` is |X[p^k]| for k = 0, 1, ...  (until it stabilizes).
    """
    parts: list[list[int]] = []  # per prime, exponents sorted descending
    for p, sizes in torsion.items():
        ranks = []
        for k in range(1, len(sizes)):
            ratio = sizes[k] // sizes[k - 1]
            ranks.append(round(math.log(ratio, p)) if ratio > 1 else 0)
        # ranks[k-1] = #{lambda_i >= k}
        lam = []
        for k, rk in enumerate(ranks, start=1):
            nxt = ranks[k] if k < len(ranks) else 0
            lam += [k] * (rk - nxt)
        parts.append([p ** a for a in sorted(lam, reverse=True)])
    width = max((len(x) for x in parts), default=0)
    factors = []
    for i in range(width):
        f = 1
        for x in parts:
            if i < len(x):
                f *= x[i]
        factors.append(f)
    return tuple(sorted(factors))


def delsarte_mu(invariant_factors) -> int:
    """Mobius function of the subgroup lattice evaluated on an abstract type."""
    rs = [r for r in invariant_factors if r > 1]
    out = 1
    primes = sorted({p for r in rs for p in prime_factors(r)})
    for p in primes:
        exps = []
        for r in rs:
            a = 0
            while r % p == 0:
                r //= p
                a += 1
            if a:
                exps.append(a)
        if any(a != 1 for a in exps):
            return 0
        n = len(exps)
        out *= (-1) ** n * p ** (n * (n - 1) // 2)
    return out


# ----------------------------------------------------------------------------
# subgroup lattice

class _Tables:
    def __init__(self, G: GroupSpec):
        self.G = G
        els = G.elements()
        self.els = els
        N = len(els)
        coords = np.array(els, dtype=np.int64).reshape(N, G.n)
        rs = np.array(G.invariant_factors, dtype=np.int64)
        mul = np.cumprod(np.concatenate([[1], rs[:-1]])) if G.n else np.zeros(0, dtype=np.int64)
        self.coords = coords
        self.rs = rs
        self.mul = mul
        if G.n:
            s = (coords[:, None, :] + coords[None, :, :]) % rs
            self.add = s @ mul
        else:
            self.add = np.zeros((1, 1), dtype=np.int64)
        self.orders = np.array([element_order(G, v) for v in els], dtype=np.int64)

    def multiple(self, m: int) -> np.ndarray:
        if not self.G.n:
            return np.zeros(1, dtype=np.int64)
        return ((m * self.coords) % self.rs) @ self.mul

    def cyclic(self, i: int) -> np.ndarray:
        out = [0]
        x = i
        while x != 0:
            out.append(x)
            x = int(self.add[x, i])
        return np.array(sorted(out), dtype=np.int64)


@lru_cache(maxsize=64)
def _tables(G: GroupSpec) -> _Tables:
    return _Tables(G)


class Subgroup:
    """A subgroup of ``parent`` given as an explicit set of element indices."""

    def __init__(self, parent: GroupSpec, index_set):
        self.parent = parent
        self.index_set = np.array(sorted(set(int(i) for i in index_set)), dtype=np.int64)
        self._key = self.index_set.tobytes()

    @classmethod
    def generated_by(cls, G: GroupSpec, gens) -> "Subgroup":
        t = _tables(G)
        S = np.array([0], dtype=np.int64)
        for g in gens:
            i = G.index(G.reduce(g))
            if i in set(S.tolist()):
                continue
            S = np.unique(t.add[np.ix_(S, t.cyclic(i))].ravel())
        return cls(G, S)

    @property
    def elements(self) -> frozenset:
        t = _tables(self.parent)
        return frozenset(t.els[i] for i in self.index_set)

    @property
    def order(self) -> int:
        return int(self.index_set.size)

    def __contains__(self, v) -> bool:
        i = self.parent.index(self.parent.reduce(v))
        pos = np.searchsorted(self.index_set, i)
        return pos < self.index_set.size and self.index_set[pos] == i

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.parent == other.parent and self._key == other._key

    def __hash__(self):
        return hash((self.parent, self._key))

    def __repr__(self):
        return f"Subgroup(order={self.order}, type={self.invariant_factors} in {self.parent})"

    def is_full(self) -> bool:
        return self.order == self.parent.order

    def is_subset(self, other: "Subgroup") -> bool:
        return bool(np.isin(self.index_set, other.index_set).all())

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        t = _tables(self.parent)
        ords = t.orders[self.index_set]
        return _type_from_orders(ords)

    @cached_property
    def quotient_factors(self) -> tuple[int, ...]:
        """Abstract type of parent / self, from coset orders."""
        t = _tables(self.parent)
        member = np.zeros(len(t.els), dtype=bool)
        member[self.index_set] = True
        exp = self.parent.exponent
        torsion = {}
        for p in prime_factors(exp) if exp > 1 else []:
            sizes, k = [1], 1
            while True:
                cnt = int(member[t.multiple(p ** k)].sum()) // self.order
                sizes.append(cnt)
                if exp % p ** k:
                    break
                k += 1
            torsion[p] = sizes
        return type_from_counts(torsion)

    def to_group(self) -> GroupSpec:
        return GroupSpec(self.invariant_factors)


def _type_from_orders(ords: np.ndarray) -> tuple[int, ...]:
    exp = int(np.lcm.reduce(ords)) if ords.size else 1
    torsion = {}
    for p in prime_factors(exp) if exp > 1 else []:
        sizes, k = [1], 1
        while True:
            sizes.append(int((p ** k % ords == 0).sum()))
            if exp % p ** k:
                break
            k += 1
        torsion[p] = sizes
    return type_from_counts(torsion)


def subgroups(G: GroupSpec, cap: int = SUBGROUP_CAP) -> list[Subgroup]:
    """Every subgroup of G exactly once, sorted by (order, index set)."""
    if G.order > cap:
        raise ValueError(f"|G| = {G.order} exceeds the subgroup cap {cap}")
    return list(_subgroups(G))


@lru_cache(maxsize=64)
def _subgroups(G: GroupSpec) -> tuple[Subgroup, ...]:
    t = _tables(G)
    N = len(t.els)
    cyclics = {}
    for i in range(N):
        c = t.cyclic(i)
        cyclics.setdefault(c.tobytes(), c)
    cyc = list(cyclics.values())
    zero = np.array([0], dtype=np.int64)
    seen = {zero.tobytes(): zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for S in frontier:
            member = np.zeros(N, dtype=bool)
            member[S] = True
            for C in cyc:
                if member[C].all():
                    continue
                T = np.unique(t.add[np.ix_(S, C)].ravel())
                key = T.tobytes()
                if key not in seen:
                    seen[key] = T
                    nxt.append(T)
        frontier = nxt
    out = [Subgroup(G, S) for S in seen.values()]
    out.sort(key=lambda H: (H.order, tuple(H.index_set.tolist())))
    return tuple(out)


def mobius_identity_check(G: GroupSpec) -> int:
    return sum(delsarte_mu(H.invariant_factors) for H in subgroups(G))


def all_group_shapes(max_order: int) -> list[GroupSpec]:
    """Every abelian group of order <= max_order, by invariant factors."""
    out = [GroupSpec(())]

    def extend(prefix, remaining):
        # next factor must be a multiple of the last one
        last = prefix[-1] if prefix else None
        start = last if last else 2
        for r in range(start, remaining + 1):
            if last and r % last:
                continue
            if r > remaining:
                break
            fs = prefix + (r,)
            out.append(GroupSpec(fs))
            extend(fs, remaining // r)

    extend((), max_order)
    return sorted(out, key=lambda G: (G.order, G.invariant_factors))
