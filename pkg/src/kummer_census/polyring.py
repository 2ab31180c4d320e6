"""Monic polynomials over F_q.

Coefficient vectors are stored low -> high.  A monic polynomial of degree d
is indexed by ``sum(c_i * q**i for i < d)``; increasing index is the
enumeration order (lexicographic on ``(c_{d-1}, ..., c_0)``, constant term
varying fastest).

For bulk work a :class:`PolyTable` holds, for every monic polynomial of degree
``<= dmax``, its smallest irreducible factor and cofactor, computed by a
vectorized sieve.  Factorizations, squarefreeness and irreducibility then come
from table lookups.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .ffield import FieldCtx

TABLE_LIMIT = 6_000_000  # total number of monic polys a PolyTable may cover


# ----------------------------------------------------------------------------
# raw coefficient-list arithmetic (lists low -> high, [] is the zero poly)

def trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(ctx: FieldCtx, a, b) -> list[int]:
    n = max(len(a), len(b))
    out = [ctx.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
    return trim(out)


def psub(ctx: FieldCtx, a, b) -> list[int]:
    n = max(len(a), len(b))
    out = [ctx.sub(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(n)]
    return trim(out)


def pmul(ctx: FieldCtx, a, b) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    if ctx.is_prime_field:
        p = ctx.p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return trim([c % p for c in out])
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = ctx.add(out[i + j], ctx.mul(x, y))
    return trim(out)


def pdivmod(ctx: FieldCtx, a, b) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], trim(r)
    inv_lead = ctx.inv(b[-1])
    qt = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c:
            c = ctx.mul(c, inv_lead)
            qt[k - db] = c
            for i in range(db + 1):
                r[k - db + i] = ctx.sub(r[k - db + i], ctx.mul(c, b[i]))
    return trim(qt), trim(r[:db])


def pmod(ctx: FieldCtx, a, b) -> list[int]:
    return pdivmod(ctx, a, b)[1]


def make_monic(ctx: FieldCtx, a) -> list[int]:
    if not a:
        return []
    inv = ctx.inv(a[-1])
    return [ctx.mul(c, inv) for c in a]


def pgcd(ctx: FieldCtx, a, b) -> list[int]:
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, pmod(ctx, a, b)
    return make_monic(ctx, a)


def pderiv(ctx: FieldCtx, a) -> list[int]:
    return trim([ctx.mul(ctx.from_int(i), c) for i, c in enumerate(a)][1:])


def ppowmod(ctx: FieldCtx, a, k: int, m) -> list[int]:
    result = [1]
    a = pmod(ctx, a, m)
    while k:
        if k & 1:
            result = pmod(ctx, pmul(ctx, result, a), m)
        a = pmod(ctx, pmul(ctx, a, a), m)
        k >>= 1
    return result


def peval(ctx: FieldCtx, a, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class MonicPoly:
    ctx: FieldCtx
    coeffs: tuple[int, ...]  # low -> high, coeffs[-1] == 1

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1] != 1:
            raise ValueError(f"not a monic coefficient vector: {self.coeffs}")

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, ctx: FieldCtx) -> "MonicPoly":
        return cls(ctx, (1,))

    @classmethod
    def x_minus(cls, ctx: FieldCtx, a: int) -> "MonicPoly":
        return cls(ctx, (ctx.neg(a), 1))

    @classmethod
    def from_index(cls, ctx: FieldCtx, d: int, idx: int) -> "MonicPoly":
        cs = []
        for _ in range(d):
            idx, c = divmod(idx, ctx.q)
            cs.append(c)
        return cls(ctx, tuple(cs) + (1,))

    @classmethod
    def from_roots(cls, ctx: FieldCtx, roots) -> "MonicPoly":
        f = [1]
        for a in roots:
            f = pmul(ctx, f, [ctx.neg(a), 1])
        return cls(ctx, tuple(f))

    def index(self) -> int:
        idx = 0
        for c in reversed(self.coeffs[:-1]):
            idx = idx * self.ctx.q + c
        return idx

    def __mul__(self, other: "MonicPoly") -> "MonicPoly":
        return MonicPoly(self.ctx, tuple(pmul(self.ctx, self.coeffs, other.coeffs)))

    def __pow__(self, k: int) -> "MonicPoly":
        out = MonicPoly.one(self.ctx)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, x: int) -> int:
        return peval(self.ctx, self.coeffs, x)

    def __repr__(self):
        terms = []
        for i, c in reversed(list(enumerate(self.coeffs))):
            if c:
                mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(mono if c == 1 and i else f"{c}*{mono}" if i else f"{c}")
        return f"MonicPoly({' + '.join(terms)} over F_{self.ctx.q})"


def evaluate(f: MonicPoly, x: int) -> int:
    return peval(f.ctx, f.coeffs, x)


def is_squarefree(f: MonicPoly) -> bool:
    if f.deg <= 1:
        return True
    g = pgcd(f.ctx, f.coeffs, pderiv(f.ctx, f.coeffs))
    return len(g) == 1


def exact_div(f: MonicPoly, g: MonicPoly) -> MonicPoly:
    qt, r = pdivmod(f.ctx, f.coeffs, g.coeffs)
    if r:
        raise ValueError(f"{g} does not divide {f}")
    return MonicPoly(f.ctx, tuple(qt))


def valuation(f: MonicPoly, g: MonicPoly) -> int:
    v = 0
    cur = list(f.coeffs)
    while len(cur) > len(g.coeffs) - 1:
        qt, r = pdivmod(f.ctx, cur, g.coeffs)
        if r:
            break
        cur = qt
        v += 1
    return v


# ----------------------------------------------------------------------------
# sieve table

def _arith_tables(ctx: FieldCtx) -> tuple[np.ndarray, np.ndarray]:
    q = ctx.q
    if ctx.is_prime_field:
        a = np.arange(q, dtype=np.int64)
        return (a[:, None] + a[None, :]) % q, (a[:, None] * a[None, :]) % q
    add = np.array([[ctx.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    mul = np.array([[ctx.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int64)
    return add, mul


class PolyTable:
    """Smallest-irreducible-factor table for all monic polys of degree <= dmax.

    Polynomials are addressed by ``(d, idx)``; a *code* is the flat id
    ``offset[d] + idx``.  ``spf[d][idx]`` is the code of the smallest
    irreducible factor (ordered by code), ``cof[d][idx]`` the index of the
    cofactor in degree ``d - deg(spf)``.
    """

    def __init__(self, ctx: FieldCtx, dmax: int):
        q = ctx.q
        total = sum(q ** d for d in range(dmax + 1))
        if total > TABLE_LIMIT or q * q > 1 << 22:
            raise MemoryError(f"polynomial table for q={q}, dmax={dmax} too large ({total})")
        self.ctx = ctx
        self.q = q
        self.dmax = dmax
        self.add_tab, self.mul_tab = _arith_tables(ctx)
        self.offset = [0]
        for d in range(dmax + 1):
            self.offset.append(self.offset[-1] + q ** d)
        self.spf: list[np.ndarray] = []
        self.cof: list[np.ndarray] = []
        self.sqf: list[np.ndarray] = []
        self.irr: list[np.ndarray] = []  # sorted irreducible indices per degree
        for d in range(dmax + 1):
            self._build_degree(d)

    # -- helpers
    def coeff_matrix(self, d: int, idx=None) -> np.ndarray:
        """Rows of coefficients (low -> high, with the leading 1) for degree d."""
        if idx is None:
            idx = np.arange(self.q ** d, dtype=np.int64)
        idx = np.asarray(idx, dtype=np.int64)
        out = np.empty((idx.size, d + 1), dtype=np.int64)
        cur = idx.copy()
        for k in range(d):
            out[:, k] = cur % self.q
            cur //= self.q
        out[:, d] = 1
        return out

    def code(self, d: int, idx: int) -> int:
        return self.offset[d] + int(idx)

    def decode(self, code: int) -> tuple[int, int]:
        d = int(np.searchsorted(self.offset, code, side="right")) - 1
        return d, int(code) - self.offset[d]

    def _build_degree(self, d: int):
        q = self.q
        n = q ** d
        spf = np.full(n, -1, dtype=np.int64)
        cof = np.zeros(n, dtype=np.int64)
        powers = q ** np.arange(d, dtype=np.int64)
        chunk = 1 << 16
        for i in range(1, d // 2 + 1):
            P_idx = self.irr[i]
            if P_idx.size == 0:
                continue
            P = self.coeff_matrix(i, P_idx)
            P_codes = self.offset[i] + P_idx
            n_g = q ** (d - i)
            for start in range(0, n_g, chunk):
                g_idx = np.arange(start, min(n_g, start + chunk), dtype=np.int64)
                Gm = self.coeff_matrix(d - i, g_idx)
                prod = np.zeros((P.shape[0], g_idx.size, d + 1), dtype=np.int64)
                for a in range(i + 1):
                    term = self.mul_tab[P[:, a][:, None, None], Gm[None, :, :]]
                    seg = prod[:, :, a:a + d - i + 1]
                    prod[:, :, a:a + d - i + 1] = self.add_tab[seg, term]
                enc = prod[:, :, :d] @ powers
                codes = np.broadcast_to(P_codes[:, None], enc.shape)
                gs = np.broadcast_to(g_idx[None, :], enc.shape)
                enc, codes, gs = enc.ravel(), codes.ravel(), gs.ravel()
                # keep the smallest factor code per target; a smaller code
                # of the same degree may turn up in a later chunk
                cur = spf[enc]
                keep = (cur == -1) | (codes < cur)
                if not keep.any():
                    continue
                enc, codes, gs = enc[keep], codes[keep], gs[keep]
                order = np.lexsort((codes, enc))
                enc, codes, gs = enc[order], codes[order], gs[order]
                first = np.ones(enc.size, dtype=bool)
                first[1:] = enc[1:] != enc[:-1]
                spf[enc[first]] = codes[first]
                cof[enc[first]] = gs[first]
        irr_mask = spf == -1
        if d == 0:
            irr_mask[:] = False
            spf[:] = -1
        irr_idx = np.nonzero(irr_mask)[0]
        spf[irr_idx] = self.offset[d] + irr_idx
        cof[irr_idx] = 0
        sqf = np.ones(n, dtype=bool)
        if d >= 2:
            red = np.nonzero(~irr_mask)[0]
            for i in range(1, d // 2 + 1):
                lo, hi = self.offset[i], self.offset[i + 1]
                sel = red[(spf[red] >= lo) & (spf[red] < hi)]
                if sel.size == 0:
                    continue
                c = cof[sel]
                ok = self.sqf[d - i][c] & (self.spf[d - i][c] != spf[sel])
                sqf[sel] = ok
        self.spf.append(spf)
        self.cof.append(cof)
        self.sqf.append(sqf)
        self.irr.append(irr_idx)

    # -- queries
    def factor_codes(self, d: int, idx: int) -> list[int]:
        """Irreducible factor codes with multiplicity, nondecreasing."""
        out = []
        while d > 0:
            c = int(self.spf[d][idx])
            out.append(c)
            dd, _ = self.decode(c)
            idx = int(self.cof[d][idx])
            d -= dd
        return out

    def poly(self, code: int) -> MonicPoly:
        d, idx = self.decode(code)
        return MonicPoly.from_index(self.ctx, d, idx)

    def values(self, d: int, x: int, idx=None) -> np.ndarray:
        """f(x) for all monic f of degree d (or the given indices)."""
        C = self.coeff_matrix(d, idx)
        v = np.ones(C.shape[0], dtype=np.int64)
        for k in range(d - 1, -1, -1):
            v = self.add_tab[self.mul_tab[v, x], C[:, k]]
        return v

    def multiply(self, d1: int, a, d2: int, b) -> np.ndarray:
        """Indices (degree d1 + d2) of the rowwise products a[i] * b[i]."""
        A = self.coeff_matrix(d1, a)
        B = self.coeff_matrix(d2, b)
        d = d1 + d2
        prod = np.zeros((A.shape[0], d + 1), dtype=np.int64)
        for i in range(d1 + 1):
            term = self.mul_tab[A[:, i][:, None], B]
            prod[:, i:i + d2 + 1] = self.add_tab[prod[:, i:i + d2 + 1], term]
        return prod[:, :d] @ (self.q ** np.arange(d, dtype=np.int64))

    def deriv_values(self, d: int, x: int, idx=None) -> np.ndarray:
        C = self.coeff_matrix(d, idx)
        v = np.zeros(C.shape[0], dtype=np.int64)
        p = self.ctx.p
        for k in range(d, 0, -1):
            coef = self.mul_tab[k % p, C[:, k]]
            v = self.add_tab[self.mul_tab[v, x], coef]
        return v


@lru_cache(maxsize=32)
def _table(ctx: FieldCtx, dmax: int) -> PolyTable:
    return PolyTable(ctx, dmax)


_table_reach: dict[FieldCtx, int] = {}


def poly_table(ctx: FieldCtx, dmax: int) -> PolyTable:
    """Shared table covering at least degree dmax (grown on demand)."""
    have = _table_reach.get(ctx, -1)
    if have >= dmax:
        return _table(ctx, have)
    t = _table(ctx, dmax)
    _table_reach[ctx] = dmax
    return t


def table_affordable(ctx: FieldCtx, dmax: int) -> bool:
    return sum(ctx.q ** d for d in range(dmax + 1)) <= TABLE_LIMIT and ctx.q <= 2048


# ----------------------------------------------------------------------------

def enumerate_monic(ctx: FieldCtx, d: int) -> Iterator[MonicPoly]:
    for cs in itertools.product(range(ctx.q), repeat=d):
        yield MonicPoly(ctx, tuple(reversed(cs)) + (1,))


def enumerate_monic_squarefree(ctx: FieldCtx, d: int) -> Iterator[MonicPoly]:
    if d < 0:
        raise ValueError("degree must be >= 0")
    if table_affordable(ctx, d):
        t = poly_table(ctx, d)
        for idx in np.nonzero(t.sqf[d])[0]:
            yield MonicPoly.from_index(ctx, d, int(idx))
        return
    for f in enumerate_monic(ctx, d):
        if is_squarefree(f):
            yield f


def count_irreducible(q: int, d: int) -> int:
    """Number of monic irreducibles of degree d over F_q (necklace formula)."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += _mobius(e) * q ** (d // e)
    return total // d


def _mobius(n: int) -> int:
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    if m > 1:
        out = -out
    return out


def irreducibles_up_to(ctx: FieldCtx, dmax: int) -> Iterator[MonicPoly]:
    if dmax < 1:
        raise ValueError("dmax must be >= 1")
    t = poly_table(ctx, dmax)
    for d in range(1, dmax + 1):
        for idx in t.irr[d]:
            yield MonicPoly.from_index(ctx, d, int(idx))


def is_power_free(f: MonicPoly, r: int) -> bool:
    if r < 2:
        raise ValueError("power-free bound must be >= 2")
    return all(m < r for _, m in factorize(f)) if f.deg >= 1 else True


# ----------------------------------------------------------------------------
# factorization

def factorize(f: MonicPoly) -> list[tuple[MonicPoly, int]]:
    """Irreducible factorization as a sorted list of (factor, multiplicity)."""
    ctx = f.ctx
    if f.deg < 1:
        return []
    reach = _table_reach.get(ctx, -1)
    if f.deg <= reach:
        t = poly_table(ctx, reach)
        codes = t.factor_codes(f.deg, f.index())
        out: dict[int, int] = {}
        for c in codes:
            out[c] = out.get(c, 0) + 1
        return [(t.poly(c), m) for c, m in sorted(out.items())]
    if f.deg <= 12 and table_affordable(ctx, f.deg // 2):
        return factorize_trial(f)
    return factorize_ddf(f)


def factorize_trial(f: MonicPoly) -> list[tuple[MonicPoly, int]]:
    ctx = f.ctx
    cur = list(f.coeffs)
    out = []
    if len(cur) - 1 >= 2:
        t = poly_table(ctx, max(1, (len(cur) - 1) // 2))
        for d in range(1, (len(cur) - 1) // 2 + 1):
            if 2 * d > len(cur) - 1:
                break
            for idx in t.irr[d]:
                P = MonicPoly.from_index(ctx, d, int(idx))
                m = 0
                while len(cur) - 1 >= d:
                    qt, r = pdivmod(ctx, cur, P.coeffs)
                    if r:
                        break
                    cur, m = qt, m + 1
                if m:
                    out.append((P, m))
                if 2 * d > len(cur) - 1:
                    break
    if len(cur) > 1:
        rest = MonicPoly(ctx, tuple(cur))
        for i, (P, m) in enumerate(out):
            if P == rest:
                out[i] = (P, m + 1)
                break
        else:
            out.append((rest, 1))
    return sorted(out, key=lambda pm: (pm[0].deg, pm[0].index()))


def _squarefree_decomposition(ctx: FieldCtx, f: list[int]) -> list[tuple[list[int], int]]:
    # Yun-style decomposition valid in characteristic p
    out = []
    p = ctx.p

    def rec(f, mult):
        if len(f) <= 1:
            return
        df = pderiv(ctx, f)
        if not df:
            # f = g(x^p): take the p-th root coefficientwise
            root = [ctx.pow(c, ctx.q // p) for c in f[::p]]
            rec(root, mult * p)
            return
        c = pgcd(ctx, f, df)
        w = pdivmod(ctx, f, c)[0]
        i = 1
        while len(w) > 1:
            y = pgcd(ctx, w, c)
            z = pdivmod(ctx, w, y)[0]
            if len(z) > 1:
                out.append((z, i * mult))
            i += 1
            w = y
            c = pdivmod(ctx, c, y)[0]
        if len(c) > 1:
            # what is left of c is a p-th power
            root = [ctx.pow(cc, ctx.q // p) for cc in c[::p]]
            rec(root, mult * p)
    rec(make_monic(ctx, f), 1)
    return out


def _ddf(ctx: FieldCtx, f: list[int]) -> list[tuple[list[int], int]]:
    out = []
    q = ctx.q
    h = [0, 1]
    d = 0
    cur = f
    while len(cur) - 1 >= 2 * (d + 1):
        d += 1
        h = ppowmod(ctx, h, q, cur)
        g = pgcd(ctx, cur, psub(ctx, h, [0, 1]))
        if len(g) > 1:
            out.append((g, d))
            cur = pdivmod(ctx, cur, g)[0]
            h = pmod(ctx, h, cur)
    if len(cur) > 1:
        out.append((cur, len(cur) - 1))
    return out


def _edf(ctx: FieldCtx, f: list[int], d: int, rng: random.Random) -> list[list[int]]:
    n = len(f) - 1
    if n == d:
        return [f]
    q = ctx.q
    while True:
        a = trim([rng.randrange(q) for _ in range(n)])
        if len(a) <= 1:
            continue
        if q % 2:
            b = psub(ctx, ppowmod(ctx, a, (q ** d - 1) // 2, f), [1])
        else:
            # trace map to F_2
            b, t = list(a), list(a)
            for _ in range(ctx.e * d - 1):
                t = pmod(ctx, pmul(ctx, t, t), f)
                b = padd(ctx, b, t)
        g = pgcd(ctx, f, b)
        if 1 < len(g) < len(f):
            h = pdivmod(ctx, f, g)[0]
            return _edf(ctx, g, d, rng) + _edf(ctx, make_monic(ctx, h), d, rng)


def factorize_ddf(f: MonicPoly) -> list[tuple[MonicPoly, int]]:
    """Squarefree decomposition + distinct-degree + equal-degree splitting.

    The equal-degree step is randomized with a RNG seeded from f, so the
    result (and its running time) is reproducible.
    """
    ctx = f.ctx
    rng = random.Random(hash((ctx.p, ctx.e, f.coeffs)) & 0xFFFFFFFF)
    out: dict[tuple[int, ...], int] = {}
    for part, mult in _squarefree_decomposition(ctx, list(f.coeffs)):
        for g, d in _ddf(ctx, part):
            for P in _edf(ctx, make_monic(ctx, g), d, rng):
                key = tuple(make_monic(ctx, P))
                out[key] = out.get(key, 0) + mult
    res = [(MonicPoly(ctx, k), m) for k, m in out.items()]
    return sorted(res, key=lambda pm: (pm[0].deg, pm[0].index()))


def recompose(ctx: FieldCtx, factors) -> MonicPoly:
    out = MonicPoly.one(ctx)
    for P, m in factors:
        out = out * P ** m
    return out
