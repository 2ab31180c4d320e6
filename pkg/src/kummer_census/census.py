"""Counting covers: strata enumeration, Mobius inversion over subgroups, and
brute-force enumeration of power-free tuples.

Strata vectors are tuples aligned with ``G.nonzero()``.  Tuples of strata
polynomials are enumerated in bulk with numpy: pairwise-coprime squarefree
tuples are exactly those whose product is squarefree, which the polynomial
table answers by lookup.
"""
from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .abgroup import GroupSpec, Subgroup, delsarte_mu, subgroups, weight
from .covers import KummerCover, galois_subgroup, local_fiber, true_genus
from .errors import BudgetExceeded, ConfigError
from .ffield import FieldCtx
from .polyring import poly_table

DEFAULT_BUDGET = 10 ** 8
CHUNK = 1 << 15

StrataVector = tuple


@dataclass(frozen=True)
class CensusConstraint:
    """Degree classes k (None = unconstrained) and character values at points.

    ``E[i][j]`` is the exponent e with chi_{r_j}(F_j(x_i)) = xi_{r_j}^e.
    """
    k: tuple | None = None
    points: tuple = ()
    E: tuple = ()

    def normalized(self, G: GroupSpec, ctx: FieldCtx) -> "CensusConstraint":
        pts = tuple(int(x) for x in self.points)
        if len(set(pts)) != len(pts):
            raise ConfigError(f"constraint points must be distinct: {pts}")
        if any(not 0 <= x < ctx.q for x in pts):
            raise ConfigError(f"constraint points must lie in F_{ctx.q}")
        if len(self.E) != len(pts):
            raise ConfigError("E needs one row per constraint point")
        E = []
        for row in self.E:
            if len(row) != G.n:
                raise ConfigError(f"E rows need {G.n} entries")
            E.append(G.reduce(row))
        k = None if self.k is None else G.reduce(self.k)
        if k is not None and len(k) != G.n:
            raise ConfigError(f"k needs {G.n} entries")
        return CensusConstraint(k, pts, tuple(E))

    @property
    def ell(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        return {"k": None if self.k is None else list(self.k),
                "points": list(self.points), "E": [list(r) for r in self.E]}


class Budget:
    def __init__(self, limit: int = DEFAULT_BUDGET):
        self.limit = limit
        self.used = 0

    def spend(self, n: int):
        self.used += int(n)
        if self.used > self.limit:
            raise BudgetExceeded(f"evaluation budget {self.limit} exceeded")


def default_weights(G: GroupSpec) -> tuple[int, ...]:
    return tuple(weight(G, a) for a in G.nonzero())


def _check_field(G: GroupSpec, ctx: FieldCtx):
    if (ctx.q - 1) % G.exponent:
        raise ConfigError(f"q = {ctx.q} is not 1 mod exp(G) = {G.exponent}")


def degree_vector(G: GroupSpec, sv) -> tuple[int, ...]:
    """d_j = sum alpha_j d(alpha) mod r_j."""
    R = G.nonzero()
    return G.reduce([sum(a[j] * d for a, d in zip(R, sv)) for j in range(G.n)])


# ----------------------------------------------------------------------------
# strata vectors

def strata_of_weight(G: GroupSpec, D: int, weights=None, support=None) -> list[StrataVector]:
    """All d(alpha) >= 0 with sum c(alpha) d(alpha) == D (alpha restricted to support)."""
    R = G.nonzero()
    w = tuple(weights) if weights is not None else default_weights(G)
    if any(c < 1 for c in w):
        raise ConfigError("weights c(alpha) must be positive integers")
    allowed = [i for i, a in enumerate(R) if support is None or a in support]
    out = []

    def rec(pos, rem, cur):
        if pos == len(allowed):
            if rem == 0:
                sv = [0] * len(R)
                for i, d in zip(allowed, cur):
                    sv[i] = d
                out.append(tuple(sv))
            return
        c = w[allowed[pos]]
        for d in range(rem // c + 1):
            rec(pos + 1, rem - c * d, cur + [d])

    if D >= 0:
        rec(0, D, [])
    return sorted(out)


def genus_strata(G: GroupSpec, g: int, k=None, weights=None, support=None) -> list[StrataVector]:
    """Strata vectors solving sum c(a) d(a) + c(d) = 2g + 2|G| - 2 (with d = k if given)."""
    if g < 0:
        raise ConfigError("genus must be nonnegative")
    target = 2 * g + 2 * G.order - 2
    out = []
    for cd in sorted({weight(G, v) for v in G.elements()}):
        for sv in strata_of_weight(G, target - cd, weights, support):
            d = degree_vector(G, sv)
            if weight(G, d) != cd:
                continue
            if k is not None and d != G.reduce(k):
                continue
            out.append(sv)
    return sorted(out)


# ----------------------------------------------------------------------------
# tuple enumeration

def _support(G: GroupSpec, sv) -> tuple[list[tuple], list[int]]:
    R = G.nonzero()
    alphas = [a for a, d in zip(R, sv) if d]
    degs = [d for d in sv if d]
    return alphas, degs


def _coprime_tuples(ctx: FieldCtx, degs: list[int]):
    """Yield index matrices (T x s): squarefree, pairwise coprime tuples."""
    if not degs:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    t = poly_table(ctx, sum(degs))
    sq = [np.nonzero(t.sqf[d])[0] for d in degs]

    def rec(level, idx, prod, pdeg):
        if level == len(degs):
            yield idx
            return
        d = degs[level]
        cand = sq[level]
        step = max(1, CHUNK // max(1, cand.size))
        for s in range(0, idx.shape[0], step):
            blk = idx[s:s + step]
            pblk = prod[s:s + step]
            rows = np.repeat(np.arange(blk.shape[0]), cand.size)
            cols = np.tile(cand, blk.shape[0])
            newprod = t.multiply(pdeg, pblk[rows], d, cols)
            ok = t.sqf[pdeg + d][newprod]
            if not ok.any():
                continue
            nidx = np.concatenate([blk[rows[ok]], cols[ok][:, None]], axis=1)
            yield from rec(level + 1, nidx, newprod[ok], pdeg + d)

    first = sq[0]
    for s in range(0, first.size, CHUNK):
        blk = first[s:s + CHUNK]
        yield from rec(1, blk[:, None], blk, degs[0])


def _log_array(ctx: FieldCtx) -> np.ndarray:
    return np.array([ctx.dlog(x) if x else -1 for x in range(ctx.q)], dtype=np.int64)


def count_stratum(G: GroupSpec, ctx: FieldCtx, sv, cc: CensusConstraint | None = None,
                  budget: Budget | None = None) -> int:
    """|F_{sv;k,E}| by exhaustive enumeration."""
    _check_field(G, ctx)
    cc = (cc or CensusConstraint()).normalized(G, ctx)
    if cc.k is not None and degree_vector(G, sv) != cc.k:
        return 0
    alphas, degs = _support(G, sv)
    if not cc.points:
        # no character conditions: count without touching values
        total = 0
        for idx in _coprime_tuples(ctx, degs):
            total += idx.shape[0]
            if budget:
                budget.spend(idx.shape[0])
        return total
    t = poly_table(ctx, max(sum(degs), 1))
    logs = _log_array(ctx)
    rs = np.array(G.invariant_factors, dtype=np.int64)
    total = 0
    for idx in _coprime_tuples(ctx, degs):
        ok = np.ones(idx.shape[0], dtype=bool)
        for x, row in zip(cc.points, cc.E):
            expo = np.zeros((idx.shape[0], G.n), dtype=np.int64)
            for s, (a, d) in enumerate(zip(alphas, degs)):
                lv = logs[t.values(d, x, idx[:, s])]
                ok &= lv >= 0
                expo += lv[:, None] * np.array(a, dtype=np.int64)[None, :]
            ok &= ((expo % rs) == np.array(row, dtype=np.int64)).all(axis=1)
        total += int(ok.sum())
        if budget:
            budget.spend(idx.shape[0] * max(1, cc.ell))
    return total


def count_F_D(G: GroupSpec, ctx: FieldCtx, D: int, cc: CensusConstraint | None = None,
              weights=None, support=None, budget: Budget | None = None) -> int:
    cc = (cc or CensusConstraint()).normalized(G, ctx)
    total = 0
    for sv in strata_of_weight(G, D, weights, support):
        total += count_stratum(G, ctx, sv, cc, budget)
    return total


def _run_tasks(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [fn(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, *zip(*tasks)))


def _stratum_task(G, ctx, sv, cc, limit):
    return count_stratum(G, ctx, sv, cc, Budget(limit))


def count_M(G: GroupSpec, ctx: FieldCtx, g: int, cc: CensusConstraint | None = None,
            support=None, workers: int = 1, budget: int = DEFAULT_BUDGET) -> int:
    """Monic curves with Galois group inside G (or inside ``support``) and G-normalized genus g."""
    _check_field(G, ctx)
    cc = (cc or CensusConstraint()).normalized(G, ctx)
    svs = genus_strata(G, g, cc.k, support=support)
    tasks = [(G, ctx, sv, cc, budget) for sv in svs]
    return sum(_run_tasks(_stratum_task, tasks, workers))


def subgroup_genus(G: GroupSpec, order_h: int, g: int) -> Fraction:
    return Fraction(g - 1, G.order // order_h) + 1


def count_H_star(G: GroupSpec, ctx: FieldCtx, g: int, cc: CensusConstraint | None = None,
                 path: str = "mobius", workers: int = 1, budget: int = DEFAULT_BUDGET) -> int:
    """|H*_{G,g}| (monic curves with Galois group exactly G and genus g).

    ``path`` selects the route: "mobius" inverts over subgroups using subset
    coordinates (works with constraints), "abstract" uses abstract subgroup
    types (unconstrained only), "direct" enumerates covers, "series" reads
    generating-series coefficients.
    """
    _check_field(G, ctx)
    if path == "direct":
        return count_H_star_direct(G, ctx, g, cc, budget=budget)
    if path == "series":
        from .genfun import count_H_star_series
        return count_H_star_series(G, ctx, g, cc)
    if path == "abstract":
        if cc is not None and (cc.k is not None or cc.points):
            raise ConfigError("the abstract-type path cannot carry constraints")
        total = 0
        for H in subgroups(G):
            mu = delsarte_mu(H.quotient_factors)
            if mu == 0:
                continue
            gh = subgroup_genus(G, H.order, g)
            if gh.denominator != 1 or gh < 0:
                continue
            if H.order == 1:
                total += mu * (1 if gh == 0 else 0)
                continue
            total += mu * count_M(H.to_group(), ctx, int(gh), workers=workers, budget=budget)
        return total
    if path != "mobius":
        raise ConfigError(f"unknown path {path!r}")
    total = 0
    for H in subgroups(G):
        mu = delsarte_mu(H.quotient_factors)
        if mu:
            total += mu * count_M(G, ctx, g, cc, support=H.elements, workers=workers, budget=budget)
    return total


def count_H(G: GroupSpec, ctx: FieldCtx, g: int, cc: CensusConstraint | None = None,
            path: str = "mobius", workers: int = 1, budget: int = DEFAULT_BUDGET) -> int:
    return G.order * count_H_star(G, ctx, g, cc, path, workers, budget)


# ----------------------------------------------------------------------------
# direct enumeration

def _power_free(ctx: FieldCtx, r: int, B: int):
    """Monic r-power-free F with radical degree <= B, as (F, factorization)."""
    t = poly_table(ctx, max(B, 1))
    out = []
    for d in range(B + 1):
        for ridx in np.nonzero(t.sqf[d])[0]:
            codes = t.factor_codes(d, int(ridx)) if d else []
            primes = [t.poly(c) for c in codes]
            for mults in itertools.product(range(1, r), repeat=len(primes)):
                F = None
                for P, m in zip(primes, mults):
                    F = P ** m if F is None else F * P ** m
                facs = tuple(sorted(zip(primes, mults), key=lambda pm: (pm[0].deg, pm[0].index())))
                out.append((F, facs, frozenset(codes), dict(zip(codes, [P.deg for P in primes]))))
    return out


def count_H_star_direct(G: GroupSpec, ctx: FieldCtx, g: int, cc: CensusConstraint | None = None,
                        budget: int = DEFAULT_BUDGET) -> int:
    """Brute force: enumerate power-free tuples, keep Gal = G and genus g."""
    _check_field(G, ctx)
    cc = (cc or CensusConstraint()).normalized(G, ctx)
    target = 2 * g + 2 * G.order - 2
    # every ramified prime of a cover with group G costs at least min c(alpha)
    B = target // min(default_weights(G)) if G.order > 1 else 0
    from .polyring import MonicPoly
    one = MonicPoly.one(ctx)
    per = [_power_free(ctx, r, B) for r in G.invariant_factors]
    bud = Budget(budget)
    count = 0
    for combo in itertools.product(*per):
        bud.spend(1)
        degs: dict = {}
        for _, _, _, dd in combo:
            degs.update(dd)
        if sum(degs.values()) > B or not degs:
            continue
        polys = tuple(F if F is not None else one for F, _, _, _ in combo)
        if cc.k is not None and G.reduce([F.deg for F in polys]) != cc.k:
            continue
        cover = KummerCover(G, polys, factorizations=tuple(f for _, f, _, _ in combo))
        if not galois_subgroup(cover).is_full() or true_genus(cover) != g:
            continue
        if cc.points and not _meets_characters(G, ctx, polys, cc):
            continue
        count += 1
    return count


def _meets_characters(G, ctx, polys, cc) -> bool:
    for x, row in zip(cc.points, cc.E):
        for F, e, r in zip(polys, row, G.invariant_factors):
            v = F(x)
            if v == 0 or ctx.dlog(v) % r != e:
                return False
    return True


# ----------------------------------------------------------------------------
# point-count histogram

def _fiber_lut(G: GroupSpec, alphas) -> np.ndarray:
    """lut[s + 1, u] = fiber over a point where stratum s vanishes (s = -1: none)
    and the unit exponent vector has G-index u."""
    els = G.elements()
    lut = np.zeros((len(alphas) + 1, len(els)), dtype=np.int64)
    for s, v in enumerate([G.zero()] + list(alphas)):
        for u, units in enumerate(els):
            lut[s, u] = local_fiber(G, G.order, v, units)
    return lut


def _histogram_stratum(G: GroupSpec, ctx: FieldCtx, sv, limit: int) -> dict:
    alphas, degs = _support(G, sv)
    t = poly_table(ctx, max(sum(degs), 1))
    logs = _log_array(ctx)
    lut = _fiber_lut(G, alphas)
    rs = np.array(G.invariant_factors, dtype=np.int64)
    mul = np.cumprod(np.concatenate([[1], rs[:-1]]))
    leads = np.array(G.elements(), dtype=np.int64)  # lead-class exponent vectors
    inf_v = G.neg(degree_vector(G, sv))
    inf_fib = np.array([local_fiber(G, G.order, inf_v, tuple(a)) for a in leads], dtype=np.int64)
    A = np.array(alphas, dtype=np.int64).reshape(len(alphas), G.n)
    hist: Counter = Counter()
    bud = Budget(limit)
    for idx in _coprime_tuples(ctx, degs):
        T = idx.shape[0]
        bud.spend(T * len(leads) * (ctx.q + 1))
        totals = np.tile(inf_fib, (T, 1))
        for x in range(ctx.q):
            units = np.zeros((T, G.n), dtype=np.int64)
            root = np.zeros(T, dtype=np.int64)
            for s, d in enumerate(degs):
                vals = t.values(d, x, idx[:, s])
                is_root = vals == 0
                lv = logs[vals]
                if is_root.any():
                    dv = t.deriv_values(d, x, idx[is_root, s])
                    lv[is_root] = logs[dv]
                    root[is_root] = s + 1
                units += lv[:, None] * A[s][None, :]
            for li, a in enumerate(leads):
                code = ((units + a) % rs) @ mul
                totals[:, li] += lut[root, code]
        for val, c in zip(*np.unique(totals, return_counts=True)):
            hist[int(val)] += int(c)
    return dict(hist)


def point_count_histogram(G: GroupSpec, ctx: FieldCtx, g: int, workers: int = 1,
                          budget: int = DEFAULT_BUDGET) -> dict[int, int]:
    """N -> number of curves in H_{G,g} (all lead classes) with N rational points."""
    _check_field(G, ctx)
    R = G.nonzero()
    svs = []
    for sv in genus_strata(G, g):
        sup = [a for a, d in zip(R, sv) if d]
        if sup and Subgroup.generated_by(G, sup).is_full():
            svs.append(sv)
    parts = _run_tasks(_histogram_stratum, [(G, ctx, sv, budget) for sv in svs], workers)
    hist: Counter = Counter()
    for part in parts:
        hist.update(part)
    return dict(sorted(hist.items()))

