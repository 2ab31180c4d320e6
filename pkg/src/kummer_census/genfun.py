"""Exact generating series for strata counts.

Coefficients live in Q(xi_r), r = exp(G), stored as residues modulo the r-th
cyclotomic polynomial (:class:`CycloNum`).  Euler products are accumulated in
the integral group ring Z[C_r] (plain ints, cheap) and only reduced at the
end; the reduction map Z[C_r] -> Q(xi_r) is a ring homomorphism so nothing is
lost.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .abgroup import GroupSpec, delsarte_mu, phi, subgroups, weight
from .census import CensusConstraint, default_weights
from .errors import ConfigError, VerificationError
from .ffield import FieldCtx
from .polyring import count_irreducible, poly_table

DEFAULT_DMAX = 24


# ----------------------------------------------------------------------------
# cyclotomic numbers

@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients (low -> high) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _divide_exact(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _divide_exact(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    out = [0] * (len(a) - len(b) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = a[i + len(b) - 1] // b[-1]
        out[i] = c
        for j, bj in enumerate(b):
            a[i + j] -= c * bj
    assert not any(a), "inexact cyclotomic division"
    return out


def _reduce(r: int, coeffs) -> tuple[Fraction, ...]:
    phi_r = cyclotomic_poly(r)
    deg = len(phi_r) - 1
    a = [Fraction(c) for c in coeffs]
    for i in range(len(a) - 1, deg - 1, -1):
        c = a[i]
        if c:
            for j in range(deg + 1):
                a[i - deg + j] -= c * phi_r[j]
    a = a[:deg] + [Fraction(0)] * max(0, deg - len(a))
    return tuple(a)


class CycloNum:
    """An element of Q(xi_r) in the power basis 1, xi, ..., xi^(phi(r)-1)."""

    __slots__ = ("r", "c")

    def __init__(self, r: int, coeffs):
        self.r = r
        self.c = _reduce(r, coeffs)

    @classmethod
    def rational(cls, r: int, x) -> "CycloNum":
        return cls(r, [Fraction(x)])

    @classmethod
    def root(cls, r: int, k: int) -> "CycloNum":
        v = [0] * r
        v[k % r] = 1
        return cls(r, v)

    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            if other.r != self.r:
                raise ValueError("mixing different cyclotomic fields")
            return other
        return CycloNum.rational(self.r, other)

    def __add__(self, other):
        o = self._coerce(other)
        return CycloNum(self.r, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.r, [-a for a in self.c])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        prod = [Fraction(0)] * (len(self.c) + len(o.c))
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    prod[i + j] += a * b
        return CycloNum(self.r, prod)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash((self.r, self.c))

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise VerificationError(f"{self} is not rational")
        return self.c[0] if self.c else Fraction(0)

    def __repr__(self):
        return f"CycloNum(r={self.r}, {[str(x) for x in self.c]})"


def from_group_ring(r: int, v) -> CycloNum:
    return CycloNum(r, v)


@dataclass(frozen=True)
class CycloSeries:
    r: int
    coeffs: tuple  # CycloNum per z-exponent 0..dmax

    @property
    def dmax(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, D: int) -> CycloNum:
        return self.coeffs[D]

    def __add__(self, other: "CycloSeries") -> "CycloSeries":
        n = min(len(self.coeffs), len(other.coeffs))
        return CycloSeries(self.r, tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def __mul__(self, other: "CycloSeries") -> "CycloSeries":
        n = min(len(self.coeffs), len(other.coeffs))
        out = [CycloNum.rational(self.r, 0) for _ in range(n)]
        for i in range(n):
            for j in range(n - i):
                out[i + j] = out[i + j] + self.coeffs[i] * other.coeffs[j]
        return CycloSeries(self.r, tuple(out))

    def scale(self, x) -> "CycloSeries":
        return CycloSeries(self.r, tuple(c * x for c in self.coeffs))

    def integers(self) -> list[int]:
        """Coefficients as nonnegative integers; raises if any is not one."""
        out = []
        for D, c in enumerate(self.coeffs):
            f = c.to_fraction()
            if f.denominator != 1 or f < 0:
                raise VerificationError(f"coefficient of z^{D} is {f}, not a count")
            out.append(int(f))
        return out


def coefficient(s: CycloSeries, D: int):
    if not 0 <= D <= s.dmax:
        raise IndexError(f"z^{D} outside the truncation 0..{s.dmax}")
    c = s[D]
    return c.to_fraction() if c.is_rational() else c


# ----------------------------------------------------------------------------
# group-ring series: list over z-degree of length-r int lists

def _gr_zero(r, dmax):
    return [[0] * r for _ in range(dmax + 1)]


def _gr_one(r, dmax):
    s = _gr_zero(r, dmax)
    s[0][0] = 1
    return s


def _gr_mul(a, b, r, dmax):
    out = _gr_zero(r, dmax)
    nz_b = [(j, row) for j, row in enumerate(b) if any(row)]
    for i, ra in enumerate(a):
        if not any(ra):
            continue
        for j, rb in nz_b:
            if i + j > dmax:
                break
            tgt = out[i + j]
            for x, ca in enumerate(ra):
                if ca:
                    for y, cb in enumerate(rb):
                        if cb:
                            tgt[(x + y) % r] += ca * cb
    return out


def _gr_mul_sparse(a, terms, r, dmax):
    """a * sum(coef * xi^ph * z^e) for terms (e, ph, coef)."""
    out = _gr_zero(r, dmax)
    for e, ph, coef in terms:
        for i in range(dmax + 1 - e):
            ra = a[i]
            if any(ra):
                tgt = out[i + e]
                for x, ca in enumerate(ra):
                    if ca:
                        tgt[(x + ph) % r] += coef * ca
    return out


def _binomial_power(terms, N: int, r: int, dmax: int):
    """(1 + u)^N truncated, u = sum of sparse terms with positive z-exponents."""
    result = _gr_one(r, dmax)
    if N == 0 or not terms:
        return result
    emin = min(e for e, _, _ in terms)
    power = _gr_one(r, dmax)
    for k in range(1, min(N, dmax // emin) + 1):
        power = _gr_mul_sparse(power, terms, r, dmax)
        ck = comb(N, k)
        for i in range(dmax + 1):
            row = power[i]
            if any(row):
                tgt = result[i]
                for x in range(r):
                    tgt[x] += ck * row[x]
    return result


# ----------------------------------------------------------------------------
# Euler products

@dataclass(frozen=True)
class TwistSpec:
    t: tuple
    nu: tuple = ()  # rows, one per constraint point; nu[i][j] mod r_j

    def normalized(self, G: GroupSpec) -> "TwistSpec":
        return TwistSpec(G.reduce(self.t), tuple(G.reduce(row) for row in self.nu))


def nu_action(G: GroupSpec, nu, alpha) -> tuple[int, ...]:
    """(nu alpha)_i = sum_j (r_n / r_j) nu_ij alpha_j mod r_n."""
    return tuple(G.dot(row, alpha) for row in nu)


@lru_cache(maxsize=64)
def _prime_classes(ctx: FieldCtx, points: tuple, rn: int, dmax: int) -> dict:
    """(d, rho) -> number of monic irreducibles P of degree d, coprime to h,
    with rho_i = dlog(P(x_i)) mod rn."""
    t = poly_table(ctx, max(dmax, 1))
    logs = np.array([ctx.dlog(x) if x else -1 for x in range(ctx.q)], dtype=np.int64)
    out = {}
    for d in range(1, dmax + 1):
        idx = t.irr[d]
        ok = np.ones(idx.size, dtype=bool)
        cols = []
        for x in points:
            lv = logs[t.values(d, x, idx)]
            ok &= lv >= 0
            cols.append(lv % rn)
        if cols:
            mat = np.stack(cols, axis=1)[ok]
            keys, counts = np.unique(mat, axis=0, return_counts=True)
            for key, c in zip(keys, counts):
                out[(d, tuple(int(v) for v in key))] = int(c)
        else:
            out[(d, ())] = int(ok.sum())
    return out


def _alphas(G: GroupSpec, weights, support):
    R = G.nonzero()
    w = tuple(weights) if weights is not None else default_weights(G)
    return [(a, c) for a, c in zip(R, w) if support is None or a in support]


def _factor_terms(G, alphas, ts: TwistSpec, d, rho):
    rn = G.exponent
    terms = {}
    for a, c in alphas:
        ph = (sum(x * y for x, y in zip(nu_action(G, ts.nu, a), rho)) + d * G.dot(ts.t, a)) % rn
        key = (c * d, ph)
        terms[key] = terms.get(key, 0) + 1
    return [(e, ph, k) for (e, ph), k in sorted(terms.items())]


@lru_cache(maxsize=512)
def _A_group_ring(G: GroupSpec, ctx: FieldCtx, points: tuple, ts: TwistSpec,
                  weights: tuple, dmax: int, support: frozenset | None):
    rn = G.exponent
    alphas = _alphas(G, weights, support)
    if not alphas:
        return tuple(tuple(row) for row in _gr_one(rn, dmax))
    cmin = min(c for _, c in alphas)
    pmax = dmax // cmin
    acc = _gr_one(rn, dmax)
    untwisted = not points or all(not any(row) for row in ts.nu)
    if untwisted:
        classes = {}
        for d in range(1, pmax + 1):
            n = count_irreducible(ctx.q, d) - (len(points) if d == 1 else 0)
            classes[(d, (0,) * len(points))] = n
    else:
        classes = _prime_classes(ctx, points, rn, pmax)
    for (d, rho), n in sorted(classes.items()):
        factor = _binomial_power(_factor_terms(G, alphas, ts, d, rho), n, rn, dmax)
        acc = _gr_mul(acc, factor, rn, dmax)
    return tuple(tuple(row) for row in acc)


def _check_inputs(G: GroupSpec, ctx: FieldCtx, dmax: int):
    if G.is_trivial():
        raise ConfigError("the set R of nonzero vectors is empty for the trivial group")
    if (ctx.q - 1) % G.exponent:
        raise ConfigError(f"q = {ctx.q} is not 1 mod {G.exponent}")
    if dmax < 1:
        raise ConfigError("Dmax must be >= 1")


def euler_product_A(G: GroupSpec, ctx: FieldCtx, cc: CensusConstraint | None, ts: TwistSpec,
                    weights=None, dmax: int = DEFAULT_DMAX, support=None) -> CycloSeries:
    _check_inputs(G, ctx, dmax)
    cc = (cc or CensusConstraint()).normalized(G, ctx)
    ts = ts.normalized(G)
    if len(ts.nu) != cc.ell:
        raise ConfigError("nu needs one row per constraint point")
    w = tuple(weights) if weights is not None else default_weights(G)
    sup = None if support is None else frozenset(support)
    gr = _A_group_ring(G, ctx, cc.points, ts, w, dmax, sup)
    return CycloSeries(G.exponent, tuple(CycloNum(G.exponent, row) for row in gr))


def euler_product_literal(G: GroupSpec, ctx: FieldCtx, cc: CensusConstraint | None, ts: TwistSpec,
                          weights=None, dmax: int = 8) -> CycloSeries:
    """The same product taken one prime at a time (slow oracle)."""
    _check_inputs(G, ctx, dmax)
    cc = (cc or CensusConstraint()).normalized(G, ctx)
    ts = ts.normalized(G)
    rn = G.exponent
    alphas = _alphas(G, weights, None)
    cmin = min(c for _, c in alphas)
    t = poly_table(ctx, max(dmax // cmin, 1))
    acc = _gr_one(rn, dmax)
    for d in range(1, dmax // cmin + 1):
        for idx in t.irr[d]:
            P = t.poly(t.code(d, int(idx)))
            vals = [P(x) for x in cc.points]
            if any(v == 0 for v in vals):
                continue
            rho = tuple(ctx.dlog(v) % rn for v in vals)
            factor = _gr_one(rn, dmax)
            for e, ph, k in _factor_terms(G, alphas, ts, d, rho):
                if e <= dmax:
                    factor[e][ph] += k
            acc = _gr_mul(acc, factor, rn, dmax)
    return CycloSeries(rn, tuple(CycloNum(rn, row) for row in acc))


def _nu_matrices(G: GroupSpec, ell: int):
    els = G.elements()
    if ell == 0:
        yield ()
        return
    for rows in itertools.product(els, repeat=ell):
        yield tuple(rows)


def series_F(G: GroupSpec, ctx: FieldCtx, cc: CensusConstraint | None = None, weights=None,
             dmax: int = DEFAULT_DMAX, support=None, check: bool = True) -> CycloSeries:
    """sum_D |F_{D;k,E}| z^D assembled from twisted Euler products.

    With ``cc.k`` None the degree classes are left unconstrained (the sum over
    all k).  ``support`` restricts the strata to a subgroup.
    """
    _check_inputs(G, ctx, dmax)
    cc = (cc or CensusConstraint()).normalized(G, ctx)
    w = tuple(weights) if weights is not None else default_weights(G)
    sup = None if support is None else frozenset(support)
    rn = G.exponent
    total = _gr_zero(rn, dmax)
    ts_list = G.elements() if cc.k is not None else [G.zero()]
    for t in ts_list:
        tk = G.dot(t, cc.k) if cc.k is not None else 0
        for nu in _nu_matrices(G, cc.ell):
            enu = sum(G.dot(row, e) for row, e in zip(nu, cc.E)) % rn
            shift = (-tk - enu) % rn
            A = _A_group_ring(G, ctx, cc.points, TwistSpec(t, nu), w, dmax, sup)
            for i in range(dmax + 1):
                row = A[i]
                tgt = total[i]
                for x in range(rn):
                    if row[x]:
                        tgt[(x + shift) % rn] += row[x]
    norm = Fraction(1, G.order ** (cc.ell + (1 if cc.k is not None else 0)))
    out = CycloSeries(rn, tuple(CycloNum(rn, [Fraction(v) * norm for v in row]) for row in total))
    if check:
        out.integers()
    return out


def indicator(G: GroupSpec, d, k) -> CycloNum:
    """(1/|G|) sum_t xi^{t.(d-k)}: 1 if d == k in G, else 0."""
    rn = G.exponent
    diff = G.reduce([a - b for a, b in zip(d, k)])
    v = [0] * rn
    for t in G.elements():
        v[G.dot(t, diff)] += 1
    return CycloNum(rn, [Fraction(x, G.order) for x in v])


# ----------------------------------------------------------------------------
# counts from series

def count_H_star_series(G: GroupSpec, ctx: FieldCtx, g: int, cc: CensusConstraint | None = None) -> int:
    """Mobius inversion with each |M| read from a series coefficient."""
    cc = (cc or CensusConstraint()).normalized(G, ctx)
    target = 2 * g + 2 * G.order - 2
    ks = [cc.k] if cc.k is not None else G.elements()
    dmax = max(1, target)
    total = 0
    for H in subgroups(G):
        mu = delsarte_mu(H.quotient_factors)
        if not mu:
            continue
        sub = 0
        for k in ks:
            D = target - weight(G, k)
            if D < 0:
                continue
            s = series_F(G, ctx, CensusConstraint(k, cc.points, cc.E), dmax=dmax, support=H.elements)
            sub += int(coefficient(s, D))
        total += mu * sub
    return total


def series_H_counts(G: GroupSpec, ctx: FieldCtx, genera, cc: CensusConstraint | None = None) -> dict:
    return {g: count_H_star_series(G, ctx, g, cc) for g in genera}


# ----------------------------------------------------------------------------
# pole combinatorics

def weight_levels(G: GroupSpec, weights=None) -> list[int]:
    w = tuple(weights) if weights is not None else default_weights(G)
    return sorted(set(w))


def pole_orders(G: GroupSpec, ts: TwistSpec, weights=None) -> dict[tuple[int, int], int]:
    """m[(a, i)] = #{alpha in R_nu : c(alpha) = c_i, t.alpha = a mod r_n}, i 1-based."""
    ts = ts.normalized(G)
    w = tuple(weights) if weights is not None else default_weights(G)
    levels = sorted(set(w))
    rn = G.exponent
    out = {(a, i): 0 for a in range(rn) for i in range(1, len(levels) + 1)}
    for alpha, c in zip(G.nonzero(), w):
        if any(nu_action(G, ts.nu, alpha)):
            continue
        out[(G.dot(ts.t, alpha), levels.index(c) + 1)] += 1
    return out


def predicted_growth(G: GroupSpec, q: int | None = None) -> list[tuple[Fraction, int]]:
    """[(1/c_i, phi_G(s_i) - 1)] over divisors 1 < s_i of exp(G), c_i = |G| - |G|/s_i."""
    out = []
    for s in range(2, G.exponent + 1):
        if G.exponent % s == 0:
            out.append((Fraction(1, G.order - G.order // s), phi(G, s) - 1))
    return out
