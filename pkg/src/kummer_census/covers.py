"""Kummer covers of the projective line.

A cover is a tuple (F_1, ..., F_n) of monic r_j-power-free polynomials plus
leading-coefficient classes c_j, standing for the function field
K(root_{r_1}(c_1 F_1), ..., root_{r_n}(c_n F_n)) over K = F_q(x).
Class exponents a_j encode c_j = generator ** a_j.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

from .abgroup import GroupSpec, Subgroup, element_order
from .errors import VerificationError
from .ffield import FieldCtx, embedding, make_field
from .polyring import MonicPoly, factorize


@dataclass(frozen=True)
class StrataDecomposition:
    group: GroupSpec
    strata: dict  # alpha -> MonicPoly, only nontrivial strata stored

    def poly(self, alpha) -> MonicPoly | None:
        return self.strata.get(tuple(alpha))

    def degrees(self) -> tuple[int, ...]:
        """d(alpha) aligned with ``group.nonzero()``."""
        return tuple(self.strata[a].deg if a in self.strata else 0 for a in self.group.nonzero())

    def support(self) -> list[tuple]:
        return [a for a in self.group.nonzero() if a in self.strata]

    def recompose(self, ctx: FieldCtx) -> tuple[MonicPoly, ...]:
        out = []
        for j in range(self.group.n):
            F = MonicPoly.one(ctx)
            for a, f in self.strata.items():
                if a[j]:
                    F = F * f ** a[j]
            out.append(F)
        return tuple(out)


@dataclass(frozen=True, eq=False)
class KummerCover:
    group: GroupSpec
    polys: tuple[MonicPoly, ...]
    lead_classes: tuple[int, ...] | None = None
    factorizations: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        G = self.group
        if G.is_trivial():
            raise ValueError("covers need a nontrivial group")
        if len(self.polys) != G.n:
            raise ValueError(f"expected {G.n} polynomials, got {len(self.polys)}")
        ctx = self.polys[0].ctx
        if (ctx.q - 1) % G.exponent:
            raise ValueError(f"q = {ctx.q} is not 1 mod {G.exponent}")
        if self.lead_classes is None:
            object.__setattr__(self, "lead_classes", (0,) * G.n)
        else:
            object.__setattr__(self, "lead_classes",
                               tuple(int(a) % r for a, r in zip(self.lead_classes, G.invariant_factors)))
        if self.factorizations is None:
            object.__setattr__(self, "factorizations",
                               tuple(tuple(factorize(F)) if F.deg else () for F in self.polys))
        for (F, facs, r) in zip(self.polys, self.factorizations, G.invariant_factors):
            if any(m >= r for _, m in facs):
                raise ValueError(f"{F} is not {r}-th power free")

    @property
    def ctx(self) -> FieldCtx:
        return self.polys[0].ctx

    def __eq__(self, other):
        return (isinstance(other, KummerCover) and self.group == other.group
                and self.polys == other.polys and self.lead_classes == other.lead_classes)

    def __hash__(self):
        return hash((self.group, self.polys, self.lead_classes))

    @classmethod
    def from_strata(cls, G: GroupSpec, ctx: FieldCtx, strata: dict, lead_classes=None) -> "KummerCover":
        dec = StrataDecomposition(G, {tuple(a): f for a, f in strata.items() if f.deg > 0})
        return cls(G, dec.recompose(ctx), lead_classes)

    def to_json(self) -> str:
        ctx = self.ctx
        return json.dumps({
            "q": ctx.q, "p": ctx.p, "e": ctx.e,
            "invariant_factors": list(self.group.invariant_factors),
            "polys": [list(F.coeffs) for F in self.polys],
            "lead_classes": list(self.lead_classes),
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "KummerCover":
        d = json.loads(text)
        ctx = make_field(d["p"], d["e"])
        return cls(GroupSpec(tuple(d["invariant_factors"])),
                   tuple(MonicPoly(ctx, tuple(c)) for c in d["polys"]),
                   tuple(d["lead_classes"]))

    # -- structure
    @cached_property
    def ramification(self) -> dict:
        """Irreducible P -> valuation vector (v_P(F_1), ..., v_P(F_n))."""
        out: dict[MonicPoly, list[int]] = {}
        for j, facs in enumerate(self.factorizations):
            for P, m in facs:
                out.setdefault(P, [0] * self.group.n)[j] = m
        return {P: tuple(v) for P, v in out.items()}

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(F.deg for F in self.polys)

    def infinity_vector(self) -> tuple[int, ...]:
        return self.group.neg(self.group.reduce(self.degrees))


def decompose(c: KummerCover) -> StrataDecomposition:
    strata: dict[tuple, MonicPoly] = {}
    for P, v in c.ramification.items():
        strata[v] = strata[v] * P if v in strata else P
    return StrataDecomposition(c.group, strata)


def galois_subgroup(c: KummerCover) -> Subgroup:
    support = set(c.ramification.values())
    if not support:
        raise ValueError("all F_j are 1: the cover is trivial")
    return Subgroup.generated_by(c.group, sorted(support))


def _hurwitz_sum(c: KummerCover, order: int) -> int:
    total = 0
    G = c.group
    for P, v in c.ramification.items():
        total += (order - order // element_order(G, v)) * P.deg
    total += order - order // element_order(G, c.infinity_vector())
    return total


def virtual_genus(c: KummerCover) -> Fraction:
    """Genus read off the G-normalized relation 2g + 2|G| - 2 = sum c(a) d(a) + c(d)."""
    n = c.group.order
    return Fraction(_hurwitz_sum(c, n) - 2 * n + 2, 2)


def true_genus(c: KummerCover) -> int:
    h = galois_subgroup(c).order
    two_g = _hurwitz_sum(c, h) - 2 * h + 2
    if two_g % 2 or two_g < 0:
        raise VerificationError(f"non-integral genus {two_g}/2 for {c}")
    return two_g // 2


# ----------------------------------------------------------------------------
# local splitting

@lru_cache(maxsize=None)
def _valuation_kernel(G: GroupSpec, v: tuple) -> tuple:
    rn = G.exponent
    return tuple(m for m in G.elements() if G.dot(m, v) % rn == 0)


def local_fiber(G: GroupSpec, order: int, v, units) -> int:
    """Degree-1 places above a point with valuation vector v.

    ``units[j]`` is dlog(c_j * u_j(x0)) for the unit parts u_j at the point
    (any integer congruent mod r_j works).  ``order`` is |H| for the Galois
    subgroup H of the cover.
    """
    v = G.reduce(v)
    rn = G.exponent
    for m in _valuation_kernel(G, v):
        if G.dot(m, units) % rn:
            return 0
    return order // element_order(G, v)


def _deflate(big: FieldCtx, coeffs: list[int], x0: int) -> tuple[list[int], int]:
    # synthetic division by (x - x0): returns quotient and remainder
    out = [0] * (len(coeffs) - 1)
    acc = 0
    for i in range(len(coeffs) - 1, 0, -1):
        acc = big.add(big.mul(acc, x0), coeffs[i])
        out[i - 1] = acc
    rem = big.add(big.mul(acc, x0), coeffs[0])
    return out, rem


def _fiber_finite(c: KummerCover, big: FieldCtx, lifted, lead, order: int, x0: int) -> int:
    G = c.group
    v = []
    units = []
    for j, coeffs in enumerate(lifted):
        k = 0
        cur = coeffs
        while len(cur) > 1:
            qt, rem = _deflate(big, cur, x0)
            if rem:
                break
            cur = qt
            k += 1
        val = cur[0] if len(cur) == 1 else _horner(big, cur, x0)
        v.append(k)
        units.append(big.dlog(big.mul(lead[j], val)))
    return local_fiber(G, order, tuple(v), tuple(units))


def _horner(big: FieldCtx, coeffs, x):
    acc = 0
    for a in reversed(coeffs):
        acc = big.add(big.mul(acc, x), a)
    return acc


def _lift(c: KummerCover, m: int):
    small = c.ctx
    big = small if m == 1 else make_field(small.p, small.e * m, cap=max(1 << 20, small.q ** m))
    emb = embedding(small, big) if m > 1 else list(range(small.q))
    lifted = [[emb[a] for a in F.coeffs] for F in c.polys]
    lead = [emb[small.exp(a)] for a in c.lead_classes]
    return big, lifted, lead


def fiber_count(c: KummerCover, x0, m: int = 1) -> int:
    """Degree-1 places above x0 in P^1(F_{q^m}); x0 is a field element or None for infinity."""
    big, lifted, lead = _lift(c, m)
    order = galois_subgroup(c).order if c.ramification else 1
    if x0 is None:
        return local_fiber(c.group, order, c.infinity_vector(),
                           tuple(big.dlog(a) for a in lead))
    return _fiber_finite(c, big, lifted, lead, order, x0)


def point_count(c: KummerCover, m: int = 1) -> int:
    big, lifted, lead = _lift(c, m)
    order = galois_subgroup(c).order if c.ramification else 1
    total = local_fiber(c.group, order, c.infinity_vector(), tuple(big.dlog(a) for a in lead))
    for x0 in big.elements():
        total += _fiber_finite(c, big, lifted, lead, order, x0)
    return total


def zeta_numerator(c: KummerCover) -> list[int]:
    """Coefficients a_0..a_{2g} of the L-polynomial, checked for integrality
    and the functional equation."""
    q = c.ctx.q
    g = true_genus(c) if c.ramification else 0
    if g == 0:
        for m in (1, 2):
            n = point_count(c, m)
            if n != q ** m + 1:
                raise VerificationError(f"genus 0 cover with {n} points over F_{q}^{m}")
        return [1]
    S = [None] + [q ** m + 1 - point_count(c, m) for m in range(1, 2 * g + 1)]
    a = [Fraction(1)]
    for k in range(1, 2 * g + 1):
        a.append(-sum(S[i] * a[k - i] for i in range(1, k + 1)) / k)
    if any(x.denominator != 1 for x in a):
        raise VerificationError(f"non-integral L-polynomial {a}")
    coeffs = [int(x) for x in a]
    for k in range(g + 1):
        if coeffs[2 * g - k] != q ** (g - k) * coeffs[k]:
            raise VerificationError(f"functional equation fails at k={k}: {coeffs}")
    return coeffs


def fiber_values(G: GroupSpec) -> set[int]:
    return {0} | {G.order // s for s in range(1, G.exponent + 1) if G.exponent % s == 0}

