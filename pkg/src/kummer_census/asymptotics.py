"""Closed-form constants for G = (Z/Q)^n and the i.i.d. point-count model."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConfigError
from .ffield import is_prime
from .polyring import count_irreducible

DEFAULT_CUTOFF = 14


def zeta_q(q: int, s: int) -> Fraction:
    """Zeta function of F_q[x]: 1 / (1 - q^(1-s))."""
    if s < 2:
        raise ConfigError("zeta_q needs s >= 2")
    return 1 / (1 - Fraction(1, q ** (s - 1)))


def L_constant(q: int, m: int, cutoff: int = DEFAULT_CUTOFF) -> tuple[float, float]:
    """prod_{j<=m} prod_P (1 - j/((|P|-1)(|P|+j))) over primes of degree <= cutoff.

    Returns (truncated value, bound on |true value - truncated value|).
    """
    if m < 0:
        raise ConfigError("m must be >= 0")
    if m == 0:
        return 1.0, 0.0
    log_v = 0.0
    for d in range(1, cutoff + 1):
        Pd = q ** d
        n = count_irreducible(q, d)
        for j in range(1, m + 1):
            log_v += n * math.log1p(-j / ((Pd - 1) * (Pd + j)))
    value = math.exp(log_v)
    # tail: -log(1 - y) <= y / (1 - y), pi_q(d) <= q^d / d and
    # sum_{d > c} 1/(q^d - 1) <= 1/((q^(c+1) - 1)(1 - 1/q))
    c = cutoff
    y_max = m / ((q ** (c + 1) - 1) * (q ** (c + 1) + 1))
    tail = sum(j for j in range(1, m + 1)) / (c + 1) / ((q ** (c + 1) - 1) * (1 - 1 / q)) / (1 - y_max)
    err = value * -math.expm1(-tail) + 1e-15 * (1 + abs(log_v))
    return value, err


@dataclass(frozen=True)
class LeadingConstant:
    """rational * L_m, with L_m evaluated numerically unless m = 0."""
    rational: Fraction
    L_index: int
    q: int
    cutoff: int = DEFAULT_CUTOFF

    @property
    def L(self) -> tuple[float, float]:
        return L_constant(self.q, self.L_index, self.cutoff)

    def value(self) -> float:
        return float(self.rational) * self.L[0]

    def exact(self) -> Fraction:
        if self.L_index:
            raise ValueError("constant involves L_m, which has no exact value")
        return self.rational

    def to_dict(self) -> dict:
        Lv, Le = self.L
        return {"rational": str(self.rational), "L_index": self.L_index,
                "L_value": Lv, "L_error": Le, "value": self.value()}


def _check_Q(Q: int, n: int, q: int):
    if not is_prime(Q):
        raise ConfigError(f"Q = {Q} must be prime")
    if n < 1:
        raise ConfigError("n must be >= 1")
    if (q - 1) % Q:
        raise ConfigError(f"q = {q} is not 1 mod Q = {Q}")
    if Q ** n < 2:
        raise ConfigError("group too small")


def leading_coeff_full(Q: int, n: int, q: int, cutoff: int = DEFAULT_CUTOFF) -> LeadingConstant:
    _check_Q(Q, n, q)
    N = Q ** n
    rat = Fraction(1, math.factorial(N - 2)) * Fraction(q + N - 1, q) / zeta_q(q, 2) ** (N - 1)
    return LeadingConstant(rat, N - 2, q, cutoff)


def leading_coeff_kE(Q: int, n: int, q: int, ell: int, cutoff: int = DEFAULT_CUTOFF) -> LeadingConstant:
    _check_Q(Q, n, q)
    if not 0 <= ell <= q:
        raise ConfigError(f"need 0 <= ell <= q, got {ell}")
    N = Q ** n
    rat = (Fraction((q - 1) ** n, N * math.factorial(N - 2)) / zeta_q(q, 2) ** (N - 1)
           * Fraction(q, N * (q + N - 1)) ** ell)
    return LeadingConstant(rat, N - 2, q, cutoff)


def conductor(Q: int, n: int, g: int) -> Fraction:
    N = Q ** n
    return Fraction(2 * g + 2 * N - 2, N - N // Q)


def main_term(Q: int, n: int, q: int, g: int, cutoff: int = DEFAULT_CUTOFF) -> float:
    """Leading monomial C * D^(Q^n - 2) * q^D; 0 when the parity condition fails."""
    D = conductor(Q, n, g)
    if D.denominator != 1:
        return 0.0
    D = int(D)
    C = leading_coeff_full(Q, n, q, cutoff)
    return C.value() * D ** (Q ** n - 2) * float(q) ** D


def main_term_exact(Q: int, n: int, q: int, g: int) -> Fraction:
    """Same as main_term, exact when no L factor is involved (Q^n = 2)."""
    D = conductor(Q, n, g)
    if D.denominator != 1:
        return Fraction(0)
    D = int(D)
    return leading_coeff_full(Q, n, q).exact() * D ** (Q ** n - 2) * q ** D


# ----------------------------------------------------------------------------
# point-count model

@dataclass(frozen=True)
class XiLaw:
    Q: int
    n: int
    q: int
    p_ramified: Fraction  # value Q^(n-1)
    p_split: Fraction     # value Q^n
    p_zero: Fraction

    def masses(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for v, p in ((0, self.p_zero), (self.Q ** (self.n - 1), self.p_ramified),
                     (self.Q ** self.n, self.p_split)):
            out[v] = out.get(v, Fraction(0)) + p
        return dict(sorted(out.items()))

    def mean(self) -> Fraction:
        return sum((v * p for v, p in self.masses().items()), Fraction(0))


def xi_law(Q: int, n: int, q: int) -> XiLaw:
    _check_Q(Q, n, q)
    N = Q ** n
    den = q + N - 1
    return XiLaw(Q, n, q,
                 Fraction(N - 1, Q ** (n - 1) * den),
                 Fraction(q, N * den),
                 Fraction((N - 1) * (q + N - Q), N * den))


SumLaw = dict  # M -> Fraction


def convolve(a: dict, b: dict) -> dict:
    out: dict = {}
    for x, p in a.items():
        for y, r in b.items():
            out[x + y] = out.get(x + y, Fraction(0)) + p * r
    return dict(sorted(out.items()))


def sum_law(Q: int, n: int, q: int) -> SumLaw:
    """Exact law of X_1 + ... + X_{q+1}."""
    step = xi_law(Q, n, q).masses()
    out = {0: Fraction(1)}
    for _ in range(q + 1):
        out = convolve(out, step)
    return out


def tv_distance(hist: dict, law: dict) -> Fraction:
    total = sum(hist.values())
    if total <= 0:
        raise ValueError("empty histogram")
    keys = set(hist) | set(law)
    return sum((abs(Fraction(hist.get(M, 0), total) - Fraction(law.get(M, 0))) for M in keys),
               Fraction(0)) / 2


def histogram_mean(hist: dict) -> Fraction:
    total = sum(hist.values())
    return Fraction(sum(M * c for M, c in hist.items()), total)
