"""Finite fields F_q with dense discrete-log tables.

Elements are plain ints in ``range(q)``.  For a prime field the int is the
residue; for ``q = p**e`` it encodes the coefficient vector of the element in
the basis ``1, t, ..., t**(e-1)`` (``t`` a root of the defining modulus) as
``sum(a_i * p**i)``.  Characters of order ``r | q - 1`` are carried as
exponents ``dlog(x) mod r``, never as complex numbers.
"""
from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

DEFAULT_CAP = 1 << 20


class CharExponent(NamedTuple):
    r: int
    value: int


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, e) with q == p**e, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = prime_factors(q)[0]
    e, m = 0, q
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, e


# -- raw arithmetic on coefficient lists over F_p, used only during construction

def _digits(a: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _undigits(ds, p: int) -> int:
    v = 0
    for c in reversed(ds):
        v = v * p + c
    return v


def _mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    # mod is monic of degree e, given low -> high including the leading 1
    e = len(mod) - 1
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for i in range(e):
                prod[k - e + i] = (prod[k - e + i] - c * mod[i]) % p
            prod[k] = 0
    return prod[:e]


def _has_factor_of_degree(f: list[int], d: int, p: int) -> bool:
    # brute force: does some monic g of degree d divide f?  (construction only)
    n = len(f) - 1
    for idx in range(p ** d):
        g = _digits(idx, p, d) + [1]
        r = list(f)
        for k in range(n, d - 1, -1):
            c = r[k]
            if c:
                for i in range(d + 1):
                    r[k - d + i] = (r[k - d + i] - c * g[i]) % p
        if not any(r[:d]):
            return True
    return False


def _smallest_irreducible(p: int, e: int) -> list[int]:
    for idx in range(p ** e):
        f = _digits(idx, p, e) + [1]
        if all(not _has_factor_of_degree(f, d, p) for d in range(1, e // 2 + 1)):
            return f
    raise AssertionError("no irreducible polynomial found")


class FieldCtx:
    """The field F_q, q = p**e, with a fixed primitive element.

    Immutable after construction.  Equality is by (p, e) since construction is
    deterministic.
    """

    def __init__(self, p: int, e: int, modulus: tuple[int, ...] | None,
                 generator: int, exp_table: list[int], log_table: list[int]):
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = modulus
        self.generator = generator
        self._exp = exp_table
        self._log = log_table

    def __repr__(self):
        return f"FieldCtx(p={self.p}, e={self.e})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    def __reduce__(self):
        return (make_field, (self.p, self.e, max(DEFAULT_CAP, self.q)))

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.e == 1:
            return (a + b) % p
        if p == 2:
            return a ^ b
        res, mul = 0, 1
        while a or b:
            a, x = divmod(a, p)
            b, y = divmod(b, p)
            res += ((x + y) % p) * mul
            mul *= p
        return res

    def neg(self, a: int) -> int:
        p = self.p
        if self.e == 1:
            return -a % p
        if p == 2:
            return a
        res, mul = 0, 1
        while a:
            a, x = divmod(a, p)
            res += (-x % p) * mul
            mul *= p
        return res

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return a * b % self.p
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self._exp[-self._log[a] % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if k == 0 else 0
        return self._exp[self._log[a] * k % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    def exp(self, k: int) -> int:
        """generator ** k"""
        return self._exp[k % (self.q - 1)]

    def dlog(self, x: int) -> int:
        if x == 0:
            raise ValueError("discrete log of 0")
        return self._log[x]

    def frobenius(self, x: int) -> int:
        return self.pow(x, self.p)

    def is_rth_power(self, x: int, r: int) -> bool:
        return x != 0 and self._log[x] % r == 0


def make_field(p: int, e: int = 1, cap: int = DEFAULT_CAP) -> FieldCtx:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be >= 1")
    if p ** e > cap:
        raise ValueError(f"field size {p}**{e} exceeds cap {cap}")
    return _make_field(p, e)


@lru_cache(maxsize=None)
def _make_field(p: int, e: int) -> FieldCtx:
    q = p ** e
    cofactors = [(q - 1) // ell for ell in prime_factors(q - 1)]
    if e == 1:
        mul = lambda a, b: a * b % p  # noqa: E731
        modulus = None
        candidates = range(1, q)
    else:
        mod = _smallest_irreducible(p, e)
        modulus = tuple(mod)

        def mul(a, b):
            return _undigits(_mulmod(_digits(a, p, e), _digits(b, p, e), mod, p), p)
        candidates = range(1, q)

    def power(a, k):
        r = 1
        while k:
            if k & 1:
                r = mul(r, a)
            a = mul(a, a)
            k >>= 1
        return r

    if q == 2:
        gen = 1
    else:
        gen = next(g for g in candidates
                   if all(power(g, c) != 1 for c in cofactors))
    exp_table = [0] * (q - 1)
    log_table = [0] * q
    x = 1
    for k in range(q - 1):
        exp_table[k] = x
        log_table[x] = k
        x = mul(x, gen)
    assert x == 1
    return FieldCtx(p, e, modulus, gen, exp_table, log_table)


def char_exponent(ctx: FieldCtx, r: int, x: int) -> CharExponent:
    """Exponent of chi_r(x) = xi_r ** (dlog(x) mod r)."""
    if (ctx.q - 1) % r:
        raise ValueError(f"character order {r} does not divide q - 1 = {ctx.q - 1}")
    if x == 0:
        raise ValueError("multiplicative characters are defined on units only")
    return CharExponent(r, ctx.dlog(x) % r)


def embedding(small: FieldCtx, big: FieldCtx) -> list[int]:
    """Images of the elements of ``small`` inside ``big`` (a field containing it).

    For a prime ``small`` this is the identity on residues.  Otherwise the
    smallest root of ``small``'s modulus in ``big`` fixes the embedding.
    """
    if small.p != big.p or big.e % small.e:
        raise ValueError(f"{small} does not embed in {big}")
    if small.e == 1:
        return list(range(small.q))
    return _embedding(small, big)


@lru_cache(maxsize=None)
def _embedding(small: FieldCtx, big: FieldCtx) -> list[int]:
    mod = small.modulus

    def ev(x):
        acc = 0
        for c in reversed(mod):
            acc = big.add(big.mul(acc, x), c)
        return acc
    root = next(x for x in big.elements() if ev(x) == 0)
    out = []
    for a in small.elements():
        ds = _digits(a, small.p, small.e)
        acc = 0
        for c in reversed(ds):
            acc = big.add(big.mul(acc, root), c)
        out.append(acc)
    return out
