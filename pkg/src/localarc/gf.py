"""Arithmetic for finite fields GF(p^m) with integer-encoded elements.

An element is stored as a single integer in [0, q).  For a flat field the
encoding is the base-p digit expansion sum(a_i * p**i) of the coefficient
vector with respect to the monic modulus.  A tower field GF((p^2)^t) packs
its coefficients base p^2, each digit being the encoding of a base-field
element; unpacked to base p this coincides with the flat digit layout, so
addition is base-p digitwise in both presentations.

Moduli are found by scanning monic candidates in ascending order of their
integer encoding and keeping the first one that survives trial division by
every lower-degree monic polynomial.  Three engines cover the size range:
prime fields use native modular arithmetic, extension fields with at most
_TABLE_LIMIT elements use exp/log tables with Zech logarithms for addition,
and larger fields fall back to explicit digit-vector arithmetic.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

__all__ = [
    "NonPrime",
    "Field",
    "FieldElement",
    "FieldSpec",
    "make_field",
    "is_prime",
    "is_square",
    "find_primitive",
    "reduce_int",
    "tower_isomorphism",
]

_TABLE_LIMIT = 1 << 21


class NonPrime(ValueError):
    """The requested characteristic is not a prime number."""


_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for every n below 3.3e24."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomial helpers, generic over the coefficient ring
#
# A polynomial is a list of scalar encodings, constant term first, trimmed so
# that only the zero polynomial ends in 0.

def _ptrim(a: list[int]) -> list[int]:
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, sadd, smul):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            if bj == 0:
                continue
            out[i + j] = sadd(out[i + j], smul(ai, bj))
    return _ptrim(out)


def _pmod(a, mod, ssub, smul):
    # mod must be monic, so the leading term cancels without arithmetic
    a = list(a)
    dm = len(mod) - 1
    while len(a) > dm:
        c = a.pop()
        if c != 0:
            off = len(a) - dm
            for i in range(dm):
                a[off + i] = ssub(a[off + i], smul(c, mod[i]))
    return _ptrim(a)


def _decode(code: int, base: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(code % base)
        code //= base
    return out


def _irreducible(mod, sq, ssub, smul) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(mod)//2."""
    dm = len(mod) - 1
    for e in range(1, dm // 2 + 1):
        for code in range(sq**e):
            g = _decode(code, sq, e) + [1]
            if _pmod(mod, g, ssub, smul) == [0]:
                return False
    return True


def _find_modulus(degree, sq, ssub, smul) -> list[int]:
    for code in range(sq**degree):
        cand = _decode(code, sq, degree) + [1]
        if _irreducible(cand, sq, ssub, smul):
            return cand
    raise AssertionError("irreducible polynomial of every degree exists")


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int
    tower: bool
    modulus: tuple[int, ...]


class Field:
    """One finite field; construct through make_field so instances are shared."""

    def __init__(self, p: int, m: int, tower: bool):
        self.p = p
        self.m = m
        self.tower = tower
        self.q = p**m
        self.base: Field | None = None

        if m == 1:
            self.modulus: tuple[int, ...] = ()
            self._init_prime()
        else:
            if tower:
                self.base = make_field(p, 2)
                sq = p * p
                b = self.base
                mod = _find_modulus(m // 2, sq, b.sub, b.mul)
                self._scalar = (sq, b.add, b.sub, b.mul)
            else:
                sq = p
                mod = _find_modulus(m, sq, lambda x, y: (x - y) % p,
                                    lambda x, y: x * y % p)
                self._scalar = (sq, lambda x, y: (x + y) % p,
                                lambda x, y: (x - y) % p,
                                lambda x, y: x * y % p)
            self.modulus = tuple(mod)
            if self.q <= _TABLE_LIMIT:
                self._init_table()
            else:
                self._init_digit()

        self.zero = FieldElement(self, 0)
        self.one = FieldElement(self, 1)

    # -- engines ----------------------------------------------------------

    def _init_prime(self):
        p = self.p

        def add(a, b, _p=p):
            return (a + b) % _p

        def sub(a, b, _p=p):
            return (a - b) % _p

        def neg(a, _p=p):
            return -a % _p

        def mul(a, b, _p=p):
            return a * b % _p

        def inv(a, _p=p, _e=p - 2):
            if a == 0:
                raise ZeroDivisionError("0 is not invertible")
            return pow(a, _e, _p)

        def pow_(a, e, _p=p):
            return pow(a, e, _p)

        if p == 2:
            def is_sq(a):
                return True
        else:
            def is_sq(a, _p=p, _e=(p - 1) // 2):
                return a == 0 or pow(a, _e, _p) == 1

        self.add, self.sub, self.neg = add, sub, neg
        self.mul, self.inv, self.pow = mul, inv, pow_
        self.is_square_enc = is_sq
        self._gen: int | None = None

    def _digit_closures(self):
        p = self.p

        def dadd(a, b, _p=p):
            out, shift = 0, 1
            while a or b:
                out += (a % _p + b % _p) % _p * shift
                a //= _p
                b //= _p
                shift *= _p
            return out

        def dneg(a, _p=p):
            out, shift = 0, 1
            while a:
                d = a % _p
                if d:
                    out += (_p - d) * shift
                a //= _p
                shift *= _p
            return out

        return dadd, dneg

    def _enc_to_poly(self, e: int) -> list[int]:
        sq = self._scalar[0]
        out = []
        while e:
            out.append(e % sq)
            e //= sq
        return out or [0]

    def _poly_to_enc(self, poly: Sequence[int]) -> int:
        sq = self._scalar[0]
        out = 0
        for c in reversed(poly):
            out = out * sq + c
        return out

    def _raw_mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        _, sadd, ssub, smul = self._scalar
        prod = _pmul(self._enc_to_poly(a), self._enc_to_poly(b), sadd, smul)
        return self._poly_to_enc(_pmod(prod, self.modulus, ssub, smul))

    def _raw_pow(self, a: int, e: int) -> int:
        out, cur = 1, a
        while e:
            if e & 1:
                out = self._raw_mul(out, cur)
            cur = self._raw_mul(cur, cur)
            e >>= 1
        return out

    def _find_generator(self) -> int:
        q = self.q
        if q == 2:
            return 1
        factors = _prime_factors(q - 1)
        powf = self._raw_pow if self.m > 1 else lambda a, e: pow(a, e, self.p)
        for c in range(2, q):
            if all(powf(c, (q - 1) // f) != 1 for f in factors):
                return c
        raise AssertionError("multiplicative group of a finite field is cyclic")

    def _init_table(self):
        p, q = self.p, self.q
        dadd, dneg = self._digit_closures()
        g = self._find_generator()
        self._gen = g

        exp = [1] * (q - 1)
        for i in range(1, q - 1):
            exp[i] = self._raw_mul(exp[i - 1], g)
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i

        n = q - 1
        zech = [-1] * n
        for k in range(n):
            s = dadd(1, exp[k])
            zech[k] = log[s] if s else -1

        def mul(a, b, _exp=exp, _log=log, _n=n):
            if a == 0 or b == 0:
                return 0
            return _exp[(_log[a] + _log[b]) % _n]

        def inv(a, _exp=exp, _log=log, _n=n):
            if a == 0:
                raise ZeroDivisionError("0 is not invertible")
            return _exp[-_log[a] % _n]

        def add(a, b, _exp=exp, _log=log, _z=zech, _n=n):
            if a == 0:
                return b
            if b == 0:
                return a
            la = _log[a]
            d = _log[b] - la
            z = _z[d] if d >= 0 else _z[d + _n]
            if z < 0:
                return 0
            t = la + z
            return _exp[t - _n if t >= _n else t]

        if p == 2:
            def neg(a):
                return a

            def is_sq(a):
                return True
        else:
            half = n // 2

            def neg(a, _exp=exp, _log=log, _n=n, _h=half):
                if a == 0:
                    return 0
                t = _log[a] + _h
                return _exp[t - _n if t >= _n else t]

            def is_sq(a, _log=log):
                return a == 0 or _log[a] & 1 == 0

        def sub(a, b, _add=add, _neg=neg):
            return _add(a, _neg(b))

        def pow_(a, e, _n=n, _exp=exp, _log=log, _inv=inv):
            if a == 0:
                if e < 0:
                    raise ZeroDivisionError("0 is not invertible")
                return 1 if e == 0 else 0
            return _exp[_log[a] * e % _n]

        self.add, self.sub, self.neg = add, sub, neg
        self.mul, self.inv, self.pow = mul, inv, pow_
        self.is_square_enc = is_sq

    def _init_digit(self):
        q = self.q
        dadd, dneg = self._digit_closures()
        mul = self._raw_mul

        def sub(a, b, _add=dadd, _neg=dneg):
            return _add(a, _neg(b))

        def inv(a, _pow=self._raw_pow, _e=q - 2):
            if a == 0:
                raise ZeroDivisionError("0 is not invertible")
            return _pow(a, _e)

        def pow_(a, e, _pow=self._raw_pow, _inv=inv):
            if e < 0:
                return _pow(_inv(a), -e)
            return _pow(a, e)

        if self.p == 2:
            def is_sq(a):
                return True
        else:
            def is_sq(a, _pow=self._raw_pow, _e=(q - 1) // 2):
                return a == 0 or _pow(a, _e) == 1

        self.add, self.sub, self.neg = dadd, sub, dneg
        self.mul, self.inv, self.pow = mul, inv, pow_
        self.is_square_enc = is_sq
        self._gen = None

    # -- element access ----------------------------------------------------

    def from_enc(self, e: int) -> FieldElement:
        if not 0 <= e < self.q:
            raise ValueError(f"encoding {e} outside [0, {self.q})")
        return FieldElement(self, e)

    def from_int(self, n: int) -> FieldElement:
        """Image of an ordinary integer under the ring map Z -> GF(p^m)."""
        return FieldElement(self, n % self.p)

    def from_coeffs(self, coeffs: Sequence[int]) -> FieldElement:
        p = self.p
        if len(coeffs) > self.m:
            raise ValueError("too many digits")
        e = 0
        for c in reversed(coeffs):
            e = e * p + c % p
        return FieldElement(self, e)

    def elements(self) -> Iterator[FieldElement]:
        return (FieldElement(self, e) for e in range(self.q))

    def generator_enc(self) -> int:
        if self._gen is None:
            self._gen = self._find_generator()
        return self._gen

    @property
    def spec(self) -> FieldSpec:
        return FieldSpec(self.p, self.m, self.tower, self.modulus)

    def __repr__(self):
        tag = f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"
        return tag + (" tower" if self.tower else "")

    def __len__(self):
        return self.q


@dataclass(frozen=True, repr=False)
class FieldElement:
    field: Field
    enc: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise ValueError("elements of different fields")
            return other.enc
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.enc, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.enc, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(o, self.enc))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.enc, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.enc, self.field.inv(o)))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(o, self.field.inv(self.enc)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.enc))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.enc, e))

    def __bool__(self):
        return self.enc != 0

    @property
    def coeffs(self) -> tuple[int, ...]:
        p, e = self.field.p, self.enc
        out = []
        for _ in range(self.field.m):
            out.append(e % p)
            e //= p
        return tuple(out)

    def __repr__(self):
        return f"GF({self.field.q})[{self.enc}]"


@functools.lru_cache(maxsize=None)
def make_field(p: int, m: int = 1, tower: bool = False) -> Field:
    if not is_prime(p):
        raise NonPrime(f"characteristic {p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be positive")
    if tower and (m % 2 or m < 4):
        raise ValueError("tower presentation needs an even degree m >= 4")
    return Field(p, m, tower)


def is_square(x: FieldElement) -> bool:
    return x.field.is_square_enc(x.enc)


def find_primitive(field: Field) -> FieldElement:
    """Smallest-encoded generator of the multiplicative group."""
    return FieldElement(field, field.generator_enc())


def reduce_int(x, r: int):
    """Canonical residue of x in GF(r), for prime r.

    Extends coordinatewise to tuples (a point (6, 12) mod 5 is (1, 2)) and
    elementwise to sets, keeping the container shape.
    """
    field = make_field(r, 1)

    def red(v):
        if isinstance(v, int):
            return field.from_int(v)
        return tuple(red(c) for c in v)

    if isinstance(x, (set, frozenset)):
        return {red(v) for v in x}
    return red(x)


def _mat_inv_mod(mat: list[list[int]], p: int) -> list[list[int]]:
    n = len(mat)
    aug = [row[:] + [int(i == j) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] % p)
        aug[col], aug[piv] = aug[piv], aug[col]
        s = pow(aug[col][col], p - 2, p)
        aug[col] = [v * s % p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] % p:
                f = aug[r][col]
                aug[r] = [(v - f * w) % p for v, w in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def tower_isomorphism(p: int, m: int) -> tuple[Callable, Callable]:
    """Mutually inverse field maps between GF(p^m) flat and its tower form.

    The flat generator is sent to the smallest-encoded root of the flat
    modulus inside the tower field, which pins the isomorphism down
    deterministically.  Both directions are returned as callables on
    elements.
    """
    flat = make_field(p, m)
    tw = make_field(p, m, tower=True)
    coeffs = [c % p for c in flat.modulus]

    root = None
    for cand in range(tw.q):
        acc = 0
        for c in reversed(coeffs):
            acc = tw.add(tw.mul(acc, cand), c)
        if acc == 0:
            root = cand
            break
    assert root is not None, "flat modulus splits in any field of the same order"

    # columns are the base-p digit vectors of root**j
    cols = []
    cur = 1
    for _ in range(m):
        cols.append(_decode(cur, p, m))
        cur = tw.mul(cur, root)
    fwd_mat = [[cols[j][i] for j in range(m)] for i in range(m)]
    bwd_mat = _mat_inv_mod(fwd_mat, p)

    def apply(mat, e):
        vec = _decode(e, p, m)
        out = 0
        for i in range(m - 1, -1, -1):
            out = out * p + sum(mat[i][j] * vec[j] for j in range(m)) % p
        return out

    def to_tower(x: FieldElement) -> FieldElement:
        if x.field is not flat:
            raise ValueError("expected a flat-field element")
        return FieldElement(tw, apply(fwd_mat, x.enc))

    def from_tower(x: FieldElement) -> FieldElement:
        if x.field is not tw:
            raise ValueError("expected a tower-field element")
        return FieldElement(flat, apply(bwd_mat, x.enc))

    return to_tower, from_tower
