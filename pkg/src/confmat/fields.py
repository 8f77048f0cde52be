"""Exact coefficient fields: the rationals and prime fields F_p.

A :class:`Field` works on *raw* values (``gmpy2.mpq`` for the rationals,
``int`` in ``[0, p)`` for F_p); the polynomial and matrix code stores raw
values for speed.  :class:`Scalar` is the tagged, immutable value handed to
users, which refuses to mix fields.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

import gmpy2
from gmpy2 import mpq, mpz

from .errors import DivisionByZero, FieldMismatch, ParseError, ZeroInput

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for all n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Operations on raw field elements."""

    characteristic: int

    def zero(self): ...

    def one(self): ...

    def __call__(self, value: Any) -> "Scalar":
        return Scalar(self, self.convert(value))

    # subclasses override the arithmetic below
    def convert(self, value: Any): ...

    def add(self, a, b): ...

    def sub(self, a, b): ...

    def mul(self, a, b): ...

    def neg(self, a): ...

    def inv(self, a): ...

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == 0

    def is_one(self, a) -> bool:
        return a == 1

    def pow(self, a, k: int):
        if k < 0:
            return self._pow(self.inv(a), -k)
        return self._pow(a, k)

    def _pow(self, a, k: int):
        result = self.one()
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def sqrt(self, a):
        """Return a square root of ``a`` or ``None``."""
        raise NotImplementedError

    def is_square(self, a) -> tuple[bool, Any]:
        """Square test for nonzero ``a``; returns ``(flag, witness-or-None)``."""
        if self.is_zero(a):
            raise ZeroInput("is_square is undefined for 0")
        root = self.sqrt(a)
        return (root is not None, root)

    def random_element(self, rng: random.Random, bound: int = 9):
        raise NotImplementedError

    def random_nonzero(self, rng: random.Random, bound: int = 9):
        while True:
            a = self.random_element(rng, bound)
            if not self.is_zero(a):
                return a

    def to_str(self, a) -> str: ...

    def to_json(self) -> Any: ...


class Rationals(Field):
    characteristic = 0
    _ZERO = mpq(0)
    _ONE = mpq(1)

    def __repr__(self):
        return "QQ"

    def __str__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def zero(self):
        return self._ZERO

    def one(self):
        return self._ONE

    def convert(self, value):
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"cannot convert {value.field} element to Q")
            return value.value
        if isinstance(value, str):
            m = _RATIONAL_RE.match(value)
            if not m:
                raise ParseError(f"not a rational literal: {value!r}")
            num, den = m.group(1), m.group(2)
            if den is not None and int(den) == 0:
                raise DivisionByZero(f"zero denominator in {value!r}")
            return mpq(int(num), int(den) if den else 1)
        if isinstance(value, bool):
            return mpq(int(value))
        if isinstance(value, (int, Fraction)) or type(value).__name__ in ("mpz", "mpq"):
            return mpq(value)
        raise ParseError(f"cannot interpret {value!r} as a rational")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return 1 / a

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by 0")
        return a / b

    def sqrt(self, a):
        if a < 0:
            return None
        num, den = mpz(a.numerator), mpz(a.denominator)
        if gmpy2.is_square(num) and gmpy2.is_square(den):
            return mpq(gmpy2.isqrt(num), gmpy2.isqrt(den))
        return None

    def random_element(self, rng, bound=9):
        den = rng.randint(1, 3)
        return mpq(rng.randint(-bound, bound), den)

    def to_str(self, a) -> str:
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def to_json(self):
        return "Q"


class PrimeField(Field):
    def __init__(self, p: int):
        p = int(p)
        if not (2 <= p < 2**31) or not is_prime(p):
            raise ValueError(f"modulus must be a prime below 2^31, got {p}")
        self.p = p
        self.characteristic = p

    def __repr__(self):
        return f"GF({self.p})"

    def __str__(self):
        return f"Fp:{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __reduce__(self):
        return (GF, (self.p,))

    def zero(self):
        return 0

    def one(self):
        return 1

    def convert(self, value):
        p = self.p
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch(f"cannot convert {value.field} element to {self}")
            return value.value
        if isinstance(value, str):
            m = _RATIONAL_RE.match(value)
            if not m:
                raise ParseError(f"not a field literal: {value!r}")
            num = int(m.group(1)) % p
            if m.group(2) is not None:
                den = int(m.group(2)) % p
                if den == 0:
                    raise DivisionByZero(f"denominator of {value!r} vanishes mod {p}")
                return num * pow(den, p - 2, p) % p
            return num
        if isinstance(value, bool):
            return int(value)
        if isinstance(value, int) or type(value).__name__ == "mpz":
            return int(value) % p
        if isinstance(value, Fraction) or type(value).__name__ == "mpq":
            den = int(value.denominator) % p
            if den == 0:
                raise DivisionByZero(f"denominator of {value} vanishes mod {p}")
            return int(value.numerator) * pow(den, p - 2, p) % p
        raise ParseError(f"cannot interpret {value!r} in {self}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero(f"inverse of 0 in {self}")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def _pow(self, a, k):
        return pow(a, k, self.p)

    def sqrt(self, a):
        return tonelli_shanks(a, self.p)

    def random_element(self, rng, bound=9):
        return rng.randrange(self.p)

    def to_str(self, a) -> str:
        return str(a)

    def to_json(self):
        return {"Fp": self.p}


def tonelli_shanks(a: int, p: int) -> int | None:
    """Square root of ``a`` modulo the prime ``p`` (the smaller root), or None."""
    a %= p
    if a == 0 or p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return min(r, p - r)


QQ = Rationals()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(spec: Any) -> Field:
    """Accepts ``"Q"``, ``{"Fp": p}``, ``"Fp:p"``, ``"GF(p)"`` or a Field."""
    if isinstance(spec, Field):
        return spec
    if isinstance(spec, dict):
        if set(spec) == {"Fp"}:
            return GF(int(spec["Fp"]))
        raise ParseError(f"bad field spec {spec!r}")
    if isinstance(spec, str):
        s = spec.strip()
        if s in ("Q", "QQ"):
            return QQ
        m = re.match(r"^(?:Fp:|F_?|GF\()(\d+)\)?$", s)
        if m:
            return GF(int(m.group(1)))
    raise ParseError(f"bad field spec {spec!r}")


@dataclass(frozen=True)
class Scalar:
    """An element of a specific field, in canonical form."""

    field: Field
    value: Any

    def _coerce(self, other) -> Any:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.convert(other)
        return NotImplemented

    def _wrap(self, v):
        return Scalar(self.field, v)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(o, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, k: int):
        return self._wrap(self.field.pow(self.value, k))

    def inverse(self) -> "Scalar":
        return self._wrap(self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.convert(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def is_square(self) -> tuple[bool, "Scalar | None"]:
        ok, root = self.field.is_square(self.value)
        return ok, (self._wrap(root) if ok else None)

    def __str__(self):
        return self.field.to_str(self.value)

    def __repr__(self):
        return f"Scalar({self.field!r}, {self})"


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Binary field operation by name: add, sub, mul or div."""
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    f = a.field
    fn = {"add": f.add, "sub": f.sub, "mul": f.mul, "div": f.div}[op]
    return Scalar(f, fn(a.value, b.value))


def is_square(a: Scalar) -> tuple[bool, Scalar | None]:
    return a.is_square()
