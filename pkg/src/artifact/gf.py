"""Prime-field arithmetic and multiplicative characters.

Everything here works over F_d with d an odd prime.  Discrete logarithms
with respect to the smallest primitive root are tabulated once per field,
so character queries are table lookups.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

__all__ = [
    "is_prime",
    "odd_primes",
    "FieldElement",
    "CharacterValue",
    "PrimeField",
    "field",
    "primitive_element",
    "quadratic_character",
    "cubic_character",
    "index",
]


def is_prime(n: int) -> bool:
    """Deterministic trial division."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def odd_primes(upto: int, start: int = 3) -> list[int]:
    """Odd primes p with start <= p <= upto."""
    return [p for p in range(max(start, 3), upto + 1) if is_prime(p)]


def _check_modulus(d: int) -> int:
    d = int(d)
    if d == 2 or not is_prime(d):
        raise ValueError(f"modulus must be an odd prime, got {d}")
    return d


@dataclass(frozen=True)
class FieldElement:
    """Residue ``value`` modulo the odd prime ``modulus``."""

    value: int
    modulus: int

    def __post_init__(self):
        _check_modulus(self.modulus)
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"value {self.value} outside [0, {self.modulus})")

    @classmethod
    def of(cls, value: int, d: int) -> "FieldElement":
        return cls(int(value) % d, d)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError("field mismatch")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement.of(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement.of(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return FieldElement.of(self._coerce(other) - self.value, self.modulus)

    def __mul__(self, other):
        return FieldElement.of(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement.of(-self.value, self.modulus)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(pow(self.value, e, self.modulus), self.modulus)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FieldElement(pow(self.value, self.modulus - 2, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = FieldElement.of(self._coerce(other), self.modulus)
        return self * o.inverse()

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value} mod {self.modulus})"


@dataclass(frozen=True)
class CharacterValue:
    """Value of a multiplicative character.

    ``kind`` is ``"zero"`` (argument 0, nontrivial character), ``"sign"``
    (quadratic character, ``value`` in {+1, -1}) or ``"exp"`` (cubic
    character, value omega_3**``value`` with ``value`` in {0, 1, 2}).
    """

    kind: str
    value: int = 0

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def to_complex(self) -> complex:
        if self.kind == "zero":
            return 0j
        if self.kind == "sign":
            return complex(self.value)
        return complex(np.exp(2j * np.pi * self.value / 3))


class PrimeField:
    """Per-prime tables: primitive root, discrete logs, powers of nu.

    Instances are immutable after construction and safe to share.
    """

    def __init__(self, d: int):
        self.d = _check_modulus(d)
        self.nu = self._smallest_primitive_root()
        pw = np.empty(d - 1, dtype=np.int64)
        dlog = np.full(d, -1, dtype=np.int64)
        x = 1
        for k in range(d - 1):
            pw[k] = x
            dlog[x] = k
            x = x * self.nu % d
        pw.setflags(write=False)
        dlog.setflags(write=False)
        self.powers = pw
        self.dlog = dlog

    def _smallest_primitive_root(self) -> int:
        d = self.d
        m = d - 1
        factors = []
        f, r = 2, m
        while f * f <= r:
            if r % f == 0:
                factors.append(f)
                while r % f == 0:
                    r //= f
            f += 1
        if r > 1:
            factors.append(r)
        for g in range(2, d):
            if all(pow(g, m // q, d) != 1 for q in factors):
                return g
        return 1  # d == 3 never reaches here; kept for completeness

    @property
    def cubic(self) -> bool:
        """True when the cubic character is nontrivial (d = 1 mod 3)."""
        return self.d % 3 == 1

    def log(self, a: int) -> int:
        a = int(a) % self.d
        if a == 0:
            raise ValueError("discrete log of 0")
        return int(self.dlog[a])

    def eta2(self, a: int) -> int:
        a = int(a) % self.d
        if a == 0:
            return 0
        return 1 if self.dlog[a] % 2 == 0 else -1

    def eta3(self, a: int) -> int:
        """Exponent of the cubic character, or -1 for a = 0."""
        if not self.cubic:
            raise ValueError(f"no nontrivial cubic character for d={self.d}")
        a = int(a) % self.d
        if a == 0:
            return -1
        return int(self.dlog[a] % 3)

    def ind(self, a: int) -> int:
        a = int(a) % self.d
        if a == 0:
            raise ValueError("index undefined for 0")
        if not self.cubic:
            return 0
        return int(self.dlog[a] % 3)


@lru_cache(maxsize=None)
def field(d: int) -> PrimeField:
    """Cached :class:`PrimeField` for ``d``."""
    return PrimeField(d)


Scalar = Union[FieldElement, int]


def _split(a: Scalar, d: int | None) -> tuple[int, int]:
    if isinstance(a, FieldElement):
        if d is not None and d != a.modulus:
            raise ValueError("modulus mismatch")
        return a.value, a.modulus
    if d is None:
        raise ValueError("plain integers need an explicit modulus d")
    d = _check_modulus(d)
    return int(a) % d, d


def primitive_element(d: int) -> FieldElement:
    """Smallest primitive root of F_d."""
    F = field(_check_modulus(d))
    return FieldElement(F.nu, F.d)


def quadratic_character(a: Scalar, d: int | None = None) -> CharacterValue:
    """Legendre symbol of ``a``."""
    v, d = _split(a, d)
    if v == 0:
        return CharacterValue("zero")
    return CharacterValue("sign", field(d).eta2(v))


def _check_nu(nu, d: int) -> None:
    if nu is None:
        return
    n = nu.value if isinstance(nu, FieldElement) else int(nu) % d
    if n != field(d).nu:
        raise ValueError(f"nu={n} is not the reference primitive element {field(d).nu}")


def cubic_character(a: Scalar, nu: Scalar | None = None, d: int | None = None) -> CharacterValue:
    """Cubic character with eta(nu**k) = omega_3**k (requires d = 1 mod 3)."""
    v, d = _split(a, d)
    F = field(d)
    if not F.cubic:
        raise ValueError(f"cubic character is trivial for d={d} (need d = 1 mod 3)")
    _check_nu(nu, d)
    if v == 0:
        return CharacterValue("zero")
    return CharacterValue("exp", F.eta3(v))


def index(a: Scalar, nu: Scalar | None = None, d: int | None = None) -> int:
    """Smallest i in {0,1,2} such that a / nu**i is a cubic residue."""
    v, d = _split(a, d)
    _check_nu(nu, d)
    return field(d).ind(v)
