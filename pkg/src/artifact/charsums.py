"""Gauss sums, Jacobi sums and the integer invariant g~(d).

Floating point sums are turned into certified integers by rounding and then
checking an algebraic side condition, never by rounding alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from . import _backend
from .gf import FieldElement, field

__all__ = [
    "Character",
    "eta2",
    "eta3",
    "TildeG",
    "gauss_g",
    "gauss_G",
    "jacobi",
    "tilde_g",
    "cubic_gauss_values",
    "omega_table",
]


@lru_cache(maxsize=64)
def omega_table(d: int) -> np.ndarray:
    """exp(2 pi i k / d) for k = 0..d-1 (read only)."""
    t = np.exp(2j * np.pi * np.arange(d) / d)
    t.setflags(write=False)
    return t


@dataclass(frozen=True)
class Character:
    """Multiplicative character of F_d with eta(nu**k) = omega_order**(power*k).

    ``nu`` is the smallest primitive root.  Following the usual convention a
    nontrivial character vanishes at 0 and the trivial one equals 1 there.
    """

    d: int
    order: int
    power: int = 1

    def __post_init__(self):
        if (self.d - 1) % self.order != 0:
            raise ValueError(f"no character of order {self.order} on F_{self.d}")

    @property
    def trivial(self) -> bool:
        return self.power % self.order == 0

    def conj(self) -> "Character":
        return Character(self.d, self.order, (-self.power) % self.order)

    def __call__(self, a: int) -> complex:
        a = int(a) % self.d
        if a == 0:
            return 1.0 + 0j if self.trivial else 0j
        k = field(self.d).log(a)
        return complex(np.exp(2j * np.pi * (self.power * k % self.order) / self.order))

    def values(self) -> np.ndarray:
        """Character values on 0..d-1."""
        F = field(self.d)
        v = np.zeros(self.d, dtype=np.complex128)
        k = F.dlog[1:]
        v[1:] = np.exp(2j * np.pi * ((self.power * k) % self.order) / self.order)
        v[0] = 1.0 if self.trivial else 0.0
        return v


def eta2(d: int) -> Character:
    """Quadratic character."""
    return Character(d, 2, 1)


def eta3(d: int) -> Character:
    """Cubic character with eta3(nu) = omega_3 (needs d = 1 mod 3)."""
    return Character(d, 3, 1)


def _split(a, d):
    if isinstance(a, FieldElement):
        return a.value, a.modulus
    if d is None:
        raise ValueError("plain integers need an explicit modulus d")
    return int(a) % d, int(d)


@lru_cache(maxsize=4096)
def _gauss_g_class(d: int, m: int, rep: int) -> complex:
    return _backend.gauss_sum(d, rep, m)


def gauss_g(m: int, a, d: int | None = None) -> complex:
    """g(m, a) = sum_b omega_d**(a b**m).

    Cached per (d, m, coset of a modulo the e-th powers, e = gcd(m, d-1)).
    """
    if m <= 1:
        raise ValueError("m must exceed 1")
    v, d = _split(a, d)
    if v == 0:
        raise ValueError("a must be nonzero")
    F = field(d)
    e = gcd(m, d - 1)
    rep = int(F.powers[F.log(v) % e])
    val = _gauss_g_class(d, m, rep)
    if m == 3 and abs(val.imag) > 1e-9:
        raise ArithmeticError(f"g(3,{v}) not real for d={d}: {val}")
    return val


def gauss_G(character: Character, a=1, d: int | None = None) -> complex:
    """G(eta, a) = sum_b eta(b) omega_d**(a b)."""
    if character.trivial:
        raise ValueError("Gauss sum of the trivial character is excluded")
    v, d = _split(a, character.d if d is None and not isinstance(a, FieldElement) else d)
    if d != character.d:
        raise ValueError("modulus mismatch")
    if v == 0:
        raise ValueError("a must be nonzero")
    w = omega_table(d)
    b = np.arange(d)
    return complex(np.sum(character.values() * w[(v * b) % d]))


def jacobi(characters) -> complex:
    """J(eta_1,...,eta_k) = sum over b_1+...+b_k = 1 of prod eta_i(b_i)."""
    chars = list(characters)
    if not chars:
        raise ValueError("need at least one character")
    d = chars[0].d
    if any(c.d != d for c in chars):
        raise ValueError("characters over different fields")
    acc = chars[0].values()
    idx = np.arange(d)
    for c in chars[1:]:
        v = c.values()
        # cyclic convolution over (F_d, +)
        acc = np.array([np.sum(acc * v[(s - idx) % d]) for s in range(d)])
    return complex(acc[1 % d])


@dataclass(frozen=True)
class TildeG:
    """g~(d) = s together with the companion j, s**2 + 3 j**2 = 4 d."""

    d: int
    s: int
    j: int

    @property
    def sq(self) -> int:
        return self.s * self.s


def cubic_gauss_values(d: int) -> tuple[float, float, float]:
    """(g(3,1), g(3,nu), g(3,nu**2)) as floats."""
    F = field(d)
    if not F.cubic:
        raise ValueError(f"d={d} is not 1 mod 3")
    return tuple(gauss_g(3, int(F.powers[k]), d).real for k in range(3))  # type: ignore[return-value]


@lru_cache(maxsize=None)
def tilde_g(d: int) -> TildeG:
    """Certified integer g(3,1) g(3,nu) g(3,nu^2) / d."""
    g = cubic_gauss_values(d)
    x = g[0] * g[1] * g[2] / d
    s = int(round(x))
    if abs(x - s) >= 1e-6:
        raise ArithmeticError(f"g~({d}) = {x} is not within 1e-6 of an integer")
    if s % 3 != 1:
        raise ArithmeticError(f"g~({d}) = {s} is not 1 mod 3")
    r = 4 * d - s * s
    j = math.isqrt(r // 3) if r >= 0 and r % 3 == 0 else -1
    if j < 0 or 3 * j * j != r:
        raise ArithmeticError(f"no integer j with s^2 + 3 j^2 = 4d for d={d}, s={s}")
    return TildeG(d, s, j)
