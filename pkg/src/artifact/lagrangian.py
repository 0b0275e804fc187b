"""Stochastic isometries O_3(d) and stochastic Lagrangian subspaces Sigma(d).

A stochastic Lagrangian subspace is a 3-dimensional subspace T of F_d^6 that
contains the all-ones vector and satisfies x.x = y.y for all (x; y) in T.
For odd prime d there are exactly 2d + 2 of them.  Each one is identified by
a canonical id (y, parity):

* parity 1 ("T1 class"):  T_{v_y} = {(x + a v; x - a v) : x in v^perp}
* parity 0 ("T0 class"):  tau12 . T_{v_y}, tau12 acting on the x block

with characteristic vectors v_y = (1, y, -1-y) for y < d and v_d = (0, 1, -1).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import Iterable

import numpy as np

from . import _backend
from .gf import field, _check_modulus

__all__ = [
    "rank_mod",
    "rref_mod",
    "StochIsometry",
    "enumerate_O3",
    "o3_order",
    "StochLagrangian",
    "SigmaCatalog",
    "enumerate_sigma",
    "recanonicalize",
    "intersection_dim",
    "sigma_cubic_character",
    "mu_counts",
    "mu_counts_closed_form",
    "defect_generators",
    "ZETA",
    "TAU12",
    "TAU13",
    "TAU23",
]


def rref_mod(M, d: int) -> np.ndarray:
    """Reduced row echelon form over F_d (zero rows dropped)."""
    A = np.array(M, dtype=np.int64) % d
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if A[i, c] != 0), None)
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), d - 2, d) % d
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % d
        r += 1
    return A[:r]


def rank_mod(M, d: int) -> int:
    return rref_mod(M, d).shape[0]


# permutation matrices; tau_ij swaps coordinates i and j
ZETA = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=np.int64)
TAU12 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=np.int64)
TAU13 = ZETA @ TAU12
TAU23 = ZETA @ ZETA @ TAU12


def _det3(M, d: int) -> int:
    return int(round(np.linalg.det(np.asarray(M, dtype=float)))) % d


@dataclass(frozen=True)
class StochIsometry:
    """3x3 matrix over F_d with O 1 = 1 and O^T O = 1."""

    d: int
    matrix: tuple
    parity: str

    def __post_init__(self):
        O = self.array
        one = np.ones(3, dtype=np.int64)
        if not np.array_equal(O @ one % self.d, one):
            raise ValueError("O does not fix the all-ones vector")
        if not np.array_equal(O.T @ O % self.d, np.eye(3, dtype=np.int64)):
            raise ValueError("O is not orthogonal")
        det = _det3(O, self.d)
        want = 1 if self.parity == "even" else self.d - 1
        if det != want:
            raise ValueError(f"determinant {det} inconsistent with parity {self.parity}")

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=np.int64)

    def __matmul__(self, other: "StochIsometry") -> "StochIsometry":
        M = self.array @ other.array % self.d
        par = "even" if self.parity == other.parity else "odd"
        return StochIsometry(self.d, tuple(map(tuple, M.tolist())), par)


def o3_order(d: int) -> int:
    """|O_3(d)| = 2h."""
    d = _check_modulus(d)
    if d == 3:
        h = 3
    elif d % 3 == 1:
        h = d - 1
    else:
        h = d + 1
    return 2 * h


@lru_cache(maxsize=None)
def enumerate_O3(d: int) -> tuple:
    """All stochastic isometries.

    Even elements are a I + b zeta + c zeta^{-1}, odd ones
    a tau23 + b tau12 + c tau13, with a + b + c = 1 and a^2 + b^2 + c^2 = 1.
    """
    d = _check_modulus(d)
    I = np.eye(3, dtype=np.int64)
    Zi = ZETA.T
    seen = set()
    out = []
    for parity, basis in (("even", (I, ZETA, Zi)), ("odd", (TAU23, TAU12, TAU13))):
        for a in range(d):
            for b in range(d):
                c = (1 - a - b) % d
                if (a * a + b * b + c * c) % d != 1:
                    continue
                M = (a * basis[0] + b * basis[1] + c * basis[2]) % d
                key = M.tobytes()
                if key in seen:
                    continue
                seen.add(key)
                out.append(StochIsometry(d, tuple(map(tuple, M.tolist())), parity))
    return tuple(out)


def _char_vector(d: int, y: int) -> np.ndarray:
    if y == d:
        return np.array([0, 1, d - 1], dtype=np.int64)
    return np.array([1, y, (-1 - y) % d], dtype=np.int64)


def _complement(d: int, v: np.ndarray) -> np.ndarray:
    """Lexicographically smallest u in v^perp with {1, u} independent."""
    one = np.ones(3, dtype=np.int64)
    for a in range(d):
        for b in range(d):
            for c in range(d):
                u = np.array([a, b, c], dtype=np.int64)
                if int(u @ v) % d:
                    continue
                if rank_mod(np.stack([one, u]), d) == 2:
                    return u
    raise AssertionError("unreachable: v^perp is 2-dimensional")


@dataclass(frozen=True)
class StochLagrangian:
    """Canonical descriptor of one element of Sigma(d)."""

    d: int
    y: int
    parity: int  # 1: T1 class (T_v), 0: T0 class (tau12 T_v)

    @cached_property
    def vector(self) -> np.ndarray:
        """Characteristic vector v_y."""
        return _char_vector(self.d, self.y)

    @cached_property
    def generators(self) -> np.ndarray:
        """3 x 6 integer matrix whose rows span T (rows are (x; y))."""
        d = self.d
        v = self.vector
        u = _complement(d, v)
        one = np.ones(3, dtype=np.int64)
        rows = np.stack([
            np.concatenate([one, one]),
            np.concatenate([u, u]),
            np.concatenate([v, (-v) % d]),
        ]) % d
        if self.parity == 0:
            rows[:, :3] = rows[:, :3] @ TAU12.T % d
        return rows

    @property
    def generator_columns(self) -> np.ndarray:
        """6 x 3 generating matrix (columns span T)."""
        return self.generators.T.copy()

    @cached_property
    def elements(self) -> np.ndarray:
        """All d**3 vectors of T, shape (d**3, 6)."""
        return _backend.span_elements(self.d, self.generators)

    @cached_property
    def key(self) -> bytes:
        return rref_mod(self.generators, self.d).tobytes()

    @property
    def is_sym(self) -> bool:
        return self.y in (0, self.d - 1, self.d)

    @property
    def is_ns(self) -> bool:
        return not self.is_sym

    @property
    def is_def(self) -> bool:
        v = self.vector
        return self.is_ns and int(v @ v) % self.d == 0

    @property
    def is_iso(self) -> bool:
        return not self.is_def

    @property
    def is_delta(self) -> bool:
        return self.parity == 0 and self.y == self.d - 1

    @property
    def cube_sum(self) -> int:
        v = self.vector
        return int(sum(int(t) ** 3 for t in v)) % self.d

    @cached_property
    def dim_T_delta(self) -> int:
        """dim of T intersected with the diagonal {(x; x)}."""
        d = self.d
        eye = np.eye(3, dtype=np.int64)
        diag = np.concatenate([eye, eye], axis=1)
        return 6 - rank_mod(np.vstack([self.generators, diag]), d)

    @property
    def label(self) -> str:
        return f"{'T1' if self.parity else 'T0'}[y={self.y}]"

    def __repr__(self):
        return f"StochLagrangian(d={self.d}, y={self.y}, parity={self.parity})"


def _apply(T: StochLagrangian, O, side: str) -> np.ndarray:
    O = O.array if isinstance(O, StochIsometry) else np.asarray(O, dtype=np.int64)
    g = T.generators.copy()
    if side == "left":
        g[:, :3] = g[:, :3] @ O.T % T.d
    else:
        g[:, 3:] = g[:, 3:] @ O % T.d  # y -> O^T y
    return g


@dataclass(frozen=True)
class SigmaCatalog:
    """All 2d + 2 stochastic Lagrangian subspaces with class index lists."""

    d: int
    subspaces: tuple
    by_key: dict = dc_field(repr=False, compare=False)

    def __len__(self):
        return len(self.subspaces)

    def __iter__(self):
        return iter(self.subspaces)

    def __getitem__(self, i) -> StochLagrangian:
        return self.subspaces[i]

    def position(self, T: StochLagrangian) -> int:
        return self.subspaces.index(T)

    def find(self, y: int, parity: int) -> StochLagrangian:
        return StochLagrangian(self.d, y, parity)

    def _idx(self, pred) -> tuple:
        return tuple(i for i, T in enumerate(self.subspaces) if pred(T))

    @cached_property
    def sym(self) -> tuple:
        return self._idx(lambda T: T.is_sym)

    @cached_property
    def ns(self) -> tuple:
        return self._idx(lambda T: T.is_ns)

    @cached_property
    def iso(self) -> tuple:
        return self._idx(lambda T: T.is_iso)

    @cached_property
    def defect(self) -> tuple:
        return self._idx(lambda T: T.is_def)

    @cached_property
    def t0(self) -> tuple:
        return self._idx(lambda T: T.parity == 0)

    @cached_property
    def t1(self) -> tuple:
        return self._idx(lambda T: T.parity == 1)

    @cached_property
    def delta(self) -> int:
        return self._idx(lambda T: T.is_delta)[0]

    @cached_property
    def mu(self) -> tuple | None:
        if self.d % 3 != 1:
            return None
        return mu_counts(self.d)

    def recanonicalize(self, generators) -> StochLagrangian:
        key = rref_mod(generators, self.d).tobytes()
        try:
            return self.by_key[key]
        except KeyError:
            raise ValueError("subspace is not in Sigma(d)") from None

    def act(self, O, T: StochLagrangian, side: str = "left") -> StochLagrangian:
        """O.T = {(Ox; y)} (left) or T.O = {(x; O^T y)} (right), recanonicalized."""
        return self.recanonicalize(_apply(T, O, side))


@lru_cache(maxsize=None)
def enumerate_sigma(d: int) -> SigmaCatalog:
    """Sigma(d) ordered as T0 class y = 0..d, then T1 class y = 0..d."""
    d = _check_modulus(d)
    subs = tuple(StochLagrangian(d, y, p) for p in (0, 1) for y in range(d + 1))
    by_key = {}
    for T in subs:
        if T.key in by_key:
            raise AssertionError(f"duplicate subspace {T}")
        by_key[T.key] = T
    return SigmaCatalog(d, subs, by_key)


def recanonicalize(generators, d: int) -> StochLagrangian:
    return enumerate_sigma(d).recanonicalize(generators)


def intersection_dim(T1: StochLagrangian, T2: StochLagrangian) -> int:
    """dim(T1 cap T2) from an explicit rank computation over F_d."""
    if T1.d != T2.d:
        raise ValueError("different fields")
    return 6 - rank_mod(np.vstack([T1.generators, T2.generators]), T1.d)


def sigma_cubic_character(T: StochLagrangian) -> int:
    """Cubic-character exponent of v1^3 + v2^3 + v3^3 (0 when d != 1 mod 3)."""
    if T.is_sym:
        raise ValueError("cubic character is only defined on T_ns")
    if T.d % 3 != 1:
        return 0
    return field(T.d).eta3(T.cube_sum)


def ns_class(T: StochLagrangian) -> int:
    """j such that eta3(T) = eta3(3 nu^j)."""
    if T.is_sym:
        raise ValueError("class is only defined on T_ns")
    d = T.d
    if d % 3 != 1:
        return 0
    return field(d).ind(T.cube_sum * pow(3, d - 2, d))


@lru_cache(maxsize=None)
def mu_counts(d: int) -> tuple:
    """(mu_0, mu_1, mu_2) by enumerating T_ns, cross-checked with the closed form."""
    if d % 3 != 1:
        raise ValueError("mu counts need d = 1 mod 3")
    cat = enumerate_sigma(d)
    mu = [0, 0, 0]
    for i in cat.ns:
        mu[ns_class(cat[i])] += 1
    cf = mu_counts_closed_form(d)
    for j in range(3):
        if abs(cf[j] - mu[j]) > 0.5:
            raise ArithmeticError(f"mu_{j} closed form {cf[j]} disagrees with count {mu[j]}")
    return tuple(mu)


def mu_counts_closed_form(d: int) -> tuple:
    """[2d(d-2) + 4 Re(eta3^2(nu^j) G^3(eta3))] / (3d) as floats."""
    from .charsums import eta3, gauss_G

    chi = eta3(d)
    G3 = gauss_G(chi, 1) ** 3
    out = []
    for j in range(3):
        w = np.exp(2j * np.pi * (2 * j % 3) / 3)
        out.append((2 * d * (d - 2) + 4 * (w * G3).real) / (3 * d))
    return tuple(out)


def defect_generators(d: int) -> list:
    """Generators (rows) of the defect subspaces written out explicitly.

    d = 3: the two subspaces built on N = span(1,1,1); d = 1 mod 3: the four
    subspaces (g_i; 0), (0; g_j), (1; 1) with g0 = (1, xi, xi^2),
    g1 = (1, xi^2, xi), xi of order 3.  Empty for d = 2 mod 3.
    """
    d = _check_modulus(d)
    if d == 3:
        t0 = np.array([[1, 2, 0, 1, 2, 0], [0, 0, 0, 1, 1, 1], [1, 1, 1, 0, 0, 0]])
        t1 = np.array([[1, 2, 0, 2, 1, 0], [0, 0, 0, 1, 1, 1], [1, 1, 1, 0, 0, 0]])
        return [t0, t1]
    if d % 3 == 2:
        return []
    F = field(d)
    xi = int(F.powers[(d - 1) // 3])
    g = [np.array([1, xi, xi * xi % d]), np.array([1, xi * xi % d, xi])]
    zero = np.zeros(3, dtype=np.int64)
    one = np.ones(3, dtype=np.int64)
    out = []
    for i in range(2):
        for j in range(2):
            out.append(np.stack([
                np.concatenate([g[i], zero]),
                np.concatenate([zero, g[j]]),
                np.concatenate([one, one]),
            ]) % d)
    return out


def iter_class(cat: SigmaCatalog, which: str) -> Iterable[StochLagrangian]:
    return (cat[i] for i in getattr(cat, which))
