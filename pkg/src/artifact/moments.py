"""Closed-form third-moment statistics of Clifford orbits.

The central object is the kappa profile of a state or ensemble: one number
kappa(T) = tr[R(T) rho^{(x)3}] per stochastic Lagrangian subspace T.  Frame
potentials, moment-operator spectra and shadow norms are all functions of
that profile and of (n, d).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .charsums import gauss_g
from .gf import field, _check_modulus
from .lagrangian import StochLagrangian, enumerate_sigma, SigmaCatalog

__all__ = [
    "CubicFunction",
    "MagicStateSpec",
    "EnsembleSpec",
    "KappaProfile",
    "MomentSummary",
    "NormBounds",
    "kappa_single",
    "kappa_single_exact",
    "kappa_profile",
    "stabilizer_profile",
    "frame_potential3",
    "phi3_stab",
    "sym_dim",
    "stab_moment_spectrum",
    "balanced_moment_spectrum",
    "moment_norm_bounds",
    "shadow_norm_stab_projector",
    "shadow_norm_orbit_stab_observable",
    "shadow_norm_ensemble_bounds",
    "gamma_dk",
    "summarize",
]


# ---------------------------------------------------------------------------
# magic states


@dataclass(frozen=True)
class CubicFunction:
    """Cubic f defining the T gate T_f and the magic state T_f|+>.

    For d >= 5: f(u) = c3 u^3 + c2 u^2 + c1 u + c0 over F_d with c3 != 0.
    For d = 3: f(u) = c3 u^3 + 3 c2 u^2 with values in Z_9, c3 in Z_9,
    c3 != 0 mod 3 and c2 in F_3.
    """

    d: int
    c3: int = 1
    c2: int = 0
    c1: int = 0
    c0: int = 0

    def __post_init__(self):
        d = _check_modulus(self.d)
        if d == 3:
            if self.c1 or self.c0:
                raise ValueError("d=3 cubic functions have the form c3 u^3 + 3 c2 u^2")
            object.__setattr__(self, "c3", self.c3 % 9)
            object.__setattr__(self, "c2", self.c2 % 3)
            if self.c3 % 3 == 0:
                raise ValueError("c3 must be nonzero mod 3")
        else:
            for name in ("c3", "c2", "c1", "c0"):
                object.__setattr__(self, name, getattr(self, name) % d)
            if self.c3 == 0:
                raise ValueError("cubic coefficient must be nonzero")

    @classmethod
    def canonical(cls, d: int) -> "CubicFunction":
        return cls(d, 1)

    @property
    def coefficients(self) -> tuple:
        """(c3, c2, c1, c0) reduced mod d (for d = 3: (c3 mod 3, 0, 0, 0))."""
        if self.d == 3:
            return (self.c3 % 3, 0, 0, 0)
        return (self.c3, self.c2, self.c1, self.c0)

    def values(self) -> np.ndarray:
        """f(u) for u = 0..d-1, in Z_d (Z_9 when d = 3)."""
        u = np.arange(self.d, dtype=np.int64)
        if self.d == 3:
            return (self.c3 * u ** 3 + 3 * self.c2 * u ** 2) % 9
        return (((self.c3 * u + self.c2) * u + self.c1) * u + self.c0) % self.d

    def state_vector(self) -> np.ndarray:
        m = 9 if self.d == 3 else self.d
        return np.exp(2j * np.pi * self.values() / m) / np.sqrt(self.d)

    @property
    def char_class(self) -> int:
        """Index of c3 (0 unless d = 1 mod 3)."""
        return field(self.d).ind(self.c3) if self.d != 3 else 0


@dataclass(frozen=True)
class MagicStateSpec:
    """|psi_{f_1}> (x) ... (x) |psi_{f_k}> (x) |0>^{(x)(n-k)}."""

    d: int
    n: int
    factors: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if len(self.factors) > self.n:
            raise ValueError("more magic factors than qudits")
        if any(f.d != self.d for f in self.factors):
            raise ValueError("factor field mismatch")

    @property
    def k(self) -> int:
        return len(self.factors)

    @property
    def D(self) -> int:
        return self.d ** self.n

    @property
    def class_vector(self) -> tuple:
        """(C_0, C_1, C_2): how many factors have c3 of each cubic class."""
        c = [0, 0, 0]
        for f in self.factors:
            c[f.char_class] += 1
        return tuple(c)

    def factor_vectors(self) -> list:
        zero = np.zeros(self.d, dtype=complex)
        zero[0] = 1.0
        return [f.state_vector() for f in self.factors] + [zero] * (self.n - self.k)

    def state_vector(self) -> np.ndarray:
        v = np.ones(1, dtype=complex)
        for f in self.factor_vectors():
            v = np.kron(v, f)
        return v


@dataclass(frozen=True)
class EnsembleSpec:
    """Weighted list of magic states (weights nonnegative, summing to 1)."""

    items: tuple

    def __post_init__(self):
        items = tuple((s, float(w)) for s, w in self.items)
        object.__setattr__(self, "items", items)
        if not items:
            raise ValueError("empty ensemble")
        if any(w < 0 for _, w in items) or abs(sum(w for _, w in items) - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        if len({(s.d, s.n) for s, _ in items}) != 1:
            raise ValueError("all states must share d and n")

    @classmethod
    def uniform(cls, specs: Sequence[MagicStateSpec]) -> "EnsembleSpec":
        return cls(tuple((s, 1.0 / len(specs)) for s in specs))

    @property
    def d(self) -> int:
        return self.items[0][0].d

    @property
    def n(self) -> int:
        return self.items[0][0].n

    @property
    def k(self) -> int | None:
        ks = {s.k for s, _ in self.items}
        return ks.pop() if len(ks) == 1 else None


# ---------------------------------------------------------------------------
# kappa


def kappa_single_exact(f: CubicFunction, T: StochLagrangian):
    """kappa(psi_f, T) as a Fraction when rational, else None."""
    if T.is_sym:
        return Fraction(1)
    if f.d % 3 != 1:
        return Fraction(2, f.d)
    return None


def kappa_single(f: CubicFunction, T: StochLagrangian) -> float:
    """kappa(psi_f, T) in closed form.

    1 on T_sym; 2/d on T_ns for d != 1 mod 3; g(3, a c3)^2 / d^2 for
    d = 1 mod 3, with a = v1^3 + v2^3 + v3^3 from the characteristic vector.
    """
    if f.d != T.d:
        raise ValueError("field mismatch")
    ex = kappa_single_exact(f, T)
    if ex is not None:
        return float(ex)
    d = f.d
    g = gauss_g(3, T.cube_sum * f.c3 % d, d).real
    return g * g / (d * d)


@dataclass
class KappaProfile:
    """kappa(T) for every T in Sigma(d) (catalog order) plus derived data."""

    d: int
    n: int
    kappa: np.ndarray
    k: int | None = None
    label: str = ""
    exact: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.kappa = np.asarray(self.kappa, dtype=float)
        if self.kappa.shape != (2 * self.d + 2,):
            raise ValueError("profile needs one value per T in Sigma(d)")

    @property
    def D(self) -> int:
        return self.d ** self.n

    @property
    def cat(self) -> SigmaCatalog:
        return enumerate_sigma(self.d)

    def _sum(self, arr, which):
        return float(np.sum(arr[list(getattr(self.cat, which))])) if getattr(self.cat, which) else 0.0

    @property
    def sigma(self) -> float:
        return float(np.sum(self.kappa))

    @property
    def sigma2(self) -> float:
        return float(np.sum(self.kappa ** 2))

    @property
    def ns(self) -> float:
        return self._sum(self.kappa, "ns")

    @property
    def abs_ns(self) -> float:
        return self._sum(np.abs(self.kappa), "ns")

    @property
    def t0(self) -> float:
        return self._sum(self.kappa, "t0")

    @property
    def t1(self) -> float:
        return self._sum(self.kappa, "t1")

    @cached_property
    def hat(self) -> np.ndarray:
        D, d = self.D, self.d
        return (D + 2) / (D - 1) * (self.kappa - self.sigma / (2 * D + 2 * d))

    @property
    def hat_sigma(self) -> float:
        return float(np.sum(self.hat))

    @property
    def abs_hat_sigma(self) -> float:
        return float(np.sum(np.abs(self.hat)))

    @property
    def hat_ns(self) -> float:
        return self._sum(self.hat, "ns")

    @property
    def abs_hat_ns(self) -> float:
        return self._sum(np.abs(self.hat), "ns")

    @property
    def hat_iso(self) -> float:
        return self._sum(self.hat, "iso")

    @property
    def abs_hat_iso(self) -> float:
        return self._sum(np.abs(self.hat), "iso")

    @property
    def hat_delta(self) -> float:
        return float(self.hat[self.cat.delta])

    @property
    def kappa_def(self) -> float | None:
        de = self.cat.defect
        return float(self.kappa[de[0]]) if de else None

    @property
    def hat_def(self) -> float | None:
        de = self.cat.defect
        return float(self.hat[de[0]]) if de else None

    @property
    def is_stabilizer(self) -> bool:
        return bool(np.all(np.abs(self.kappa - 1.0) < 1e-12))

    def is_balanced(self, tol: float = 1e-12) -> bool:
        v = self.kappa[list(self.cat.ns)]
        return len(v) == 0 or float(np.ptp(v)) <= tol

    @property
    def kappa_E(self) -> float:
        """Common T_ns value of a balanced profile."""
        if not self.is_balanced():
            raise ValueError("profile is not balanced")
        ns = self.cat.ns
        return float(self.kappa[ns[0]]) if ns else 1.0


def stabilizer_profile(d: int, n: int) -> KappaProfile:
    d = _check_modulus(d)
    return KappaProfile(d, n, np.ones(2 * d + 2), k=0, label="stabilizer",
                        exact={"kappa_ns": Fraction(1)})


def _state_profile(spec: MagicStateSpec) -> np.ndarray:
    cat = enumerate_sigma(spec.d)
    vals = np.ones(len(cat))
    for f in spec.factors:
        vals *= np.array([kappa_single(f, T) for T in cat])
    return vals


def kappa_profile(obj) -> KappaProfile:
    """Profile of a magic state (product over factors) or ensemble (weighted sum)."""
    if isinstance(obj, MagicStateSpec):
        ex = {}
        if obj.d % 3 != 1:
            ex["kappa_ns"] = Fraction(2, obj.d) ** obj.k
        return KappaProfile(obj.d, obj.n, _state_profile(obj), k=obj.k, label="state", exact=ex)
    if isinstance(obj, EnsembleSpec):
        vals = sum(w * _state_profile(s) for s, w in obj.items)
        return KappaProfile(obj.d, obj.n, vals, k=obj.k, label="ensemble")
    raise TypeError(f"cannot build a kappa profile from {type(obj).__name__}")


def frame_potential3(profile: KappaProfile) -> float:
    """Third normalized frame potential (1/6) sum_T kappa(T) kappa^(T)."""
    return float(np.dot(profile.kappa, profile.hat)) / 6.0


def phi3_stab(n: int, d: int) -> Fraction:
    D = d ** n
    return Fraction((d + 1) * (D + 2), 3 * (D + d))


def sym_dim(D: int) -> int:
    return D * (D + 1) * (D + 2) // 6


# ---------------------------------------------------------------------------
# spectra


@dataclass
class MomentSummary:
    """Spectrum (within Sym3) and derived figures of merit."""

    d: int
    n: int
    eigenvalues: list  # [(value, multiplicity)], zero-multiplicity entries dropped
    norm: float
    dev_lower: float
    dev_upper: float
    phi3: float | None = None
    norm_exact: bool = True
    extras: dict = dc_field(default_factory=dict)

    @property
    def D(self) -> int:
        return self.d ** self.n

    @property
    def rank(self) -> int:
        return sum(m for v, m in self.eigenvalues if abs(v) > 1e-12)

    @property
    def dev_exact(self) -> bool:
        return abs(self.dev_upper - self.dev_lower) <= 1e-12 * max(1.0, abs(self.dev_upper))

    def as_dict(self) -> dict:
        out = {
            "d": self.d,
            "n": self.n,
            "norm": self.norm,
            "norm_exact": self.norm_exact,
            "dev_lower": self.dev_lower,
            "dev_upper": self.dev_upper,
            "dev_exact": self.dev_exact,
        }
        if self.phi3 is not None:
            out["phi3"] = self.phi3
        for i, (v, m) in enumerate(self.eigenvalues, 1):
            out[f"lambda{i}"] = v
            out[f"m{i}"] = m
        out.update(self.extras)
        return out


def _multiplicities(n: int, d: int) -> list:
    """Multiplicities shared by the stabilizer and balanced spectra."""
    D = d ** n
    pi = sym_dim(D)
    if d == 3:
        m1 = (D + 1) // 2
        return [m1, pi - m1]
    if d % 3 == 1:
        big = D * (D + 1) * (D + d - 2) // (2 * d - 2)
        return [D, big - D, pi - big]
    m1 = D * (D + 1) * (D + d) // (2 * d + 2)
    return [m1, pi - m1]


def _spectrum(vals: list, mult: list) -> list:
    return [(float(v), int(m)) for v, m in zip(vals, mult) if m > 0]


def stab_moment_spectrum(n: int, d: int) -> MomentSummary:
    """Eigenvalues of the normalized third moment of Stab(n, d) within Sym3."""
    D = d ** n
    pi = sym_dim(D)
    if d == 2:
        return MomentSummary(d, n, [(1.0, pi)], 1.0, 0.0, 0.0, phi3=1.0)
    _check_modulus(d)
    mult = _multiplicities(n, d)
    if d == 3:
        lam = [Fraction(D + 2, 3), Fraction(D + 2, D + 3)]
        dev = Fraction(D - 1, 3)
    elif d % 3 == 1:
        lam = [Fraction(D + 2, 3), Fraction((d - 1) * (D + 2), 3 * (D + d)), Fraction(0)]
        dev = Fraction(D - 1, 3)
    else:
        lam = [Fraction((d + 1) * (D + 2), 3 * (D + d)), Fraction(0)]
        dev = Fraction(1) if d == 5 else lam[0] - 1
    norm = max(lam)
    return MomentSummary(
        d, n, _spectrum(lam, mult), float(norm), float(dev), float(dev),
        phi3=float(phi3_stab(n, d)),
        extras={"rank": sum(m for v, m in zip(lam, mult) if v != 0)},
    )


def balanced_moment_spectrum(kE: float, n: int, d: int) -> MomentSummary:
    """Spectrum of a balanced ensemble whose T_ns value is ``kE``.

    ``kE`` may be a Fraction, in which case the arithmetic stays exact.
    """
    _check_modulus(d)
    D = d ** n
    k = kE if isinstance(kE, Fraction) else float(kE)
    third = Fraction(3, D + 2) if isinstance(k, Fraction) else 3 / (D + 2)
    mult = _multiplicities(n, d)
    lam1_generic = (D + 2) * k / 3
    if d == 3:
        hat_delta = 1 - Fraction((d - 2) * (D + 2), (D - 1) * (D + d)) * (k - third)
        lam = [lam1_generic, hat_delta]
        norm = lam[0] if k >= third else lam[1]
        dev = abs(lam[0] - 1)
    elif d % 3 == 1:
        lam2 = Fraction(D + 2, D + d) * (
            (d * D - 4 * D - d - 2) * k / (3 * (D - 1)) + Fraction(D + 1, D - 1))
        lam3 = Fraction(D + 2, D - 1) * (1 - k)
        lam = [lam1_generic, lam2, lam3]
        norm = lam[0] if k >= third else lam[2]
        dev = abs(lam[0] - 1)
    else:
        lam1 = Fraction((d - 2) * (D + 2), 3 * (D + d)) * k + Fraction(D + 2, D + d)
        lam2 = Fraction(D + 2, D - 1) * (1 - k)
        lam = [lam1, lam2]
        norm = lam[0] if k >= third else lam[1]
        dev = abs(lam[1] - 1) if d == 5 else abs(lam[0] - 1)
    hat = Fraction((D + 2) ** 2, (D - 1) * (D + d)) * (k - third)
    phi3 = 1 + Fraction((d - 2) * (D + 2) ** 2, 3 * (D - 1) * (D + d)) * (k - third) ** 2
    spec = _spectrum(lam, mult)
    return MomentSummary(
        d, n, spec, float(norm), float(dev), float(dev), phi3=float(phi3),
        extras={"kappa_E": float(k), "kappa_hat_E": float(hat)},
    )


@dataclass(frozen=True)
class NormBounds:
    """Bounds on ||Qbar|| and ||Qbar - P_sym||."""

    lower: float
    upper: float
    exact: bool
    dev_lower: float
    dev_upper: float

    @property
    def value(self) -> float | None:
        return self.lower if self.exact else None


def moment_norm_bounds(profile: KappaProfile) -> NormBounds:
    """Operator-norm bounds on the normalized third moment of an orbit."""
    p = profile
    D, d = p.D, p.d
    if p.is_balanced():
        s = balanced_moment_spectrum(p.kappa_E, p.n, d)
        return NormBounds(s.norm, s.norm, True, s.dev_lower, s.dev_upper)
    c = (D + 5) / (6 * (D + 2))
    if d % 3 == 2:
        lo = p.hat_sigma / 6
        hi = p.abs_hat_sigma / 6
        dev_hi = c * p.abs_hat_ns
        dev_lo = abs(lo - 1)
    else:
        kd = p.kappa_def
        e_def = (D + 2) * kd / 3
        lo = max(p.hat_iso / 6, e_def)
        hi = max(p.abs_hat_iso / 6, e_def)
        dev_hi = max(c * p.abs_hat_ns, abs(e_def - 1))
        dev_lo = max(abs(p.hat_iso / 6 - 1), abs(e_def - 1))
        if abs(p.hat_def) <= 1e-12 and np.all(p.hat >= -1e-12):
            lo = hi = p.hat_sigma / 6
            dev_hi = min(dev_hi, c * p.hat_ns)
    exact = abs(hi - lo) <= 1e-12 * max(1.0, abs(hi))
    return NormBounds(lo, hi, exact, min(dev_lo, dev_hi), dev_hi)


# ---------------------------------------------------------------------------
# shadow norms


def _check_K(n: int, d: int, K: int) -> None:
    D = d ** n
    if K < 1 or K * d > D:
        raise ValueError(f"need 1 <= K <= D/d, got K={K}")
    k = K
    while k % d == 0:
        k //= d
    if k != 1:
        raise ValueError("K must be a power of d")


def shadow_norm_stab_projector(n: int, d: int, K: int = 1) -> tuple:
    """(||O_0||^2_Stab, ratio to ||O_0||_2^2) for a rank-K stabilizer projector."""
    _check_K(n, d, K)
    D = d ** n
    val = Fraction((D + 1) * (D - K) * (d * D * K + d * D - D * K - d * K), D * D * (D + d))
    ratio = Fraction(D + 1, D + d) * (d - 1 - Fraction(d, D) + Fraction(d, K))
    return val, ratio


def shadow_norm_orbit_stab_observable(profile: KappaProfile, K: int = 1) -> float:
    """||O_0||^2 w.r.t. orb(Psi), O a rank-K stabilizer projector."""
    _check_K(profile.n, profile.d, K)
    D = profile.D
    hs = profile.hat_sigma
    u1 = (D - K) * (K + 1) * hs / (2 * (D - 1)) - (D + 2) * (D - K) * (2 * D * K + D - K) / (D * D * (D - 1))
    u2 = -K * (K + 1) * hs / (2 * (D - 1)) + (D + 2) * K * (D * D + 2 * D * K - K) / (D * D * (D - 1))
    return (D + 1) * max(u1, u2) / (D + 2)


def gamma_dk(d: int, k: int) -> Fraction:
    """gamma_{d,k} = 4^k gamma_k / d^{k-1}."""
    if k < 1:
        raise ValueError("k >= 1")
    gk = {1: Fraction(9, 8), 2: Fraction(15, 16)}.get(k, Fraction(13, 16))
    return Fraction(4 ** k) * gk / Fraction(d) ** (k - 1)


def shadow_norm_ensemble_bounds(profile: KappaProfile) -> tuple:
    """(lower, upper) for the shadow norm of orb(Psi) (or of an orbit ensemble)."""
    p = profile
    D, d = p.D, p.d
    lower = p.hat_sigma - 3 - 5 / D
    f = (D + 1) / (D + 2)
    uppers = [
        f * (3 * p.hat_delta + p.abs_hat_ns),
        f * (p.abs_hat_sigma - 3 * p.hat_delta),
        2 * d - 1,
    ]
    if p.is_stabilizer:
        uppers.append((D + 1) * (2 * d - 1) / (D + d))
        lower = max(lower, (D + 1) / (D + d) * (2 * d - 1 - d / D))
    elif p.k is not None and p.k >= 1 and p.label in ("state", "ensemble"):
        if d % 3 == 1:
            uppers.append(3 + float(gamma_dk(d, p.k)))
        else:
            uppers.append(3 + 2 ** (p.k + 1) * (d - 2) / d ** p.k)
    return lower, min(uppers)


def summarize(profile: KappaProfile) -> MomentSummary:
    """MomentSummary for an arbitrary profile (exact spectrum when balanced)."""
    p = profile
    if p.is_balanced():
        s = balanced_moment_spectrum(p.kappa_E, p.n, p.d)
        s.phi3 = frame_potential3(p)
    else:
        b = moment_norm_bounds(p)
        s = MomentSummary(p.d, p.n, [], b.upper, b.dev_lower, b.dev_upper,
                          phi3=frame_potential3(p), norm_exact=b.exact,
                          extras={"norm_lower": b.lower})
    lo, hi = shadow_norm_ensemble_bounds(p)
    s.extras.update({
        "kappa_sigma": p.sigma,
        "kappa_hat_sigma": p.hat_sigma,
        "shadow_stab1": shadow_norm_orbit_stab_observable(p, 1),
        "shadow_lower": lo,
        "shadow_upper": hi,
    })
    return s
