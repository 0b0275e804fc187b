"""Exact and approximate complex projective 3-designs from Clifford orbits.

An ensemble of Clifford orbits is an exact 3-design iff its kappa profile
equals 3/(D+2) on every nonsymmetric T.  The constructions here mix magic
orbits with the stabilizer orbit to hit that value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .charsums import tilde_g
from .gf import field, is_prime, odd_primes, _check_modulus
from .lagrangian import enumerate_sigma
from .moments import (
    CubicFunction,
    EnsembleSpec,
    KappaProfile,
    MagicStateSpec,
    gamma_dk,
    kappa_profile,
    moment_norm_bounds,
    frame_potential3,
    shadow_norm_ensemble_bounds,
)

__all__ = [
    "DesignComponent",
    "DesignRecipe",
    "QutritAngles",
    "exact_weight_d2mod3",
    "exact_design_d2mod3",
    "qutrit_design_angle",
    "qutrit_state",
    "exact_design_qutrit",
    "kappa_dk",
    "gamma_dk",
    "gammaB_dk",
    "k_star",
    "s_set",
    "default_n_max",
    "exact3design_table",
    "balanced_ensemble",
    "design_probability",
    "exact_design_balanced",
    "k_min",
    "two_orbit_accurate_design",
    "design_recipe",
    "recipe_moment_oracle",
]


# ---------------------------------------------------------------------------
# recipes


@dataclass(frozen=True)
class DesignComponent:
    """One Clifford-orbit ingredient of a design.

    ``kind`` is 'stabilizer' (orbit of |0>^n), 'magic' (an EnsembleSpec of
    magic states) or 'qutrit' (the d = 3 family cos(phi)|0> - sin(phi)|1>,
    either on every qudit or on the first one only).
    """

    kind: str
    weight: Fraction | float
    ensemble: EnsembleSpec | None = None
    angle: float | None = None
    product: bool = True

    def fiducials(self, d: int, n: int) -> list:
        """[(state vector on (C^d)^n, weight within the component)]."""
        if self.kind == "stabilizer":
            v = np.zeros(d ** n, dtype=complex)
            v[0] = 1.0
            return [(v, 1.0)]
        if self.kind == "magic":
            return [(s.state_vector(), w) for s, w in self.ensemble.items]
        if self.kind == "qutrit":
            q = qutrit_state(self.angle)
            e0 = np.array([1.0, 0.0, 0.0], dtype=complex)
            v = np.ones(1, dtype=complex)
            for i in range(n):
                v = np.kron(v, q if (self.product or i == 0) else e0)
            return [(v, 1.0)]
        raise ValueError(f"unknown component kind {self.kind}")

    def describe(self) -> str:
        if self.kind == "stabilizer":
            return "stabilizer |0>^n"
        if self.kind == "qutrit":
            fam = "product" if self.product else "single"
            return f"qutrit phi={self.angle:.15g} family={fam}"
        parts = []
        for s, w in self.ensemble.items:
            fs = ";".join(f"({f.c3},{f.c2},{f.c1},{f.c0})" for f in s.factors)
            parts.append(f"{w:.15g}*[{fs}]")
        return "magic " + " + ".join(parts)


@dataclass
class DesignRecipe:
    """Weighted Clifford orbits plus a certificate."""

    d: int
    n: int
    components: list
    certification: str  # 'exact' or 'approximate'
    kappa_ns: Fraction | float | None = None
    metrics: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        ws = [c.weight for c in self.components]
        if any(w < 0 or w > 1 for w in ws) or abs(float(sum(ws)) - 1.0) > 1e-12:
            raise ValueError("component weights must lie in [0, 1] and sum to 1")
        if self.certification not in ("exact", "approximate"):
            raise ValueError("certification must be 'exact' or 'approximate'")

    @property
    def D(self) -> int:
        return self.d ** self.n

    @property
    def orbit_count(self) -> int:
        k = 0
        for c in self.components:
            k += len(c.ensemble.items) if c.kind == "magic" else 1
        return k

    def is_exact_analytic(self) -> bool:
        """Exact rational check kappa(mixture, T) = 3/(D+2) when available."""
        return isinstance(self.kappa_ns, Fraction) and self.kappa_ns == Fraction(3, self.D + 2)

    def lines(self) -> list:
        out = [f"d={self.d}", f"n={self.n}", f"certification={self.certification}",
               f"orbits={self.orbit_count}"]
        if self.kappa_ns is not None:
            out.append(f"kappa_ns={float(self.kappa_ns):.15g}")
            if isinstance(self.kappa_ns, Fraction):
                out.append(f"kappa_ns_exact={self.kappa_ns}")
        for i, c in enumerate(self.components):
            w = c.weight
            ws = f"{float(w):.15g}" + (f" ({w})" if isinstance(w, Fraction) else "")
            out.append(f"component{i}={c.describe()} weight={ws}")
        for k, v in self.metrics.items():
            out.append(f"{k}={v:.15g}" if isinstance(v, float) else f"{k}={v}")
        return out


# ---------------------------------------------------------------------------
# d != 1 mod 3


def exact_weight_d2mod3(d: int, n: int, k: int) -> Fraction | None:
    """Stabilizer-orbit weight w making {w: Stab, 1-w: magic} an exact 3-design.

    Returns None when w falls outside (0, 1), i.e. unless n = k = 1, d >= 5.
    """
    d = _check_modulus(d)
    if d % 3 == 1:
        raise ValueError("needs d != 1 mod 3")
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    D = d ** n
    w = Fraction(3 * d ** k - 2 ** k * (D + 2), (d ** k - 2 ** k) * (D + 2))
    return w if 0 < w < 1 else None


def exact_design_d2mod3(d: int, n: int = 1, k: int = 1) -> DesignRecipe | None:
    w = exact_weight_d2mod3(d, n, k)
    if w is None:
        return None
    spec = MagicStateSpec(d, n, tuple(CubicFunction.canonical(d) for _ in range(k)))
    kap = w + (1 - w) * Fraction(2, d) ** k
    return DesignRecipe(
        d, n,
        [DesignComponent("stabilizer", w),
         DesignComponent("magic", 1 - w, EnsembleSpec(((spec, 1.0),)))],
        "exact", kap,
    )


# ---------------------------------------------------------------------------
# qutrit family


@dataclass(frozen=True)
class QutritAngles:
    """Solutions phi in [0, 2 pi) for the two d = 3 families."""

    n: int
    product: tuple  # |psi(phi)>^{(x)n}
    single: tuple  # |psi(phi)> (x) |0>^{(x)(n-1)}


def qutrit_state(phi: float) -> np.ndarray:
    return np.array([math.cos(phi), -math.sin(phi), 0.0], dtype=complex)


def _h(phi: float) -> float:
    return math.cos(phi) ** 3 - math.sin(phi) ** 3


def _roots(target: float, grid: int = 4096, tol: float = 1e-12) -> list:
    """All phi in [0, 2 pi) with h(phi) = +-target, by bracketing and bisection."""
    out = []
    for t in (target, -target):
        xs = np.linspace(0.0, 2 * math.pi, grid + 1)
        vals = [_h(x) - t for x in xs]
        for a, b, fa, fb in zip(xs[:-1], xs[1:], vals[:-1], vals[1:]):
            if fa == 0.0:
                out.append(float(a))
                continue
            if fa * fb > 0:
                continue
            lo, hi, flo = float(a), float(b), fa
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                fm = _h(mid) - t
                if (fm < 0) == (flo < 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            out.append(0.5 * (lo + hi))
    out = sorted(x % (2 * math.pi) for x in out)
    dedup = []
    for x in out:
        if not dedup or x - dedup[-1] > 1e-9:
            dedup.append(x)
    if len(dedup) > 1 and dedup[0] + 2 * math.pi - dedup[-1] <= 1e-9:
        dedup.pop()
    return dedup


def qutrit_design_angle(n: int) -> QutritAngles:
    """Angles phi with cos^3 - sin^3 = +-(3/(D+2))^{1/(2n)} (product) or ^{1/2} (single)."""
    if n < 1:
        raise ValueError("n >= 1")
    D = 3 ** n
    c = 3 / (D + 2)
    return QutritAngles(n, tuple(_roots(c ** (1 / (2 * n)))), tuple(_roots(c ** 0.5)))


def exact_design_qutrit(n: int = 1, product: bool = True, which: int = 0) -> DesignRecipe:
    """Single Clifford orbit of the d = 3 qutrit family."""
    ang = qutrit_design_angle(n)
    phis = ang.product if product else ang.single
    phi = phis[which]
    k = _h(phi) ** 2
    kap = k ** n if product else k
    return DesignRecipe(3, n, [DesignComponent("qutrit", Fraction(1), angle=phi, product=product)],
                        "exact", kap)


# ---------------------------------------------------------------------------
# d = 1 mod 3


def _check_d1(d: int) -> int:
    d = _check_modulus(d)
    if d % 3 != 1:
        raise ValueError(f"needs d = 1 mod 3, got {d}")
    return d


def kappa_dk(d: int, k: int) -> Fraction:
    """kappa_{d,k} = (s_k + 1) g~^{2 floor(k/3)} / d^{k + floor(k/3)}."""
    d = _check_d1(d)
    if k < 1:
        raise ValueError("k >= 1")
    q, s = divmod(k, 3)
    return Fraction((s + 1) * tilde_g(d).sq ** q, d ** (k + q))


def gammaB_dk(d: int, k: int) -> float:
    """gamma^B_{d,k} = 4^{(k+2)/3} (d - 2) / d^k."""
    if k < 1:
        raise ValueError("k >= 1")
    return 4 ** ((k + 2) / 3) * (d - 2) / d ** k


def _kappa_le(d: int, g2: int, k: int, n: int) -> bool:
    """kappa_{d,k} <= 3/(d^n + 2), in integers."""
    q, s = divmod(k, 3)
    return (s + 1) * g2 ** q * (d ** n + 2) <= 3 * d ** (k + q)


def k_star(d: int, n: int, start: int = 1) -> int:
    """min{k >= 1 : kappa_{d,k} <= 3/(D+2)}, with no k <= n restriction."""
    d = _check_d1(d)
    g2 = tilde_g(d).sq
    k = max(1, start)
    while not _kappa_le(d, g2, k, n):
        k += 1
    return k


def default_n_max(d: int) -> int:
    return max(30, math.ceil(d * math.log(3) + 5))


def s_set(d: int, n_max: int | None = None) -> frozenset:
    """{n <= n_max : k*(d, n) <= n}."""
    d = _check_d1(d)
    n_max = default_n_max(d) if n_max is None else n_max
    out, k = set(), 1
    for n in range(1, n_max + 1):
        k = k_star(d, n, start=k)  # k* is nondecreasing in n
        if k <= n:
            out.add(n)
    return frozenset(out)


def _s_label(S: frozenset, n_max: int) -> str:
    if S == frozenset(range(1, n_max + 1)) - {2}:
        return "N\\{2}"
    return "{" + ",".join(str(x) for x in sorted(S)) + "}"


@lru_cache(maxsize=8)
def exact3design_table(dmax: int = 1000) -> tuple:
    """Rows (d, g~^2, S label, class id) for every d = 1 mod 3, d <= dmax.

    Class ids follow the order: N\\{2} first, then by |S| and content.
    """
    rows = []
    for d in odd_primes(dmax):
        if d % 3 != 1:
            continue
        n_max = default_n_max(d)
        S = s_set(d, n_max)
        rows.append((d, tilde_g(d).sq, _s_label(S, n_max), tuple(sorted(S))))
    labels = {}
    for _, _, lab, S in rows:
        labels.setdefault(lab, (0, 0, ()) if lab == "N\\{2}" else (1, len(S), S))
    order = {lab: i + 1 for i, lab in enumerate(sorted(labels, key=labels.get))}
    return tuple((d, g2, lab, order[lab]) for d, g2, lab, _ in rows)


def balanced_ensemble(d: int, n: int, k: int) -> EnsembleSpec:
    """k-balanced magic ensemble built from f_j = nu^j x^3."""
    d = _check_d1(d)
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    nu = field(d).nu
    f = [CubicFunction(d, pow(nu, j, d)) for j in range(3)]
    base = tuple(f) * (k // 3)
    s = k % 3
    if s == 0:
        return EnsembleSpec(((MagicStateSpec(d, n, base), 1.0),))
    states = []
    for j in range(3):
        head = (f[j],) if s == 1 else (f[(j + 1) % 3], f[(j + 2) % 3])
        states.append(MagicStateSpec(d, n, head + base))
    return EnsembleSpec.uniform(states)


def design_probability(hat_def, D: int, d: int):
    """p solving (1 - p) hat_def + (D + 2) p / (D + d) = 0."""
    c = Fraction(D + 2, D + d) if isinstance(hat_def, Fraction) else (D + 2) / (D + d)
    return -hat_def / (c - hat_def)


def _balanced_hat_def(kap: Fraction, n: int, d: int) -> Fraction:
    D = d ** n
    sigma = 6 + 2 * (d - 2) * kap
    return Fraction(D + 2, D - 1) * (kap - sigma / (2 * D + 2 * d))


def exact_design_balanced(d: int, n: int, k: int | None = None) -> DesignRecipe | None:
    """Balanced magic ensemble mixed with the stabilizer orbit, or None."""
    d = _check_d1(d)
    D = d ** n
    if k is None:
        k = k_star(d, n)
        if k > n:
            return None
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    kap = kappa_dk(d, k)
    if kap > Fraction(3, D + 2):
        return None
    p = design_probability(_balanced_hat_def(kap, n, d), D, d)
    mix = (1 - p) * kap + p
    E = balanced_ensemble(d, n, k)
    rec = DesignRecipe(
        d, n,
        [DesignComponent("magic", 1 - p, E), DesignComponent("stabilizer", p)],
        "exact", mix, metrics={"k": k, "p": float(p), "p_exact": str(p)},
    )
    if not rec.is_exact_analytic():
        raise ArithmeticError("balanced mixture failed the exact design criterion")
    return rec


def _single_magic(d: int, n: int, k: int, j: int) -> MagicStateSpec:
    nu = field(d).nu
    return MagicStateSpec(d, n, (CubicFunction(d, pow(nu, j, d)),) * k)


def _low_class(d: int) -> int:
    """j with kappa(f_j, T_def) < 1/d."""
    cat = enumerate_sigma(d)
    for j in range(3):
        p = kappa_profile(_single_magic(d, 1, 1, j))
        if p.kappa_def < 1 / d:
            return j
    raise ArithmeticError("no cubic class below 1/d")


def k_min(d: int, n: int) -> tuple:
    """(k_min, j): smallest k for which |psi_{f_j}>^{(x)k} (x) |0>^{(x)(n-k)} has hat kappa(T_def) <= 0."""
    d = _check_d1(d)
    j = _low_class(d)
    for k in range(1, n + 1):
        if kappa_profile(_single_magic(d, n, k, j)).hat_def <= 0:
            return k, j
    raise ArithmeticError(f"no k <= n satisfies the fiducial condition (d={d}, n={n})")


def two_orbit_accurate_design(E) -> DesignRecipe:
    """Mix E with the stabilizer orbit at the p that zeroes hat kappa on T_def."""
    prof: KappaProfile = kappa_profile(E)
    d, n, D = prof.d, prof.n, prof.D
    _check_d1(d)
    hd = prof.hat_def
    if hd > 1e-12 or float(np.min(prof.hat)) < hd - 1e-12:
        raise ValueError("ensemble violates the fiducial condition; raise k (see k_min)")
    if not isinstance(E, EnsembleSpec):
        E = EnsembleSpec(((E, 1.0),))
    p = max(0.0, design_probability(hd, D, d))
    kmin = float(np.min(prof.kappa))
    kprime_ns = prof.ns - 2 * (d - 2) * kmin
    metrics = {
        "p": p,
        "qnorm": 1 + (1 - p) * kprime_ns / 6,
        "dev_upper": (1 - p) * (D + 5) / (6 * (D - 1)) * kprime_ns,
    }
    if E.k:
        g = float(gamma_dk(d, E.k))
        metrics["qnorm_upper_gamma"] = 1 + g / 6
        metrics["dev_upper_gamma"] = (D + 5) * g / (6 * (D - 1))
    mixed = KappaProfile(d, n, (1 - p) * prof.kappa + p, k=E.k, label="mixture")
    metrics["phi3"] = frame_potential3(mixed)
    metrics["shadow_upper"] = shadow_norm_ensemble_bounds(mixed)[1]
    return DesignRecipe(
        d, n,
        [DesignComponent("magic", 1 - p, E), DesignComponent("stabilizer", p)],
        "approximate", None, metrics,
    )


def design_recipe(d: int, n: int, k: int | None = None) -> DesignRecipe | None:
    """Best construction available for (d, n): exact when possible."""
    d = _check_modulus(d)
    if d == 3:
        return exact_design_qutrit(n)
    if d % 3 == 2:
        if k is None:
            k = 1
        return exact_design_d2mod3(d, n, k)
    rec = exact_design_balanced(d, n, k)
    if rec is not None:
        return rec
    km, j = k_min(d, n)
    return two_orbit_accurate_design(_single_magic(d, n, k if k and k >= km else km, j))


def recipe_moment_oracle(recipe: DesignRecipe) -> np.ndarray:
    """Brute-force normalized third moment of a single-qudit recipe."""
    from .oracle import moment_operator, orbit_moment, enumerate_stabilizer_states

    if recipe.n != 1:
        raise ValueError("oracle check is limited to n = 1")
    d = recipe.d
    Q = np.zeros((d ** 3, d ** 3), dtype=complex)
    for c in recipe.components:
        w = float(c.weight)
        if c.kind == "stabilizer":
            Q += w * moment_operator(enumerate_stabilizer_states(1, d), 3)
            continue
        for v, wv in c.fiducials(d, 1):
            Q += w * wv * orbit_moment(v, d)
    D = d
    return Q * (D * (D + 1) * (D + 2) // 6)
