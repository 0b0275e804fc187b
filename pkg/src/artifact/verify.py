"""Oracle-versus-closed-form verification suites.

Each suite returns a list of :class:`Check` records.  A check compares a
brute-force quantity from :mod:`artifact.oracle` with the corresponding
closed form and stores the largest residual seen.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import oracle as orc
from .charsums import Character, gauss_G, gauss_g, tilde_g
from .designs import design_recipe, exact_design_balanced, exact_design_qutrit, recipe_moment_oracle
from .gf import field
from .lagrangian import enumerate_sigma
from .moments import (
    CubicFunction,
    MagicStateSpec,
    balanced_moment_spectrum,
    kappa_profile,
    kappa_single,
    phi3_stab,
    shadow_norm_orbit_stab_observable,
    shadow_norm_stab_projector,
    stab_moment_spectrum,
    stabilizer_profile,
    sym_dim,
)

__all__ = ["Check", "SUITES", "run_suite", "probe_conjectures", "ensemble_shadow_norm_search"]


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tol: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        extra = f" {self.detail}" if self.detail else ""
        return f"{tag} {self.name} residual={self.residual:.3e} tol={self.tol:.1e}{extra}"


def _rank(M: np.ndarray, rel: float = 1e-6) -> int:
    ev = np.linalg.eigvalsh(M)
    return int(np.sum(ev > rel * ev.max()))


def suite_gram() -> list:
    out = []
    for d in (3, 5, 7):
        for n, want in ((1, 2 * d + 1), (2, 2 * d + 2)):
            r = _rank(orc.gram_matrix(d, n))
            out.append(Check(f"gram rank d={d} n={n}", abs(r - want), 0.0, f"rank={r}"))
    return out


def _stab_moment_residuals(d: int) -> tuple:
    D = d
    Q = orc.moment_operator(orc.enumerate_stabilizer_states(1, d), 3)
    Rsum = sum(orc.r_matrix(T) for T in enumerate_sigma(d))
    res = float(np.abs(Q - Rsum / (D * (D + 1) * (D + d))).max())
    phi = sym_dim(D) * float(np.real(np.vdot(Q, Q)))
    return res, phi


def suite_stab_moment() -> list:
    out = []
    for d in (3, 5, 7, 11):
        res, phi = _stab_moment_residuals(d)
        out.append(Check(f"stabilizer moment n=1 d={d}", res, 1e-10))
        out.append(Check(f"frame potential n=1 d={d}", abs(phi - float(phi3_stab(1, d))), 1e-10,
                         f"phi3={phi:.15g}"))
    return out


def orbit_expansion_residual(n_states: int = 10, seed: int = 0) -> float:
    """Clifford orbit average vs sum_T kappa(T) dual(T) at d = 3, n = 1."""
    d = 3
    rng = np.random.default_rng(seed)
    group = np.stack(orc.enumerate_clifford_group(d))
    cat = enumerate_sigma(d)
    duals = orc.dual_frame(d, 1)
    worst = 0.0
    for _ in range(n_states):
        psi = rng.normal(size=d) + 1j * rng.normal(size=d)
        psi /= np.linalg.norm(psi)
        Q = orc.moment_operator(np.einsum("gij,j->gi", group, psi), 3)
        kap = [orc.kappa_bruteforce(psi, T) for T in cat]
        Qx = sum(k * R for k, R in zip(kap, duals))
        worst = max(worst, float(np.abs(Q - Qx).max()))
    return worst


def _random_cubic(rng, d: int) -> CubicFunction:
    return CubicFunction(d, int(rng.integers(1, d)), *(int(x) for x in rng.integers(0, d, 3)))


def suite_kappa_magic() -> list:
    out = []
    rng = np.random.default_rng(1)
    for d in (5, 11):
        cat = enumerate_sigma(d)
        worst = 0.0
        for _ in range(20):
            f = _random_cubic(rng, d)
            for i in cat.ns:
                worst = max(worst, abs(orc.kappa_bruteforce([f], cat[i]) - 2 / d))
        out.append(Check(f"magic kappa = 2/d d={d}", worst, 1e-10))
    for d in (7, 13):
        cat = enumerate_sigma(d)
        worst = 0.0
        for _ in range(20):
            f = _random_cubic(rng, d)
            for i in cat.ns:
                T = cat[i]
                g = gauss_g(3, T.cube_sum * f.c3 % d, d).real
                worst = max(worst, abs(orc.kappa_bruteforce([f], T) - g * g / d ** 2))
        out.append(Check(f"magic kappa Gauss class d={d}", worst, 1e-9))
        nu = field(d).nu
        k = [gauss_g(3, 3 * pow(nu, j, d) % d, d).real ** 2 / d ** 2 for j in range(3)]
        g2 = tilde_g(d).sq
        ident = max(abs(sum(k) - 6 / d),
                    abs(k[0] * k[1] + k[1] * k[2] + k[0] * k[2] - 9 / d ** 2),
                    abs(k[0] * k[1] * k[2] - g2 / d ** 4))
        out.append(Check(f"kappa order identities d={d}", ident, 1e-10))
        ks = sorted(k)
        ordered = 0 < ks[0] < 1 / d < ks[1] < 3 / d < ks[2] < 4 / d
        out.append(Check(f"kappa order intervals d={d}", 0.0 if ordered else 1.0, 0.0))
    out.append(Check("orbit expansion d=3 (648 Cliffords)", orbit_expansion_residual(), 1e-9))
    return out


def _match_spectrum(ev: np.ndarray, table: list, tol: float) -> tuple:
    """(max value residual, multiplicity mismatch count)."""
    ev = np.sort(ev)
    expect = np.sort(np.concatenate([np.full(m, v) for v, m in table]))
    if len(expect) != len(ev):
        return float("inf"), len(ev)
    vres = float(np.abs(ev - expect).max())
    bad = sum(abs(int(np.sum(np.abs(ev - v) <= tol)) - m) for v, m in table)
    return vres, bad


def suite_spectra() -> list:
    out = []
    for d in (3, 5, 7, 13):
        D = d
        Qs = sym_dim(D) * orc.moment_sym(orc.enumerate_stabilizer_states(1, d))
        ev = np.linalg.eigvalsh(Qs)
        s = stab_moment_spectrum(1, d)
        vres, bad = _match_spectrum(ev, s.eigenvalues, 1e-8)
        out.append(Check(f"stabilizer spectrum d={d}", vres, 1e-8))
        out.append(Check(f"stabilizer multiplicities d={d}", float(bad), 0.0))
        dev = float(np.abs(ev - 1).max())
        out.append(Check(f"stabilizer deviation d={d}", abs(dev - s.dev_upper), 1e-8))
    for d in (3, 5, 7):
        if d % 3 == 1:
            from .designs import balanced_ensemble

            E = balanced_ensemble(d, 1, 1)
            states = [s.state_vector() for s, _ in E.items]
            Q = sum(w * orc.orbit_moment(v, d) for v, (_, w) in zip(states, E.items))
            kE = kappa_profile(E).kappa_E
        else:
            f = CubicFunction.canonical(d)
            Q = orc.orbit_moment(f.state_vector(), d)
            kE = 2 / d
        ev = np.linalg.eigvalsh(orc.sym_restrict(Q * sym_dim(d), d))
        s = balanced_moment_spectrum(kE, 1, d)
        vres, bad = _match_spectrum(ev, s.eigenvalues, 1e-8)
        out.append(Check(f"balanced spectrum d={d}", vres, 1e-8))
        out.append(Check(f"balanced norm d={d}", abs(ev.max() - s.norm), 1e-8))
        out.append(Check(f"balanced deviation d={d}", abs(np.abs(ev - 1).max() - s.dev_upper), 1e-8))
    return out


def _shadow(Q: np.ndarray, D: int) -> float:
    O = np.zeros((D, D), dtype=complex)
    O[0, 0] = 1.0
    O -= np.eye(D) / D
    M = orc.shadow_map(Q * sym_dim(D), O)
    return 6 * (D + 1) / (D + 2) * float(np.linalg.norm(M, 2))


def suite_shadow() -> list:
    out = []
    for d in (3, 5, 7):
        Q = orc.moment_operator(orc.enumerate_stabilizer_states(1, d), 3)
        val = _shadow(Q, d)
        exact, _ = shadow_norm_stab_projector(1, d, 1)
        out.append(Check(f"stabilizer projector shadow norm d={d}", abs(val - float(exact)), 1e-10,
                         f"value={val:.15g}"))
        spec = MagicStateSpec(d, 1, (CubicFunction.canonical(d),))
        Qm = orc.orbit_moment(spec.state_vector(), d)
        out.append(Check(f"magic orbit stabilizer-observable shadow norm d={d}",
                         abs(_shadow(Qm, d) - shadow_norm_orbit_stab_observable(kappa_profile(spec), 1)),
                         1e-10))
    return out


def counts_closed_form(d: int, T, c3: int, alpha: int) -> int:
    """N_alpha(f, T) from the Gauss-sum formula (integer rounded)."""
    if alpha % d == 0:
        return 3 * d * d - 2 * d
    if d % 3 == 2:
        return d * d - 2 * d
    e3 = Character(d, 3, 1)
    G3 = gauss_G(e3, 1) ** 3
    arg = T.cube_sum * c3 * pow(alpha, d - 2, d) % d
    val = d * d - 2 * d + 2 * (e3(arg) * G3).real
    return int(round(val))


def suite_counts() -> list:
    out = []
    rng = np.random.default_rng(2)
    for d in (5, 7, 11, 13):
        cat = enumerate_sigma(d)
        worst = 0
        fs = [CubicFunction.canonical(d)] + [_random_cubic(rng, d) for _ in range(3)]
        for f in fs:
            for i in cat.ns:
                T = cat[i]
                got = orc.count_all(f, T)
                for a in range(d):
                    want = counts_closed_form(d, T, f.c3, a)
                    worst = max(worst, abs(int(got[a]) - want))
                    if d % 3 == 1 and a:
                        worst = max(worst, 0 if abs(int(got[a]) - (d * d - 2 * d)) <= 2 * d * d ** 0.5 else 1)
        out.append(Check(f"solution counts d={d}", float(worst), 0.0))
    return out


def suite_designs() -> list:
    out = []
    rec5 = design_recipe(5, 1)
    out.append(Check("exact design weight d=5 is 1/21",
                     0.0 if rec5.components[0].weight == Fraction(1, 21) else 1.0, 0.0))
    out.append(Check("exact design d=5 oracle", float(np.abs(recipe_moment_oracle(rec5) - orc.p_sym(5)).max()), 1e-9))
    rec3 = exact_design_qutrit(1)
    out.append(Check("qutrit design d=3 oracle", float(np.abs(recipe_moment_oracle(rec3) - orc.p_sym(3)).max()), 1e-9))
    rec7 = exact_design_balanced(7, 1, 1)
    out.append(Check("balanced design d=7 exact criterion", 0.0 if rec7.is_exact_analytic() else 1.0, 0.0,
                     f"kappa={rec7.kappa_ns}"))
    out.append(Check("balanced design d=7 oracle", float(np.abs(recipe_moment_oracle(rec7) - orc.p_sym(7)).max()), 1e-9))
    return out


SUITES = {
    "gram": suite_gram,
    "stab-moment": suite_stab_moment,
    "kappa-magic": suite_kappa_magic,
    "spectra": suite_spectra,
    "shadow": suite_shadow,
    "counts": suite_counts,
    "designs": suite_designs,
}


def run_suite(name: str) -> list:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()


# ---------------------------------------------------------------------------
# empirical probes of open conjectures (logged, never asserted)


def _traceless_hermitian_basis(D: int) -> np.ndarray:
    """Orthonormal (Hilbert-Schmidt) basis of traceless Hermitian D x D matrices."""
    out = []
    for i in range(D):
        for j in range(i + 1, D):
            E = np.zeros((D, D), dtype=complex)
            E[i, j] = E[j, i] = 1 / np.sqrt(2)
            out.append(E)
            F = np.zeros((D, D), dtype=complex)
            F[i, j], F[j, i] = -1j / np.sqrt(2), 1j / np.sqrt(2)
            out.append(F)
    for k in range(1, D):
        v = np.zeros(D)
        v[:k] = 1.0
        v[k] = -k
        out.append(np.diag(v / np.linalg.norm(v)).astype(complex))
    return np.stack(out)


def ensemble_shadow_norm_search(states: np.ndarray, weights=None, restarts: int = 20,
                                iters: int = 200, seed: int = 0) -> float:
    """Local maximum of 6(D+1)/(D+2) ||Qbar(O)|| over traceless Hermitian O, ||O||_2 = 1.

    Alternates between the top eigenvector phi of Qbar(O) and the best O for
    fixed phi, which is the top eigenvector of a real quadratic form.
    """
    S = np.asarray(states, dtype=complex)
    N, D = S.shape
    w = np.full(N, 1.0 / N) if weights is None else np.asarray(weights, dtype=float)
    pi = sym_dim(D)
    basis = _traceless_hermitian_basis(D)
    # a[j, b] = <psi_j| B_b |psi_j> (real)
    a = np.einsum("ji,bik,jk->jb", S.conj(), basis, S).real
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(restarts):
        phi = rng.normal(size=D) + 1j * rng.normal(size=D)
        phi /= np.linalg.norm(phi)
        val = 0.0
        for _ in range(iters):
            c = w * np.abs(S.conj() @ phi) ** 2
            M = (a.T * c) @ a
            ev, vec = np.linalg.eigh(M)
            x = vec[:, -1]
            o = a @ x
            Qo = (S.T * (w * o * o)) @ S.conj()
            e2, v2 = np.linalg.eigh(Qo)
            phi = v2[:, -1]
            if e2[-1] - val < 1e-14:
                val = e2[-1]
                break
            val = e2[-1]
        best = max(best, float(val))
    return 6 * (D + 1) / (D + 2) * pi * best


def probe_conjectures() -> list:
    """Lines reporting the numerical state of the two open conjectures."""
    lines = []
    for d in (3, 5, 7):
        D = d
        st = np.stack(orc.enumerate_stabilizer_states(1, d))
        found = ensemble_shadow_norm_search(st)
        conj = (D + 1) / (D + d) * (2 * d - 1 - d / D)
        lines.append(f"PROBE stabilizer shadow norm d={d} n=1 search={found:.12g} "
                     f"conjectured={conj:.12g} diff={found - conj:.2e}")
    rng = np.random.default_rng(99)
    for d, n in ((3, 1), (5, 1), (7, 1), (3, 2)):
        cat = enumerate_sigma(d)
        lo = np.inf
        for _ in range(200 if n == 1 else 20):
            psi = rng.normal(size=d ** n) + 1j * rng.normal(size=d ** n)
            psi /= np.linalg.norm(psi)
            lo = min(lo, min(orc.kappa_bruteforce(psi, T) for T in cat))
        lines.append(f"PROBE kappa lower bound d={d} n={n} min_kappa={lo:.6g} "
                     f"nonnegative={'yes' if lo >= -1e-12 else 'NO'}")
    return lines
