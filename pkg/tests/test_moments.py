from fractions import Fraction

import numpy as np
import pytest

from artifact.charsums import gauss_g, tilde_g
from artifact.gf import field
from artifact.lagrangian import enumerate_sigma
from artifact.moments import (
    CubicFunction,
    EnsembleSpec,
    KappaProfile,
    MagicStateSpec,
    balanced_moment_spectrum,
    frame_potential3,
    gamma_dk,
    kappa_profile,
    kappa_single,
    moment_norm_bounds,
    phi3_stab,
    shadow_norm_ensemble_bounds,
    shadow_norm_orbit_stab_observable,
    shadow_norm_stab_projector,
    stab_moment_spectrum,
    stabilizer_profile,
    summarize,
    sym_dim,
)

# Values computed once by the brute-force Clifford-orbit oracle (n = 1) and frozen.
ORACLE_MAGIC = {
    # d: (phi3, ||Qbar||, ||Qbar - P||, shadow norm of |0><0| - I/d)
    3: (1.0030864197530878, 1.111111111111112, 0.11111111111111205, 1.333333333333335),
    5: (1.0009999999999968, 1.0499999999999996, 0.0499999999999996, 1.6800000000000013),
    7: (1.0185314763684106, 1.1884402052221446, 0.18844020522214455, 2.641443322927826),
}


def canon(d, n=1, k=1):
    return MagicStateSpec(d, n, (CubicFunction.canonical(d),) * k)


def test_cubic_function_validation():
    with pytest.raises(ValueError):
        CubicFunction(5, 0)
    with pytest.raises(ValueError):
        CubicFunction(3, 3)
    with pytest.raises(ValueError):
        CubicFunction(3, 1, 0, 1)
    f = CubicFunction(3, 4, 2)
    assert f.coefficients == (1, 0, 0, 0)
    assert np.isclose(np.linalg.norm(f.state_vector()), 1)
    with pytest.raises(ValueError):
        MagicStateSpec(5, 1, (CubicFunction(5, 1), CubicFunction(5, 2)))


def test_class_vector():
    d = 7
    nu = field(d).nu
    s = MagicStateSpec(d, 4, (CubicFunction(d, 1), CubicFunction(d, nu), CubicFunction(d, nu * nu % d)))
    assert s.class_vector == (1, 1, 1) and sum(s.class_vector) == s.k


@pytest.mark.parametrize("d", (3, 5, 11))
def test_kappa_single_d_not_1_mod_3(d):
    cat = enumerate_sigma(d)
    f = CubicFunction.canonical(d)
    for T in cat:
        assert kappa_single(f, T) == pytest.approx(1.0 if T.is_sym else 2 / d, abs=1e-15)


def test_kappa_single_d7_multiset():
    d = 7
    cat = enumerate_sigma(d)
    f = CubicFunction.canonical(d)
    vals = sorted({round(kappa_single(f, cat[i]), 12) for i in cat.ns})
    nu = field(d).nu
    want = sorted(round(gauss_g(3, 3 * pow(nu, j, d) % d, d).real ** 2 / 49, 12) for j in range(3))
    assert set(vals) <= set(want)
    assert sum(want) == pytest.approx(6 / 7, abs=1e-12)


@pytest.mark.parametrize("d", (3, 5, 7))
def test_closed_forms_match_frozen_oracle(d):
    phi, qn, dev, sh = ORACLE_MAGIC[d]
    p = kappa_profile(canon(d))
    assert frame_potential3(p) == pytest.approx(phi, abs=1e-10)
    b = moment_norm_bounds(p)
    assert b.exact and b.lower == pytest.approx(qn, abs=1e-10)
    assert b.dev_lower - 1e-10 <= dev <= b.dev_upper + 1e-10
    assert shadow_norm_orbit_stab_observable(p, 1) == pytest.approx(sh, abs=1e-10)


def test_stabilizer_profile():
    for d in (3, 5, 7):
        for n in (1, 2, 3):
            p = stabilizer_profile(d, n)
            D = d ** n
            assert p.sigma == 2 * d + 2
            assert np.allclose(p.hat, (D + 2) / (D + d))
            assert frame_potential3(p) == pytest.approx(float(phi3_stab(n, d)), abs=1e-12)
    assert phi3_stab(1, 3) == Fraction(10, 9)


@pytest.mark.parametrize("d", (2, 3, 5, 7, 11, 13))
@pytest.mark.parametrize("n", (1, 2, 3))
def test_stab_spectrum_multiplicities(d, n):
    s = stab_moment_spectrum(n, d)
    D = d ** n
    assert sum(m for _, m in s.eigenvalues) == sym_dim(D)
    tr = sum(v * m for v, m in s.eigenvalues)
    assert tr == pytest.approx(sym_dim(D), rel=1e-12)  # tr Qbar = pi
    assert s.phi3 >= 1


def test_stab_spectrum_examples():
    assert stab_moment_spectrum(1, 5).norm == pytest.approx(7 / 5)
    s = stab_moment_spectrum(1, 3)
    assert s.eigenvalues[0] == (pytest.approx(5 / 3), 2)


@pytest.mark.parametrize("d", (3, 5, 7, 11, 13))
@pytest.mark.parametrize("n", (1, 2, 3))
def test_balanced_reproduces_stabilizer(d, n):
    a = balanced_moment_spectrum(Fraction(1), n, d)
    b = stab_moment_spectrum(n, d)
    assert a.norm == pytest.approx(b.norm, rel=1e-12)
    assert a.dev_upper == pytest.approx(b.dev_upper, rel=1e-12)
    assert sorted(a.eigenvalues) == pytest.approx(sorted(b.eigenvalues))


@pytest.mark.parametrize("d", (3, 5, 7, 13))
@pytest.mark.parametrize("n", (1, 2))
def test_balanced_design_point(d, n):
    D = d ** n
    s = balanced_moment_spectrum(Fraction(3, D + 2), n, d)
    assert all(v == 1 for v, _ in s.eigenvalues)
    assert s.phi3 == 1 and s.norm == 1 and s.dev_upper == 0


def test_balanced_d7_norm():
    assert balanced_moment_spectrum(Fraction(2, 7), 1, 7).norm == pytest.approx(15 / 14)


@pytest.mark.parametrize("d", (3, 5, 7, 11, 13))
@pytest.mark.parametrize("n", (1, 2, 3))
def test_balanced_dev_is_max_deviation(d, n):
    for kE in (Fraction(1, 50), Fraction(2, d), Fraction(1, 2), Fraction(1)):
        s = balanced_moment_spectrum(kE, n, d)
        assert s.dev_upper == pytest.approx(max(abs(v - 1) for v, _ in s.eigenvalues), abs=1e-12)
        assert s.norm == pytest.approx(max(v for v, _ in s.eigenvalues), abs=1e-12)
        assert sum(m for _, m in s.eigenvalues) == sym_dim(d ** n)


def _random_profile(rng, d, n):
    cat = enumerate_sigma(d)
    k = np.ones(len(cat))
    idx = list(cat.ns)
    k[idx] = rng.uniform(-0.2, 1.0, size=len(idx))
    return KappaProfile(d, n, k)


def test_hkaka_identities_random():
    rng = np.random.default_rng(5)
    for _ in range(100):
        d = int(rng.choice([3, 5, 7, 11, 13]))
        n = int(rng.integers(1, 4))
        p = _random_profile(rng, d, n)
        D = p.D
        assert p.hat_sigma == pytest.approx((D + 2) / (D + d) * p.sigma, abs=1e-12)
        assert p.hat_sigma == pytest.approx(6 + (D - 1) / (D + 2) * p.hat_ns, abs=1e-12)
        assert p.hat_delta == pytest.approx(1 - p.hat_ns / (2 * (D + 2)), abs=1e-12)
        assert p.t0 == pytest.approx(p.t0)  # both sums exist


def test_kappa_t0_equals_t1_for_states():
    for d in (5, 7, 13):
        p = kappa_profile(canon(d, 2, 2))
        assert p.t0 == pytest.approx(p.t1, abs=1e-12)


def test_stab_projector_shadow():
    v, r = shadow_norm_stab_projector(1, 3, 1)
    assert v == Fraction(16, 9)
    for d in (2, 3, 5, 7):
        for n in (1, 2, 3):
            D = d ** n
            K = 1
            while K * d <= D:
                v, r = shadow_norm_stab_projector(n, d, K)
                assert r == Fraction(D + 1, D + d) * (d - 1 - Fraction(d, D) + Fraction(d, K))
                assert r <= 2 * d - 1
                if d > 2:
                    p = stabilizer_profile(d, n)
                    assert shadow_norm_orbit_stab_observable(p, K) == pytest.approx(float(v), rel=1e-12)
                K *= d
    with pytest.raises(ValueError):
        shadow_norm_stab_projector(1, 3, 3)
    with pytest.raises(ValueError):
        shadow_norm_stab_projector(2, 3, 2)


def test_ensemble_shadow_bounds():
    for d in (3, 5, 7, 13):
        for n in (1, 2, 3):
            D = d ** n
            lo, hi = shadow_norm_ensemble_bounds(stabilizer_profile(d, n))
            assert hi == pytest.approx((D + 1) * (2 * d - 1) / (D + d))
            assert lo <= hi
    lo, hi = shadow_norm_ensemble_bounds(kappa_profile(canon(5)))
    assert hi <= 3 + 4 * 3 / 5 + 1e-12 <= 7.5
    for d in (7, 13, 19):
        for k in (1, 2, 3):
            lo, hi = shadow_norm_ensemble_bounds(kappa_profile(canon(d, k, k)))
            assert lo <= hi <= 3 + float(gamma_dk(d, k)) + 1e-12


def test_gamma_dk():
    assert gamma_dk(7, 1) == Fraction(9, 2)
    assert gamma_dk(7, 2) == Fraction(16 * 15, 16 * 7)
    assert gamma_dk(7, 5) == Fraction(4 ** 5 * 13, 16 * 7 ** 4)


def test_ensemble_profile_is_weighted_sum():
    d = 7
    nu = field(d).nu
    specs = [MagicStateSpec(d, 1, (CubicFunction(d, pow(nu, j, d)),)) for j in range(3)]
    E = EnsembleSpec.uniform(specs)
    p = kappa_profile(E)
    assert p.is_balanced()
    assert p.kappa_E == pytest.approx(2 / 7, abs=1e-12)
    with pytest.raises(ValueError):
        EnsembleSpec(((specs[0], 0.3), (specs[1], 0.3)))


def test_summary_fields():
    s = summarize(kappa_profile(canon(13, 2, 1)))
    d = s.as_dict()
    for key in ("norm", "dev_lower", "dev_upper", "phi3", "shadow_upper", "shadow_lower"):
        assert key in d
    assert d["dev_lower"] <= d["dev_upper"]


def test_magic_norm_envelope_d1():
    # d^{n-2k}/3^{2k+1} <= ||Qbar|| for canonical magic states, d = 1 mod 3
    for d in (7, 13, 19):
        for n in (1, 2, 3, 4):
            for k in range(1, n + 1):
                b = moment_norm_bounds(kappa_profile(canon(d, n, k)))
                assert b.upper >= d ** (n - 2 * k) / 3 ** (2 * k + 1) - 1e-12


def test_tilde_g_controls_kappa_product():
    d = 13
    cat = enumerate_sigma(d)
    nu = field(d).nu
    prod = 1.0
    for j in range(3):
        prod *= gauss_g(3, 3 * pow(nu, j, d) % d, d).real ** 2 / d ** 2
    assert prod == pytest.approx(tilde_g(d).sq / d ** 4, rel=1e-10)
