import math
from fractions import Fraction

import numpy as np
import pytest

from artifact.charsums import tilde_g
from artifact.designs import (
    DesignRecipe,
    DesignComponent,
    balanced_ensemble,
    default_n_max,
    design_recipe,
    exact3design_table,
    exact_design_balanced,
    exact_design_qutrit,
    exact_weight_d2mod3,
    gammaB_dk,
    k_min,
    k_star,
    kappa_dk,
    qutrit_design_angle,
    recipe_moment_oracle,
    s_set,
    two_orbit_accurate_design,
)
from artifact.gf import odd_primes
from artifact.lagrangian import enumerate_sigma
from artifact.moments import KappaProfile, kappa_profile, moment_norm_bounds
from artifact.oracle import kappa_bruteforce, p_sym


def test_exact_weight():
    assert exact_weight_d2mod3(5, 1, 1) == Fraction(1, 21)
    for n in (1, 2, 3):
        for k in range(1, n + 1):
            assert exact_weight_d2mod3(3, n, k) is None
    assert exact_weight_d2mod3(5, 2, 1) is None
    assert exact_weight_d2mod3(5, 2, 2) is None
    for d in (11, 17, 23):
        assert exact_weight_d2mod3(d, 1, 1) > 0
    with pytest.raises(ValueError):
        exact_weight_d2mod3(7, 1, 1)


def test_qutrit_angles():
    a = qutrit_design_angle(1)
    assert a.product == a.single
    for phi in a.product:
        h = math.cos(phi) ** 3 - math.sin(phi) ** 3
        assert abs(abs(h) - math.sqrt(3 / 5)) < 1e-11
    a2 = qutrit_design_angle(2)
    for phi in a2.product:
        h = math.cos(phi) ** 3 - math.sin(phi) ** 3
        assert abs(abs(h) - (3 / 11) ** 0.25) < 1e-11
    for phi in a2.single:
        h = math.cos(phi) ** 3 - math.sin(phi) ** 3
        assert abs(abs(h) - (3 / 11) ** 0.5) < 1e-11


def test_qutrit_kappa_on_defect():
    cat = enumerate_sigma(3)
    for phi in qutrit_design_angle(1).product:
        v = np.array([math.cos(phi), -math.sin(phi), 0.0])
        for i in cat.ns:
            assert abs(kappa_bruteforce(v, cat[i]) - 3 / 5) < 1e-10


def test_kappa_dk():
    assert kappa_dk(7, 1) == Fraction(2, 7)
    assert kappa_dk(7, 2) == Fraction(3, 49)
    assert kappa_dk(7, 3) == Fraction(1, 2401)
    assert kappa_dk(13, 3) == Fraction(25, 13 ** 4)
    assert gammaB_dk(7, 1) == pytest.approx(4 * 5 / 7)


@pytest.mark.parametrize("d", [7, 13, 19])
@pytest.mark.parametrize("n,k", [(1, 1), (2, 2), (3, 3), (4, 4), (4, 2)])
def test_balanced_ensemble_kappa(d, n, k):
    p = kappa_profile(balanced_ensemble(d, n, k))
    assert p.is_balanced(1e-10)
    assert p.kappa_E == pytest.approx(float(kappa_dk(d, k)), abs=1e-10)


def test_balanced_ensemble_shapes():
    assert len(balanced_ensemble(7, 3, 3).items) == 1
    assert len(balanced_ensemble(7, 1, 1).items) == 3
    assert len(balanced_ensemble(7, 2, 2).items) == 3


def test_k_star_basic():
    for d in [p for p in odd_primes(400) if p % 3 == 1]:
        assert k_star(d, 1) == 1
        assert k_star(d, 2) == 3
        for n in range(1, 20):
            assert k_star(d, n) >= 3 * n / 4


def test_k_star_piecewise_for_unit_tilde_g():
    for d in (7, 61, 331, 547):
        assert tilde_g(d).sq == 1
        for n in range(1, 60):
            c = math.ceil(3 * n / 4)
            assert k_star(d, n) == (c + 1 if n % 4 == 2 else c)


def test_s_sets():
    assert s_set(7, 30) == frozenset(range(1, 31)) - {2}
    assert s_set(37) == {1}
    assert s_set(43) == {1, 3, 4, 6}
    assert default_n_max(997) == math.ceil(997 * math.log(3) + 5)


def test_exact3design_table_rows_sorted():
    rows = exact3design_table(200)
    assert [r[0] for r in rows] == sorted(r[0] for r in rows)


def test_exact_design_balanced():
    r = exact_design_balanced(7, 1, 1)
    assert r.is_exact_analytic() and r.orbit_count == 4
    r3 = exact_design_balanced(7, 3)
    assert r3.is_exact_analytic() and r3.orbit_count == 2
    assert exact_design_balanced(37, 2) is None


def test_design_oracle_n1():
    for d in (3, 5, 7):
        r = design_recipe(d, 1)
        assert r.certification == "exact"
        assert np.abs(recipe_moment_oracle(r) - p_sym(d)).max() < 1e-9


def test_two_orbit_accurate_design():
    for d in (7, 13, 19, 37):
        for n in (2, 3, 4):
            km, j = k_min(d, n)
            from artifact.designs import _single_magic

            r = two_orbit_accurate_design(_single_magic(d, n, n, j))
            D = d ** n
            p = r.metrics["p"]
            assert 0 <= p <= 21 / (4 * D)
            assert r.metrics["qnorm"] <= r.metrics["qnorm_upper_gamma"] + 1e-12
            assert r.metrics["dev_upper"] <= r.metrics["dev_upper_gamma"] + 1e-12
            mixed = KappaProfile(d, n, (1 - p) * kappa_profile(_single_magic(d, n, n, j)).kappa + p)
            assert abs(mixed.hat_def) < 1e-12
            b = moment_norm_bounds(mixed)
            assert b.exact and b.lower == pytest.approx(r.metrics["qnorm"], rel=1e-12)
            assert r.orbit_count == 2


def test_two_orbit_rejects_bad_fiducial():
    from artifact.designs import _single_magic

    with pytest.raises(ValueError):
        two_orbit_accurate_design(_single_magic(13, 3, 1, 2))


def test_recipe_validation():
    with pytest.raises(ValueError):
        DesignRecipe(5, 1, [DesignComponent("stabilizer", 0.5)], "exact")
    with pytest.raises(ValueError):
        DesignRecipe(5, 1, [DesignComponent("stabilizer", 1.0)], "maybe")
