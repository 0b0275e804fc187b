import os
import subprocess
import sys

import numpy as np
import pytest

from artifact import _backend, _pycore
from artifact.lagrangian import enumerate_sigma

core = pytest.importorskip("artifact._core")


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")


def test_forced_python_backend():
    env = dict(os.environ, QDL_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import artifact; print(artifact.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@pytest.mark.parametrize("d", (5, 7, 13, 31))
def test_gauss_sum_parity(d):
    for m in (2, 3):
        for a in range(1, d):
            assert abs(core.gauss_sum(d, a, m) - _pycore.gauss_sum(d, a, m)) < 1e-9


@pytest.mark.parametrize("d", (3, 7, 11))
def test_span_and_counts_parity(d):
    rng = np.random.default_rng(d)
    for T in enumerate_sigma(d):
        a = core.span_elements(d, T.generators)
        b = _pycore.span_elements(d, T.generators)
        assert np.array_equal(np.asarray(a), np.asarray(b))
        coeffs = rng.integers(0, d, 4).astype(np.int64)
        coeffs[0] = 1
        assert np.array_equal(np.asarray(core.cubic_diff_counts(d, a, coeffs)),
                              np.asarray(_pycore.cubic_diff_counts(d, b, coeffs)))


@pytest.mark.parametrize("d", (3, 5, 7))
def test_kappa_and_sym_block_parity(d):
    rng = np.random.default_rng(1)
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    psi /= np.linalg.norm(psi)
    sidx, swt = _pycore.sym_tables(d)
    pi = int(sidx.max()) + 1
    for T in enumerate_sigma(d):
        assert abs(core.kappa_sum(T.elements, psi) - _pycore.kappa_sum(T.elements, psi)) < 1e-12
        A = np.zeros((pi, pi))
        B = np.zeros((pi, pi))
        core.sym_block(d, T.elements, sidx, swt, A, 0.5)
        _pycore.sym_block(d, T.elements, sidx, swt, B, 0.5)
        assert np.abs(A - B).max() < 1e-12
