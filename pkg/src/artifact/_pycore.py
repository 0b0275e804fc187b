"""Pure numpy implementations of the hot kernels.

These mirror the compiled kernels in ``_core.pyx`` one for one and are used
when the extension is unavailable (or when ``QDL_BACKEND=python``).
"""

from __future__ import annotations

import numpy as np


def gauss_sum(d: int, a: int, m: int) -> complex:
    """sum_b exp(2 pi i a b^m / d)."""
    b = np.arange(d, dtype=np.int64)
    e = (a * np.array([pow(int(x), m, d) for x in b], dtype=np.int64)) % d
    return complex(np.exp(2j * np.pi * e / d).sum())


def span_elements(d: int, gens: np.ndarray) -> np.ndarray:
    """All d**k integer combinations of the rows of ``gens`` (mod d)."""
    gens = np.asarray(gens, dtype=np.int64)
    k = gens.shape[0]
    coef = np.indices((d,) * k).reshape(k, -1).T
    return (coef @ gens) % d


def cubic_diff_counts(d: int, elems: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Histogram over alpha of f(y) - f(x) for (x; y) in ``elems``.

    ``coeffs`` = (c3, c2, c1, c0); rows of ``elems`` are (x1,x2,x3,y1,y2,y3).
    """
    c3, c2, c1, c0 = (int(c) for c in coeffs)
    e = np.asarray(elems, dtype=np.int64)

    def f(u):
        return (((c3 * u + c2) % d * u + c1) % d * u + c0) % d

    diff = (f(e[:, 3:]).sum(axis=1) - f(e[:, :3]).sum(axis=1)) % d
    return np.bincount(diff, minlength=d).astype(np.int64)


def sym_tables(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric-subspace index and weight for each of the d**3 triples."""
    idx = np.empty(d ** 3, dtype=np.int64)
    wt = np.empty(d ** 3, dtype=np.float64)
    lookup: dict = {}
    counts: dict = {}
    for a in range(d):
        for b in range(d):
            for c in range(d):
                key = tuple(sorted((a, b, c)))
                if key not in lookup:
                    lookup[key] = len(lookup)
                counts[key] = counts.get(key, 0) + 1
    for a in range(d):
        for b in range(d):
            for c in range(d):
                key = tuple(sorted((a, b, c)))
                i = (a * d + b) * d + c
                idx[i] = lookup[key]
                wt[i] = 1.0 / np.sqrt(counts[key])
    return idx, wt


def sym_block(d: int, elems: np.ndarray, sidx: np.ndarray, swt: np.ndarray,
              out: np.ndarray, scale: float = 1.0) -> None:
    """Accumulate scale * B^T r(T) B into ``out`` (B = orthonormal Sym3 basis)."""
    e = np.asarray(elems, dtype=np.int64)
    xi = (e[:, 0] * d + e[:, 1]) * d + e[:, 2]
    yi = (e[:, 3] * d + e[:, 4]) * d + e[:, 5]
    np.add.at(out, (sidx[xi], sidx[yi]), scale * swt[xi] * swt[yi])


def kappa_sum(elems: np.ndarray, psi: np.ndarray) -> complex:
    """sum over (x; y) of psi(y1)psi(y2)psi(y3) conj(psi(x1)psi(x2)psi(x3))."""
    e = np.asarray(elems, dtype=np.int64)
    p = np.asarray(psi, dtype=np.complex128)
    px = p[e[:, 0]] * p[e[:, 1]] * p[e[:, 2]]
    py = p[e[:, 3]] * p[e[:, 4]] * p[e[:, 5]]
    return complex(np.sum(py * np.conj(px)))
