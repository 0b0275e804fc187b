"""Brute-force ground truth built from explicit matrices.

Nothing in this module uses the closed forms of ``moments`` or ``designs``;
it is the reference those modules are checked against.  Sizes are small by
design: dense operators on (C^D)^{(x)3} are only built when (D^3)^2 stays
under :data:`DENSE_ENTRY_CAP`.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .gf import field, _check_modulus
from .lagrangian import StochLagrangian, enumerate_sigma, rank_mod

__all__ = [
    "DENSE_ENTRY_CAP",
    "DenseComplexMatrix",
    "partial_trace",
    "tensor_power",
    "p_sym",
    "sym_basis",
    "r_matrix",
    "R_matrix",
    "gram_matrix",
    "dual_frame",
    "weyl",
    "enumerate_stabilizer_states",
    "moment_operator",
    "clifford_generators",
    "enumerate_clifford_group",
    "orbit_states",
    "orbit_moment",
    "kappa_bruteforce",
    "shadow_map",
    "count_solutions",
    "count_all",
    "stab_sym_block",
    "sym_restrict",
    "sym_coords",
    "moment_sym",
]

DENSE_ENTRY_CAP = 5_000_000


class DenseComplexMatrix:
    """Square complex matrix with the few operations the oracle needs."""

    def __init__(self, data):
        a = np.asarray(data, dtype=np.complex128)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        self.data = a

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return float(np.max(np.abs(self.data - self.data.conj().T), initial=0.0)) < tol

    def is_unitary(self, tol: float = 1e-10) -> bool:
        eye = np.eye(self.dim)
        return float(np.max(np.abs(self.data @ self.data.conj().T - eye))) < tol

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.data)

    def partial_trace(self, keep: Sequence[int], dims: Sequence[int]) -> "DenseComplexMatrix":
        return DenseComplexMatrix(partial_trace(self.data, keep, dims))

    def tensor_power(self, k: int) -> "DenseComplexMatrix":
        return DenseComplexMatrix(tensor_power(self.data, k))

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)


def partial_trace(M: np.ndarray, keep: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``."""
    dims = list(dims)
    k = len(dims)
    T = np.asarray(M).reshape(dims + dims)
    keep = sorted(keep)
    drop = [i for i in range(k) if i not in keep]
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = [letters[i] for i in range(k)]
    col = [letters[i].upper() for i in range(k)]
    for i in drop:
        col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    res = np.einsum("".join(row) + "".join(col) + "->" + out, T)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    return res.reshape(dk, dk)


def tensor_power(M: np.ndarray, k: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.asarray(M).dtype)
    for _ in range(k):
        out = np.kron(out, M)
    return out


def _check_dense(D: int) -> None:
    if (D ** 3) ** 2 > DENSE_ENTRY_CAP:
        raise ValueError(f"dense operators on (C^{D})^3 exceed the size cap")


def p_sym(D: int) -> np.ndarray:
    """Projector onto the symmetric subspace of (C^D)^{(x)3}."""
    _check_dense(D)
    n = D ** 3
    idx = np.arange(n).reshape(D, D, D)
    P = np.zeros((n, n))
    for perm in itertools.permutations(range(3)):
        P[np.arange(n), np.transpose(idx, perm).ravel()] += 1.0 / 6.0
    return P


@lru_cache(maxsize=16)
def sym_basis(D: int) -> np.ndarray:
    """Orthonormal real basis of Sym3(C^D) as columns, shape (D^3, pi)."""
    sidx, swt = _backend.sym_tables(D)
    pi = int(sidx.max()) + 1
    B = np.zeros((D ** 3, pi))
    B[np.arange(D ** 3), sidx] = swt
    B.setflags(write=False)
    return B


def r_matrix(T: StochLagrangian) -> np.ndarray:
    """r(T) = sum over (x; y) in T of |x><y| (real 0/1 matrix)."""
    d = T.d
    _check_dense(d)
    e = T.elements
    xi = (e[:, 0] * d + e[:, 1]) * d + e[:, 2]
    yi = (e[:, 3] * d + e[:, 4]) * d + e[:, 5]
    r = np.zeros((d ** 3, d ** 3))
    np.add.at(r, (xi, yi), 1.0)
    return r


def R_matrix(T: StochLagrangian, n: int = 1) -> np.ndarray:
    """R(T) = r(T)^{(x)n}, reordered so each of the three parties holds n qudits."""
    d = T.d
    D = d ** n
    _check_dense(D)
    r = r_matrix(T)
    if n == 1:
        return r
    big = tensor_power(r, n)
    # axes: (qudit i, party p) for rows then columns -> party-major
    shape = [d] * (6 * n)
    t = big.reshape(shape)
    row_axes = [i * 3 + p for p in range(3) for i in range(n)]
    col_axes = [3 * n + a for a in row_axes]
    return t.transpose(row_axes + col_axes).reshape(D ** 3, D ** 3)


def gram_matrix(d: int, n: int = 1) -> np.ndarray:
    """Gamma[T1, T2] = tr[R(T1)^dag R(T2)] for T1, T2 in Sigma(d).

    Single-qudit traces come from dense r(T) matrices when d <= 7 and from
    explicit element-set intersections otherwise; R(T) = r(T)^{(x)n} makes
    the n-qudit trace the n-th power.
    """
    cat = enumerate_sigma(d)
    m = len(cat)
    G1 = np.zeros((m, m))
    if d <= 7:
        rs = [r_matrix(T) for T in cat]
        for i in range(m):
            for j in range(m):
                G1[i, j] = np.sum(rs[i] * rs[j])
    else:
        sets = [{r.tobytes() for r in T.elements} for T in cat]
        for i in range(m):
            for j in range(m):
                G1[i, j] = len(sets[i] & sets[j])
    return G1 ** n


def dual_frame(d: int, n: int = 1) -> list:
    """Dense dual frame {R~(T)} in catalog order."""
    cat = enumerate_sigma(d)
    D = d ** n
    Rs = [R_matrix(T, n) for T in cat]
    R0 = sum(Rs[i] for i in cat.t0)
    R1 = sum(Rs[i] for i in cat.t1)
    out = []
    for T, R in zip(cat, Rs):
        if n == 1:
            out.append((R - R0 / (2 * d)) / (d ** 3 - d))
        else:
            Rj, Rjb = (R0, R1) if T.parity == 0 else (R1, R0)
            c = D * D - d * d
            out.append((R + d / c * Rj - D / c * Rjb) / (D ** 3 - D))
    return out


def weyl(p, q, d: int) -> np.ndarray:
    """Symmetric Weyl operator omega^{-p.q/2} Z^p X^q on (C^d)^{(x)n}."""
    p = np.atleast_1d(np.asarray(p, dtype=np.int64)) % d
    q = np.atleast_1d(np.asarray(q, dtype=np.int64)) % d
    half = pow(2, d - 2, d)
    w = np.exp(2j * np.pi / d)
    X = np.roll(np.eye(d), 1, axis=0)  # X|j> = |j+1>
    Zd = w ** np.arange(d)
    out = np.ones((1, 1), dtype=complex)
    for pi, qi in zip(p, q):
        out = np.kron(out, np.diag(Zd ** pi) @ np.linalg.matrix_power(X, int(qi)))
    return out * w ** (-(half * int(p @ q)) % d)


def _mub_states(d: int) -> list:
    w = np.exp(2j * np.pi / d)
    half = pow(2, d - 2, d)
    j = np.arange(d)
    states = [np.eye(d, dtype=complex)[k] for k in range(d)]
    for b in range(d):
        for k in range(d):
            states.append(w ** ((half * b * j * j + k * j) % d) / np.sqrt(d))
    return states


def _lagrangians(n: int, d: int) -> list:
    """Maximal isotropic subspaces of F_d^{2n} (rows of generator matrices)."""
    vecs = [np.array(v, dtype=np.int64) for v in itertools.product(range(d), repeat=2 * n)]

    def form(u, v):
        return int(u[:n] @ v[n:] - u[n:] @ v[:n]) % d

    seen = set()
    out = []
    for combo in itertools.combinations(range(1, len(vecs)), n):
        G = np.stack([vecs[i] for i in combo])
        if rank_mod(G, d) != n:
            continue
        if any(form(G[a], G[b]) for a in range(n) for b in range(a + 1, n)):
            continue
        from .lagrangian import rref_mod

        key = rref_mod(G, d).tobytes()
        if key in seen:
            continue
        seen.add(key)
        out.append(G)
    return out


def enumerate_stabilizer_states(n: int, d: int) -> list:
    """All stabilizer states: n = 1 for d <= 13, or n = 2 with d = 3."""
    d = _check_modulus(d)
    if n == 1 and d <= 13:
        return _mub_states(d)
    if not (n == 2 and d == 3):
        raise ValueError(f"stabilizer enumeration unsupported for n={n}, d={d}")
    D = d ** n
    w = np.exp(2j * np.pi / d)
    states = []
    keys = set()
    for G in _lagrangians(n, d):
        elems = _backend.span_elements(d, G)
        Ws = [weyl(v[:n], v[n:], d) for v in elems]
        for s in itertools.product(range(d), repeat=2 * n):
            s = np.array(s)
            P = np.zeros((D, D), dtype=complex)
            for v, W in zip(elems, Ws):
                ph = int(s[:n] @ v[n:] - s[n:] @ v[:n]) % d
                P += w ** ph * W
            P /= D
            key = np.round(P, 8).tobytes()
            if key in keys:
                continue
            keys.add(key)
            vals, vecs = np.linalg.eigh(P)
            states.append(vecs[:, -1])
    return states


def moment_operator(states: Iterable, t: int = 3, weights=None) -> np.ndarray:
    """Weighted average of (|psi><psi|)^{(x)t}; uniform weights by default."""
    if t not in (1, 2, 3):
        raise ValueError("t must be 1, 2 or 3")
    S = np.asarray(list(states), dtype=np.complex128)
    if weights is None:
        w = np.full(len(S), 1.0 / len(S))
    else:
        w = np.asarray(weights, dtype=float)
    V = S
    for _ in range(t - 1):
        V = np.einsum("ki,kj->kij", V, S).reshape(len(S), -1)
    return (V.T * w) @ V.conj()


def clifford_generators(d: int) -> dict:
    """Fourier, phase, multiplication (by nu) and the two Weyl shifts."""
    w = np.exp(2j * np.pi / d)
    j = np.arange(d)
    half = pow(2, d - 2, d)
    F = w ** np.outer(j, j) / np.sqrt(d)
    P = np.diag(w ** ((half * j * j) % d))
    nu = field(d).nu
    M = np.zeros((d, d))
    M[(nu * j) % d, j] = 1.0
    X = np.roll(np.eye(d), 1, axis=0)
    Z = np.diag(w ** j)
    return {"F": F, "P": P, "M": M.astype(complex), "X": X.astype(complex), "Z": Z}


def _phase_key(U: np.ndarray) -> bytes:
    flat = U.ravel()
    k = int(np.argmax(np.abs(flat) > 1e-6))
    V = U * (abs(flat[k]) / flat[k])
    V = np.round(V, 6) + (0.0 + 0.0j)  # fold -0.0 into 0.0
    return V.tobytes()


@lru_cache(maxsize=4)
def _projective_clifford(d: int) -> tuple:
    gens = clifford_generators(d)
    # symplectic part by closure over {F, P, M}
    sp = {_phase_key(np.eye(d, dtype=complex)): np.eye(d, dtype=complex)}
    frontier = list(sp.values())
    while frontier:
        nxt = []
        for U in frontier:
            for g in ("F", "P", "M"):
                V = gens[g] @ U
                k = _phase_key(V)
                if k not in sp:
                    sp[k] = V
                    nxt.append(V)
        frontier = nxt
    if len(sp) != d * (d * d - 1):
        raise AssertionError(f"symplectic closure has {len(sp)} elements")
    Xp = [np.linalg.matrix_power(gens["X"], a) for a in range(d)]
    Zp = [np.linalg.matrix_power(gens["Z"], b) for b in range(d)]
    out = [Zp[b] @ Xp[a] @ U for a in range(d) for b in range(d) for U in sp.values()]
    return tuple(out)


def enumerate_clifford_group(d: int, projective: bool = False) -> list:
    """Single-qudit Clifford group for d in {3, 5, 7}.

    With ``projective=True`` one representative per projective class is
    returned (d^2 |SL(2,d)| elements).  Otherwise each class appears with
    the d phases omega_d^k, giving d^3 |SL(2,d)| unitaries.
    """
    if d not in (3, 5, 7):
        raise ValueError("Clifford enumeration supports d in {3, 5, 7}")
    base = list(_projective_clifford(d))
    if projective:
        return base
    w = np.exp(2j * np.pi / d)
    return [w ** k * U for k in range(d) for U in base]


def orbit_states(psi: np.ndarray, d: int) -> np.ndarray:
    """U psi for every projective Clifford U (rows)."""
    group = np.stack(_projective_clifford(d))
    return np.einsum("gij,j->gi", group, np.asarray(psi, dtype=complex))


def orbit_moment(psi: np.ndarray, d: int) -> np.ndarray:
    """Average of (U|psi><psi|U^dag)^{(x)3} over the Clifford group (n = 1)."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return moment_operator(orbit_states(psi, d), 3)


def _as_vector(f) -> np.ndarray:
    if hasattr(f, "state_vector"):
        return f.state_vector()
    return np.asarray(f, dtype=complex)


def kappa_bruteforce(state, T: StochLagrangian) -> float:
    """kappa = tr[R(T) (|Psi><Psi|)^{(x)3}].

    ``state`` is either a list of single-qudit factors (vectors or objects
    with ``state_vector()``), whose per-factor values are multiplied, or one
    vector on (C^d)^{(x)n}, handled with a dense R(T).
    """
    d = T.d
    if isinstance(state, (list, tuple)):
        val = 1.0 + 0j
        for f in state:
            v = _as_vector(f)
            if v.shape != (d,):
                raise ValueError("factors must be single-qudit vectors")
            val *= _backend.kappa_sum(T.elements, v)
    else:
        v = _as_vector(state)
        n = int(round(np.log(len(v)) / np.log(d)))
        if n == 1:
            val = _backend.kappa_sum(T.elements, v)
        else:
            V = tensor_power(v.reshape(-1, 1), 3).ravel()
            val = V.conj() @ R_matrix(T, n) @ V
    if abs(val.imag) >= 1e-8:
        raise ArithmeticError(f"kappa has imaginary part {val.imag}")
    return float(val.real)


def shadow_map(Q: np.ndarray, O: np.ndarray) -> np.ndarray:
    """tr_BC[Q (I (x) O (x) O^dag)]."""
    O = np.asarray(O, dtype=complex)
    D = O.shape[0]
    if Q.shape != (D ** 3, D ** 3):
        raise ValueError("dimension mismatch between Q and O")
    Qt = np.asarray(Q).reshape([D] * 6)
    # Q[a b c, a' b' c'] O[b', b] Odag[c', c]
    return np.einsum("abcxyz,yb,zc->ax", Qt, O, O.conj().T)


def count_all(f, T: StochLagrangian) -> np.ndarray:
    """N_alpha(f, T) for every alpha, by iterating the d^3 elements of T."""
    coeffs = f.coefficients if hasattr(f, "coefficients") else f
    return _backend.cubic_diff_counts(T.d, T.elements, np.asarray(coeffs, dtype=np.int64))


def count_solutions(f, T: StochLagrangian, alpha: int) -> int:
    """|{(x; y) in T : f(y) - f(x) = alpha}|."""
    return int(count_all(f, T)[int(alpha) % T.d])


def stab_sym_block(d: int, weights=None) -> np.ndarray:
    """B^T [sum_T w_T r(T)] B on Sym3(C^d) without forming d^3 x d^3 matrices."""
    cat = enumerate_sigma(d)
    sidx, swt = _backend.sym_tables(d)
    pi = int(sidx.max()) + 1
    out = np.zeros((pi, pi))
    w = np.ones(len(cat)) if weights is None else np.asarray(weights, dtype=float)
    for T, wt in zip(cat, w):
        if wt != 0:
            _backend.sym_block(d, T.elements, sidx, swt, out, float(wt))
    return out


def sym_restrict(M: np.ndarray, D: int) -> np.ndarray:
    """B^T M B with B the orthonormal Sym3 basis."""
    B = sym_basis(D)
    return B.T @ M @ B


def sym_coords(psi: np.ndarray) -> np.ndarray:
    """Coordinates of psi^{(x)3} in the orthonormal Sym3 basis (single qudit)."""
    psi = np.asarray(psi, dtype=complex)
    D = len(psi)
    sidx, swt = _backend.sym_tables(D)
    V = np.einsum("i,j,k->ijk", psi, psi, psi).ravel()
    pi = int(sidx.max()) + 1
    return np.bincount(sidx, weights=(swt * V).real, minlength=pi) + 1j * np.bincount(
        sidx, weights=(swt * V).imag, minlength=pi)


def moment_sym(states: Iterable, weights=None) -> np.ndarray:
    """Third moment restricted to Sym3, built from Sym3 coordinates only."""
    C = np.stack([sym_coords(s) for s in states])
    w = np.full(len(C), 1.0 / len(C)) if weights is None else np.asarray(weights, dtype=float)
    return (C.T * w) @ C.conj()
