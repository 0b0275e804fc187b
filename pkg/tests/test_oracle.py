import numpy as np
import pytest

from artifact import oracle as orc
from artifact.lagrangian import enumerate_sigma
from artifact.moments import CubicFunction, sym_dim


@pytest.mark.parametrize("d", (3, 5, 7, 11, 13))
def test_stabilizer_state_count(d):
    st = orc.enumerate_stabilizer_states(1, d)
    assert len(st) == d * (d + 1)
    G = np.abs(np.array(st).conj() @ np.array(st).T) ** 2
    vals = set(np.round(G[np.triu_indices(len(st), 1)], 10))
    assert vals <= {0.0, round(1 / d, 10)}


def test_two_qutrit_stabilizer_states():
    st = orc.enumerate_stabilizer_states(2, 3)
    assert len(st) == 9 * 4 * 10
    Q = orc.moment_operator(st, 3)
    cat = enumerate_sigma(3)
    D = 9
    Rs = sum(orc.R_matrix(T, 2) for T in cat)
    assert np.abs(Q - Rs / (D * (D + 1) * (D + 3))).max() < 1e-10


def test_unsupported_enumeration():
    with pytest.raises(ValueError):
        orc.enumerate_stabilizer_states(2, 5)
    with pytest.raises(ValueError):
        orc.enumerate_clifford_group(11)


@pytest.mark.parametrize("d,size", [(3, 648), (5, 15000)])
def test_clifford_group(d, size):
    G = orc.enumerate_clifford_group(d)
    assert len(G) == size
    P = orc.enumerate_clifford_group(d, projective=True)
    assert len(P) == d ** 2 * d * (d * d - 1)
    X = orc.weyl(0, 1, d)
    Z = orc.weyl(1, 0, d)
    weyls = [orc.weyl(p, q, d) for p in range(d) for q in range(d)]
    for U in P[:: max(1, len(P) // 40)]:
        assert np.allclose(U.conj().T @ U, np.eye(d))
        for W in (X, Z):
            V = U @ W @ U.conj().T
            # image is a Weyl operator up to a phase
            assert any(abs(abs(np.trace(Wk.conj().T @ V)) - d) < 1e-8 for Wk in weyls)


def test_p_sym_and_basis():
    D = 3
    P = orc.p_sym(D)
    assert np.allclose(P @ P, P)
    assert round(np.trace(P)) == sym_dim(D)
    B = orc.sym_basis(D)
    assert np.allclose(B.T @ B, np.eye(sym_dim(D)))
    assert np.allclose(B @ B.T, P)


def test_dense_cap():
    with pytest.raises(ValueError):
        orc.p_sym(27)


def test_partial_trace_and_wrapper():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    B = rng.normal(size=(3, 3))
    M = np.kron(A, B)
    assert np.allclose(orc.partial_trace(M, [0], [2, 3]), A * np.trace(B))
    assert np.allclose(orc.partial_trace(M, [1], [2, 3]), B * np.trace(A))
    H = orc.DenseComplexMatrix(A + A.conj().T)
    assert H.is_hermitian() and H.dim == 2
    assert np.allclose(np.sort(H.eigvalsh()), np.linalg.eigvalsh(A + A.conj().T))
    assert np.allclose(np.asarray(H.tensor_power(2)), np.kron(np.asarray(H), np.asarray(H)))


@pytest.mark.parametrize("d", (3, 5))
def test_dual_frame_expansion_of_stabilizer_moment(d):
    Q = orc.moment_operator(orc.enumerate_stabilizer_states(1, d), 3)
    duals = orc.dual_frame(d, 1)
    st = orc.enumerate_stabilizer_states(1, d)[0]
    kap = [orc.kappa_bruteforce(st, T) for T in enumerate_sigma(d)]
    assert np.allclose(kap, 1.0)
    assert np.abs(Q - sum(duals)).max() < 1e-12


def test_kappa_factor_list_matches_dense():
    d = 3
    f = CubicFunction(3, 2, 1)
    v = np.kron(f.state_vector(), np.array([1, 0, 0]))
    for T in enumerate_sigma(d):
        assert abs(orc.kappa_bruteforce(v, T) - orc.kappa_bruteforce([f, np.array([1, 0, 0])], T)) < 1e-12


def test_moment_sym_matches_sym_restrict():
    d = 5
    st = orc.enumerate_stabilizer_states(1, d)
    a = orc.moment_sym(st)
    b = orc.sym_restrict(orc.moment_operator(st, 3), d)
    assert np.abs(a - b).max() < 1e-13
    c = orc.stab_sym_block(d) / (d * (d + 1) * (2 * d))
    assert np.abs(a - c).max() < 1e-13


def test_counts_total_and_zero():
    d = 7
    f = CubicFunction(7, 3, 1, 2, 5)
    for i in enumerate_sigma(d).ns:
        T = enumerate_sigma(d)[i]
        N = orc.count_all(f, T)
        assert N.sum() == d ** 3
        assert orc.count_solutions(f, T, 0) == 3 * d * d - 2 * d


def test_shadow_map_identity():
    D = 3
    Q = orc.p_sym(D) / sym_dim(D)
    O = np.diag([1.0, -1.0, 0.0])
    M = orc.shadow_map(Q * sym_dim(D), O)
    # tr_BC[P_sym (I x O x O)] = (tr(O)^2 I + 2 O^2 + ... ) / 6 for traceless O
    want = (np.trace(O @ O) * np.eye(D) + 2 * O @ O) / 6
    assert np.allclose(M, want)
