"""Chain geometry, generators, and the dipolar Hamiltonian."""
import numpy as np
import pytest

from spingrad import chain


def test_config_validation():
    with pytest.raises(ValueError):
        chain.ChainConfig(n_spins=1)
    with pytest.raises(ValueError):
        chain.ChainConfig(n_spins=3, spacing=0.0)


def test_phases_examples():
    cfg = chain.ChainConfig(n_spins=3)
    np.testing.assert_array_equal(
        chain.phases_at(cfg, chain.ParameterPoint(b0=0, g=0)), [0, 0, 0])
    np.testing.assert_allclose(
        chain.phases_at(cfg, chain.ParameterPoint(b0=0, g=np.pi / 100)),
        [0, np.pi / 100, 2 * np.pi / 100])
    cfg2 = chain.ChainConfig(n_spins=2, spacing=2.0)
    np.testing.assert_allclose(
        chain.phases_at(cfg2, chain.ParameterPoint(b0=1.0, g=0.5)), [1.0, 2.0])


def test_sensing_matrix():
    cfg = chain.ChainConfig(n_spins=4, spacing=0.5)
    m = chain.sensing_matrix(cfg)
    np.testing.assert_array_equal(m[:, 0], np.ones(4))
    np.testing.assert_array_equal(m[:, 1], [0, 0.5, 1.0, 1.5])
    assert np.linalg.matrix_rank(m) == 2


def test_generator_table_n2():
    t = chain.generator_table(chain.ChainConfig(n_spins=2))
    np.testing.assert_array_equal(t.lam_b, [1, 0, 0, -1])
    np.testing.assert_array_equal(t.lam_g, [0.5, -0.5, 0.5, -0.5])


def test_generator_table_n4_entry():
    t = chain.generator_table(chain.ChainConfig(n_spins=4))
    k = 0b0011
    assert t.lam_b[k] == 0
    assert t.lam_g[k] == -2


def test_generator_table_extremes():
    for n in (2, 3, 5, 6):
        cfg = chain.ChainConfig(n_spins=n)
        t = chain.generator_table(cfg)
        assert t.lam_b[0] == n / 2
        assert t.lam_g[0] == n * (n - 1) / 4


def test_bit_complement_antisymmetry():
    for n in (2, 3, 4, 5, 6):
        t = chain.generator_table(chain.ChainConfig(n_spins=n))
        np.testing.assert_allclose(t.lam_b + t.lam_b[::-1], 0, atol=1e-15)
        np.testing.assert_allclose(t.lam_g + t.lam_g[::-1], 0, atol=1e-15)


def test_generators_commute_exactly():
    t = chain.generator_table(chain.ChainConfig(n_spins=4))
    gb = np.diag(t.lam_b)
    gg = np.diag(t.lam_g)
    assert np.abs(gb @ gg - gg @ gb).max() == 0.0


def test_coupling_cubic_decay():
    ham = chain.dipolar_hamiltonian(chain.ChainConfig(n_spins=4))
    # pairs in lexicographic order: (0,1), (0,2), (0,3), (1,2), ...
    assert ham.pairs[0] == (0, 1) and ham.pairs[1] == (0, 2)
    assert ham.couplings[0] / ham.couplings[1] == pytest.approx(8.0, abs=1e-12)
    assert ham.couplings[0] / ham.couplings[2] == pytest.approx(27.0, abs=1e-9)


def test_hamiltonian_hermitian_and_conserves_magnetization():
    cfg = chain.ChainConfig(n_spins=5)
    ham = chain.dipolar_hamiltonian(cfg)
    assert np.abs(ham.dense - ham.dense.conj().T).max() < 1e-12
    mz = np.diag(2 * chain.generator_table(cfg).lam_b)
    assert np.abs(ham.dense @ mz - mz @ ham.dense).max() < 1e-12


def test_n2_bell_eigenstructure():
    """Singlet at 0, triplet-0 at -V, polarized pair at V/2."""
    ham = chain.dipolar_hamiltonian(chain.ChainConfig(n_spins=2))
    v = ham.nearest_coupling
    w, vecs = np.linalg.eigh(ham.dense)
    np.testing.assert_allclose(np.sort(w) / v, [-1.0, 0.0, 0.5, 0.5],
                               atol=1e-12)
    # |00> and |11> are eigenvectors at V/2
    for k in (0, 3):
        e = np.zeros(4, dtype=complex)
        e[k] = 1
        np.testing.assert_allclose(ham.dense @ e, 0.5 * v * e, atol=1e-16)


def test_exact_unitary_matches_eigh():
    ham = chain.dipolar_hamiltonian(chain.ChainConfig(n_spins=3))
    t = 0.3 / ham.nearest_coupling
    u = ham.exact_unitary(t)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(8), atol=1e-12)
    from scipy.linalg import expm
    np.testing.assert_allclose(u, expm(-1j * t * ham.dense), atol=1e-10)


def test_summands_sum_to_dense():
    ham = chain.dipolar_hamiltonian(chain.ChainConfig(n_spins=4))
    np.testing.assert_allclose(sum(ham.summands), ham.dense, atol=1e-15)
    assert len(ham.summands) == 6
