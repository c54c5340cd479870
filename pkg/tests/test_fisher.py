"""Fisher information machinery: probabilities, parameter shift, CFIM/QFIM."""
import numpy as np
import pytest

from spingrad import bounds, decoders, fisher, qsim
from spingrad.chain import ChainConfig, ParameterPoint, phases_at

RT2 = 1 / np.sqrt(2)


def random_probe(n, seed):
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    return psi / np.linalg.norm(psi)


def random_decoder(tier, n, rng):
    return decoders.DecoderSpec(
        tier, rng.normal(size=decoders.tier_param_count(tier, n)))


def plus_state(n):
    return qsim.apply_global_rotation(qsim.make_basis_state(n, 0), "y", np.pi / 2)


def test_ramsey_probabilities_single_qubit():
    # p(0) = (1 + sin phi)/2 under R_z(phi) then R_x(pi/2)
    for phi, expected in [(0.0, 0.5), (np.pi / 2, 1.0), (0.3, (1 + np.sin(0.3)) / 2)]:
        state = np.array([RT2, RT2], dtype=complex)
        state = qsim.apply_diagonal_phases(state, np.array([phi]))
        state = decoders.apply_decoder(state, decoders.ramsey_decoder())
        p = np.abs(state) ** 2
        assert p[0] == pytest.approx(expected, abs=1e-12)


def test_identity_decoder_hides_phases():
    cfg = ChainConfig(n_spins=3)
    probe = random_probe(3, 1)
    p = fisher.outcome_probabilities(probe, cfg, ParameterPoint(b0=0.4, g=0.2),
                                     decoder=None)
    np.testing.assert_allclose(p, np.abs(probe) ** 2, atol=1e-14)


def test_parameter_shift_matches_finite_difference():
    rng = np.random.default_rng(42)
    h = 1e-5
    for trial in range(12):
        n = int(rng.integers(2, 5))
        cfg = ChainConfig(n_spins=n)
        pt = ParameterPoint(b0=rng.normal(), g=rng.normal())
        tier = ("T1", "T2", "T3", "T4")[rng.integers(4)]
        dec = random_decoder(tier, n, rng)
        probe = random_probe(n, 1000 + trial)
        qubit = int(rng.integers(n))
        shift = fisher.parameter_shift_gradient(probe, cfg, pt, dec, qubit)
        phases = phases_at(cfg, pt)
        blocks = decoders.decoder_blocks(dec, n)
        plus, minus = phases.copy(), phases.copy()
        plus[qubit] += h
        minus[qubit] -= h
        fd = (fisher._probs(probe, n, plus, blocks)
              - fisher._probs(probe, n, minus, blocks)) / (2 * h)
        assert np.abs(shift - fd).max() < 1e-8


def test_parameter_shift_sums_to_zero():
    cfg = ChainConfig(n_spins=3)
    probe = qsim.make_basis_state(3, 2)
    for q in range(3):
        grad = fisher.parameter_shift_gradient(
            probe, cfg, ParameterPoint(), decoders.ramsey_decoder(), q)
        assert abs(grad.sum()) < 1e-12


def test_single_qubit_slope_half():
    # |d p0 / d phi| = 1/2 for the Ramsey fringe at phi = 0
    state = np.array([RT2, RT2], dtype=complex)
    blocks = decoders.decoder_blocks(decoders.ramsey_decoder(), 1)
    d = 0.5 * (fisher._probs(state, 1, np.array([np.pi / 2]), blocks)
               - fisher._probs(state, 1, np.array([-np.pi / 2]), blocks))
    assert abs(d[0]) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_separable_probe_recovers_sql(n):
    cfg = ChainConfig(n_spins=n)
    f = fisher.classical_fim(plus_state(n), cfg, ParameterPoint(),
                             decoders.ramsey_decoder())
    sql = bounds.sql_fim(n)
    assert f.f_bb == pytest.approx(n, abs=1e-6)
    np.testing.assert_allclose(f.as_array(), sql.as_array(), atol=1e-6)
    assert f.det == pytest.approx(sql.det, abs=1e-6)


def test_ghz_probe_has_degenerate_cfim():
    for n in (2, 3, 4):
        cfg = ChainConfig(n_spins=n)
        ghz = (qsim.make_basis_state(n, 0) + qsim.make_basis_state(n, 2 ** n - 1)) * RT2
        f = fisher.classical_fim(ghz, cfg, ParameterPoint(),
                                 decoders.ramsey_decoder())
        assert f.det <= 1e-9


def test_qfim_ghz_values():
    cfg = ChainConfig(n_spins=3)
    ghz = (qsim.make_basis_state(3, 0) + qsim.make_basis_state(3, 7)) * RT2
    q = fisher.qfim_pure(ghz, cfg)
    np.testing.assert_allclose([q.f_bb, q.f_gg, q.f_bg], [9, 9, 9], atol=1e-12)
    assert abs(q.det) < 1e-9


def test_qfim_basis_state_is_zero():
    cfg = ChainConfig(n_spins=4)
    q = fisher.qfim_pure(qsim.make_basis_state(4, 9), cfg)
    assert np.abs(q.as_array()).max() == 0.0


def test_qfim_pure_equals_simplex_form():
    cfg = ChainConfig(n_spins=4)
    for seed in range(5):
        probe = random_probe(4, seed)
        q1 = fisher.qfim_pure(probe, cfg)
        q2 = fisher.qfim_simplex(np.abs(probe) ** 2, cfg)
        np.testing.assert_allclose(q1.as_array(), q2.as_array(), atol=1e-12)


def test_qfim_phase_invariance():
    cfg = ChainConfig(n_spins=4)
    rng = np.random.default_rng(7)
    probe = random_probe(4, 3)
    rephased = probe * np.exp(1j * rng.uniform(0, 2 * np.pi, probe.size))
    q1 = fisher.qfim_pure(probe, cfg)
    q2 = fisher.qfim_pure(rephased, cfg)
    np.testing.assert_allclose(q1.as_array(), q2.as_array(), atol=1e-10)


def test_qfim_simplex_motif_exact():
    cfg = ChainConfig(n_spins=4)
    p = np.zeros(16)
    p[[0, 3, 12, 15]] = 0.25
    q = fisher.qfim_simplex(p, cfg)
    np.testing.assert_allclose(q.as_array(), [[8, 12], [12, 26]], atol=1e-12)
    assert q.det == pytest.approx(64.0, abs=1e-12)


def test_qfim_simplex_point_mass_and_ghz():
    cfg = ChainConfig(n_spins=5)
    p = np.zeros(32)
    p[11] = 1.0
    assert np.abs(fisher.qfim_simplex(p, cfg).as_array()).max() == 0.0
    ghz_p = np.zeros(32)
    ghz_p[[0, 31]] = 0.5
    q = fisher.qfim_simplex(ghz_p, cfg)
    expected = bounds.ghz_fim(5)
    np.testing.assert_allclose(q.as_array(), expected.as_array(), atol=1e-12)


def test_cfim_dominated_by_qfim():
    rng = np.random.default_rng(12)
    for trial in range(15):
        n = int(rng.integers(2, 5))
        cfg = ChainConfig(n_spins=n)
        probe = random_probe(n, 500 + trial)
        tier = ("T1", "T2", "T3", "T4")[rng.integers(4)]
        dec = random_decoder(tier, n, rng)
        pt = ParameterPoint(b0=rng.normal(), g=rng.normal())
        f = fisher.classical_fim(probe, cfg, pt, dec)
        q = fisher.qfim_pure(probe, cfg)
        assert f.det <= q.det + 1e-6
        assert f.f_bb <= q.f_bb + 1e-6


def test_qfim_cauchy_schwarz():
    rng = np.random.default_rng(23)
    for trial in range(20):
        n = int(rng.integers(2, 6))
        q = fisher.qfim_pure(random_probe(n, 800 + trial), ChainConfig(n_spins=n))
        assert q.f_bg ** 2 <= q.f_bb * q.f_gg + 1e-9


def test_fim_derivative_sum_rule():
    rng = np.random.default_rng(31)
    cfg = ChainConfig(n_spins=4)
    probe = random_probe(4, 5)
    dec = random_decoder("T4", 4, rng)
    dphi = fisher.phase_derivatives(probe, cfg, ParameterPoint(), dec)
    from spingrad.chain import sensing_matrix
    m = sensing_matrix(cfg)
    for a in range(2):
        assert abs((m[:, a] @ dphi).sum()) < 1e-10


def test_log_det_objective():
    zero = fisher.FisherMatrix(0.0, 0.0, 0.0)
    assert fisher.log_det_objective(zero, 1e-6) == pytest.approx(
        2 * np.log(1e-6), rel=1e-12)
    sql5 = bounds.sql_fim(5)
    assert fisher.log_det_objective(sql5) == pytest.approx(np.log(50), abs=1e-6)
    # monotone in det for fixed regularizer
    vals = [fisher.log_det_objective(fisher.FisherMatrix(a, a, 0.0))
            for a in (1.0, 2.0, 3.0)]
    assert vals[0] < vals[1] < vals[2]


def test_log_det_objective_rejects_invalid():
    bad = fisher.FisherMatrix(0.0, 0.0, 5.0)
    with pytest.raises(ValueError):
        fisher.log_det_objective(bad)


def test_fisher_matrix_psd_check():
    assert bounds.sql_fim(4).is_psd()
    assert not fisher.FisherMatrix(1.0, 1.0, 2.0).is_psd()
