import math

import numpy as np
import pytest

from sepdist import qlinalg as ql
from sepdist.analysis import final_state_closed_form, is_ppt, success_probability_closed_form
from sepdist.cvdc import (
    C,
    CNOT_AC,
    KrausChannel,
    apply_channel,
    apply_unitary,
    cnot,
    ebc_channel,
    measure_qubit,
    run_deterministic,
    run_probabilistic,
    trace_deterministic,
)
from sepdist.dur_states import RHO_PRIME, DurParams, build_rho, build_sigma, build_tau, tau_blocks
from sepdist.errors import ContractError, PreconditionError, ValidationError

from conftest import random_density, random_unitary

PHI_PLUS = ql.projector(np.array([1, 0, 0, 1]) / math.sqrt(2))


def test_cnot_flips_target_when_control_set():
    u = cnot(0, 2, 3)
    assert ql.allclose(u @ ql.basis_ket(0b100, 3), ql.basis_ket(0b101, 3), 0)
    assert ql.allclose(u @ ql.basis_ket(0b001, 3), ql.basis_ket(0b001, 3), 0)
    assert ql.allclose(u @ u, np.eye(8), 0)


@pytest.mark.parametrize("args", [(0, 0, 3), (0, 3, 3), (-1, 1, 3)])
def test_cnot_bad_indices(args):
    with pytest.raises(PreconditionError):
        cnot(*args)


def test_sigma_prime_to_rho_prime():
    assert ql.max_abs_diff(apply_unitary(build_rho(RHO_PRIME), CNOT_AC), build_sigma(RHO_PRIME)) <= 1e-15


def test_apply_unitary_preserves_spectrum(rng):
    rho = random_density(rng, 8)
    assert ql.allclose(apply_unitary(rho, np.eye(8)), rho, 0)
    u = random_unitary(rng, 8)
    out = apply_unitary(rho, u)
    assert np.max(np.abs(ql.hermitian_eigenvalues(out) - ql.hermitian_eigenvalues(rho))) <= 1e-10
    with pytest.raises(ContractError):
        apply_unitary(rho, 2 * np.eye(8))


def test_cnot_conjugation_involution(samples_100):
    for p in samples_100:
        rho = build_rho(p)
        assert ql.max_abs_diff(apply_unitary(apply_unitary(rho, CNOT_AC), CNOT_AC), rho) <= 1e-12
        assert ql.max_abs_diff(apply_unitary(build_sigma(p), CNOT_AC), rho) <= 1e-12


def test_measure_tau_prime():
    b0, b1 = measure_qubit(build_tau(RHO_PRIME), C)
    assert b0.probability == pytest.approx(1 / 3, abs=1e-12)
    assert ql.max_abs_diff(b0.post_state, PHI_PLUS) <= 1e-12
    assert b1.probability == pytest.approx(2 / 3, abs=1e-12)


def test_measure_deterministic_ancilla(rng):
    rho_ab = random_density(rng, 4)
    b0, b1 = measure_qubit(ql.kron(rho_ab, np.diag([0, 1])), C)
    assert b1.probability == pytest.approx(1.0, abs=1e-14)
    assert ql.allclose(b1.post_state, rho_ab, 1e-14)
    assert b0.degenerate and b0.post_state is None


def test_measure_branches(samples_100, rng):
    for p in samples_100:
        b0, b1 = measure_qubit(build_tau(p), C)
        assert abs(b0.probability + b1.probability - 1) <= 1e-12
        t0, t1 = tau_blocks(p)
        assert ql.allclose(b0.weighted_state, t0, 1e-15)
        assert ql.allclose(b1.weighted_state, t1, 1e-15)
        assert ql.allclose(b0.weighted_state, b0.probability * b0.post_state, 1e-15)
    rho = random_density(rng, 8)
    for q in range(3):
        r0, r1 = measure_qubit(rho, q)
        assert abs(r0.probability + r1.probability - 1) <= 1e-12


def test_ebc_completeness_exact():
    ch = ebc_channel()
    assert len(ch.operators) == 3
    assert np.array_equal(ch.completeness(), np.eye(4))
    k00, k01, k11 = np.diag([1, 0]), np.array([[0, 1], [0, 0]]), np.diag([0, 1])
    assert np.array_equal(ch.operators[0], np.kron(np.eye(2), k00))
    assert np.array_equal(ch.operators[1], np.kron(k00, k11))
    assert np.array_equal(ch.operators[2], np.kron(k01, k11))


def test_ebc_sectors(rng):
    ch = ebc_channel()
    rho_b = random_density(rng, 2)
    c0 = ql.kron(rho_b, np.diag([1, 0]))
    assert ql.allclose(apply_channel(c0, ch, [0, 1]), c0, 1e-15)
    c1 = ql.kron(rho_b, np.diag([0, 1]))
    # by hand: O2 rho O2^+ + O3 rho O3^+ = (rho_b[0,0] + rho_b[1,1]) |0><0| (x) |1><1|
    expected = np.zeros((4, 4), dtype=complex)
    expected[1, 1] = rho_b[0, 0] + rho_b[1, 1]
    assert ql.allclose(apply_channel(c1, ch, [0, 1]), expected, 1e-15)


def test_apply_channel_trace_preserving(rng):
    ch = ebc_channel()
    for _ in range(20):
        rho = random_density(rng, 8)
        out = apply_channel(rho, ch, [1, 2])
        assert abs(np.trace(out) - 1) <= 1e-12
        assert ql.is_psd(out, 1e-12)
    ident = KrausChannel((np.eye(4),))
    assert ql.allclose(apply_channel(rho, ident, [0, 2]), rho, 0)
    with pytest.raises(PreconditionError):
        apply_channel(rho, ch, [1])


def test_deterministic_state_at_rho_prime():
    expected = np.array([[1 / 2, 0, 0, 1 / 6], [0, 0, 0, 0], [0, 0, 1 / 3, 0], [1 / 6, 0, 0, 1 / 6]])
    assert ql.max_abs_diff(run_deterministic(RHO_PRIME), expected) <= 1e-12


def test_deterministic_state_matches_display(samples_1000):
    for p in samples_1000:
        out = run_deterministic(p)
        assert ql.max_abs_diff(out, final_state_closed_form(p)) <= 1e-12
        assert abs(np.trace(out) - 1) <= 1e-12


def test_deterministic_partial_trace_of_channel_output():
    tau = build_tau(RHO_PRIME)
    after = apply_channel(tau, ebc_channel(), [1, 2])
    assert ql.max_abs_diff(ql.partial_trace(after, [2]), final_state_closed_form(RHO_PRIME)) <= 1e-12


def test_probabilistic_trace(samples_1000):
    for p in samples_1000:
        tr = run_probabilistic(p)
        assert abs(tr.p_e - success_probability_closed_form(p)) <= 1e-12
        assert abs(tr.p_e - (1 - 2 * p.lam1 - 2 * p.lam3)) <= 1e-12
        for _, m in tr.stages:
            ql.check_density(m)


def test_probabilistic_rho_prime():
    tr = run_probabilistic(RHO_PRIME)
    assert tr.p_e == pytest.approx(1 / 3, abs=1e-12)
    assert ql.max_abs_diff(tr.final_state, PHI_PLUS) <= 1e-12
    assert ql.max_abs_diff(tr.stage("after_cnot_ac"), build_rho(RHO_PRIME)) <= 1e-15


def test_probabilistic_small_success_corner():
    # λ1 = λ3 = 1/4 would need λ0+ = 0 < λ1, so p_e cannot reach 0 inside the family
    with pytest.raises(ValidationError):
        DurParams(0.0, 0.0, 0.25, 0.0, 0.25)
    p = DurParams(0.25, 0.25, 0.0, 0.0, 0.25)
    tr = run_probabilistic(p)
    assert tr.p_e == p.delta + 2 * p.lam2


def test_tau_is_block_diagonal_and_sigma_rho_branches_separable(samples_1000):
    for p in samples_1000:
        tr = trace_deterministic(p)
        tau = tr.stage("after_cnot_bc").reshape(4, 2, 4, 2)
        assert np.max(np.abs(tau[:, 0, :, 1])) <= 1e-14
        # rho's branches are always separable; sigma's need 2λ1 >= Δ
        for br in measure_qubit(tr.stage("after_cnot_ac"), C):
            assert is_ppt(br.weighted_state)
        if 2 * p.lam1 >= p.Delta:
            for br in measure_qubit(tr.stage("sigma"), C):
                assert is_ppt(br.weighted_state)
