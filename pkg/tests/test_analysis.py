import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sepdist import analysis as an
from sepdist import qlinalg as ql
from sepdist.cvdc import measure_qubit, run_deterministic
from sepdist.dur_states import RHO_PRIME, DurParams, build_rho, build_tau, sample_params, sigma_delta_params, tau_blocks
from sepdist.errors import ContractError, PreconditionError

from conftest import random_density

PHI_PLUS = ql.projector(np.array([1, 0, 0, 1]) / math.sqrt(2))


def test_negativity_examples(rng):
    assert an.negativity(PHI_PLUS) == pytest.approx(1.0, abs=1e-14)
    prod = ql.kron(random_density(rng, 2), random_density(rng, 2))
    assert an.negativity(prod) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ContractError):
        an.negativity(np.diag([1.0, -0.5, 0.5, 0.0]))
    with pytest.raises(PreconditionError):
        an.negativity(np.eye(2))


def test_negativity_is_homogeneous(rng):
    rho = random_density(rng, 4)
    assert an.negativity(0.3 * rho) == pytest.approx(0.3 * an.negativity(rho), abs=1e-14)


def test_two_qubit_separability():
    assert an.is_two_qubit_separable(np.eye(4) / 4)
    assert not an.is_two_qubit_separable(PHI_PLUS)
    t0 = tau_blocks(RHO_PRIME)[0]
    assert not an.is_two_qubit_separable(t0 / np.trace(t0).real)


def test_tau0_negativity_closed_form(samples_1000):
    for p in samples_1000:
        if an.in_class_S(p):
            assert an.negativity(tau_blocks(p)[0]) == pytest.approx(p.Delta - 2 * p.lam2, abs=1e-10)


def test_conditions_rho_prime():
    r = an.check_conditions(RHO_PRIME)
    assert r.cond_a and r.cond_b and r.cond_c and r.cond_d and r.in_class_S
    assert r.oracle_in_class_S and r.agrees and r.violated_inequalities == []


def test_conditions_lam2_boundary():
    p = DurParams(0.3, 0.1, 0.1, 0.1, 0.1)
    r = an.check_conditions(p)
    assert not r.cond_d and not r.in_class_S
    assert [v["name"] for v in r.violated_inequalities] == ["2*lam2 < Delta"]
    assert r.boundary


def test_conditions_lam3_violation():
    p = DurParams(0.4, 0.1, 0.15, 0.05, 0.05)
    assert 2 * p.lam3 < p.Delta
    r = an.check_conditions(p)
    assert not r.cond_c and not r.in_class_S and r.agrees
    ev = ql.hermitian_eigenvalues(ql.partial_transpose(build_rho(p), [2]))
    assert ev[0] == pytest.approx(p.lam3 - p.Delta / 2, abs=1e-12)
    assert ev[0] < 0


def test_in_class_S_examples():
    assert an.in_class_S(RHO_PRIME)
    for d in (1e-4, 0.05, 0.2, 1 / 3):
        assert an.in_class_S(sigma_delta_params(d))
    assert not an.in_class_S(DurParams(0.2, 0.2, 0.1, 0.1, 0.1))


def test_iff_on_samples(samples_1000):
    for p in samples_1000:
        if not an.near_class_boundary(p):
            assert an.in_class_S(p) == an.in_class_S_oracle(p)
            assert an.check_conditions(p).agrees


def test_rho_tc_min_eigenvalue_structure(samples_1000):
    for p in samples_1000:
        ev = ql.hermitian_eigenvalues(ql.partial_transpose(build_rho(p), [2]))
        assert ev[0] == pytest.approx(an.rho_tc_structure_min(p), abs=1e-12)
        if abs(2 * p.lam3 - p.Delta) >= an.EPS:
            assert (ev[0] >= -an.PPT_TOL) == (2 * p.lam3 >= p.Delta)


def test_avg_entanglement_closed_form():
    assert an.avg_entanglement_closed_form(RHO_PRIME) == pytest.approx(1 / 3, abs=1e-15)
    p = DurParams(0.3, 0.1, 0.1, 0.1, 0.1)
    assert an.avg_entanglement_closed_form(p) == pytest.approx(0.0, abs=1e-15)


def test_avg_entanglement_oracle(samples_1000):
    n = 0
    for p in samples_1000:
        if an.in_class_S(p):
            n += 1
            p_e, val = an.avg_entanglement_oracle(p)
            assert val == pytest.approx(an.avg_entanglement_closed_form(p), abs=1e-10)
    assert n > 20


def test_final_negativity_values():
    assert an.final_negativity_closed_form(RHO_PRIME) == pytest.approx((math.sqrt(2) - 1) / 3, abs=1e-15)
    assert an.final_negativity_closed_form(RHO_PRIME) == pytest.approx(0.1380712, abs=1e-7)
    for d in (0.01, 0.1, 0.25):
        assert an.final_negativity_closed_form(sigma_delta_params(d)) == pytest.approx((math.sqrt(2) - 1) * d, abs=1e-15)


def test_final_negativity_oracle(samples_1000):
    for p in samples_1000:
        v = an.final_negativity_closed_form(p)
        assert v >= 0
        assert an.final_negativity_oracle(p) == pytest.approx(v, abs=1e-10)


def test_final_negativity_by_two_by_two_block():
    # independent route: the only negative eigenvalue of the partial transpose lives in
    # the {|01>,|10>} block [[λ2, Δ/2], [Δ/2, λ1+λ2+λ3]]
    for p in sample_params(99, 200):
        s = p.lam1 + p.lam2 + p.lam3
        lo = (p.lam2 + s) / 2 - math.hypot((s - p.lam2) / 2, p.Delta / 2)
        assert an.final_negativity_closed_form(p) == pytest.approx(max(-2 * lo, 0.0), abs=1e-14)


def test_deterministic_predicate(samples_1000):
    for p in samples_1000:
        gap = an.deterministic_predicate_gap(p)
        if abs(gap) >= an.EPS:
            assert (an.negativity(run_deterministic(p)) > an.ZERO_NEG) == (gap > 0) == an.deterministic_predicate(p)


def test_lemma_f():
    for d in (0.01, 0.1, 0.3):
        assert an.lemma_f(d, d) == pytest.approx((math.sqrt(2) - 1) * d, abs=1e-15)
        xs, fs = an.lemma_f_grid(d, 1000)
        assert np.all(np.diff(fs) < 0)
        assert np.all(fs >= an.lemma_f((1 - d) / 2, d) - 1e-15)
    with pytest.raises(PreconditionError):
        an.lemma_f(0.05, 0.1)
    with pytest.raises(PreconditionError):
        an.lemma_f(0.2, 0.4)


@settings(max_examples=200)
@given(st.floats(1e-6, 1 / 3), st.floats(0, 1), st.floats(0, 1))
def test_lemma_derivative_negative(d, u, v):
    lo, hi = an.lemma_domain(d)
    x, y = sorted((lo + u * (hi - lo), lo + v * (hi - lo)))
    if y - x > 1e-9:
        assert an.lemma_f(x, d) > an.lemma_f(y, d)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**31))
def test_clamping_and_membership_properties(seed):
    p = sample_params(seed, 1)[0]
    v = an.final_negativity_closed_form(p)
    raw = math.sqrt((p.lam1 + p.lam3) ** 2 + p.Delta**2) - (p.lam1 + 2 * p.lam2 + p.lam3)
    assert v == pytest.approx(max(raw, 0.0), abs=1e-15)
    assert (v == 0.0) == (raw <= 0.0)
    if an.in_class_S(p):
        assert 0 < p.Delta <= 1 / 3 + 1e-12
        assert an.avg_entanglement_closed_form(p) <= p.Delta
