"""Smoke tests for the python bindings."""

import json
import math

import pytest

import causalab


def test_dirichlet_spectrum():
    out = causalab.solve_spectrum("dirichlet", L=math.pi, modes=3, grid_n=1024)
    for got, want in zip(out["energies"], [1.0, 4.0, 9.0]):
        assert abs(got - want) < 1e-10
    assert out["node_counts"] == [0, 1, 2]


def test_twisted_momenta_square_to_energies():
    ks = causalab.momentum_spectrum_twisted(1.0, 2.0, 4)
    out = causalab.solve_spectrum("twisted", L=2.0, modes=4, grid_n=256, theta=1.0)
    for k, e in zip(ks, out["energies"]):
        assert abs(k * k - e) < 1e-10


def test_kernels_and_beta():
    assert causalab.omega_c(0.0, 1.0, 7.0) == pytest.approx(49.0)
    k_nr, k_r = causalab.kernel_pair(1.0, 1.0, 10.0)
    assert k_r < k_nr
    assert k_r == pytest.approx(5.0 / math.sqrt(101.0))
    assert causalab.beta(0.0, 0.0, 1.0, 4.0) == 0


def test_lemma2_cell_passes():
    rep = causalab.verify_lemma2(d=3, tau=0.0, delta=0.5, m0=1.0, c=10.0)
    assert rep["pass"]
    assert rep["margin"] > 0
    assert rep["rhs"] == pytest.approx(2 * rep["epsilon"] + 0.125)


def test_convergence_slope():
    scan = causalab.convergence_scan(c_list=[10.0, 100.0, 1000.0, 10000.0])
    assert abs(scan["slope"] + 2.0) < 0.1


def test_lieb_liniger_tonks():
    sol = causalab.solve_ll(1000.0, 192)
    assert sol["f_gamma"] == pytest.approx(math.pi**2 / 3, rel=0.02)
    assert causalab.scaling_residual(1.0, 1.0, 2.0, 128) < 1e-9


def test_fock_surface():
    assert causalab.ladder_commutator_defect(10) == 0.0
    r8 = causalab.weyl_relation_residual(0.5, 0.5, 8)
    r16 = causalab.weyl_relation_residual(0.5, 0.5, 16)
    assert r16 < r8
    assert abs(causalab.two_point_ratio(c=1000.0) - 1.0) < 1e-4


def test_tail_probability_and_resolution_guard():
    value = causalab.tail_probability(1e-2, grid_n=1 << 18)
    assert value > 1e-12
    with pytest.raises(causalab.PropertyError):
        causalab.tail_probability(1e-4, grid_n=1 << 14)


def test_run_command_dichotomy():
    out = causalab.run("dichotomy", jobs=4)
    assert out["property_failures"] == 0
    assert out["summary"]["classification_errors"] == 0
    assert len(out["summary"]["verdicts"]) == 20


def test_run_command_validation_error():
    with pytest.raises(causalab.ValidationError):
        causalab.run("spectrum", {"bc": "moebius"})
