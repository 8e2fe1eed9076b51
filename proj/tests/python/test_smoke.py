import numpy as np
import pytest

import ewr


def test_operator_norm_matches_dense_svd():
    rng = np.random.default_rng(0)
    w = rng.normal(size=(3, 6)) + 1j * rng.normal(size=(3, 6))
    e = ewr.MeasurementEnsemble(w)
    assert e.rows == 18
    svd = np.linalg.norm(e.dense(), 2)
    assert abs(e.operator_norm - svd) <= 1e-12 * svd
    psi = rng.normal(size=(6, 1)) + 1j * rng.normal(size=(6, 1))
    assert np.allclose(e.apply(psi), e.dense() @ psi)


def test_pseudo_huber_moreau():
    z = np.array([0.3 + 0.1j, -2.0, 5j, 0.0])
    for d in (0.1, 1.0, 10.0):
        assert np.allclose(ewr.prox_f(z, d) + ewr.prox_fconj(z, d), z, atol=1e-12)
        assert np.allclose(ewr.prox_f(z, d), d * ewr.phi_prime(z, d), atol=1e-12)
        assert np.all(np.abs(ewr.phi_prime(z, d)) <= 1.0)


def test_consistent_data_is_a_fixed_point():
    e = ewr.MeasurementEnsemble(np.ones((1, 4), dtype=complex))
    phi = ewr.random_unitary(3, 4)
    z = np.array([1.0, 0.5j, 0.0, -0.2])
    g = ewr.transform_gamma(ewr.synthesize(e, phi @ z), 0.1)
    assert ewr.data_term(e, phi @ z, g, 0.1) < 1e-24
    assert np.linalg.norm(ewr.data_gradient(e, phi, z, g, 0.1)) < 1e-14


def test_bounds_and_assumption():
    b = ewr.bound_constants(2, 1, 10, 1.0, 1.0, 1.0, [1.0, 1.0, 1.0])
    assert b["gamma"] == 2.0
    assert b["K_L"] > 0
    with pytest.raises(ewr.AssumptionViolation):
        ewr.bound_constants(2, 1, 10, 1.0, 1.0, 1.0, [2.5])
    lin = ewr.bound_constants(2, 1, 10, 1.0, 1.0, 5.0, [1.0, 1.0], nonlinearity="linear")
    assert lin["gamma"] == 1.0
    assert lin["K_L"] == pytest.approx(sum(lin["b"]), rel=1e-14)


def test_unroll_and_dataset():
    d = ewr.generate_dataset(n=8, k=2, m=3, s=2, seed=5)
    e = ewr.MeasurementEnsemble(d["weights"])
    taus = [0.5 * ewr.max_step(e)] * 4
    f = ewr.unroll(e, d["phi0"], d["g"], taus)
    assert f.shape == (8, 3)
    out = ewr.network_output(e, d["phi0"], d["phi0"], d["g"], taus, c_out=0.5)
    assert np.all(np.linalg.norm(out, axis=0) <= 0.5 + 1e-12)


def test_small_figure1_and_suite():
    r = ewr.figure1(l_max=3, grid=8, refine=2, inner=10)
    lows = [row["lower_bound"] for row in r["rows"]]
    assert all(a < b for a, b in zip(lows, lows[1:]))
    rep = ewr.property_suite(trials=10, only=["nonlin."])
    assert all(e["passed"] for e in rep["entries"])


def test_cli_in_process():
    rc, out, _ = ewr.cli(["frobnicate"])
    assert rc == 1
