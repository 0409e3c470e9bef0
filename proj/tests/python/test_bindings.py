import json
import math

import numpy as np
import pytest

psido = pytest.importorskip("psido")


def test_orders_and_t_matrix():
    assert psido.smoothness_orders(1, 1.0) == (2, 3)
    assert psido.smoothness_orders(2, 0.5) == (5, 7)
    assert psido.t_matrix(0.5) == [0.5, 0.5, -1.0, 1.0]


def test_qnorm_two_terms():
    assert psido.qnorm([4.0, 3.0], 1.0)["value"] == pytest.approx(7.0)
    assert psido.qnorm([4.0, 3.0], 0.5)["value"] == pytest.approx((math.sqrt(3) + 2) ** 2)


def test_adjoint_identity():
    a = psido.builtin_symbol("gaussian_bump", {"rho": 2, "u": 0.3})
    A = psido.assemble_t_quant(a, 0.25, 4.0, n=64)
    B = psido.assemble_t_quant(a, 0.75, 4.0, n=64)
    # a is real, so conj(a) = a
    assert np.abs(A.conj().T - B).max() < 1e-13 * np.abs(A).max()


def test_sinc_projection():
    alpha, L, n = 16.0, 2.0, 64
    P = psido.assemble_interval_projection(0.0, 1.0, alpha, L=L, n=n)
    x = np.array([p[0] for p in psido.grid_points(1, L, n)])
    u = x[:, None] - x[None, :]
    with np.errstate(invalid="ignore", divide="ignore"):
        K = np.exp(0.5j * alpha * u) * np.sin(0.5 * alpha * u) / (np.pi * u)
    K[np.diag_indices(n)] = alpha / (2 * np.pi)
    assert np.abs(P - (2 * L / n) * K).max() < 1e-8


def test_singular_values_match_numpy():
    rng = np.random.default_rng(0)
    M = rng.normal(size=(20, 20)) + 1j * rng.normal(size=(20, 20))
    assert np.allclose(psido.singular_values(M), np.linalg.svd(M, compute_uv=False), rtol=1e-12)
    assert psido.check_triangle(M, M.T, 0.5)["holds"]


def test_lattice_norm_gaussian():
    v = psido.lattice_qnorm(lambda x: math.exp(-x * x), 2.0, math.inf)
    assert 0.0 < v <= 1.0


def test_fit_slope():
    slope, stderr, _ = psido.fit_loglog_slope([(p, p**2) for p in (2.0, 4.0, 8.0, 16.0)])
    assert slope == pytest.approx(2.0)
    assert stderr == pytest.approx(0.0, abs=1e-12)


def test_run_and_report(data_dir):
    cfg = json.loads((data_dir / "smooth_small.json").read_text())
    assert psido.validate_config(cfg) == []
    rep = psido.run(cfg)
    assert rep["verdict"] == "pass"
    assert psido.verdict(rep) == "pass"
    assert abs(rep["series"][0]["fit"]["slope"] - 1.0) < 0.15
    assert psido.csv(rep).startswith("series,param,value")
    assert "verdict: pass" in psido.table(rep)


def test_invalid_config_reports_field():
    bad = {"schema_version": 1, "kind": "smooth_scaling", "name": "x", "q": 1.5}
    assert any(v.startswith("q") for v in psido.validate_config(bad))
    with pytest.raises(psido.PsidoError):
        psido.run(bad)
