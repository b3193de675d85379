import json
import math

import numpy as np
import pytest

import mu_skin as ms


def test_unit_media_constants_are_sqrt2():
    m, c1, c2 = ms.stability_constants(ms.MediaParams())
    assert m == pytest.approx(math.sqrt(2), abs=1e-12)
    assert c1 == pytest.approx(math.sqrt(2), abs=1e-12)
    assert c2 == pytest.approx(math.sqrt(2), abs=1e-12)


def test_lambda_identity():
    d = ms.derive_params(ms.MediaParams(omega=2.0, sigma_minus=3.0, mu_r=1e4))
    lam = d["lambda"]
    assert lam.real > 0
    assert abs(-lam * lam - d["kappa_plus"] ** 2 * d["alpha_minus"]) < 1e-12 * abs(lam) ** 2
    assert d["eps"] == pytest.approx(1e-2)


def test_exact_solution_is_continuous_across_the_interface():
    g = ms.Geometry(ms.GeometryKind.cylinder)
    s = ms.solve_exact(g, ms.MediaParams(mu_r=1e4), ms.Drive(order=2))
    assert max(s.interface_residuals()) < 1e-10
    pts = np.array([[1.0 - 1e-12, 0.0, 0.0], [1.0 + 1e-12, 0.0, 0.0]])
    h = s.evaluate(pts)["H"]
    assert h.shape == (2, 3)
    # TM on the cylinder: H is axial and its tangential trace is continuous
    assert abs(h[0, 2] - h[1, 2]) < 1e-8 * abs(h[1, 2])


def test_te_sphere_field_decays_into_the_conductor():
    g = ms.Geometry(ms.GeometryKind.sphere)
    drive = ms.Drive(polarization=ms.Polarization.TE, order=1)
    s = ms.solve_exact(g, ms.MediaParams(mu_r=1e6, sigma_minus=4.0), drive)
    pts = np.array([[0.0, 0.0, 0.999], [0.0, 0.0, 0.5]])
    h = np.abs(s.evaluate(pts)["H"]).max(axis=1)
    assert h[1] < 1e-6 * h[0]


def test_rates_report_has_expected_slopes():
    rep = ms.run_rates(
        ms.Geometry(),
        ms.MediaParams(sigma_minus=4.0),
        ms.Drive(order=1),
        orders=(0, 1),
    )
    slopes = [o["fit"]["slope"] for o in rep["orders"]]
    assert slopes[0] == pytest.approx(1.0, abs=0.3)
    assert slopes[1] == pytest.approx(2.0, abs=0.3)


def test_config_run_and_errors(tmp_path):
    cfg = {
        "schema_version": ms.SCHEMA_VERSION,
        "drive": {"kind": "shell_current", "order": 1, "shell_a": 1.3, "shell_b": 1.7},
        "sweep": {"mu_r": [1e2, 1e4]},
    }
    ok, files, summary = ms.run_config("constants", json.dumps(cfg), tmp_path)
    assert ok
    assert "verdict: PASS" in summary
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["constants"]["C1"] == pytest.approx(math.sqrt(2), abs=1e-14)
    assert any(str(f).endswith("constants.csv") for f in files)

    with pytest.raises(ms.ConfigError, match="line 2"):
        ms.run_config("constants", '{\n "schema_version": 1,,\n}', tmp_path)
    with pytest.raises(ValueError):
        ms.solve_exact(ms.Geometry(), ms.MediaParams(omega=0.0), ms.Drive())
