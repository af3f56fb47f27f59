import cmath
import math

import numpy as np
import pytest

import bfcalc


def test_psi_closed_forms():
    assert bfcalc.psi({"kind": "power", "alpha": 0.5}, 4.0) == pytest.approx(2.0)
    assert bfcalc.psi({"kind": "log1p"}, 1.0) == pytest.approx(math.log(2.0))
    z = 1.0 + 2.0j
    assert bfcalc.psi({"kind": "one_minus_exp"}, z) == pytest.approx(1.0 - cmath.exp(-z))


def test_levy_and_hirsch_match_eigendecomposition():
    A = np.diag([1.0, 4.0]).astype(complex)
    sqrt = {"kind": "power", "alpha": 0.5}
    np.testing.assert_allclose(bfcalc.levy_apply(sqrt, A), np.diag([1.0, 2.0]), atol=1e-9)
    np.testing.assert_allclose(bfcalc.hirsch_apply(sqrt, A), np.diag([1.0, 2.0]), atol=1e-9)


def test_gamma_subordination_is_a_negative_power():
    A = np.array([[1.0, 1.0], [0.0, 2.0]], dtype=complex)
    got = bfcalc.subordinate_matrix({"family": "gamma"}, A, 2.0)
    want = np.linalg.inv((np.eye(2) + A) @ (np.eye(2) + A))
    np.testing.assert_allclose(got, want, atol=1e-9)


def test_inequality_report():
    rep = bfcalc.check_inequality("FEH", {"kind": "log1p"}, radii=16, angles=8)
    assert rep["id"] == "FEH"
    assert rep["pass"]


def test_suite_roundtrip_and_plotdata():
    report, code = bfcalc.run_suite("contour-bounds", seed=3, config={"draws": 4})
    assert code == 0
    assert report["schema"] == "1"
    assert report["summary"]["checks"] == 4
    again, _ = bfcalc.run_suite("contour-bounds", seed=3, config={"draws": 4})
    assert again == report
    csv = bfcalc.emit_plotdata(report, "margin-vs-|z|").splitlines()
    assert csv[0] == "abs_z,integral,bound"
    assert len(csv) == 5


def test_errors():
    report, code = bfcalc.run_suite("scalar-inequalities", config={"psi": {"kind": "power", "alpha": 1.5}})
    assert code == 2
    assert "alpha out of (0,1]" in report["error"]
    with pytest.raises(bfcalc.SpecError):
        bfcalc.psi({"kind": "bogus"}, 1.0)
    with pytest.raises(bfcalc.SpecError):
        bfcalc.emit_plotdata({"checks": []}, "histogram")
    with pytest.raises(bfcalc.BfcalcError):
        bfcalc.hirsch_apply({"kind": "one_minus_exp"}, np.eye(2, dtype=complex))
    assert "cm-appendix" in bfcalc.suite_ids()
