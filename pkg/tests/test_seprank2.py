import numpy as np
import pytest

from ellcomm.elliptic import Torus
from ellcomm.errors import DegenerateDivisor, PoleProximity
from ellcomm.sampling import torus_points
from ellcomm.seprank2 import (
    SepRank2Data,
    even_coefficients,
    normalization_residuals,
    odd_coefficients,
    periodicity_residual,
    psi_component,
    psi_grid,
    residue,
    residue_relation_check,
    seprank2_operator_check,
)


@pytest.fixture(scope="module")
def data():
    return SepRank2Data.default()


@pytest.fixture(scope="module")
def zs(data):
    return torus_points(data.torus, 8, seed=5, avoid=(data.gamma1, data.gamma2, data.z0, -data.z0), min_dist=0.1)


@pytest.fixture(scope="module")
def op_report(data):
    return seprank2_operator_check(data)


def test_normalization(data, zs):
    res = normalization_residuals(data, zs)
    assert res["psi_0^0"] < 1e-10 and res["psi_0^1"] < 1e-10
    assert res["psi_1^0"] < 1e-9 and res["psi_1^1"] < 1e-9


def test_double_periodicity(data, zs):
    assert periodicity_residual(data, range(-2, 5), zs) < 1e-9


@pytest.mark.parametrize("m", [-1, 1, 2])
def test_printed_and_cancelled_forms_agree(data, m):
    for fn in (even_coefficients, odd_coefficients):
        a = np.array(fn(data, m, form="cancelled"))
        b = np.array(fn(data, m, form="printed"))
        assert np.max(np.abs(a - b)) < 1e-12 * np.max(np.abs(a))


def test_printed_form_breaks_at_m0(data):
    for fn in (even_coefficients, odd_coefficients):
        with pytest.raises(DegenerateDivisor):
            fn(data, 0, form="printed")
        assert np.all(np.isfinite(fn(data, 0)))


def test_unknown_form(data):
    with pytest.raises(ValueError):
        even_coefficients(data, 1, form="raw")


@pytest.mark.parametrize("n", range(0, 5))
def test_residue_relations(data, n):
    r1, r2 = residue_relation_check(data, n)
    assert r1 < 1e-6 and r2 < 1e-6


def test_residue_at_n3_is_genuine(data):
    r0, _ = residue(data, 3, 0, data.gamma1)
    r1, _ = residue(data, 3, 1, data.gamma1)
    assert abs(r0) > 1e-3 and abs(r1) > 1e-3
    assert abs(r0 - data.a1 * r1) < 1e-6 * abs(r0)


def test_residue_relation_discriminates(data):
    r1, _ = residue_relation_check(data, 3, slopes=(data.a1 + 1e-2, data.a2))
    assert r1 > 1e-3


def test_residue_matches_contour_integral(data):
    # independent residue via the trapezoid rule on a small circle
    th = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    rad = 0.05
    pts = data.gamma2 + rad * np.exp(1j * th)
    vals = np.asarray(psi_component(data, 3, 1, pts))
    contour = np.mean(vals * rad * np.exp(1j * th))
    r, _ = residue(data, 3, 1, data.gamma2)
    assert abs(r - contour) < 1e-6 * abs(contour)


def test_operator_pair(op_report):
    assert op_report["eigen_residuals"]["f"] < 1e-8
    assert op_report["eigen_residuals"]["g"] < 1e-8
    assert op_report["commutator_norm"] < 1e-8
    Lf = op_report["operators"]["L_f"]
    assert np.max(np.abs(Lf.band(2) - 1)) < 1e-8
    for i in ("0", "1"):
        assert op_report["component_eigen_residuals"][i] < 1e-8


def test_component0_alone_is_underdetermined(data, zs):
    # shifted psi^0 span at most a 4-dimensional space, so five unknowns per row cannot be fixed
    n = 4
    M = np.array([[psi_component(data, n + k, 0, z) for k in range(-2, 3)] for z in zs])
    sv = np.linalg.svd(M, compute_uv=False)
    assert sv[4] / sv[0] < 1e-10
    assert sv[3] / sv[0] > 1e-6


def test_component0_attempt_is_reported(op_report):
    assert op_report["component_agreement"] is None
    assert "condition number" in op_report["component0_error"]


def test_degenerate_inputs():
    t = Torus(1, 1j)
    with pytest.raises(DegenerateDivisor):
        SepRank2Data(t, 0.2, 0.5, 0.9, 1.0, 1.0)
    with pytest.raises(DegenerateDivisor):
        SepRank2Data(t, 1.0, 0.5, 0.9, 1.0, 2.0)
    with pytest.raises(DegenerateDivisor):
        SepRank2Data(t, 0.2, 0.5, 2.5, 1.0, 2.0)
    with pytest.raises(DegenerateDivisor):
        SepRank2Data(t, 0.2, 0.5, 0.9, 0.0, 2.0)
    # gamma1 + z0 on the lattice makes psi_1 degenerate
    d = SepRank2Data(t, 0.2, -0.2, 0.9, 1.0, 2.0)
    with pytest.raises(DegenerateDivisor):
        psi_component(d, 1, 0, 0.5 + 0.5j)


def test_pole_proximity(data):
    with pytest.raises(PoleProximity):
        psi_component(data, 2, 0, data.gamma1 + 1e-12)


def test_grid_shape(data):
    g = psi_grid(data, 0, 0.3 + 0.7j, -3, 5)
    assert g.window == (-3, 5)
    assert abs(g(0) - 1) < 1e-10
