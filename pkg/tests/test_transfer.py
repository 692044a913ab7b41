import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from delta_spectra.core_model import CouplingConfig
from delta_spectra.errors import InvalidInputError, OriginError
from delta_spectra.transfer import (eigenfunction, eigenfunction_values, f_factor, f_plus, m22,
                                    transfer_matrix)

coord = st.floats(-20, 20, allow_nan=False)
cplx = st.builds(complex, coord, coord)
kreal = st.floats(0.05, 50) | st.floats(-50, -0.05)


def delta_step(z, x0, k):
    """Amplitude map (A, B) -> (A', B') across z delta(x - x0), built from the matching conditions."""
    e = np.exp(1j * k * x0)
    # rows: continuity, derivative jump; unknowns (A', B')
    lhs = np.array([[e, 1 / e], [1j * k * e, -1j * k / e]])
    rhs_cont = np.array([e, 1 / e])
    rhs_der = np.array([1j * k * e + z * e, -1j * k / e + z / e])
    return np.linalg.solve(lhs, np.vstack([rhs_cont, rhs_der]))


def product_oracle(cc, k):
    return delta_step(cc.z_plus, cc.a, k) @ delta_step(cc.z_minus, -cc.a, k)


@given(cplx, cplx, st.floats(0.1, 5), kreal)
def test_matches_matching_matrix_product(zm, zp, a, k):
    cc = CouplingConfig(zm, zp, a, allow_free=True)
    got = transfer_matrix(cc, k).as_array()
    want = product_oracle(cc, k)
    size = 1 + np.abs(want).max()
    assert np.abs(got - want).max() <= 1e-11 * size**2


def test_free_particle_identity():
    cc = CouplingConfig(0, 0, 1, allow_free=True)
    assert np.allclose(transfer_matrix(cc, 0.7).as_array(), np.eye(2), atol=1e-15)
    assert m22(cc, 3.3) == 1


def test_single_delta_zero():
    cc = CouplingConfig(0, 2j, 1)
    assert abs(transfer_matrix(cc, 1.0).m22) < 1e-15
    assert abs(m22(cc, 1.0)) < 1e-15


@given(cplx, st.floats(0.05, 50))
def test_single_delta_reduction(z, k):
    cc = CouplingConfig(0, z, 1.3, allow_free=True)
    assert m22(cc, k) == pytest.approx(1 + 1j * z / (2 * k), rel=1e-13, abs=1e-13)


def test_pt_imaginary_singularity():
    s0 = math.pi / (2 * math.sqrt(2))
    cc = CouplingConfig(-1j * s0, 1j * s0, 1)
    assert abs(m22(cc, math.pi / 4)) < 1e-10


def test_origin_rejected():
    with pytest.raises(OriginError):
        transfer_matrix(CouplingConfig(1, 1), 0)
    with pytest.raises(OriginError):
        f_factor(CouplingConfig(1, 1), 0.0)


def test_det_normalised_backward_error(rng):
    # det M = 1 up to rounding in the entries; scaled by the size of the products
    n = 10_000
    zm = rng.uniform(0, 100, n) * np.exp(2j * np.pi * rng.random(n))
    zp = rng.uniform(0, 100, n) * np.exp(2j * np.pi * rng.random(n))
    a = rng.uniform(0.1, 10, n)
    k = 10 ** rng.uniform(-3, 3, n) * rng.choice([-1, 1], n)
    worst = 0.0
    for i in range(n):
        t = transfer_matrix(CouplingConfig(zm[i], zp[i], a[i]), k[i])
        scale_ = max(abs(t.m11 * t.m22), abs(t.m12 * t.m21), 1.0)
        worst = max(worst, abs(t.det - 1) / scale_)
    assert worst < 1e-13


@given(cplx, cplx, st.floats(0.1, 5), kreal)
def test_f_identity(zm, zp, a, k):
    cc = CouplingConfig(zm, zp, a, allow_free=True)
    lhs = f_factor(cc, k)
    rhs = -1j * np.exp(-2j * a * k) * m22(cc, k)
    assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs), 1e-300) + 1e-300


@given(cplx, cplx, st.floats(0.1, 5), kreal)
def test_f_plus_is_minus_f_of_minus_k(zm, zp, a, k):
    cc = CouplingConfig(zm, zp, a, allow_free=True)
    assert f_plus(cc, k) == pytest.approx(-f_factor(cc, -k), rel=1e-13, abs=1e-13)


def test_free_f_never_zero():
    cc = CouplingConfig(0, 0, 2, allow_free=True)
    k = np.linspace(0.01, 10, 50)
    assert np.allclose(f_factor(cc, k), -1j * np.exp(-4j * k), atol=1e-15)


def test_vectorised_matches_scalar():
    cc = CouplingConfig(1 + 2j, -3 + 0.5j, 0.8)
    ks = np.array([0.3, 1.7, -2.2])
    assert np.allclose(m22(cc, ks), [m22(cc, k) for k in ks], rtol=1e-15)


# --- eigenfunctions ---------------------------------------------------------------------

WHICH = ["psi1", "psi2", "psi1-adjoint", "psi2-adjoint"]


def test_middle_region_is_plane_wave():
    cc = CouplingConfig(1 + 1j, 2 - 1j, 1.5)
    x = np.linspace(-1.5, 1.5, 11)
    assert np.allclose(eigenfunction_values(cc, 0.9, "psi1", x), np.exp(0.9j * x) / math.sqrt(2 * math.pi))
    assert np.allclose(eigenfunction_values(cc, 0.9, "psi2", x), np.exp(-0.9j * x) / math.sqrt(2 * math.pi))


@pytest.mark.parametrize("which", WHICH)
@given(zm=cplx, zp=cplx, a=st.floats(0.2, 3), k=st.floats(0.1, 10))
def test_continuity_and_jump(which, zm, zp, a, k):
    cc = CouplingConfig(zm, zp, a, allow_free=True)
    h = 1e-6
    zs = {-a: zm, a: zp}
    if which.endswith("adjoint"):
        zs = {x0: z.conjugate() for x0, z in zs.items()}
    for x0, z in zs.items():
        lo, hi = np.nextafter(x0, -np.inf), np.nextafter(x0, np.inf)
        vals = eigenfunction_values(cc, k, which, np.array([lo, x0, hi]))
        assert abs(vals[0] - vals[2]) <= 1e-12 * (1 + abs(zm) + abs(zp))
        left = eigenfunction_values(cc, k, which, np.array([x0 - 2 * h, x0 - h]))
        right = eigenfunction_values(cc, k, which, np.array([x0 + h, x0 + 2 * h]))
        d_left = (3 * vals[1] - 4 * left[1] + left[0]) / (2 * h)
        d_right = (-3 * vals[1] + 4 * right[0] - right[1]) / (2 * h)
        assert abs((d_right - d_left) - z * vals[1]) < 1e-4 * (1 + abs(z)) * (1 + k)


@pytest.mark.parametrize("which", WHICH)
def test_free_equation_away_from_deltas(which, rng):
    for _ in range(20):
        cc = CouplingConfig(complex(*rng.uniform(-5, 5, 2)), complex(*rng.uniform(-5, 5, 2)), rng.uniform(0.3, 2))
        k = rng.uniform(0.1, 10)
        h = 1e-4
        for x in (-cc.a - 0.7, 0.3 * cc.a, cc.a + 1.1):
            v = eigenfunction_values(cc, k, which, np.array([x - h, x, x + h]))
            second = (v[0] - 2 * v[1] + v[2]) / h**2
            assert abs(-second - k * k * v[1]) < 1e-6 * (1 + abs(cc.z_minus) + abs(cc.z_plus)) * 1e2


def test_adjoint_uses_conjugate_couplings():
    cc = CouplingConfig(1 + 2j, -0.5 + 1j, 1.2)
    conj = CouplingConfig(cc.z_minus.conjugate(), cc.z_plus.conjugate(), cc.a)
    x = np.linspace(-4, 4, 33)
    assert np.allclose(eigenfunction_values(cc, 1.1, "psi1-adjoint", x),
                       eigenfunction_values(conj, 1.1, "psi1", x), rtol=1e-14)


def test_sample_branch_labels():
    cc = CouplingConfig(1, 1, 1)
    assert eigenfunction(cc, 1.0, "psi1", -2).branch == "left"
    assert eigenfunction(cc, 1.0, "psi1", 0.5).branch == "middle"
    assert eigenfunction(cc, 1.0, "psi2", 1.01).branch == "right"


def test_eigenfunction_rejects_bad_input():
    cc = CouplingConfig(1, 1, 1)
    with pytest.raises(InvalidInputError):
        eigenfunction_values(cc, -1.0, "psi1", 0.0)
    with pytest.raises(InvalidInputError):
        eigenfunction_values(cc, 1.0, "psi3", 0.0)
