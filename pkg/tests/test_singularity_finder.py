import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from delta_spectra.core_model import CouplingConfig
from delta_spectra.singularity_finder import (CubicCoefficients, RejectedRoot, cubic_g, family_anti_pt,
                                              family_imaginary, family_opposite, family_shifted,
                                              find_singularities, imaginary_curves, pt_curve,
                                              shifted_case_b_roots, shifted_curves, solve_cubic)
from delta_spectra.transfer import f_factor

coord = st.floats(-10, 10, allow_nan=False)


def _f_mp(cc, k):
    u, v, a = mpmath.mpc(cc.u), mpmath.mpc(cc.v), mpmath.mpf(cc.a)
    return u * mpmath.sin(2 * a * k) / (2 * k * k) + mpmath.exp(-2j * a * k) * (v / k - 1j)


def brute_singularities(cc, k_max=30.0, n=60001):
    """Real zeros of f from a dense |f| scan, each confirmed by a complex mpmath root.

    Independent of the cubic: a local minimum of |f| on the real axis counts
    when the nearby complex zero of f sits on the axis.
    """
    out = []
    with mpmath.workdps(30):
        for sign in (1, -1):
            ks = np.linspace(1e-3, k_max, n)
            v = np.abs(f_factor(cc, sign * ks))
            for i in np.flatnonzero((v[1:-1] <= v[:-2]) & (v[1:-1] <= v[2:])) + 1:
                if v[i] > 1e-2:
                    continue
                try:
                    root = complex(mpmath.findroot(lambda k: _f_mp(cc, k), mpmath.mpc(sign * ks[i])))
                except (ValueError, ZeroDivisionError):
                    continue
                if abs(root.imag) < 1e-9 and not any(abs(abs(root.real) - o) < 1e-6 for o in out):
                    out.append(abs(root.real))
    return sorted(out)


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_cubic_roots_match_numpy(c2, c1, c0):
    g = CubicCoefficients(1.0, c2, c1, c0)
    ours = solve_cubic(g)
    ref = np.roots([1, c2, c1, c0])
    real = sorted(r.real for r in ref if abs(r.imag) <= 1e-6 * max(1, abs(r)))
    assume(all(abs(r.imag) > 1e-3 for r in ref if abs(r.imag) > 1e-6 * max(1, abs(r))))
    assume(min(abs(ref[i] - ref[j]) for i in range(3) for j in range(i)) > 1e-3)
    assert len(ours) == len(real)
    for x in ours:
        assert abs(g(x)) <= 1e-9 * max(1, abs(x)) ** 3


@pytest.mark.parametrize("roots", [(1, 1, -2), (0.5, 0.5, 0.5), (-3, 0.25, 4), (2, 2, 2)])
def test_cubic_repeated_roots(roots):
    p = np.poly(roots)
    got = solve_cubic(CubicCoefficients(*p))
    assert np.allclose(got, sorted(roots), atol=1e-7)


def test_cubic_from_couplings_vanishes_at_singularity():
    s0 = math.pi / (2 * math.sqrt(2))
    g = cubic_g(CouplingConfig(-1j * s0, 1j * s0, 1))
    assert abs(g(math.pi / 4)) < 1e-12


@pytest.mark.parametrize("a", [0.3, 1.0, 2.5])
def test_single_delta(a):
    recs = find_singularities(CouplingConfig(0, 2j, a))
    assert len(recs) == 1
    assert abs(recs[0].k_star - 1) < 1e-9
    assert recs[0].energy == pytest.approx(1, abs=2e-9)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_pt_imaginary_family(n):
    sn = math.pi * (2 * n + 1) / (2 * math.sqrt(2))
    recs = find_singularities(CouplingConfig(-1j * sn, 1j * sn, 1))
    assert len(recs) == 1
    assert recs[0].energy == pytest.approx(((2 * n + 1) * math.pi / 4) ** 2, rel=1e-8)
    assert find_singularities(CouplingConfig(-1j * (sn + 0.1), 1j * (sn + 0.1), 1)) == []


@given(st.floats(0.05, 20), st.floats(0, 1), st.booleans())
def test_no_singularity_when_real_part_dominates(re, frac, neg):
    z = complex(re, (-1 if neg else 1) * frac * re)
    assert find_singularities(CouplingConfig(z.conjugate(), z, 1)) == []


def test_rejected_roots_reach_diagnostics():
    diag = []
    # generic coupling: g has a real root that is not a zero of f
    recs = find_singularities(CouplingConfig(0.3 + 2j, -1.1 + 0.4j, 0.8), diagnostics=diag)
    assert recs == []
    assert diag and all(isinstance(d, RejectedRoot) and d.residual_f > 1e-8 for d in diag)


@pytest.mark.parametrize("seed", range(6))
def test_matches_brute_force_scan(seed):
    rng = np.random.default_rng(seed)
    samples = [p for p in pt_curve((0.2, 9.0), 40) if max(abs(p.r), abs(p.s)) < 20]
    pick = samples[int(rng.integers(len(samples)))]
    a = 1.0
    cc = CouplingConfig(complex(pick.r, -pick.s) / (2 * a), complex(pick.r, pick.s) / (2 * a), a)
    got = sorted(r.k_star for r in find_singularities(cc))
    want = brute_singularities(cc)
    assert len(got) == len(want)
    assert np.allclose(got, want, atol=1e-6)


@pytest.mark.parametrize("zm,zp,a", [(1 + 1j, 1 - 1j, 1), (2j, -0.5j, 1.5), (0.2 - 3j, 0.2 + 3j, 0.7)])
def test_generic_couplings_match_scan(zm, zp, a):
    cc = CouplingConfig(zm, zp, a)
    got = sorted(r.k_star for r in find_singularities(cc))
    assert np.allclose(got, brute_singularities(cc), atol=1e-6)


def test_pt_curve_points_are_singular():
    samples = pt_curve((0.05, 12.0), 200)
    assert samples.skipped == [] or all(abs(math.sin(t)) < 1e-8 for t in samples.skipped)
    for smp in samples[::7]:
        z = complex(smp.r, smp.s) / 2
        cc = CouplingConfig(z.conjugate(), z, 1)
        assert abs(f_factor(cc, smp.t / 2)) < 1e-9 * max(1, abs(z)) ** 2


def test_pt_curve_small_t_limit():
    smp = pt_curve((1e-4, 2e-4), 2)[0]
    assert (smp.r, abs(smp.s)) == pytest.approx((-1, 1), abs=1e-3)


@given(st.floats(-5, 5), st.integers(1, 6), st.sampled_from([0.5, 1.0, 2.0]))
def test_anti_pt_family(x, n, a):
    z = complex(x, n * math.pi / (2 * a))
    rec = family_anti_pt(z, a)
    assume(rec is not None)
    assert rec.k_star == pytest.approx(n * math.pi / (2 * a))
    assert rec.residual_f < 1e-8


def test_anti_pt_off_lattice_is_empty():
    assert family_anti_pt(0.3 + 1.0j, 1.0) is None


def test_imaginary_branch_a():
    recs = family_imaginary(1.0, math.pi - 1.0, 1.0)
    assert any(r.family_tag == "imaginary-A" and abs(r.k_star - math.pi / 2) < 1e-12 for r in recs)


def test_imaginary_branch_b_curve():
    _lines, curves = imaginary_curves(1.0, 2, (-6, 6), 301)
    pts = curves[0]
    for ym, yp in pts[::20]:
        recs = family_imaginary(ym, yp, 1.0)
        assert any(abs(r.k_star - math.pi / 4) < 1e-9 for r in recs)


def test_opposite_family_points_are_singular():
    for smp in family_opposite((0.1, 10.0), 60)[::11]:
        z = complex(smp.r, smp.s)
        cc = CouplingConfig(-z, z, 1.0)
        recs = find_singularities(cc)
        assert any(abs(r.k_star - smp.t / 2) < 1e-7 for r in recs)


def test_case_b_roots():
    for k in shifted_case_b_roots(1.0, 10.0):
        assert abs(math.tan(2 * k) + k) < 1e-9


@given(coord, coord)
def test_shifted_family_agrees_with_general_finder(sm, sp):
    cc = CouplingConfig(1 + 1j * sm, 1 + 1j * sp, 1.0)
    fam = sorted(r.k_star for r in family_shifted(sm, sp, 1.0))
    gen = sorted(r.k_star for r in find_singularities(cc))
    assert np.allclose(fam, gen, rtol=1e-9)


def test_shifted_curves_carry_singularities():
    curves = shifted_curves(1.0, (-6, 6), 121, k_max=6)
    rows = np.vstack([curves["a"]] + list(curves["b"].values()))
    for s, sm, sp in rows[::37]:
        if max(abs(sm), abs(sp)) > 50:
            continue
        assert family_shifted(sm, sp, 1.0), (s, sm, sp)
