import cmath
import math

import numpy as np
import pytest

from pointderiv import (
    Arc,
    ConeSpec,
    ContourError,
    ContourPath,
    Disk,
    DiskRegion,
    GalleryFunction,
    PoleTooCloseError,
    Segment,
    annular_decomposition,
    annulus_radii,
    build_annular_piece,
    build_keyhole,
    conjugate_function,
    full_circle,
    integrate_contour,
    kernel_seminorm_ratio,
    lemma_cauchy_bound_check,
    quotient_via_cauchy,
    winding_number,
)
from pointderiv.contour import ToleranceError, default_inner_index

CONE = ConeSpec(vertex=0j, direction=math.pi, half_angle=math.pi / 6, length=0.5, k=0.45)


# ---------------------------------------------------------------------------
# Paths and quadrature


def test_path_join_validation():
    with pytest.raises(ContourError):
        ContourPath((Segment(0, 1), Segment(2, 3)))


def test_path_simplicity_check():
    with pytest.raises(ContourError):
        ContourPath(
            (Segment(0, 1 + 1j), Segment(1 + 1j, 1), Segment(1, 1j), Segment(1j, 0)),
            closed=True,
        )


def test_keyhole_structure():
    path = build_keyhole(CONE, N=5, M=2)
    arcs = [p for p in path.segments if isinstance(p, Arc)]
    segs = [p for p in path.segments if isinstance(p, Segment)]
    assert len(arcs) == 2 and len(segs) == 2
    assert path.closed and path.cusp_free


def test_keyhole_winding():
    path = build_keyhole(CONE, N=5, M=2)
    assert winding_number(path, -0.1) == pytest.approx(1.0, abs=1e-7)
    assert winding_number(path, 0.5) == pytest.approx(0.0, abs=1e-7)
    assert winding_number(path.reversed(), -0.1) == pytest.approx(-1.0, abs=1e-7)


def test_keyhole_preconditions():
    with pytest.raises(ContourError):
        build_keyhole(CONE, N=2, M=2)
    short = ConeSpec(0j, math.pi, math.pi / 6, 0.1, 0.45)
    with pytest.raises(ContourError):
        build_keyhole(short, N=5, M=2)  # sector radius 0.25 > cone length


def test_annular_piece_winding():
    path = build_annular_piece(3, CONE)
    inside = 0.09  # in the annulus [0.0625, 0.125], outside the cone
    assert winding_number(path, inside) == pytest.approx(1.0, abs=1e-7)
    in_cone = -0.09
    assert winding_number(path, in_cone) == pytest.approx(0.0, abs=1e-7)


def test_annular_piece_arclength_halves():
    l3 = build_annular_piece(3, CONE).total_length
    l4 = build_annular_piece(4, CONE).total_length
    assert l4 == pytest.approx(l3 / 2, rel=1e-12)


def test_integrate_residue():
    res = integrate_contour(full_circle(0j, 1.0), lambda z: 1.0 / z, tol=1e-10)
    assert abs(res.value - 2j * math.pi) <= 1e-10


def test_integrate_conjugate_circle():
    # frozen oracle 0.5654866776461628j from the direct parametric integral, r = 0.3
    res = integrate_contour(full_circle(0j, 0.3), np.conj, tol=1e-10)
    assert abs(res.value - 0.5654866776461628j) <= 1e-10
    assert abs(res.value - 2j * math.pi * 0.09) <= 1e-10


def test_integrate_entire_function_zero():
    path = build_keyhole(CONE, N=5, M=2)
    res = integrate_contour(path, lambda z: np.exp(z) * z**3, tol=1e-10)
    assert abs(res.value) <= 1e-9


def test_integrate_pole_clearance():
    with pytest.raises(PoleTooCloseError):
        integrate_contour(
            full_circle(0j, 1.0), lambda z: 1.0 / (z - 1.0), poles=(1.0,)
        )


def test_integrate_tolerance_positive():
    with pytest.raises(ContourError):
        integrate_contour(full_circle(0j, 1.0), lambda z: z, tol=0.0)


def test_quadrature_primitive_order_independent():
    a1 = Arc(0j, 1.0, 0.0, math.pi)
    a2 = Arc(0j, 1.0, math.pi, 2 * math.pi)
    v1 = integrate_contour(
        ContourPath((a1, a2), check_simple=False), lambda z: 1.0 / z
    ).value
    v2 = integrate_contour(
        ContourPath((a2, a1), check_simple=False), lambda z: 1.0 / z
    ).value
    assert abs(v1 - v2) <= 1e-12


# ---------------------------------------------------------------------------
# Cauchy quotient and decomposition


def test_quotient_poly_square():
    f = GalleryFunction(poly_coeffs=(0, 0, 1))
    q = quotient_via_cauchy(f, -0.1, CONE, N=8, M=1, tol=1e-10)
    assert abs(q - (-0.1)) <= 1e-8


def test_quotient_identity_function():
    f = GalleryFunction(poly_coeffs=(0, 1))
    for x in (-0.05, -0.2, -0.1 + 0.02j):
        q = quotient_via_cauchy(f, x, CONE, N=8, M=1, tol=1e-10)
        assert abs(q - 1.0) <= 1e-8


def test_quotient_ct_gallery():
    f = GalleryFunction(ct_terms=((Disk(0.5, 0.1), 1.0),))
    x = -(2.0**-4)
    q = quotient_via_cauchy(f, x, CONE, N=8, M=1, tol=1e-10)
    assert abs(q - f(x) / x) <= 1e-8


def test_quotient_default_inner_index():
    assert default_inner_index(-0.1, CONE) == max(2, math.ceil(-math.log2(0.025)))
    f = GalleryFunction(poly_coeffs=(0, 1))
    q = quotient_via_cauchy(f, -0.1, CONE, M=1, tol=1e-10)
    assert abs(q - 1.0) <= 1e-8


def test_quotient_rejects_x_outside_cone():
    f = GalleryFunction(poly_coeffs=(0, 1))
    with pytest.raises(ContourError):
        quotient_via_cauchy(f, 0.1, CONE, N=8, M=1)
    with pytest.raises(ContourError):
        quotient_via_cauchy(f, -0.6, CONE, N=8, M=1)


def test_decomposition_poly():
    f = GalleryFunction(poly_coeffs=(0, 0, 1))
    rep = annular_decomposition(f, -0.1, CONE, M=2, N=5, tol=1e-10)
    assert rep.residual <= 2e-10
    assert abs(rep.lhs - (-0.1)) <= 1e-14
    assert [n for n, _ in rep.annular_terms] == [2, 3, 4, 5]


def test_decomposition_single_circle_reduction():
    f = GalleryFunction(poly_coeffs=(0, 0, 1))
    rep = annular_decomposition(f, -0.1, CONE, M=2, N=2, tol=1e-10)
    assert rep.residual <= 2e-10
    assert rep.annular_terms == ()


def test_decomposition_ct_gallery(domain):
    f = GalleryFunction(ct_terms=((domain.holes[2], 1.0),))
    rep = annular_decomposition(f, -0.1, CONE, M=1, N=10, tol=1e-10)
    assert rep.residual <= 2e-10


def test_decomposition_term_decay(domain):
    # annular terms decay toward the vertex like the 4^n-weighted contents
    f = GalleryFunction(ct_terms=((domain.holes[0], 1.0),))
    rep = annular_decomposition(f, -0.1, CONE, M=1, N=10, tol=1e-10)
    mags = {n: abs(t) for n, t in rep.annular_terms}
    assert mags[10] < mags[5] < mags[3]


def test_cone_kernel_inequality():
    # |x| / |z - x| <= 1/k for z outside the cone, x on the axis inside it
    for n in (3, 5, 7):
        path = build_annular_piece(n, CONE)
        z = path.sample_points(64)
        ri, _ = annulus_radii(n)
        x = -1.5 * ri  # on the cone axis, inside annulus n
        assert np.max(abs(x) / np.abs(z - x)) <= 1.0 / CONE.k + 1e-9
        assert np.max(1.0 / (np.abs(z) * np.abs(z - x))) <= (
            (1.0 + 1.0 / CONE.k) / ri**2 + 1e-9
        )


# ---------------------------------------------------------------------------
# Lemma checks and kernel ratios


def test_lemma_check_conjugate():
    # frozen closed forms: |integral| = 2 pi r^2, content (2r)^1.5, seminorm (2r)^0.5
    r = 0.2
    rep = lemma_cauchy_bound_check(
        conjugate_function(), full_circle(0j, r), DiskRegion(0j, r), 0.5
    )
    assert rep.integral_magnitude == pytest.approx(2 * math.pi * r * r, rel=1e-9)
    assert rep.content_upper == pytest.approx(0.4**1.5, rel=1e-12)
    assert rep.seminorm_estimate == pytest.approx(0.6324555320336759, rel=0.01)
    assert rep.kappa_hat == pytest.approx(math.pi / 2, rel=0.02)


def test_lemma_check_analytic_zero():
    f = GalleryFunction(poly_coeffs=(0, 0, 1))
    rep = lemma_cauchy_bound_check(f, full_circle(0j, 0.3), DiskRegion(0j, 0.3), 0.5)
    assert rep.integral_magnitude <= 1e-10
    assert rep.kappa_hat <= 1e-8


def test_lemma_check_scale_invariance():
    vals = []
    for r in (0.4, 0.2, 0.1):
        rep = lemma_cauchy_bound_check(
            conjugate_function(), full_circle(0j, r), DiskRegion(0j, r), 0.5
        )
        vals.append(rep.kappa_hat)
    assert max(vals) / min(vals) <= 1.05


def test_lemma_check_requires_closed_path():
    open_path = ContourPath((Segment(0, 1),), closed=False)
    with pytest.raises(ContourError):
        lemma_cauchy_bound_check(conjugate_function(), open_path, DiskRegion(0j, 1.0), 0.5)


def test_kernel_ratio_zero_function():
    f = GalleryFunction(poly_coeffs=(0,))
    assert kernel_seminorm_ratio(f, -0.25 * 2.0**-4, 4, CONE, 0.5) == 0.0


def test_kernel_ratio_two_scale_stability():
    # doubling n multiplies seminorm(g) by about 4; the normalized ratio drifts
    # only by the smooth-kernel factor, well under 4x per step
    f = GalleryFunction(poly_coeffs=(0, 1))
    r4 = kernel_seminorm_ratio(f, -0.25 * 2.0**-4, 4, CONE, 0.8, seed=5)
    r5 = kernel_seminorm_ratio(f, -0.25 * 2.0**-5, 5, CONE, 0.8, seed=5)
    assert 0.25 <= r5 / r4 <= 4.0


def test_kernel_ratio_position_precondition():
    f = GalleryFunction(poly_coeffs=(0, 1))
    with pytest.raises(ContourError):
        # far from the vertex and not inside the cone
        kernel_seminorm_ratio(f, 0.3, 4, CONE, 0.5)
