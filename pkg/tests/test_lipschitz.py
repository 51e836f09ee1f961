import math

import numpy as np
import pytest

from pointderiv import (
    Disk,
    DiskRegion,
    GalleryFunction,
    build_test_gallery,
    conjugate_function,
    disk_cauchy_transform,
    little_lip_modulus,
    seminorm_estimate,
)
from pointderiv.lipschitz import GalleryError

CT_DISK = Disk(0.5, 0.125)


def test_poly_eval():
    f = GalleryFunction(poly_coeffs=(0, 0, 1))  # z^2
    assert f(0.3) == pytest.approx(0.09)


def test_ct_value_at_origin():
    # frozen oracle 0.0981750 from 2-D midpoint quadrature of the area integral
    val = complex(disk_cauchy_transform(CT_DISK, 0.0))
    assert val == pytest.approx(0.0981750001, abs=5e-6)
    assert val == pytest.approx(math.pi / 32, abs=1e-12)


def test_ct_value_at_center():
    assert complex(disk_cauchy_transform(CT_DISK, 0.5)) == 0.0


def test_ct_continuous_across_boundary():
    for ang in np.linspace(0, 2 * math.pi, 17):
        b = CT_DISK.center + CT_DISK.radius * complex(math.cos(ang), math.sin(ang))
        outside = math.pi * CT_DISK.radius**2 / (CT_DISK.center - b)
        inside = -math.pi * (b - CT_DISK.center).conjugate()
        mid = complex(disk_cauchy_transform(CT_DISK, b))
        assert abs(mid - outside) < 1e-9
        assert abs(mid - inside) < 1e-9


def test_gallery_vanishes_at_base_point():
    f = GalleryFunction(ct_terms=((CT_DISK, 1.0),), poly_coeffs=(3, 1))
    assert f(0j) == 0j


def test_gallery_eval_at_pole_raises():
    f = GalleryFunction(rational_terms=((0.5, 1.0),))
    with pytest.raises(GalleryError):
        f(0.5)


def test_derivative_poly():
    f = GalleryFunction(poly_coeffs=(0, 0, 1))
    assert f.derivative(0j) == 0j


def test_derivative_ct():
    # frozen oracle 0.1963495409 from central finite differences of the value
    f = GalleryFunction(ct_terms=((CT_DISK, 1.0),))
    assert f.derivative(0j) == pytest.approx(0.1963495409, abs=1e-9)
    assert f.derivative(0j) == pytest.approx(math.pi / 16, abs=1e-12)


def test_derivative_rational():
    f = GalleryFunction(rational_terms=((0.5, 1.0),))
    assert f.derivative(0j) == pytest.approx(-4.0)


def test_derivative_inside_ct_disk_raises():
    f = GalleryFunction(ct_terms=((CT_DISK, 1.0),))
    with pytest.raises(GalleryError):
        f.derivative(0.5)


def test_derivative_matches_finite_differences():
    f = GalleryFunction(
        poly_coeffs=(0, 1j, 0.25),
        rational_terms=((0.5, 0.2),),
        ct_terms=((CT_DISK, 0.5j),),
    )
    h = 1e-5
    for z in (0j, -0.3, 0.2j, -0.1 - 0.1j):
        fd = (f(z + h) - f(z - h)) / (2 * h)
        assert abs(fd - f.derivative(z)) <= 1e-6 * max(1.0, abs(f.derivative(z)))


def test_seminorm_conjugate():
    # sup |conj z - conj w| / |z - w|^0.5 on the unit disk = 2^0.5, at a diameter
    f = conjugate_function()
    est = seminorm_estimate(f, DiskRegion(0j, 1.0), 0.5, pair_count=2000, seed=1)
    assert 1.40 <= est.value <= math.sqrt(2) + 1e-9


def test_seminorm_identity():
    est = seminorm_estimate(lambda z: z, DiskRegion(0j, 1.0), 0.5, pair_count=2000)
    assert 1.40 <= est.value <= math.sqrt(2) + 1e-9


def test_seminorm_constant_zero():
    est = seminorm_estimate(lambda z: np.full_like(np.asarray(z, complex), 2.0),
                            DiskRegion(0j, 1.0), 0.5)
    assert est.value == 0.0


def test_seminorm_monotone_in_region():
    f = conjugate_function()
    small = seminorm_estimate(f, DiskRegion(0j, 0.5), 0.5, seed=2).value
    large = seminorm_estimate(f, DiskRegion(0j, 1.0), 0.5, seed=2).value
    assert small <= large + 1e-12


def test_seminorm_pair_count_validation():
    with pytest.raises(GalleryError):
        seminorm_estimate(lambda z: z, DiskRegion(0j, 1.0), 0.5, pair_count=10)


def test_little_lip_modulus_conjugate():
    # oracle: ratio at separation delta is exactly delta^0.5 for conj
    f = conjugate_function()
    table = little_lip_modulus(f, DiskRegion(0j, 1.0), 0.5, [0.04, 0.02, 0.01])
    for delta, eps in table:
        assert eps == pytest.approx(delta**0.5, rel=0.02)
    assert table[-1][1] == pytest.approx(0.1, rel=0.02)
    vals = [eps for _, eps in table]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_little_lip_modulus_halving():
    f = GalleryFunction(poly_coeffs=(0, 1))
    table = little_lip_modulus(f, DiskRegion(0j, 1.0), 0.5, [0.08, 0.04])
    assert table[1][1] / table[0][1] == pytest.approx(2 ** -0.5, rel=0.03)


def test_little_lip_modulus_constant():
    table = little_lip_modulus(
        lambda z: np.zeros_like(np.asarray(z, complex)),
        DiskRegion(0j, 1.0), 0.5, [0.1, 0.05],
    )
    assert all(eps == 0.0 for _, eps in table)


def test_little_lip_requires_decreasing():
    with pytest.raises(GalleryError):
        little_lip_modulus(lambda z: z, DiskRegion(0j, 1.0), 0.5, [0.01, 0.02])


def test_build_test_gallery(domain, gallery):
    assert len(gallery) == 20
    for f in gallery:
        assert f(0j) == 0j
        f.validate_for_domain(domain)


def test_validate_for_domain_rejects_outside_pole(domain):
    f = GalleryFunction(rational_terms=((0.5j, 1.0),))
    with pytest.raises(GalleryError):
        f.validate_for_domain(domain)
