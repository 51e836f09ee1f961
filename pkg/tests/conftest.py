import math

import pytest

from pointderiv import ConeSpec, Ray, RoadrunnerFamily, build_test_gallery


@pytest.fixture(scope="session")
def family():
    # one hole per dyadic annulus on the positive axis, radii 4^-n
    return RoadrunnerFamily()


@pytest.fixture(scope="session")
def domain(family):
    return family.domain()


@pytest.fixture(scope="session")
def cone():
    # opens along the negative axis, away from every hole
    return ConeSpec(vertex=0j, direction=math.pi, half_angle=math.pi / 6, length=0.5, k=0.45)


@pytest.fixture(scope="session")
def ray():
    return Ray(origin=0j, direction=math.pi, length=0.25)


@pytest.fixture(scope="session")
def gallery(domain):
    return build_test_gallery(domain, 20)
