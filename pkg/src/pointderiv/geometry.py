"""Planar Swiss-cheese domains: disks, dyadic annuli, interior cones and rays.

All shapes are immutable; points are plain complex numbers.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np


class GeometryError(ValueError):
    """Invalid geometric input or violated precondition."""


def _require_finite(z: complex, what: str) -> complex:
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise GeometryError(f"{what} must have finite components, got {z}")
    return z


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _require_finite(self.center, "disk center"))
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0):
            raise GeometryError(f"disk radius must be positive and finite, got {r}")
        object.__setattr__(self, "radius", r)

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    def contains(self, z: complex, closed: bool = True) -> bool:
        d = abs(complex(z) - self.center)
        return d <= self.radius if closed else d < self.radius

    def bounding_box(self) -> tuple[float, float, float, float]:
        c, r = self.center, self.radius
        return (c.real - r, c.imag - r, c.real + r, c.imag + r)


def annulus_radii(n: int, scale: float = 1.0) -> tuple[float, float]:
    """Inner/outer radii of the dyadic annulus with index n (outer radius 2^-n)."""
    if n < 1:
        raise GeometryError(f"annulus index must be >= 1, got {n}")
    return scale * 2.0 ** (-(n + 1)), scale * 2.0 ** (-n)


@dataclass(frozen=True)
class SwissCheeseDomain:
    """Open outer disk minus finitely many closed holes, with a boundary base point.

    ``base_point_kind`` records why the base point belongs to the boundary:
    "puncture" (explicitly removed point), "accumulation" (holes pile up at
    it; with a finite truncation this is recorded, not proven), or "none"
    (the base point is not treated as a boundary point at all).
    """

    outer: Disk = Disk(0j, 1.0)
    holes: tuple[Disk, ...] = ()
    base_point: complex = 0j
    base_point_kind: str = "auto"
    family: object | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "holes", tuple(self.holes))
        object.__setattr__(
            self, "base_point", _require_finite(self.base_point, "base point")
        )
        for h in self.holes:
            if abs(h.center - self.outer.center) + h.radius >= self.outer.radius:
                raise GeometryError(
                    f"hole {h} does not lie inside the open outer disk {self.outer}"
                )
        for i, a in enumerate(self.holes):
            for b in self.holes[i + 1 :]:
                if abs(a.center - b.center) <= a.radius + b.radius:
                    raise GeometryError(f"holes {a} and {b} are not disjoint")
        for h in self.holes:
            if h.contains(self.base_point):
                raise GeometryError(f"hole {h} contains the base point")
        kind = self.base_point_kind
        if kind == "auto":
            if abs(abs(self.base_point - self.outer.center) - self.outer.radius) < 1e-12:
                kind = "none"  # already on the outer circle
            elif self.holes:
                kind = "accumulation"
            else:
                kind = "puncture"
        if kind not in ("puncture", "accumulation", "none"):
            raise GeometryError(f"unknown base_point_kind {kind!r}")
        if kind in ("puncture", "accumulation"):
            if abs(self.base_point - self.outer.center) >= self.outer.radius:
                raise GeometryError("base point must lie in the closed outer disk")
        object.__setattr__(self, "base_point_kind", kind)

    @property
    def base_is_boundary(self) -> bool:
        return self.base_point_kind in ("puncture", "accumulation")

    def contains(self, z: complex) -> bool:
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            return False
        if abs(z - self.outer.center) >= self.outer.radius:
            return False
        if self.base_is_boundary and z == self.base_point:
            return False
        for h in self.holes:
            if abs(z - h.center) <= h.radius:
                return False
        return True

    def boundary_distance(self, z: complex) -> float:
        """Distance from an interior point to the boundary of the domain."""
        z = complex(z)
        if not self.contains(z):
            raise GeometryError(f"{z} is not an interior point of the domain")
        d = self.outer.radius - abs(z - self.outer.center)
        for h in self.holes:
            d = min(d, abs(z - h.center) - h.radius)
        if self.base_is_boundary:
            d = min(d, abs(z - self.base_point))
        return d

    def scaled(self, lam: float) -> "SwissCheeseDomain":
        """Domain with all disks and the base point scaled about the origin."""
        if lam <= 0:
            raise GeometryError("scale factor must be positive")
        return SwissCheeseDomain(
            outer=Disk(lam * self.outer.center, lam * self.outer.radius),
            holes=tuple(Disk(lam * h.center, lam * h.radius) for h in self.holes),
            base_point=lam * self.base_point,
            base_point_kind=self.base_point_kind,
        )


@dataclass(frozen=True)
class Ray:
    """Straight segment from origin along a fixed direction."""

    origin: complex
    direction: float
    length: float

    def __post_init__(self):
        object.__setattr__(self, "origin", _require_finite(self.origin, "ray origin"))
        if not (math.isfinite(self.length) and self.length > 0):
            raise GeometryError("ray length must be positive")

    def point(self, t: float) -> complex:
        """Point at distance t from the origin, 0 < t <= length."""
        return self.origin + t * cmath.exp(1j * self.direction)


@dataclass(frozen=True)
class ConeSpec:
    """Truncated open sector with vertex at the base point.

    ``k`` is the claimed cone-opening constant; it can be at most
    sin(half_angle) for a sector.
    """

    vertex: complex
    direction: float
    half_angle: float
    length: float
    k: float

    def __post_init__(self):
        object.__setattr__(self, "vertex", _require_finite(self.vertex, "cone vertex"))
        if not (0.0 < self.half_angle < math.pi / 2):
            raise GeometryError("half_angle must lie in (0, pi/2)")
        if not (math.isfinite(self.length) and self.length > 0):
            raise GeometryError("cone length must be positive")
        if not (0.0 < self.k <= math.sin(self.half_angle) + 1e-12):
            raise GeometryError("k must be positive and at most sin(half_angle)")

    def contains(self, z: complex, closed: bool = True) -> bool:
        w = complex(z) - self.vertex
        r = abs(w)
        if r == 0.0:
            return closed
        if r > self.length if closed else r >= self.length:
            return False
        dphi = _angle_diff(cmath.phase(w), self.direction)
        return dphi <= self.half_angle if closed else dphi < self.half_angle

    def axis_ray(self, length: float | None = None) -> Ray:
        return Ray(self.vertex, self.direction, length or self.length)


def _angle_diff(a: float, b: float) -> float:
    d = math.fmod(a - b, 2.0 * math.pi)
    if d > math.pi:
        d -= 2.0 * math.pi
    if d < -math.pi:
        d += 2.0 * math.pi
    return abs(d)


def validate_cone(domain: SwissCheeseDomain, cone: ConeSpec, samples: int = 400) -> None:
    """Sampled check that the closed truncated sector lies in U plus its vertex."""
    if cone.vertex != domain.base_point:
        raise GeometryError("cone vertex must be the domain base point")
    rng = np.random.default_rng(1234)
    r = cone.length * np.sqrt(rng.random(samples))
    phi = cone.direction + cone.half_angle * (2.0 * rng.random(samples) - 1.0)
    pts = cone.vertex + r * np.exp(1j * phi)
    # deterministic edge/axis samples as well
    for t in np.geomspace(cone.length, cone.length * 2.0**-20, 30):
        for a in (-cone.half_angle, 0.0, cone.half_angle):
            p = cone.vertex + t * cmath.exp(1j * (cone.direction + a))
            if not domain.contains(p):
                raise GeometryError(f"cone sample {p} lies outside the domain")
    for p in pts:
        if not domain.contains(complex(p)):
            raise GeometryError(f"cone sample {complex(p)} lies outside the domain")


def verify_interior_cone(
    domain: SwissCheeseDomain, ray: Ray, sample_count: int = 24
) -> float:
    """Lower estimate of the cone constant k along a non-tangential ray.

    Samples the ray at dyadically spaced distances and returns the minimum of
    boundary_distance(x) / |x - x0|.
    """
    if ray.origin != domain.base_point:
        raise GeometryError("ray must start at the domain base point")
    if sample_count < 2:
        raise GeometryError("sample_count must be >= 2")
    # exact segment/hole intersection check; sampling alone can slip between
    # dyadic points even when the ray crosses a hole
    u = cmath.exp(1j * ray.direction)
    for h in domain.holes:
        w = h.center - ray.origin
        t = min(max((w / u).real, 0.0), ray.length)
        if abs(ray.origin + t * u - h.center) <= h.radius:
            raise GeometryError(f"ray passes through hole {h}")
    k = math.inf
    for i in range(sample_count):
        t = ray.length * 2.0**-i
        x = ray.point(t)
        if not domain.contains(x):
            raise GeometryError(f"ray sample {x} lies outside the domain")
        k = min(k, domain.boundary_distance(x) / abs(x - domain.base_point))
    return k


# ---------------------------------------------------------------------------
# Annulus complements


@dataclass(frozen=True)
class ClippedPiece:
    """Intersection of a hole with a closed dyadic annulus about the base point."""

    hole: Disk
    annulus_center: complex
    n: int
    r_inner: float
    r_outer: float
    is_whole: bool

    def contains(self, z: complex) -> bool:
        z = complex(z)
        if abs(z - self.hole.center) > self.hole.radius:
            return False
        r = abs(z - self.annulus_center)
        return self.r_inner <= r <= self.r_outer

    def bounding_box(self) -> tuple[float, float, float, float]:
        hx0, hy0, hx1, hy1 = self.hole.bounding_box()
        a, ro = self.annulus_center, self.r_outer
        x0 = max(hx0, a.real - ro)
        y0 = max(hy0, a.imag - ro)
        x1 = min(hx1, a.real + ro)
        y1 = min(hy1, a.imag + ro)
        return (x0, y0, x1, y1)

    def boundary_samples(self, per_curve: int = 1024) -> np.ndarray:
        """Points on the boundary of the clipped region (complex array)."""
        th = np.linspace(0.0, 2.0 * math.pi, per_curve, endpoint=False)
        pts = [self.hole.center + self.hole.radius * np.exp(1j * th)]
        if not self.is_whole:
            rr = np.abs(pts[0] - self.annulus_center)
            pts[0] = pts[0][(rr >= self.r_inner) & (rr <= self.r_outer)]
            for rad in (self.r_inner, self.r_outer):
                circ = self.annulus_center + rad * np.exp(1j * th)
                inside = np.abs(circ - self.hole.center) <= self.hole.radius
                pts.append(circ[inside])
        return np.concatenate(pts)

    def diameter(self) -> float:
        if self.is_whole:
            return self.hole.diameter
        return _point_set_diameter(self.boundary_samples())

    def sample_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Points of the piece, by rejection from the hole disk."""
        out: list[np.ndarray] = []
        have = 0
        while have < count:
            m = max(4 * (count - have), 64)
            r = self.hole.radius * np.sqrt(rng.random(m))
            phi = 2.0 * math.pi * rng.random(m)
            z = self.hole.center + r * np.exp(1j * phi)
            rr = np.abs(z - self.annulus_center)
            z = z[(rr >= self.r_inner) & (rr <= self.r_outer)]
            out.append(z[: count - have])
            have += len(out[-1])
        return np.concatenate(out)


def _point_set_diameter(pts: np.ndarray) -> float:
    """Diameter of a finite planar point set via its convex hull."""
    if len(pts) < 2:
        return 0.0
    xy = np.column_stack([pts.real, pts.imag])
    try:
        from scipy.spatial import ConvexHull

        hull = xy[ConvexHull(xy).vertices]
    except Exception:
        hull = xy if len(xy) <= 2048 else xy[:: len(xy) // 2048 + 1]
    d2 = ((hull[:, None, :] - hull[None, :, :]) ** 2).sum(-1)
    return float(np.sqrt(d2.max()))


def annulus_complement(domain: SwissCheeseDomain, n: int) -> list[ClippedPiece]:
    """Pieces hole ∩ A_n for each hole meeting the dyadic annulus A_n."""
    ri, ro = annulus_radii(n)
    x0 = domain.base_point
    pieces = []
    for h in domain.holes:
        d = abs(h.center - x0)
        lo, hi = d - h.radius, d + h.radius
        if hi < ri or lo > ro:
            continue
        whole = lo >= ri and hi <= ro
        pieces.append(
            ClippedPiece(
                hole=h,
                annulus_center=x0,
                n=n,
                r_inner=ri,
                r_outer=ro,
                is_whole=whole,
            )
        )
    return pieces


# ---------------------------------------------------------------------------
# Sampling regions (used by seminorm estimators and lemma checks)


@dataclass(frozen=True)
class DiskRegion:
    center: complex
    radius: float

    def contains(self, z: complex) -> bool:
        return abs(complex(z) - self.center) <= self.radius

    def diameter(self) -> float:
        return 2.0 * self.radius

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        r = self.radius * np.sqrt(rng.random(count))
        phi = 2.0 * math.pi * rng.random(count)
        return self.center + r * np.exp(1j * phi)

    def boundary_points(self, count: int = 32) -> np.ndarray:
        th = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
        return self.center + self.radius * np.exp(1j * th)

    def extremal_pairs(self, count: int = 16) -> list[tuple[complex, complex]]:
        th = np.linspace(0.0, math.pi, count, endpoint=False)
        return [
            (
                self.center + self.radius * complex(np.cos(t), np.sin(t)),
                self.center - self.radius * complex(np.cos(t), np.sin(t)),
            )
            for t in th
        ]


@dataclass(frozen=True)
class AnnularSectorRegion:
    """{z : r_inner <= |z - center| <= r_outer, angle in [start, start+span]}."""

    center: complex
    r_inner: float
    r_outer: float
    angle_start: float
    angle_span: float

    def contains(self, z: complex) -> bool:
        w = complex(z) - self.center
        r = abs(w)
        if not (self.r_inner <= r <= self.r_outer):
            return False
        d = math.fmod(cmath.phase(w) - self.angle_start, 2.0 * math.pi)
        if d < 0:
            d += 2.0 * math.pi
        return d <= self.angle_span

    def diameter(self) -> float:
        return _point_set_diameter(self.boundary_points(256))

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        u = rng.random(count)
        r = np.sqrt(self.r_inner**2 + u * (self.r_outer**2 - self.r_inner**2))
        phi = self.angle_start + self.angle_span * rng.random(count)
        return self.center + r * np.exp(1j * phi)

    def boundary_points(self, count: int = 48) -> np.ndarray:
        m = max(count // 4, 4)
        th = np.linspace(self.angle_start, self.angle_start + self.angle_span, m)
        rr = np.linspace(self.r_inner, self.r_outer, m)
        pts = [
            self.center + self.r_outer * np.exp(1j * th),
            self.center + self.r_inner * np.exp(1j * th),
            self.center + rr * np.exp(1j * self.angle_start),
            self.center + rr * np.exp(1j * (self.angle_start + self.angle_span)),
        ]
        return np.concatenate(pts)

    def extremal_pairs(self, count: int = 16) -> list[tuple[complex, complex]]:
        b = self.boundary_points(max(count, 16))
        # pair opposite-index boundary points; sup pairs are among these
        half = len(b) // 2
        return [(complex(b[i]), complex(b[i + half])) for i in range(half)]

    def scaled(self, lam: float) -> "AnnularSectorRegion":
        return AnnularSectorRegion(
            lam * self.center,
            lam * self.r_inner,
            lam * self.r_outer,
            self.angle_start,
            self.angle_span,
        )


def annulus_minus_cone_region(cone: ConeSpec, n: int) -> AnnularSectorRegion:
    """The region D_n: dyadic annulus n about the cone vertex, minus the cone."""
    ri, ro = annulus_radii(n)
    if ro > cone.length + 1e-15:
        raise GeometryError(f"annulus {n} extends beyond the cone truncation radius")
    return AnnularSectorRegion(
        center=cone.vertex,
        r_inner=ri,
        r_outer=ro,
        angle_start=cone.direction + cone.half_angle,
        angle_span=2.0 * math.pi - 2.0 * cone.half_angle,
    )
