"""Keyhole and annular contours with adaptive quadrature, plus the numerical
checks of the Cauchy-identity machinery: difference quotients via the Cauchy
integral, per-annulus decomposition, the Lipschitz-Cauchy bound ratio, and
kernel seminorm ratios.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .content import disjoint_disk_content
from .geometry import (
    AnnularSectorRegion,
    ClippedPiece,
    ConeSpec,
    Disk,
    DiskRegion,
    GeometryError,
    annulus_minus_cone_region,
    annulus_radii,
)
from .lipschitz import GalleryFunction, seminorm_estimate


class ContourError(ValueError):
    pass


class PoleTooCloseError(ContourError):
    pass


class ToleranceError(ContourError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, message, best=None, error_estimate=None):
        super().__init__(message)
        self.best = best
        self.error_estimate = error_estimate


# ---------------------------------------------------------------------------
# Path primitives


@dataclass(frozen=True)
class Arc:
    """Circular arc from angle a0 to a1 (counterclockwise iff a1 > a0)."""

    center: complex
    radius: float
    a0: float
    a1: float

    def point(self, t):
        ang = self.a0 + (self.a1 - self.a0) * np.asarray(t)
        return self.center + self.radius * np.exp(1j * ang)

    def velocity(self, t):
        ang = self.a0 + (self.a1 - self.a0) * np.asarray(t)
        return 1j * (self.a1 - self.a0) * self.radius * np.exp(1j * ang)

    @property
    def length(self) -> float:
        return abs(self.a1 - self.a0) * self.radius

    def reversed(self) -> "Arc":
        return Arc(self.center, self.radius, self.a1, self.a0)


@dataclass(frozen=True)
class Segment:
    z0: complex
    z1: complex

    def point(self, t):
        return self.z0 + (self.z1 - self.z0) * np.asarray(t)

    def velocity(self, t):
        t = np.asarray(t)
        return np.broadcast_to(self.z1 - self.z0, t.shape).copy() if t.shape else self.z1 - self.z0

    @property
    def length(self) -> float:
        return abs(self.z1 - self.z0)

    def reversed(self) -> "Segment":
        return Segment(self.z1, self.z0)


Primitive = Arc | Segment

_JOIN_TOL = 1e-12


def _polylines_cross(a: np.ndarray, b: np.ndarray) -> bool:
    """True if the sampled polylines have a transversal segment intersection."""
    a0, a1 = a[:-1], a[1:]
    b0, b1 = b[:-1], b[1:]

    def cross(o, p, q):
        u = p - o
        v = q - o
        return (u.real * v.imag - u.imag * v.real).real

    d1 = cross(a0[:, None], a1[:, None], b0[None, :])
    d2 = cross(a0[:, None], a1[:, None], b1[None, :])
    d3 = cross(b0[None, :], b1[None, :], a0[:, None])
    d4 = cross(b0[None, :], b1[None, :], a1[:, None])
    return bool(np.any((d1 * d2 < 0) & (d3 * d4 < 0)))


@dataclass(frozen=True)
class ContourPath:
    segments: tuple[Primitive, ...]
    closed: bool = True
    check_simple: bool = True

    def __post_init__(self):
        prims = tuple(self.segments)
        if not prims:
            raise ContourError("a path needs at least one primitive")
        object.__setattr__(self, "segments", prims)
        scale = max(max(abs(p.point(0.0)), abs(p.point(1.0))) for p in prims) or 1.0
        for a, b in zip(prims, prims[1:]):
            if abs(a.point(1.0) - b.point(0.0)) > _JOIN_TOL * max(scale, 1.0):
                raise ContourError(
                    f"consecutive primitives do not join: {a.point(1.0)} vs {b.point(0.0)}"
                )
        if self.closed:
            gap = abs(prims[-1].point(1.0) - prims[0].point(0.0))
            if gap > _JOIN_TOL * max(scale, 1.0):
                raise ContourError(f"closed path does not return to start (gap {gap})")
        if self.check_simple:
            self._check_simple()

    def _check_simple(self, samples: int = 48):
        ts = np.linspace(0.0, 1.0, samples)
        pts = [p.point(ts) for p in self.segments]
        n = len(pts)
        scale = max(float(np.abs(q).max()) for q in pts) or 1.0
        for i in range(n):
            for j in range(i + 1, n):
                adjacent = j == i + 1 or (self.closed and i == 0 and j == n - 1)
                a, b = pts[i], pts[j]
                d = np.abs(a[:, None] - b[None, :])
                if adjacent:
                    # allow contact only at the shared endpoint
                    d = d[1:-1, 1:-1]
                if d.size and d.min() < 1e-9 * scale:
                    raise ContourError("path is not simple (primitives intersect)")
                if not adjacent and _polylines_cross(a, b):
                    raise ContourError("path is not simple (primitives cross)")

    @property
    def total_length(self) -> float:
        return sum(p.length for p in self.segments)

    @property
    def cusp_free(self) -> bool:
        """No outward-pointing cusps: tangents never reverse at a joint."""
        prims = self.segments
        joints = list(zip(prims, prims[1:]))
        if self.closed:
            joints.append((prims[-1], prims[0]))
        for a, b in joints:
            va = complex(a.velocity(1.0))
            vb = complex(b.velocity(0.0))
            if abs(va) == 0 or abs(vb) == 0:
                continue
            ang = abs(cmath.phase(vb / va))
            if ang > math.pi - 1e-9:
                return False
        return True

    def reversed(self) -> "ContourPath":
        return ContourPath(
            tuple(p.reversed() for p in reversed(self.segments)),
            closed=self.closed,
            check_simple=False,
        )

    def sample_points(self, per_primitive: int = 64) -> np.ndarray:
        ts = np.linspace(0.0, 1.0, per_primitive)
        return np.concatenate([p.point(ts) for p in self.segments])


# ---------------------------------------------------------------------------
# Adaptive quadrature

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(15)


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    evaluations: int


def _gl(F, a: float, b: float, stats: list) -> complex:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    vals = F(mid + half * _GL_NODES)
    stats[0] += len(_GL_NODES)
    return half * complex(np.sum(vals * _GL_WEIGHTS))


def _adaptive(F, a: float, b: float, tol: float, stats: list, depth: int = 0):
    coarse = _gl(F, a, b, stats)
    m = 0.5 * (a + b)
    fine = _gl(F, a, m, stats) + _gl(F, m, b, stats)
    err = abs(fine - coarse)
    if err <= tol or err <= 1e-16 * (1.0 + abs(fine)):
        return fine, err
    if depth >= 48:
        raise ToleranceError(
            f"adaptive quadrature stalled on [{a}, {b}] (err {err:.3g} > tol {tol:.3g})",
            best=fine,
            error_estimate=err,
        )
    v1, e1 = _adaptive(F, a, m, tol / 2.0, stats, depth + 1)
    v2, e2 = _adaptive(F, m, b, tol / 2.0, stats, depth + 1)
    return v1 + v2, e1 + e2


def integrate_contour(
    path: ContourPath,
    integrand,
    tol: float = 1e-10,
    poles=(),
    pole_clearance: float | None = None,
) -> QuadratureResult:
    """Adaptive contour integral of `integrand` along the path.

    `integrand` must accept a complex numpy array.  If `poles` is given, the
    sampled path must stay at least `pole_clearance` away from each of them.
    """
    if tol <= 0:
        raise ContourError("tolerance must be positive")
    if poles:
        pts = path.sample_points(128)
        clearance = pole_clearance
        if clearance is None:
            clearance = 1e-3 * path.total_length
        for p in poles:
            if np.abs(pts - p).min() < clearance:
                raise PoleTooCloseError(
                    f"pole {p} is within {clearance} of the integration path"
                )
    total_len = path.total_length
    stats = [0]
    value = 0j
    err = 0.0
    for prim in path.segments:
        frac = prim.length / total_len if total_len > 0 else 1.0 / len(path.segments)

        def F(t, prim=prim):
            z = prim.point(t)
            return np.asarray(integrand(z)) * prim.velocity(t)

        v, e = _adaptive(F, 0.0, 1.0, tol * frac, stats)
        value += v
        err += e
    return QuadratureResult(value=value, error_estimate=err, evaluations=stats[0])


def winding_number(path: ContourPath, z0: complex, tol: float = 1e-8) -> float:
    res = integrate_contour(path, lambda z: 1.0 / (z - z0), tol=tol)
    return (res.value / (2j * math.pi)).real


# ---------------------------------------------------------------------------
# Contour builders


def build_keyhole(cone: ConeSpec, N: int, M: int) -> ContourPath:
    """Positively oriented boundary of (sector of radius 2^-M) union B_N.

    The big arc spans the cone opening, the small circle's major arc closes
    it outside the cone; two radial segments run along the cone edges.
    """
    r_big = 2.0**-M
    r_small = 2.0**-N
    if not r_small < r_big:
        raise ContourError("need 2^-N < 2^-M")
    if cone.length < r_big - 1e-15:
        raise ContourError(
            f"cone length {cone.length} is shorter than the sector radius {r_big}"
        )
    v, th, b = cone.vertex, cone.direction, cone.half_angle
    lo, hi = th - b, th + b
    e_lo, e_hi = cmath.exp(1j * lo), cmath.exp(1j * hi)
    prims = (
        Arc(v, r_big, lo, hi),
        Segment(v + r_big * e_hi, v + r_small * e_hi),
        Arc(v, r_small, hi, lo + 2.0 * math.pi),
        Segment(v + r_small * e_lo, v + r_big * e_lo),
    )
    return ContourPath(prims, closed=True)


def build_annular_piece(n: int, cone: ConeSpec) -> ContourPath:
    """Positively oriented boundary of D_n = (dyadic annulus n) minus the cone."""
    ri, ro = annulus_radii(n)
    if ro > cone.length + 1e-15:
        raise ContourError(f"annulus {n} lies outside the cone truncation radius")
    v, th, b = cone.vertex, cone.direction, cone.half_angle
    lo, hi = th - b, th + b
    e_lo, e_hi = cmath.exp(1j * lo), cmath.exp(1j * hi)
    prims = (
        Arc(v, ro, hi, lo + 2.0 * math.pi),
        Segment(v + ro * e_lo, v + ri * e_lo),
        Arc(v, ri, lo + 2.0 * math.pi, hi),
        Segment(v + ri * e_hi, v + ro * e_hi),
    )
    return ContourPath(prims, closed=True)


def full_circle(center: complex, radius: float) -> ContourPath:
    half1 = Arc(center, radius, 0.0, math.pi)
    half2 = Arc(center, radius, math.pi, 2.0 * math.pi)
    return ContourPath((half1, half2), closed=True, check_simple=False)


# ---------------------------------------------------------------------------
# Cauchy quotient and decomposition


def _check_x_admissible(x: complex, cone: ConeSpec, N: int, M: int):
    w = x - cone.vertex
    r = abs(w)
    if not (2.0**-N < r < 2.0**-M):
        raise ContourError(f"|x - vertex| = {r} is not inside (2^-{N}, 2^-{M})")
    if not cone.contains(x, closed=False):
        raise ContourError(f"x = {x} does not lie inside the cone")


def default_inner_index(x: complex, cone: ConeSpec, minimum: int = 2) -> int:
    """Smallest N with 2^-N <= |x - vertex| / 4."""
    r = abs(x - cone.vertex)
    return max(minimum, int(math.ceil(-math.log2(r / 4.0))))


def quotient_via_cauchy(
    f: GalleryFunction,
    x: complex,
    cone: ConeSpec,
    N: int | None = None,
    M: int = 1,
    tol: float = 1e-10,
) -> complex:
    """(f(x) - f(x0)) / (x - x0) computed via the keyhole Cauchy integral."""
    v = cone.vertex
    if complex(f.base_point) != complex(v):
        raise ContourError("gallery base point must equal the cone vertex")
    if N is None:
        N = default_inner_index(x, cone)
    _check_x_admissible(x, cone, N, M)
    path = build_keyhole(cone, N, M)

    def integrand(z):
        return f(z) / ((z - v) * (z - x))

    res = integrate_contour(path, integrand, tol=tol)
    return res.value / (2j * math.pi)


@dataclass(frozen=True)
class DecompositionReport:
    lhs: complex
    annular_terms: tuple[tuple[int, complex], ...]
    inner_circle_term: complex
    residual: float


def annular_decomposition(
    f: GalleryFunction,
    x: complex,
    cone: ConeSpec,
    M: int = 1,
    N: int | None = None,
    tol: float = 1e-10,
) -> DecompositionReport:
    """Per-annulus split of the difference quotient.

    f(x)/x = sum over n of the D_n boundary term plus the full-circle term at
    radius 2^-M.  The D_n boundaries are traversed clockwise here, matching
    the orientation that makes the terms add up to the quotient.
    """
    v = cone.vertex
    if complex(f.base_point) != complex(v):
        raise ContourError("gallery base point must equal the cone vertex")
    if N is None:
        N = default_inner_index(x, cone)
    if N == M:
        # degenerate split: no annular pieces, plain circle Cauchy formula
        if not (abs(x - v) < 2.0**-M and cone.contains(x, closed=False)):
            raise ContourError(f"x = {x} must lie inside the cone and |z| < 2^-{M}")
    else:
        _check_x_admissible(x, cone, N, M)

    def integrand(z):
        return f(z) / ((z - v) * (z - x))

    annuli = [] if N == M else list(range(M, N + 1))
    term_tol = tol / (len(annuli) + 1)
    terms = []
    for n in annuli:
        path = build_annular_piece(n, cone).reversed()
        res = integrate_contour(path, integrand, tol=term_tol)
        terms.append((n, res.value / (2j * math.pi)))
    circle = full_circle(v, 2.0**-M)
    res = integrate_contour(circle, integrand, tol=term_tol)
    circle_term = res.value / (2j * math.pi)
    lhs = f(x) / (x - v)
    total = sum(t for _, t in terms) + circle_term
    return DecompositionReport(
        lhs=lhs,
        annular_terms=tuple(terms),
        inner_circle_term=circle_term,
        residual=abs(lhs - total),
    )


# ---------------------------------------------------------------------------
# Lemma checks


@dataclass(frozen=True)
class LemmaCheckReport:
    integral_magnitude: float
    content_upper: float
    seminorm_estimate: float
    kappa_hat: float


def _region_content_upper(region, alpha: float) -> float:
    if isinstance(region, DiskRegion):
        piece = ClippedPiece(
            hole=Disk(region.center, region.radius),
            annulus_center=region.center,
            n=1,
            r_inner=0.0,
            r_outer=region.radius,
            is_whole=True,
        )
        return disjoint_disk_content([piece], alpha).upper
    # conservative fallback: one ball of the region diameter
    return region.diameter() ** (1.0 + alpha)


def lemma_cauchy_bound_check(
    f,
    path: ContourPath,
    region,
    alpha: float,
    tol: float = 1e-10,
    pair_count: int = 4000,
    seed: int = 0,
) -> LemmaCheckReport:
    """Empirical ratio kappa_hat = |contour integral| / (content * seminorm).

    Scale and rotation invariance of kappa_hat across congruent setups is the
    quantity of interest; the absolute value carries no certified meaning.
    """
    if not path.closed:
        raise ContourError("lemma check needs a closed path")
    if not path.cusp_free:
        raise ContourError("lemma check requires a cusp-free path")
    res = integrate_contour(path, f if callable(f) else f.__call__, tol=tol)
    mag = abs(res.value)
    content = _region_content_upper(region, alpha)
    sem = seminorm_estimate(f, region, alpha, pair_count=pair_count, seed=seed).value
    kappa = mag / (content * sem) if content > 0 and sem > 0 else 0.0
    return LemmaCheckReport(
        integral_magnitude=mag,
        content_upper=content,
        seminorm_estimate=sem,
        kappa_hat=kappa,
    )


def kernel_seminorm_ratio(
    f: GalleryFunction,
    x: complex,
    n: int,
    cone: ConeSpec,
    alpha: float,
    pair_count: int = 4000,
    seed: int = 0,
    f_seminorm: float | None = None,
) -> float:
    """Seminorm of f(z)/((z-x0)(z-x)) on D_n relative to 4^n times seminorm(f).

    The proof machinery bounds this ratio by a constant independent of n and
    of the ray position x.
    """
    v = cone.vertex
    ri, _ = annulus_radii(n)
    r = abs(x - v)
    if r > ri / 2.0 + 1e-15 and not cone.contains(x, closed=False):
        # inside the open cone x stays clear of D_n at any radius
        raise ContourError("x must satisfy |x - x0| <= 2^-n-2 or lie inside the cone")
    region = annulus_minus_cone_region(cone, n)

    def g(z):
        return f(z) / ((z - v) * (z - x))

    sem_g = seminorm_estimate(g, region, alpha, pair_count=pair_count, seed=seed).value
    if f_seminorm is None:
        f_seminorm = seminorm_estimate(
            f, DiskRegion(v, 1.0), alpha, pair_count=pair_count, seed=seed
        ).value
    if f_seminorm == 0.0:
        return 0.0
    return sem_g / (4.0**n * f_seminorm)
