"""Hausdorff-content estimation for unions of (clipped) disks.

Upper estimates are honest covering sums; the "lower" numbers are clearly
labeled heuristics and must never back a sufficiency verdict.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ClippedPiece, Disk

SQRT2 = math.sqrt(2.0)

#: heuristic constant relating a disjoint union's covering sum to a guessed
#: lower value; pragmatic, flagged in every report.
C_LOW_DEFAULT = 0.25

PIXEL_BUDGET_DEFAULT = 2**22


class ContentError(ValueError):
    pass


@dataclass(frozen=True)
class MeasureFunction:
    """h(t) = t^(1+alpha) * min(1, (t/t0)^epsilon).

    Monotone nondecreasing, h(t) <= t^(1+alpha); for epsilon > 0 the ratio
    t^(-1-alpha) h(t) tends to 0 with t.
    """

    alpha: float
    epsilon: float = 0.0
    crossover: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ContentError(f"alpha must lie in (0,1), got {self.alpha}")
        if self.epsilon < 0.0:
            raise ContentError("epsilon must be nonnegative")
        if self.crossover <= 0.0:
            raise ContentError("crossover must be positive")

    def __call__(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        v = t ** (1.0 + self.alpha)
        if self.epsilon > 0.0 and t < self.crossover:
            v *= (t / self.crossover) ** self.epsilon
        return v


@dataclass(frozen=True)
class ContentEstimate:
    upper: float
    lower_heuristic: float
    method: str  # closed_form | greedy_cover | disjoint_sum


@dataclass(frozen=True)
class Cover:
    balls: tuple[Disk, ...]
    target: object | None = None  # anything with sample_points(count, rng)


def cover_content(
    cover: Cover,
    h: MeasureFunction,
    check_samples: int = 512,
    seed: int = 0,
) -> float:
    """Sum of h(diam B) over the cover; an upper bound for M_h of the target."""
    if cover.target is not None and cover.balls:
        rng = np.random.default_rng(seed)
        pts = cover.target.sample_points(check_samples, rng)
        centers = np.array([b.center for b in cover.balls])
        radii = np.array([b.radius for b in cover.balls])
        d = np.abs(pts[:, None] - centers[None, :])
        covered = (d <= radii[None, :] + 1e-12).any(axis=1)
        if not covered.all():
            bad = pts[~covered][0]
            raise ContentError(f"cover misses target point {complex(bad)}")
    elif cover.target is not None and not cover.balls:
        raise ContentError("empty cover cannot contain a nonempty target")
    return float(sum(h(b.diameter) for b in cover.balls))


def _pieces_disjoint(pieces: list[ClippedPiece]) -> bool:
    for i, a in enumerate(pieces):
        for b in pieces[i + 1 :]:
            if a.hole is b.hole or (
                abs(a.hole.center - b.hole.center) <= a.hole.radius + b.hole.radius
            ):
                # same hole: disjoint iff radial bands do not overlap
                if a.hole == b.hole:
                    if min(a.r_outer, b.r_outer) > max(a.r_inner, b.r_inner):
                        return False
                else:
                    return False
    return True


def disjoint_disk_content(
    pieces: list[ClippedPiece], alpha: float, c_low: float = C_LOW_DEFAULT
) -> ContentEstimate:
    """Covering sum sum diam^(1+alpha) over pairwise disjoint pieces.

    The upper value covers each piece by a single ball of the same diameter.
    The lower value is the heuristic c_low times the upper value; it is not a
    certified lower bound on the lower content.
    """
    if not (0.0 < alpha < 1.0):
        raise ContentError(f"alpha must lie in (0,1), got {alpha}")
    if not _pieces_disjoint(pieces):
        raise ContentError("pieces overlap; disjoint_disk_content requires disjointness")
    upper = float(sum(p.diameter() ** (1.0 + alpha) for p in pieces))
    return ContentEstimate(upper=upper, lower_heuristic=c_low * upper, method="disjoint_sum")


def _greedy_piece_upper(
    piece: ClippedPiece, alpha: float, mesh: float | None, pixel_budget: int
) -> float:
    """Quadtree cover of one piece by dyadic squares, circumscribed-ball costs.

    The grid is anchored at the piece bounding box so the estimate is exactly
    scale-covariant.
    """
    diam = piece.diameter()
    if diam <= 0.0:
        return 0.0
    if mesh is None:
        mesh = diam / 64.0
    if mesh >= diam:
        raise ContentError("mesh must be smaller than the piece diameter")
    x0, y0, x1, y1 = piece.bounding_box()
    side = max(x1 - x0, y1 - y0)
    levels = max(int(math.ceil(math.log2(side / mesh))), 0)
    k = 2**levels
    if k * k > pixel_budget:
        raise ContentError(f"pixelization {k}x{k} exceeds the pixel budget {pixel_budget}")
    cell = side / k if k else side

    xs = x0 + (np.arange(k) + 0.5) * cell
    ys = y0 + (np.arange(k) + 0.5) * cell
    cx, cy = np.meshgrid(xs, ys, indexing="ij")
    centers = cx + 1j * cy
    slack = cell * SQRT2 / 2.0  # half-diagonal: conservative intersection test
    dh = np.abs(centers - piece.hole.center)
    ra = np.abs(centers - piece.annulus_center)
    marked = (
        (dh <= piece.hole.radius + slack)
        & (ra >= piece.r_inner - slack)
        & (ra <= piece.r_outer + slack)
    )

    def h(t: float) -> float:
        return t ** (1.0 + alpha)

    cost = np.where(marked, h(cell * SQRT2), 0.0)
    s = cell
    while cost.shape[0] > 1:
        m = cost.shape[0] // 2
        child_sum = (
            cost[0::2, 0::2] + cost[0::2, 1::2] + cost[1::2, 0::2] + cost[1::2, 1::2]
        )
        s *= 2.0
        parent = h(s * SQRT2)
        cost = np.where(child_sum > 0.0, np.minimum(parent, child_sum), 0.0)
        assert cost.shape[0] == m
    return float(cost[0, 0])


def greedy_cover_upper(
    pieces: list[ClippedPiece],
    alpha: float,
    mesh: float | None = None,
    pixel_budget: int = PIXEL_BUDGET_DEFAULT,
) -> ContentEstimate:
    """Upper content estimate by per-piece dyadic-square covers.

    Squares are converted to circumscribed balls (ball diameter = square
    diagonal) and merged bottom-up whenever the merge decreases the h-value.
    """
    if not (0.0 < alpha < 1.0):
        raise ContentError(f"alpha must lie in (0,1), got {alpha}")
    upper = 0.0
    for p in pieces:
        upper += _greedy_piece_upper(p, alpha, mesh, pixel_budget)
    return ContentEstimate(upper=upper, lower_heuristic=0.0, method="greedy_cover")
