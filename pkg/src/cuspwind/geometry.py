"""Euclidean representations of geodesics, half-planes and horoballs.

Everything here is plain circle/line algebra in the upper half-plane;
the hyperbolic content (lengths, invariance) lives in :mod:`mobius`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .mobius import PlanePoint, is_infinity


@dataclass(frozen=True)
class Geodesic:
    """Complete geodesic: semicircle (center, radius) or vertical line."""

    kind: str  # "circle" | "vline"
    center: float = 0.0
    radius: float = 0.0
    x0: float = 0.0

    @staticmethod
    def from_ideal_endpoints(u: float, v: float) -> "Geodesic":
        if is_infinity(u) and is_infinity(v):
            raise ValueError("degenerate geodesic with both endpoints infinite")
        if is_infinity(u):
            return Geodesic("vline", x0=v)
        if is_infinity(v):
            return Geodesic("vline", x0=u)
        if u == v:
            raise ValueError("degenerate geodesic with equal endpoints")
        lo, hi = (u, v) if u < v else (v, u)
        return Geodesic("circle", center=0.5 * (lo + hi), radius=0.5 * (hi - lo))

    @staticmethod
    def through_points(z: PlanePoint, w: PlanePoint) -> "Geodesic":
        dx = w.x - z.x
        scale = max(1.0, abs(z.x), abs(w.x))
        if abs(dx) <= 1e-13 * scale:
            return Geodesic("vline", x0=0.5 * (z.x + w.x))
        c = (w.x * w.x + w.y * w.y - z.x * z.x - z.y * z.y) / (2.0 * dx)
        r = math.hypot(z.x - c, z.y)
        return Geodesic("circle", center=c, radius=r)

    def param(self, pt: PlanePoint) -> float:
        """Monotone parameter along the geodesic (direction fixed by caller)."""
        if self.kind == "vline":
            return math.log(pt.y)
        return math.atan2(pt.y, pt.x - self.center)

    def point_at(self, t: float) -> PlanePoint:
        if self.kind == "vline":
            return PlanePoint(self.x0, math.exp(t))
        return PlanePoint(
            self.center + self.radius * math.cos(t), self.radius * math.sin(t)
        )


@dataclass(frozen=True)
class HalfPlane:
    """Open hyperbolic half-plane cut off by a geodesic.

    ``inside``: for a circle boundary, True means the half-disk under the
    semicircle; for a vline, True means the x > x0 side.
    """

    boundary: Geodesic
    inside: bool

    def contains(self, pt: PlanePoint, tol: float = 0.0) -> bool:
        g = self.boundary
        if g.kind == "vline":
            s = pt.x - g.x0
            return s > tol if self.inside else s < -tol
        s = math.hypot(pt.x - g.center, pt.y) - g.radius
        return s < -tol if self.inside else s > tol


def halfplane_of_interval(lo: float, hi: float) -> HalfPlane:
    """Half-plane whose ideal boundary is the arc from lo to hi.

    The arc convention matches CircleInterval: increasing x, wrapping
    through oo when lo > hi or an endpoint is infinite.
    """
    if is_infinity(lo) and is_infinity(hi):
        raise ValueError("full-circle interval has no bounding geodesic")
    if is_infinity(hi):  # (lo, oo): right vertical half-plane
        return HalfPlane(Geodesic("vline", x0=lo), inside=True)
    if is_infinity(lo):  # (oo, hi) = [-oo, hi): left vertical half-plane
        return HalfPlane(Geodesic("vline", x0=hi), inside=False)
    if lo < hi:
        return HalfPlane(Geodesic.from_ideal_endpoints(lo, hi), inside=True)
    # wraps through oo: complement of the half-disk over (hi, lo)
    return HalfPlane(Geodesic.from_ideal_endpoints(hi, lo), inside=False)


@dataclass(frozen=True)
class Horoball:
    """Euclidean model of a closed horoball.

    Finite base: disk of the given euclidean diameter tangent at ``base``.
    Infinite base: the region above the horizontal line at ``size``.
    """

    base: float
    size: float  # diameter (finite base) or height (base at oo)

    def is_line(self) -> bool:
        return is_infinity(self.base)

    def contains(self, pt: PlanePoint, tol: float = 0.0) -> bool:
        if self.is_line():
            return pt.y >= self.size - tol
        rho = 0.5 * self.size
        return math.hypot(pt.x - self.base, pt.y - rho) <= rho + tol

    def boundary_point_at(self, t: float) -> PlanePoint:
        """t in (0,1) parametrizes the horocircle away from the tangency."""
        if self.is_line():
            return PlanePoint(math.tan(math.pi * (t - 0.5)), self.size)
        rho = 0.5 * self.size
        phi = 2.0 * math.pi * t  # phi=0 is the tangency point at the base
        return PlanePoint(
            self.base + rho * math.sin(phi), rho * (1.0 - math.cos(phi))
        )


def horoballs_disjoint(b1: Horoball, b2: Horoball, tol: float = 1e-12) -> bool:
    """Disjoint interiors; tangency counts as disjoint."""
    if b1.is_line() and b2.is_line():
        return False
    if b1.is_line() or b2.is_line():
        line, ball = (b1, b2) if b1.is_line() else (b2, b1)
        return ball.size <= line.size + tol
    return (b1.base - b2.base) ** 2 >= b1.size * b2.size - tol


def intersect_geodesics(g1: Geodesic, g2: Geodesic) -> list[PlanePoint]:
    """Crossing point of two complete geodesics (at most one)."""
    if g1.kind == "vline" and g2.kind == "vline":
        return []
    if g1.kind == "vline" or g2.kind == "vline":
        line, circ = (g1, g2) if g1.kind == "vline" else (g2, g1)
        y2 = circ.radius**2 - (line.x0 - circ.center) ** 2
        if y2 <= 0.0:
            return []
        return [PlanePoint(line.x0, math.sqrt(y2))]
    dc = g2.center - g1.center
    if dc == 0.0:
        return []
    x = (g1.radius**2 - g2.radius**2 + g2.center**2 - g1.center**2) / (2.0 * dc)
    y2 = g1.radius**2 - (x - g1.center) ** 2
    if y2 <= 0.0:
        return []
    return [PlanePoint(x, math.sqrt(y2))]


def intersect_geodesic_horocircle(g: Geodesic, ball: Horoball) -> list[PlanePoint]:
    """Intersections of a complete geodesic with a horocircle (0-2 points)."""
    pts: list[PlanePoint] = []
    if ball.is_line():
        h = ball.size
        if g.kind == "vline":
            return [PlanePoint(g.x0, h)]
        y2 = g.radius**2 - h * h
        if y2 < 0.0:
            return []
        dx = math.sqrt(y2) if y2 > 0.0 else 0.0
        out = [PlanePoint(g.center - dx, h), PlanePoint(g.center + dx, h)]
        return out if dx > 0.0 else out[:1]
    p, rho = ball.base, 0.5 * ball.size
    if g.kind == "vline":
        u2 = rho * rho - (g.x0 - p) ** 2
        if u2 < 0.0:
            return []
        du = math.sqrt(u2) if u2 > 0.0 else 0.0
        pts = [PlanePoint(g.x0, rho - du)]
        if du > 0.0:
            pts.append(PlanePoint(g.x0, rho + du))
        return [q for q in pts if q.y > 0.0]
    c, r = g.center, g.radius
    if abs(p - c) <= 1e-15 * max(1.0, abs(p)):
        y = r * r / (2.0 * rho) if rho > 0.0 else -1.0
        x2 = r * r - y * y
        if x2 < 0.0 or y <= 0.0:
            return []
        dx = math.sqrt(x2) if x2 > 0.0 else 0.0
        out = [PlanePoint(c - dx, y), PlanePoint(c + dx, y)]
        return out if dx > 0.0 else out[:1]
    # radical line: x = (p^2 - c^2 + r^2 - 2*rho*y) / (2 (p - c))
    k0 = (p * p - c * c + r * r) / (2.0 * (p - c))
    k1 = -rho / (p - c)
    # substitute x = k0 + k1 y into (x-c)^2 + y^2 = r^2
    A = k1 * k1 + 1.0
    B = 2.0 * k1 * (k0 - c)
    C = (k0 - c) ** 2 - r * r
    disc = B * B - 4.0 * A * C
    if disc < 0.0:
        if disc > -1e-12 * max(1.0, B * B):
            disc = 0.0
        else:
            return []
    sq = math.sqrt(disc)
    for y in ((-B - sq) / (2.0 * A), (-B + sq) / (2.0 * A)):
        if y > 0.0:
            pts.append(PlanePoint(k0 + k1 * y, y))
    if len(pts) == 2 and abs(pts[0].y - pts[1].y) == 0.0 and pts[0].x == pts[1].x:
        pts = pts[:1]
    return pts
