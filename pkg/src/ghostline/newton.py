"""Exact lower convex hulls and certified Newton polygons of ghost series.

All hull arithmetic is cross-multiplied exact rational arithmetic; points
at +infinity impose no constraint and are skipped.  Vertices are strict:
collinear interior points are not vertices, matching the convention that a
straight stretch of the polygon has vertices only at its ends.

A ghost Newton polygon is an infinite object, so a finite computation must
certify its prefix.  The certificate rests on two facts: every factor of a
coefficient contributes at least c = min(vp(w), 1) to its valuation at w,
so v_p(g_m(w)) >= c * deg(g_m); and the degree increments deg g_{m+1} -
deg g_m are strictly increasing, so that lower bound eventually outgrows
any fixed line.  A vertex X of the windowed hull is *certified* once every
point beyond the window provably stays strictly above the extension of the
hull segment ending at X; then the hull, its vertex set, and its slopes
are final up to X.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from . import ghost_series as ghost
from .valuation import INF, ExtRat
from .weight_space import (
    Classical,
    GhostContext,
    WeightPoint,
    format_rational,
    min_factor_valuation,
)


class CertificationError(RuntimeError):
    """Raised when the requested prefix cannot be certified from the window."""

    def __init__(self, requested: int, achieved: int, buffer: int):
        self.requested = requested
        self.achieved = achieved
        self.buffer = buffer
        super().__init__(
            f"Newton polygon certified only up to x = {achieved} "
            f"(requested {requested}, buffer {buffer}); raise the buffer"
        )


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: Tuple[Tuple[int, Fraction], ...]
    slopes: Tuple[Tuple[Fraction, int], ...]  # (slope, width) per segment
    certified_upto: int

    def to_json_dict(self) -> dict:
        return {
            "vertices": [[x, format_rational(y)] for x, y in self.vertices],
            "slopes": [[format_rational(s), w] for s, w in self.slopes],
            "certified_upto": self.certified_upto,
        }


def _hull_vertices(points: Sequence[Tuple[int, Fraction]]) -> List[Tuple[int, Fraction]]:
    # monotone chain, lower hull only; input sorted by x, strict vertices
    hull: List[Tuple[int, Fraction]] = []
    for pt in points:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            # pop the middle point unless it turns strictly downward
            if (y1 - y0) * (pt[0] - x0) >= (pt[1] - y0) * (x1 - x0):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def _segments(vertices: Sequence[Tuple[int, Fraction]]) -> Tuple[Tuple[Fraction, int], ...]:
    out = []
    for (x0, y0), (x1, y1) in zip(vertices, vertices[1:]):
        out.append((Fraction(y1 - y0, x1 - x0), x1 - x0))
    return tuple(out)


def lower_convex_hull(points: Sequence[Tuple[int, ExtRat]]) -> NewtonPolygon:
    """Lower hull of integer-indexed extended-rational points.

    Points with y = +inf are skipped; the x-values must be distinct and at
    least one y must be finite.
    """
    finite = [(x, Fraction(y)) for x, y in points if y is not INF]
    if not finite:
        raise ValueError("need at least one finite point")
    finite.sort()
    if any(a[0] == b[0] for a, b in zip(finite, finite[1:])):
        raise ValueError("x-values must be distinct")
    verts = _hull_vertices(finite)
    return NewtonPolygon(tuple(verts), _segments(verts), verts[-1][0])


def _future_safe(
    ctx: GhostContext,
    w: WeightPoint,
    vx: int,
    vy: Fraction,
    slope_in: Fraction,
    window_end: int,
    max_steps: int = 100_000,
) -> bool:
    """Check that every point beyond the window lies strictly above the
    line through (vx, vy) with the given incoming slope.

    The generic floor c * deg(g_m) with c = min over factors of vp(w - w_k)
    eventually outgrows any line, since the degree increments strictly
    increase; until it does, classical points are compared by their exact
    coefficient valuations, which the jump evaluator supplies in constant
    time per index.
    """
    c = min_factor_valuation(w)
    exact = None
    if isinstance(w, Classical):
        ev = ghost.classical_evaluator(ctx, w.k)
        exact = ev.value
    m = window_end + 1
    for _ in range(max_steps):
        line = vy + slope_in * (m - vx)
        floor = c * ghost.degree_fast(ctx, m)
        if floor > line:
            inc = ghost.degree_fast(ctx, m + 1) - ghost.degree_fast(ctx, m)
            if c * inc >= slope_in:
                # the floor now rises at least as fast as the line, forever
                return True
        elif exact is None:
            return False
        else:
            y = exact(m)
            if y is not INF and y <= line:
                return False
        m += 1
    return False


def np_of_ghost(
    ctx: GhostContext,
    w: WeightPoint,
    n_max: int,
    buffer: int | None = None,
) -> NewtonPolygon:
    """Certified Newton polygon prefix of the ghost series at the point w.

    Hull of (n, v_p(g_n(w))) over the window n in [0, n_max + buffer];
    certified_upto is the largest windowed vertex whose trailing segment no
    future point can undercut.  Raises CertificationError when that falls
    short of n_max (callers retry with a doubled buffer).
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    if buffer is None:
        buffer = 2 * ctx.p + 8
    if buffer < 0:
        raise ValueError(f"buffer must be >= 0, got {buffer}")
    window_end = n_max + buffer

    if isinstance(w, Classical):
        ev = ghost.classical_evaluator(ctx, w.k)
        pts: List[Tuple[int, ExtRat]] = [(n, ev.value(n)) for n in range(window_end + 1)]
    else:
        pts = [(n, ghost.eval_vp(ctx, n, w)) for n in range(window_end + 1)]

    hull = lower_convex_hull(pts)
    verts = hull.vertices
    certified = None
    for i in range(len(verts) - 1, -1, -1):
        vx, vy = verts[i]
        if vx < n_max:
            break  # nothing below n_max can satisfy the caller
        slope_in = hull.slopes[i - 1][0] if i >= 1 else None
        if slope_in is None or _future_safe(ctx, w, vx, vy, slope_in, window_end):
            certified = (vx, i)
            break
    if certified is None:
        achieved = max((x for x, _ in verts if x < n_max), default=-1)
        raise CertificationError(n_max, achieved, buffer)
    # report only the final prefix: vertices and segments up to the
    # certified vertex survive any extension of the window
    upto = certified[1]
    return NewtonPolygon(verts[: upto + 1], hull.slopes[:upto], certified[0])


def np_of_ghost_auto(
    ctx: GhostContext,
    w: WeightPoint,
    n_max: int,
    buffer: int | None = None,
    retries: int = 4,
) -> Tuple[NewtonPolygon, int]:
    """np_of_ghost with automatic buffer doubling; returns (polygon, buffer)."""
    if buffer is None:
        buffer = 2 * ctx.p + 8
    last: CertificationError | None = None
    for _ in range(retries + 1):
        try:
            return np_of_ghost(ctx, w, n_max, buffer), buffer
        except CertificationError as exc:
            last = exc
            buffer *= 2
    assert last is not None
    raise last


def is_vertex(np: NewtonPolygon, n: int) -> bool:
    """Whether x = n is a vertex; n must lie in the certified range."""
    if n > np.certified_upto:
        raise ValueError(f"x = {n} is beyond certified_upto = {np.certified_upto}")
    return any(x == n for x, _ in np.vertices)


def slope_at(np: NewtonPolygon, i: int) -> Fraction:
    """The i-th slope (1-indexed, counted with multiplicity = width)."""
    if i < 1:
        raise ValueError(f"slope index must be >= 1, got {i}")
    if i > np.certified_upto:
        raise ValueError(f"slope {i} is beyond certified_upto = {np.certified_upto}")
    x_first = np.vertices[0][0]
    if i <= x_first:
        raise ValueError(f"slope {i} precedes the first hull point x = {x_first}")
    pos = x_first
    for s, width in np.slopes:
        pos += width
        if i <= pos:
            return s
    raise ValueError(f"slope {i} is beyond the computed window")


def slopes_upto(np: NewtonPolygon, n: int) -> List[Fraction]:
    """Slopes 1..n with multiplicity (requires the prefix to be certified)."""
    return [slope_at(np, i) for i in range(1, n + 1)]
