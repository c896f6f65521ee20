"""Duality profiles, near-Steinberg ranges, and the vertex characterisations.

For a classical weight k on the disk, the profile value at offset l is the
k-omitted coefficient valuation at w_k, renormalised by the Steinberg
slope:

    delta_prime(k, l) = v_p(g_{d_iw/2 + l, hat k}(w_k)) - (k-2)/2 * l,

defined for |l| <= d_new/2 and symmetric in l (ghost duality).  Its lower
convex hull is the shape that governs how the Newton polygon at a nearby
point w degenerates into straight lines: the half-width L of the forced
straight stretch around d_iw/2 is the largest L with

    vp(w - w_k) >= hull gap at L,

and the open interval (d_iw/2 - L, d_iw/2 + L) is the near-Steinberg range
of (w, k).  The checkers below verify, witness by witness, that these
ranges are nested, that they are exactly the non-vertices of the Newton
polygon, and that non-vertices of the profile hull are detected by
near-Steinberg ranges of neighbouring weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from . import dimensions as dims
from . import ghost_series as ghost
from . import newton
from .valuation import INF
from .weight_space import (
    Classical,
    GhostContext,
    WeightPoint,
    format_rational,
    vp_point_to_weight,
)

#: Every profile gap is at least min(a+2, p-1-a)/2 >= 3/2 (verified by the
#: estimate suite); points farther than that from every w_k have no range.
MIN_GAP = Fraction(3, 2)


def delta_prime(ctx: GhostContext, k: int, ell: int) -> Fraction:
    """Profile value at offset ell, |ell| <= d_new(k)/2."""
    half_new = dims.d_new(ctx, k) // 2
    if abs(ell) > half_new:
        raise ValueError(f"|ell| = {abs(ell)} exceeds d_new/2 = {half_new}")
    half_iw = dims.d_iw(ctx, k) // 2
    ev = ghost.classical_evaluator(ctx, k)
    return ev.omitted(half_iw + ell) - Fraction(k - 2, 2) * ell


@dataclass(frozen=True)
class DeltaProfile:
    k: int
    raw: Tuple[Tuple[int, Fraction], ...]
    hull: Tuple[Tuple[int, Fraction], ...]  # hull value at every integer offset

    def raw_value(self, ell: int) -> Fraction:
        return dict(self.raw)[ell]

    def hull_value(self, ell: int) -> Fraction:
        return dict(self.hull)[ell]

    def hull_gaps(self) -> List[Fraction]:
        """Gaps hull(L) - hull(L-1) for L = 1..d_new/2 (nondecreasing)."""
        vals = dict(self.hull)
        top = max(l for l, _ in self.hull)
        return [vals[L] - vals[L - 1] for L in range(1, top + 1)]

    def is_vertex(self, ell: int) -> bool:
        """Strict-vertex test of (ell, raw(ell)) on the hull."""
        if self.raw_value(ell) != self.hull_value(ell):
            return False
        top = max(l for l, _ in self.hull)
        if abs(ell) == top:
            return True
        vals = dict(self.hull)
        left = vals[ell] - vals[ell - 1]
        right = vals[ell + 1] - vals[ell]
        return left < right

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "raw": [[l, format_rational(v)] for l, v in self.raw],
            "hull": [[l, format_rational(v)] for l, v in self.hull],
        }


@lru_cache(maxsize=4096)
def delta_profile(ctx: GhostContext, k: int) -> DeltaProfile:
    """Raw profile values and their lower hull, offsets in [-d_new/2, d_new/2]."""
    half_new = dims.d_new(ctx, k) // 2
    half_iw = dims.d_iw(ctx, k) // 2
    ev = ghost.classical_evaluator(ctx, k)
    raw = tuple(
        (l, ev.omitted(half_iw + l) - Fraction(k - 2, 2) * l)
        for l in range(-half_new, half_new + 1)
    )
    hull_np = newton.lower_convex_hull(raw)
    # interpolate the hull at every integer offset
    hull_vals: List[Tuple[int, Fraction]] = []
    verts = hull_np.vertices
    vi = 0
    for l in range(-half_new, half_new + 1):
        while vi + 1 < len(verts) and verts[vi + 1][0] <= l:
            vi += 1
        x0, y0 = verts[vi]
        if l == x0:
            hull_vals.append((l, y0))
        else:
            x1, y1 = verts[vi + 1]
            hull_vals.append((l, y0 + Fraction(y1 - y0, x1 - x0) * (l - x0)))
    return DeltaProfile(k, raw, tuple(hull_vals))


@lru_cache(maxsize=65536)
def _hull_gaps(ctx: GhostContext, k: int) -> Tuple[Fraction, ...]:
    return tuple(delta_profile(ctx, k).hull_gaps())


def l_max(ctx: GhostContext, w: WeightPoint, k: int) -> Optional[int]:
    """Largest L in [1, d_new/2] with vp(w - w_k) >= hull gap at L, if any."""
    if dims.d_new(ctx, k) == 0:
        return None
    v = vp_point_to_weight(ctx, w, k)
    gaps = _hull_gaps(ctx, k)
    if v is INF:
        return len(gaps)
    best = None
    for L, gap in enumerate(gaps, start=1):
        if v >= gap:
            best = L
        else:
            break  # hull gaps are nondecreasing
    return best


@dataclass(frozen=True)
class NearSteinbergRange:
    k: int
    L: int
    lo: int  # open interval (lo, hi), centred at d_iw(k)/2
    hi: int

    def contains(self, n: int) -> bool:
        return self.lo < n < self.hi

    def to_json_dict(self) -> dict:
        return {"k": self.k, "L": self.L, "lo": self.lo, "hi": self.hi}


def near_steinberg_range(ctx: GhostContext, w: WeightPoint, k: int) -> Optional[NearSteinbergRange]:
    L = l_max(ctx, w, k)
    if L is None:
        return None
    half_iw = dims.d_iw(ctx, k) // 2
    return NearSteinbergRange(k, L, half_iw - L, half_iw + L)


def near_steinberg_ranges(
    ctx: GhostContext, w: WeightPoint, n_max: int
) -> List[NearSteinbergRange]:
    """All ranges whose open interval meets [1, n_max].

    For each n the candidate weights are exactly those with
    n in (d_ur, d_iw - d_ur), i.e. k_bullet in
    [k_min_bullet(n), k_max_bullet(n-1)]; a range containing n always has
    its centre weight among these, so the enumeration is complete.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    found: Dict[int, NearSteinbergRange] = {}
    seen: set[int] = set()
    for n in range(1, n_max + 1):
        _, kb_lo = dims.k_min_bullet(ctx, n)
        kb_lo = max(kb_lo, 0)
        kb_hi = dims.k_max_bullet(ctx, n - 1)
        for kb in range(kb_lo, kb_hi + 1):
            k = ctx.weight_of_bullet(kb)
            if k in seen:
                continue
            seen.add(k)
            if vp_point_to_weight(ctx, w, k) < MIN_GAP:
                continue  # below every profile gap, no range possible
            rng = near_steinberg_range(ctx, w, k)
            if rng is not None and rng.lo < n_max and rng.hi > 1:
                found[k] = rng
    return sorted(found.values(), key=lambda r: (r.lo, r.hi, r.k))


def check_nested(
    ranges: Sequence[NearSteinbergRange],
) -> Tuple[bool, Optional[Tuple[NearSteinbergRange, NearSteinbergRange]]]:
    """Disjoint-or-contained test on the open intervals (touching closures ok)."""
    for i, r1 in enumerate(ranges):
        for r2 in ranges[i + 1 :]:
            disjoint = r1.hi <= r2.lo or r2.hi <= r1.lo
            nested = (r1.lo <= r2.lo and r2.hi <= r1.hi) or (
                r2.lo <= r1.lo and r1.hi <= r2.hi
            )
            if not (disjoint or nested):
                return False, (r1, r2)
    return True, None


def maximal_ranges(ranges: Sequence[NearSteinbergRange]) -> List[NearSteinbergRange]:
    out = []
    for r in ranges:
        if not any(
            (o.lo <= r.lo and r.hi <= o.hi) and (o.lo, o.hi) != (r.lo, r.hi)
            for o in ranges
        ):
            out.append(r)
    return out


def _in_lattice(x: Fraction, gamma: Optional[Fraction]) -> bool:
    """Membership of x in Z + Z*gamma (gamma absent means plain Z)."""
    if gamma is None:
        return x.denominator == 1
    d = gamma.denominator
    scaled = x * d
    if scaled.denominator != 1:
        return False
    return scaled.numerator % gcd(gamma.numerator, d) == 0


def vertex_theorem_check(
    ctx: GhostContext,
    w: WeightPoint,
    n_max: int,
    buffer: int | None = None,
) -> dict:
    """Vertices of the Newton polygon versus near-Steinberg membership.

    For every n <= n_max the point (n, v_p(g_n(w))) must be a vertex
    exactly when n lies in no near-Steinberg range.  Over each maximal
    range the polygon must be one straight segment whose slope lies in
    a/2 + Z + Z*gamma, where gamma is the largest finite distance from w
    to a ghost zero appearing in the range (for a classical point the
    omitted-coefficient profile is checked to be a straight line instead).
    """
    np_, buffer_used = newton.np_of_ghost_auto(ctx, w, n_max, buffer)
    ranges = near_steinberg_ranges(ctx, w, n_max)
    nested, nest_witness = check_nested(ranges)
    mismatches = []
    for n in range(1, n_max + 1):
        in_range = any(r.contains(n) for r in ranges)
        vertex = newton.is_vertex(np_, n)
        if in_range == vertex:
            mismatches.append(
                {"n": n, "near_steinberg": in_range, "vertex": vertex}
            )
    slope_violations = []
    for r in maximal_ranges(ranges):
        if r.hi > n_max:
            continue  # straight-line check needs both endpoints in view
        slope_violations.extend(_check_range_slope(ctx, w, r, np_))
    ok = not mismatches and not slope_violations and nested
    return {
        "ok": ok,
        "mismatches": mismatches,
        "slope_violations": slope_violations,
        "nested": nested,
        "nest_witness": nest_witness,
        "ranges": ranges,
        "polygon": np_,
        "buffer_used": buffer_used,
    }


def _range_gamma(
    ctx: GhostContext, w: WeightPoint, r: NearSteinbergRange
) -> Optional[Fraction]:
    best: Optional[Fraction] = None
    for n in range(r.lo + 1, r.hi):
        for k, _ in ghost.coefficient(ctx, n).factors:
            v = vp_point_to_weight(ctx, w, k)
            if v is INF:
                continue
            v = Fraction(v)
            if best is None or v > best:
                best = v
    return best


def _check_range_slope(
    ctx: GhostContext, w: WeightPoint, r: NearSteinbergRange, np_: newton.NewtonPolygon
) -> List[dict]:
    violations: List[dict] = []
    a = Fraction(ctx.a, 2)
    if (
        isinstance(w, Classical)
        and w.k != r.k
        and ghost.classical_evaluator(ctx, w.k).multiplicity_k0((r.lo + r.hi) // 2) > 0
    ):
        # the point is a zero inside another weight's range: the straight
        # line lives on the omitted profile, with slope in a/2 + Z.  (For
        # the point's own range the plain polygon below already skips the
        # infinite coordinates and carries the straight line itself.)
        ev = ghost.classical_evaluator(ctx, w.k)
        pts = [(n, ev.omitted(n)) for n in range(r.lo, r.hi + 1)]
        hull = newton.lower_convex_hull(pts)
        if len(hull.slopes) != 1:
            violations.append({"range": r, "reason": "omitted hull is not straight"})
        else:
            slope = hull.slopes[0][0]
            if not _in_lattice(slope - a, None):
                violations.append(
                    {"range": r, "reason": "omitted slope class", "slope": slope}
                )
        return violations
    seg_slopes = {
        s for i, (s, _) in enumerate(np_.slopes) if _segment_meets(np_, i, r)
    }
    if len(seg_slopes) != 1:
        violations.append({"range": r, "reason": "polygon not straight over range"})
        return violations
    slope = next(iter(seg_slopes))
    gamma = None if isinstance(w, Classical) else _range_gamma(ctx, w, r)
    if not _in_lattice(slope - a, gamma):
        violations.append(
            {"range": r, "reason": "slope class", "slope": slope, "gamma": gamma}
        )
    return violations


def _segment_meets(np_: newton.NewtonPolygon, i: int, r: NearSteinbergRange) -> bool:
    x0 = np_.vertices[i][0]
    x1 = np_.vertices[i + 1][0]
    return x0 < r.hi and x1 > r.lo


def delta_vertex_check(ctx: GhostContext, k0: int, ell: int) -> dict:
    """Three-way equivalence at one profile offset of the weight k0.

    (ell, delta_prime(k0, ell)) fails to be a hull vertex exactly when the
    index d_iw/2 + ell is near-Steinberg for some larger weight, exactly
    when d_iw/2 - ell is near-Steinberg for some smaller weight.
    """
    half_new = dims.d_new(ctx, k0) // 2
    if not 0 <= ell <= half_new - 1:
        raise ValueError(f"need 0 <= ell <= d_new/2 - 1 = {half_new - 1}")
    prof = delta_profile(ctx, k0)
    non_vertex = not prof.is_vertex(ell)
    half_iw = dims.d_iw(ctx, k0) // 2
    w = Classical(k0)

    def witness(n: int, side: int) -> Optional[int]:
        _, kb_lo = dims.k_min_bullet(ctx, n)
        kb_lo = max(kb_lo, 0)
        kb_hi = dims.k_max_bullet(ctx, n - 1)
        for kb in range(kb_lo, kb_hi + 1):
            k1 = ctx.weight_of_bullet(kb)
            if side * (k1 - k0) <= 0:
                continue
            if vp_point_to_weight(ctx, w, k1) < MIN_GAP:
                continue
            rng = near_steinberg_range(ctx, w, k1)
            if rng is not None and rng.contains(n):
                return k1
        return None

    above = witness(half_iw + ell, +1)
    below = witness(half_iw - ell, -1)
    ok = (non_vertex == (above is not None)) and (non_vertex == (below is not None))
    return {
        "ok": ok,
        "k0": k0,
        "ell": ell,
        "non_vertex": non_vertex,
        "witness_above": above,
        "witness_below": below,
    }


def delta_hull_slope_classes(ctx: GhostContext, k0: int) -> List[dict]:
    """Violations of the profile hull slope classes.

    Stated in the un-normalised coordinates (profile slope plus the
    Steinberg slope (k0-2)/2, i.e. the hull of the omitted valuations
    themselves): width-1 slopes are integers, wider slopes have even width
    and lie in a/2 + Z -- the same classes as the polygon slopes at w_k0.
    """
    prof = delta_profile(ctx, k0)
    if len(prof.raw) < 2:
        return []
    hull = newton.lower_convex_hull(prof.raw)
    shift = Fraction(k0 - 2, 2)
    bad = []
    for norm_slope, width in hull.slopes:
        slope = norm_slope + shift
        if width == 1:
            if slope.denominator != 1:
                bad.append({"k0": k0, "slope": slope, "width": width})
        else:
            if width % 2 != 0 or not _in_lattice(slope - Fraction(ctx.a, 2), None):
                bad.append({"k0": k0, "slope": slope, "width": width})
    return bad
