"""Parameter record for one residual datum and the valuation model of weights.

A ``GhostContext`` packages the prime p, the niveau parameter a, and the
disk selector s_eps, together with every derived constant the closed
formulas need (k_eps, delta_eps, t1, t2, and the parity pair beta_even /
beta_odd).  The reducible datum is normalised so that its second diagonal
exponent is 0 and the central element acts trivially; callers needing the
twisted variants apply the determinant twist externally.

Points of the open weight disk are modelled purely by their distance
profile to the classical points w_k: every downstream quantity depends
only on vp(w - w_k), never on p-adic digits.  Three shapes cover all
experiments:

* ``Classical(k)``      -- the point w_k itself,
* ``Perturbed(k0, r)``  -- a generic point at exact distance r from w_k0,
* ``Boundary(t)``       -- a point of valuation t in (0, 1), where every
  distance vp(w - w_k) collapses to t.

For a ``Perturbed`` point the profile is the generic one,
min(r, 1 + vp(k0 - k)), even when r ties with the classical distance;
non-generic loci are expressed by re-basing the perturbation at another
classical weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .valuation import INF, ExtRat, is_prime, vp_int


@dataclass(frozen=True, slots=True)
class GhostContext:
    p: int
    a: int
    s_eps: int
    k_eps: int
    delta_eps: int
    t1: int
    t2: int
    beta_even: int
    beta_odd: int

    def res(self, m: int) -> int:
        """Representative of m modulo p-1 inside [0, p-2]."""
        return m % (self.p - 1)

    def beta(self, n: int) -> int:
        """Parity constant used by the extremal-weight formulas."""
        return self.beta_even if n % 2 == 0 else self.beta_odd

    def on_disk(self, k: int) -> bool:
        return (k - self.k_eps) % (self.p - 1) == 0

    def bullet(self, k: int) -> int:
        """Index k_bullet with k = k_eps + (p-1)*k_bullet."""
        q, r = divmod(k - self.k_eps, self.p - 1)
        if r:
            raise ValueError(
                f"k = {k} is not congruent to k_eps = {self.k_eps} mod {self.p - 1}"
            )
        return q

    def weight_of_bullet(self, k_bullet: int) -> int:
        return self.k_eps + (self.p - 1) * k_bullet


def new_context(p: int, a: int, s_eps: int) -> GhostContext:
    """Validate (p, a, s_eps) and compute every derived constant.

    Requires p prime >= 5, 1 <= a <= p-4 (genericity), 0 <= s_eps <= p-2.
    """
    if not is_prime(p) or p < 5:
        raise ValueError(f"p must be a prime >= 5, got p = {p}")
    if not 1 <= a <= p - 4:
        raise ValueError(f"a must satisfy 1 <= a <= p-4 = {p - 4}, got a = {a}")
    if not 0 <= s_eps <= p - 2:
        raise ValueError(f"s_eps must satisfy 0 <= s_eps <= p-2 = {p - 2}, got {s_eps}")

    res = lambda m: m % (p - 1)
    k_eps = 2 + res(a + 2 * s_eps)
    delta_eps = (s_eps + res(a + s_eps)) // (p - 1)
    if a + s_eps < p - 1:
        t1 = s_eps + delta_eps
        t2 = a + s_eps + delta_eps + 2
    else:
        t1 = res(a + s_eps) + delta_eps + 1
        t2 = s_eps + delta_eps + 1
    beta_even = t1
    beta_odd = t2 - (p + 1) // 2

    ctx = GhostContext(p, a, s_eps, k_eps, delta_eps, t1, t2, beta_even, beta_odd)
    # consistency of the derived constants
    assert 2 <= k_eps <= p
    assert (p - 1) * delta_eps + res(a + 2 * s_eps) == s_eps + res(a + s_eps)
    return ctx


@dataclass(frozen=True, slots=True)
class Classical:
    k: int


@dataclass(frozen=True, slots=True)
class Perturbed:
    k0: int
    r: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        if self.r <= 0:
            raise ValueError(f"perturbation radius must be positive, got {self.r}")


@dataclass(frozen=True, slots=True)
class Boundary:
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        if not 0 < self.t < 1:
            raise ValueError(f"boundary valuation must lie in (0,1), got {self.t}")


WeightPoint = Union[Classical, Perturbed, Boundary]


def vp_between_weights(ctx: GhostContext, k1: int, k2: int) -> ExtRat:
    """vp(w_k1 - w_k2) = 1 + vp(k1 - k2); INF when the weights coincide."""
    if k1 == k2:
        return INF
    return 1 + vp_int(k1 - k2, ctx.p)


def vp_point_to_weight(ctx: GhostContext, w: WeightPoint, k: int) -> ExtRat:
    """Distance profile vp(w - w_k) of a point at the classical weight k."""
    if isinstance(w, Classical):
        return vp_between_weights(ctx, w.k, k)
    if isinstance(w, Perturbed):
        if w.k0 == k:
            return w.r
        return min(w.r, 1 + vp_int(w.k0 - k, ctx.p))
    if isinstance(w, Boundary):
        # vp(w_k) >= 1 > t for every integer k, so the profile is constant
        return w.t
    raise TypeError(f"not a weight point: {w!r}")


def min_factor_valuation(w: WeightPoint) -> Fraction:
    """A positive lower bound for vp(w - w_k) over all classical weights k.

    Used by the Newton-polygon certification: each zero of a ghost
    coefficient contributes at least this much to the coefficient's
    valuation at w.
    """
    if isinstance(w, Classical):
        return Fraction(1)
    if isinstance(w, Perturbed):
        return min(w.r, Fraction(1))
    if isinstance(w, Boundary):
        return w.t
    raise TypeError(f"not a weight point: {w!r}")


def format_rational(x: ExtRat) -> str:
    """Render an extended rational as 'num/den' (or 'inf'), never a float."""
    if x is INF:
        return "inf"
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_point(w: WeightPoint) -> str:
    if isinstance(w, Classical):
        return f"classical:{w.k}"
    if isinstance(w, Perturbed):
        return f"perturbed:{w.k0}:{w.r.numerator}/{w.r.denominator}"
    if isinstance(w, Boundary):
        return f"boundary:{w.t.numerator}/{w.t.denominator}"
    raise TypeError(f"not a weight point: {w!r}")


def parse_point(text: str) -> WeightPoint:
    """Parse 'classical:K', 'perturbed:K0:NUM/DEN', or 'boundary:NUM/DEN'."""
    parts = text.strip().split(":")
    kind = parts[0]
    try:
        if kind == "classical" and len(parts) == 2:
            return Classical(int(parts[1]))
        if kind == "perturbed" and len(parts) == 3:
            return Perturbed(int(parts[1]), parse_rational(parts[2]))
        if kind == "boundary" and len(parts) == 2:
            return Boundary(parse_rational(parts[1]))
    except ValueError as exc:
        raise ValueError(f"bad weight point {text!r}: {exc}") from exc
    raise ValueError(f"bad weight point {text!r}")
