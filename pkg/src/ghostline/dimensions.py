"""Dimension formulas for abstract form spaces, and their brute-force oracles.

Three ranks drive the whole combinatorics:

* ``d_iw(k)``  -- Iwahori-level classical forms, defined for every k >= 2
  via two floor terms; on the distinguished residue class it collapses to
  the even value 2*k_bullet + 2 - 2*delta_eps.
* ``d_ur(k)``  -- full-level forms, defined on the residue class
  k = k_eps mod (p-1) by floors in k_bullet against the thresholds t1, t2.
* ``d_new(k)`` -- the p-new complement d_iw - 2*d_ur, always even and >= 0.

The extremal-weight functions invert these step functions: k_mid_bullet(n)
is the unique index with n = d_iw/2, k_max_bullet(n) the largest with
d_ur <= n, and k_min_bullet(n) the smallest with d_iw - d_ur > n (returned
together with its undivided numerator, which the valuation sums need).

Two independent oracles guard the closed forms: a power-basis count for
d_iw, and a Jordan-Holder recursion in the Grothendieck group of
GL_2(F_p)-representations for d_ur.
"""

from __future__ import annotations

from typing import Iterator, Tuple

from .weight_space import GhostContext


def d_iw(ctx: GhostContext, k: int) -> int:
    """Iwahori-level rank at weight k >= 2 (any residue class)."""
    if k < 2:
        raise ValueError(f"d_iw requires k >= 2, got k = {k}")
    p = ctx.p
    return (k - 2 - ctx.s_eps) // (p - 1) + (k - 2 - ctx.res(ctx.a + ctx.s_eps)) // (p - 1) + 2


def d_iw_of_bullet(ctx: GhostContext, k_bullet: int) -> int:
    """On-class shortcut 2*k_bullet + 2 - 2*delta_eps."""
    return 2 * k_bullet + 2 - 2 * ctx.delta_eps


def d_ur_of_bullet(ctx: GhostContext, k_bullet: int) -> int:
    val = (k_bullet - ctx.t1) // (ctx.p + 1) + (k_bullet - ctx.t2) // (ctx.p + 1) + 2
    assert val >= 0, f"negative d_ur at k_bullet = {k_bullet}"
    return val


def d_ur(ctx: GhostContext, k: int) -> int:
    """Full-level rank; requires k >= 2 with k = k_eps mod (p-1)."""
    if k < 2:
        raise ValueError(f"d_ur requires k >= 2, got k = {k}")
    return d_ur_of_bullet(ctx, ctx.bullet(k))


def d_new(ctx: GhostContext, k: int) -> int:
    val = d_iw(ctx, k) - 2 * d_ur(ctx, k)
    assert val >= 0 and val % 2 == 0
    return val


def k_mid_bullet(ctx: GhostContext, n: int) -> int:
    """The unique k_bullet with n = d_iw/2 on the class."""
    return n + ctx.delta_eps - 1


def k_max_bullet(ctx: GhostContext, n: int) -> int:
    """Largest k_bullet with d_ur <= n (may be negative when none exists)."""
    return (ctx.p + 1) // 2 * n + ctx.beta(n) - 1


def k_min_tilde_bullet(ctx: GhostContext, n: int) -> int:
    """Undivided threshold whose ceiling by p is k_min_bullet(n)."""
    return (ctx.p + 1) // 2 * (n - 1 + 2 * ctx.delta_eps) - ctx.beta(n - 1) + 1


def k_min_bullet(ctx: GhostContext, n: int) -> Tuple[int, int]:
    """Return (k_min_tilde, k_min): d_iw - d_ur > n holds iff k_bullet >= k_min.

    Both values are exposed because the digit-sum identities in the
    valuation increments consume the undivided k_min_tilde.
    """
    tilde = k_min_tilde_bullet(ctx, n)
    return tilde, -((-tilde) // ctx.p)


def power_basis_degrees(ctx: GhostContext) -> Iterator[int]:
    """Strictly increasing degrees of the power basis elements e_1, e_2, ...

    Merges the two arithmetic progressions s_eps + j(p-1) and
    {a+s_eps} + j(p-1); genericity of a keeps them disjoint.
    """
    d1, d2 = ctx.s_eps, ctx.res(ctx.a + ctx.s_eps)
    lo, hi = min(d1, d2), max(d1, d2)
    j = 0
    while True:
        yield lo + j * (ctx.p - 1)
        yield hi + j * (ctx.p - 1)
        j += 1


def d_iw_power_basis_oracle(ctx: GhostContext, k: int) -> int:
    """Count power-basis elements of degree <= k-2 by direct enumeration."""
    if k < 2:
        raise ValueError(f"power basis count requires k >= 2, got k = {k}")
    count = 0
    for deg in power_basis_degrees(ctx):
        if deg > k - 2:
            break
        count += 1
    return count


def d_ur_jh_oracle(ctx: GhostContext, k: int) -> int:
    """Multiplicity of the Serre weight (a, s_eps) inside Sym^(k-2).

    Iterates the Grothendieck-group identity
        [sigma_{m,b}] = [sigma_{m-(p+1), b+1}]
                        + [sigma_{{m}, b}] + [sigma_{p-1-{m}, {m}+b}]
    down from (k-2, 0) until the first entry drops below p+1, counting the
    split-off irreducibles equal to sigma_{a, s_eps}, then resolves the
    remainder sigma_{r, s} with r in [0, p]: it contributes precisely when
    s = s_eps and r = a mod (p-1) (which covers a = 1 with r = p, where the
    extra factor comes from the Frobenius-untwisted line in Sym^p).
    """
    if k < 2:
        raise ValueError(f"jh oracle requires k >= 2, got k = {k}")
    p, a, target_s = ctx.p, ctx.a, ctx.s_eps
    m, b = k - 2, 0
    count = 0
    while m >= p + 1:
        mm = m % (p - 1)
        # split-off factors sigma_{mm, b} and sigma_{p-1-mm, mm+b}
        if mm == a and b % (p - 1) == target_s:
            count += 1
        if p - 1 - mm == a and (mm + b) % (p - 1) == target_s:
            count += 1
        m -= p + 1
        b += 1
    if b % (p - 1) == target_s and m % (p - 1) == a % (p - 1) and 0 <= m <= p:
        count += 1
    return count
