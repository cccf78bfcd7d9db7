"""Closed-form scalar quantities of the homology/collapsibility phase diagram.

For an n-vertex random d-complex with full (d-1)-skeleton and face
probability c/n, everything interesting at desk scale is governed by two
functions of t in (0,1),

    phi(t) = (d+1)(1-t) + (1+d t) ln t
    psi(t) = -ln t / (1-t)^d

and by the fixed points of t = exp(-c (1-t)^d).  This module locates the
relevant roots (collapse threshold c_col, homology threshold c_star, the
driving root t_c) and evaluates the derived densities: Betti density g,
its derivative, the shadow density, and the kernel-mass bound.

Numerical policy: every root is bracketed by a sign change and refined by
bisection until the bracket collapses to adjacent floats (well past the
1e-12 contract).  Powers (1-t)^d are evaluated in the log domain so the
formulas stay usable up to d = 1e4; for very large d the root t* itself
falls below the float range, so a log-domain twin of each evaluation is
provided and ``c_star``/``cstar_gap_log10`` work from ln t* throughout.

All functions are pure; there is no shared mutable state.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import AtCriticalPoint, NoInteriorRoot

_LN10 = math.log(10.0)
_GRID = 10_000
_MAX_D = 10_000


def _check_d(d) -> int:
    if d != int(d) or int(d) < 2:
        raise ValueError(f"dimension d must be an integer >= 2, got {d!r}"
                         " (the d=1 graph case is out of scope)")
    if int(d) > _MAX_D:
        raise ValueError(f"d = {d} exceeds the supported range (<= {_MAX_D})")
    return int(d)


def _check_c(c) -> float:
    c = float(c)
    if not c > 0.0 or not math.isfinite(c):
        raise ValueError(f"c must be a positive real, got {c!r}")
    return c


def _check_open_unit(t) -> float:
    t = float(t)
    if not (0.0 < t < 1.0):
        raise ValueError(f"t must lie in the open interval (0,1), got {t!r}")
    return t


def phi(d, t) -> float:
    """(d+1)(1-t) + (1+d*t)*ln(t); negative below t*, positive above."""
    d = _check_d(d)
    t = _check_open_unit(t)
    return (d + 1) * (1.0 - t) + (1.0 + d * t) * math.log(t)


def phi_from_log(d, log_t: float) -> float:
    """phi evaluated at t = exp(log_t); usable when t underflows float64."""
    d = _check_d(d)
    if not log_t < 0.0:
        raise ValueError("log_t must be negative")
    t = math.exp(log_t)
    return (d + 1) * (1.0 - t) + (1.0 + d * t) * log_t


def psi(d, t) -> float:
    """-ln(t)/(1-t)^d, the curve whose level sets are the fixed points."""
    d = _check_d(d)
    t = _check_open_unit(t)
    return -math.log(t) * math.exp(-d * math.log1p(-t))


def psi_from_log(d, log_t: float) -> float:
    """psi at t = exp(log_t), stable for arbitrarily negative log_t."""
    d = _check_d(d)
    if not log_t < 0.0:
        raise ValueError("log_t must be negative")
    t = math.exp(log_t)
    return -log_t * math.exp(-d * math.log1p(-t))


def _bisect(f, lo: float, hi: float) -> float:
    """Bisection on a strict sign change; runs until the bracket collapses."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo < 0.0) == (fhi < 0.0):
        raise ValueError("bisection bracket does not change sign")
    neg_lo = flo < 0.0
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == neg_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@functools.lru_cache(maxsize=None)
def t_psi(d) -> float:
    """Unique root in (0,1) of 1 - t + d*t*ln(t), the minimizer of psi."""
    d = _check_d(d)
    w = lambda t: 1.0 - t + d * t * math.log(t)
    # w -> 1 as t -> 0+ and w(1 - 1/(d+1)) < 0 for all d >= 2
    return _bisect(w, 1e-300, 1.0 - 1.0 / (d + 1))


def c_col(d) -> float:
    """Collapsibility threshold: the minimum of psi on (0,1)."""
    return psi(d, t_psi(d))


@functools.lru_cache(maxsize=None)
def ln_t_star(d) -> float:
    """ln of the unique root of phi in (0,1); exact even when t* underflows."""
    d = _check_d(d)
    hi = math.log(t_psi(d))          # phi > 0 at t_psi (t* < t_psi)
    lo = -(d + 2.0)                  # phi ~ -1 there for every d >= 2
    return _bisect(lambda u: (d + 1) * (1.0 - math.exp(u))
                   + (1.0 + d * math.exp(u)) * u, lo, hi)


def t_star(d) -> float:
    """Unique root of phi in (0,1).

    Underflows to 0.0 for d beyond ~708 where t* < double-min; use
    :func:`ln_t_star` in that regime.
    """
    return math.exp(ln_t_star(d))


def c_star(d) -> float:
    """Homology threshold: psi evaluated at t*."""
    return psi_from_log(d, ln_t_star(d))


def cstar_gap_log10(d) -> float:
    """log10((d+1) - c_star(d)), stable where the gap underflows float64.

    With u = ln t*, phi(t*) = 0 gives c_star = (d+1)/A for
    A = (1 + d t*)(1 - t*)^(d-1), so the gap is (d+1)(A-1)/A.
    """
    d = _check_d(d)
    u = ln_t_star(d)
    t = math.exp(u)
    if t > 0.0 and d * t > 1e-280:
        ln_a = math.log1p(d * t) + (d - 1) * math.log1p(-t)
        return (math.log10(d + 1)
                + math.log10(math.expm1(ln_a)) - ln_a / _LN10)
    # t below (or near) the float range: A - 1 = t*(1 + O(d^2 t*))
    return math.log10(d + 1) + u / _LN10


def _fixed_point_gap(d: int, c: float, t: float) -> float:
    """h(t) = t - exp(-c (1-t)^d); its zeros in (0,1] are the fixed points."""
    return t - math.exp(-c * math.exp(d * math.log1p(-t)))


def _interior_fixed_points(d: int, c: float, grid: int = _GRID) -> list[float]:
    """Roots of t = exp(-c(1-t)^d) in (0,1), ascending.  Accepts d >= 1.

    d = 1 is deliberately reachable here (not through the public API):
    the graph comparator curve of the experiments module reuses this scan.
    """
    ts = np.linspace(0.0, 1.0, grid + 1)[:-1]
    h = ts - np.exp(-c * np.exp(d * np.log1p(-ts)))
    roots: list[float] = []
    for i in np.flatnonzero(h == 0.0):
        if ts[i] > 0.0:
            roots.append(float(ts[i]))
    neg = h < 0.0
    for i in np.flatnonzero(neg[:-1] != neg[1:]):
        if h[i] == 0.0 or h[i + 1] == 0.0:
            continue  # exact grid hit already recorded once
        roots.append(_bisect(lambda t: _fixed_point_gap(d, c, t),
                             float(ts[i]), float(ts[i + 1])))
    if h[grid - 1] > 0.0 and _fixed_point_gap(d, c, 1.0 - 1e-13) < 0.0:
        # root between the last grid node and 1 (upper root close to 1)
        roots.append(_bisect(lambda t: _fixed_point_gap(d, c, t),
                             float(ts[grid - 1]), 1.0 - 1e-13))
    roots.sort()
    return roots


def fixed_points(d, c) -> list[float]:
    """All roots of t = exp(-c(1-t)^d) in (0,1], ascending; 1.0 is always one."""
    d = _check_d(d)
    c = _check_c(c)
    return _interior_fixed_points(d, c) + [1.0]


def t_c(d, c) -> float:
    """Smallest root of t = exp(-c(1-t)^d) in (0,1)."""
    d = _check_d(d)
    c = _check_c(c)
    interior = _interior_fixed_points(d, c)
    if not interior:
        raise NoInteriorRoot(
            f"t = exp(-c(1-t)^{d}) has no interior root at c = {c}"
            f" (needs c > c_col({d}) = {c_col(d):.6f})")
    return interior[0]


def betti_density(d, c) -> float:
    """Limit of dim H_d / C(n,d): zero up to c*, then the excess-mass form."""
    d = _check_d(d)
    c = _check_c(c)
    if c <= c_star(d):
        return 0.0
    t = t_c(d, c)
    q = math.exp(d * math.log1p(-t))        # (1-t)^d
    return c * t * q + c / (d + 1) * q * (1.0 - t) - (1.0 - t)


def betti_density_prime(d, c) -> float:
    """d/dc of the Betti density above c*: (1-t_c)^(d+1)/(d+1)."""
    d = _check_d(d)
    c = _check_c(c)
    t = t_c(d, c)
    return math.exp((d + 1) * math.log1p(-t)) / (d + 1)


def shadow_density(d, c) -> float:
    """Limit shadow density: 0 below c*, (1-t_c)^(d+1) above; undefined at c*."""
    d = _check_d(d)
    c = _check_c(c)
    cs = c_star(d)
    if abs(c - cs) <= 1e-12:
        raise AtCriticalPoint(
            f"the shadow density is not defined at c = c_star({d})")
    if c < cs:
        return 0.0
    t = t_c(d, c)
    return math.exp((d + 1) * math.log1p(-t))


def _kernel_mass_term(d: int, c: float, t: float) -> float:
    """t + c*t(1-t)^d - c/(d+1)*(1 - (1-t)^(d+1)); valid on (0, 1]."""
    if t == 1.0:
        return 1.0 - c / (d + 1)
    q = math.exp(d * math.log1p(-t))
    return t + c * t * q - c / (d + 1) * (-math.expm1((d + 1) * math.log1p(-t)))


def kernel_bound(d, c) -> float:
    """Upper bound on the expected kernel mass: max of the mass term
    over the fixed points of t = exp(-c(1-t)^d)."""
    d = _check_d(d)
    c = _check_c(c)
    val = max(_kernel_mass_term(d, c, t) for t in fixed_points(d, c))
    return min(1.0, max(0.0, val))


@dataclass(frozen=True)
class ThresholdReport:
    """Every closed-form quantity for one dimension d (optionally at one c).

    ``t_c``/``g``/``g_prime``/``shadow_density``/``kernel_bound`` are only
    populated when a density query c is supplied; ``t_c`` stays None when no
    interior fixed point exists, and ``shadow_density`` stays None exactly at
    the critical point where it is undefined.
    """

    d: int
    t_star: float
    c_star: float
    t_psi: float
    c_col: float
    c: float | None = None
    t_c: float | None = None
    g: float | None = None
    g_prime: float | None = None
    shadow_density: float | None = None
    kernel_bound: float | None = None


def threshold_report(d, c=None) -> ThresholdReport:
    """Assemble the full report for d, optionally with the densities at c."""
    d = _check_d(d)
    base = dict(d=d, t_star=t_star(d), c_star=c_star(d),
                t_psi=t_psi(d), c_col=c_col(d))
    if c is None:
        return ThresholdReport(**base)
    c = _check_c(c)
    interior = _interior_fixed_points(d, c)
    tc = interior[0] if interior else None
    g = betti_density(d, c)
    gp = betti_density_prime(d, c) if c > base["c_star"] else 0.0
    try:
        sh = shadow_density(d, c)
    except AtCriticalPoint:
        sh = None
    return ThresholdReport(c=c, t_c=tc, g=g, g_prime=gp, shadow_density=sh,
                           kernel_bound=kernel_bound(d, c), **base)
