"""Boundary location for one-sided exclusion sets on [0, 1].

Each tracker tests candidate means with a predicate "excluded(m)" whose true
set is a one-sided segment of the search bracket (a consequence of the
quasiconvexity of the wealth profile in m).  The helpers below locate the
segment boundary to a fixed precision with an expanding probe followed by
bisection, so a step whose boundary barely moves costs O(1) evaluations.

Both helpers assume the far end of the bracket (the sample mean) is kept;
callers guarantee that because the wealth at the sample mean is zero.  The
terminal bracket is half the requested precision so that the two endpoint
errors of an interval stay strictly inside twice the precision.
"""

from __future__ import annotations

from typing import Callable

__all__ = ["largest_excluded", "smallest_excluded"]

Predicate = Callable[[float], bool]


def largest_excluded(excluded: Predicate, lo: float, hi: float, precision: float) -> float:
    """Largest excluded point in [lo, hi], where exclusions form a left segment.

    Returns ``lo`` when ``lo`` itself is no longer excluded (the boundary did
    not move).  The returned point is always one that tested excluded, so a
    running intersection with previous intervals stays conservative.
    """
    if hi <= lo:
        return lo
    if not excluded(lo):
        return lo
    best = lo
    step = precision
    probe = lo + step
    while probe < hi:
        if excluded(probe):
            best = probe
            step *= 2.0
            probe = best + step
        else:
            hi = probe
            break
    while hi - best >= 0.5 * precision:
        mid = 0.5 * (best + hi)
        if excluded(mid):
            best = mid
        else:
            hi = mid
    return best


def smallest_excluded(excluded: Predicate, lo: float, hi: float, precision: float) -> float:
    """Mirror of largest_excluded: exclusions form a right segment of [lo, hi]."""
    if hi <= lo:
        return hi
    if not excluded(hi):
        return hi
    best = hi
    step = precision
    probe = hi - step
    while probe > lo:
        if excluded(probe):
            best = probe
            step *= 2.0
            probe = best - step
        else:
            lo = probe
            break
    while best - lo >= 0.5 * precision:
        mid = 0.5 * (lo + best)
        if excluded(mid):
            best = mid
        else:
            lo = mid
    return best
