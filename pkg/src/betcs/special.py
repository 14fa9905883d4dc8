"""Scalar special functions shared by every numerical module.

Everything here is pure and stateless.  All gamma-function ratios in this
package go through log space; nothing ever evaluates Gamma itself, so the
formulas stay finite out to sample counts of 1e5 and beyond.
"""

from __future__ import annotations

import math

__all__ = [
    "ln_gamma",
    "lambert_w_m1",
    "kl_bernoulli",
    "psi",
    "inc_beta",
    "inc_beta_inv",
]

_LN_SQRT_2PI = 0.9189385332046727417803297364056  # ln sqrt(2 pi)
_NEG_INV_E = -math.exp(-1.0)

# B_{2k} / (2k (2k-1)) for k = 1..7: the de Moivre asymptotic series of
# ln Gamma.  With the argument shifted above 12 the truncation error is
# below 1e-17, i.e. under one ulp of the result.
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)

_SHIFT = 12.0


def ln_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0.

    Fixed-coefficient asymptotic series after an upward recurrence shift;
    arguments below 0.5 go through the reflection formula
    Gamma(x) Gamma(1-x) = pi / sin(pi x).
    """
    if math.isnan(x) or x <= 0.0:
        raise ValueError(f"ln_gamma requires x > 0, got {x!r}")
    if x < 0.5:
        return math.log(math.pi / math.sin(math.pi * x)) - ln_gamma(1.0 - x)
    shift = 0.0
    y = x
    while y < _SHIFT:
        shift += math.log(y)
        y += 1.0
    inv = 1.0 / y
    inv2 = inv * inv
    series = 0.0
    for c in reversed(_STIRLING):
        series = (series + c) * inv2
    series /= inv  # series = c0/y + c1/y^3 + ...
    return (y - 0.5) * math.log(y) - y + _LN_SQRT_2PI + series - shift


def lambert_w_m1(z: float) -> float:
    """Negative branch of the Lambert function on [-1/e, 0).

    Returns w <= -1 with w * exp(w) = z.  Starts from the asymptotic guess
    ln(-z) - ln(-ln(-z)), brackets the root of w + ln(-w) = ln(-z) (monotone
    on w <= -1), then polishes with safeguarded Halley steps.
    """
    if math.isnan(z) or z >= 0.0:
        raise ValueError(f"lambert_w_m1 requires -1/e <= z < 0, got {z!r}")
    if z < _NEG_INV_E:
        if z > _NEG_INV_E - 1e-12:
            return -1.0
        raise ValueError(f"lambert_w_m1 requires -1/e <= z < 0, got {z!r}")
    if z == _NEG_INV_E:
        return -1.0

    target = math.log(-z)  # in (-inf, -1)

    def g(w: float) -> float:
        return w + math.log(-w) - target

    # Near the branch point the series in p = -sqrt(2(1 + e z)) is the
    # better start; far from it the log-log guess is.
    p2 = 2.0 * (1.0 + math.e * z)
    if p2 < 0.02:
        p = -math.sqrt(max(p2, 0.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
        w = min(w, -1.0)
    else:
        w = target - math.log(-target)

    # Bracket: g is increasing on (-inf, -1]; g(-1) >= 0 always.
    hi = -1.0
    lo = w
    step = 1.0
    while g(lo) > 0.0:
        hi = lo
        lo -= step
        step *= 2.0

    for _ in range(200):
        ew = math.exp(w)
        f = w * ew - z
        # maintain the bracket through g, which is monotone on w <= -1
        if g(w) > 0.0:
            hi = w
        else:
            lo = w
        fp = ew * (w + 1.0)
        if fp != 0.0:
            fpp = ew * (w + 2.0)
            denom = fp - 0.5 * f * fpp / fp
            wn = w - (f / denom if denom != 0.0 else f / fp)
        else:
            wn = 0.5 * (lo + hi)
        if not (lo <= wn <= hi):
            wn = 0.5 * (lo + hi)
        if abs(wn - w) <= 1e-16 * abs(w):
            w = wn
            break
        w = wn
        if hi - lo <= 1e-16 * abs(hi):
            break
    return w


def kl_bernoulli(p: float, q: float) -> float:
    """Bernoulli relative entropy D(p, q) = p ln(p/q) + (1-p) ln((1-p)/(1-q)).

    Extended-real convention: 0 ln 0 = 0, and the value is +inf when q is a
    degenerate 0 or 1 that p does not match.  Callers treat +inf as
    "candidate mean excluded", which keeps interval searches total.
    """
    if not (0.0 <= p <= 1.0) or not (0.0 <= q <= 1.0):
        raise ValueError(f"kl_bernoulli requires probabilities, got ({p!r}, {q!r})")
    if p == q:
        return 0.0
    if q <= 0.0 or q >= 1.0:
        return math.inf
    val = 0.0
    if p > 0.0:
        val += p * math.log(p / q)
    if p < 1.0:
        val += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return max(val, 0.0)


def psi(x: float) -> float:
    """psi(x) = |x| - ln(|x| + 1), the symmetric gap between x and log1p(x)."""
    ax = abs(x)
    return max(ax - math.log1p(ax), 0.0)


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta, modified Lentz scheme."""
    max_iter = 400
    eps = 3e-16
    fpmin = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(
        f"incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}"
    )


def inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b), continued-fraction evaluation."""
    if not (a > 0.0 and b > 0.0):
        raise ValueError(f"inc_beta requires a, b > 0, got ({a!r}, {b!r})")
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"inc_beta requires x in [0, 1], got {x!r}")
    if x == 0.0 or x == 1.0:
        return x
    ln_front = (
        ln_gamma(a + b)
        - ln_gamma(a)
        - ln_gamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return min(max(front * _beta_cf(a, b, x) / a, 0.0), 1.0)
    return min(max(1.0 - front * _beta_cf(b, a, 1.0 - x) / b, 0.0), 1.0)


def inc_beta_inv(a: float, b: float, p: float) -> float:
    """Inverse of x -> I_x(a, b): the x with I_x(a, b) = p, to 1e-10.

    Monotone in p.  Bisection with Newton acceleration; the Newton step uses
    the beta density and is rejected whenever it leaves the current bracket.
    """
    if not (a > 0.0 and b > 0.0):
        raise ValueError(f"inc_beta_inv requires a, b > 0, got ({a!r}, {b!r})")
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"inc_beta_inv requires p in [0, 1], got {p!r}")
    if p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    ln_norm = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)
    lo, hi = 0.0, 1.0
    x = a / (a + b)
    for _ in range(200):
        fx = inc_beta(a, b, x) - p
        if abs(fx) < 1e-12:
            return x
        if fx > 0.0:
            hi = x
        else:
            lo = x
        if hi - lo < 1e-15:
            break
        pdf = 0.0
        if 0.0 < x < 1.0:
            ln_pdf = ln_norm + (a - 1.0) * math.log(x) + (b - 1.0) * math.log1p(-x)
            if ln_pdf > -700.0:
                pdf = math.exp(ln_pdf)
        if pdf > 0.0:
            xn = x - fx / pdf
            if not (lo < xn < hi):
                xn = 0.5 * (lo + hi)
        else:
            xn = 0.5 * (lo + hi)
        x = xn
    return x
