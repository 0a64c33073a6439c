"""Bulk profile functions and the asymptotic constants C1, C2, C3.

ln E_n grows like C1*n + C2*sqrt(n) + C3 with

  C1 = int_0^r (u + a ln(r-y)) dmu + int_r^edge a ln(y-r) dmu,
  C2 = sqrt(2) b r^b int (ln g0(y) - a ln(sqrt(2)|y|) - u*[y<0]) dy,
  C3 = closed form + int { g1/(sqrt(2) g0) + 4by(ln g0 - u*[y<0])
        - (a/2) y (1+2b+8b ln(sqrt(2)|y|)) + (2ab-a^2) y/(4(1+y^2)) } dy,

where dmu(y) = 2 b^2 y^{2b-1} dy and (g0, g1) are erfc/Gaussian-smoothed
evaluations of the p/q polynomial families.  The integrands cancel
strongly at large |y|; all cancellations are performed either in exact
coefficient space (polynomial counterterms) or via log1p of explicitly
tiny corrections, never by subtracting two large floats.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import erfc as np_erfc

from . import combo_poly
from .errors import AccuracyError, DomainError
from .exact_mgf import ln_mgf_exact
from .quadrature import adaptive, graded_edges

_SQRT2 = math.sqrt(2.0)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_MAX_OCTAVES = 40


@dataclass(frozen=True)
class GPair:
    g0: float
    g1: float


@dataclass(frozen=True)
class ScanResult:
    all_positive: bool
    min_value: float
    argmin: float


@dataclass(frozen=True)
class AsymptoticCoeffs:
    C1: float
    C2: float
    C3: float
    err1: float
    err2: float
    err3: float


class _Profile:
    """Float-ready polynomial data for one (a, b) pair.

    The combinations p1 + (a/2)(1+2b) s p0 and q1 + (a/2)(1+2b) s q0 have
    their degree-(a+1) and degree-a heads cancelled exactly in rational
    arithmetic; they are what keeps the C3 integrand O(1/y) pointwise.
    """

    __slots__ = (
        "a", "b", "u", "cu_e", "sign_a",
        "p0", "q0", "p1", "q1", "p_comb", "q_comb", "tail_ratio", "y_switch",
    )

    def __init__(self, params):
        a, b, u = params.a, params.b, params.u
        self.a = a
        self.b = b
        self.u = u
        self.sign_a = -1.0 if a % 2 else 1.0
        self.cu_e = math.exp(u) - self.sign_a  # e^u - (-1)^a
        bfrac = Fraction(b) if float(b).is_integer() else Fraction(b).limit_denominator(10**12)
        p0 = combo_poly.p0(a)
        q0 = combo_poly.q0(a)
        p1 = combo_poly.p1(a, bfrac)
        q1 = combo_poly.q1(a, bfrac)
        head = Fraction(a, 2) * (1 + 2 * bfrac)
        s_poly = combo_poly.X
        self.p0 = p0.float_coeffs()
        self.q0 = q0.float_coeffs()
        self.p1 = p1.float_coeffs()
        self.q1 = q1.float_coeffs()
        self.p_comb = (p1 + head * s_poly * p0).float_coeffs()
        self.q_comb = (q1 + head * s_poly * q0).float_coeffs()
        # p0(t)/t^a - 1 as a polynomial in w = 1/t^2 (coefficients of
        # t^{a-2}, t^{a-4}, ... below the monic head)
        tail = []
        coeffs = p0.coeffs
        for m in range(1, a // 2 + 1):
            tail.append(float(coeffs[a - 2 * m]))
        self.tail_ratio = tail
        self.y_switch = max(8.0, math.sqrt(max(u, 0.0) + 64.0))


def _polyval(coeffs, x):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _profile(params):
    return _Profile(params)


def eval_G(y, params, _prof=None):
    """Evaluate the profile pair (g0, g1) at real y.

    g0 = p0(-sqrt2 y) [(-1)^a + (e^u - (-1)^a) erfc(y)/2]
         + q0(-sqrt2 y) (e^u - (-1)^a) exp(-y^2)/sqrt(2 pi),
    and g1 likewise with (p1, q1).  g0 is strictly positive for every
    real y, u and nonnegative integer a.
    """
    prof = _prof if _prof is not None else _profile(params)
    s = -_SQRT2 * y
    amp = prof.sign_a + prof.cu_e * 0.5 * math.erfc(y)
    gauss = prof.cu_e * math.exp(-y * y) / _SQRT_2PI
    g0 = _polyval(prof.p0, s) * amp + _polyval(prof.q0, s) * gauss
    g1 = _polyval(prof.p1, s) * amp + _polyval(prof.q1, s) * gauss
    return GPair(g0=g0, g1=g1)


def _psi2(y, prof):
    """C2 integrand: ln g0(y) - a ln(sqrt2 |y|) - u [y<0], stably.

    Beyond |y| >= y_switch the polynomial head dominates and the value is
    assembled from two log1p's of explicitly small corrections.
    """
    a = prof.a
    ay = abs(y)
    if ay < prof.y_switch:
        s = -_SQRT2 * y
        amp = prof.sign_a + prof.cu_e * 0.5 * math.erfc(y)
        gauss = prof.cu_e * math.exp(-y * y) / _SQRT_2PI
        g0 = _polyval(prof.p0, s) * amp + _polyval(prof.q0, s) * gauss
        if g0 <= 0.0:
            raise AccuracyError(f"g0 nonpositive at y={y}")
        out = math.log(g0)
        if a:
            out -= a * math.log(_SQRT2 * ay)
        if y < 0.0:
            out -= prof.u
        return out
    t = _SQRT2 * ay
    w = 1.0 / (t * t)
    ratio = 0.0
    tp = w
    for c in prof.tail_ratio:
        ratio += c * tp
        tp *= w
    qp = _polyval(prof.q0, t) / _polyval(prof.p0, t)
    small = 0.5 * math.erfc(ay) - math.exp(-y * y) / _SQRT_2PI * qp
    if y > 0.0:
        delta = prof.sign_a * prof.cu_e * small
    else:
        delta = -math.exp(-prof.u) * prof.cu_e * small
    return math.log1p(ratio) + math.log1p(delta)


def _c3_integrand(y, prof):
    """C3 integrand with the linear counterterm folded into exact algebra:

        combined + 4 b y psi2(y) + (2ab - a^2) y / (4 (1 + y^2)),

    combined = [p_comb(s) amp + q_comb(s) gauss] / (sqrt2 g0(y)), s = -sqrt2 y.
    """
    a, b = prof.a, prof.b
    s = -_SQRT2 * y
    amp = prof.sign_a + prof.cu_e * 0.5 * math.erfc(y)
    gauss = prof.cu_e * math.exp(-y * y) / _SQRT_2PI
    g0 = _polyval(prof.p0, s) * amp + _polyval(prof.q0, s) * gauss
    if g0 <= 0.0:
        raise AccuracyError(f"g0 nonpositive at y={y}")
    combined = (_polyval(prof.p_comb, s) * amp + _polyval(prof.q_comb, s) * gauss) / (
        _SQRT2 * g0
    )
    out = combined + (2.0 * a * b - a * a) * y / (4.0 * (1.0 + y * y))
    if y != 0.0:
        out += 4.0 * b * y * _psi2(y, prof)
    return out


def c2_integrand(y, params):
    return _psi2(y, _profile(params))


def c3_integrand(y, params):
    return _c3_integrand(y, _profile(params))


def positivity_scan(params, y_min=-12.0, y_max=12.0, step=1e-3):
    """Check g0 > 0 on a uniform grid; returns the grid minimum and location."""
    prof = _profile(params)
    y = np.arange(y_min, y_max + 0.5 * step, step)
    s = -_SQRT2 * y
    amp = prof.sign_a + prof.cu_e * 0.5 * np_erfc(y)
    gauss = prof.cu_e * np.exp(-y * y) / _SQRT_2PI
    p0v = np.zeros_like(y)
    for c in reversed(prof.p0):
        p0v = p0v * s + c
    q0v = np.zeros_like(y)
    for c in reversed(prof.q0):
        q0v = q0v * s + c
    g0 = p0v * amp + q0v * gauss
    idx = int(np.argmin(g0))
    return ScanResult(
        all_positive=bool(np.all(g0 > 0.0)),
        min_value=float(g0[idx]),
        argmin=float(y[idx]),
    )


def _refine_edges(edges, times):
    for _ in range(times):
        out = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            out.extend((lo, 0.5 * (lo + hi)))
        out.append(edges[-1])
        edges = out
    return edges


def _tail_integral(f, y0, power, tol, sign, refine):
    """Octave-doubling integration of f over [y0, +inf) (sign=+1) or
    (-inf, -y0] (sign=-1) assuming |f| ~ A/|y|^power eventually.

    Integrates octaves [L, 2L] until two successive fits of A agree, then
    adds the fitted algebraic tail A/((power-1) Y^{power-1}).  Raises
    AccuracyError when the octave sums fail to settle (non-Cauchy).
    """
    total = 0.0
    quad_err = 0.0
    lo = y0
    fit_prev = None
    octave_prev = None
    for _ in range(_MAX_OCTAVES):
        hi = 2.0 * lo
        edges = _refine_edges([lo, 0.5 * (lo + hi), hi], refine)
        if sign > 0:
            val, err = adaptive(f, edges, tol / 20.0)
        else:
            val, err = adaptive(lambda t: f(-t), edges, tol / 20.0)
        total += val
        quad_err += err
        # fit |f| ~ A / y^power from this octave's integral
        denom = (1.0 - 2.0 ** (1 - power)) / ((power - 1.0) * lo ** (power - 1.0))
        fit = val / denom
        y_end = hi
        tail_now = fit / ((power - 1.0) * y_end ** (power - 1.0))
        if fit_prev is not None:
            tail_disagreement = abs(fit - fit_prev) / (
                (power - 1.0) * y_end ** (power - 1.0)
            )
            settled_small = abs(val) < 0.1 * tol and abs(tail_now) < 0.1 * tol
            if abs(fit) < tol and (octave_prev is None or abs(val) <= abs(octave_prev) or settled_small):
                return total, quad_err + abs(tail_now)  # tail dropped
            if tail_disagreement < tol / 3.0 and abs(val) <= abs(octave_prev) * 1.05:
                return total + tail_now, quad_err + tail_disagreement
            if settled_small:
                return total + tail_now, quad_err + abs(tail_now)
        fit_prev = fit
        octave_prev = val
        lo = hi
    raise AccuracyError(
        f"tail estimate did not settle after {_MAX_OCTAVES} octaves (non-Cauchy)"
    )


def coeff_C1(params, tol=1e-9):
    return _c1_with_err(params, tol)[0]


def _c1_with_err(params, tol=1e-9, refine=0):
    """C1 via the mass substitution x = b y^{2b}: the radial measure becomes
    Lebesgue on [0, 1] and the only singularity is the log at x = b r^{2b}.

    |r - (x/b)^{1/(2b)}| is evaluated as r*|expm1(ln(x/crit)/(2b))| so the
    graded panels next to the critical point never subtract equal floats.
    """
    if tol <= 0:
        raise DomainError("tol must be positive", constraint="tol")
    a, b, r, u = params.a, params.b, params.r, params.u
    crit = params.bulk_mass
    u_part = u * crit
    if a == 0:
        return u_part, 0.0
    inv2b = 1.0 / (2.0 * b)
    log_r = math.log(r)
    gap_floor = 2.3e-16 * inv2b  # one ulp of x/crit through the map

    def log_gap(x):
        gap = abs(math.expm1(inv2b * math.log(x / crit)))
        return log_r + math.log(max(gap, gap_floor))

    levels = 40  # closest node sits ~crit*4e-15 from the singular point
    lo_edges = _refine_edges(graded_edges(0.0, crit, crit, levels=levels), refine)
    hi_edges = _refine_edges(graded_edges(crit, 1.0, crit, levels=levels), refine)
    v1, e1 = adaptive(log_gap, lo_edges, tol / (3.0 * a))
    v2, e2 = adaptive(log_gap, hi_edges, tol / (3.0 * a))
    # dropped strips of width w on each side of the singular point
    w = max(crit, 1.0 - crit) * 0.5**levels
    slope = r ** (1.0 - 2.0 * b) / (2.0 * b * b)
    drop = 2.0 * w * (abs(math.log(w * slope)) + 1.0)
    return u_part + a * (v1 + v2), a * (e1 + e2 + drop)


def coeff_C2(params, tol=1e-9):
    return _c2_with_err(params, tol)[0]


def _c2_with_err(params, tol=1e-9, refine=0):
    if tol <= 0:
        raise DomainError("tol must be positive", constraint="tol")
    prof = _profile(params)
    pref = _SQRT2 * params.b * params.r**params.b
    itol = tol / (4.0 * pref)
    f = lambda y: _psi2(y, prof)
    total = 0.0
    err = 0.0
    for sign in (1.0, -1.0):
        core = _refine_edges(graded_edges(0.0, prof.y_switch, 0.0), refine)
        if sign > 0:
            v, e = adaptive(f, core, itol)
        else:
            v, e = adaptive(lambda t: f(-t), core, itol)
        total += v
        err += e
        v, e = _tail_integral(f, prof.y_switch, 2, itol, sign, refine)
        total += v
        err += e
    return pref * total, pref * err


def coeff_C3(params, tol=1e-9):
    return _c3_with_err(params, tol)[0]


def _c3_with_err(params, tol=1e-9, refine=0):
    if tol <= 0:
        raise DomainError("tol must be positive", constraint="tol")
    a, b, alpha, u = params.a, params.b, params.alpha, params.u
    mass = params.bulk_mass  # b r^{2b}
    closed = -(0.5 + alpha) * u
    if a:
        inner_radius = mass ** (1.0 / (2.0 * b))  # b^{1/(2b)} r < 1
        closed += a * (1.0 - a) / (4.0 * (1.0 - inner_radius))
        closed += 0.25 * a * (2.0 + a - 2.0 * b + 4.0 * alpha) * math.log(
            1.0 / inner_radius - 1.0
        )
    prof = _profile(params)
    f = lambda y: _c3_integrand(y, prof)
    itol = tol / 4.0
    total = 0.0
    err = 0.0
    for sign in (1.0, -1.0):
        core = _refine_edges(graded_edges(0.0, prof.y_switch, 0.0), refine)
        if sign > 0:
            v, e = adaptive(f, core, itol)
        else:
            v, e = adaptive(lambda t: f(-t), core, itol)
        total += v
        err += e
        v, e = _tail_integral(f, prof.y_switch, 3, itol, sign, refine)
        total += v
        err += e
    return closed + total, err


def compute_coeffs(params, tol=1e-9):
    """All three constants with their quadrature error estimates."""
    c1, e1 = _c1_with_err(params, tol)
    c2, e2 = _c2_with_err(params, tol)
    c3, e3 = _c3_with_err(params, tol)
    for name, err in (("C1", e1), ("C2", e2), ("C3", e3)):
        if not (err <= tol):
            raise AccuracyError(f"{name} error estimate {err:.3e} exceeds tol {tol:.3e}")
    return AsymptoticCoeffs(C1=c1, C2=c2, C3=c3, err1=e1, err2=e2, err3=e3)


def predict(params, n, coeffs):
    """C1*n + C2*sqrt(n) + C3."""
    if n < 1:
        raise DomainError("n must be >= 1", constraint="n")
    return coeffs.C1 * n + coeffs.C2 * math.sqrt(n) + coeffs.C3


def residual(params, n, coeffs):
    """ln E_n minus its three-term prediction."""
    return ln_mgf_exact(params, n).ln_mgf - predict(params, n, coeffs)
