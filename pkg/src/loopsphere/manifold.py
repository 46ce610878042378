"""Charts, strata, Riemannian weights, and volume of the degree-one loop variety.

The degree-one sphere-valued loops

    n(theta) = v + a cos(theta) + b sin(theta),    n . n = R^2,

form a (3k-2)-dimensional variety inside S^k loops.  Away from two singular
strata -- point loops (|v| = R, a = b = 0) and great circles (v = 0) -- the
variety fibers over the radial coordinate t = |v|^2 / R^2 in (0, 1) with fiber
the Stiefel manifold of orthonormal 3-frames (e_v, e_a, e_b) in R^{k+1}:

    v = R sqrt(t) e_v,  a = R sqrt(1-t) e_a,  b = R sqrt(1-t) e_b.

This module provides the chart in algebraic (t) and arclength (tau,
t = sin^2(tau/R)) coordinates, the induced metric on the frame directions,
the scalar volume weights, and the total Riemannian volume.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import numerics, trigpoly
from .trigpoly import TrigPolyVec


class StratumError(ValueError):
    """Raised when an operation requires a smooth-stratum point but got a singular one."""


@dataclass(frozen=True)
class ModelParams:
    """Sphere dimension k >= 2, radius R > 0, coupling scale L > 0."""

    k: int
    R: float = 1.0
    L: float = 1.0

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise ValueError(f"sphere dimension k must be an integer >= 2, got {self.k}")
        if not (self.R > 0):
            raise ValueError(f"radius R must be positive, got {self.R}")
        if not (self.L > 0):
            raise ValueError(f"coupling scale L must be positive, got {self.L}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "R", float(self.R))
        object.__setattr__(self, "L", float(self.L))


class Stratum(enum.Enum):
    SMOOTH = "smooth"
    POINT_LOOPS = "point-loops"
    GREAT_CIRCLES = "great-circles"
    NOT_ON_VARIETY = "not-on-variety"


@dataclass(frozen=True)
class FramePoint:
    """Radial coordinate t in (0,1) plus an orthonormal 3-frame (rows of `frame`)."""

    t: float
    frame: np.ndarray  # shape (3, k+1); rows e_v, e_a, e_b

    def __post_init__(self):
        t = float(self.t)
        frame = np.asarray(self.frame, dtype=float)
        if not (0.0 < t < 1.0):
            raise ValueError(f"radial coordinate t must lie in (0, 1), got {t}")
        if frame.ndim != 2 or frame.shape[0] != 3:
            raise ValueError(f"frame must have shape (3, k+1), got {frame.shape}")
        gram = frame @ frame.T
        if np.linalg.norm(gram - np.eye(3)) > 1e-12:
            raise ValueError(
                f"frame rows are not orthonormal: |G - I| = {np.linalg.norm(gram - np.eye(3)):.3e}"
            )
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "frame", frame)

    @property
    def k(self):
        return self.frame.shape[1] - 1


def classify_stratum(n, params, rtol=1e-10):
    """Locate a loop within the degree-one variety.

    A loop off the variety (nonzero constraint residual) is NOT_ON_VARIETY;
    on the variety, vanishing harmonics mean a point loop, vanishing constant
    term a great circle, anything else the smooth stratum.
    """
    if n.ambient_dim != params.k + 1:
        raise ValueError(
            f"loop lives in R^{n.ambient_dim} but parameters specify R^{params.k + 1}"
        )
    res = trigpoly.constraint_residual(n, params.R)
    if res.max_abs_coeff() > rtol * params.R**2:
        return Stratum.NOT_ON_VARIETY
    if n.degree > 1:
        return Stratum.NOT_ON_VARIETY
    harm = 0.0 if n.degree == 0 else np.linalg.norm(n.a[0]) + np.linalg.norm(n.b[0])
    if harm <= trigpoly.TRIM_RTOL * params.R:
        return Stratum.POINT_LOOPS
    if np.linalg.norm(n.v) <= rtol * params.R:
        return Stratum.GREAT_CIRCLES
    return Stratum.SMOOTH


def alg_chart(point, params):
    """Degree-one loop for a frame point, algebraic radial coordinate t."""
    if point.k != params.k:
        raise ValueError(f"frame is in R^{point.k + 1}, parameters specify R^{params.k + 1}")
    R, t = params.R, point.t
    e_v, e_a, e_b = point.frame
    v = R * math.sqrt(t) * e_v
    a = R * math.sqrt(1.0 - t) * e_a
    b = R * math.sqrt(1.0 - t) * e_b
    return TrigPolyVec(v=v, a=a[None, :], b=b[None, :])


def trig_chart(tau, frame, params):
    """Degree-one loop in arclength coordinate tau in (0, pi R / 2)."""
    R = params.R
    if not (0.0 < tau < math.pi * R / 2.0):
        raise ValueError(f"arclength coordinate must lie in (0, {math.pi * R / 2.0}), got {tau}")
    t = math.sin(tau / R) ** 2
    return alg_chart(FramePoint(t=t, frame=frame), params)


def chart_inverse(n, params):
    """Recover (t, frame) from a smooth-stratum degree-one loop.

    Raises StratumError naming the stratum for singular or off-variety loops.
    """
    stratum = classify_stratum(n, params)
    if stratum is not Stratum.SMOOTH:
        raise StratumError(
            f"chart inverse requires a smooth-stratum loop; this one lies on '{stratum.value}'"
        )
    R = params.R
    v = n.v
    a = n.a[0]
    b = n.b[0]
    t = float(v @ v) / R**2
    e_v = v / np.linalg.norm(v)
    e_a = a / np.linalg.norm(a)
    e_b = b / np.linalg.norm(b)
    return FramePoint(t=t, frame=np.vstack([e_v, e_a, e_b]))


def tau_of_t(t, params):
    return params.R * math.asin(math.sqrt(t))


def t_of_tau(tau, params):
    return math.sin(tau / params.R) ** 2


def weight_prefactor(params):
    """Constant c_k = R^(3k-2) / 2^((5k-3)/2) in the algebraic radial weight."""
    k, R = params.k, params.R
    return R ** (3 * k - 2) / 2 ** ((5 * k - 3) / 2)


def weight_alg(t, params):
    """Scalar radial volume weight in the coordinate t in (0, 1)."""
    if not (0.0 < t < 1.0):
        raise ValueError(f"weight_alg requires t in the open interval (0, 1), got {t}")
    k = params.k
    return weight_prefactor(params) * t ** ((k - 3) / 2.0) * (1.0 - t) ** (k - 2) * (1.0 + t)


def weight_trig(tau, params):
    """Scalar radial volume weight in arclength tau in (0, pi R / 2)."""
    R, k = params.R, params.k
    if not (0.0 < tau < math.pi * R / 2.0):
        raise ValueError(
            f"weight_trig requires tau in (0, {math.pi * R / 2.0}), got {tau}"
        )
    pref = R ** (3 * k - 3) / 2 ** ((5 * k - 5) / 2)
    s = math.sin(tau / R)
    c = math.cos(tau / R)
    return pref * s ** (k - 2) * c ** (2 * k - 3) * (1.0 + s * s)


@dataclass(frozen=True)
class MetricBlock:
    """Diagonal frame-direction metric coefficients and their multiplicities.

    Keys: 'va', 'vb', 'ab' (rotations inside the frame) and, for k >= 3,
    'vi', 'ai', 'bi' (rotations of a frame leg against the orthogonal
    complement, multiplicity k-2 each).  The overall scale R^2/4 multiplies
    every entry.
    """

    coefficients: dict
    multiplicities: dict
    scale: float


def metric_omega(t, params):
    """Induced metric on the Stiefel-fiber directions at radial coordinate t."""
    if not (0.0 < t < 1.0):
        raise ValueError(f"metric_omega requires t in (0, 1), got {t}")
    k, R = params.k, params.R
    coeff = {
        "va": 1.0 + t,
        "vb": 1.0 + t,
        "ab": 2.0 * (1.0 - t),
    }
    mult = {"va": 1, "vb": 1, "ab": 1}
    if k >= 3:
        coeff.update({"vi": 2.0 * t, "ai": 1.0 - t, "bi": 1.0 - t})
        mult.update({"vi": k - 2, "ai": k - 2, "bi": k - 2})
    return MetricBlock(coefficients=coeff, multiplicities=mult, scale=R**2 / 4.0)


def sqrt_det_omega(t, params):
    """sqrt(det) of the frame-direction metric block (without the R^2/4 scale),
    computed directly from the diagonal coefficients."""
    block = metric_omega(t, params)
    det = 1.0
    for key, c in block.coefficients.items():
        det *= c ** block.multiplicities[key]
    return math.sqrt(det)


def sqrt_det_omega_closed_form(t, params):
    """Closed-form candidate for sqrt_det_omega recorded for comparison.

    This display disagrees with the direct product of the diagonal metric
    entries by the constant-and-(1-t) factor reported by
    volume_density_discrepancy; the direct computation is authoritative.
    """
    k = params.k
    return 2 ** ((k - 2) / 2.0) * t ** ((k - 2) / 2.0) * (1.0 - t) ** (k - 0.5) * (1.0 + t)


def volume_density_discrepancy(params, samples=None):
    """Compare the direct sqrt-determinant with the recorded closed form.

    Returns a record with both values on a sample grid and their ratio, which
    is sqrt(2) * (1 - t)^(-1) pointwise: the closed form carries one extra
    factor of (1-t) and one fewer factor of sqrt(2).
    """
    ts = np.linspace(0.1, 0.9, 9) if samples is None else np.asarray(samples, dtype=float)
    direct = np.array([sqrt_det_omega(t, params) for t in ts])
    recorded = np.array([sqrt_det_omega_closed_form(t, params) for t in ts])
    ratio = recorded / direct
    predicted = (1.0 - ts) / math.sqrt(2.0)
    return {
        "t": ts,
        "direct": direct,
        "recorded": recorded,
        "ratio": ratio,
        "ratio_model": predicted,
        "ratio_matches_model": bool(np.allclose(ratio, predicted, rtol=1e-12)),
    }


def sphere_volume(k):
    """Riemannian volume of the unit k-sphere (the 0-sphere counts 2 points)."""
    if k < 0:
        raise ValueError("sphere dimension must be >= 0")
    return 2.0 * math.pi ** ((k + 1) / 2.0) / math.gamma((k + 1) / 2.0)


def stiefel_volume(k):
    """Volume of the orthonormal 3-frames in R^{k+1}.

    Equals vol(S^k) vol(S^{k-1}) vol(S^{k-2}); at k = 2 the last factor is
    vol(S^0) = 2 and the value is 16 pi^2.
    """
    if k < 2:
        raise ValueError("frame manifold requires k >= 2")
    return (
        8.0
        * math.pi ** (3 * k / 2.0)
        / (math.gamma((k + 1) / 2.0) * math.gamma(k / 2.0) * math.gamma((k - 1) / 2.0))
    )


def radial_volume_closed_form(params):
    """Exact value of the integral of the radial weight over (0, pi R / 2)."""
    k, R = params.k, params.R
    return (
        2 ** (3 - (5 * k - 1) / 2.0)
        * R ** (3 * k - 2)
        * math.gamma(k - 1)
        * math.gamma((k + 1) / 2.0)
        / math.gamma((3 * k - 1) / 2.0)
    )


def radial_volume_quadrature(params, order=120):
    """The same radial integral by Gauss-Legendre in the arclength coordinate."""
    rule = numerics.gauss_legendre(order)
    eps = 1e-13 * params.R
    return numerics.integrate(
        lambda tau: weight_trig(tau, params),
        (eps, math.pi * params.R / 2.0 - eps),
        rule,
    )


def volume_total(params):
    """Total Riemannian volume: radial weight integral times the frame volume."""
    return radial_volume_closed_form(params) * stiefel_volume(params.k)
