"""Shared numerical kernels: quadrature, symmetric eigensolves, root finding.

Everything downstream funnels its heavy lifting through this module so that
tolerances and failure modes live in one place.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for integration on the reference interval [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")

    @property
    def order(self):
        return len(self.nodes)


def gauss_legendre(order):
    """Gauss-Legendre rule with `order` nodes (exact for degree 2*order-1)."""
    if order < 1:
        raise ValueError(f"quadrature order must be >= 1, got {order}")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return QuadratureRule(nodes=nodes, weights=weights)


def integrate(f, interval, rule):
    """Integrate a scalar callable over (lo, hi) with the given rule.

    Raises ValueError naming the offending abscissa if the integrand returns a
    non-finite value (singular-endpoint integrands must be truncated by the
    caller).
    """
    lo, hi = interval
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise ValueError(f"integration interval must be finite, got ({lo}, {hi})")
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    xs = mid + half * rule.nodes
    vals = np.array([f(x) for x in xs], dtype=float)
    bad = ~np.isfinite(vals)
    if np.any(bad):
        x_bad = xs[bad][0]
        raise ValueError(f"integrand returned a non-finite value at abscissa {x_bad!r}")
    return half * float(np.dot(rule.weights, vals))


def check_symmetric(matrix, rtol=1e-13):
    """Return the matrix as float ndarray, raising if it is not symmetric.

    Asymmetry is measured relative to the matrix norm; the default threshold
    1e-13 admits roundoff from symmetric assembly but rejects transposition
    bugs.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = np.linalg.norm(m)
    asym = np.linalg.norm(m - m.T)
    if asym > rtol * max(scale, 1.0):
        raise ValueError(
            f"matrix is not symmetric: |M - M^T| = {asym:.3e} exceeds "
            f"{rtol:.1e} * max(|M|, 1) = {rtol * max(scale, 1.0):.3e}"
        )
    return 0.5 * (m + m.T)


def eig_symmetric(matrix, tol=1e-14, max_sweeps=100):
    """Eigenvalues and eigenvectors of a symmetric matrix by cyclic Jacobi.

    Returns (w, V) with eigenvalues ascending and V[:, i] the orthonormal
    eigenvector for w[i].  The cyclic Jacobi iteration annihilates each
    off-diagonal entry in turn with a Givens rotation; convergence is
    quadratic once the off-diagonal mass is small.
    """
    a = check_symmetric(matrix).copy()
    n = a.shape[0]
    v = np.eye(n)
    if n == 1:
        return a.diagonal().copy(), v
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n), v
    for _ in range(max_sweeps):
        # Sum the off-diagonal entries directly: subtracting the diagonal
        # mass from the total cancels catastrophically near convergence.
        off2 = np.sum(a**2) - np.sum(a.diagonal() ** 2)
        if off2 < 1e-12 * np.sum(a.diagonal() ** 2):
            off2 = np.sum((a - np.diag(a.diagonal())) ** 2)
        off = np.sqrt(max(off2, 0.0))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                # Entries already negligible at working precision are zeroed
                # rather than rotated away (avoids overflow in the angle).
                if abs(apq) <= 1e-18 * tol * scale + 1e-300:
                    a[p, q] = a[q, p] = 0.0
                    continue
                # Rotation angle from the standard two-by-two symmetric
                # Schur decomposition (Golub & Van Loan 8.4).
                tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(tau) > 1e150:
                    t = 1.0 / (2.0 * tau)
                elif tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot_p = c * a[:, p] - s * a[:, q]
                rot_q = s * a[:, p] + c * a[:, q]
                a[:, p], a[:, q] = rot_p, rot_q
                rot_p = c * a[p, :] - s * a[q, :]
                rot_q = s * a[p, :] + c * a[q, :]
                a[p, :], a[q, :] = rot_p, rot_q
                a[p, q] = a[q, p] = 0.0
                rot_p = c * v[:, p] - s * v[:, q]
                rot_q = s * v[:, p] + c * v[:, q]
                v[:, p], v[:, q] = rot_p, rot_q
    else:
        raise RuntimeError(f"Jacobi iteration failed to converge in {max_sweeps} sweeps")
    w = a.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def bisect_root(f, bracket, tol=1e-12, max_iter=200):
    """Root of a scalar function on a sign-changing bracket by bisection.

    `tol` bounds the final bracket width (absolute plus relative to the
    midpoint magnitude).
    """
    lo, hi = bracket
    flo = f(lo)
    fhi = f(hi)
    if not (np.isfinite(flo) and np.isfinite(fhi)):
        raise ValueError(f"function is non-finite at a bracket endpoint ({lo}, {hi})")
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError(
            f"bracket ({lo}, {hi}) does not change sign: f(lo)={flo:.3e}, f(hi)={fhi:.3e}"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol * (1.0 + abs(mid)):
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)
