"""Non-negative least squares moment fitting."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .measures import RadialMeasure, moment

__all__ = ["nnls", "fit_measure", "FitResult", "MomentFitter", "midpoint_grid",
           "ConditioningWarning"]


class ConditioningWarning(RuntimeWarning):
    pass


def nnls(A, b, *, max_iter: int | None = None, tol: float | None = None):
    """Lawson-Hanson active-set solution of ``min |Ax - b|, x >= 0``.

    The variable entering the passive set is the one with the most negative
    gradient of ``|Ax - b|^2 / 2``; ties go to the lowest index.

    Returns
    -------
    x : ndarray
        Non-negative solution.
    rnorm : float
        Residual 2-norm ``|Ax - b|``.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if b.shape != (m,):
        raise ValueError("shape mismatch between A and b")
    if max_iter is None:
        max_iter = 3 * n
    if tol is None:
        tol = 10 * np.finfo(float).eps * np.linalg.norm(A, 1) * max(m, n)

    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    w = A.T @ (b - A @ x)
    it = 0
    while True:
        cand = np.where(~passive & (w > tol), w, -np.inf)
        if not np.isfinite(cand).any():
            break
        passive[int(np.argmax(cand))] = True
        while True:
            it += 1
            if it > max_iter:
                warnings.warn("nnls iteration limit reached", ConditioningWarning, stacklevel=2)
                return x, float(np.linalg.norm(A @ x - b))
            s = np.zeros(n)
            s[passive] = np.linalg.lstsq(A[:, passive], b, rcond=None)[0]
            if np.all(s[passive] > 0):
                break
            blocking = passive & (s <= 0)
            alpha = np.min(x[blocking] / (x[blocking] - s[blocking]))
            x = x + alpha * (s - x)
            passive &= x > tol
            x[~passive] = 0.0
        x = s
        w = A.T @ (b - A @ x)
    return x, float(np.linalg.norm(A @ x - b))


def midpoint_grid(R: float, K: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``(k + 1/2) R / K`` and cell widths ``R / K``."""
    if not (R > 0 and math.isfinite(R)):
        raise ValueError("grid radius must be positive and finite")
    if K < 8:
        raise ValueError("grid needs at least 8 nodes")
    r = (np.arange(K) + 0.5) * R / K
    return r, np.full(K, R / K)


@dataclass
class FitResult:
    measure: RadialMeasure
    residual: float
    weights: np.ndarray
    atom_weight: float
    condition: float


def _design(orders, r, dr, R, atom):
    orders = np.asarray(orders)
    M = 2 * np.pi * r[None, :] ** (2 * orders[:, None]) * dr[None, :]
    if atom:
        M = np.hstack([M, 2 * np.pi * R ** (2.0 * orders[:, None])])
    return M


def fit_measure(targets, grid, allow_boundary_atom: bool = False,
                orders=None) -> FitResult:
    """Fit non-negative cell weights to prescribed moments.

    Parameters
    ----------
    targets : sequence of float
        ``eps_n!`` for the orders in ``orders`` (default ``0, 1, ...``).
    grid : (R, K)
        Midpoint grid with ``K`` cells on ``(0, R)``.
    allow_boundary_atom : bool
        Add a point mass at ``r = R`` as an extra unknown.

    Returns
    -------
    FitResult
        Fitted measure (cell masses as atoms, plus the boundary atom) and
        the maximum relative moment residual.
    """
    t = np.asarray(targets, dtype=float)
    if t.size < 2:
        raise ValueError("need at least two target moments")
    orders = np.arange(t.size) if orders is None else np.asarray(orders, dtype=int)
    if orders.shape != t.shape:
        raise ValueError("orders and targets differ in length")
    R, K = grid
    R, K = float(R), int(K)
    r, dr = midpoint_grid(R, K)
    M = _design(orders, r, dr, R, allow_boundary_atom)
    # relative rows so each moment counts equally; unit columns for the solver
    row = 1.0 / np.where(t != 0, np.abs(t), 1.0)
    Ms = M * row[:, None]
    col = np.linalg.norm(Ms, axis=0)
    col[col == 0] = 1.0
    y, _ = nnls(Ms / col, t * row)
    w = y / col
    pred = M @ w
    residual = float(np.max(np.abs(pred - t) * row))
    sv = np.linalg.svd(Ms / col, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    if cond > 1e14:
        warnings.warn(f"moment system is ill-conditioned (cond ~ {cond:.1e})",
                      ConditioningWarning, stacklevel=2)
    cell = w[:K]
    atom = float(w[K]) if allow_boundary_atom else 0.0
    atoms = [(float(ri), float(wi * di)) for ri, wi, di in zip(r, cell, dr) if wi > 0]
    if atom > 0:
        atoms.append((R, atom))
    measure = RadialMeasure(atoms=tuple(atoms), density=None, R=R)
    return FitResult(measure, residual, cell, atom, cond)



class MomentFitter(BaseEstimator):
    """Estimator wrapper around :func:`fit_measure`.

    ``fit(orders, targets)`` learns non-negative radial weights; ``predict``
    returns ``2 pi int r^(2n) dlambda`` of the fitted measure.
    """

    def __init__(self, R: float = 6.0, K: int = 64, allow_boundary_atom: bool = False):
        self.R = R
        self.K = K
        self.allow_boundary_atom = allow_boundary_atom

    def fit(self, orders, targets):
        result = fit_measure(targets, (self.R, self.K), self.allow_boundary_atom,
                             orders=np.ravel(orders))
        self.measure_ = result.measure
        self.residual_ = result.residual
        self.atom_weight_ = result.atom_weight
        self.weights_ = result.weights
        return self

    def predict(self, orders):
        return np.array([moment(self.measure_, int(n)) for n in np.ravel(orders)])
