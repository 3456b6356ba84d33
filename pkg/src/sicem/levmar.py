"""Damped (Levenberg-style) least squares with analytic Jacobians.

Small self-contained fitter tailored to the spectrum models in this
package: Marquardt diagonal scaling, damping start 1e-3, x10 on a
rejected step and /10 on an accepted one, convergence on relative cost
change < 1e-10 or a negligible parameter step.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class LeastSquaresResult:
    params: np.ndarray
    cost: float  # sum of squared residuals
    covariance: np.ndarray  # (J^T J)^{-1} * residual variance
    converged: bool
    iterations: int
    degenerate_covariance: bool


def damped_least_squares(
    residual_jac,
    p0,
    max_iter: int = 200,
    lambda0: float = 1e-3,
    cost_rtol: float = 1e-10,
    step_rtol: float = 1e-12,
    lambda_max: float = 1e12,
) -> LeastSquaresResult:
    """Minimize ||r(p)||^2 given ``residual_jac(p) -> (r, J)``.

    The covariance is the Gauss-Newton one at the returned point, scaled
    by the residual variance SSR/(n - m); a near-singular normal matrix
    is handled with a pseudo-inverse and flagged.
    """
    p = np.asarray(p0, dtype=float).copy()
    r, jac = residual_jac(p)
    cost = float(r @ r)
    lam = lambda0
    converged = False
    iterations = 0

    for iterations in range(1, max_iter + 1):
        g = jac.T @ r
        hess = jac.T @ jac
        diag = np.diag(hess).copy()
        diag[diag <= 0.0] = np.max(diag) if np.max(diag) > 0 else 1.0
        try:
            step = np.linalg.solve(hess + lam * np.diag(diag), -g)
        except np.linalg.LinAlgError:
            lam *= 10.0
            if lam > lambda_max:
                break
            continue
        trial = p + step
        r_t, jac_t = residual_jac(trial)
        cost_t = float(r_t @ r_t)
        if cost_t <= cost:
            improvement = cost - cost_t
            p, r, jac, cost = trial, r_t, jac_t, cost_t
            lam = max(lam / 10.0, 1e-15)
            scale = np.maximum(np.abs(p), 1.0)
            if improvement <= cost_rtol * max(cost, 1e-300) or (
                np.abs(step) <= step_rtol * scale
            ).all():
                converged = True
                break
        else:
            lam *= 10.0
            if lam > lambda_max:
                break

    n, m = jac.shape
    dof = max(n - m, 1)
    s2 = cost / dof
    hess = jac.T @ jac
    degenerate = False
    try:
        cond = np.linalg.cond(hess)
    except np.linalg.LinAlgError:
        cond = np.inf
    if not np.isfinite(cond) or cond > 1e12:
        degenerate = True
        cov = np.linalg.pinv(hess) * s2
    else:
        cov = np.linalg.inv(hess) * s2
    return LeastSquaresResult(
        params=p,
        cost=cost,
        covariance=cov,
        converged=converged,
        iterations=iterations,
        degenerate_covariance=degenerate,
    )
