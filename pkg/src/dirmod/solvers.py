"""Solvers for the design QPs:  min x'Wx  s.t.  Gx >= t.

Three routes with one shared problem shape:

* ``penalty_solve`` -- alternating closed-form minimization of the penalty
  objective  x'Wx + eta * ||Gx - t - u||^2  over u >= 0 and x.  The linear
  system is factored once per solve and reused across iterations.
* ``nnls_design_solve`` -- non-iterative route.  Where the pseudo-inverse
  substitution x = G^+(t + u) is exact (full row rank G for W = I; square
  nonsingular G otherwise) it reduces the QP to one non-negative
  least-squares problem.  Everywhere else it falls back to an exact
  least-distance program in the whitened metric (``ldp_solve``).
* ``oracle_solve`` -- exponential active-set enumeration, exact for any
  convex instance small enough to enumerate.  Test harness only.

W may be singular (signal-level designs with more transmit antennas than
user antennas) as long as null(W) is contained in null(G); directions
invisible to both the objective and the constraints are pinned to zero.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls as _lawson_hanson

from .errors import InfeasibleDesignError, NumericalError

_RANK_TOL = 1e-10


# ---------------------------------------------------------------------------
# building-block operations
# ---------------------------------------------------------------------------

def update_u(g: np.ndarray, x: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Closed-form slack update: u* = (Gx - t)_+ ."""
    return np.maximum(g @ x - target, 0.0)


def update_lambda(g, u, target, eta, weight=None):
    """Closed-form variable update: (W/eta + G'G)^-1 G'(t + u).

    W defaults to the identity.  The caller guarantees the regularized
    matrix is positive definite; a singular system raises NumericalError
    with a condition estimate.  eta = inf is the exact-penalty limit: the
    step becomes the minimum-W-norm least-squares solution of Gx = t + u.
    """
    g = np.asarray(g, dtype=float)
    target = np.asarray(target, dtype=float)
    if math.isinf(eta):
        white = _Whitened(weight, g)
        z, *_ = np.linalg.lstsq(white.g_hat, target + u, rcond=None)
        return white.lift(z)
    n = g.shape[1]
    w = np.eye(n) if weight is None else np.asarray(weight, dtype=float)
    system = w / eta + g.T @ g
    rhs = g.T @ (target + u)
    try:
        c = np.linalg.cholesky(system)
    except np.linalg.LinAlgError:
        cond = np.linalg.cond(system)
        raise NumericalError(
            f"penalty system is not positive definite (cond ~ {cond:.3e}); "
            "weight matrix is singular on directions G can see"
        ) from None
    y = np.linalg.solve(c, rhs)
    return np.linalg.solve(c.T, y)


def _kkt_certificate(a, b, u):
    """Max KKT violation of u for  min ||A u - b||, u >= 0, relative scale.

    Optimality: grad = A'(Au - b) >= 0 everywhere and = 0 on the support.
    Returns the worst violation divided by the natural gradient scale.
    """
    grad = a.T @ (a @ u - b)
    scale = max(
        float(np.linalg.norm(a, ord="fro") * np.linalg.norm(b)),
        float(np.linalg.norm(a, ord="fro") ** 2 * np.linalg.norm(u)),
        1e-300,
    )
    worst = max(
        float(np.max(-grad, initial=0.0)),
        float(np.max(np.abs(grad[u > 0]), initial=0.0)),
    )
    return worst / scale


def _active_set_nnls(a, b, warm=None):
    """Plain Lawson-Hanson with exact passive-set least squares.

    Pure-python fallback used only when the library solve fails its KKT
    certificate; instance sizes here are tiny, so clarity beats speed.
    """
    m, n = a.shape
    passive = np.zeros(n, dtype=bool)
    u = np.zeros(n)
    if warm is not None and np.any(warm > 0):
        passive[:] = warm > 0
        z = np.zeros(n)
        z[passive] = np.linalg.lstsq(a[:, passive], b, rcond=None)[0]
        if np.all(z[passive] > 0):
            u = z
        else:
            passive[:] = False
    grad_scale = max(float(np.linalg.norm(a, ord="fro") * max(np.linalg.norm(b), 1.0)), 1.0)
    tol = 1e-12 * grad_scale
    cap = 30 * (n + 5)
    for _ in range(cap):
        w = a.T @ (b - a @ u)
        w[passive] = -np.inf
        j = int(np.argmax(w))
        if w[j] <= tol:
            break
        passive[j] = True
        for _ in range(cap):
            z = np.zeros(n)
            z[passive] = np.linalg.lstsq(a[:, passive], b, rcond=None)[0]
            if np.all(z[passive] > 0.0):
                u = z
                break
            shrink = passive & (z <= 0.0)
            alpha = float(np.min(u[shrink] / (u[shrink] - z[shrink])))
            u = u + alpha * (z - u)
            passive &= u > 1e-14 * max(float(np.max(u, initial=0.0)), 1.0)
            u[~passive] = 0.0
        else:  # pragma: no cover - inner stall guard
            break
    return u


def _certified_nnls(a, b, maxiter=None):
    """min ||A u - b|| over u >= 0, with a verified KKT certificate.

    scipy's solver is fast but occasionally stops short on ill-conditioned
    duals (it is tuned for residual decrease, not certificate tightness);
    when its certificate is loose the active-set fallback polishes it.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    u = None
    try:
        u, _ = _lawson_hanson(a, b, maxiter=maxiter or 200 * max(a.shape[1], 10))
    except RuntimeError:
        pass
    if u is None or _kkt_certificate(a, b, u) > 1e-10:
        polished = _active_set_nnls(a, b, warm=u)
        if u is None or (
            np.linalg.norm(a @ polished - b) <= np.linalg.norm(a @ u - b)
        ):
            u = polished
    if u is None or not np.all(np.isfinite(u)):  # pragma: no cover
        raise NumericalError("NNLS failed to produce a finite iterate")
    return u


def nnls_solve(d_mat: np.ndarray, d_vec: np.ndarray, maxiter=None) -> np.ndarray:
    """u >= 0 minimizing ||D u + d||^2 (active-set NNLS).

    Backed by scipy's Lawson-Hanson-family implementation plus a KKT
    certificate; a failed certificate triggers an exact active-set polish,
    and an unrecoverable solve raises NumericalError.
    """
    d_mat = np.asarray(d_mat, dtype=float)
    d_vec = np.asarray(d_vec, dtype=float)
    return _certified_nnls(d_mat, -d_vec, maxiter=maxiter)


def nnls_kkt_report(d_mat, d_vec, u, tol: float = 1e-9) -> dict:
    """KKT diagnostics for an NNLS solution of ||D u + d||^2, u >= 0."""
    grad = 2.0 * d_mat.T @ (d_mat @ u + d_vec)
    free = u > tol
    return {
        "max_free_gradient": float(np.max(np.abs(grad[free]), initial=0.0)),
        "min_bound_gradient": float(np.min(grad[~free], initial=0.0)),
        "max_complementary_slack": float(np.max(np.abs(u * grad), initial=0.0)),
    }


def pseudo_inverse(b: np.ndarray) -> np.ndarray:
    """Moore-Penrose inverse (SVD-based)."""
    return np.linalg.pinv(np.asarray(b, dtype=float))


def cholesky_factor(q: np.ndarray):
    """L with L L' = Q.  Returns (L, used_eigen_fallback).

    A PSD-but-singular (or slightly indefinite from roundoff) Q falls back
    to the symmetric eigenvalue square root; genuinely indefinite input is
    an error.
    """
    q = np.asarray(q, dtype=float)
    q = 0.5 * (q + q.T)
    try:
        return np.linalg.cholesky(q), False
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(q)
        top = float(vals[-1]) if vals.size else 0.0
        if vals.size and vals[0] < -1e-6 * max(top, 1.0):
            raise NumericalError(
                f"matrix is indefinite (eigenvalues in [{vals[0]:.3e}, {top:.3e}])"
            ) from None
        return vecs @ np.diag(np.sqrt(np.clip(vals, 0.0, None))), True


# ---------------------------------------------------------------------------
# whitening: reduce  min x'Wx s.t. Gx >= t  to  min ||z||^2 s.t. Gz >= t
# ---------------------------------------------------------------------------

class _Whitened:
    """Change of variables z = L' x on range(W) so that x'Wx = ||z||^2.

    Null directions of W must be invisible to G (true for every design in
    this package: a direction carrying no received power satisfies no
    constraint either); they are pinned to zero.
    """

    def __init__(self, weight, g):
        g = np.asarray(g, dtype=float)
        if weight is None:
            self.identity = True
            self.g_hat = g
            return
        self.identity = False
        w = np.asarray(weight, dtype=float)
        w = 0.5 * (w + w.T)
        vals, vecs = np.linalg.eigh(w)
        top = float(vals[-1]) if vals.size else 0.0
        if vals.size and vals[0] < -1e-8 * max(top, 1.0):
            raise NumericalError(f"weight matrix indefinite (min eig {vals[0]:.3e})")
        keep = vals > _RANK_TOL * max(top, 1.0)
        null_vecs = vecs[:, ~keep]
        if null_vecs.size:
            leak = np.linalg.norm(g @ null_vecs)
            scale = max(np.linalg.norm(g), 1.0)
            if leak > 1e-8 * scale:
                raise NumericalError(
                    "constraints act on null directions of the weight matrix; "
                    "the QP is degenerate"
                )
        self.scale = np.sqrt(vals[keep])
        self.basis = vecs[:, keep]
        self.g_hat = (g @ self.basis) / self.scale

    def lift(self, z):
        if self.identity:
            return z
        return self.basis @ (z / self.scale)


# ---------------------------------------------------------------------------
# penalty method
# ---------------------------------------------------------------------------

@dataclass
class PenaltyConfig:
    """Knobs for the alternating penalty solve.

    eta may be any positive weight including inf (the exact-penalty limit).
    With refine on, the solve finishes by jumping to the fixed point of the
    alternation -- the exact minimizer of the penalized objective at the
    final eta -- instead of crawling there one contraction step at a time.
    Turn it off to watch the bare alternation.
    """

    eta: float = 1e6
    eps: float = 1e-8
    max_iterations: int = 10_000
    refine: bool = True
    # optional geometric continuation from continuation_start up to eta
    continuation: bool = False
    continuation_start: float = 1e2

    def __post_init__(self):
        if not self.eta > 0 or not self.eps > 0:
            raise ValueError("eta and eps must be positive")

    def schedule(self):
        if not self.continuation or self.continuation_start >= self.eta:
            return [self.eta]
        stages = []
        e = self.continuation_start
        ceiling = 1e12 if math.isinf(self.eta) else self.eta
        while e < ceiling:
            stages.append(e)
            e *= 10.0
        stages.append(self.eta)
        return stages


@dataclass
class SolveTrace:
    """Per-iteration record of one penalty solve (final eta stage)."""

    objectives: list = field(default_factory=list)
    x: np.ndarray = None
    u: np.ndarray = None
    iterations: int = 0
    converged: bool = False


class _PenaltyKernel:
    """SVD factorization of the whitened constraint matrix, done once.

    Each x-update  (I/eta + G'G)^-1 G'(t + u)  becomes a filtered SVD
    apply, which is stable for any eta (no normal-equations squaring) and
    has the exact-penalty limit eta = inf as the pseudo-inverse apply.
    """

    def __init__(self, weight, g):
        self.white = _Whitened(weight, g)
        u_svd, sig, vt = np.linalg.svd(self.white.g_hat, full_matrices=False)
        top = float(sig[0]) if sig.size else 0.0
        self.live = sig > _RANK_TOL * max(top, 1.0)
        self.u_svd = u_svd
        self.sig = sig
        self.vt = vt

    def minimize(self, rhs, eta):
        inv_eta = 0.0 if math.isinf(eta) else 1.0 / eta
        filt = np.where(self.live, self.sig / (inv_eta + self.sig**2), 0.0)
        return self.vt.T @ (filt * (self.u_svd.T @ rhs))

    def fixed_point(self, target, eta):
        """Exact joint minimizer of the penalized objective at this eta.

        Minimizing over x first leaves the u-marginal
            eta (t + u)' (I + eta G G')^{-1} (t + u),  u >= 0,
        a single NNLS in u; x then follows from one more x-update.  At
        eta = inf the marginal forces t + u into range(G) and the problem
        is the original QP, handled by the least-distance route.
        """
        g_hat = self.white.g_hat
        if math.isinf(eta):
            z = _ldp_core(g_hat, target)
            return z, np.maximum(g_hat @ z - target, 0.0)
        m = g_hat.shape[0]
        shrink = 1.0 / np.sqrt(1.0 + eta * self.sig**2) - 1.0
        half_inv = (self.u_svd * shrink) @ self.u_svd.T + np.eye(m)
        d_mat = np.sqrt(eta) * half_inv
        u = _certified_nnls(d_mat, -(d_mat @ target))
        z = self.minimize(target + u, eta)
        return z, u


def _penalty_objective(z, u, g_hat, target, eta):
    resid = g_hat @ z - target - u
    quad = float(resid @ resid)
    if math.isinf(eta):
        # exact-penalty limit: infeasibility dominates any finite norm
        allow = (1e-9 * max(float(np.linalg.norm(target)), 1.0)) ** 2
        return float(z @ z) if quad <= allow else math.inf
    return float(z @ z + eta * quad)


def penalty_solve(g, target, cfg: PenaltyConfig | None = None, weight=None):
    """Alternating u/x minimization of the penalty objective.

    Starts from x = 0, alternates the two closed-form updates, and stops
    when the iterate moves less than cfg.eps or the objective can no longer
    decrease (roundoff stall).  The alternation contracts slowly in
    directions where constraints end up slack (ratio 1 - 1/(eta sigma^2)),
    so with cfg.refine the solve finishes at the alternation's fixed point
    computed directly; the appended objective can only be lower.  Returns
    (x, SolveTrace) with the trace covering the final eta stage.
    """
    cfg = cfg or PenaltyConfig()
    g = np.asarray(g, dtype=float)
    target = np.asarray(target, dtype=float)
    kernel = _PenaltyKernel(weight, g)
    g_hat = kernel.white.g_hat

    z = np.zeros(g_hat.shape[1])
    trace = SolveTrace()
    total_iters = 0
    for eta in cfg.schedule():
        objectives = []
        u = np.maximum(g_hat @ z - target, 0.0)
        converged = False
        for _ in range(cfg.max_iterations):
            u = np.maximum(g_hat @ z - target, 0.0)
            z_new = kernel.minimize(target + u, eta)
            obj = _penalty_objective(z_new, u, g_hat, target, eta)
            total_iters += 1
            if objectives and obj > objectives[-1]:
                # Exact alternation cannot increase the objective; a rise is
                # roundoff at the fixed point.  Keep the previous iterate.
                converged = True
                break
            objectives.append(obj)
            step = float(np.linalg.norm(z_new - z))
            z = z_new
            if step < cfg.eps:
                converged = True
                break
        trace = SolveTrace(
            objectives=objectives,
            u=u,
            iterations=total_iters,
            converged=converged,
        )
    if cfg.refine:
        eta_final = cfg.schedule()[-1]
        z_fp, u_fp = kernel.fixed_point(target, eta_final)
        u_fp = np.maximum(g_hat @ z_fp - target, 0.0)
        obj_fp = _penalty_objective(z_fp, u_fp, g_hat, target, eta_final)
        if not trace.objectives or obj_fp <= trace.objectives[-1]:
            trace.objectives.append(obj_fp)
            trace.u = u_fp
            trace.converged = True
            z = z_fp
    x = kernel.white.lift(z)
    trace.x = x
    return x, trace


# ---------------------------------------------------------------------------
# non-iterative routes
# ---------------------------------------------------------------------------

def _ldp_core(g_hat, target, feas_tol: float = 1e-10):
    """min ||z||  s.t.  G z >= t  through the dual NNLS (Lawson-Hanson).

    Stack E = [G'; t'], f = e_{n+1}; with nonnegative nu minimizing
    ||E nu - f|| and residual r = E nu - f, the solution is
    z_j = -r_j / r_{n+1}; a vanishing residual certifies an empty
    constraint set.  The support of nu is the active set, so the raw point
    is polished by re-solving the equality-constrained QP on that support
    and kept only when its own KKT conditions verify.
    """
    target = np.asarray(target, dtype=float)
    m, n = g_hat.shape
    e_mat = np.vstack([g_hat.T, target[np.newaxis, :]])
    f_vec = np.zeros(n + 1)
    f_vec[-1] = 1.0
    nu = _certified_nnls(e_mat, f_vec)
    r = e_mat @ nu - f_vec
    r_norm = float(np.linalg.norm(r))
    if r_norm < feas_tol:
        raise InfeasibleDesignError(
            "constraint set is empty (LDP dual residual "
            f"{r_norm:.2e} below {feas_tol:.0e})"
        )
    z = -r[:n] / r[-1]

    t_scale = max(float(np.max(np.abs(target), initial=0.0)), 1.0)
    support = nu > 1e-12 * max(float(np.max(nu, initial=0.0)), 1e-300)
    if np.any(support):
        g_s = g_hat[support]
        beta, *_ = np.linalg.lstsq(g_s @ g_s.T, target[support], rcond=None)
        polished = g_s.T @ beta
        beta_floor = -1e-9 * max(float(np.max(np.abs(beta), initial=0.0)), 1.0)
        slack_floor = -1e-9 * t_scale
        if (
            np.all(beta >= beta_floor)
            and float(np.min(g_hat @ polished - target, initial=0.0)) >= slack_floor
            and polished @ polished <= z @ z * (1.0 + 1e-9) + 1e-12
        ):
            z = polished

    worst_slack = float(np.min(g_hat @ z - target, initial=0.0))
    if worst_slack < -1e-7 * t_scale:
        raise NumericalError(
            f"LDP verification failed: worst slack {worst_slack:.3e} "
            f"against target scale {t_scale:.3e}"
        )
    return z


def ldp_solve(g, target, weight=None, feas_tol: float = 1e-10):
    """Exact least-distance solution of  min x'Wx  s.t.  Gx >= t.

    Whitens the metric, solves the Euclidean LDP in the whitened
    coordinates, and lifts back.  Raises InfeasibleDesignError on an empty
    constraint set and NumericalError if the computed point fails its own
    feasibility verification.
    """
    white = _Whitened(weight, g)
    z = _ldp_core(white.g_hat, np.asarray(target, dtype=float), feas_tol)
    return white.lift(z)


def pinv_nnls_solve(g, target, weight=None):
    """The pseudo-inverse NNLS substitution, evaluated as written.

    x = G^+(t + u) turns the QP into  min_u>=0 ||G^+ u + G^+ t||^2  (W = I)
    or, with W = LL',  min_u>=0 ||L'G^+ u + L'G^+ t||^2.  Exact when the
    substitution parameterizes all relevant solutions -- see
    nnls_design_solve for the guarded production entry.
    """
    g = np.asarray(g, dtype=float)
    target = np.asarray(target, dtype=float)
    g_pinv = pseudo_inverse(g)
    if weight is None:
        d_mat = g_pinv
    else:
        ell, _ = cholesky_factor(weight)
        d_mat = ell.T @ g_pinv
    u = nnls_solve(d_mat, d_mat @ target)
    return g_pinv @ (target + u), u


def nnls_design_solve(g, target, weight=None):
    """Production non-iterative solve: pseudo-inverse NNLS when exact,
    whitened LDP otherwise.  Returns (x, route) with route in
    {"pinv-nnls", "ldp"}.

    The substitution x = G^+(t + u) spans the solution set exactly when
    G has full row rank and the metric is Euclidean (the optimum lies in
    range(G')), or when G is square nonsingular (the substitution is then
    a bijection).  Outside those regimes it can return infeasible or
    suboptimal points, so the LDP route takes over.
    """
    g = np.asarray(g, dtype=float)
    m, n = g.shape
    sig = np.linalg.svd(g, compute_uv=False)
    rank = int(np.sum(sig > _RANK_TOL * (sig[0] if sig.size else 1.0)))
    full_row = rank == m
    if (weight is None and full_row) or (weight is not None and m == n and rank == n):
        x, _ = pinv_nnls_solve(g, target, weight=weight)
        return x, "pinv-nnls"
    return ldp_solve(g, target, weight=weight), "ldp"


# ---------------------------------------------------------------------------
# enumeration oracle
# ---------------------------------------------------------------------------

def oracle_solve(g, target, weight=None, max_dim: int = 10,
                 max_candidates: int = 300_000, feas_tol: float = 1e-9):
    """Exact reference solution by active-set enumeration.

    Every subset of <= n constraints is solved as an equality-constrained
    QP through its KKT system; feasible candidates compete on objective.
    The optimum of a convex QP is the optimum of the equality-QP on some
    such subset, so the minimum over candidates is exact.  Exponential in
    the instance size -- refuses anything big; tests only.
    """
    g = np.asarray(g, dtype=float)
    target = np.asarray(target, dtype=float)
    m, n = g.shape
    if n > max_dim:
        raise NumericalError(
            f"oracle refuses dimension {n} > {max_dim} (enumeration blow-up)"
        )
    n_subsets = sum(math.comb(m, k) for k in range(min(m, n) + 1))
    if n_subsets > max_candidates:
        raise NumericalError(
            f"oracle refuses {n_subsets} candidate active sets (> {max_candidates})"
        )

    w = np.eye(n) if weight is None else np.asarray(weight, dtype=float)
    scale = max(1.0, float(np.max(np.abs(target), initial=0.0)))
    tol = feas_tol * scale

    best_obj = None
    best_x = None
    for k in range(min(m, n) + 1):
        for subset in itertools.combinations(range(m), k):
            if k == 0:
                x = np.zeros(n)
            else:
                g_s = g[list(subset)]
                kkt = np.block([
                    [2.0 * w, g_s.T],
                    [g_s, np.zeros((k, k))],
                ])
                rhs = np.concatenate([np.zeros(n), target[list(subset)]])
                sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
                x = sol[:n]
            if np.all(g @ x >= target - tol):
                obj = float(x @ w @ x)
                if best_obj is None or obj < best_obj:
                    best_obj = obj
                    best_x = x
    if best_x is None:
        raise InfeasibleDesignError("oracle found no feasible active set")
    return best_x
