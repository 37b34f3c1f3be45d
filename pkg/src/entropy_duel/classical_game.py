"""Classical estimation games on finite outcome spaces.

An estimator picks a weight vector m on n outcomes, nature pays the
award vector q.  The log-partition ln sum_x m_x e^{q_x} is the convex
conjugate of relative entropy p -> sum p ln(p/m), the Gibbs tilt of m by
q is the best response, and the minimax estimate of the award is the
worst-case-optimal value.  A finite zero-sum matrix game solver with a
duality-gap certificate backs the game-theoretic properties.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog, minimize
from scipy.special import logsumexp

from .errors import ConvergenceError, ValidationError
from .extreal import ExtReal
from .herm_core import SUPPORT_CUTOFF

_MASS_ATOL = 1e-10


def check_distribution(w: np.ndarray, mass: float = 1.0) -> np.ndarray:
    """Validate a nonnegative vector of the given total mass."""
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.size == 0 or not np.all(np.isfinite(w)):
        raise ValidationError("distribution must be a non-empty finite vector")
    if np.min(w) < -_MASS_ATOL:
        raise ValidationError(f"negative weight {np.min(w):.3e}")
    if abs(float(np.sum(w)) - mass) > _MASS_ATOL:
        raise ValidationError(f"total mass {np.sum(w)!r} differs from {mass!r}")
    return np.clip(w, 0.0, None)


def log_partition(prior: np.ndarray, awards: np.ndarray) -> float:
    """ln sum_x prior_x e^{awards_x}, evaluated shift-stably.

    This is the convex conjugate of p -> relative_entropy(p, prior) over
    probability vectors p.  Zero prior weights drop out; an all-zero
    prior has no partition function and raises.
    """
    m = np.asarray(prior, dtype=float).reshape(-1)
    q = np.asarray(awards, dtype=float).reshape(-1)
    if m.shape != q.shape:
        raise ValidationError("prior and awards have different lengths")
    if np.min(m) < -_MASS_ATOL:
        raise ValidationError("prior has a negative weight")
    m = np.clip(m, 0.0, None)
    if np.sum(m) <= 0:
        raise ValidationError("prior has zero total mass")
    return float(logsumexp(q, b=m))


def best_response(prior: np.ndarray, awards: np.ndarray) -> np.ndarray:
    """Gibbs tilt prior_x e^{awards_x} / sum: the unique maximizer of
    p.awards - relative_entropy(p, prior), normalized to mass 1."""
    m = np.clip(np.asarray(prior, dtype=float).reshape(-1), 0.0, None)
    q = np.asarray(awards, dtype=float).reshape(-1)
    if m.shape != q.shape:
        raise ValidationError("prior and awards have different lengths")
    if np.sum(m) <= 0:
        raise ValidationError("prior has zero total mass")
    w = m * np.exp(q - np.max(q[m > 0]))
    return w / np.sum(w)


def relative_entropy(p: np.ndarray, ref: np.ndarray) -> ExtReal:
    """sum_x p_x ln(p_x / ref_x) with 0 ln 0 = 0.

    +infinity when p puts mass where ref has none; the witness is the
    offending outcome index.
    """
    p = np.asarray(p, dtype=float).reshape(-1)
    m = np.asarray(ref, dtype=float).reshape(-1)
    if p.shape != m.shape:
        raise ValidationError("vectors have different lengths")
    if np.min(p) < -_MASS_ATOL or np.min(m) < -_MASS_ATOL:
        raise ValidationError("weights must be nonnegative")
    p = np.clip(p, 0.0, None)
    m = np.clip(m, 0.0, None)
    on = p > SUPPORT_CUTOFF
    bad = on & (m <= SUPPORT_CUTOFF)
    if bad.any():
        return ExtReal.infinity(witness=int(np.nonzero(bad)[0][0]))
    return ExtReal(float(np.sum(p[on] * (np.log(p[on]) - np.log(m[on])))))


@dataclass(frozen=True)
class BiconjugateResult:
    value: float
    truncated: bool
    grad_norm: float
    iterations: int


def biconjugate_relent(p: np.ndarray, ref: np.ndarray,
                       bound: float = 20.0) -> BiconjugateResult:
    """Recover relative_entropy(p, ref) by conjugating the log-partition:
    max over awards q in the box [-bound, bound]^n of
        p.q - log_partition(ref, q).

    Concave ascent with the exact gradient p - best_response(ref, q)
    (L-BFGS-B handles the box).  When p has mass outside the support of
    ref the true sup is +inf; the box caps it and the result is a lower
    bound flagged truncated, as it is whenever the maximizer touches the
    box.
    """
    p = check_distribution(np.asarray(p, dtype=float))
    m = np.asarray(ref, dtype=float).reshape(-1)
    if p.shape != m.shape:
        raise ValidationError("vectors have different lengths")
    if bound <= 0:
        raise ValidationError("bound must be positive")
    support_violated = bool(np.any((p > SUPPORT_CUTOFF) & (m <= SUPPORT_CUTOFF)))

    def neg_obj(q):
        return -(float(p @ q) - log_partition(m, q))

    def neg_grad(q):
        return -(p - best_response(m, q))

    res = minimize(neg_obj, np.zeros_like(p), jac=neg_grad, method="L-BFGS-B",
                   bounds=[(-bound, bound)] * len(p),
                   options={"maxiter": 1000, "ftol": 1e-15, "gtol": 1e-12})
    q = res.x
    truncated = support_violated or bool(np.max(np.abs(q)) >= bound - 1e-6)
    return BiconjugateResult(value=-float(res.fun), truncated=truncated,
                             grad_norm=float(np.max(np.abs(res.jac))),
                             iterations=int(res.nit))


def minimax_estimate(awards: np.ndarray) -> tuple[float, np.ndarray]:
    """min over estimates m (probability vectors) of log_partition(m, q).

    The partition function is linear in m inside the log, so the minimum
    sits at a vertex: value min_x q_x, attained by the point mass on the
    (lowest-index) minimizing outcome.
    """
    q = np.asarray(awards, dtype=float).reshape(-1)
    if q.size == 0 or not np.all(np.isfinite(q)):
        raise ValidationError("awards must be a non-empty finite vector")
    i = int(np.argmin(q))
    m = np.zeros_like(q)
    m[i] = 1.0
    return float(q[i]), m


@dataclass(frozen=True)
class ZeroSumSolution:
    """Certified near-equilibrium of a matrix game (row maximizes)."""

    value: float
    row: np.ndarray
    col: np.ndarray
    gap: float
    iterations: int


def _clean_simplex(x: np.ndarray) -> np.ndarray:
    x = np.clip(np.asarray(x, dtype=float), 0.0, None)
    return x / np.sum(x)


def _row_lp(g: np.ndarray):
    # variables z = (x_1..x_m, v); maximize v s.t. G^T x >= v, x in simplex
    m, n = g.shape
    c = np.zeros(m + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-g.T, np.ones((n, 1))])
    a_eq = np.zeros((1, m + 1))
    a_eq[0, :m] = 1.0
    bounds = [(0.0, None)] * m + [(None, None)]
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(n), A_eq=a_eq, b_eq=[1.0],
                  bounds=bounds, method="highs")
    if not res.success:
        raise ConvergenceError(f"row LP failed: {res.message}")
    return _clean_simplex(res.x[:m]), float(res.x[-1])


def _col_lp(g: np.ndarray):
    # variables z = (y_1..y_n, u); minimize u s.t. G y <= u, y in simplex
    m, n = g.shape
    c = np.zeros(n + 1)
    c[-1] = 1.0
    a_ub = np.hstack([g, -np.ones((m, 1))])
    a_eq = np.zeros((1, n + 1))
    a_eq[0, :n] = 1.0
    bounds = [(0.0, None)] * n + [(None, None)]
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(m), A_eq=a_eq, b_eq=[1.0],
                  bounds=bounds, method="highs")
    if not res.success:
        raise ConvergenceError(f"column LP failed: {res.message}")
    return _clean_simplex(res.x[:n]), float(res.x[-1])


def check_game_matrix(g: np.ndarray) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.size == 0 or not np.all(np.isfinite(g)):
        raise ValidationError("payoff matrix must be 2-D, non-empty, finite")
    return g


def zero_sum_value(payoffs: np.ndarray, tol: float = 1e-6) -> ZeroSumSolution:
    """Value and near-equilibrium profile of the matrix game where the row
    player receives payoffs[i, j].

    Solves both players' optimization and certifies the result with the
    independent deviation gap
        gap = max_i (G y)_i - min_j (x^T G)_j,
    which bounds how far either player is from their best response.  The
    reported value is the midpoint of the two one-sided guarantees, so it
    is within gap/2 of both.  Raises ConvergenceError (carrying the best
    gap) if the certificate exceeds tol.
    """
    g = check_game_matrix(payoffs)
    if tol <= 0:
        raise ValidationError("tol must be positive")
    x, _ = _row_lp(g)
    y, _ = _col_lp(g)
    row_guarantee = float(np.min(x @ g))
    col_exposure = float(np.max(g @ y))
    gap = col_exposure - row_guarantee
    if not (gap <= tol):
        raise ConvergenceError(f"duality gap {gap:.3e} exceeds tol {tol:.3e}",
                               best_gap=gap)
    value = 0.5 * (row_guarantee + col_exposure)
    return ZeroSumSolution(value=value, row=x, col=y, gap=max(gap, 0.0),
                           iterations=1)


def maxminimizer(payoffs: np.ndarray, player: str) -> tuple[np.ndarray, float]:
    """A player's security strategy and its guaranteed payoff.

    "row" maximizes the minimum of x^T G over columns; "col" (whose payoff
    is -G) maximizes the minimum of -(G y) over rows.  At an equilibrium
    the two guarantees sum to zero.
    """
    g = check_game_matrix(payoffs)
    if player == "row":
        x, _ = _row_lp(g)
        return x, float(np.min(x @ g))
    if player == "col":
        y, _ = _col_lp(g)
        return y, float(np.min(-(g @ y)))
    raise ValidationError(f"player must be 'row' or 'col', got {player!r}")


def nash_check(payoffs: np.ndarray, row: np.ndarray, col: np.ndarray,
               tol: float) -> bool:
    """True when neither player can gain more than tol by a pure deviation
    from (row, col)."""
    g = check_game_matrix(payoffs)
    x = check_distribution(row)
    y = check_distribution(col)
    if x.shape[0] != g.shape[0] or y.shape[0] != g.shape[1]:
        raise ValidationError("profile shapes do not match the payoff matrix")
    paid = float(x @ g @ y)
    row_gain = float(np.max(g @ y)) - paid
    col_gain = paid - float(np.min(x @ g))
    return bool(row_gain <= tol and col_gain <= tol)


def _simplex_grid(n: int, k: int, min_part: int = 0):
    """All compositions (c_1..c_n) of k with parts >= min_part, as mass-1
    vectors c/k."""
    free = k - n * min_part
    if free < 0:
        return
    for cuts in itertools.combinations(range(free + n - 1), n - 1):
        prev = -1
        parts = []
        for c in cuts + (free + n - 1,):
            parts.append(c - prev - 1)
            prev = c
        yield (np.array(parts, dtype=float) + min_part) / k


def minimax_orders_report(awards: np.ndarray, resolution: int = 12) -> dict:
    """Compare the two orders of play of the estimation game on coarse
    simplex grids.

    minimax (estimator moves first) has the exact value min_x q_x.  For
    the reversed order the inner minimization over estimates is taken on
    the strictly positive part of the grid only, since against a fixed p
    an estimate vanishing on supp(p) drives the payoff to -infinity; the
    reversed-order number is therefore a grid-interior report, not a
    certified value, and no equality is asserted.
    """
    q = np.asarray(awards, dtype=float).reshape(-1)
    n = q.shape[0]
    minimax = float(np.min(q))
    inner_grid = [m for m in _simplex_grid(n, resolution, min_part=1)]
    best = -np.inf
    best_p = None
    for p in _simplex_grid(n, resolution):
        worst = np.inf
        for m in inner_grid:
            r = relative_entropy(p, m)
            val = float(p @ q) - float(r)
            if val < worst:
                worst = val
        if worst > best:
            best = worst
            best_p = p
    return {
        "minimax": minimax,
        "maxmin_grid": float(best),
        "order_gap": float(minimax - best),
        "maxmin_argmax": best_p,
        "grid_resolution": int(resolution),
    }
