"""Legendre-Fenchel conjugation on sampled grids.

The convex conjugate of f is f*(p) = sup_x { <p, x> - f(x) }.  Here f is
known on a finite sample of points, so the sup becomes a max over the
finite effective domain; points where f = +inf simply drop out.  The
closed forms at the bottom (exponential, quadratic, affine, norm,
support function of a polytope) serve as exact references for the
sampled machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .extreal import ExtReal


@dataclass(frozen=True)
class SampledFunction:
    """A function known on finitely many points of R^d.

    points: (n, d) float array.  values: length-n floats, meaningful only
    where finite_mask is True; masked-out points are at +infinity (not in
    the effective domain).  At least one point must be finite.
    """

    points: np.ndarray
    values: np.ndarray
    finite_mask: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        mask = self.finite_mask
        mask = np.ones(len(vals), dtype=bool) if mask is None \
            else np.asarray(mask, dtype=bool).reshape(-1)
        if pts.shape[0] != len(vals) or len(mask) != len(vals):
            raise ValidationError("points, values and finite_mask lengths differ")
        if len(vals) == 0:
            raise ValidationError("a sampled function needs at least one point")
        if not mask.any():
            raise ValidationError("empty effective domain: no finite values")
        if not np.all(np.isfinite(vals[mask])):
            raise ValidationError("finite-masked values must be finite floats; "
                                  "tag +inf through the mask")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "finite_mask", mask)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def value_at_index(self, i: int) -> ExtReal:
        if self.finite_mask[i]:
            return ExtReal(self.values[i])
        return ExtReal.infinity(witness=self.points[i])

    def index_of(self, x: np.ndarray, atol: float = 1e-9) -> int:
        """Index of a sample point equal to x (within atol); raises if x
        was never sampled."""
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.shape[0] != self.dim:
            raise ValidationError(f"point has dim {x.shape[0]}, grid has {self.dim}")
        d = np.max(np.abs(self.points - x[None, :]), axis=1)
        i = int(np.argmin(d))
        if d[i] > atol:
            raise ValidationError(f"point {x!r} is not on the sample grid")
        return i


def uniform_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """1-D lattice lo, lo+step, ..., hi as an (n, 1) point array."""
    if not (hi > lo) or step <= 0:
        raise ValidationError("need hi > lo and step > 0")
    n = int(round((hi - lo) / step))
    return (lo + step * np.arange(n + 1))[:, None]


def sample_function(points: np.ndarray, fn) -> SampledFunction:
    """Tabulate a callable (returning float or ExtReal) on the points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    vals = np.zeros(pts.shape[0])
    mask = np.ones(pts.shape[0], dtype=bool)
    for i, x in enumerate(pts):
        y = fn(x if len(x) > 1 else float(x[0]))
        if isinstance(y, ExtReal):
            if y.is_infinite:
                mask[i] = False
            else:
                vals[i] = float(y)
        else:
            vals[i] = float(y)
    return SampledFunction(pts, vals, mask)


def conjugate_at(f: SampledFunction, dual_point: np.ndarray) -> ExtReal:
    """f*(p) = max over sampled x of <p, x> - f(x).

    A max over a finite nonempty effective domain, hence always finite.
    """
    p = np.asarray(dual_point, dtype=float).reshape(-1)
    if p.shape[0] != f.dim:
        raise ValidationError(f"dual point dim {p.shape[0]} != grid dim {f.dim}")
    scores = f.points[f.finite_mask] @ p - f.values[f.finite_mask]
    return ExtReal(float(np.max(scores)))


def conjugate_function(f: SampledFunction, dual_points: np.ndarray) -> SampledFunction:
    """Tabulate f* on the given dual points (all values finite)."""
    pts = np.atleast_2d(np.asarray(dual_points, dtype=float))
    vals = np.array([float(conjugate_at(f, p)) for p in pts])
    return SampledFunction(pts, vals)


def fenchel_gap(f: SampledFunction, x: np.ndarray, dual_point: np.ndarray) -> ExtReal:
    """Fenchel-Young residual f(x) + f*(p) - <p, x>; nonnegative, and zero
    exactly when p is a (discrete) subgradient at x.  x must be one of the
    sample points."""
    i = f.index_of(x)
    p = np.asarray(dual_point, dtype=float).reshape(-1)
    fx = f.value_at_index(i)
    fstar = conjugate_at(f, p)
    inner = float(f.points[i] @ p)
    return fx + fstar + ExtReal(-inner)


def support_function(vertices: np.ndarray, direction: np.ndarray) -> float:
    """max_v <direction, v> over the vertex list: the conjugate of the
    indicator of the polytope conv(vertices)."""
    verts = np.atleast_2d(np.asarray(vertices, dtype=float))
    d = np.asarray(direction, dtype=float).reshape(-1)
    if verts.shape[1] != d.shape[0]:
        raise ValidationError("direction dim does not match vertex dim")
    if verts.shape[0] == 0:
        raise ValidationError("empty vertex list")
    return float(np.max(verts @ d))


def inf_convolution(f: SampledFunction, g: SampledFunction) -> SampledFunction:
    """(f box g)(x) = min over sampled splits x = y + z of f(z) + g(y).

    Both functions must be sampled on the same point set, and the point
    set must be closed under the differences taken (each x - y that
    contributes must itself be a sample point).  Splits whose difference
    leaves the grid are skipped; a grid point with no admissible split is
    tagged +inf.
    """
    if f.dim != g.dim:
        raise ValidationError("grids have different dimension")
    if f.points.shape != g.points.shape or not np.allclose(f.points, g.points):
        raise ValidationError("inf-convolution requires a common grid")
    pts = f.points
    key_scale = 1e9
    index = {tuple(np.rint(p * key_scale).astype(np.int64)): i
             for i, p in enumerate(pts)}
    n = pts.shape[0]
    out_vals = np.zeros(n)
    out_mask = np.zeros(n, dtype=bool)
    g_idx = np.nonzero(g.finite_mask)[0]
    for i in range(n):
        best = np.inf
        for j in g_idx:
            diff = pts[i] - pts[j]
            k = index.get(tuple(np.rint(diff * key_scale).astype(np.int64)))
            if k is None or not f.finite_mask[k]:
                continue
            cand = f.values[k] + g.values[j]
            if cand < best:
                best = cand
        if np.isfinite(best):
            out_vals[i] = best
            out_mask[i] = True
    return SampledFunction(pts, out_vals, out_mask)


def inf_convolution_check(f: SampledFunction, g: SampledFunction,
                          dual_point: np.ndarray) -> tuple[ExtReal, ExtReal]:
    """Both sides of (f box g)* = f* + g* at one dual point."""
    lhs = conjugate_at(inf_convolution(f, g), dual_point)
    rhs = conjugate_at(f, dual_point) + conjugate_at(g, dual_point)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Exact conjugates used as references.

def exp_conjugate(dual_point: float) -> ExtReal:
    """Conjugate of exp on R: p ln p - p for p > 0, 0 at p = 0, +inf for
    p < 0."""
    p = float(dual_point)
    if p < 0:
        return ExtReal.infinity(witness=p)
    if p == 0.0:
        return ExtReal(0.0)
    return ExtReal(p * np.log(p) - p)


def quadratic_conjugate(dual_point: np.ndarray) -> ExtReal:
    """Conjugate of x -> ||x||^2 / 2 is p -> ||p||^2 / 2 (self-conjugate)."""
    p = np.asarray(dual_point, dtype=float).reshape(-1)
    return ExtReal(0.5 * float(p @ p))


def affine_conjugate(slope: np.ndarray, intercept: float,
                     dual_point: np.ndarray, atol: float = 1e-12) -> ExtReal:
    """Conjugate of x -> <slope, x> - intercept.

    Takes the value `intercept` at dual_point == slope and +inf elsewhere.
    (The finite value is the intercept, not the slope: at p = slope the
    sup of <p - slope, x> + intercept is the constant intercept.)
    """
    a = np.asarray(slope, dtype=float).reshape(-1)
    p = np.asarray(dual_point, dtype=float).reshape(-1)
    if a.shape != p.shape:
        raise ValidationError("slope and dual point have different dims")
    if np.max(np.abs(a - p)) <= atol:
        return ExtReal(float(intercept))
    return ExtReal.infinity(witness=p - a)


def norm_conjugate(dual_point: np.ndarray) -> ExtReal:
    """Conjugate of the Euclidean norm: the indicator of the closed unit
    ball (0 inside, +inf outside)."""
    p = np.asarray(dual_point, dtype=float).reshape(-1)
    r = float(np.sqrt(p @ p))
    if r <= 1.0 + 1e-12:
        return ExtReal(0.0)
    return ExtReal.infinity(witness=p)
