"""Hermitian matrix core: spectral calculus, tensor bookkeeping, sampling.

Everything downstream (conjugates, entropies, channels) reduces to a
handful of primitives collected here: eigendecomposition, spectral
functions f(H), the gradient of H -> Tr(W exp H), Kronecker products and
partial traces, and seeded random operators.  Operators are plain
complex numpy arrays; constructors hermitize and validate rather than
wrap.

Eigenvalues at or below SUPPORT_CUTOFF are treated as outside the
support everywhere in the package.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, ValidationError

# Eigenvalues <= this are "numerically zero": excluded from supports,
# pseudo-inverses and pseudo-logs.
SUPPORT_CUTOFF = 1e-12

_HERM_ATOL = 1e-10


def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator; all sampling in the package goes through one
    of these so runs are reproducible bit-for-bit."""
    return np.random.default_rng(int(seed))


def hermitize(a: np.ndarray) -> np.ndarray:
    """(A + A*)/2 in the fixed basis.  Construction symmetrizes instead of
    rejecting: float noise off the Hermitian subspace is not an error."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return 0.5 * (a + a.conj().T)


def check_density(a: np.ndarray, mass: float = 1.0) -> np.ndarray:
    """Validate a positive operator of the given trace; returns the
    hermitized matrix.

    mass is the intended trace (1 for states; other positive values are
    legal, e.g. sub/super-normalized reference operators).
    """
    h = hermitize(a)
    evals = np.linalg.eigvalsh(h)
    if evals[0] < -_HERM_ATOL:
        raise ValidationError(f"matrix is not positive: min eigenvalue {evals[0]:.3e}")
    tr = float(np.trace(h).real)
    if abs(tr - mass) > _HERM_ATOL:
        raise ValidationError(f"trace {tr!r} differs from required mass {mass!r}")
    return h


class Spectrum(NamedTuple):
    """Eigenvalues in ascending order with matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig_hermitian(h: np.ndarray) -> Spectrum:
    """Full spectral decomposition of a Hermitian matrix.

    Returns ascending real eigenvalues and a unitary whose columns are
    the eigenvectors, so h == V diag(w) V*.
    """
    h = hermitize(h)
    w, v = np.linalg.eigh(h)
    return Spectrum(w, v)


def mat_fn(h: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Spectral calculus: apply a scalar function to the eigenvalues.

    f receives the ascending eigenvalue vector and must return an array
    of the same shape.  Non-finite outputs mean f was evaluated outside
    its domain and raise DomainError.
    """
    w, v = eig_hermitian(h)
    fw = np.asarray(f(w), dtype=float)
    if fw.shape != w.shape:
        raise ValidationError("spectral function changed the shape of the spectrum")
    if not np.all(np.isfinite(fw)):
        raise DomainError("spectral function produced non-finite values "
                          f"on eigenvalues {w!r}")
    return (v * fw) @ v.conj().T


def herm_exp(h: np.ndarray) -> np.ndarray:
    return mat_fn(h, np.exp)


def _support_mask(w: np.ndarray) -> np.ndarray:
    return w > SUPPORT_CUTOFF


def herm_log(h: np.ndarray, strict: bool = True) -> np.ndarray:
    """Matrix logarithm of a positive operator.

    strict: any eigenvalue at or below the support cutoff raises
    DomainError.  Non-strict: logarithm on the support, zero on the
    kernel (the pseudo-log used with trace pairings that vanish there).
    """
    w, v = eig_hermitian(h)
    on = _support_mask(w)
    if strict and not np.all(on):
        raise DomainError(f"log of a singular operator (min eigenvalue {w[0]:.3e})")
    fw = np.zeros_like(w)
    fw[on] = np.log(w[on])
    return (v * fw) @ v.conj().T


def herm_sqrt(h: np.ndarray) -> np.ndarray:
    """Positive square root; tiny negative eigenvalues are clipped to 0."""
    w, v = eig_hermitian(h)
    if w[0] < -_HERM_ATOL:
        raise DomainError(f"sqrt of a non-positive operator (min eigenvalue {w[0]:.3e})")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def herm_inv(h: np.ndarray, strict: bool = True) -> np.ndarray:
    """Inverse of a positive operator; non-strict gives the pseudo-inverse
    (zero on the kernel)."""
    w, v = eig_hermitian(h)
    on = _support_mask(w)
    if strict and not np.all(on):
        raise DomainError(f"inverse of a singular operator (min eigenvalue {w[0]:.3e})")
    fw = np.zeros_like(w)
    fw[on] = 1.0 / w[on]
    return (v * fw) @ v.conj().T


def grad_trace_exp(h: np.ndarray, weight: np.ndarray) -> np.ndarray:
    """Gradient of the map H -> Tr(W exp H) at h, for Hermitian W.

    In the eigenbasis of h the gradient has entries
        G_ij = W_ij * phi(h_i, h_j),
    where phi(a, b) is the divided difference (e^a - e^b)/(a - b),
    evaluated as exp((a+b)/2) * sinh(d)/d with d = (a-b)/2 so nearby
    eigenvalues do not cancel; coincident eigenvalues (|a-b| <= 1e-10)
    use phi = e^a.  The result is Hermitian and satisfies
    Tr(G K) = d/dt Tr(W exp(h + tK)) for every Hermitian direction K.
    """
    w, v = eig_hermitian(h)
    wt = v.conj().T @ np.asarray(weight, dtype=complex) @ v
    a = w[:, None]
    b = w[None, :]
    half_sum = 0.5 * (a + b)
    half_diff = 0.5 * (a - b)
    near = np.abs(a - b) <= 1e-10
    safe = np.where(near, 1.0, half_diff)
    phi = np.exp(half_sum) * np.where(near, 1.0, np.sinh(safe) / safe)
    g = v @ (wt * phi) @ v.conj().T
    return hermitize(g)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the first factor on the left
    (row-major index (i,j) -> i * dim_b + j)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(x: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Trace out one tensor factor of an operator on C^d1 (x) C^d2.

    keep is "first" or "second".  Adjoint to tensoring with the identity:
    Tr(partial_trace(X, dims, "first") A) == Tr(X (A (x) I)).
    """
    d1, d2 = int(dims[0]), int(dims[1])
    x = np.asarray(x, dtype=complex)
    if x.shape != (d1 * d2, d1 * d2):
        raise ValidationError(f"operator shape {x.shape} does not match dims {dims}")
    t = x.reshape(d1, d2, d1, d2)
    if keep == "first":
        return np.einsum("ijkj->ik", t)
    if keep == "second":
        return np.einsum("ijil->jl", t)
    raise ValidationError(f"keep must be 'first' or 'second', got {keep!r}")


def basis_transpose(a: np.ndarray) -> np.ndarray:
    """Entrywise transpose in the fixed basis, no conjugation.

    For Hermitian A this equals the entrywise complex conjugate; it is an
    involution and multiplication-reversing: (AB)^T = B^T A^T.
    """
    return np.asarray(a, dtype=complex).T.copy()


def random_hermitian(dim: int, scale: float, rng: np.random.Generator) -> np.ndarray:
    """Gaussian Hermitian matrix, entries of size ~scale."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return hermitize(scale * g / np.sqrt(2.0))


def random_density(dim: int, rng: np.random.Generator, mass: float = 1.0) -> np.ndarray:
    """Full-rank (a.s.) random state: G G* normalized to the given trace."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    p = g @ g.conj().T
    return hermitize(mass * p / np.trace(p).real)


def random_kraus(dim_in: int, dim_out: int, kraus_count: int,
                 rng: np.random.Generator) -> list[np.ndarray]:
    """Kraus family of a Haar-style random channel.

    Orthonormalizes a Gaussian (kraus_count*dim_out) x dim_in block matrix;
    the stacked blocks V satisfy V* V = I, i.e. sum_k A_k* A_k = I exactly
    (up to float roundoff).  Requires kraus_count * dim_out >= dim_in.
    """
    if kraus_count * dim_out < dim_in:
        raise ValidationError("kraus_count * dim_out must be >= dim_in for a "
                              "trace-preserving family")
    g = rng.standard_normal((kraus_count * dim_out, dim_in)) \
        + 1j * rng.standard_normal((kraus_count * dim_out, dim_in))
    q, _ = np.linalg.qr(g)
    return [q[k * dim_out:(k + 1) * dim_out, :].copy() for k in range(kraus_count)]
