"""Quantum channels in Kraus form and entropic channel quantities.

A channel is a completely positive trace-preserving map
    ch(rho) = sum_k A_k rho A_k*,      sum_k A_k* A_k = I.
Feeding half of a purification of an input state through a channel gives
the standard compound state; the mutual information of the channel at
that input is the divergence between the compound state and the product
of its marginals, and the capacity is the supremum of that quantity over
inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from .errors import ValidationError
from .extreal import ExtReal
from .herm_core import (SUPPORT_CUTOFF, basis_transpose, check_density,
                        eig_hermitian, hermitize, make_rng, partial_trace,
                        random_kraus, tensor)
from .quantum_entropy import DivergenceSpec, OptimOptions, relent

_COMPLETENESS_ATOL = 1e-9


@dataclass(frozen=True)
class QuantumChannel:
    """Kraus family defining a completely positive trace-preserving map."""

    kraus: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(a, dtype=complex) for a in self.kraus)
        if not ops:
            raise ValidationError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2:
            raise ValidationError("Kraus operators must be matrices")
        for a in ops:
            if a.shape != shape:
                raise ValidationError("Kraus operators have mixed shapes")
            if not np.all(np.isfinite(a)):
                raise ValidationError("Kraus operator has non-finite entries")
        total = sum(a.conj().T @ a for a in ops)
        defect = float(np.max(np.abs(total - np.eye(shape[1]))))
        if defect > _COMPLETENESS_ATOL:
            raise ValidationError(f"Kraus family is not trace preserving: "
                                  f"completeness defect {defect:.3e}")
        object.__setattr__(self, "kraus", ops)

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """sum_k A_k rho A_k*; preserves trace and positivity."""
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.dim_in, self.dim_in):
            raise ValidationError(f"state shape {rho.shape} does not match "
                                  f"channel input dim {self.dim_in}")
        out = sum(a @ rho @ a.conj().T for a in self.kraus)
        return hermitize(out)


def identity_channel(dim: int) -> QuantumChannel:
    return QuantumChannel((np.eye(dim),))


def unitary_channel(u: np.ndarray) -> QuantumChannel:
    return QuantumChannel((np.asarray(u, dtype=complex),))


def depolarizing_channel(p: float) -> QuantumChannel:
    """Qubit map rho -> (1-p) rho + p I/2 for p in [0, 1]."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"depolarizing strength must lie in [0, 1], got {p}")
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return QuantumChannel((
        np.sqrt(1.0 - 0.75 * p) * np.eye(2),
        np.sqrt(p) / 2.0 * sx,
        np.sqrt(p) / 2.0 * sy,
        np.sqrt(p) / 2.0 * sz,
    ))


def dephasing_channel(p: float) -> QuantumChannel:
    """Qubit map rho -> (1-p) rho + p diag(rho); p = 1 kills all
    off-diagonal terms."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"dephasing strength must lie in [0, 1], got {p}")
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    return QuantumChannel((np.sqrt(1.0 - p) * np.eye(2),
                           np.sqrt(p) * p0, np.sqrt(p) * p1))


def amplitude_damping_channel(gamma: float) -> QuantumChannel:
    """Qubit decay toward |0>: K0 = diag(1, sqrt(1-gamma)),
    K1 = sqrt(gamma) |0><1|."""
    if not 0.0 <= gamma <= 1.0:
        raise ValidationError(f"damping rate must lie in [0, 1], got {gamma}")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]], dtype=complex)
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]], dtype=complex)
    return QuantumChannel((k0, k1))


def random_channel(dim_in: int, dim_out: int, kraus_count: int,
                   rng: np.random.Generator) -> QuantumChannel:
    return QuantumChannel(tuple(random_kraus(dim_in, dim_out, kraus_count, rng)))


def channel_tensor(a: QuantumChannel, b: QuantumChannel) -> QuantumChannel:
    """Independent parallel use: Kraus family {A_i (x) B_j}."""
    return QuantumChannel(tuple(np.kron(x, y) for x in a.kraus for y in b.kraus))


def channel_compose(after: QuantumChannel, before: QuantumChannel) -> QuantumChannel:
    """(after . before)(rho) = after(before(rho)); Kraus products {A_i B_j}."""
    if after.dim_in != before.dim_out:
        raise ValidationError(f"cannot compose: inner dims {after.dim_in} vs "
                              f"{before.dim_out}")
    return QuantumChannel(tuple(x @ y for x in after.kraus for y in before.kraus))


def pinching_channel(projectors: Sequence[np.ndarray]) -> QuantumChannel:
    """rho -> sum_k P_k rho P_k for an orthogonal resolution of identity."""
    ops = [hermitize(p) for p in projectors]
    if not ops:
        raise ValidationError("pinching needs at least one projector")
    d = ops[0].shape[0]
    for i, p in enumerate(ops):
        if np.max(np.abs(p @ p - p)) > 1e-9:
            raise ValidationError(f"block {i} is not a projector")
        for q in ops[:i]:
            if np.max(np.abs(p @ q)) > 1e-9:
                raise ValidationError("projectors are not mutually orthogonal")
    if np.max(np.abs(sum(ops) - np.eye(d))) > 1e-9:
        raise ValidationError("projectors do not resolve the identity")
    return QuantumChannel(tuple(ops))


@dataclass(frozen=True)
class CompoundState:
    """Bipartite state with its two marginals; dims = (dim_a, dim_b)."""

    joint: np.ndarray
    dims: tuple
    marginal_a: np.ndarray
    marginal_b: np.ndarray

    def __post_init__(self):
        joint = hermitize(self.joint)
        da, db = self.dims
        # completeness defects of the producing channel propagate into the
        # marginals, hence the slightly loose consistency tolerance
        if np.max(np.abs(partial_trace(joint, (da, db), "first")
                         - self.marginal_a)) > 1e-8:
            raise ValidationError("first marginal does not match the joint state")
        if np.max(np.abs(partial_trace(joint, (da, db), "second")
                         - self.marginal_b)) > 1e-8:
            raise ValidationError("second marginal does not match the joint state")
        object.__setattr__(self, "joint", joint)
        object.__setattr__(self, "dims", (int(da), int(db)))


def standard_compound(sigma0: np.ndarray, ch: QuantumChannel) -> CompoundState:
    """Purify the input and send the second half through the channel.

    With sigma0 = sum_k p_k u_k u_k*, the reference copy uses the
    conjugated eigenvectors, psi = sum_k sqrt(p_k) conj(u_k) (x) u_k, so
    the first marginal is the fixed-basis transpose of sigma0 and the
    second is ch(sigma0).
    """
    sigma0 = check_density(sigma0, mass=float(np.trace(np.asarray(sigma0)).real))
    if abs(float(np.trace(sigma0).real) - 1.0) > 1e-8:
        raise ValidationError("compound construction expects a unit-trace input")
    d = sigma0.shape[0]
    if ch.dim_in != d:
        raise ValidationError(f"input dim {d} does not match channel dim {ch.dim_in}")
    w, v = eig_hermitian(sigma0)
    psi = np.zeros(d * d, dtype=complex)
    for k in range(d):
        if w[k] <= SUPPORT_CUTOFF:
            continue
        psi += np.sqrt(w[k]) * np.kron(v[:, k].conj(), v[:, k])
    pure = np.outer(psi, psi.conj())
    kraus_b = [np.kron(np.eye(d), a) for a in ch.kraus]
    joint = hermitize(sum(a @ pure @ a.conj().T for a in kraus_b))
    return CompoundState(joint=joint, dims=(d, ch.dim_out),
                         marginal_a=basis_transpose(sigma0),
                         marginal_b=ch.apply(sigma0))


def mutual_information(sigma0: np.ndarray, ch: QuantumChannel,
                       spec: DivergenceSpec) -> ExtReal:
    """Divergence between the compound state and the product of its
    marginals, for the divergence kind selected by spec."""
    compound = standard_compound(sigma0, ch)
    product = tensor(compound.marginal_a, compound.marginal_b)
    return relent(spec, compound.joint, product)


def entangled_entropy(sigma: np.ndarray, spec: DivergenceSpec) -> ExtReal:
    """Mutual information of the identity channel at sigma.

    For the umegaki kind this equals twice the spectral entropy of sigma;
    for other kinds it is that kind's value on the same standard
    entanglement, reported under the same name.
    """
    d = np.asarray(sigma).shape[0]
    return mutual_information(sigma, identity_channel(d), spec)


def conditional_entropy(sigma0: np.ndarray, ch: QuantumChannel,
                        spec: DivergenceSpec) -> ExtReal:
    """Entropy of the output left over after subtracting what the channel
    transmitted: entangled_entropy(ch(sigma0)) - mutual_information."""
    out_entropy = entangled_entropy(ch.apply(sigma0), spec)
    mi = mutual_information(sigma0, ch, spec)
    return out_entropy - mi


@dataclass(frozen=True)
class CapacityReport:
    value: float
    argmax_input: np.ndarray
    iterations: int
    converged: bool
    stationarity: float


def capacity(ch: QuantumChannel, spec: DivergenceSpec,
             opts: Optional[OptimOptions] = None, restarts: int = 5,
             seed: int = 0) -> CapacityReport:
    """sup over input states of the channel mutual information.

    Inputs are parametrized positivity-free as sigma = G G* / Tr(G G*)
    with G a complex square matrix; each restart runs a quasi-Newton
    ascent with finite-difference gradients.  Restart 0 starts at the
    maximally mixed input, the rest at seeded Gaussian G.  The report
    carries the best value found, its input, and the final
    finite-difference stationarity measure.
    """
    opts = opts or OptimOptions()
    if restarts < 1:
        raise ValidationError("need at least one restart")
    d = ch.dim_in
    rng = make_rng(seed)

    def unpack(x):
        g = x[:d * d].reshape(d, d) + 1j * x[d * d:].reshape(d, d)
        return g

    def neg_mi(x):
        g = unpack(x)
        p = g @ g.conj().T
        tr = float(np.trace(p).real)
        if tr < 1e-12:
            return 0.0
        mi = mutual_information(hermitize(p / tr), ch, spec)
        if mi.is_infinite:
            return 0.0
        return -float(mi)

    def pack(g):
        return np.concatenate([g.real.reshape(-1), g.imag.reshape(-1)])

    best = None
    total_iters = 0
    for trial in range(restarts):
        if trial == 0:
            x0 = pack(np.eye(d, dtype=complex) / np.sqrt(d))
        else:
            x0 = pack((rng.standard_normal((d, d))
                       + 1j * rng.standard_normal((d, d))) / np.sqrt(2 * d))
        res = minimize(neg_mi, x0, method="L-BFGS-B",
                       options={"maxiter": opts.max_iters, "ftol": 1e-13,
                                "gtol": 1e-7})
        total_iters += int(res.nit)
        if best is None or res.fun < best.fun:
            best = res
    g = unpack(best.x)
    p = g @ g.conj().T
    sigma_star = hermitize(p / float(np.trace(p).real))
    stationarity = float(np.max(np.abs(best.jac)))
    return CapacityReport(value=-float(best.fun), argmax_input=sigma_star,
                          iterations=total_iters,
                          converged=bool(stationarity <= 1e-4),
                          stationarity=stationarity)


@dataclass(frozen=True)
class AdditivityReport:
    first: float
    second: float
    joint: float
    gap: float


def additivity_report(ch1: QuantumChannel, ch2: QuantumChannel,
                      spec: DivergenceSpec, opts: Optional[OptimOptions] = None,
                      restarts: int = 5, seed: int = 0) -> AdditivityReport:
    """Capacities of two channels and of their parallel use; gap =
    joint - (first + second)."""
    c1 = capacity(ch1, spec, opts, restarts=restarts, seed=seed)
    c2 = capacity(ch2, spec, opts, restarts=restarts, seed=seed + 1)
    c12 = capacity(channel_tensor(ch1, ch2), spec, opts, restarts=restarts,
                   seed=seed + 2)
    return AdditivityReport(first=c1.value, second=c2.value, joint=c12.value,
                            gap=c12.value - (c1.value + c2.value))


def product_input_additivity_check(chs: Sequence[QuantumChannel],
                                   inputs: Sequence[np.ndarray],
                                   spec: DivergenceSpec) -> tuple[float, float]:
    """Mutual information of a parallel channel at a product input versus
    the sum of the single-use quantities; equal for the umegaki kind."""
    if len(chs) != len(inputs) or not chs:
        raise ValidationError("need one input state per channel")
    joint_ch = chs[0]
    joint_in = np.asarray(inputs[0], dtype=complex)
    for ch, st in zip(chs[1:], inputs[1:]):
        joint_ch = channel_tensor(joint_ch, ch)
        joint_in = tensor(joint_in, st)
    lhs = mutual_information(joint_in, joint_ch, spec)
    rhs = sum((mutual_information(st, ch, spec) for ch, st in zip(chs, inputs)),
              ExtReal(0.0))
    return float(lhs), float(rhs)
