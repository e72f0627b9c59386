"""Spectral shift functions on the unit circle.

Three routes produce an SSF for a pair of operators with spectra in the
closed unit disk:

* eigenphase counting for unitary pairs (exact, a step function),
* unitary dilation of a contraction pair followed by eigenphase counting,
* boundary values of the perturbation determinant, sampled on a circle of
  radius slightly above 1.

All SSFs here are normalized to zero mean over the circle. The additive
constant is invisible to every trace integral, so this is pure convention;
it is what makes the routes comparable pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dilation import dilation_pair
from .errors import (
    KernelViolation,
    NearSingular,
    NonzeroWinding,
    UnwrapAmbiguity,
    ValidationError,
)
from .linalg import (
    TWO_PI,
    Contraction,
    Unitary,
    _cluster_circle,
    as_matrix,
    defect_operators,
    eigenphases,
    hermitian_power,
    poly_derivative,
    poly_scalar,
    schatten_norm,
)

# Calibrated normalization of the determinant route: sampled values are
# kappa * (unwrapped Im log Delta) / (2 pi) + gauge. kappa = -2 is the choice
# that reproduces the eigenphase-counting step function on unitary pairs.
DETERMINANT_KAPPA = -2


@dataclass(frozen=True)
class StepSSF:
    """Piecewise-constant SSF: value(theta) = gauge + sum of jumps at or below theta.

    Jump positions live in (0, 2pi] (a jump at phase 0 is stored at 2pi).
    Jump sizes are nonzero signed integers summing to 0.
    """

    jumps: tuple[tuple[float, int], ...]
    gauge: float

    def __post_init__(self):
        thetas = [th for th, _ in self.jumps]
        if any(not (0.0 < th <= TWO_PI) for th in thetas):
            raise ValidationError("jump positions must lie in (0, 2pi]")
        if any(b <= a for a, b in zip(thetas, thetas[1:])):
            raise ValidationError("jump positions must be strictly increasing")
        if any(s == 0 for _, s in self.jumps):
            raise ValidationError("zero-size jumps must be dropped before construction")
        if sum(s for _, s in self.jumps) != 0:
            raise ValidationError("jump sizes must sum to zero")

    @property
    def thetas(self) -> np.ndarray:
        return np.array([th for th, _ in self.jumps], dtype=float)

    @property
    def sizes(self) -> np.ndarray:
        return np.array([s for _, s in self.jumps], dtype=int)

    def value(self, theta):
        """Evaluate the step function at theta (scalar or array) in (0, 2pi]."""
        theta = np.asarray(theta, dtype=float)
        cum = np.concatenate([[0.0], np.cumsum(self.sizes)]) if self.jumps else np.zeros(1)
        idx = np.searchsorted(self.thetas, theta, side="right") if self.jumps else np.zeros(theta.shape, dtype=int)
        out = self.gauge + cum[idx]
        return out if out.shape else float(out)


@dataclass(frozen=True)
class SampledSSF:
    """SSF sampled on a uniform grid over (0, 2pi] at radius slightly above 1."""

    radius: float
    thetas: np.ndarray
    values: np.ndarray
    winding: int
    kappa: int = DETERMINANT_KAPPA

    def __post_init__(self):
        if self.radius <= 1.0:
            raise ValidationError("sampling radius must exceed 1")
        if not np.isfinite(self.values).all():
            raise ValidationError("sampled values must be finite")
        self.thetas.setflags(write=False)
        self.values.setflags(write=False)


def unitary_ssf(u0, u1, *, cluster_tol: float = 1e-9) -> StepSSF:
    """Eigenphase-counting SSF of a unitary pair.

    Each eigenphase of u0 contributes a +1 jump and each eigenphase of u1 a
    -1 jump; coincident phases (within the clustering tolerance) cancel.
    The gauge is set so the mean over the circle is zero, which works out to
    sum(jump * theta) / 2pi.
    """
    u0 = u0 if isinstance(u0, Unitary) else Unitary(u0)
    u1 = u1 if isinstance(u1, Unitary) else Unitary(u1)
    if u0.n != u1.n:
        raise ValidationError(f"dimension mismatch: {u0.n} vs {u1.n}")
    phases: list[float] = []
    weights: list[int] = []
    for p, mult in eigenphases(u0, cluster_tol=cluster_tol):
        phases.append(p)
        weights.append(mult)
    for p, mult in eigenphases(u1, cluster_tol=cluster_tol):
        phases.append(p)
        weights.append(-mult)
    clustered = _cluster_circle(np.array(phases), np.array(weights), cluster_tol)
    jumps = tuple((p, int(w)) for p, w in clustered if w != 0)
    gauge = sum(w * p for p, w in jumps) / TWO_PI
    return StepSSF(jumps=jumps, gauge=gauge)


def ssf_trace_integral(ssf: StepSSF, coeffs: Sequence[complex]) -> complex:
    """Exact trace integral of an analytic polynomial against a step SSF.

    Integration by parts turns the contour integral of f' against the step
    function into -sum(jump_k * f(exp(i theta_k))); the gauge multiplies the
    closed integral of f' and drops out exactly.
    """
    if not ssf.jumps:
        return 0.0 + 0.0j
    nodes = np.exp(1j * ssf.thetas)
    return complex(-np.sum(ssf.sizes * poly_scalar(coeffs, nodes)))


def contraction_ssf(t0: Contraction, t1: Contraction, m: int) -> StepSSF:
    """SSF of a contraction pair through the m-block cyclic dilation.

    Valid for trace formulas with polynomials of degree at most m - 2.
    """
    d0, d1 = dilation_pair(t0, t1, m)
    return unitary_ssf(d0.u, d1.u)


def perturbation_determinant(t0, t1, zeta: complex, *, cond_limit: float = 1e12) -> complex:
    """det(I + (T1 - T0)(T0 - zeta I)^(-1)) for |zeta| >= 1 + 1e-8."""
    m0 = as_matrix(t0)
    m1 = as_matrix(t1)
    if m0.shape != m1.shape:
        raise ValidationError("dimension mismatch")
    if abs(zeta) < 1.0 + 1e-8:
        raise ValidationError(f"|zeta| = {abs(zeta):.10f} too close to the unit circle")
    a = m0 - zeta * np.eye(m0.shape[0])
    cond = float(np.linalg.cond(a))
    if not np.isfinite(cond) or cond > cond_limit:
        raise NearSingular(f"cond(T0 - zeta I) = {cond:.3e}")
    x = np.linalg.solve(a, m1 - m0)
    return complex(np.linalg.det(np.eye(m0.shape[0]) + x))


def _determinant_samples(m0: np.ndarray, m1: np.ndarray, zeta: np.ndarray) -> np.ndarray:
    """Batched det(I + (T0 - zeta)^(-1)(T1 - T0)) over an array of zeta values."""
    n = m0.shape[0]
    eye = np.eye(n, dtype=np.complex128)
    a = m0[None, :, :] - zeta[:, None, None] * eye
    b = np.repeat((m1 - m0)[None, :, :], len(zeta), axis=0)
    x = np.linalg.solve(a, b)
    return np.linalg.det(eye + x)


def determinant_ssf(t0, t1, radius: float = 1.0 + 1e-4, grid: int = 4096) -> SampledSSF:
    """SSF from boundary phases of the perturbation determinant.

    Samples Im log Delta on the circle of the given radius, unwraps the
    phase continuously in theta, checks that the total winding is zero, and
    rescales by the calibrated kappa with a zero-mean gauge. The grid is
    doubled (up to 2^16) whenever consecutive raw phases are too far apart
    to unwrap unambiguously.
    """
    m0 = as_matrix(t0)
    m1 = as_matrix(t1)
    if m0.shape != m1.shape:
        raise ValidationError("dimension mismatch")
    if radius < 1.0 + 1e-8:
        raise ValidationError("sampling radius must be at least 1 + 1e-8")
    if grid < 256:
        raise ValidationError("need at least 256 grid points")
    n = int(grid)
    threshold = np.pi * (1.0 - 1e-3)
    while True:
        theta = TWO_PI * np.arange(1, n + 1) / n
        delta = _determinant_samples(m0, m1, radius * np.exp(1j * theta))
        raw = np.angle(delta)
        diffs = np.angle(np.exp(1j * np.diff(raw)))
        closing = float(np.angle(np.exp(1j * (raw[0] - raw[-1]))))
        worst = max(float(np.max(np.abs(diffs), initial=0.0)), abs(closing))
        if worst <= threshold:
            break
        if n >= 2**16:
            raise UnwrapAmbiguity(
                f"consecutive determinant phases differ by {worst:.4f} at {n} grid points"
            )
        n *= 2
    s = raw[0] + np.concatenate([[0.0], np.cumsum(diffs)])
    winding = int(round((s[-1] + closing - s[0]) / TWO_PI))
    if winding != 0:
        raise NonzeroWinding(f"determinant winds {winding} times around 0")
    values = DETERMINANT_KAPPA * s / TWO_PI
    values = values - values.mean()
    return SampledSSF(radius=radius, thetas=theta, values=values, winding=winding)


def sampled_trace_integral(ssf: SampledSSF, coeffs: Sequence[complex]) -> complex:
    """Trapezoid trace integral of an analytic polynomial against sampled values.

    The grid is uniform and periodic, so the trapezoid rule is the plain
    average times 2pi.
    """
    dcoeffs = poly_derivative(coeffs)
    boundary = np.exp(1j * ssf.thetas)
    integrand = poly_scalar(dcoeffs, boundary) * ssf.values * 1j * boundary
    return complex(np.mean(integrand) * TWO_PI)


def hardy_gauge_check(
    ssf: Optional[StepSSF], k: int, coeffs: Sequence[complex], *, samples: int = 8192
) -> complex:
    """Contour integral of f'(zeta) zeta^k, which is the trace-integral change
    from adding the analytic element zeta^k to any SSF.

    Should vanish (Cauchy): the SSF family is only determined up to such
    terms. The ssf argument is accepted for call-site symmetry and does not
    enter the value.
    """
    if k < 0:
        raise ValidationError("exponent must be nonnegative")
    theta = TWO_PI * np.arange(samples) / samples
    boundary = np.exp(1j * theta)
    integrand = poly_scalar(poly_derivative(coeffs), boundary) * boundary**k * 1j * boundary
    return complex(np.mean(integrand) * TWO_PI)


@dataclass(frozen=True)
class RealSsfConditions:
    """Checkable hypotheses for a contraction pair to carry a real integrable SSF."""

    alpha: float
    beta: float
    p: float
    min_defect_eig: float
    kernel_certified: bool
    weighted_diff_norm: Optional[float]
    weighted_adjoint_diff_norm: Optional[float]
    defect_diff_norm: float
    defect_adjoint_diff_norm: float
    identity_residual: float


def real_ssf_conditions_report(
    t0: Contraction, t1: Contraction, alpha: float, beta: float, p: float
) -> RealSsfConditions:
    """Evaluate the weighted-difference hypotheses on a concrete pair.

    Reports the smallest defect eigenvalue of T0 (the kernel condition), the
    Schatten norms of the weighted differences D_{T1*}^{-2b} (T1 - T0)
    D_{T0}^{-2a} and D_{T1}^{-2b} (T1* - T0*) D_{T0}^{-2a}, the plain defect
    difference norms, and the residual of the exact algebraic identity
    (I - T1*T1) - (I - T0*T0) = -(T1* - T0*) T0 - T1* (T1 - T0).

    When a required inverse defect power does not exist (defect eigenvalue
    below the 1e-12 floor) the weighted norms are reported as None instead
    of raising.
    """
    if alpha < 0 or beta < 0 or not (0.5 < alpha + beta <= 1.0):
        raise ValidationError("need alpha, beta >= 0 with alpha + beta in (1/2, 1]")
    t0 = t0 if isinstance(t0, Contraction) else Contraction(t0)
    t1 = t1 if isinstance(t1, Contraction) else Contraction(t1)
    if t0.n != t1.n:
        raise ValidationError("dimension mismatch")
    d0, d0s = defect_operators(t0)
    d1, d1s = defect_operators(t1)
    min_eig = float(np.linalg.eigvalsh(d0).min())
    diff = t1.m - t0.m
    try:
        w_right = hermitian_power(d0, -2.0 * alpha)
        w_left = hermitian_power(d1s, -2.0 * beta)
        weighted = float(schatten_norm(w_left @ diff @ w_right, p))
        w_left_adj = hermitian_power(d1, -2.0 * beta)
        weighted_adj = float(schatten_norm(w_left_adj @ diff.conj().T @ w_right, p))
    except KernelViolation:
        weighted = None
        weighted_adj = None
    eye = np.eye(t0.n)
    lhs = (eye - t1.m.conj().T @ t1.m) - (eye - t0.m.conj().T @ t0.m)
    rhs = -diff.conj().T @ t0.m - t1.m.conj().T @ diff
    return RealSsfConditions(
        alpha=alpha,
        beta=beta,
        p=p,
        min_defect_eig=min_eig,
        kernel_certified=bool(min_eig > 1e-8),
        weighted_diff_norm=weighted,
        weighted_adjoint_diff_norm=weighted_adj,
        defect_diff_norm=float(schatten_norm(d1 - d0, p)),
        defect_adjoint_diff_norm=float(schatten_norm(d1s - d0s, p)),
        identity_residual=float(np.linalg.norm(lhs - rhs)),
    )


def step_vs_sampled_max_deviation(
    step: StepSSF, sampled: SampledSSF, *, exclusion: float = 2e-2
) -> float:
    """Largest |sampled - step| over grid points away from every step jump.

    Distance to a jump is circular; points within the exclusion radius of
    any jump (where the smoothed determinant route cannot match a
    discontinuity) are skipped.
    """
    theta = sampled.thetas
    mask = np.ones(theta.shape, dtype=bool)
    for th in step.thetas:
        d = np.abs(theta - th)
        d = np.minimum(d, TWO_PI - d)
        mask &= d >= exclusion
    if not mask.any():
        raise ValidationError("exclusion radius removed every grid point")
    return float(np.max(np.abs(sampled.values[mask] - step.value(theta[mask]))))
