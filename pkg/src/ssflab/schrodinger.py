"""One-dimensional Schrodinger scenery: Green's kernels, Nystrom matrices,
trace-class checks, and discrete dissipative pairs.

Everything lives on a truncated interval with composite Gauss-Legendre
quadrature (16-point panels); the truncation error is part of the quoted
quadrature tolerance, never hidden. The free resolvent kernel at spectral
parameter z is exponentially decaying once the square root branch is fixed
with Im sqrt(z) > 0, which is what makes the truncation harmless for
integrable potentials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BranchCut,
    DissipativityViolation,
    NegativePotential,
    ValidationError,
)
from .linalg import Dissipative, require_hermitian, schatten_norm


@dataclass(frozen=True)
class Grid1D:
    """Quadrature grid on [lo, hi]: nodes, positive weights, scheme label."""

    points: np.ndarray
    weights: np.ndarray
    scheme: str
    lo: float
    hi: float

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if p.ndim != 1 or p.shape != w.shape or len(p) == 0:
            raise ValidationError("points and weights must be matching 1-d arrays")
        if np.any(np.diff(p) <= 0):
            raise ValidationError("grid points must be strictly increasing")
        if np.any(w <= 0):
            raise ValidationError("quadrature weights must be positive")
        if np.any(p < self.lo - 1e-12) or np.any(p > self.hi + 1e-12):
            raise ValidationError("grid points must lie inside the domain")
        if abs(float(np.sum(w)) - (self.hi - self.lo)) > 1e-12 * max(1.0, self.hi - self.lo):
            raise ValidationError("weights must sum to the domain length")
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "weights", w)
        p.setflags(write=False)
        w.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.points)

    def integrate(self, values) -> float | complex:
        out = np.sum(self.weights * np.asarray(values))
        return complex(out) if np.iscomplexobj(values) else float(out)


_PANEL = 16


def make_grid(lo: float, hi: float, n: int, scheme: str = "gauss") -> Grid1D:
    """Composite 16-point Gauss-Legendre grid (n a multiple of 16), or trapezoid."""
    if hi <= lo:
        raise ValidationError("domain must have positive length")
    if scheme == "gauss":
        if n < _PANEL or n % _PANEL:
            raise ValidationError(f"gauss grids need a positive multiple of {_PANEL} nodes")
        panels = n // _PANEL
        gx, gw = np.polynomial.legendre.leggauss(_PANEL)
        edges = np.linspace(lo, hi, panels + 1)
        mids = (edges[:-1] + edges[1:]) / 2.0
        halves = (edges[1:] - edges[:-1]) / 2.0
        pts = (mids[:, None] + halves[:, None] * gx[None, :]).ravel()
        wts = (halves[:, None] * gw[None, :]).ravel()
        return Grid1D(points=pts, weights=wts, scheme=f"gauss{_PANEL}", lo=lo, hi=hi)
    if scheme == "trapezoid":
        if n < 2:
            raise ValidationError("trapezoid grids need at least 2 nodes")
        pts = np.linspace(lo, hi, n)
        h = (hi - lo) / (n - 1)
        wts = np.full(n, h)
        wts[0] = wts[-1] = h / 2.0
        return Grid1D(points=pts, weights=wts, scheme="trapezoid", lo=lo, hi=hi)
    raise ValidationError(f"unknown scheme {scheme!r}")


def green_kernel(x, t, z: complex):
    """Free-resolvent kernel -(1/(2i sqrt(z))) exp(i |x-t| sqrt(z)).

    The branch with Im sqrt(z) > 0 is the decaying one and is used always;
    z on (or within 1e-12 of) the nonnegative real axis has no such branch.
    Accepts scalars or broadcastable arrays in x and t.
    """
    z = complex(z)
    dist = abs(z.imag) if z.real >= 0 else abs(z)
    if dist < 1e-12:
        raise BranchCut(f"z = {z} is on the nonnegative real axis")
    root = np.sqrt(z)
    if root.imag <= 0:
        root = -root
    gap = np.abs(np.asarray(x) - np.asarray(t))
    out = -np.exp(1j * gap * root) / (2j * root)
    return out if out.shape else complex(out)


def greens_function_for(z: complex) -> Callable:
    """The two-argument kernel R(s, t) = green_kernel(s, t, z)."""
    return lambda s, t: green_kernel(s, t, z)


@dataclass(frozen=True)
class NystromKernel:
    """Symmetrized Nystrom discretization of f -> q^(1/2) R (q^(1/2) f)."""

    grid: Grid1D
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def trace_norm(self) -> float:
        return float(schatten_norm(self.matrix, 1))

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix).min())


def nystrom_kernel(q_values, r: Callable, grid: Grid1D) -> NystromKernel:
    """Assemble sqrt(w_i q_i) R(x_i, x_j) sqrt(q_j w_j).

    The outer-product structure keeps the matrix exactly Hermitian whenever
    R itself is Hermitian-symmetric; that is validated, not assumed.
    """
    q = np.asarray(q_values)
    if q.shape != grid.points.shape:
        raise ValidationError("potential values must be given on the grid points")
    if np.iscomplexobj(q):
        if np.max(np.abs(q.imag)) > 1e-14:
            raise NegativePotential("Nystrom kernels need a real nonnegative potential")
        q = q.real
    if q.size and float(q.min()) < -1e-14:
        raise NegativePotential(f"potential value {q.min():.3e} is negative")
    q = np.clip(q, 0.0, None)
    x = grid.points
    rmat = np.asarray(r(x[:, None], x[None, :]), dtype=np.complex128)
    c = np.sqrt(grid.weights * q)
    k = (c[:, None] * c[None, :]) * rmat
    k = require_hermitian(k, 1e-12)
    return NystromKernel(grid=grid, matrix=k)


# ---------------------------------------------------------------------------
# potential descriptors


def _smoothstep(u: np.ndarray) -> np.ndarray:
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (u * (6.0 * u - 15.0) + 10.0)


def potential_values(q, x: np.ndarray) -> np.ndarray:
    """Evaluate a potential given as callable, array, or descriptor dict.

    Descriptor kinds:
      gaussian: amplitude * exp(-((x - center)/width)^2)
      bump: amplitude * quintic-smoothed indicator of half_width around
            center with the given taper; its integral is exactly
            2 * half_width * amplitude because the taper is symmetric
      table: linear interpolation of sample arrays xs, qs (0 outside)
    """
    x = np.asarray(x, dtype=float)
    if callable(q):
        return np.asarray(q(x))
    if isinstance(q, dict):
        kind = q.get("kind")
        if kind == "gaussian":
            amp = q.get("amplitude", 1.0)
            center = q.get("center", 0.0)
            width = q.get("width", 1.0)
            if width <= 0:
                raise ValidationError("gaussian width must be positive")
            return amp * np.exp(-(((x - center) / width) ** 2))
        if kind == "bump":
            amp = q.get("amplitude", 1.0)
            center = q.get("center", 0.0)
            a = q.get("half_width", 1.0)
            taper = q.get("taper", min(0.75, a))
            if not (0 < taper <= a):
                raise ValidationError("bump taper must lie in (0, half_width]")
            u = np.abs(x - center)
            ramp = 1.0 - _smoothstep((u - (a - taper)) / (2.0 * taper))
            return amp * np.where(u <= a - taper, 1.0, np.where(u >= a + taper, 0.0, ramp))
        if kind == "table":
            xs = np.asarray(q["x"], dtype=float)
            qs = np.asarray(q["q"])
            if np.iscomplexobj(qs):
                return np.interp(x, xs, qs.real, left=0.0, right=0.0) + 1j * np.interp(
                    x, xs, qs.imag, left=0.0, right=0.0
                )
            return np.interp(x, xs, qs, left=0.0, right=0.0)
        raise ValidationError(f"unknown potential kind {kind!r}")
    arr = np.asarray(q)
    if arr.shape != x.shape:
        raise ValidationError("potential array length must match the grid")
    return arr


# ---------------------------------------------------------------------------
# trace reports


@dataclass(frozen=True)
class KernelTraceReport:
    """Trace identities of one Nystrom kernel."""

    trace: float
    trace_norm: float
    diagonal_integral: float
    half_l1_target: float
    min_eigenvalue: float

    @property
    def trace_norm_gap(self) -> float:
        return abs(self.trace - self.trace_norm)


def kernel_trace_report(q, grid: Grid1D, z: complex = -1.0) -> KernelTraceReport:
    """Assemble the kernel for potential q and report its trace identities.

    For q >= 0 and the decaying Green's kernel the operator is PSD, so
    trace and trace norm agree and both equal the diagonal integral
    integral q(x) R(x, x) dx, which at z = -1 is half the L1 norm of q.
    """
    qv = potential_values(q, grid.points)
    kernel = nystrom_kernel(qv, greens_function_for(z), grid)
    qv = np.clip(np.real(np.asarray(qv)).astype(float), 0.0, None)
    diag = green_kernel(grid.points, grid.points, z)
    diagonal_integral = float(np.sum(grid.weights * qv * np.real(diag)))
    half_l1 = 0.5 * float(np.sum(grid.weights * np.abs(qv)))
    return KernelTraceReport(
        trace=kernel.trace,
        trace_norm=kernel.trace_norm,
        diagonal_integral=diagonal_integral,
        half_l1_target=half_l1,
        min_eigenvalue=kernel.min_eigenvalue,
    )


@dataclass(frozen=True)
class MonotoneReport:
    """Trace norms along a monotone approximation of the potential."""

    n_values: tuple[int, ...]
    variant: str
    full_norm: float
    approx_norms: tuple[float, ...]
    residual_norms: tuple[float, ...]


def monotone_s1_check(
    q,
    grid: Grid1D,
    n_list: Sequence[int],
    *,
    variant: str = "scale",
    level: float = 0.01,
    z: complex = -1.0,
) -> MonotoneReport:
    """Norms of kernels built from potentials increasing pointwise to q.

    variant="scale" uses phi_n = q (1 - 1/n), for which K_n = (1 - 1/n) K
    exactly and the residual trace norm is ||K||_1 / n on the nose.
    variant="truncate" uses phi_n = min(q, level * n). Both sequences are
    pointwise nondecreasing and bounded by q, so for PSD kernels the approx
    norms must not decrease and the residual norms must not increase.
    """
    ns = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(ns, ns[1:])) or not ns or ns[0] < 1:
        raise ValidationError("n_list must be strictly increasing positive integers")
    if variant not in ("scale", "truncate"):
        raise ValidationError(f"unknown variant {variant!r}")
    qv = np.clip(np.asarray(potential_values(q, grid.points), dtype=float), 0.0, None)
    r = greens_function_for(z)
    full = nystrom_kernel(qv, r, grid)
    approx = []
    residual = []
    for n in ns:
        phi = qv * (1.0 - 1.0 / n) if variant == "scale" else np.minimum(qv, level * n)
        kn = nystrom_kernel(phi, r, grid)
        approx.append(kn.trace_norm)
        residual.append(float(schatten_norm(full.matrix - kn.matrix, 1)))
    return MonotoneReport(
        n_values=tuple(ns),
        variant=variant,
        full_norm=full.trace_norm,
        approx_norms=tuple(approx),
        residual_norms=tuple(residual),
    )


# ---------------------------------------------------------------------------
# discrete dissipative pairs


def discrete_schrodinger_pair(q_values, h: float) -> tuple[Dissipative, Dissipative]:
    """L0 = (1+i) Lap_h + iI and L1 = L0 + diag(q) on a Dirichlet chain.

    Lap_h is tridiag(-1, 2, -1)/h^2, so Im L0 = Lap_h + I is at least I and
    both operators are strictly dissipative whenever Im q >= 0.
    """
    q = np.asarray(q_values, dtype=np.complex128)
    if q.ndim != 1 or len(q) == 0:
        raise ValidationError("need a 1-d array of potential values")
    if h <= 0:
        raise ValidationError("grid spacing must be positive")
    if float(q.imag.min()) < -1e-12:
        raise DissipativityViolation(
            f"Im q has a negative value {q.imag.min():.3e}; the pair would not be dissipative"
        )
    n = len(q)
    lap = (2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)) / (h * h)
    l0 = (1.0 + 1j) * lap + 1j * np.eye(n)
    l1 = l0 + np.diag(q)
    return Dissipative(l0), Dissipative(l1)
