"""Core dense linear algebra for the laboratory.

Matrices are plain complex128 numpy arrays throughout; the operator classes
below are thin validated wrappers that freeze their matrix at construction.
All validation tolerances are constructor or keyword parameters so scenario
configs can override them.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    EigenFailure,
    IndefiniteInput,
    InvalidExponent,
    KernelViolation,
    NearSingular,
    NotHermitian,
    OnePointSpectrum,
    ValidationError,
)

TWO_PI = 2.0 * np.pi


def as_matrix(a) -> np.ndarray:
    """Coerce to a square complex128 array with finite entries."""
    m = np.asarray(getattr(a, "m", a), dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {m.shape}")
    if not (np.isfinite(m.real).all() and np.isfinite(m.imag).all()):
        raise ValidationError("matrix has non-finite entries")
    return m


def hermitian_residual(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - a.conj().T))


def require_hermitian(a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Return the symmetrized matrix, raising NotHermitian beyond tol.

    The tolerance is applied relative to 1 + ||a||_F so it means the same
    thing for unit-scale operators and for stiff discrete Laplacians.
    """
    r = hermitian_residual(a)
    if r > tol * (1.0 + float(np.linalg.norm(a))):
        raise NotHermitian(f"Hermitian residual {r:.3e} exceeds tolerance {tol:.1e}")
    return 0.5 * (a + a.conj().T)


def hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def operator_norm(a: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.complex128)
    if a.size == 0:
        return 0.0
    return float(np.linalg.svd(a, compute_uv=False)[0])


def schatten_norm(a, p: float = 2) -> float:
    """Schatten p-norm (sum of p-th powers of singular values, p-th root)."""
    if p < 1:
        raise InvalidExponent(f"Schatten exponent must be >= 1, got {p}")
    m = np.asarray(getattr(a, "m", a), dtype=np.complex128)
    s = np.linalg.svd(m, compute_uv=False)
    if p == 1:
        return float(np.sum(s))
    if p == 2:
        return float(np.sqrt(np.sum(s * s)))
    return float(np.sum(s**p) ** (1.0 / p))


def _eigh(a: np.ndarray):
    try:
        return np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise EigenFailure(str(exc)) from exc


def hermitian_sqrt(a, *, herm_tol: float = 1e-12, clamp: float = 1e-8) -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix.

    Eigenvalues in [-clamp, 0) are set to zero; anything below -clamp raises
    IndefiniteInput. Input must be Hermitian within herm_tol.
    """
    m = require_hermitian(as_matrix(a), herm_tol)
    w, v = _eigh(m)
    if w.size and float(w.min()) < -clamp:
        raise IndefiniteInput(f"eigenvalue {w.min():.3e} below -{clamp:.1e}")
    w = np.clip(w, 0.0, None)
    return hermitize((v * np.sqrt(w)) @ v.conj().T)


def hermitian_power(
    a,
    exponent: float,
    *,
    herm_tol: float = 1e-12,
    clamp: float = 1e-10,
    kernel_floor: float = 1e-12,
) -> np.ndarray:
    """f(A) for f(x) = x**exponent on a Hermitian matrix.

    Negative exponents require every eigenvalue to clear kernel_floor,
    otherwise KernelViolation. Small negative eigenvalues (within clamp)
    are treated as zero for nonnegative exponents.
    """
    m = require_hermitian(as_matrix(a), herm_tol)
    w, v = _eigh(m)
    if exponent < 0:
        if w.size and float(w.min()) < kernel_floor:
            raise KernelViolation(
                f"eigenvalue {w.min():.3e} below the {kernel_floor:.1e} floor, "
                f"inverse power {exponent} undefined"
            )
        fw = w**exponent
    else:
        if w.size and float(w.min()) < -clamp:
            raise IndefiniteInput(f"eigenvalue {w.min():.3e} below -{clamp:.1e}")
        fw = np.clip(w, 0.0, None) ** exponent
    return hermitize((v * fw) @ v.conj().T)


def _cluster_circle(phases: np.ndarray, weights: np.ndarray, tol: float):
    """Cluster sorted phases on (0, 2pi] whose circular gap is below tol.

    Returns (representative, total weight) pairs sorted by phase, with
    representatives within tol of the 0/2pi seam snapped to 2pi.
    """
    order = np.argsort(phases)
    phases = phases[order]
    weights = weights[order]
    groups: list[list[float]] = []
    sums: list = []
    for p, w in zip(phases, weights):
        if groups and p - groups[-1][-1] < tol:
            groups[-1].append(float(p))
            sums[-1] += w
        else:
            groups.append([float(p)])
            sums.append(w)
    if len(groups) > 1 and (groups[0][0] + TWO_PI - groups[-1][-1]) < tol:
        first = groups.pop(0)
        w0 = sums.pop(0)
        groups[-1].extend(p + TWO_PI for p in first)
        sums[-1] += w0
    out = []
    for grp, w in zip(groups, sums):
        rep = float(np.mean(grp)) % TWO_PI
        if rep <= tol or rep >= TWO_PI - tol:
            rep = TWO_PI
        out.append((rep, w))
    out.sort(key=lambda it: it[0])
    return out


def eigenphases(u, *, cluster_tol: float = 1e-9) -> list[tuple[float, int]]:
    """Eigenvalue phases of a matrix, as (phase, multiplicity) pairs.

    Phases live in (0, 2pi], with phase 0 reported as 2pi. Eigenvalues at
    circular distance below cluster_tol merge into one entry whose
    multiplicity is the cluster size.
    """
    m = as_matrix(u)
    try:
        w = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from exc
    ph = np.angle(w)
    ph = np.where(ph <= 0.0, ph + TWO_PI, ph)
    clustered = _cluster_circle(ph, np.ones(len(ph), dtype=int), cluster_tol)
    return [(p, int(k)) for p, k in clustered]


class Unitary:
    """Square matrix with ||U*U - I||_F within tolerance (default 1e-10)."""

    def __init__(self, m, *, tol: float = 1e-10):
        mat = as_matrix(m)
        eye = np.eye(mat.shape[0])
        defect = float(np.linalg.norm(mat.conj().T @ mat - eye))
        if defect > tol:
            raise ValidationError(f"unitarity defect {defect:.3e} exceeds {tol:.1e}")
        mat = mat.copy()
        mat.setflags(write=False)
        self.m = mat
        self.n = mat.shape[0]

    def __repr__(self):
        return f"Unitary(n={self.n})"


class Contraction:
    """Square matrix with largest singular value at most 1 + tol (default 1e-8)."""

    def __init__(self, m, *, tol: float = 1e-8):
        mat = as_matrix(m)
        smax = operator_norm(mat)
        if smax > 1.0 + tol:
            raise ValidationError(f"largest singular value {smax:.12f} exceeds 1 + {tol:.1e}")
        mat = mat.copy()
        mat.setflags(write=False)
        self.m = mat
        self.n = mat.shape[0]
        self.norm = smax

    def __repr__(self):
        return f"Contraction(n={self.n}, norm={self.norm:.6f})"


class Dissipative:
    """Square matrix whose imaginary part (L - L*)/2i is PSD within tolerance."""

    def __init__(self, m, *, tol: float = 1e-10):
        mat = as_matrix(m)
        im = (mat - mat.conj().T) / 2j
        w = np.linalg.eigvalsh(im)
        lo = float(w.min()) if w.size else 0.0
        if lo < -tol:
            raise ValidationError(f"imaginary part eigenvalue {lo:.3e} below -{tol:.1e}")
        mat = mat.copy()
        mat.setflags(write=False)
        self.m = mat
        self.n = mat.shape[0]

    @property
    def imag_part(self) -> np.ndarray:
        return hermitize((self.m - self.m.conj().T) / 2j)

    def __repr__(self):
        return f"Dissipative(n={self.n})"


class DefectPair(NamedTuple):
    d_t: np.ndarray
    d_t_star: np.ndarray


def defect_operators(t) -> DefectPair:
    """Defect pair ((I - T*T)^(1/2), (I - TT*)^(1/2)) of a contraction.

    Computed from the singular value decomposition of T itself, which gives
    both roots in one Schmidt basis and keeps the intertwining relation
    T D_T = D_T* T at roundoff even when T is unitary to machine precision.
    """
    m = t.m if isinstance(t, Contraction) else Contraction(t).m
    u, s, vh = np.linalg.svd(m)
    c = np.sqrt(np.clip(1.0 - s * s, 0.0, None))
    d_t = hermitize((vh.conj().T * c) @ vh)
    d_t_star = hermitize((u * c) @ u.conj().T)
    return DefectPair(d_t, d_t_star)


class PolarFactors(NamedTuple):
    partial_isometry: np.ndarray
    modulus: np.ndarray
    rank_deficient: bool


def polar_factors(a, *, rank_tol: float = 1e-12) -> PolarFactors:
    """Polar decomposition a = V |a| with |a| = (a*a)^(1/2).

    V is unitary (the canonical completion on the kernel); rank_deficient
    flags inputs whose smallest singular value is at the rank tolerance, in
    which case the completion on the kernel is one of many valid choices.
    """
    m = as_matrix(a)
    u, s, vh = np.linalg.svd(m)
    v = u @ vh
    modulus = hermitize((vh.conj().T * s) @ vh)
    scale = float(s.max()) if s.size else 0.0
    deficient = bool(s.size and float(s.min()) <= rank_tol * max(1.0, scale))
    return PolarFactors(v, modulus, deficient)


def analytic_poly_eval(t, coeffs: Sequence[complex]) -> np.ndarray:
    """Evaluate an analytic polynomial sum_k coeffs[k] T^k by Horner's scheme."""
    m = as_matrix(t)
    if len(coeffs) == 0:
        raise ValueError("empty coefficient list")
    c = np.asarray(coeffs, dtype=np.complex128)
    eye = np.eye(m.shape[0], dtype=np.complex128)
    out = c[-1] * eye
    for k in range(len(c) - 2, -1, -1):
        out = out @ m + c[k] * eye
    return out


def poly_scalar(coeffs: Sequence[complex], z):
    """Evaluate the same polynomial at scalar (or array) points."""
    return np.polynomial.polynomial.polyval(z, np.asarray(coeffs, dtype=np.complex128))


def poly_derivative(coeffs: Sequence[complex]) -> np.ndarray:
    c = np.asarray(coeffs, dtype=np.complex128)
    if len(c) <= 1:
        return np.zeros(1, dtype=np.complex128)
    return c[1:] * np.arange(1, len(c))


def von_neumann_gap(t, coeffs: Sequence[complex], *, samples: int = 8192) -> float:
    """Advisory check ||f(T)|| <= max_{|z|=1} |f(z)| for contractions.

    Returns ||f(T)||_2 minus the boundary maximum (refined by golden-section
    around the coarse argmax); nonpositive up to roundoff when T is a
    contraction.
    """
    norm_ft = operator_norm(analytic_poly_eval(t, coeffs))
    theta = np.linspace(0.0, TWO_PI, samples, endpoint=False)
    vals = np.abs(poly_scalar(coeffs, np.exp(1j * theta)))
    j = int(np.argmax(vals))
    lo = theta[j] - TWO_PI / samples
    hi = theta[j] + TWO_PI / samples
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1 = abs(poly_scalar(coeffs, np.exp(1j * x1)))
    f2 = abs(poly_scalar(coeffs, np.exp(1j * x2)))
    for _ in range(80):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = abs(poly_scalar(coeffs, np.exp(1j * x2)))
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = abs(poly_scalar(coeffs, np.exp(1j * x1)))
    boundary_max = max(float(vals[j]), float(max(f1, f2)))
    return norm_ft - boundary_max


class CayleyImage(NamedTuple):
    contraction: Contraction
    condition: float


def cayley(l, *, cond_limit: float = 1e12, tol: float = 1e-8) -> CayleyImage:
    """Cayley transform T = (L - iI)(L + iI)^(-1) of a dissipative matrix.

    Also reports the condition number of L + iI; NearSingular beyond
    cond_limit (cannot happen for validated dissipative input, where the
    shifted inverse has norm at most 1).
    """
    mat = l.m if isinstance(l, Dissipative) else Dissipative(l).m
    eye = np.eye(mat.shape[0])
    shifted = mat + 1j * eye
    cond = float(np.linalg.cond(shifted))
    if not np.isfinite(cond) or cond > cond_limit:
        raise NearSingular(f"cond(L + iI) = {cond:.3e}")
    t = np.linalg.solve(shifted.T, (mat - 1j * eye).T).T
    return CayleyImage(Contraction(t, tol=tol), cond)


def inverse_cayley(t, *, gap_tol: float = 1e-10) -> Dissipative:
    """Inverse Cayley transform L = i(I + T)(I - T)^(-1)."""
    mat = t.m if isinstance(t, Contraction) else Contraction(t).m
    eye = np.eye(mat.shape[0])
    id_minus = eye - mat
    s = np.linalg.svd(id_minus, compute_uv=False)
    if s.size and float(s.min()) < gap_tol:
        raise OnePointSpectrum(
            f"smallest singular value of I - T is {s.min():.3e}, spectrum touches 1"
        )
    l = 1j * np.linalg.solve(id_minus.T, (eye + mat).T).T
    return Dissipative(l)


def singular_log_sum(t0, t1) -> float:
    """sum_j s_j log(1 + 1/s_j) over singular values of T1 - T0 (0 terms for s_j = 0)."""
    d = as_matrix(t1) - as_matrix(t0)
    s = np.linalg.svd(d, compute_uv=False)
    mask = s > 1e-300
    out = np.zeros_like(s)
    out[mask] = s[mask] * np.log1p(1.0 / s[mask])
    return float(np.sum(out))


def singular_value_commute_check(t1, t2, *, herm_tol: float = 1e-12) -> float:
    """Max deviation between sorted singular values of T1 T2 and T2 T1.

    Both inputs must be Hermitian; the products themselves need not be.
    """
    a = require_hermitian(as_matrix(t1), herm_tol)
    b = require_hermitian(as_matrix(t2), herm_tol)
    s_ab = np.linalg.svd(a @ b, compute_uv=False)
    s_ba = np.linalg.svd(b @ a, compute_uv=False)
    return float(np.max(np.abs(s_ab - s_ba))) if s_ab.size else 0.0
