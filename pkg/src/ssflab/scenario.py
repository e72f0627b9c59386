"""Scenario files: schema validation, deterministic generation, execution.

A scenario is a small JSON object naming a pair (or a potential) and the
checks to run on it. Parsing is strict: unknown keys, inadmissible
exponents, or malformed matrices raise SchemaError before any numerics
start. Execution turns every check into a CheckRecord whose anchor names
the verified statement; the registry of anchor strings is fixed here.

Complex JSON entries are [re, im] pairs, matrices row-major nested lists.
Random instances are drawn from a single seeded generator per scenario so
files and reruns are bit-reproducible.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from . import __version__
from .dilation import default_block_count, dilation_pair
from .errors import SchemaError
from .fractional import (
    FractionalJob,
    fractional_diff_quadrature,
    fractional_power,
    fractional_power_bound_report,
    resolvent_difference_identity_check,
)
from .linalg import (
    Contraction,
    Dissipative,
    Unitary,
    analytic_poly_eval,
    hermitize,
    operator_norm,
    polar_factors,
)
from .schrodinger import (
    discrete_schrodinger_pair,
    kernel_trace_report,
    make_grid,
    monotone_s1_check,
    potential_values,
)
from .ssf_circle import (
    contraction_ssf,
    determinant_ssf,
    hardy_gauge_check,
    real_ssf_conditions_report,
    ssf_trace_integral,
    step_vs_sampled_max_deviation,
    unitary_ssf,
)
from .ssf_line import (
    cayley_identity_residuals,
    dissipative_condition_report,
    dissipative_ssf,
    perturbation_trace_report,
    weighted_abs_integral,
)

KINDS = (
    "unitary_pair",
    "contraction_pair",
    "dissipative_pair",
    "fractional",
    "schrodinger",
    "kernel_trace",
)

MATRIX_CLASSES = ("unitary", "contraction", "dissipative", "psd_contraction")

# Every report record cites exactly one of these anchors; the value is a
# one-line statement of what the residual measures.
ANCHOR_REGISTRY = {
    "circle-trace-formula": "trace(f(U1) - f(U0)) equals the boundary integral of f' against the step SSF",
    "dilation-trace-formula": "contraction-pair trace identity through the block-dilation SSF",
    "power-dilation": "compressed dilation powers reproduce contraction powers up to order m - 2",
    "defect-identity": "exact algebraic identity tying defect-square differences to the perturbation",
    "hardy-gauge": "analytic test monomials integrate to zero, so the gauge term is invisible",
    "determinant-consistency": "calibrated determinant SSF matches the step SSF away from jumps",
    "cayley-defect-factorization": "squared Cayley defects factor through the imaginary part",
    "cayley-resolvent-difference": "Cayley-image difference equals the scaled resolvent difference",
    "line-resolvent-trace": "resolvent trace difference equals the line-SSF sum",
    "weighted-integral-consistency": "weighted line integral equals half the circle integral",
    "fractional-power-bound": "fractional-power difference norm obeys the weighted two-term bound",
    "fractional-quadrature": "integral-representation quadrature matches the eigendecomposition",
    "resolvent-difference-identity": "exact two-sided resolvent difference identity",
    "lattice-dissipativity": "discrete pair keeps its imaginary part at or above the identity",
    "schrodinger-resolvent": "lattice-pair resolvent trace formula through the line SSF",
    "kernel-trace-identity": "PSD kernel trace equals its trace norm",
    "kernel-positivity": "kernel matrix stays PSD up to roundoff",
    "kernel-half-l1": "kernel trace matches half the potential's L1 mass",
    "monotone-trace-ladder": "monotone potential ladder converges in trace norm at rate 1/n",
}
ANCHORS = frozenset(ANCHOR_REGISTRY)

_DEFAULT_CLASS = {
    "unitary_pair": "unitary",
    "contraction_pair": "contraction",
    "dissipative_pair": "dissipative",
    "fractional": "psd_contraction",
}

_KIND_KEYS = {
    "unitary_pair": {"matrices", "test_polynomials", "determinant"},
    "contraction_pair": {"matrices", "test_polynomials", "determinant", "dilation_order", "exponents"},
    "dissipative_pair": {"matrices", "dilation_order", "z_values"},
    "fractional": {"matrices", "exponents", "quadrature_nodes"},
    "schrodinger": {"grid", "potential", "dilation_order", "z_values"},
    "kernel_trace": {"grid", "potential", "spectral_point", "monotone"},
}

_MONOMIALS_DEG4 = ((0, 1), (0, 0, 1), (0, 0, 0, 1), (0, 0, 0, 0, 1))
_MONOMIALS_DEG3 = ((0, 1), (0, 0, 1), (0, 0, 0, 1))


# ---------------------------------------------------------------------------
# JSON field helpers (all failures are SchemaError with a field path)


def _fail(where: str, msg: str):
    raise SchemaError(f"{where}: {msg}")


def _complex_entry(v, where: str) -> complex:
    if isinstance(v, bool):
        _fail(where, "expected a number, got a boolean")
    if isinstance(v, (int, float)):
        return complex(v)
    if (
        isinstance(v, list)
        and len(v) == 2
        and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)
    ):
        return complex(v[0], v[1])
    _fail(where, "expected a number or an [re, im] pair")


def _float_entry(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(where, "expected a real number")
    return float(v)


def _int_entry(v, where: str, lo: int, hi: int) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(where, "expected an integer")
    if not (lo <= v <= hi):
        _fail(where, f"must be in [{lo}, {hi}]")
    return v


def _matrix_entry(v, where: str) -> np.ndarray:
    if not isinstance(v, list) or not v:
        _fail(where, "expected a nonempty nested array")
    n = len(v)
    out = np.zeros((n, n), dtype=np.complex128)
    for i, row in enumerate(v):
        if not isinstance(row, list) or len(row) != n:
            _fail(where, f"row {i} does not make the matrix square")
        for j, cell in enumerate(row):
            out[i, j] = _complex_entry(cell, f"{where}[{i}][{j}]")
    if not np.all(np.isfinite(out)):
        _fail(where, "matrix entries must be finite")
    return out


def _check_keys(d: dict, allowed: set, where: str):
    unknown = sorted(set(d) - allowed)
    if unknown:
        _fail(where, f"unknown keys {unknown}; allowed: {sorted(allowed)}")


# ---------------------------------------------------------------------------
# random instances


def _gaussian_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)


def _draw_matrix(rng: np.random.Generator, dim: int, klass: str, allow_boundary: bool = False) -> np.ndarray:
    g = _gaussian_matrix(rng, dim)
    if klass == "unitary":
        return polar_factors(g).partial_isometry
    if klass == "contraction":
        top = float(np.linalg.svd(g, compute_uv=False)[0])
        return g / (top if allow_boundary else top + 0.1)
    if klass == "dissipative":
        b = _gaussian_matrix(rng, dim)
        return hermitize(g) + 1j * (b @ b.conj().T) / dim
    if klass == "psd_contraction":
        u = polar_factors(g).partial_isometry
        return hermitize((u * rng.uniform(0.05, 0.95, dim)) @ u.conj().T)
    raise SchemaError(f"unknown matrix class {klass!r}")


def _random_pair(spec: dict, kind: str, where: str) -> tuple[np.ndarray, np.ndarray]:
    _check_keys(spec, {"seed", "dim", "class", "allow_boundary"}, where)
    seed = _int_entry(spec.get("seed", 0), f"{where}.seed", 0, 2**63 - 1)
    dim = _int_entry(spec.get("dim", 4), f"{where}.dim", 1, 128)
    klass = spec.get("class", _DEFAULT_CLASS[kind])
    if klass not in MATRIX_CLASSES:
        _fail(f"{where}.class", f"must be one of {MATRIX_CLASSES}")
    allow_boundary = spec.get("allow_boundary", False)
    if not isinstance(allow_boundary, bool):
        _fail(f"{where}.allow_boundary", "expected a boolean")
    rng = np.random.default_rng(seed)
    return (
        _draw_matrix(rng, dim, klass, allow_boundary),
        _draw_matrix(rng, dim, klass, allow_boundary),
    )


def _parse_matrices(data: dict, kind: str) -> tuple[np.ndarray, np.ndarray]:
    if "matrices" not in data:
        _fail("matrices", f"required for kind {kind!r}")
    raw = data["matrices"]
    if isinstance(raw, dict):
        return _random_pair(raw, kind, "matrices")
    if isinstance(raw, list) and len(raw) == 2:
        m0 = _matrix_entry(raw[0], "matrices[0]")
        m1 = _matrix_entry(raw[1], "matrices[1]")
        if m0.shape != m1.shape:
            _fail("matrices", "the two matrices must have equal dimensions")
        return m0, m1
    _fail("matrices", "expected a random spec object or a list of two matrices")


# ---------------------------------------------------------------------------
# potential / grid / exponent sub-schemas


def _parse_potential(raw, where: str = "potential") -> dict:
    if raw is None:
        return {"kind": "gaussian"}
    if not isinstance(raw, dict):
        _fail(where, "expected a descriptor object")
    desc = dict(raw)
    kind = desc.get("kind")
    if kind == "gaussian":
        _check_keys(desc, {"kind", "amplitude", "center", "width"}, where)
        if "amplitude" in desc:
            desc["amplitude"] = _complex_entry(desc["amplitude"], f"{where}.amplitude")
        for key in ("center", "width"):
            if key in desc:
                desc[key] = _float_entry(desc[key], f"{where}.{key}")
    elif kind == "bump":
        _check_keys(desc, {"kind", "amplitude", "center", "half_width", "taper"}, where)
        if "amplitude" in desc:
            desc["amplitude"] = _complex_entry(desc["amplitude"], f"{where}.amplitude")
        for key in ("center", "half_width", "taper"):
            if key in desc:
                desc[key] = _float_entry(desc[key], f"{where}.{key}")
    elif kind == "table":
        _check_keys(desc, {"kind", "x", "q"}, where)
        xs = desc.get("x")
        qs = desc.get("q")
        if not isinstance(xs, list) or not isinstance(qs, list) or len(xs) != len(qs) or not xs:
            _fail(where, "table needs equal-length nonempty x and q lists")
        desc["x"] = [_float_entry(v, f"{where}.x[{i}]") for i, v in enumerate(xs)]
        desc["q"] = [_complex_entry(v, f"{where}.q[{i}]") for i, v in enumerate(qs)]
    else:
        _fail(where, f"unknown potential kind {kind!r}")
    try:
        potential_values(desc, np.linspace(-1.0, 1.0, 5))
    except ValueError as exc:
        _fail(where, str(exc))
    return desc


def _parse_grid(raw, kind: str) -> dict:
    defaults = {"lo": -8.0, "hi": 8.0}
    if kind == "schrodinger":
        defaults["nodes"] = 64
        allowed = {"lo", "hi", "nodes"}
    else:
        defaults["nodes"] = 1024
        defaults["scheme"] = "gauss"
        allowed = {"lo", "hi", "nodes", "scheme"}
    if raw is None:
        return defaults
    if not isinstance(raw, dict):
        _fail("grid", "expected an object")
    _check_keys(raw, allowed, "grid")
    out = dict(defaults)
    if "lo" in raw:
        out["lo"] = _float_entry(raw["lo"], "grid.lo")
    if "hi" in raw:
        out["hi"] = _float_entry(raw["hi"], "grid.hi")
    if out["hi"] <= out["lo"]:
        _fail("grid", "hi must exceed lo")
    if "nodes" in raw:
        out["nodes"] = _int_entry(raw["nodes"], "grid.nodes", 2, 4096)
    if kind == "kernel_trace":
        if "scheme" in raw:
            if raw["scheme"] not in ("gauss", "trapezoid"):
                _fail("grid.scheme", "must be 'gauss' or 'trapezoid'")
            out["scheme"] = raw["scheme"]
        if out["scheme"] == "gauss" and (out["nodes"] % 16 or out["nodes"] < 16):
            _fail("grid.nodes", "gauss grids need a positive multiple of 16 nodes")
    else:
        if out["nodes"] < 2:
            _fail("grid.nodes", "need at least 2 lattice points")
    return out


def _parse_exponents(raw, kind: str) -> dict:
    if kind == "fractional":
        out = {"sigma": 0.5, "alpha": 0.5, "beta": 0.25, "p": 1.0}
        allowed = {"sigma", "alpha", "beta", "p"}
    else:
        out = {"alpha": 0.5, "beta": 0.5, "p": 1.0}
        allowed = {"alpha", "beta", "p"}
    if raw is not None:
        if not isinstance(raw, dict):
            _fail("exponents", "expected an object")
        _check_keys(raw, allowed, "exponents")
        for key in allowed & set(raw):
            out[key] = _float_entry(raw[key], f"exponents.{key}")
    if out["alpha"] < 0 or out["beta"] < 0 or out["p"] < 1:
        _fail("exponents", "need alpha, beta >= 0 and p >= 1")
    s = out["alpha"] + out["beta"]
    if kind == "fractional":
        if not (0.0 < out["sigma"] < 1.0):
            _fail("exponents.sigma", "must lie strictly inside (0, 1)")
        if not (1.0 - out["sigma"] < s <= 1.0):
            _fail("exponents", "alpha + beta must lie in (1 - sigma, 1]")
    elif not (0.5 < s <= 1.0):
        _fail("exponents", "alpha + beta must lie in (1/2, 1]")
    return out


def _parse_z_values(raw) -> tuple[complex, ...]:
    if raw is None:
        return (-2j,)
    if not isinstance(raw, list) or not raw:
        _fail("z_values", "expected a nonempty list")
    out = []
    for i, v in enumerate(raw):
        z = _complex_entry(v, f"z_values[{i}]")
        if z.imag > -1e-6:
            _fail(f"z_values[{i}]", "resolvent points must sit below the real axis")
        out.append(z)
    return tuple(out)


def _parse_polynomials(raw, default) -> tuple[tuple[complex, ...], ...]:
    if raw is None:
        return tuple(tuple(complex(c) for c in p) for p in default)
    if not isinstance(raw, list) or not raw:
        _fail("test_polynomials", "expected a nonempty list of coefficient lists")
    polys = []
    for i, coeffs in enumerate(raw):
        if not isinstance(coeffs, list) or not coeffs or len(coeffs) > 25:
            _fail(f"test_polynomials[{i}]", "expected 1 to 25 ascending coefficients")
        polys.append(tuple(_complex_entry(c, f"test_polynomials[{i}][{j}]") for j, c in enumerate(coeffs)))
    return tuple(polys)


def _parse_determinant(raw) -> Optional[dict]:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        _fail("determinant", "expected an object")
    _check_keys(raw, {"radius", "grid"}, "determinant")
    radius = _float_entry(raw.get("radius", 1.0 + 1e-4), "determinant.radius")
    if radius <= 1.0 + 1e-8:
        _fail("determinant.radius", "must exceed 1 + 1e-8")
    grid = _int_entry(raw.get("grid", 4096), "determinant.grid", 256, 1 << 16)
    return {"radius": radius, "grid": grid}


def _parse_monotone(raw) -> Optional[dict]:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        _fail("monotone", "expected an object")
    _check_keys(raw, {"n", "variant", "level"}, "monotone")
    ns = raw.get("n")
    if not isinstance(ns, list) or not ns or len(ns) > 16:
        _fail("monotone.n", "expected a list of 1 to 16 integers")
    ns = [_int_entry(v, f"monotone.n[{i}]", 1, 1 << 20) for i, v in enumerate(ns)]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        _fail("monotone.n", "must be strictly increasing")
    variant = raw.get("variant", "scale")
    if variant not in ("scale", "truncate"):
        _fail("monotone.variant", "must be 'scale' or 'truncate'")
    level = _float_entry(raw.get("level", 0.01), "monotone.level")
    if level <= 0:
        _fail("monotone.level", "must be positive")
    return {"n": ns, "variant": variant, "level": level}


# ---------------------------------------------------------------------------
# the scenario object


@dataclass(frozen=True, eq=False)
class Scenario:
    """One parsed scenario file, with defaults resolved."""

    name: str
    kind: str
    raw: dict
    matrices: Optional[tuple[np.ndarray, np.ndarray]]
    dilation_order: Optional[int]
    test_polynomials: tuple[tuple[complex, ...], ...]
    determinant: Optional[dict]
    z_values: tuple[complex, ...]
    exponents: dict
    quadrature_nodes: int
    grid: Optional[dict]
    potential: Optional[dict]
    spectral_point: float
    monotone: Optional[dict]
    tolerances: dict
    outputs: tuple[str, ...]

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.raw, sort_keys=True, separators=(",", ":"), allow_nan=False)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def parse_scenario(data: Any) -> Scenario:
    if not isinstance(data, dict):
        raise SchemaError("scenario must be a JSON object")
    name = data.get("name")
    if not isinstance(name, str) or not name.strip():
        _fail("name", "required nonempty string")
    kind = data.get("kind")
    if kind not in KINDS:
        _fail("kind", f"must be one of {KINDS}")
    _check_keys(data, {"name", "kind", "outputs", "tolerances"} | _KIND_KEYS[kind], "scenario")

    outputs_raw = data.get("outputs", ["json"])
    if not isinstance(outputs_raw, list) or any(o not in ("json", "csv", "svg") for o in outputs_raw):
        _fail("outputs", "expected a list drawn from ['json', 'csv', 'svg']")
    outputs = tuple(dict.fromkeys(outputs_raw))

    tol_raw = data.get("tolerances", {})
    if not isinstance(tol_raw, dict):
        _fail("tolerances", "expected an object of check_id to tolerance")
    tolerances = {}
    for key, v in tol_raw.items():
        t = _float_entry(v, f"tolerances.{key}")
        if t <= 0:
            _fail(f"tolerances.{key}", "must be positive")
        tolerances[str(key)] = t

    matrices = None
    if kind in _DEFAULT_CLASS:
        matrices = _parse_matrices(data, kind)

    dilation_order = None
    if "dilation_order" in data:
        dilation_order = _int_entry(data["dilation_order"], "dilation_order", 3, 64)

    default_polys = _MONOMIALS_DEG4 if kind == "unitary_pair" else _MONOMIALS_DEG3
    polys = _parse_polynomials(data.get("test_polynomials"), default_polys)

    spectral_point = -1.0
    if "spectral_point" in data:
        spectral_point = _float_entry(data["spectral_point"], "spectral_point")
        if spectral_point >= -1e-12:
            _fail("spectral_point", "must be strictly negative (below the branch cut)")

    return Scenario(
        name=name.strip(),
        kind=kind,
        raw=data,
        matrices=matrices,
        dilation_order=dilation_order,
        test_polynomials=polys,
        determinant=_parse_determinant(data.get("determinant")),
        z_values=_parse_z_values(data.get("z_values")),
        exponents=_parse_exponents(data.get("exponents"), kind),
        quadrature_nodes=_int_entry(data.get("quadrature_nodes", 200), "quadrature_nodes", 32, 2000),
        grid=_parse_grid(data.get("grid"), kind) if kind in ("schrodinger", "kernel_trace") else None,
        potential=_parse_potential(data.get("potential")) if kind in ("schrodinger", "kernel_trace") else None,
        spectral_point=spectral_point,
        monotone=_parse_monotone(data.get("monotone")),
        tolerances=tolerances,
        outputs=outputs,
    )


def load_scenario(path) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from exc
    return parse_scenario(data)


# ---------------------------------------------------------------------------
# generation


def _matrix_to_json(m: np.ndarray) -> list:
    return [[[float(c.real), float(c.imag)] for c in row] for row in m]


def generate_scenario(kind: str, seed: int, dim: int) -> dict:
    """Deterministic scenario dict for (kind, seed, dim); see the generator
    recipes in _draw_matrix. The file embeds explicit matrices so reruns and
    re-generations are byte-identical."""
    if kind not in KINDS:
        raise SchemaError(f"kind must be one of {KINDS}")
    if not isinstance(seed, int) or seed < 0:
        raise SchemaError("seed must be a nonnegative integer")
    if not isinstance(dim, int) or not (1 <= dim <= 64):
        raise SchemaError("dim must be an integer in [1, 64]")
    rng = np.random.default_rng(seed)
    name = f"{kind}-seed{seed}-dim{dim}"
    payload: dict[str, Any] = {"name": name, "kind": kind}
    if kind in _DEFAULT_CLASS:
        klass = _DEFAULT_CLASS[kind]
        payload["matrices"] = [
            _matrix_to_json(_draw_matrix(rng, dim, klass)),
            _matrix_to_json(_draw_matrix(rng, dim, klass)),
        ]
    if kind == "unitary_pair":
        payload["outputs"] = ["json", "csv", "svg"]
    elif kind == "contraction_pair":
        payload["outputs"] = ["json", "csv", "svg"]
        payload["dilation_order"] = 6
    elif kind == "dissipative_pair":
        payload["outputs"] = ["json", "csv", "svg"]
        payload["z_values"] = [[0.0, -2.0]]
        payload["dilation_order"] = 24
    elif kind == "fractional":
        payload["outputs"] = ["json"]
        payload["exponents"] = {"sigma": 0.5, "alpha": 0.5, "beta": 0.25, "p": 1.0}
    elif kind == "schrodinger":
        payload["outputs"] = ["json", "csv", "svg"]
        payload["grid"] = {"lo": -8.0, "hi": 8.0, "nodes": max(2, dim)}
        payload["potential"] = {
            "kind": "gaussian",
            "amplitude": [float(rng.uniform(0.25, 1.0)), float(rng.uniform(0.5, 1.5))],
            "width": float(rng.uniform(0.8, 1.25)),
        }
        payload["z_values"] = [[0.0, -2.0]]
        payload["dilation_order"] = 24
    else:  # kernel_trace
        payload["outputs"] = ["json"]
        payload["grid"] = {"lo": -8.0, "hi": 8.0, "nodes": max(64, 16 * ((dim + 15) // 16))}
        payload["potential"] = {
            "kind": "gaussian",
            "amplitude": float(rng.uniform(0.5, 1.5)),
            "width": float(rng.uniform(0.8, 1.25)),
        }
        payload["monotone"] = {"n": [2, 4, 8, 16, 32, 64, 128]}
    return payload


def write_scenario(payload: dict, path) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# execution


@dataclass(frozen=True, eq=False)
class CheckRecord:
    """One verified statement: residual against tolerance."""

    check_id: str
    anchor: str
    lhs: complex
    rhs: complex
    residual: Optional[float]
    tolerance: float
    passed: bool


@dataclass(frozen=True, eq=False)
class Report:
    scenario: str
    kind: str
    records: tuple[CheckRecord, ...]
    flags: dict
    tables: dict
    provenance: dict

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.records)

    def failed(self) -> list[CheckRecord]:
        return [r for r in self.records if not r.passed]


_AUTO = object()


def _resolvent_sum(ssf, z: complex) -> complex:
    if len(ssf.breakpoints) == 0:
        return 0.0 + 0.0j
    return complex(-np.sum(ssf.jump_sizes / (ssf.breakpoints - z)))


def _resolvent_lhs(m0: np.ndarray, m1: np.ndarray, z: complex) -> complex:
    eye = np.eye(m0.shape[0])
    r1 = np.linalg.solve(m1 - z * eye, eye)
    r0 = np.linalg.solve(m0 - z * eye, eye)
    return complex(np.trace(r1 - r0))


def _run_unitary_pair(sc: Scenario, record: Callable) -> tuple[dict, dict]:
    m0, m1 = sc.matrices
    u0, u1 = Unitary(m0), Unitary(m1)
    ssf = unitary_ssf(u0, u1)
    for j, coeffs in enumerate(sc.test_polynomials):
        lhs = np.trace(analytic_poly_eval(m1, coeffs)) - np.trace(analytic_poly_eval(m0, coeffs))
        record(f"trace-poly-{j}", "circle-trace-formula", lhs, ssf_trace_integral(ssf, coeffs), 1e-10)
    record("hardy-gauge", "hardy-gauge", hardy_gauge_check(ssf, 1, sc.test_polynomials[0]), 0.0, 1e-10)
    flags = {"gauge": ssf.gauge, "jump_count": len(ssf.jumps)}
    tables = {"circle_step": ssf}
    _determinant_block(sc, record, m0, m1, ssf, flags, tables)
    return flags, tables


def _determinant_block(sc, record, m0, m1, step_ssf, flags, tables):
    if sc.determinant is None:
        return
    try:
        sampled = determinant_ssf(m0, m1, radius=sc.determinant["radius"], grid=sc.determinant["grid"])
    except ArithmeticError as exc:
        flags["determinant_error"] = f"{type(exc).__name__}: {exc}"
        record("determinant-step-consistency", "determinant-consistency", 0.0, 0.0, 5e-2, residual=None)
        return
    deviation = step_vs_sampled_max_deviation(step_ssf, sampled)
    record("determinant-step-consistency", "determinant-consistency", deviation, 0.0, 5e-2)
    flags["determinant_winding"] = sampled.winding
    tables["sampled"] = sampled


def _run_contraction_pair(sc: Scenario, record: Callable) -> tuple[dict, dict]:
    m0, m1 = sc.matrices
    t0, t1 = Contraction(m0), Contraction(m1)
    max_deg = max(len(c) - 1 for c in sc.test_polynomials)
    blocks = sc.dilation_order or default_block_count(max_deg)
    ssf = contraction_ssf(t0, t1, blocks)
    for j, coeffs in enumerate(sc.test_polynomials):
        lhs = np.trace(analytic_poly_eval(m1, coeffs)) - np.trace(analytic_poly_eval(m0, coeffs))
        record(f"trace-poly-{j}", "dilation-trace-formula", lhs, ssf_trace_integral(ssf, coeffs), 1e-9)
    d0, d1 = dilation_pair(t0, t1, blocks)
    worst = 0.0
    for dil, base in ((d0, m0), (d1, m1)):
        for k in range(1, blocks - 1):
            worst = max(worst, operator_norm(dil.compressed_power(k) - np.linalg.matrix_power(base, k)))
    record("power-dilation", "power-dilation", worst, 0.0, 1e-10)
    conditions = real_ssf_conditions_report(
        t0, t1, sc.exponents["alpha"], sc.exponents["beta"], sc.exponents["p"]
    )
    record("defect-identity", "defect-identity", conditions.identity_residual, 0.0, 1e-12)
    record("hardy-gauge", "hardy-gauge", hardy_gauge_check(ssf, 1, sc.test_polynomials[0]), 0.0, 1e-10)
    flags = {
        "gauge": ssf.gauge,
        "jump_count": len(ssf.jumps),
        "block_count": blocks,
        "kernel_certified": conditions.kernel_certified,
        "min_defect_eig": conditions.min_defect_eig,
        "weighted_diff_norm": conditions.weighted_diff_norm,
        "weighted_adjoint_diff_norm": conditions.weighted_adjoint_diff_norm,
        "defect_diff_norm": conditions.defect_diff_norm,
        "defect_adjoint_diff_norm": conditions.defect_adjoint_diff_norm,
    }
    tables = {"circle_step": ssf}
    _determinant_block(sc, record, m0, m1, ssf, flags, tables)
    return flags, tables


def _line_pair_checks(sc, record, m0, m1, ssf, tol_resolvent, anchor):
    for j, z in enumerate(sc.z_values):
        record(
            f"resolvent-z{j}", anchor, _resolvent_lhs(m0, m1, z), _resolvent_sum(ssf, z), tol_resolvent
        )
    record(
        "weighted-consistency",
        "weighted-integral-consistency",
        weighted_abs_integral(ssf, side="line"),
        weighted_abs_integral(ssf, side="circle"),
        1e-12,
    )


def _run_dissipative_pair(sc: Scenario, record: Callable) -> tuple[dict, dict]:
    m0, m1 = sc.matrices
    l0, l1 = Dissipative(m0), Dissipative(m1)
    idents = cayley_identity_residuals(l0, l1)
    record(
        "cayley-defect-factorization",
        "cayley-defect-factorization",
        max(max(idents.defect_sq_residuals), max(idents.adjoint_defect_sq_residuals)),
        0.0,
        1e-9,
    )
    record(
        "cayley-resolvent-difference",
        "cayley-resolvent-difference",
        idents.resolvent_difference_residual,
        0.0,
        1e-9,
    )
    blocks = sc.dilation_order or 24
    ssf = dissipative_ssf(l0, l1, blocks)
    _line_pair_checks(sc, record, m0, m1, ssf, 1e-6, "line-resolvent-trace")
    trace_rep = perturbation_trace_report(l0, l1, ssf)
    flags = {
        "block_count": blocks,
        "jump_count": len(ssf.breakpoints),
        "mass_at_infinity": ssf.mass_at_infinity,
        "perturbation_trace": trace_rep.perturbation_trace,
        "real_integrable_possible": trace_rep.real_integrable_possible,
        "left_tail": trace_rep.left_tail,
        "right_tail": trace_rep.right_tail,
        "windowed": trace_rep.windowed,
    }
    try:
        cond = dissipative_condition_report(l0, l1, p=sc.exponents.get("p", 1.0))
    except ArithmeticError as exc:
        flags["condition_report"] = f"{type(exc).__name__}: {exc}"
    else:
        flags["condition_report"] = {
            "p": cond.p,
            "weighted_diff_norm": cond.weighted_diff_norm,
            "resolvent_diff_trace_norm": cond.resolvent_diff_trace_norm,
            "sqrt_im_resolvent_norms": cond.sqrt_im_resolvent_norms,
            "resolvent_sqrt_im_norms": cond.resolvent_sqrt_im_norms,
        }
    return flags, {"line_step": ssf}


def _run_fractional(sc: Scenario, record: Callable) -> tuple[dict, dict]:
    x, y = sc.matrices
    e = sc.exponents
    job = FractionalJob(x=x, y=y, sigma=e["sigma"], alpha=e["alpha"], beta=e["beta"], p=e["p"])
    bound_rep = fractional_power_bound_report(job)
    record(
        "fractional-bound",
        "fractional-power-bound",
        bound_rep.lhs,
        bound_rep.bound,
        1e-10,
        residual=max(0.0, bound_rep.lhs - bound_rep.bound),
    )
    exact = fractional_power(job.y, job.sigma) - fractional_power(job.x, job.sigma)
    quad = fractional_diff_quadrature(job, nodes=sc.quadrature_nodes)
    rel = float(np.linalg.norm(quad - exact) / max(np.linalg.norm(exact), 1e-12))
    record("fractional-quadrature", "fractional-quadrature", rel, 0.0, 1e-6)
    worst = max(resolvent_difference_identity_check(job.x, job.y, t) for t in (0.01, 1.0, 100.0))
    record("resolvent-identity", "resolvent-difference-identity", worst, 0.0, 1e-11)
    flags = {
        "sigma": job.sigma,
        "alpha": job.alpha,
        "beta": job.beta,
        "p": job.p,
        "lhs": bound_rep.lhs,
        "bound": bound_rep.bound,
        "slack": bound_rep.slack,
        "weighted_norm": bound_rep.weighted_norm,
        "plain_diff_norm": bound_rep.plain_diff_norm,
        "min_eig": job.min_eig,
        "ill_conditioned": bound_rep.ill_conditioned,
        "corollary_form": bound_rep.corollary_form,
    }
    return flags, {}


def _run_schrodinger(sc: Scenario, record: Callable) -> tuple[dict, dict]:
    g = sc.grid
    x = np.linspace(g["lo"], g["hi"], g["nodes"])
    q = np.asarray(potential_values(sc.potential, x), dtype=np.complex128)
    l0, l1 = discrete_schrodinger_pair(q, float(x[1] - x[0]))
    floor = float(np.linalg.eigvalsh(l0.imag_part).min())
    record(
        "lattice-dissipativity",
        "lattice-dissipativity",
        floor,
        1.0,
        1e-10,
        residual=max(0.0, 1.0 - floor),
    )
    blocks = sc.dilation_order or 24
    ssf = dissipative_ssf(l0, l1, blocks)
    _line_pair_checks(sc, record, l0.m, l1.m, ssf, 1e-5, "schrodinger-resolvent")
    trace_rep = perturbation_trace_report(l0, l1, ssf)
    flags = {
        "nodes": g["nodes"],
        "block_count": blocks,
        "jump_count": len(ssf.breakpoints),
        "mass_at_infinity": ssf.mass_at_infinity,
        "perturbation_trace": trace_rep.perturbation_trace,
        "real_integrable_possible": trace_rep.real_integrable_possible,
        "windowed": trace_rep.windowed,
    }
    return flags, {"line_step": ssf}


def _run_kernel_trace(sc: Scenario, record: Callable) -> tuple[dict, dict]:
    g = sc.grid
    grid = make_grid(g["lo"], g["hi"], g["nodes"], scheme=g["scheme"])
    rep = kernel_trace_report(sc.potential, grid, z=sc.spectral_point)
    record("kernel-trace-identity", "kernel-trace-identity", rep.trace, rep.trace_norm, 1e-10)
    record(
        "kernel-positivity",
        "kernel-positivity",
        rep.min_eigenvalue,
        0.0,
        1e-10,
        residual=max(0.0, -rep.min_eigenvalue),
    )
    if abs(sc.spectral_point + 1.0) < 1e-12:
        record("kernel-half-l1", "kernel-half-l1", rep.trace, rep.half_l1_target, 1e-4)
    flags = {
        "trace": rep.trace,
        "trace_norm": rep.trace_norm,
        "diagonal_integral": rep.diagonal_integral,
        "half_l1_target": rep.half_l1_target,
        "min_eigenvalue": rep.min_eigenvalue,
        "spectral_point": sc.spectral_point,
    }
    if sc.monotone is not None:
        mon = monotone_s1_check(
            sc.potential,
            grid,
            sc.monotone["n"],
            variant=sc.monotone["variant"],
            level=sc.monotone["level"],
        )
        if mon.variant == "scale":
            worst = max(
                abs(r - mon.full_norm / n) for n, r in zip(mon.n_values, mon.residual_norms)
            )
        else:
            worst = max(
                [0.0]
                + [a - b for a, b in zip(mon.approx_norms, mon.approx_norms[1:])]
                + [b - a for a, b in zip(mon.residual_norms, mon.residual_norms[1:])]
            )
        record("monotone-ladder", "monotone-trace-ladder", worst, 0.0, 1e-10)
        flags["monotone"] = {
            "variant": mon.variant,
            "n": mon.n_values,
            "full_norm": mon.full_norm,
            "approx_norms": mon.approx_norms,
            "residual_norms": mon.residual_norms,
        }
    return flags, {}


_RUNNERS = {
    "unitary_pair": _run_unitary_pair,
    "contraction_pair": _run_contraction_pair,
    "dissipative_pair": _run_dissipative_pair,
    "fractional": _run_fractional,
    "schrodinger": _run_schrodinger,
    "kernel_trace": _run_kernel_trace,
}


def run_scenario(sc: Scenario, tolerance_scale: float = 1.0) -> Report:
    """Execute every check the scenario's kind implies.

    Data problems that surface during execution (a matrix failing its class
    validation, an inadmissible potential) are reported as SchemaError: the
    file was wrong, not the numerics. Numeric check failures never raise;
    they become failing records.
    """
    if not isinstance(tolerance_scale, (int, float)) or tolerance_scale <= 0:
        raise SchemaError("tolerance_scale must be a positive number")
    records: list[CheckRecord] = []

    def record(check_id, anchor, lhs, rhs, tol, residual=_AUTO):
        if anchor not in ANCHORS:
            raise RuntimeError(f"internal: unregistered anchor {anchor!r}")
        tol_val = float(sc.tolerances.get(check_id, tol)) * float(tolerance_scale)
        if residual is _AUTO:
            res: Optional[float] = abs(complex(lhs) - complex(rhs))
            passed = res <= tol_val
        elif residual is None:
            res, passed = None, False
        else:
            res = float(residual)
            passed = res <= tol_val
        records.append(
            CheckRecord(str(check_id), anchor, complex(lhs), complex(rhs), res, tol_val, bool(passed))
        )

    try:
        flags, tables = _RUNNERS[sc.kind](sc, record)
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(f"scenario {sc.name!r}: {exc}") from exc
    return Report(
        scenario=sc.name,
        kind=sc.kind,
        records=tuple(records),
        flags=flags,
        tables=tables,
        provenance={"config_hash": sc.config_hash, "library_version": __version__},
    )
