import numpy as np
import pytest

from ssflab.errors import (
    IndefiniteInput,
    InvalidExponent,
    KernelViolation,
    NotHermitian,
    OnePointSpectrum,
    ValidationError,
)
from ssflab.linalg import (
    Contraction,
    Dissipative,
    Unitary,
    analytic_poly_eval,
    as_matrix,
    cayley,
    defect_operators,
    eigenphases,
    hermitian_power,
    hermitian_sqrt,
    inverse_cayley,
    operator_norm,
    polar_factors,
    poly_scalar,
    schatten_norm,
    singular_log_sum,
    singular_value_commute_check,
    von_neumann_gap,
)

TWO_PI = 2.0 * np.pi


def random_contraction(rng, n, scale=0.9):
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return Contraction(scale * g / (operator_norm(g) + 0.1))


def random_unitary(rng, n):
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    return Unitary(q * (np.diag(r) / np.abs(np.diag(r))))


def random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (g + g.conj().T) / 2


def random_dissipative(rng, n):
    h = random_hermitian(rng, n)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return Dissipative(h + 1j * (g @ g.conj().T) / n)


# ---------------------------------------------------------------------------
# hermitian_sqrt / hermitian_power


def test_sqrt_diagonal_oracle():
    r = hermitian_sqrt(np.diag([4.0, 9.0]))
    assert np.allclose(r, np.diag([2.0, 3.0]), atol=1e-14)


def test_sqrt_two_by_two_frozen():
    # eigenpairs of [[2,1],[1,2]] are (1, (1,-1)/sqrt2) and (3, (1,1)/sqrt2)
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    expected = np.array(
        [
            [1.3660254037844386, 0.3660254037844386],
            [0.3660254037844386, 1.3660254037844386],
        ]
    )
    assert np.allclose(hermitian_sqrt(a), expected, atol=1e-14)


def test_sqrt_squares_back():
    for seed in range(25):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 9))
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        a = g @ g.conj().T
        r = hermitian_sqrt(a)
        assert np.linalg.norm(r @ r - a) <= 1e-11 * (1 + np.linalg.norm(a))
        assert np.linalg.norm(r - r.conj().T) == 0.0


def test_sqrt_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_sqrt_clamps_tiny_negative_but_rejects_indefinite():
    assert np.allclose(hermitian_sqrt(np.diag([-1e-9, 1.0])), np.diag([0.0, 1.0]))
    with pytest.raises(IndefiniteInput):
        hermitian_sqrt(np.diag([-1.0, 1.0]))


def test_power_scalar_oracles():
    assert np.allclose(hermitian_power(np.diag([0.25]), -0.5), [[2.0]])
    assert np.allclose(hermitian_power(np.diag([0.25, 4.0]), 0.5), np.diag([0.5, 2.0]))


def test_power_kernel_floor():
    with pytest.raises(KernelViolation):
        hermitian_power(np.diag([0.0, 1.0]), -0.5)


def test_power_matches_eig_route():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        g = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
        a = g @ g.conj().T / 5 + 0.1 * np.eye(5)
        w, v = np.linalg.eigh(a)
        for p in (0.5, 0.3, -0.25, 2.0):
            direct = (v * w**p) @ v.conj().T
            assert np.linalg.norm(hermitian_power(a, p) - direct) <= 1e-12 * np.linalg.norm(direct)


# ---------------------------------------------------------------------------
# norms


def test_schatten_oracles():
    a = np.diag([3.0, 4.0])
    assert schatten_norm(a, 1) == pytest.approx(7.0, abs=1e-14)
    assert schatten_norm(a, 2) == pytest.approx(5.0, abs=1e-14)
    assert schatten_norm(a, 4) == pytest.approx((3.0**4 + 4.0**4) ** 0.25, abs=1e-14)
    assert operator_norm(a) == pytest.approx(4.0, abs=1e-14)


def test_schatten_rejects_quasinorm():
    with pytest.raises(InvalidExponent):
        schatten_norm(np.eye(2), 0.5)


def test_schatten_monotone_in_p():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        norms = [schatten_norm(a, p) for p in (1, 1.5, 2, 3, 7)]
        assert all(x >= y - 1e-12 for x, y in zip(norms, norms[1:]))
        assert norms[-1] >= operator_norm(a) - 1e-12


# ---------------------------------------------------------------------------
# eigenphases


def test_eigenphases_oracle():
    got = eigenphases(np.diag([1.0, 1j]))
    assert len(got) == 2
    assert got[0][0] == pytest.approx(np.pi / 2, abs=1e-14)
    assert got[0][1] == 1
    assert got[1][0] == pytest.approx(TWO_PI, abs=1e-14)
    assert got[1][1] == 1


def test_eigenphases_merge_across_seam():
    u = np.diag(np.exp(1j * np.array([TWO_PI - 5e-10, 5e-10, 0.0])))
    got = eigenphases(u)
    assert len(got) == 1
    phase, mult = got[0]
    assert mult == 3
    assert phase == pytest.approx(TWO_PI, abs=2e-9)


def test_eigenphases_multiplicity():
    u = np.diag([1j, 1j, -1.0])
    got = eigenphases(u)
    assert [m for _, m in got] == [2, 1]
    assert got[0][0] == pytest.approx(np.pi / 2, abs=1e-14)
    assert got[1][0] == pytest.approx(np.pi, abs=1e-14)


def test_eigenphases_total_multiplicity_and_range():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 10))
        u = random_unitary(rng, n)
        got = eigenphases(u)
        assert sum(m for _, m in got) == n
        for p, _ in got:
            assert 0.0 < p <= TWO_PI
        phases = [p for p, _ in got]
        assert phases == sorted(phases)


# ---------------------------------------------------------------------------
# operator wrappers


def test_wrappers_validate():
    with pytest.raises(ValidationError):
        Unitary(1.1 * np.eye(2))
    with pytest.raises(ValidationError):
        Contraction(np.diag([1.5, 0.2]))
    with pytest.raises(ValidationError):
        Dissipative(np.array([[-1j]]))
    with pytest.raises(ValidationError):
        as_matrix(np.zeros((2, 3)))
    with pytest.raises(ValidationError):
        as_matrix(np.array([[np.nan]]))


def test_wrapper_matrices_frozen():
    c = Contraction(np.eye(2) * 0.5)
    with pytest.raises(ValueError):
        c.m[0, 0] = 1.0


def test_unitary_is_contraction():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        u = random_unitary(rng, 5)
        c = Contraction(u.m)
        assert abs(c.norm - 1.0) <= 1e-10


# ---------------------------------------------------------------------------
# defects and polar factors


def test_defect_scalar_oracles():
    pair = defect_operators(Contraction(np.array([[0.5]])))
    assert pair.d_t[0, 0] == pytest.approx(np.sqrt(3) / 2, abs=1e-15)
    assert pair.d_t_star[0, 0] == pytest.approx(np.sqrt(3) / 2, abs=1e-15)
    pair = defect_operators(Contraction(np.array([[0.6]])))
    assert pair.d_t[0, 0] == pytest.approx(0.8, abs=1e-15)


def test_defect_identities():
    for seed in range(25):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 9))
        t = random_contraction(rng, n, scale=float(rng.uniform(0.2, 1.0)))
        d_t, d_ts = defect_operators(t)
        eye = np.eye(n)
        assert np.linalg.norm(d_t @ d_t - (eye - t.m.conj().T @ t.m)) <= 1e-13
        assert np.linalg.norm(d_ts @ d_ts - (eye - t.m @ t.m.conj().T)) <= 1e-13
        # intertwining, the reason the defects come from one svd
        assert np.linalg.norm(t.m @ d_t - d_ts @ t.m) <= 1e-13


def test_defect_vanishes_on_unitary():
    rng = np.random.default_rng(7)
    u = random_unitary(rng, 6)
    d_t, d_ts = defect_operators(Contraction(u.m))
    assert np.linalg.norm(d_t) <= 1e-6
    assert np.linalg.norm(d_ts) <= 1e-6


def test_polar_oracle():
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    pf = polar_factors(rot)
    assert np.allclose(pf.partial_isometry, rot, atol=1e-14)
    assert np.allclose(pf.modulus, np.eye(2), atol=1e-14)
    assert not pf.rank_deficient
    assert polar_factors(np.diag([3.0, 0.0])).rank_deficient


def test_polar_reconstructs():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 8))
        a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        pf = polar_factors(a)
        assert np.linalg.norm(pf.partial_isometry @ pf.modulus - a) <= 1e-12 * (
            1 + np.linalg.norm(a)
        )
        eye = np.eye(n)
        assert np.linalg.norm(pf.partial_isometry.conj().T @ pf.partial_isometry - eye) <= 1e-13
        assert np.linalg.eigvalsh(pf.modulus).min() >= -1e-13


# ---------------------------------------------------------------------------
# polynomial calculus


def test_poly_eval_nilpotent_oracle():
    t = np.array([[0.0, 1.0], [0.0, 0.0]])
    got = analytic_poly_eval(t, [1.0, 1.0, 1.0])
    assert np.allclose(got, np.array([[1.0, 1.0], [0.0, 1.0]]), atol=1e-15)


def test_poly_eval_matches_powers():
    rng = np.random.default_rng(3)
    t = random_contraction(rng, 5)
    coeffs = rng.standard_normal(7) + 1j * rng.standard_normal(7)
    direct = sum(c * np.linalg.matrix_power(t.m, k) for k, c in enumerate(coeffs))
    assert np.linalg.norm(analytic_poly_eval(t, coeffs) - direct) <= 1e-12
    z = np.exp(1j * 0.7)
    assert poly_scalar(coeffs, z) == pytest.approx(
        sum(c * z**k for k, c in enumerate(coeffs)), abs=1e-13
    )


def test_von_neumann_gap_nonpositive():
    for seed in range(15):
        rng = np.random.default_rng(seed)
        t = random_contraction(rng, int(rng.integers(2, 7)), scale=float(rng.uniform(0.3, 1.0)))
        coeffs = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        assert von_neumann_gap(t, coeffs) <= 1e-8


# ---------------------------------------------------------------------------
# Cayley transform


def test_cayley_scalar_oracle():
    img = cayley(Dissipative(np.array([[1.0 + 0j]])))
    assert img.contraction.m[0, 0] == pytest.approx(-1j, abs=1e-15)
    assert img.condition == pytest.approx(1.0, abs=1e-12)


def test_inverse_cayley_scalar_oracles():
    assert inverse_cayley(Contraction(np.zeros((1, 1)))).m[0, 0] == pytest.approx(1j, abs=1e-15)
    assert inverse_cayley(Contraction(np.array([[-1.0 + 0j]]))).m[0, 0] == pytest.approx(
        0.0, abs=1e-15
    )


def test_cayley_round_trip():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 9))
        l = random_dissipative(rng, n)
        t = cayley(l).contraction
        back = inverse_cayley(t)
        assert np.linalg.norm(back.m - l.m) <= 1e-9 * (1 + np.linalg.norm(l.m))


def test_cayley_hermitian_gives_unitary():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        h = random_hermitian(rng, 6)
        t = cayley(Dissipative(h)).contraction
        Unitary(t.m, tol=1e-9)


def test_inverse_cayley_rejects_spectrum_at_one():
    with pytest.raises(OnePointSpectrum):
        inverse_cayley(Contraction(np.eye(2)))


# ---------------------------------------------------------------------------
# misc


def test_singular_log_sum_oracle():
    t0 = np.zeros((2, 2))
    t1 = np.diag([1.0, 0.0])
    assert singular_log_sum(t0, t1) == pytest.approx(np.log(2.0), abs=1e-14)
    assert singular_log_sum(t0, t0) == 0.0


def test_singular_value_commute_check():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 10))
        a = random_hermitian(rng, n)
        b = random_hermitian(rng, n)
        assert singular_value_commute_check(a, b) <= 1e-10 * (
            1 + operator_norm(a) * operator_norm(b)
        )
    with pytest.raises(NotHermitian):
        singular_value_commute_check(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2))
