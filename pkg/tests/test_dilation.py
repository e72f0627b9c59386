import numpy as np
import pytest

from ssflab.dilation import (
    default_block_count,
    dilation_pair,
    finite_schaffer_dilation,
    julia_block,
    observed_trace_degree,
)
from ssflab.errors import InvalidOrder
from ssflab.linalg import Contraction, operator_norm, schatten_norm


def random_contraction(rng, n, scale=None):
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    s = scale if scale is not None else float(rng.uniform(0.3, 1.0))
    return Contraction(s * g / (operator_norm(g) + 0.1))


# ---------------------------------------------------------------------------
# Julia block


def test_julia_zero_contraction():
    j = julia_block(Contraction(np.zeros((1, 1))))
    assert np.allclose(j.m, np.eye(2), atol=1e-15)


def test_julia_scalar_half_is_rotation():
    j = julia_block(Contraction(np.array([[0.5]])))
    expected = np.array([[np.sqrt(3) / 2, -0.5], [0.5, np.sqrt(3) / 2]])
    assert np.allclose(j.m, expected, atol=1e-15)


def test_julia_unitary_seed19():
    rng = np.random.default_rng(19)
    t = random_contraction(rng, 3)
    j = julia_block(t).m
    assert np.linalg.norm(j.conj().T @ j - np.eye(6)) <= 1e-10
    # corner carries T itself
    assert np.allclose(j[3:, :3], t.m, atol=1e-15)


def test_julia_of_unitary_has_zero_defect_corners():
    rng = np.random.default_rng(4)
    g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    q, r = np.linalg.qr(g)
    u = q * (np.diag(r) / np.abs(np.diag(r)))
    j = julia_block(Contraction(u)).m
    assert np.linalg.norm(j[:4, :4]) <= 1e-7
    assert np.linalg.norm(j[4:, 4:]) <= 1e-7
    assert np.allclose(j[:4, 4:], -u.conj().T, atol=1e-12)


# ---------------------------------------------------------------------------
# finite cyclic dilation


def test_schaffer_zero_contraction_is_cyclic_shift():
    d = finite_schaffer_dilation(Contraction(np.zeros((1, 1))), 3)
    expected = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=complex)
    assert np.allclose(d.u.m, expected, atol=1e-15)
    for k in (1, 2):
        assert abs(d.compressed_power(k)[0, 0]) <= 1e-15


def test_schaffer_scalar_half_m5():
    d = finite_schaffer_dilation(Contraction(np.array([[0.5]])), 5)
    for k in (1, 2, 3):
        assert d.compressed_power(k)[0, 0] == pytest.approx(0.5**k, abs=1e-14)


def test_schaffer_power_dilation_seed29():
    rng = np.random.default_rng(29)
    t = random_contraction(rng, 3)
    d = finite_schaffer_dilation(t, 8)
    for k in range(1, 7):
        residual = np.linalg.norm(d.compressed_power(k) - np.linalg.matrix_power(t.m, k))
        assert residual <= 1e-10


def test_schaffer_rejects_small_m():
    with pytest.raises(InvalidOrder):
        finite_schaffer_dilation(Contraction(np.zeros((2, 2))), 2)


def test_schaffer_unitary_and_power_dilation_property():
    for seed in range(15):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 5))
        m = int(rng.integers(3, 9))
        t = random_contraction(rng, n)
        d = finite_schaffer_dilation(t, m)
        eye = np.eye(m * n)
        assert np.linalg.norm(d.u.m.conj().T @ d.u.m - eye) <= 1e-10
        assert d.m == m and d.n == n and d.embedding_index == 0
        for k in range(1, m - 1):
            residual = np.linalg.norm(d.compressed_power(k) - np.linalg.matrix_power(t.m, k))
            assert residual <= 1e-10


# ---------------------------------------------------------------------------
# pairs


def test_pair_equal_contractions():
    rng = np.random.default_rng(2)
    t = random_contraction(rng, 2)
    d0, d1 = dilation_pair(t, t, 5)
    assert np.linalg.norm(d1.u.m - d0.u.m) == 0.0


def test_pair_scalar_trace_norm_oracle():
    t0 = Contraction(np.zeros((1, 1)))
    t1 = Contraction(np.array([[0.5]]))
    d0, d1 = dilation_pair(t0, t1, 4)
    # J(1/2) - J(0) = [[a, -1/2], [1/2, a]] with a = sqrt(3)/2 - 1 is normal,
    # both singular values equal sqrt(a^2 + 1/4)
    a = np.sqrt(3) / 2 - 1.0
    expected = 2.0 * np.sqrt(a * a + 0.25)
    assert schatten_norm(d1.u.m - d0.u.m, 1) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(1.035276180410083, abs=1e-14)


def test_pair_support_pattern_seed31():
    rng = np.random.default_rng(31)
    t0 = random_contraction(rng, 3)
    t1 = random_contraction(rng, 3)
    d0, d1 = dilation_pair(t0, t1, 6)
    diff = d1.u.m - d0.u.m
    n, m = 3, 6
    mask = np.ones_like(diff, dtype=bool)
    for bi in (0, m - 1):
        for bj in (0, 1):
            mask[bi * n : (bi + 1) * n, bj * n : (bj + 1) * n] = False
    assert np.max(np.abs(diff[mask])) <= 1e-14


def test_pair_trace_norm_matches_julia_difference():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 4))
        m = int(rng.integers(3, 8))
        t0 = random_contraction(rng, n)
        t1 = random_contraction(rng, n)
        d0, d1 = dilation_pair(t0, t1, m)
        lhs = schatten_norm(d1.u.m - d0.u.m, 1)
        rhs = schatten_norm(julia_block(t1).m - julia_block(t0).m, 1)
        assert abs(lhs - rhs) <= 1e-10


def test_pair_dimension_mismatch():
    with pytest.raises(InvalidOrder):
        dilation_pair(Contraction(np.zeros((2, 2))), Contraction(np.zeros((3, 3))), 4)


# ---------------------------------------------------------------------------
# trace identity range


def test_trace_identity_up_to_m_minus_2():
    for seed in range(12):
        rng = np.random.default_rng(100 + seed)
        n = int(rng.integers(1, 4))
        m = int(rng.integers(3, 9))
        t0 = random_contraction(rng, n)
        t1 = random_contraction(rng, n)
        d0, d1 = dilation_pair(t0, t1, m)
        for k in range(1, m - 1):
            lhs = np.trace(np.linalg.matrix_power(d1.u.m, k)) - np.trace(
                np.linalg.matrix_power(d0.u.m, k)
            )
            rhs = np.trace(np.linalg.matrix_power(t1.m, k)) - np.trace(
                np.linalg.matrix_power(t0.m, k)
            )
            assert abs(lhs - rhs) <= 1e-9 * (1 + abs(rhs))


def test_observed_trace_degree_generic_boundary():
    # at m = 5 the wrap-around generically spoils k = 4: the scalar dilation of
    # a strict contraction satisfies trace(U^k) = trace(T^k) only for k <= 3
    t0 = Contraction(np.zeros((1, 1)))
    t1 = Contraction(np.array([[0.5]]))
    assert observed_trace_degree(t0, t1, 5) == 3
    rng = np.random.default_rng(8)
    a = random_contraction(rng, 2, scale=0.7)
    b = random_contraction(rng, 2, scale=0.7)
    assert observed_trace_degree(a, b, 6) == 4


def test_default_block_count():
    assert default_block_count(5) == 8
    assert default_block_count(0) == 3
