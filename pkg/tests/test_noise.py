import numpy as np
import pytest
from hypothesis import given, strategies as st

from gklsnoise.generator import GklsGenerator, KossakowskiForm
from gklsnoise.noise import (
    ComplexNoiseModel,
    NotPositiveSemidefinite,
    box_muller,
    check_picinbono,
    make_rng,
    minimal_reduction,
    model_from_coeffs,
    sample_complex,
    sample_wiener,
    wiener_path,
)
from gklsnoise.operators import SIGMA_3, SIGMA_MINUS, SIGMA_PLUS, expand_in_basis, gell_mann_basis

seeds = st.integers(0, 2**32 - 1)

# recorded once from PCG64 + Box-Muller and cross-checked against a hand-written transform
GOLDEN_SEED_2017 = [-0.23291268508140198, -0.051699820530003604, -0.17615422307810621]
GOLDEN_SEED_2017_CHILD_5 = [-0.2560123536426754, -0.6448994302775733]


def test_sample_wiener_golden_values():
    w = sample_wiener(3, 0.01, make_rng(2017))
    assert w.n_channels == 3 and w.dt == 0.01
    np.testing.assert_array_equal(w.increments, GOLDEN_SEED_2017)
    np.testing.assert_array_equal(sample_wiener(2, 1.0, make_rng(2017, 5)).increments, GOLDEN_SEED_2017_CHILD_5)


def test_box_muller_matches_hand_transform():
    u = np.random.Generator(np.random.PCG64(np.random.SeedSequence(7))).random(4)
    r = np.sqrt(-2 * np.log(1 - u[[0, 2]]))
    expected = [r[0] * np.cos(2 * np.pi * u[1]), r[0] * np.sin(2 * np.pi * u[1]), r[1] * np.cos(2 * np.pi * u[3])]
    np.testing.assert_allclose(box_muller(make_rng(7), 3), expected, rtol=1e-15)


def test_sample_wiener_rejects_nonpositive_dt():
    with pytest.raises(ValueError):
        sample_wiener(3, 0.0, make_rng(1))
    with pytest.raises(ValueError):
        wiener_path(4, 3, -1.0, make_rng(1))


@given(seeds, st.integers(1, 5), st.integers(1, 7))
def test_wiener_path_equals_sequential_draws(seed, n_channels, n_steps):
    path = wiener_path(n_steps, n_channels, 0.1, make_rng(seed))
    rng = make_rng(seed)
    seq = np.array([sample_wiener(n_channels, 0.1, rng).increments for _ in range(n_steps)])
    np.testing.assert_array_equal(path, seq)


def test_streams_reproducible_and_distinct():
    a = sample_wiener(4, 1.0, make_rng(3, 0)).increments
    np.testing.assert_array_equal(a, sample_wiener(4, 1.0, make_rng(3, 0)).increments)
    assert not np.allclose(a, sample_wiener(4, 1.0, make_rng(3, 1)).increments)
    assert not np.allclose(a, sample_wiener(4, 1.0, make_rng(4, 0)).increments)


def test_wiener_statistics():
    n = 10**6
    x = wiener_path(n, 1, 1.0, make_rng(99))[:, 0]
    assert abs(x.mean()) < 5e-3
    assert abs(x.var() - 1.0) < 5 * np.sqrt(2 / n)
    y = wiener_path(n // 4, 4, 0.25, make_rng(100))
    cov = y.T @ y / y.shape[0]
    assert np.abs(cov - 0.25 * np.eye(4)).max() < 5 * 0.25 * np.sqrt(2 / y.shape[0])


def test_model_from_coeffs_examples():
    m = model_from_coeffs(np.eye(3))
    np.testing.assert_array_equal(m.covariance, np.eye(3))
    np.testing.assert_array_equal(m.relation, np.eye(3))
    gamma = 0.3
    m = model_from_coeffs([[0, 0, np.sqrt(gamma)]])
    np.testing.assert_allclose(m.covariance, np.diag([0, 0, gamma]), atol=1e-16)
    np.testing.assert_allclose(m.relation, np.diag([0, 0, gamma]), atol=1e-16)


def thermal_coeffs(gp=1.0, g=0.2, n=1.0):
    Ls = [np.sqrt(gp * (1 + n)) * SIGMA_MINUS, np.sqrt(gp * n) * SIGMA_PLUS, np.sqrt(g) * SIGMA_3]
    basis = gell_mann_basis(2)
    return np.array([expand_in_basis(L, basis) for L in Ls])


def test_thermal_coefficients_in_pauli_basis():
    # sigma_-+ = (sigma_1 -+ i sigma_2) / 2 written out by hand
    gp, g, n = 1.0, 0.2, 1.0
    cm, cp = np.sqrt(gp * (1 + n)), np.sqrt(gp * n)
    c_ref = np.array([[cm / 2, -1j * cm / 2, 0], [cp / 2, 1j * cp / 2, 0], [0, 0, np.sqrt(g)]])
    c = thermal_coeffs(gp, g, n)
    np.testing.assert_allclose(c, c_ref, atol=1e-15)
    a = model_from_coeffs(c).covariance
    assert a[0, 1].real == pytest.approx(0, abs=1e-15)
    assert a[0, 1].imag == pytest.approx((cm**2 - cp**2) / 4 * -1, abs=1e-15)
    np.testing.assert_allclose(a[1, 0], a[0, 1].conj())


def test_picinbono_examples():
    assert check_picinbono(np.eye(2), np.zeros((2, 2)))
    assert not check_picinbono(np.eye(2), 2 * np.eye(2))
    assert check_picinbono(np.eye(2), np.eye(2))
    with pytest.raises(ValueError):
        check_picinbono(np.eye(2), np.eye(3))


def test_picinbono_rejects_relation_outside_support():
    a = np.diag([1.0, 0.0])
    b = np.array([[0, 0], [0, 0.5]])
    assert not check_picinbono(a, b)


def test_picinbono_matches_augmented_covariance():
    rng = np.random.default_rng(4)
    verdicts = []
    for _ in range(200):
        m = int(rng.integers(1, 5))
        A = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        a = A @ A.conj().T
        B = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
        b = rng.uniform(0.1, 2.0) * (B + B.T) / 2
        aug = np.block([[a, b.conj()], [b, a.conj()]])
        psd = np.linalg.eigvalsh(aug).min() >= -1e-9 * max(1, np.linalg.norm(aug))
        assert check_picinbono(a, b) == psd
        verdicts.append(psd)
    assert 20 < sum(verdicts) < 180


@given(seeds)
def test_models_from_coeffs_always_admissible(seed):
    rng = np.random.default_rng(seed)
    n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    c = rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))
    assert check_picinbono(model_from_coeffs(c).covariance, model_from_coeffs(c).relation)


def test_minimal_reduction_examples():
    red = minimal_reduction(np.diag([2.0, 0.5]))
    np.testing.assert_allclose(red.unitary, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(red.chosen_b, np.diag([2.0, 0.5]), atol=1e-15)
    red = minimal_reduction(np.diag([0.5, 2.0]))
    np.testing.assert_allclose(np.abs(red.unitary), [[0, 1], [1, 0]], atol=1e-15)
    assert red.gammas.tolist() == [2.0, 0.5]

    red = minimal_reduction(np.zeros((3, 3)))
    assert red.active_count == 0 and not red.gammas.any()

    v = np.array([1 + 1j, 0.5, -2j])
    red = minimal_reduction(np.outer(v.conj(), v))
    assert red.active_count == 1
    assert red.gammas[0] == pytest.approx(np.vdot(v, v).real)


def test_minimal_reduction_rejects_non_psd():
    with pytest.raises(NotPositiveSemidefinite) as info:
        minimal_reduction(np.diag([1.0, -0.25]))
    assert info.value.eigenvalue == pytest.approx(-0.25)
    with pytest.raises(ValueError):
        minimal_reduction(np.array([[1, 1], [0, 1]]))


def test_minimal_reduction_invariants():
    rng = np.random.default_rng(5)
    for _ in range(50):
        m = int(rng.integers(2, 9))
        r = int(rng.integers(1, m + 1))
        c = rng.normal(size=(r, m)) + 1j * rng.normal(size=(r, m))
        a = c.conj().T @ c
        red = minimal_reduction(a)
        U, g = red.unitary, red.gammas
        np.testing.assert_allclose(U @ U.conj().T, np.eye(m), atol=1e-12)
        assert np.all(np.diff(g) <= 0)
        assert np.abs(np.einsum("k,ki,kj->ij", g, U.conj(), U) - a).max() <= 1e-10 * max(1, np.abs(a).max())
        np.testing.assert_allclose(red.chosen_b, np.einsum("k,ki,kj->ij", g, U, U), atol=1e-12)
        assert red.active_count == np.linalg.matrix_rank(a) == r
        assert red.active_count < 2 * m
        model = red.as_model()
        assert check_picinbono(model.covariance, model.relation)
        dZ = sample_complex(model, 0.01, make_rng(int(rng.integers(1 << 30))))
        rotated = red.rotated(dZ)
        np.testing.assert_allclose(rotated.imag, 0, atol=1e-12)
        np.testing.assert_allclose(rotated[red.active_count:], 0, atol=1e-12)


def test_minimal_reduction_generator_equivalence():
    # the chosen relation matrix leaves the dissipator unchanged: rebuild from the rotated channels
    basis = gell_mann_basis(2)
    c = thermal_coeffs()
    red = minimal_reduction(model_from_coeffs(c).covariance)
    assert red.active_count == 3
    K = KossakowskiForm(tuple(basis), model_from_coeffs(c).covariance)
    Ls = [np.sqrt(g) * sum(red.unitary[k, j] * basis[j] for j in range(3)) for k, g in enumerate(red.gammas)]
    np.testing.assert_allclose(GklsGenerator.dissipative(Ls).dissipator_superop, K.superop(), atol=1e-13)


def test_sample_complex_examples():
    model = model_from_coeffs(np.eye(3))
    dZ = sample_complex(model, 0.01, make_rng(2017))
    np.testing.assert_array_equal(dZ.imag, 0)
    np.testing.assert_allclose(dZ.real, GOLDEN_SEED_2017, rtol=1e-15)
    zero = model_from_coeffs(np.zeros((2, 3)))
    np.testing.assert_array_equal(sample_complex(zero, 0.1, make_rng(1)), 0)


def test_sample_complex_is_c_transpose_dw():
    rng = np.random.default_rng(6)
    c = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    dZ = sample_complex(model_from_coeffs(c), 0.5, make_rng(11))
    dW = sample_wiener(2, 0.5, make_rng(11)).increments
    np.testing.assert_allclose(dZ, c.T @ dW, atol=1e-15)


def test_sample_complex_statistics():
    rng = np.random.default_rng(7)
    c = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    model = model_from_coeffs(c)
    n, dt = 10**6, 0.1
    dZ = wiener_path(n, 3, dt, make_rng(12)) @ c
    a_hat = dZ.conj().T @ dZ / n
    b_hat = dZ.T @ dZ / n
    diag = np.sqrt(np.outer(np.diag(model.covariance).real, np.diag(model.covariance).real))
    bound = 5 * diag * dt / np.sqrt(n)
    assert np.all(np.abs(a_hat - model.covariance * dt) < bound)
    assert np.all(np.abs(b_hat - model.relation * dt) < bound)


def test_sample_complex_requires_coefficients():
    with pytest.raises(ValueError):
        sample_complex(ComplexNoiseModel(np.eye(2), np.eye(2)), 0.1, make_rng(1))
