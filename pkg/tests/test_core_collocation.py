import numpy as np
import pytest
from numpy.testing import assert_allclose

from ocs_cli.core.collocation import (
    CollocationMatrix,
    build_elevation_matrix,
    build_slope_matrix,
    condition_numbers,
    fit_slopes,
    gram_rotation_invariance_check,
    interpolate,
)
from ocs_cli.core.exceptions import DomainError, RankDeficiencyError, SingularMatrixError, SizeMismatchError
from ocs_cli.core.patterns import NodeSet, drop_innermost, ocs_pattern, realize_nodes
from ocs_cli.core.zernike import basis_dimension, fourier_coefficients, zernike_basis_gradient


def ocs_matrix(n):
    return build_elevation_matrix(realize_nodes(ocs_pattern(n)), n)


def ocs_slope_matrix(n):
    return build_slope_matrix(drop_innermost(realize_nodes(ocs_pattern(n))), n)


def test_order_zero_matrix_is_one():
    A = build_elevation_matrix(NodeSet([0.0], [0.0]), 0)
    assert A.entries.shape == (1, 1)
    assert A.entries[0, 0] == 1.0


def test_elevation_matrix_shape_and_piston_column():
    A = ocs_matrix(10)
    assert A.entries.shape == (66, 66)
    assert A.is_square
    assert A.node_provenance == "ocs"
    assert_allclose(A.entries[:, 0], 1.0)
    assert list(A.to_frame().columns)[:3] == ["Z0", "Z1", "Z2"]


def test_elevation_matrix_size_mismatch():
    nodes = realize_nodes(ocs_pattern(4))
    with pytest.raises(SizeMismatchError):
        build_elevation_matrix(nodes, 5)


def test_slope_matrix_at_order_one():
    A = ocs_slope_matrix(1)
    assert A.entries.shape == (4, 2)
    # Z1 = 2y and Z2 = 2x
    assert_allclose(A.entries, [[0.0, 2.0], [2.0, 0.0], [0.0, 2.0], [2.0, 0.0]], atol=1e-13)
    assert list(A.to_frame().columns) == ["Z1", "Z2"]


def test_slope_matrix_validation():
    with pytest.raises(DomainError):
        build_slope_matrix(NodeSet([0.0], [0.0]), 0)
    with pytest.raises(SizeMismatchError):
        build_slope_matrix(realize_nodes(ocs_pattern(4)), 4)


def test_unknown_mode():
    with pytest.raises(DomainError):
        CollocationMatrix(np.eye(2), "phase", 1)


def test_identity_is_perfectly_conditioned():
    report = condition_numbers(CollocationMatrix(np.eye(3), "elevation", 1))
    assert report.kappa2 == pytest.approx(1.0)
    assert report.kappa_inf == pytest.approx(1.0)
    assert not report.singular


def test_singular_matrix_reports_infinite_condition():
    report = condition_numbers(CollocationMatrix(np.array([[1.0, 0.0], [0.0, 0.0]]), "elevation", 1))
    assert report.kappa2 == float("inf")
    assert report.kappa_inf == float("inf")
    assert report.singular


def test_ocs_order_10_condition_number_at_fitted_radii():
    report = condition_numbers(ocs_matrix(10))
    assert report.kappa2 == pytest.approx(4.34, rel=0.02)
    assert report.kappa_inf is not None
    assert report.kappa_inf >= 1.0
    assert set(report.to_dict()) == {"n", "mode", "kappa2", "kappa_inf", "sigma_min", "sigma_max", "pattern"}


def test_kappa_inf_skipped_above_dimension_limit():
    report = condition_numbers(ocs_matrix(10), kappa_inf_max_dim=10)
    assert report.kappa_inf is None


def test_condition_number_is_permutation_invariant():
    A = ocs_matrix(10)
    rng = np.random.default_rng(0)
    permuted = A.entries[rng.permutation(A.rows)][:, rng.permutation(A.cols)]
    kappa = condition_numbers(A).kappa2
    kappa_permuted = condition_numbers(CollocationMatrix(permuted, "elevation", 10)).kappa2
    assert kappa_permuted == pytest.approx(kappa, rel=1e-12)


def test_slope_condition_number_is_finite():
    report = condition_numbers(ocs_slope_matrix(10))
    assert report.mode == "slope"
    assert report.kappa_inf is None
    assert np.isfinite(report.kappa2)


def test_interpolation_recovers_basis_functions():
    A = ocs_matrix(10)
    for j in (0, 5, 33, 65):
        coefficients = interpolate(A, A.entries[:, j])
        expected = np.zeros(A.cols)
        expected[j] = 1.0
        assert_allclose(coefficients, expected, atol=1e-10)


def test_interpolation_of_zero_samples():
    A = ocs_matrix(8)
    assert_allclose(interpolate(A, np.zeros(A.rows)), 0.0)


def test_interpolation_is_linear():
    A = ocs_matrix(8)
    rng = np.random.default_rng(1)
    samples = rng.normal(size=A.rows)
    assert_allclose(interpolate(A, 3.5 * samples), 3.5 * interpolate(A, samples), rtol=1e-12, atol=1e-12)


def test_interpolation_matches_projection_of_a_polynomial():
    n = 8
    nodes = realize_nodes(ocs_pattern(n))
    expected = fourier_coefficients(lambda x, y: x**3 * y**2 - 0.5 * x * y + 0.25, n)
    samples = nodes.x**3 * nodes.y**2 - 0.5 * nodes.x * nodes.y + 0.25
    assert_allclose(interpolate(build_elevation_matrix(nodes, n), samples), expected, atol=1e-10)


def test_interpolation_accepts_several_right_hand_sides():
    A = ocs_matrix(6)
    coefficients = interpolate(A, A.entries)
    assert_allclose(coefficients, np.eye(A.cols), atol=1e-10)


def test_interpolation_errors():
    singular = CollocationMatrix(np.array([[1.0, 0.0], [0.0, 0.0]]), "elevation", 1)
    with pytest.raises(SingularMatrixError):
        interpolate(singular, [1.0, 1.0])
    with pytest.raises(SizeMismatchError):
        interpolate(ocs_matrix(4), np.ones(3))
    with pytest.raises(DomainError):
        interpolate(ocs_slope_matrix(4), np.ones(28))


def test_coincident_nodes_are_not_unisolvent():
    nodes = NodeSet(np.zeros(6), np.zeros(6))
    with pytest.raises(SingularMatrixError):
        interpolate(build_elevation_matrix(nodes, 2), np.ones(6))


def test_ocs_patterns_are_unisolvent():
    for n in range(1, 21):
        A = ocs_matrix(n)
        assert A.singular_values[-1] > 0.0
        assert np.isfinite(condition_numbers(A, kappa_inf_max_dim=0).kappa2)


def test_fit_slopes_recovers_basis_functions():
    n = 10
    nodes = drop_innermost(realize_nodes(ocs_pattern(n)))
    A = build_slope_matrix(nodes, n)
    gradient = zernike_basis_gradient(n, nodes.rho, nodes.theta)
    for j in (1, 4, 20, 65):
        samples = gradient[:, j, :].reshape(-1)
        expected = np.zeros(A.cols)
        expected[j - 1] = 1.0
        assert_allclose(fit_slopes(A, samples), expected, atol=1e-8)


def test_fit_slopes_of_random_field():
    A = ocs_slope_matrix(12)
    rng = np.random.default_rng(5)
    coefficients = rng.normal(size=A.cols)
    recovered = fit_slopes(A, A.entries @ coefficients)
    assert np.sqrt(np.mean((recovered - coefficients) ** 2)) < 1e-10


def test_fit_slopes_errors():
    with pytest.raises(DomainError):
        fit_slopes(ocs_matrix(4), np.ones(15))
    A = ocs_slope_matrix(4)
    with pytest.raises(SizeMismatchError):
        fit_slopes(A, np.ones(A.rows - 1))


def test_fit_slopes_detects_rank_deficiency():
    nodes = NodeSet(np.zeros(5), np.zeros(5))
    A = build_slope_matrix(nodes, 2)
    with pytest.raises(RankDeficiencyError):
        fit_slopes(A, np.ones(A.rows))


def test_outer_ring_rotation_leaves_condition_unchanged():
    assert gram_rotation_invariance_check(10, [0.0]) == 0.0
    alphas = np.linspace(0.0, 2 * np.pi / 19, 16, endpoint=False)
    assert gram_rotation_invariance_check(9, alphas) <= 1e-9


def test_basis_dimension_matches_matrix():
    for n in (3, 7):
        assert ocs_matrix(n).cols == basis_dimension(n)
