"""
距离度量单元测试
"""

import numpy as np
import pytest

from drama.base.error_exceptions import (
    LengthMismatchError,
    NegativeQuadraticFormError,
    NonPositiveScaleError,
    NumericalError,
    ZeroVarianceVectorError,
)
from drama.service.metrics.distances import (
    SIGMA_FLOOR,
    MetricContext,
    bray_curtis,
    canberra,
    chebyshev,
    correlation_distance,
    distance,
    distance_matrix,
    feature_sigma,
    mahalanobis,
    minkowski,
    weighted_minkowski,
)
from drama.service.metrics.metric_kind import MetricKind


def _context(rng, p=4):
    a = rng.normal(size=(p, p))
    return MetricContext(
        sigma=rng.uniform(0.5, 2.0, size=p),
        inv_covariance=a @ a.T + np.eye(p),
    )


@pytest.mark.unit
class TestWorkedExamples:
    def test_minkowski(self):
        assert minkowski([0, 0], [3, 4], 2) == pytest.approx(5.0)
        assert minkowski([1, 2], [4, 6], 1) == pytest.approx(7.0)
        assert minkowski([0, 0], [1, 1], 4) == pytest.approx(2 ** 0.25)

    def test_weighted_minkowski(self):
        assert weighted_minkowski([0, 0], [2, 6], 2, [2, 3]) == pytest.approx(
            np.sqrt(5.0)
        )

    def test_weighted_minkowski_bad_sigma(self):
        with pytest.raises(NonPositiveScaleError):
            weighted_minkowski([0, 0], [1, 1], 2, [1.0, 0.0])

    def test_bray_curtis(self):
        assert bray_curtis([1, 0], [0, 1]) == pytest.approx(1.0)
        assert bray_curtis([0, 0], [0, 0]) == 0.0
        assert bray_curtis([1, 2], [1, 2]) == 0.0

    def test_bray_curtis_zero_denominator_nonzero_numerator(self):
        with pytest.raises(NumericalError):
            bray_curtis([1, -1], [-1, 1])

    def test_bray_curtis_matrix_raises_on_nonzero_over_zero(self):
        """批量路径同样对 x/0 抛错，0/0 行仍为 0"""
        prototypes = np.array([[-1.0, 1.0]])
        with pytest.raises(NumericalError):
            distance_matrix(MetricKind.BRAY_CURTIS, np.array([[1.0, -1.0]]), prototypes)
        zeros = distance_matrix(
            MetricKind.BRAY_CURTIS, np.zeros((2, 2)), np.zeros((1, 2))
        )
        np.testing.assert_array_equal(zeros, np.zeros((2, 1)))

    def test_chebyshev(self):
        assert chebyshev([1, 5], [2, 2]) == 3.0

    def test_canberra(self):
        assert canberra([1, 0, 2], [0, 0, 2]) == pytest.approx(1.0)
        assert canberra([1.5, -2.0, 3.0], [-1.5, 2.0, -3.0]) == pytest.approx(3.0)

    def test_correlation(self):
        u = np.array([1.0, 4.0, 2.0, 8.0])
        assert correlation_distance(u, 2 * u + 3) == pytest.approx(0.0, abs=1e-12)
        assert correlation_distance([1, 2, 3], [3, 2, 1]) == pytest.approx(
            2.0, abs=1e-12
        )

    def test_correlation_constant(self):
        with pytest.raises(ZeroVarianceVectorError):
            correlation_distance([1, 1, 1], [1, 2, 3])

    def test_mahalanobis(self):
        assert mahalanobis([1, 0], [0, 0], np.diag([4.0, 1.0])) == pytest.approx(2.0)
        assert mahalanobis([3, 1], [3, 1], np.eye(2)) == 0.0

    def test_mahalanobis_negative_quadratic(self):
        with pytest.raises(NegativeQuadraticFormError):
            mahalanobis([1, 0], [0, 0], np.diag([-1.0, 1.0]))

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            minkowski([1, 2], [1, 2, 3], 1)


@pytest.mark.unit
class TestProperties:
    def test_mahalanobis_identity_matches_l2(self, rng):
        for _ in range(100):
            u, v = rng.normal(size=(2, 6))
            assert mahalanobis(u, v, np.eye(6)) == pytest.approx(
                minkowski(u, v, 2), abs=1e-12
            )

    @pytest.mark.parametrize("kind", list(MetricKind))
    def test_symmetry_and_identity(self, rng, kind):
        context = _context(rng)
        for _ in range(200):
            u, v = rng.normal(size=(2, 4))
            d_uv = distance(kind, u, v, context)
            assert d_uv >= 0.0
            assert d_uv == pytest.approx(distance(kind, v, u, context), abs=1e-12)
            assert distance(kind, u, u, context) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("p", [1, 2])
    def test_triangle_inequality(self, rng, p):
        for _ in range(1000):
            a, b, c = rng.normal(size=(3, 5))
            assert minkowski(a, c, p) <= minkowski(a, b, p) + minkowski(b, c, p) + 1e-10

    def test_chebyshev_triangle_and_ordering(self, rng):
        for _ in range(1000):
            a, b, c = rng.normal(size=(3, 5))
            assert chebyshev(a, c) <= chebyshev(a, b) + chebyshev(b, c) + 1e-10
            assert chebyshev(a, b) <= minkowski(a, b, 1) + 1e-12

    @pytest.mark.parametrize("p", [1, 2, 4])
    def test_scale_equivariance(self, rng, p):
        u, v = rng.normal(size=(2, 7))
        assert minkowski(-3.0 * u, -3.0 * v, p) == pytest.approx(
            3.0 * minkowski(u, v, p)
        )


@pytest.mark.unit
class TestBatch:
    @pytest.mark.parametrize("kind", list(MetricKind))
    def test_distance_matrix_matches_pairwise(self, rng, kind):
        points = rng.normal(size=(9, 4))
        prototypes = rng.normal(size=(3, 4))
        contexts = [_context(rng) for _ in range(3)]

        matrix = distance_matrix(kind, points, prototypes, contexts)
        assert matrix.shape == (9, 3)
        for i in range(9):
            for j in range(3):
                expected = distance(kind, points[i], prototypes[j], contexts[j])
                assert matrix[i, j] == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_context_count_mismatch(self, rng):
        with pytest.raises(LengthMismatchError):
            distance_matrix(
                MetricKind.L2, rng.normal(size=(4, 2)), rng.normal(size=(2, 2)), [None]
            )

    def test_feature_sigma_floor(self):
        sigma = feature_sigma(np.array([[1.0, 0.0], [1.0, 2.0]]))
        assert sigma[0] == SIGMA_FLOOR
        assert sigma[1] == pytest.approx(1.0)

    def test_weighted_requires_sigma(self):
        with pytest.raises(ValueError):
            distance(MetricKind.WL2, [1, 2], [2, 3])

    def test_asymmetric_inverse_rejected(self):
        with pytest.raises(NumericalError):
            MetricContext(inv_covariance=np.array([[1.0, 0.5], [0.0, 1.0]]))


@pytest.mark.unit
class TestMetricKind:
    def test_from_string(self):
        assert MetricKind.from_string("Cityblock") is MetricKind.L1
        assert MetricKind.from_string(" braycurtis ") is MetricKind.BRAY_CURTIS
        with pytest.raises(ValueError):
            MetricKind.from_string("cosine")

    def test_context_needs(self):
        assert MetricKind.WL4.needs_sigma
        assert MetricKind.MAHALANOBIS.needs_covariance
        assert not MetricKind.L1.needs_sigma
