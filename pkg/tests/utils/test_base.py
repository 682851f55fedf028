import numpy as np
import pytest

from readlab.utils.base import lowest_max


class TestLowestMax:
    def test_clear_winner(self):
        assert lowest_max(np.array([[0.1, 0.7, 0.2], [3.0, -1.0, 2.0]])).tolist() == [1, 0]

    def test_exact_tie_goes_to_lowest_index(self):
        assert lowest_max(np.array([[0.2, 0.4, 0.4], [5.0, 5.0, 5.0]])).tolist() == [1, 0]

    @pytest.mark.parametrize(
        "row",
        [
            [0.1 + 0.2, 0.3],
            [0.3, 0.1 + 0.2],
            [-1234.5678, -1234.5678 + 3.55e-15 * 1234.5678],
            [-1234.5678 + 3.55e-15 * 1234.5678, -1234.5678],
        ],
    )
    def test_rounding_differences_are_ties(self, row):
        assert lowest_max(np.array([row])).tolist() == [0]

    def test_real_gaps_are_kept(self):
        assert lowest_max(np.array([[-1000.0, -1000.0 + 1e-3]])).tolist() == [1]
        assert lowest_max(np.array([[-2e300, -1e300]])).tolist() == [1]

    def test_integer_votes(self):
        votes = np.array([[3, 7, 7], [499, 500, 1]], dtype=np.int64)
        assert lowest_max(votes).tolist() == [1, 1]

    def test_all_minus_infinity(self):
        assert lowest_max(np.full((1, 3), -np.inf)).tolist() == [0]
