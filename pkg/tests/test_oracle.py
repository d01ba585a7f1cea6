import numpy as np
import pytest

from infot.core import TooLarge, support_from_pairs, uniform_marginals, validate_problem
from infot.oracle import brute_force_monge, independent_feasibility, threshold_scan


def test_brute_force_monge_examples():
    assert brute_force_monge([[5, 1], [2, 9]]) == 2
    assert brute_force_monge([[3.5]]) == 3.5
    C = np.ones((3, 3)) - np.eye(3)
    assert brute_force_monge(C) == 0


def test_brute_force_monge_guard():
    with pytest.raises(TooLarge):
        brute_force_monge(np.zeros((10, 10)))


def test_threshold_scan_examples():
    assert threshold_scan([[6]], validate_problem([[6]], ["1"], ["1"])) == 6
    C = [[1, 2], [3, 4]]
    assert threshold_scan(C, validate_problem(C, ["0.5", "0.5"], ["0.3", "0.7"])) == 4
    assert threshold_scan([[5, 1], [2, 9]], uniform_marginals(2, 2)) == 2


def test_independent_feasibility_examples():
    marg = uniform_marginals(3, 3)
    assert independent_feasibility(np.eye(3, dtype=bool), marg)
    support = np.ones((3, 3), bool)
    support[1] = False
    assert not independent_feasibility(support, marg)
    marg = validate_problem(np.zeros((2, 2)), ["0.5", "0.5"], ["0.3", "0.7"])
    assert not independent_feasibility(support_from_pairs((2, 2), [(0, 0), (0, 1), (1, 0)]), marg)


def test_independent_feasibility_uses_smaller_side():
    marg = uniform_marginals(1, 25)
    assert independent_feasibility(np.ones((1, 25), bool), marg)
    with pytest.raises(TooLarge):
        independent_feasibility(np.ones((21, 21), bool), uniform_marginals(21, 21))
