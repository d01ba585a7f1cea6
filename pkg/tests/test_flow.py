import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from conftest import equal_mass
from infot.core import support_from_pairs, uniform_marginals, validate_problem
from infot.flow import Dinic, FlowNetwork, IncrementalFeasibility, check_coup, max_flow
from infot.matching import check_perm
from infot.oracle import independent_feasibility


def brute_flow_value(net):
    """Enumerate integer flows on the row->col arcs."""
    bound = sum(net.supply)
    best = 0
    for flows in itertools.product(range(bound + 1), repeat=len(net.edges)):
        out = [0] * net.n
        into = [0] * net.m
        for (i, j), f in zip(net.edges, flows):
            out[i] += f
            into[j] += f
        if all(o <= s for o, s in zip(out, net.supply)) and all(
            x <= d for x, d in zip(into, net.demand)
        ):
            best = max(best, sum(flows))
    return best


def lp_flow_value(net):
    """Maximum flow as a linear program over the row->col arcs."""
    if not net.edges:
        return 0
    k = len(net.edges)
    A = np.zeros((net.n + net.m, k))
    for e, (i, j) in enumerate(net.edges):
        A[i, e] = 1
        A[net.n + j, e] = 1
    res = linprog(-np.ones(k), A_ub=A, b_ub=list(net.supply) + list(net.demand), method="highs")
    return -res.fun


def test_examples():
    full = FlowNetwork((2, 3), (5,), ((0, 0), (1, 0)))
    assert max_flow(full)[0] == 5
    assert max_flow(FlowNetwork((2, 3), (4, 1), ()))[0] == 0
    net = FlowNetwork((2, 3), (4, 1), ((0, 0), (0, 1), (1, 0)))
    assert brute_flow_value(net) == 5
    value, flows = max_flow(net)
    assert value == 5
    assert flows.edges == {(0, 0): 1, (0, 1): 1, (1, 0): 3}


def test_infinity_sentinel():
    assert FlowNetwork((2, 3), (5,), ()).infinity == 6


def assert_conserves(net, value, flows):
    assert sum(flows.supply) == value == sum(flows.demand)
    for i in range(net.n):
        out = sum(f for (r, _), f in flows.edges.items() if r == i)
        assert 0 <= flows.supply[i] <= net.supply[i]
        assert out == flows.supply[i]
    for j in range(net.m):
        into = sum(f for (_, c), f in flows.edges.items() if c == j)
        assert 0 <= flows.demand[j] <= net.demand[j]
        assert into == flows.demand[j]
    assert all(f >= 0 for f in flows.edges.values())


@pytest.mark.parametrize("seed", range(60))
def test_max_flow_matches_lp(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(1, 7, size=2)
    mask = rng.random((n, m)) < 0.4
    net = FlowNetwork(
        tuple(int(x) for x in rng.integers(0, 20, n)),
        tuple(int(x) for x in rng.integers(0, 20, m)),
        tuple((int(i), int(j)) for i, j in zip(*np.nonzero(mask))),
    )
    value, flows = max_flow(net)
    assert value == round(lp_flow_value(net))
    assert_conserves(net, value, flows)


def test_check_coup_examples():
    marg = validate_problem(np.zeros((2, 2)), ["0.5", "0.5"], ["0.5", "0.5"])
    plan = check_coup(np.eye(2, dtype=bool), marg)
    assert plan.entries == ((0, 0, Fraction(1, 2)), (1, 1, Fraction(1, 2)))

    marg = validate_problem(np.zeros((2, 2)), ["0.5", "0.5"], ["0.3", "0.7"])
    support = support_from_pairs((2, 2), [(0, 0), (0, 1), (1, 0)])
    assert not independent_feasibility(support, marg)
    assert check_coup(support, marg) is None

    marg = validate_problem([[0]], ["1"], ["1"])
    assert check_coup(np.ones((1, 1), bool), marg).entries == ((0, 0, Fraction(1)),)


def test_lp_confirms_infeasible_example():
    # rows (0.5, 0.5), cols (0.3, 0.7), arcs 00 01 10: no nonnegative solution
    A_eq = [[1, 1, 0], [0, 0, 1], [1, 0, 1], [0, 1, 0]]
    res = linprog(np.zeros(3), A_eq=A_eq, b_eq=[0.5, 0.5, 0.3, 0.7], method="highs")
    assert res.status == 2


@pytest.mark.parametrize("seed", range(80))
def test_check_coup_against_oracle(seed):
    rng = np.random.default_rng(1000 + seed)
    n, m = rng.integers(1, 6, size=2)
    a, b = equal_mass(rng, n, m, max_den=12)
    marg = validate_problem(np.zeros((n, m)), a, b)
    support = rng.random((n, m)) < rng.uniform(0.2, 0.9)
    plan = check_coup(support, marg)
    assert (plan is not None) == independent_feasibility(support, marg)
    if plan is not None:
        assert plan.row_sums(n) == list(marg.a)
        assert plan.col_sums(m) == list(marg.b)
        assert all(support[i, j] and mass > 0 for i, j, mass in plan.entries)
        bigger = support | (rng.random((n, m)) < 0.3)
        assert check_coup(bigger, marg) is not None


@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.booleans(), min_size=n, max_size=n), min_size=n, max_size=n)))
@settings(max_examples=150)
def test_uniform_square_matches_check_perm(rows):
    support = np.array(rows, dtype=bool)
    n = support.shape[0]
    assert (check_coup(support, uniform_marginals(n, n)) is None) == (check_perm(support) is None)


@pytest.mark.parametrize("seed", range(20))
def test_incremental_feasibility_sweep(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(1, 6, size=2)
    a, b = equal_mass(rng, n, m, max_den=9)
    marg = validate_problem(np.zeros((n, m)), a, b)
    state = IncrementalFeasibility(marg.scaled_a, marg.scaled_b)
    support = np.zeros((n, m), bool)
    order = [(i, j) for i in range(n) for j in range(m)]
    rng.shuffle(order)
    for i, j in order:
        state.add_edge(int(i), int(j))
        support[i, j] = True
        expected = check_coup(support, marg)
        assert state.feasible == (expected is not None)
        if state.feasible:
            plan = state.coupling(marg.scale)
            assert plan.row_sums(n) == list(marg.a) and plan.col_sums(m) == list(marg.b)


def test_float_dinic_unit_network():
    g = Dinic(4, eps=1e-12)
    g.add_arc(0, 1, 0.5)
    g.add_arc(0, 2, 0.25)
    g.add_arc(1, 3, 1.0)
    g.add_arc(2, 3, 0.1)
    assert g.max_flow(0, 3) == pytest.approx(0.6)
