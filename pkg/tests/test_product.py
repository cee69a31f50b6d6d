import math
import random
from fractions import Fraction

import pytest

from tdlabel.bits import BitLabel
from tdlabel.graphs import Graph
from tdlabel.mls import WitnessedInstance, check_scheme_on_instance
from tdlabel.product import product_scheme
from tdlabel.product.rows import build_rows, smooth_rows, branching_parameter
from tdlabel.product.scheme import predecessor_code, transport, product_label
from tdlabel.product.intervals import interval_map
from tdlabel.witness import ProductWitness
from tdlabel.harness import gen_product_instance
from tdlabel.codes import full_alphabetic_code
from hypothesis import given, settings, strategies as st


# --- smoothing -------------------------------------------------------------

def test_smooth_rows_constant_is_fixed():
    assert smooth_rows([5, 5, 5]) == [5, 5, 5]


def test_smooth_rows_spec_example():
    assert smooth_rows([16, 1, 1, 1]) == [16, 8, 4, 2]


@settings(max_examples=300)
@given(st.lists(st.integers(min_value=1, max_value=10**6), min_size=1, max_size=100))
def test_smooth_rows_properties(ms):
    ts = smooth_rows(ms)
    assert all(t >= m for t, m in zip(ts, ms))
    assert sum(ts) <= 4 * sum(ms)
    for a, b in zip(ts, ts[1:]):
        assert Fraction(1, 2) <= Fraction(a, b) <= 2


def test_branching_parameter():
    assert branching_parameter(1) == 6
    assert branching_parameter(2) == 6
    assert branching_parameter(1 << 9, ) == 8  # 2^ceil(sqrt(9)) = 8
    assert branching_parameter((1 << 9) + 1) == 16


# --- row codes -------------------------------------------------------------

def test_predecessor_code_reconstructs_full_tree_neighbours():
    rng = random.Random(11)
    for _ in range(200):
        h = rng.randint(2, 40)
        weights = [rng.randint(1, 1000) for _ in range(h)]
        codes = full_alphabetic_code(weights)
        for i in range(1, h):
            hint = BitLabel.from_uint(len(codes[i - 1]))
            assert predecessor_code(codes[i], hint) == codes[i - 1]
        assert predecessor_code(codes[0], BitLabel.EMPTY) is None


def test_transport_splices():
    x = BitLabel.from_string("110011")
    from tdlabel.bits import frame
    tau = frame([BitLabel.from_uint(3), BitLabel.from_string("01")])
    assert transport(x, tau) == BitLabel.from_string("11001")


# --- interval map ----------------------------------------------------------

def _check_interval_invariants(host, imap, k):
    # I1 laminar, I2 edges intersect, I3 bounded point load.
    vs = host.sorted_vertices()
    for i, v in enumerate(vs):
        a, b = imap.intervals[v]
        assert a < b
        for w in vs[i + 1 :]:
            c, d = imap.intervals[w]
            nested = (a <= c and d <= b) or (c <= a and b <= d)
            disjoint = b <= c or d <= a
            assert nested or disjoint
    for u, v in host.edges:
        assert imap.intersects(u, v)
        assert imap.colours[u] != imap.colours[v]
    load = imap.max_point_load()
    assert load <= (k + 1) * (imap.max_depth + 1)
    assert max(imap.colours.values(), default=0) == load


def test_interval_map_single_vertex():
    host = Graph.dense(1)
    imap = interval_map(host, (0,), 0)
    assert imap.intervals[0] == (Fraction(0), Fraction(1))
    assert imap.colours[0] == 1


def test_interval_map_path():
    host = Graph.dense(4, [(0, 1), (1, 2), (2, 3)])
    imap = interval_map(host, (0, 1, 2, 3), 1)
    _check_interval_invariants(host, imap, 1)
    assert imap.max_depth <= math.log(4, 1.5) + 2


def test_interval_map_random_ktrees():
    from tdlabel.harness import gen_ktree

    rng = random.Random(3)
    for _ in range(25):
        k = rng.randint(0, 3)
        n = rng.randint(k + 1, 60)
        host, order = gen_ktree(n, k, rng) if k else (Graph.dense(n), tuple(range(n)))
        imap = interval_map(host, order, k)
        _check_interval_invariants(host, imap, k)


def test_interval_map_rejects_bad_order():
    host = Graph.dense(3, [(0, 1), (0, 2), (1, 2)])
    with pytest.raises(ValueError):
        interval_map(host, (0, 1, 2), 1)  # K3 needs k >= 2


# --- full scheme, small hand cases ----------------------------------------

def _manual_instance(host_edges, nh, k, h, placement, g_drop=(), weights=None):
    host = Graph.dense(nh, host_edges)
    order = tuple(range(nh - 1, -1, -1))
    cells = {v: c for v, c in enumerate(placement)}
    n = len(placement)
    plus = []
    for u in range(n):
        for v in range(u + 1, n):
            (hu, ru), (hv, rv) = cells[u], cells[v]
            if abs(ru - rv) <= 1 and (hu == hv or host.has_edge(hu, hv)) and cells[u] != cells[v]:
                plus.append((u, v))
    gplus = Graph.dense(n, plus)
    g = Graph.dense(n, [e for e in plus if e not in set(g_drop)])
    witness = ProductWitness(
        host=host,
        elim_order=order,
        k=k,
        h=h,
        placement=tuple((v, hv, row) for v, (hv, row) in cells.items()),
    )
    wts = {v: Fraction(weights[v]) if weights else Fraction(1) for v in range(n)}
    return WitnessedInstance(gplus=gplus, g=g, weights=wts, witness=witness)


def test_single_vertex():
    inst = _manual_instance([], 1, 0, 1, [(0, 1)])
    handle = product_scheme(0)
    res = check_scheme_on_instance(handle, inst, [frozenset({0})])
    assert res.passed, res.failures


def test_k2_times_p2_full():
    # Full strong product of K2 and P2: 4 vertices, all 6 pairs adjacent
    # except the diagonal pair rule; exercised against the oracle.
    inst = _manual_instance([(0, 1)], 2, 1, 2, [(0, 1), (1, 1), (0, 2), (1, 2)])
    handle = product_scheme(1)
    cliques = [frozenset({0, 1}), frozenset({0, 1, 2, 3})]
    res = check_scheme_on_instance(handle, inst, cliques)
    assert res.passed, res.failures


def test_vertical_path_only():
    # One host vertex, tall path: only vertical edges.
    inst = _manual_instance([], 1, 0, 5, [(0, r) for r in range(1, 6)])
    handle = product_scheme(0)
    res = check_scheme_on_instance(handle, inst, [frozenset({2, 3})])
    assert res.passed, res.failures


def test_spanning_subgraph_drops_edges():
    inst = _manual_instance(
        [(0, 1)], 2, 1, 2, [(0, 1), (1, 1), (0, 2), (1, 2)], g_drop=[(0, 1), (1, 2)]
    )
    handle = product_scheme(1)
    res = check_scheme_on_instance(handle, inst, [frozenset({0, 1, 2, 3})])
    assert res.passed, res.failures


def test_weighted_instance():
    inst = _manual_instance(
        [(0, 1)], 2, 1, 2, [(0, 1), (1, 1), (0, 2), (1, 2)],
        weights=[1, 100, 3, 7],
    )
    res = check_scheme_on_instance(product_scheme(1), inst, [frozenset({1, 3})])
    assert res.passed, res.failures


def test_empty_graph():
    lab = product_label(
        WitnessedInstance(
            gplus=Graph.dense(0), g=Graph.dense(0), weights={},
            witness=ProductWitness(host=Graph.dense(1), elim_order=(0,), k=0, h=1, placement=()),
        )
    )
    assert lab.vertex_labels == {}


# --- randomized instances against the oracle -------------------------------

@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_random_product_instances(seed):
    rng = random.Random(seed)
    n = rng.randint(5, 60)
    k = rng.randint(0, 3)
    h = rng.randint(1, 8)
    inst, cliques = gen_product_instance(n, k, h, rng.choice([0.0, 0.3, 0.7]), rng)
    res = check_scheme_on_instance(product_scheme(k), inst, cliques)
    assert res.passed, res.failures[:5]


def test_total_delta_bound_is_asserted():
    # build_rows raises if the (2k+3) total-delta bound ever fails; run a
    # spread of instances to exercise the assertion path.
    rng = random.Random(77)
    for _ in range(10):
        n = rng.randint(2, 50)
        k = rng.randint(0, 3)
        h = rng.randint(1, 6)
        inst, _ = gen_product_instance(n, k, h, 0.2, rng)
        struct = build_rows(inst)
        total_weight = sum(struct.cell_weight.values())
        assert struct.total_delta <= (2 * k + 3) * total_weight


def test_delta_dominates_xset_weights():
    rng = random.Random(123)
    inst, _ = gen_product_instance(30, 2, 4, 0.3, rng)
    struct = build_rows(inst)
    for cell, w in struct.cell_weight.items():
        hv, row = cell
        for u in struct.x_set(hv, row):
            assert struct.delta[(u, row)] >= w


def test_budget_slack_within_configured_allowance():
    handle = product_scheme(2)
    rng = random.Random(9)
    for _ in range(5):
        inst, cliques = gen_product_instance(rng.randint(10, 80), 2, rng.randint(1, 6), 0.3, rng)
        res = check_scheme_on_instance(handle, inst, cliques)
        assert res.passed
        n = inst.n
        assert res.report.max_vertex_slack <= handle.g1(n)
        assert res.report.max_clique_slack <= handle.g3(n)
        assert res.report.max_kappa_bits <= handle.g2(n)
