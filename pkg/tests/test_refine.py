import random
from fractions import Fraction

import pytest

from tdlabel.decomposition import RootedForestDecomposition, validate_decomposition
from tdlabel.graphs import Graph
from tdlabel.refine import check_skinny, heavy_set, skinny_refine, subtree_weights


def test_heavy_set_single_node():
    assert heavy_set([None], [5], 2) == {0}
    assert heavy_set([None], [5], Fraction(3, 2)) == {0}


def test_heavy_set_path_of_eight():
    # Path, unit weights, b=2: subtree weights 8,7,6,5,4,...; kept iff > 4.
    parent = [None] + list(range(7))
    x = heavy_set(parent, [1] * 8, 2)
    assert x == {0, 1, 2, 3}


def test_heavy_set_heavy_star_center():
    # Center weight 100, ten unit leaves, b=4: only the center exceeds 110/4.
    parent = [None] + [0] * 10
    x = heavy_set(parent, [100] + [1] * 10, 4)
    assert x == {0}


def _random_tree(rng, n):
    return [None] + [rng.randrange(i) for i in range(1, n)]


def _components_below(parent, x_set):
    n = len(parent)
    comps = []
    seen = set()
    for v in range(n):
        if v in x_set or v in seen:
            continue
        stack, comp = [v], {v}
        seen.add(v)
        while stack:
            u = stack.pop()
            for w in range(n):
                if w not in comp and w not in x_set and (parent[w] == u or parent[u] == w):
                    comp.add(w)
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def test_heavy_set_lemma_properties_random():
    # Exact check of (a) connectivity+root, (b) level thinness, (c) light components.
    rng = random.Random(424242)
    for _ in range(400):
        n = rng.randint(1, 60)
        parent = _random_tree(rng, n)
        weights = [rng.randint(0, 8) for _ in range(n)]
        if sum(weights) == 0:
            weights[rng.randrange(n)] = 1
        b = Fraction(rng.randint(5, 40), rng.randint(1, 4))
        if b <= 1:
            continue
        x = heavy_set(parent, weights, b)
        total = sum(weights)
        # (a) contains the root and is connected upward.
        assert 0 in x
        for v in x:
            if parent[v] is not None:
                assert parent[v] in x
        # (b) fewer than b nodes on every level.
        depth = [0] * n
        for v in range(1, n):
            depth[v] = depth[parent[v]] + 1
        for lev in set(depth[v] for v in x):
            cnt = sum(1 for v in x if depth[v] == lev)
            assert Fraction(cnt) < b
        # (c) hanging components are light.
        sub = subtree_weights(parent, weights)
        for comp in _components_below(parent, x):
            tops = [v for v in comp if parent[v] not in comp]
            assert len(tops) == 1
            assert Fraction(sub[tops[0]]) <= Fraction(total) / b


def _random_decomposition(rng, nverts, nnodes):
    parent = _random_tree(rng, nnodes)
    bags = [set() for _ in range(nnodes)]
    for v in range(nverts):
        top = rng.randrange(nnodes)
        bags[top].add(v)
        frontier = [top]
        while frontier and rng.random() < 0.55:
            nxt = [c for c in range(nnodes) if parent[c] in frontier and rng.random() < 0.6]
            for c in nxt:
                bags[c].add(v)
            frontier = nxt
    edges = set()
    for b in bags:
        bb = sorted(b)
        for i in range(len(bb)):
            for j in range(i + 1, len(bb)):
                if rng.random() < 0.4:
                    edges.add((bb[i], bb[j]))
    g = Graph(range(nverts), edges)
    return g, RootedForestDecomposition(parent, [frozenset(b) for b in bags])


def _assert_refinement_contract(g, d, ref):
    b = ref.b
    n = g.n
    # Valid decomposition of the same graph.
    assert validate_decomposition(g, ref.outer).ok
    # Super-bags are exactly the unions of their inner bags.
    for q in range(ref.outer.nnodes):
        tree, nodes = ref.inner_tree(q)
        assert frozenset().union(*(ref.source.bags[t] for t in nodes)) == ref.outer.bags[q]
        # Inner trees are strictly skinnier than b on every level.
        counts = {}
        for x in range(tree.nnodes):
            counts[tree.depth[x]] = counts.get(tree.depth[x], 0) + 1
        assert all(Fraction(c) < b for c in counts.values())
        assert check_skinny(tree, b)
    # Outer adhesions are input adhesions (as a multiset).
    from collections import Counter

    source_adhesions = Counter(d.parent_adhesion(x) for x in range(d.nnodes) if d.parent[x] is not None)
    for q in range(ref.outer.nnodes):
        if ref.outer.parent[q] is None:
            continue
        adhesion = ref.outer.bags[q] & ref.outer.bags[ref.outer.parent[q]]
        assert source_adhesions[adhesion] > 0
        source_adhesions[adhesion] -= 1
    # Exact height bound: b ** height <= n.
    if ref.outer.nnodes:
        assert b ** ref.outer.height() <= n
    # Root super-bag contains the source root bag.
    for q in ref.outer.roots:
        tree, nodes = ref.inner_tree(q)
        src_root = nodes[0]
        assert ref.source.bags[src_root] <= ref.outer.bags[q]


def test_skinny_refine_small_graph_single_node():
    g = Graph.dense(3, [(0, 1), (1, 2)])
    d = RootedForestDecomposition([None, 0], [frozenset({0, 1}), frozenset({1, 2})])
    ref = skinny_refine(g, d, 4)
    # n=3 <= b=4: whole tree collapses into one super-bag.
    assert ref.outer.nnodes == 1
    assert ref.outer.bags[0] == frozenset({0, 1, 2})
    _assert_refinement_contract(g, d, ref)


def test_skinny_refine_caterpillar_height_bound():
    # 64 vertices along a path of bags; b=4 forces height <= 3.
    n = 64
    g = Graph.dense(n, [(i, i + 1) for i in range(n - 1)])
    parent = [None] + list(range(n - 2))
    bags = [frozenset({i, i + 1}) for i in range(n - 1)]
    d = RootedForestDecomposition(parent, bags)
    assert validate_decomposition(g, d).ok
    ref = skinny_refine(g, d, 4)
    assert Fraction(4) ** ref.outer.height() <= n
    assert ref.outer.height() <= 3
    _assert_refinement_contract(g, d, ref)


def test_skinny_refine_rejects_bad_inputs():
    g = Graph.dense(2, [(0, 1)])
    d = RootedForestDecomposition([None], [frozenset({0})])  # vertex 1 uncovered
    with pytest.raises(ValueError):
        skinny_refine(g, d, 2)
    ok = RootedForestDecomposition([None], [frozenset({0, 1})])
    with pytest.raises(ValueError):
        skinny_refine(g, ok, 1)


def test_skinny_refine_random_contract():
    rng = random.Random(99)
    for trial in range(60):
        nverts = rng.randint(1, 40)
        nnodes = rng.randint(1, 30)
        g, d = _random_decomposition(rng, nverts, nnodes)
        if not validate_decomposition(g, d).ok:
            continue
        b = rng.choice([2, 4, Fraction(5, 2), 16])
        ref = skinny_refine(g, d, b)
        _assert_refinement_contract(g, d, ref)


def test_skinny_refine_deterministic():
    rng = random.Random(5)
    g, d = _random_decomposition(rng, 25, 18)
    r1 = skinny_refine(g, d, 3)
    r2 = skinny_refine(g, d, 3)
    assert r1.outer == r2.outer
    assert r1.inner_nodes == r2.inner_nodes
