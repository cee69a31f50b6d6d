"""Deterministic instance generators with structure witnesses.

Every generator takes a seed (or an already-seeded Random) and produces
byte-reproducible instances: identical seeds give identical graphs, weights,
witnesses, and requested cliques.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..decomposition import RootedForestDecomposition
from ..graphs import Graph
from ..mls import WitnessedInstance
from ..witness import ApexWitness, ProductWitness, TreeWitness, UnionWitness, Witness


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def gen_ktree(n: int, k: int, seed) -> Tuple[Graph, Tuple[int, ...]]:
    """Random k-tree on n vertices plus a certifying elimination order.

    Grows from K_(k+1) by attaching each new vertex to a uniformly random
    existing k-clique; the reverse construction order eliminates each vertex
    onto exactly its attachment clique.
    """
    if n < k + 1:
        raise ValueError("a k-tree needs at least k+1 vertices")
    rng = _rng(seed)
    edges = [(i, j) for i in range(k + 1) for j in range(i + 1, k + 1)]
    cliques: List[Tuple[int, ...]] = []
    base = tuple(range(k + 1))
    for drop in range(k + 1):
        cliques.append(tuple(v for v in base if v != drop))
    for v in range(k + 1, n):
        attach = cliques[rng.randrange(len(cliques))]
        for u in attach:
            edges.append((u, v))
        for drop in range(k):
            cliques.append(tuple(sorted(set(attach) - {attach[drop]} | {v})))
    order = tuple(range(n - 1, -1, -1))
    return Graph.dense(n, edges), order


def _strong_product_adjacent(host: Graph, a: Tuple[int, int], b: Tuple[int, int]) -> bool:
    (hu, ru), (hv, rv) = a, b
    if a == b or abs(ru - rv) > 1:
        return False
    return hu == hv or host.has_edge(hu, hv)


def sample_clique(
    gplus: Graph,
    rng: random.Random,
    around: Optional[int] = None,
    candidates: Optional[Sequence[int]] = None,
    max_size: Optional[int] = None,
) -> frozenset:
    """A random maximal-ish clique grown greedily inside gplus."""
    pool = sorted(candidates) if candidates is not None else gplus.sorted_vertices()
    if not pool:
        return frozenset()
    v = around if around is not None else pool[rng.randrange(len(pool))]
    members = [v]
    near = [w for w in pool if w != v and gplus.has_edge(v, w)]
    rng.shuffle(near)
    for w in near:
        if max_size is not None and len(members) >= max_size:
            break
        if all(gplus.has_edge(w, u) for u in members):
            members.append(w)
    return frozenset(members)


def _sample_weights(rng: random.Random, vertices, mode: str) -> Dict[int, Fraction]:
    n = max(1, len(vertices))
    if mode == "unit":
        return {v: Fraction(1) for v in vertices}
    return {v: Fraction(rng.randint(1, n * n)) for v in vertices}


def gen_product_instance(
    n: int,
    k: int,
    h: int,
    edge_prob: float,
    seed,
    weights: str = "random",
    n_cliques: int = 6,
    id_base: int = 0,
) -> Tuple[WitnessedInstance, List[frozenset]]:
    """Random subgraph of (random k-tree) x P_h with a product witness.

    ``edge_prob`` is the probability of dropping each supergraph edge from
    the spanning subgraph.  ``id_base`` offsets vertex ids so instances can
    be glued disjointly.
    """
    if n < 1 or h < 1:
        raise ValueError("need at least one vertex and one row")
    rng = _rng(seed)
    n_host = max(k + 1, -(-n // h) + k + 1)
    host, order = gen_ktree(n_host, k, rng)
    grid = [(hv, row) for hv in range(n_host) for row in range(1, h + 1)]
    cells = rng.sample(grid, n)
    cells.sort()
    vertices = list(range(id_base, id_base + n))
    placement = tuple((v, hv, row) for v, (hv, row) in zip(vertices, cells))
    cell_of = {v: c for v, c in zip(vertices, cells)}
    plus_edges = []
    for i, u in enumerate(vertices):
        for v in vertices[i + 1 :]:
            if _strong_product_adjacent(host, cell_of[u], cell_of[v]):
                plus_edges.append((u, v))
    gplus = Graph(vertices, plus_edges)
    g_edges = [e for e in plus_edges if rng.random() >= edge_prob]
    g = Graph(vertices, g_edges)
    witness = ProductWitness(host=host, elim_order=order, k=k, h=h, placement=placement)
    inst = WitnessedInstance(
        gplus=gplus, g=g, weights=_sample_weights(rng, vertices, weights), witness=witness
    )
    cliques: Set[frozenset] = set()
    for _ in range(n_cliques * 3):
        if len(cliques) >= n_cliques:
            break
        c = sample_clique(gplus, rng)
        if c:
            cliques.add(c)
    return inst, sorted(cliques, key=sorted)


def gen_apex_instance(
    n: int,
    k: int,
    h: int,
    a: int,
    edge_prob: float,
    seed,
    weights: str = "random",
    n_cliques: int = 6,
    id_base: int = 0,
) -> Tuple[WitnessedInstance, List[frozenset]]:
    """A product instance plus at most ``a`` apex vertices with free edges."""
    rng = _rng(seed)
    base, _ = gen_product_instance(
        n, k, h, edge_prob, rng, weights=weights, n_cliques=0, id_base=id_base
    )
    apexes = list(range(id_base + n, id_base + n + a))
    verts = base.g.sorted_vertices() + apexes
    plus_edges = list(base.gplus.edges)
    for i, u in enumerate(apexes):
        for v in base.g.sorted_vertices():
            if rng.random() < 0.4:
                plus_edges.append((v, u))
        for w in apexes[i + 1 :]:
            if rng.random() < 0.5:
                plus_edges.append((u, w))
    gplus = Graph(verts, plus_edges)
    g_edges = [
        e
        for e in plus_edges
        if e in base.g.edges or (e not in base.gplus.edges and rng.random() >= edge_prob)
    ]
    g = Graph(verts, g_edges)
    wts = dict(base.weights)
    wts.update(_sample_weights(rng, apexes, weights))
    inst = WitnessedInstance(
        gplus=gplus,
        g=g,
        weights=wts,
        witness=ApexWitness(apexes=tuple(apexes), inner=base.witness),
    )
    cliques: Set[frozenset] = set()
    for _ in range(n_cliques * 3):
        if len(cliques) >= n_cliques:
            break
        c = sample_clique(gplus, rng)
        if c:
            cliques.add(c)
    return inst, sorted(cliques, key=sorted)


def gen_union_instance(
    m: int,
    n_each: int,
    k: int,
    h: int,
    edge_prob: float,
    seed,
    weights: str = "random",
    n_cliques: int = 6,
    apexes: int = 0,
) -> Tuple[WitnessedInstance, List[frozenset]]:
    """Disjoint union of m product (or apex) instances."""
    rng = _rng(seed)
    pieces = []
    offset = 0
    for _ in range(m):
        if apexes:
            inst, _ = gen_apex_instance(
                n_each, k, h, apexes, edge_prob, rng, weights=weights, n_cliques=0, id_base=offset
            )
        else:
            inst, _ = gen_product_instance(
                n_each, k, h, edge_prob, rng, weights=weights, n_cliques=0, id_base=offset
            )
        offset += inst.n
        pieces.append(inst)
    verts = [v for p in pieces for v in p.g.sorted_vertices()]
    gplus = Graph(verts, [e for p in pieces for e in p.gplus.edges])
    g = Graph(verts, [e for p in pieces for e in p.g.edges])
    wts = {v: w for p in pieces for v, w in p.weights.items()}
    witness = UnionWitness(
        pieces=tuple((p.g.vertices, p.witness) for p in pieces)
    )
    inst = WitnessedInstance(gplus=gplus, g=g, weights=wts, witness=witness)
    cliques: Set[frozenset] = set()
    for _ in range(n_cliques * 3):
        if len(cliques) >= n_cliques:
            break
        c = sample_clique(gplus, rng)
        if c:
            cliques.add(c)
    return inst, sorted(cliques, key=sorted)


def gen_decomposed_instance(
    n: int,
    k_adh: int,
    torso_kind: str,
    seed,
    torso_k: int = 2,
    torso_h: int = 4,
    edge_prob: float = 0.25,
    weights: str = "random",
    n_cliques: int = 8,
    apexes: int = 2,
) -> Tuple[WitnessedInstance, List[frozenset]]:
    """A graph glued along adhesion cliques of a random tree of product torsos.

    Each node of a random rooted tree carries a freshly generated product (or
    apex-over-product) instance; a clique of at most k_adh vertices of the
    parent torso is identified with a clique of the child torso.  The global
    supergraph is the union of the torso supergraphs, so each torso of the
    tree-decomposition is exactly the generated witnessed graph.
    """
    if torso_kind not in ("product", "product+apex"):
        raise ValueError("torso_kind must be 'product' or 'product+apex'")
    rng = _rng(seed)
    bag_target = max(4, torso_h + 2, 2 * k_adh + 2)
    parents: List[Optional[int]] = []
    torsos: List[WitnessedInstance] = []
    bags: List[frozenset] = []
    next_id = 0
    total = 0
    t = 0
    while total < n:
        size = min(max(2, bag_target + rng.randint(-2, 2)), n - total + k_adh)
        if torso_kind == "product+apex":
            napex = rng.randint(0, apexes)
            piece, _ = gen_apex_instance(
                max(1, size - napex), torso_k, torso_h, napex, edge_prob, rng,
                weights=weights, n_cliques=0, id_base=0,
            )
        else:
            piece, _ = gen_product_instance(
                size, torso_k, torso_h, edge_prob, rng,
                weights=weights, n_cliques=0, id_base=0,
            )
        if t == 0:
            adhesion_global: List[int] = []
            local_adhesion: List[int] = []
        else:
            p = rng.randrange(t)
            want = rng.randint(1, k_adh)
            parent_clique = sample_clique(
                torsos[p].gplus, rng, candidates=sorted(bags[p]), max_size=want
            )
            # The child side: a clique of matching size inside the fresh piece.
            child_clique = sample_clique(
                piece.gplus, rng, candidates=piece.g.sorted_vertices(),
                max_size=len(parent_clique),
            )
            m = min(len(parent_clique), len(child_clique))
            adhesion_global = sorted(parent_clique)[:m]
            local_adhesion = sorted(child_clique)[:m]
        mapping: Dict[int, int] = {}
        for local, glob in zip(local_adhesion, adhesion_global):
            mapping[local] = glob
        for v in piece.g.sorted_vertices():
            if v not in mapping:
                mapping[v] = next_id
                next_id += 1
        bag = frozenset(mapping[v] for v in piece.g.sorted_vertices())
        remapped = _remap_instance(piece, mapping)
        parents.append(None if t == 0 else p)
        torsos.append(remapped)
        bags.append(bag)
        total += len(bag - frozenset(adhesion_global))
        t += 1

    all_vertices = sorted(set().union(*bags))
    dense_map = {v: i for i, v in enumerate(all_vertices)}
    torsos = [_remap_instance(p, dense_map) for p in torsos]
    bags = [frozenset(dense_map[v] for v in b) for b in bags]

    verts = range(len(all_vertices))
    gplus = Graph(verts, [e for p in torsos for e in p.gplus.edges])
    g = Graph(verts, [e for p in torsos for e in p.g.edges])
    wts: Dict[int, Fraction] = {}
    for p in torsos:
        for v, w in p.weights.items():
            wts.setdefault(v, w)
    decomp = RootedForestDecomposition(parents, bags)
    witness = TreeWitness(decomp=decomp, torsos=tuple(p.witness for p in torsos))
    inst = WitnessedInstance(gplus=gplus, g=g, weights=wts, witness=witness)
    cliques: Set[frozenset] = set()
    for _ in range(n_cliques * 3):
        if len(cliques) >= n_cliques:
            break
        node = rng.randrange(len(torsos))
        c = sample_clique(gplus, rng, candidates=sorted(bags[node]))
        if c and all(gplus.has_edge(u, v) for u in c for v in c if u < v):
            cliques.add(c)
    return inst, sorted(cliques, key=sorted)


def _remap_instance(inst: WitnessedInstance, mapping: Dict[int, int]) -> WitnessedInstance:
    def remap_graph(gr: Graph) -> Graph:
        return Graph(
            (mapping[v] for v in gr.vertices),
            ((mapping[u], mapping[v]) for u, v in gr.edges),
        )

    return WitnessedInstance(
        gplus=remap_graph(inst.gplus),
        g=remap_graph(inst.g),
        weights={mapping[v]: w for v, w in inst.weights.items()},
        witness=_remap_witness(inst.witness, mapping),
    )


def _remap_witness(w: Witness, mapping: Dict[int, int]) -> Witness:
    if isinstance(w, ProductWitness):
        return ProductWitness(
            host=w.host,
            elim_order=w.elim_order,
            k=w.k,
            h=w.h,
            placement=tuple((mapping[v], hv, row) for v, hv, row in w.placement),
        )
    if isinstance(w, ApexWitness):
        return ApexWitness(
            apexes=tuple(mapping[a] for a in w.apexes),
            inner=_remap_witness(w.inner, mapping),
        )
    if isinstance(w, UnionWitness):
        return UnionWitness(
            pieces=tuple(
                (frozenset(mapping[v] for v in vs), _remap_witness(piece, mapping))
                for vs, piece in w.pieces
            )
        )
    if isinstance(w, TreeWitness):
        return TreeWitness(
            decomp=RootedForestDecomposition(
                w.decomp.parent,
                [frozenset(mapping[v] for v in b) for b in w.decomp.bags],
            ),
            torsos=tuple(_remap_witness(t, mapping) for t in w.torsos),
        )
    raise ValueError("cannot remap witness kind %r" % w.kind)
