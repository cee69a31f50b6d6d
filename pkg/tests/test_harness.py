import json
import random

import pytest

from tdlabel.graphs import Graph
from tdlabel.harness import gen_decomposed_instance, gen_ktree, gen_product_instance
from tdlabel.harness.bench import bench_sweep, slack_ratio_by_scale, to_csv
from tdlabel.harness.corpus import (
    CORPUS,
    CorpusEntry,
    instance_digest,
    instance_from_json,
    instance_to_json,
)
from tdlabel.harness.verify import fault_injection, verify_instance
from tdlabel.decomposition import validate_decomposition
from tdlabel.witness import TreeWitness


def test_ktree_is_complete_for_minimum_size():
    g, order = gen_ktree(3, 2, 0)
    assert len(g.edges) == 3
    assert sorted(order) == [0, 1, 2]


def test_ktree_edge_count_formula():
    g, _ = gen_ktree(50, 3, 42)
    assert len(g.edges) == 3 * 50 - 6


def test_ktree_one_tree_is_tree():
    g, order = gen_ktree(10, 1, 7)
    assert len(g.edges) == 9
    rank = {v: i for i, v in enumerate(order)}
    for v in range(10):
        later = [w for w in g.neighbours(v) if rank[w] > rank[v]]
        assert len(later) <= 1


def test_generators_deterministic():
    a1, c1 = gen_product_instance(40, 2, 5, 0.3, 11)
    a2, c2 = gen_product_instance(40, 2, 5, 0.3, 11)
    assert instance_digest(a1, c1) == instance_digest(a2, c2)
    b1, d1 = gen_decomposed_instance(100, 3, "product", 12)
    b2, d2 = gen_decomposed_instance(100, 3, "product", 12)
    assert instance_digest(b1, d1) == instance_digest(b2, d2)


def test_product_generator_edge_prob_zero_makes_equal_graphs():
    inst, _ = gen_product_instance(30, 1, 3, 0.0, 5)
    assert inst.g == inst.gplus


def test_product_generator_single_row():
    inst, _ = gen_product_instance(12, 2, 1, 0.2, 6)
    assert all(row == 1 for _, _, row in inst.witness.placement)


def test_decomposed_instance_validates():
    inst, cliques = gen_decomposed_instance(120, 3, "product", 9)
    witness = inst.witness
    assert isinstance(witness, TreeWitness)
    assert validate_decomposition(inst.gplus, witness.decomp).ok
    for x in range(witness.decomp.nnodes):
        assert witness.torsos[x].validate(
            _torso_graph(inst, witness, x)
        ) == []
    for k in cliques:
        assert inst.gplus.is_clique(k)


def _torso_graph(inst, witness, x):
    from tdlabel.decomposition import torso

    return torso(inst.gplus, witness.decomp, x)


def test_instance_json_roundtrip():
    inst, cliques = gen_decomposed_instance(60, 2, "product+apex", 13)
    blob = json.dumps(instance_to_json(inst, cliques), sort_keys=True)
    inst2, cliques2 = instance_from_json(json.loads(blob))
    assert json.dumps(instance_to_json(inst2, cliques2), sort_keys=True) == blob


def test_corpus_has_thirty_entries_and_all_schemes():
    assert len(CORPUS) == 30
    assert {e.scheme for e in CORPUS} == {
        "product", "apex", "union", "skinny", "short", "compose_full"
    }


def test_corpus_entry_regeneration_stable():
    entry = CORPUS[0]
    i1, c1 = entry.build()
    i2, c2 = entry.build()
    assert instance_digest(i1, c1) == instance_digest(i2, c2)


def test_verify_instance_report_shape():
    entry = CORPUS[0]
    inst, cliques = entry.build()
    rep = verify_instance(entry.handle(), inst, cliques)
    assert rep["pass"] is True
    assert rep["budget"]["max_vertex_bits"] > 0


def test_fault_injection_counts():
    entry = CORPUS[0]
    inst, cliques = entry.build()
    fr = fault_injection(entry.handle(), inst, cliques, 40, seed=3)
    assert fr.trials == 40
    assert fr.all_detected
    assert fr.tester_detected >= int(0.8 * fr.trials)


def test_bench_sweep_csv_deterministic_without_timings():
    rows1 = bench_sweep("product", [64, 128], 1, 7, timings=False)
    rows2 = bench_sweep("product", [64, 128], 1, 7, timings=False)
    assert to_csv(rows1) == to_csv(rows2)
    assert to_csv(rows1).splitlines()[0] == (
        "scheme,n,seed,max_vlabel,mean_vlabel,max_klabel,max_kappa,slack_bits,ms"
    )


def test_bench_sweep_rejects_unsorted():
    with pytest.raises(ValueError):
        bench_sweep("product", [128, 64], 1, 7)


def test_bench_single_row():
    rows = bench_sweep("product", [64], 1, 1, timings=True)
    assert len(rows) == 1
    assert rows[0].n >= 64 - 1
    assert rows[0].max_vlabel > 0
    ratios = slack_ratio_by_scale(rows)
    assert set(ratios) == {rows[0].n}
