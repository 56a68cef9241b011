import pytest

from csmatch import (
    LabelTable,
    UpdateOp,
    UpdateStats,
    apply_update,
    build_dag,
    build_dcs,
    dcs_changed_edges,
    deletion_update,
    enumerate_embeddings,
    insertion_update,
    parse_graph,
    parse_query,
)

from conftest import parse_instance, trial_instance, walkthrough


def q_id(inst, ext):
    return inst.q.internal(ext)


def g_id(inst, ext):
    return inst.g.internal(ext)


def drive(inst, engine_dcs, op, stats=None):
    """Apply one edge op to graph + index in the documented order."""
    g, q = inst.g, inst.q
    u, v = g.internal(op.u), g.internal(op.v)
    if op.kind == "+":
        e_dcs = dcs_changed_edges(g, q, u, v, op.edge_label)
        apply_update(g, op)
        insertion_update(engine_dcs, e_dcs, stats)
    else:
        e_dcs = dcs_changed_edges(g, q, u, v, deleting=True)
        apply_update(g, op)
        deletion_update(engine_dcs, e_dcs, stats)
    return e_dcs


# -- construction -------------------------------------------------------------


def test_walkthrough_initial_flags(walkthrough):
    dag = build_dag(walkthrough.q)
    dcs = build_dcs(walkthrough.g, dag)
    u2 = q_id(walkthrough, 1)
    cands = sorted(walkthrough.g.external(v) for v in dcs.candidates(u2))
    assert cands == [3, 5, 6]
    v3 = g_id(walkthrough, 3)
    assert dcs.up[u2][v3] == 1
    assert dcs.full[u2][v3] == 0
    # nothing survives the bottom-up pass before the stream runs
    assert not any(any(d.values()) for d in dcs.full)


def test_single_vertex_query_build():
    vl = LabelTable()
    g = parse_graph("v 0 A", vlabels=vl)
    q = parse_query("v 5 A", vlabels=vl)
    dcs = build_dcs(g, build_dag(q))
    assert dcs.up[0] == {0: 1}
    assert dcs.full[0] == {0: 1}


def test_full_flag_covers_every_oracle_embedding():
    # soundness of the filter: pairs used by real embeddings are never pruned
    for trial in range(12):
        inst = trial_instance(trial)
        if inst.g.n_vertices() > 12:
            continue
        dcs = build_dcs(inst.g, build_dag(inst.q))
        for m in enumerate_embeddings(inst.q, inst.g, "iso"):
            for u, v in enumerate(m):
                assert dcs.full[u][v] == 1


# -- changed edges -------------------------------------------------------------


def as_pair_sets(edges):
    return {frozenset(e) for e in edges}


def test_changed_edges_walkthrough_second_insertion(walkthrough):
    inst = walkthrough
    apply_update(inst.g, inst.ops[0])
    u2, u4 = q_id(inst, 1), q_id(inst, 3)
    v3, v6 = g_id(inst, 3), g_id(inst, 6)
    got = dcs_changed_edges(inst.g, inst.q, v3, v6)
    assert len(got) == 2
    assert as_pair_sets(got) == {
        frozenset(((u2, v3), (u4, v6))),
        frozenset(((u2, v6), (u4, v3))),
    }


def test_changed_edges_no_label_match():
    inst = parse_instance("v 0 A\nv 1 A\nv 2 C", "v 0 A\nv 1 B\ne 0 1", "")
    assert dcs_changed_edges(inst.g, inst.q, 0, 1) == []
    assert dcs_changed_edges(inst.g, inst.q, 0, 2) == []


def test_changed_edges_single_orientation():
    inst = parse_instance("v 0 A\nv 1 B", "v 0 A\nv 1 B\ne 0 1", "")
    got = dcs_changed_edges(inst.g, inst.q, 0, 1)
    assert got == [((0, 0), (1, 1))]


def test_changed_edges_respects_edge_labels():
    inst = parse_instance(
        "v 0 A\nv 1 B", "v 0 A\nv 1 B\ne 0 1 x", "", edge_labels=True
    )
    x = inst.elabels.intern("x")
    y = inst.elabels.intern("y")
    assert dcs_changed_edges(inst.g, inst.q, 0, 1, x) == [((0, 0), (1, 1))]
    assert dcs_changed_edges(inst.g, inst.q, 0, 1, y) == []


def test_changed_edges_directed_antiparallel_pair():
    # the query needs both directions; only completing the pair toggles it
    inst = parse_instance(
        "v 0 A\nv 1 B", "v 0 A\nv 1 B\ne 0 1\ne 1 0", "", directed=True
    )
    g, q = inst.g, inst.q
    expected = {frozenset(((0, 0), (1, 1)))}
    assert dcs_changed_edges(g, q, 0, 1) == []  # half of the pair: no toggle yet
    g.add_edge(0, 1)
    assert as_pair_sets(dcs_changed_edges(g, q, 1, 0)) == expected
    g.add_edge(1, 0)
    assert as_pair_sets(dcs_changed_edges(g, q, 1, 0, deleting=True)) == expected
    assert as_pair_sets(dcs_changed_edges(g, q, 0, 1, deleting=True)) == expected


# -- insertion update ----------------------------------------------------------


def test_walkthrough_insertion_counter_trace(walkthrough):
    inst = walkthrough
    dag = build_dag(inst.q)
    dcs = build_dcs(inst.g, dag)
    u2, u3, u4 = q_id(inst, 1), q_id(inst, 2), q_id(inst, 3)
    v3, v4, v6 = g_id(inst, 3), g_id(inst, 4), g_id(inst, 6)

    drive(inst, dcs, inst.ops[0])
    slot_u2 = dag.parent_slot[u4][u2]
    assert dcs.n_up[u4][v6][slot_u2] == 0
    assert dcs.n_up_par[u4][v6] == 1  # only the u3 side is satisfied so far
    assert dcs.up[u4][v6] == 0

    drive(inst, dcs, inst.ops[1])
    assert dcs.n_up[u4][v6][slot_u2] == 1
    assert dcs.n_up_par[u4][v6] == 2
    assert dcs.up[u4][v6] == 1
    # the reversed orientation stays dark: v3 and v4 are not adjacent
    assert dcs.up[u4][v3] == 0
    assert dcs.n_up[u4][v3][dag.parent_slot[u4][u3]] == 0


def test_insertion_without_flag_support_changes_no_flags(walkthrough):
    inst = walkthrough
    dcs = build_dcs(inst.g, build_dag(inst.q))
    stats = UpdateStats()
    drive(inst, dcs, inst.ops[0], stats)
    assert stats.e_dcs_size == 2
    assert stats.updated_vertices == 0
    assert stats.flipped == []


def test_insertion_matches_rebuild_on_random_graphs():
    for trial in range(15):
        inst = trial_instance(trial, ops=30)
        dag = build_dag(inst.q)
        dcs = build_dcs(inst.g, dag)
        for op in inst.ops:
            drive(inst, dcs, op)
            if op.kind == "+":
                assert dcs.same_state(build_dcs(inst.g, dag))


def test_insertion_flips_zero_to_one_only():
    for trial in range(8):
        inst = trial_instance(trial, ops=40)
        dag = build_dag(inst.q)
        dcs = build_dcs(inst.g, dag)
        for op in inst.ops:
            before_up, before_full = dcs.snapshot()[:2]
            stats = UpdateStats()
            drive(inst, dcs, op, stats)
            if op.kind != "+":
                continue
            for u, v in stats.flipped:
                assert dcs.up[u][v] >= before_up[u][v]
                assert dcs.full[u][v] >= before_full[u][v]


# -- deletion update -----------------------------------------------------------


def test_insert_then_delete_restores_index(walkthrough):
    inst = walkthrough
    dag = build_dag(inst.q)
    dcs = build_dcs(inst.g, dag)
    for op in inst.ops:
        drive(inst, dcs, op)
    before = dcs.snapshot()
    drive(inst, dcs, UpdateOp("+", 1, 6))
    drive(inst, dcs, UpdateOp("-", 1, 6))
    assert dcs.snapshot() == before


def test_deletion_matches_rebuild_on_random_graphs():
    for trial in range(15):
        inst = trial_instance(trial, ops=40)
        dag = build_dag(inst.q)
        dcs = build_dcs(inst.g, dag)
        deletions = 0
        for op in inst.ops:
            drive(inst, dcs, op)
            if op.kind == "-":
                deletions += 1
                assert dcs.same_state(build_dcs(inst.g, dag))
        if deletions:
            return
    pytest.fail("no deletions exercised")


def test_deletion_flips_one_to_zero_only():
    inst = trial_instance(2, ops=40)
    dag = build_dag(inst.q)
    dcs = build_dcs(inst.g, dag)
    for op in inst.ops:
        stats = UpdateStats()
        drive(inst, dcs, op, stats)
        if op.kind == "-":
            for u, v in stats.flipped:
                assert dcs.up[u][v] == 0 or dcs.full[u][v] == 0


def test_delete_edge_with_no_query_counterpart(walkthrough):
    inst = walkthrough
    dcs = build_dcs(inst.g, build_dag(inst.q))
    before = dcs.snapshot()
    # v1 (A) - v3 (B): fine, but first check an edge whose labels miss the query
    # all query edges touch labels {A,B,C}; fabricate a D-D edge
    vl = inst.vlabels
    d = vl.intern("D")
    apply_update(inst.g, UpdateOp("v+", 200, vertex_label=d))
    apply_update(inst.g, UpdateOp("v+", 201, vertex_label=d))
    dcs.add_vertex_pairs(inst.g.internal(200))
    dcs.add_vertex_pairs(inst.g.internal(201))
    x, y = inst.g.internal(200), inst.g.internal(201)
    assert dcs_changed_edges(inst.g, inst.q, x, y) == []
    apply_update(inst.g, UpdateOp("+", 200, 201))
    e_dcs = dcs_changed_edges(inst.g, inst.q, x, y, deleting=True)
    assert e_dcs == []
    apply_update(inst.g, UpdateOp("-", 200, 201))
    deletion_update(dcs, e_dcs)
    assert dcs.snapshot() == before


def test_underflow_fails_fast(walkthrough):
    inst = walkthrough
    dag = build_dag(inst.q)
    dcs = build_dcs(inst.g, dag)
    for op in inst.ops:
        drive(inst, dcs, op)
    # corrupt one counter, then delete the edge it accounts for
    u2, u4 = q_id(inst, 1), q_id(inst, 3)
    v3, v6 = g_id(inst, 3), g_id(inst, 6)
    dcs.n_up[u4][v6][dag.parent_slot[u4][u2]] = 0
    e_dcs = dcs_changed_edges(inst.g, inst.q, v3, v6, deleting=True)
    apply_update(inst.g, UpdateOp("-", 3, 6))
    with pytest.raises(RuntimeError, match="underflow"):
        deletion_update(dcs, e_dcs)


# -- vertex ops, stats, bounds ---------------------------------------------------


def test_vertex_pairs_come_and_go():
    inst = parse_instance("v 0 A\nv 1 B\ne 0 1", "v 0 A\nv 1 B\ne 0 1", "")
    dcs = build_dcs(inst.g, build_dag(inst.q))
    before = dcs.snapshot()
    apply_update(inst.g, UpdateOp("v+", 5, vertex_label=inst.vlabels.intern("A")))
    v = inst.g.internal(5)
    dcs.add_vertex_pairs(v)
    assert dcs.up[0][v] == 1  # root side needs no parents
    assert dcs.full[0][v] == 0  # but it has a child and no edges
    assert dcs.same_state(build_dcs(inst.g, build_dag(inst.q)))
    dcs.remove_vertex_pairs(v)
    apply_update(inst.g, UpdateOp("v-", 5))
    assert dcs.snapshot() == before


def test_visited_edges_bounded_by_flip_degrees():
    # maintenance cost stays within 2 * (sum of flipped-pair degrees + |changed|)
    for trial in range(10):
        inst = trial_instance(trial, ops=50)
        dag = build_dag(inst.q)
        dcs = build_dcs(inst.g, dag)
        for op in inst.ops:
            stats = UpdateStats()
            if op.kind == "+":
                u, v = inst.g.internal(op.u), inst.g.internal(op.v)
                e_dcs = dcs_changed_edges(inst.g, inst.q, u, v, op.edge_label)
                apply_update(inst.g, op)
                insertion_update(dcs, e_dcs, stats)
                deg_sum = sum(dcs.pair_degree(u_, v_) for u_, v_ in stats.flipped)
            else:
                u, v = inst.g.internal(op.u), inst.g.internal(op.v)
                e_dcs = dcs_changed_edges(inst.g, inst.q, u, v, deleting=True)
                deg_sum = None  # degrees must be read while the edge exists
                apply_update(inst.g, op)
                deletion_update(dcs, e_dcs, stats)
                deg_sum = sum(
                    dcs.pair_degree(u_, v_) for u_, v_ in stats.flipped
                ) + 2 * len(e_dcs)  # deleted copies no longer count toward degree
            assert stats.visited_edges <= 2 * (deg_sum + len(e_dcs))


def test_counter_entry_budget():
    for trial in range(20):
        inst = trial_instance(trial)
        dcs = build_dcs(inst.g, build_dag(inst.q))
        eq = inst.q.n_edges
        vq = inst.q.n_vertices()
        vg = inst.g.n_vertices()
        assert dcs.counter_entries() <= 2 * eq * vg + 2 * vq * vg


def test_verify_recounts_cleanly(walkthrough):
    inst = walkthrough
    dcs = build_dcs(inst.g, build_dag(inst.q))
    for op in inst.ops:
        drive(inst, dcs, op)
    dcs.verify()
    dcs.n_full_child[0][g_id(inst, 1)] += 1
    with pytest.raises(AssertionError):
        dcs.verify()


def test_update_is_independent_of_changed_edge_order(walkthrough):
    inst = walkthrough
    dag = build_dag(inst.q)
    forward = build_dcs(inst.g, dag)
    backward = build_dcs(inst.g, dag)
    for op in inst.ops:
        u, v = inst.g.internal(op.u), inst.g.internal(op.v)
        e_dcs = dcs_changed_edges(inst.g, inst.q, u, v)
        apply_update(inst.g, op)
        insertion_update(forward, e_dcs)
        insertion_update(backward, list(reversed(e_dcs)))
        assert forward.same_state(backward)
    for ext in [(3, 6), (4, 7)]:
        u, v = inst.g.internal(ext[0]), inst.g.internal(ext[1])
        e_dcs = dcs_changed_edges(inst.g, inst.q, u, v, deleting=True)
        apply_update(inst.g, UpdateOp("-", *ext))
        deletion_update(forward, e_dcs)
        deletion_update(backward, list(reversed(e_dcs)))
        assert forward.same_state(backward)


def test_incremental_equals_rebuild_with_labels_and_direction():
    for trial in range(8):
        inst = trial_instance(trial, ops=40, directed=True, edge_labels=2)
        dag = build_dag(inst.q)
        dcs = build_dcs(inst.g, dag)
        for op in inst.ops:
            drive(inst, dcs, op)
            assert dcs.same_state(build_dcs(inst.g, dag))
