import random
from fractions import Fraction

import pytest

from ilpath.corpus import random_instance
from ilpath.decomposition import (
    PathDecomposition,
    build_special_form,
    check_schedule_invariants,
    decompose,
    max_label_occupancy,
    schedule,
    validate_decomposition,
)
from ilpath.instance import IlpError, IlpInstance, Solution
from ilpath.oracle import enumerate_solutions
from ilpath.solution_graph import sol_of, validate_graph


@pytest.fixture
def example_run(example_instance):
    sol = Solution((5, 3, 1))
    return example_instance, sol, schedule(example_instance, sol)


def test_schedule_counter_trace(example_run):
    _inst, _sol, trace = example_run
    assert trace.s_l == 5
    assert trace.num_reduces == 5
    assert trace.c_after_reduce == (
        (0, 2, 4),
        (0, 4, 3),
        (0, 1, 2),
        (0, 3, 1),
        (0, 0, 0),
    )


def test_schedule_residue_trace(example_run):
    _inst, _sol, trace = example_run
    r1 = tuple(r[0] for r in trace.r_after_reduce)
    r2 = tuple(r[1] for r in trace.r_after_reduce)
    assert r1 == (2, 3, 1, 2, 0)
    # the exact scaled residue; computed from the counter identity, one
    # unit per ratio step
    assert r2 == (0, -1, 0, -1, 0)


def test_schedule_round_structure(example_run):
    _inst, _sol, trace = example_run
    assert trace.rounds == ((1, 2, 3), (1, 2), (1,), (1, 2), (1,))
    assert trace.increment_counts() == (5, 3, 1)


def test_schedule_requires_solution(example_instance):
    with pytest.raises(IlpError, match="not a solution"):
        schedule(example_instance, Solution((1, 0, 0)))


def test_schedule_zero_solution_is_empty(example_instance):
    trace = schedule(example_instance, Solution((0, 0, 0)))
    assert trace.steps == ()
    assert trace.s_l == 0


def test_schedule_invariants_hold(example_run):
    inst, sol, trace = example_run
    assert check_schedule_invariants(inst, sol, trace) == []


def test_open_target_tables_match_known_values(example_run):
    inst, sol, trace = example_run
    sf = build_special_form(inst, sol, trace)
    assert tuple(t[1:] for t in sf.open_targets[0]) == (
        (0, 2, 0),
        (0, 3, 0),
        (0, 1, 0),
        (0, 2, 0),
        (0, 0, 0),
    )
    assert tuple(t[1:] for t in sf.open_targets[1]) == (
        (0, -1, 1),
        (0, -2, 1),
        (0, -1, 1),
        (0, -2, 1),
        (0, 0, 0),
    )


def test_residue_splits_match_known_values(example_run):
    inst, sol, trace = example_run
    sf = build_special_form(inst, sol, trace)
    assert tuple(s[0] for s in sf.residue_splits[0]) == (2, 3, 1, 2, 0)
    assert tuple(s[1] for s in sf.residue_splits[0]) == (0, 0, 0, 0, 0)
    assert tuple(s[0] for s in sf.residue_splits[1]) == (
        Fraction(4, 5),
        Fraction(3, 5),
        Fraction(2, 5),
        Fraction(1, 5),
        0,
    )
    assert tuple(s[1] for s in sf.residue_splits[1]) == (
        Fraction(-4, 5),
        Fraction(-8, 5),
        Fraction(-2, 5),
        Fraction(-6, 5),
        0,
    )


def test_special_form_block_shape(example_run):
    inst, sol, trace = example_run
    sf = build_special_form(inst, sol, trace)
    # one vertex per incremented variable per stage, never two of a label
    for block in sf.vertex_blocks:
        labels = [sf.graph.labels[v] for v in block]
        assert len(labels) == len(set(labels))
    assert validate_graph(inst, sf.graph).ok
    assert sol_of(sf.graph).values == sol.values
    # edges in blocks 0..k stay inside vertex blocks 0..k
    placed: set[int] = set()
    for block, eblock in zip(sf.vertex_blocks, sf.edge_blocks):
        placed |= set(block)
        for e_idx in eblock:
            u, v, _j = sf.graph.edges[e_idx]
            assert {u, v} <= placed | {0}


def test_decompose_worked_example(example_run):
    inst, sol, trace = example_run
    sf = build_special_form(inst, sol, trace)
    pd = decompose(sf)
    verdict = validate_decomposition(sf.graph, pd)
    assert verdict.ok
    assert pd.width <= 2 * inst.num_vars - 1  # zero right-hand side
    assert max_label_occupancy(sf.graph, pd) <= 2


def test_decompose_matched_pair():
    inst = IlpInstance(coeffs=((1, -1),), rhs=(0,), var_names=("x1", "x2"))
    sol = Solution((1, 1))
    sf = build_special_form(inst, sol, schedule(inst, sol))
    assert len(sf.vertex_blocks) == 1
    pd = decompose(sf)
    assert [sorted(b) for b in pd.bags] == [[0], [1, 2]]
    assert pd.width == 1
    assert validate_decomposition(sf.graph, pd).ok


def test_decompose_zero_solution():
    inst = IlpInstance(coeffs=((1,),), rhs=(0,), var_names=("x1",))
    sol = Solution((0,))
    sf = build_special_form(inst, sol, schedule(inst, sol))
    pd = decompose(sf)
    assert [sorted(b) for b in pd.bags] == [[0]]
    assert pd.width == 0
    assert validate_decomposition(sf.graph, pd).ok


def test_decompose_nonzero_rhs_keeps_zero_vertex_everywhere():
    inst = IlpInstance(coeffs=((1,),), rhs=(3,), var_names=("x1",))
    sol = Solution((3,))
    sf = build_special_form(inst, sol, schedule(inst, sol))
    pd = decompose(sf)
    v0 = sf.graph.vertices_with_label(0)[0]
    assert all(v0 in bag for bag in pd.bags)
    assert validate_decomposition(sf.graph, pd).ok
    assert pd.width <= 2 * inst.num_vars


def test_trace_mismatch_rejected(example_instance):
    other = Solution((0, 0, 0))
    trace = schedule(example_instance, Solution((5, 3, 1)))
    with pytest.raises(IlpError, match="trace does not belong"):
        build_special_form(example_instance, other, trace)


def test_validate_decomposition_single_bag(example_instance):
    from ilpath.solution_graph import build_graph

    g = build_graph(example_instance, Solution((5, 3, 1)))
    pd = PathDecomposition((frozenset(range(g.num_vertices)),))
    verdict = validate_decomposition(g, pd)
    assert verdict.ok
    assert verdict.width == g.num_vertices - 1


def test_validate_decomposition_detects_mutations(example_run):
    inst, sol, trace = example_run
    sf = build_special_form(inst, sol, trace)
    pd = decompose(sf)

    # deleting an interior bag breaks contiguity or edge coverage
    clipped = PathDecomposition(pd.bags[:2] + pd.bags[3:])
    assert not validate_decomposition(sf.graph, clipped).ok

    # dropping a vertex from every bag breaks coverage
    victim = sorted(pd.bags[-1])[-1]
    gutted = PathDecomposition(tuple(b - {victim} for b in pd.bags))
    verdict = validate_decomposition(sf.graph, gutted)
    assert not verdict.ok
    assert "no bag" in verdict.violation or "shares no bag" in verdict.violation

    # unknown vertex ids are flagged
    alien = PathDecomposition(pd.bags + (frozenset({999}),))
    assert "unknown vertex" in validate_decomposition(sf.graph, alien).violation


def test_bag_exports(example_run):
    inst, sol, trace = example_run
    pd = decompose(build_special_form(inst, sol, trace))
    import json

    payload = json.loads(pd.to_json())
    assert payload["width"] == pd.width
    assert payload["bags"] == [sorted(b) for b in pd.bags]
    text = pd.to_text()
    assert text.splitlines()[0].startswith("bag 1:")
    assert len(text.splitlines()) == len(pd.bags)


def test_chained_bump_constraints_regression():
    """The magnitude condition chains bumps across stages; the preferred
    bump order once starved a stage here and the safe re-sweep must kick
    in (found by randomized search)."""
    inst = IlpInstance(
        coeffs=((1, 2, 0, -2, 1, -1), (-1, 1, 2, 0, -1, -2)),
        rhs=(1, 2),
        var_names=tuple(f"x{i}" for i in range(1, 7)),
    )
    sol = Solution((1, 2, 4, 1, 1, 3))
    trace = schedule(inst, sol)
    sf = build_special_form(inst, sol, trace)
    pd = decompose(sf)
    verdict = validate_decomposition(sf.graph, pd)
    assert verdict.ok
    assert verdict.width <= 2 * inst.num_vars
    assert max_label_occupancy(sf.graph, pd) <= 2
    assert sol_of(sf.graph).values == sol.values


def test_width_bound_over_enumerated_solutions():
    """Every solution of every sampled instance decomposes within 2n."""
    rng = random.Random(21)
    checked = 0
    for _ in range(80):
        inst = random_instance(rng)
        bound = 2 * inst.num_vars - (0 if any(inst.rhs) else 1)
        for sol in enumerate_solutions(inst, 4).solutions:
            trace = schedule(inst, sol)
            assert check_schedule_invariants(inst, sol, trace) == []
            sf = build_special_form(inst, sol, trace)
            pd = decompose(sf)
            verdict = validate_decomposition(sf.graph, pd)
            assert verdict.ok, verdict.violation
            assert verdict.width <= bound
            assert max_label_occupancy(sf.graph, pd) <= 2
            checked += 1
    assert checked > 100
