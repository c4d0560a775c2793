from __future__ import annotations

import random

import pytest

from eufinterp.coloring import (
    Strategy,
    choose_splitter,
    color,
    factorize,
    make_colorable,
)
from eufinterp.congruence import close
from eufinterp.core import (
    Colorability,
    Side,
    edge_colorability,
    format_term,
    parse_problem,
    subterm_closure,
)
from eufinterp.interpolate import build_colored_graph, interpolate, format_conjunction
from eufinterp.generate import generate

from conftest import expected_clauses, load_problem


def _closed(p):
    return close(p.equalities(), subterm_closure(p.terms()))


def _partition_ids(graph, vertex_ids):
    blocks = {}
    for tid in vertex_ids:
        blocks.setdefault(graph.find(tid), set()).add(tid)
    return {frozenset(b) for b in blocks.values()}


def test_repair_splits_the_crossing_congruence():
    p = load_problem("split_new_vertex.euf")
    g = _closed(p)
    assert any(
        edge_colorability(e.u, e.v, p.symbols) == Colorability.NONE for e in g.edges
    )
    repaired, added = make_colorable(g, p.symbols, p.table)
    assert [format_term(t) for t in added] == ["(* z1 z2)"]
    assert all(
        edge_colorability(e.u, e.v, p.symbols) != Colorability.NONE
        for e in repaired.edges
    )
    ends = {
        frozenset((format_term(e.u), format_term(e.v)))
        for e in repaired.edges
        if e.is_derived
    }
    assert frozenset(("(* x z2)", "(* z1 z2)")) in ends
    assert frozenset(("(* z1 z2)", "(* z1 y)")) in ends


def test_repair_keeps_colorable_graphs_unchanged():
    p = load_problem("ladder2.euf")
    g = _closed(p)
    repaired, added = make_colorable(g, p.symbols, p.table)
    assert added == []
    assert len(repaired.edges) == len(g.edges)


def test_repair_noop_without_derived_edges():
    p = load_problem("chain_one_afactor.euf")
    g = _closed(p)
    repaired, added = make_colorable(g, p.symbols, p.table)
    assert added == [] and len(repaired.edges) == len(g.edges)


def test_repair_reuses_existing_split_vertex():
    # (* z1 z2) is already a vertex, already connected through z3, so the
    # crossing edge is replaced by a single edge instead of a split pair.
    p = parse_problem(
        "(A (= x z1) (= (* x z2) z3) (= (* z1 z2) z3))"
        " (B (= y z2) (not (= (* z1 y) z3)))"
    )
    g = _closed(p)
    repaired, added = make_colorable(g, p.symbols, p.table)
    assert added == []
    assert all(
        edge_colorability(e.u, e.v, p.symbols) != Colorability.NONE
        for e in repaired.edges
    )
    assert len(repaired.edges) == len(repaired.vertices) - len(repaired.components())
    r = interpolate(p)
    assert clause_text_set(r) == expected_clauses(p, "(and (= z3 (* z1 z2)))")


def clause_text_set(result):
    return frozenset(result.interpolant.clauses)


def test_repair_preserves_partition_of_original_vertices():
    rng = random.Random(5)
    for i in range(40):
        inst = generate("split", 5 + i % 20, seed=i)
        p = parse_problem(inst.text)
        g = _closed(p)
        before = _partition_ids(g, set(g.vertex_ids))
        original = set(g.vertex_ids)
        repaired, added = make_colorable(g, p.symbols, p.table)
        after = _partition_ids(repaired, original)
        assert before == after
        for t in added:
            assert p.symbols.colorability(t) == Colorability.AB


def test_choose_splitter_examples():
    p = load_problem("split_new_vertex.euf")
    g = _closed(p)
    x, z1, z2, y = (p.table.make(n) for n in ("x", "z1", "z2", "y"))
    assert choose_splitter(g.path(x, z1), p.symbols) is z1
    assert choose_splitter(g.path(z2, y), p.symbols) is z2  # start already shared


def test_choose_splitter_on_random_mixed_paths():
    rng = random.Random(9)
    found = 0
    for i in range(40):
        inst = generate("chain", 6 + i % 30, seed=100 + i)
        p = parse_problem(inst.text)
        g = _closed(p)
        comp = max(g.components(), key=len)
        # the splitter is only defined on paths joining an A-colorable
        # vertex to a B-colorable one
        a_ends = [t for t in comp if p.symbols.colorability(t) & Colorability.A]
        b_ends = [t for t in comp if p.symbols.colorability(t) & Colorability.B]
        if not a_ends or not b_ends:
            continue
        u, v = rng.choice(a_ends), rng.choice(b_ends)
        path = g.path(u, v)
        if path.is_empty:
            continue
        found += 1
        w = choose_splitter(path, p.symbols)
        assert p.symbols.colorability(w) == Colorability.AB
        assert w in path.vertices()
        # first such vertex from the start end
        verts = path.vertices()
        first = next(
            t for t in verts if p.symbols.colorability(t) == Colorability.AB
        )
        assert w is first
    assert found >= 20


def test_free_edge_coloring_drives_the_interpolant():
    p = load_problem("ladder2.euf")
    fz3 = p.table.make("f", (p.table.make("z3"),))
    fz4 = p.table.make("f", (p.table.make("z4"),))

    def free_edge_color(strategy):
        colored, _, _, _ = build_colored_graph(p, strategy)
        (edge,) = [
            e
            for e in colored.graph.edges
            if {e.u.id, e.v.id} == {fz3.id, fz4.id}
        ]
        return colored.edge_color(edge)

    # the edge sits between two B-colored basic edges, so greedy follows them
    assert free_edge_color(Strategy.GREEDY) is Side.B
    assert free_edge_color(Strategy.ALL_A) is Side.A
    assert free_edge_color(Strategy.ALL_B) is Side.B

    small = expected_clauses(
        p,
        "(and (=> (and (= z1 z2)) (= z3 z4)) (=> (and (= z5 z6)) (= z7 z8)))",
    )
    wide = expected_clauses(
        p,
        "(and (=> (and (= z5 (f z3)) (= (f z4) z6) (= z1 z2)) (= z7 z8)))",
    )
    assert frozenset(interpolate(p, Strategy.GREEDY).interpolant.clauses) == small
    assert frozenset(interpolate(p, Strategy.ALL_B).interpolant.clauses) == small
    assert frozenset(interpolate(p, Strategy.ALL_A).interpolant.clauses) == wide


def test_fully_basic_graph_coloring_is_forced():
    p = load_problem("chain_three_afactors.euf")
    g = _closed(p)
    for strategy in Strategy:
        colored = color(g, p.symbols, strategy)
        for edge in g.edges:
            assert colored.edge_color(edge) is edge.side


def test_factorize_alternating_chain():
    p = load_problem("chain_one_afactor.euf")
    colored, refuted, _, _ = build_colored_graph(p, Strategy.GREEDY)
    path = colored.path(refuted.lhs, refuted.rhs)
    factors = factorize(colored, path).factors
    assert [f.side for f in factors] in (
        [Side.A, Side.B],
        [Side.B, Side.A],
    )
    joined = [factors[0].path.start] + [f.path.end for f in factors]
    assert joined[0] is path.start and joined[-1] is path.end


def test_factorize_single_color_path():
    p = load_problem("horn_min.euf")
    colored, refuted, _, _ = build_colored_graph(p, Strategy.GREEDY)
    path = colored.path(refuted.lhs, refuted.rhs)
    factors = factorize(colored, path).factors
    assert len(factors) == 1 and factors[0].side is Side.A


def test_factorize_rejects_empty_path():
    p = load_problem("horn_min.euf")
    colored, _, _, _ = build_colored_graph(p, Strategy.GREEDY)
    u1 = p.table.make("u1")
    with pytest.raises(ValueError):
        factorize(colored, colored.path(u1, u1))


def test_factor_count_equals_color_switches():
    rng = random.Random(21)
    for i in range(40):
        inst = generate("chain", 5 + i % 40, seed=500 + i)
        p = parse_problem(inst.text)
        colored, refuted, _, _ = build_colored_graph(p, Strategy.GREEDY)
        path = colored.path(refuted.lhs, refuted.rhs)
        sides = [colored.edge_color(s.edge) for s in path.steps]
        switches = sum(1 for x, y in zip(sides, sides[1:]) if x is not y)
        assert len(factorize(colored, path).factors) == switches + 1


def test_every_strategy_yields_a_valid_interpolant():
    from eufinterp.verify import check_interpolant

    for name in ("ladder2.euf", "split_new_vertex.euf", "ladder_chain6.euf"):
        p = load_problem(name)
        for strategy in Strategy:
            result = interpolate(p, strategy)
            assert check_interpolant(p, result.interpolant).accepted, (
                name,
                strategy,
                format_conjunction(result.interpolant),
            )
