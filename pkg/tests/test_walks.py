from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayleyham.groups import IDENTITY, GroupSpec, generates, inverse, multiply
from cayleyham.walks import (
    GenSet, WalkWord, NonCommutingFactors, build_graph, build_subgroup_graph, cartesian_product_hc, snake_word, find_hamiltonian_cycle,
    iter_hamiltonian, sample_hamiltonian_cycles, search_hamiltonian, trace_word, verify_hamiltonian_cycle,
    verify_hamiltonian_path, word_product,
)

from strategies import SMALL_SPECS

D6 = GroupSpec(2, 3, 2)


def naive_is_hamiltonian_cycle(spec, labels, steps) -> bool:
    g = IDENTITY
    seen = [g]
    for k, sign in steps:
        s = labels[k] if sign > 0 else inverse(spec, labels[k])
        g = multiply(spec, g, s)
        seen.append(g)
    return seen[-1] == IDENTITY and len(steps) == spec.order and len(set(seen[:-1])) == spec.order


words = st.lists(st.tuples(st.integers(0, 2), st.integers(-3, 3)), max_size=12)


@given(words)
def test_word_roundtrip_and_inverse(raw):
    w = WalkWord(tuple(raw))
    assert WalkWord.from_json(w.to_json()) == w
    assert WalkWord.from_expanded(w.expand()) == w
    assert len(w) == sum(abs(e) for _, e in raw)
    assert w.inverse().inverse() == w


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL_SPECS), words)
def test_word_product_inverse(spec, raw):
    labels = [(1 % spec.n, 0), (0, 1 % spec.m), (1 % spec.n, 1 % spec.m)]
    w = WalkWord(tuple(raw))
    assert multiply(spec, word_product(spec, labels, w), word_product(spec, labels, w.inverse())) == IDENTITY


def test_genset_rejects_identity_and_duplicates():
    with pytest.raises(ValueError):
        GenSet(((0, 0), (1, 0)))
    with pytest.raises(ValueError):
        GenSet(((1, 0), (1, 0)))


def test_verify_dihedral_cycle():
    labels = [(1, 0), (0, 1)]
    good = WalkWord.of((1, 2), (0, 1), (1, 2), (0, 1))
    assert verify_hamiltonian_cycle(D6, labels, good)
    assert not verify_hamiltonian_cycle(D6, labels, WalkWord.of((1, 3)))
    assert not verify_hamiltonian_cycle(D6, labels, WalkWord.of((1, 2), (0, 1), (1, -2), (0, 1)))


def test_verifier_matches_naive_on_all_short_words():
    labels = [(1, 0), (0, 1)]
    import itertools
    steps = [(0, 1), (0, -1), (1, 1), (1, -1)]
    for combo in itertools.product(steps, repeat=6):
        w = WalkWord.from_expanded(combo)
        assert bool(verify_hamiltonian_cycle(D6, labels, w)) == naive_is_hamiltonian_cycle(D6, labels, list(w.expand()))


def test_verify_path():
    labels = [(0, 1)]
    spec = GroupSpec(1, 5, 1)
    assert verify_hamiltonian_path(spec, labels, WalkWord.of((0, 4)))
    assert not verify_hamiltonian_path(spec, labels, WalkWord.of((0, 3)))


def test_trace_word():
    seq, end = trace_word(D6, [(1, 0)], WalkWord.of((0, 2)))
    assert seq == [(0, 0), (1, 0), (0, 0)] and end == (0, 0)


def test_search_finds_verified_cycles_small():
    count = 0
    for spec in SMALL_SPECS[::5]:
        labels = [(1 % spec.n, 0), (0, 1 % spec.m)]
        labels = [g for g in labels if g != IDENTITY] or [(0, 0)]
        if labels == [(0, 0)] or not generates(spec, labels) or spec.order < 3:
            continue
        result = find_hamiltonian_cycle(spec, labels, budget=10**6, seed=0)
        assert result.found, spec
        assert verify_hamiltonian_cycle(spec, labels, result.word)
        count += 1
    assert count > 5


def test_search_reports_none_when_no_cycle():
    spec = GroupSpec(1, 15, 1)
    graph = build_graph(spec, [(0, 5)])
    assert not graph.connected
    assert search_hamiltonian(graph).status == "none"


def test_iter_and_sample_return_cycles():
    spec = GroupSpec(2, 7, 6)
    labels = [(1, 0), (1, 1)]
    graph = build_graph(spec, labels)
    from cayleyham.walks import path_to_word
    paths = list(iter_hamiltonian(graph, "cycle", 0, None, 10**5, 0))
    assert paths
    sampled = sample_hamiltonian_cycles(graph, 5, 10**5, 0)
    for p in paths + sampled:
        assert verify_hamiltonian_cycle(spec, labels, path_to_word(graph, p))


def test_subgroup_graph():
    spec = GroupSpec(6, 35, 11)
    graph = build_subgroup_graph(spec, [(0, 5)])
    assert graph.size == 7 and graph.vertices[0] == (0, 0)


def walk_in_torus(word: WalkWord, r: int, rows: int) -> list[tuple[int, int]]:
    """Vertices visited in Z_r x Z_rows with label 0 = (1, 0) and label 1 = (0, 1)."""
    x = y = 0
    seen = [(0, 0)]
    for k, sign in word.expand():
        if k == 0:
            x = (x + sign) % r
        else:
            y = (y + sign) % rows
        seen.append((x, y))
    return seen


@pytest.mark.parametrize("path_len", range(1, 9))
@pytest.mark.parametrize("r", range(3, 9))
def test_snake_path_times_cycle(r, path_len):
    rows = path_len + 1
    word = snake_word(WalkWord.of((0, r)), WalkWord.of((1, path_len)))
    seen = walk_in_torus(word, r, rows + 1)  # a larger modulus would expose any wrap-around
    assert seen[-1] == (0, 0)
    assert len(word) == r * rows
    assert sorted(set(seen[:-1])) == sorted((x, y) for x in range(r) for y in range(rows))


@pytest.mark.parametrize("r,path_len", [(3, 4), (5, 2), (7, 4), (5, 6), (3, 10)])
def test_cartesian_product_in_group(r, path_len):
    n = r * (path_len + 1)
    spec = GroupSpec(1, n, 1)
    labels = [(0, path_len + 1), (0, r)]  # orders r and path_len + 1
    word = cartesian_product_hc(spec, labels, WalkWord.of((0, r)), WalkWord.of((1, path_len)))
    assert verify_hamiltonian_cycle(spec, labels, word)
    word = cartesian_product_hc(spec, labels, WalkWord.of((0, r)), WalkWord.of((1, path_len + 1)), b_is_cycle=True)
    assert verify_hamiltonian_cycle(spec, labels, word)


def test_cartesian_rejects_noncommuting():
    spec = GroupSpec(2, 3, 2)
    with pytest.raises(NonCommutingFactors):
        cartesian_product_hc(spec, [(1, 0), (0, 1)], WalkWord.of((0, 2)), WalkWord.of((1, 2)))


def test_luby_sequence():
    from cayleyham.walks import _luby
    assert [_luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


def test_restarts_escape_dead_subtrees():
    # a single depth-first run spends over 10^6 expansions here without finding a cycle
    spec = GroupSpec(66, 1, 0)
    labels = [(3, 0), (10, 0)]
    result = find_hamiltonian_cycle(spec, labels, budget=10**6, seed=0)
    assert result.found and verify_hamiltonian_cycle(spec, labels, result.word)


def test_restarts_still_prove_absence():
    # the 6-cycle is bipartite, so no Hamiltonian path joins two vertices of the same colour
    spec = GroupSpec(1, 6, 1)
    graph = build_graph(spec, [(0, 1)])
    end = graph.index[(0, 2)]
    result = search_hamiltonian(graph, "path", 0, end, 10**4, seed=3)
    assert result.status == "none"
