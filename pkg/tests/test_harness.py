from __future__ import annotations

import csv
import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from cayleyham.construct import grid_cycle_words
from cayleyham.groups import GroupSpec, SpecError, closure_order, find_isomorphism, generates, is_minimal_generating
from cayleyham.harness import (
    ExportError, SweepConfig, enumerate_generating_sets, enumerate_group_specs, export_dot, gprime_shape, run_suite,
)
from cayleyham.walks import WalkWord, find_hamiltonian_cycle

from strategies import SMALL_SPECS

D6 = GroupSpec(2, 3, 2)
D6_CYCLE = WalkWord(((0, 1), (0, 1), (1, 1), (0, 1), (0, 1), (1, 1)))


def test_enumerate_specs_858():
    specs = enumerate_group_specs(11, 13)
    assert len(specs) == 12
    assert all(s.order == 858 for s in specs)
    shapes = [gprime_shape(s) for s in specs]
    assert shapes.count("pq") == 3 and shapes.count("3p") == 2
    for i, s in enumerate(specs):
        for t in specs[i + 1:]:
            assert find_isomorphism(s, t) is None


@pytest.mark.parametrize("p,q", [(11, 11), (2, 13), (9, 13)])
def test_enumerate_specs_rejects_bad_primes(p, q):
    with pytest.raises(SpecError):
        enumerate_group_specs(p, q)


def test_exhaustive_pairs_are_generating_and_minimal():
    spec = GroupSpec(6, 143, 10)
    sets = enumerate_generating_sets(spec, 2)
    assert len(sets) == 100
    for gs in sets:
        assert generates(spec, list(gs.labels)) and is_minimal_generating(spec, list(gs.labels))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SMALL_SPECS))
def test_orbit_dedup_covers_every_generating_pair(spec):
    # every generating pair of non-cyclic generators is conjugate, up to inverting either one, to a listed pair
    reps = {frozenset(gs.labels) for gs in enumerate_generating_sets(spec, 2)}
    elements = spec.elements()
    from cayleyham.groups import conjugate, inverse
    orbit = set()
    for pair in reps:
        a, b = tuple(pair)
        for g in elements:
            for x in (conjugate(spec, g, a), inverse(spec, conjugate(spec, g, a))):
                for y in (conjugate(spec, g, b), inverse(spec, conjugate(spec, g, b))):
                    orbit.add(frozenset((x, y)))
    for i, a in enumerate(elements):
        for b in elements[i + 1:]:
            if closure_order(spec, [a]) == spec.order or closure_order(spec, [b]) == spec.order:
                continue
            if closure_order(spec, [a, b]) == spec.order:
                assert frozenset((a, b)) in orbit


def test_random_policy_is_seeded():
    spec = GroupSpec(6, 143, 10)
    first = enumerate_generating_sets(spec, 3, "random", 20, 4)
    assert first == enumerate_generating_sets(spec, 3, "random", 20, 4)
    assert len(first) == 20 and all(is_minimal_generating(spec, list(g.labels)) for g in first)
    with pytest.raises(ValueError):
        enumerate_generating_sets(spec, 3, "exhaustive")


def test_dot_export_d6():
    text = export_dot(D6, [(0, 1), (1, 0)], D6_CYCLE)
    assert text == export_dot(D6, [(0, 1), (1, 0)], D6_CYCLE)
    assert text.count("[label=") == 6
    assert text.count("color=red") == 6
    assert text.startswith("graph cayley {") and text.endswith("}\n")


def test_dot_export_rejects_bad_word():
    with pytest.raises(ExportError):
        export_dot(D6, [(0, 1), (1, 0)], WalkWord(((0, 1), (0, 1), (0, 1))))


def test_dot_export_grid_quotient_q11():
    spec = GroupSpec(22, 3, 2)
    word = grid_cycle_words(11)[0]
    text = export_dot(spec, [(2, 1), (1, 0)], word, style="grid")
    assert text.count("[label=") == 66 and text.count("pos=") == 66
    assert text.count("color=red") == 66


def test_sweep_csv_columns_and_determinism(tmp_path):
    cfg = SweepConfig(11, 13, sizes={2: "exhaustive"}, exhaustive_cap=15, shapes=("pq",),
                      json_path=str(tmp_path / "a.json"), csv_path=str(tmp_path / "a.csv"))
    result = run_suite(cfg)
    assert result.ok
    rows = list(csv.reader(io.StringIO((tmp_path / "a.csv").read_text())))
    assert rows[0] == ["spec", "|S|", "case tag", "cycle length", "voltage order", "verify ms"]
    assert len(rows) == 1 + sum(result.buckets.values())
    assert all(r[5] == "" for r in rows[1:])
    again = run_suite(SweepConfig.from_json(cfg.to_json()))
    assert again.dumps() == (tmp_path / "a.json").read_text()
    assert json.loads(again.dumps())["seed"] == 0


def test_sweep_config_validation():
    with pytest.raises(SpecError):
        SweepConfig.from_json({"p": 11, "q": 11})
    with pytest.raises(ValueError):
        SweepConfig.from_json({"p": 11, "q": 13, "random_cap": 0})


def test_search_finds_cycle_on_d6():
    result = find_hamiltonian_cycle(D6, [(0, 1), (1, 0)])
    assert result.found and len(result.word) == 6
