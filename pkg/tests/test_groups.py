from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings

from cayleyham.groups import (
    IDENTITY, GroupSpec, SpecError, SubgroupOfGammaPart, canonical_generators, centralizer_config, class_representative,
    closure, closure_order, commutator, commutator_subgroup_order, conjugate, element_order, find_isomorphism,
    generates, hall_isomorphism, hall_normalize, in_commutator_subgroup, inverse, is_minimal_generating, multiply,
    order_multiset, power, quotient_spec,
)

from strategies import SMALL_SPECS, spec_and_elements


def matrix_rep(spec: GroupSpec, g):
    """b^i γ^j as the affine map x -> τ^i (x + j) on Z_m, applied right-to-left as in b^i γ^j."""
    i, j = g
    t = pow(spec.tau, i, spec.m) if spec.m > 1 else 0
    return (t % spec.m if spec.m > 1 else 0, t * j % spec.m if spec.m > 1 else 0, i)


def compose(spec: GroupSpec, f, g):
    # (x -> a1 x + c1) o (x -> a2 x + c2) with the C_n exponents added
    a1, c1, i1 = f
    a2, c2, i2 = g
    m = spec.m
    if m == 1:
        return (0, 0, (i1 + i2) % spec.n)
    return (a1 * a2 % m, (a1 * c2 + c1) % m, (i1 + i2) % spec.n)


@settings(max_examples=300, deadline=None)
@given(spec_and_elements(2))
def test_multiply_matches_affine_model(data):
    spec, (g, h) = data
    assert matrix_rep(spec, multiply(spec, g, h)) == compose(spec, matrix_rep(spec, g), matrix_rep(spec, h))


@settings(max_examples=300, deadline=None)
@given(spec_and_elements(3))
def test_group_axioms(data):
    spec, (g, h, k) = data
    assert multiply(spec, multiply(spec, g, h), k) == multiply(spec, g, multiply(spec, h, k))
    assert multiply(spec, g, inverse(spec, g)) == IDENTITY
    assert multiply(spec, IDENTITY, g) == g
    order = element_order(spec, g)
    assert power(spec, g, order) == IDENTITY
    assert all(power(spec, g, e) != IDENTITY for e in range(1, order))


def test_defining_relation():
    spec = GroupSpec(6, 35, 11)
    b, gamma = (1, 0), (0, 1)
    assert conjugate(spec, b, gamma) == power(spec, gamma, spec.tau)
    assert power(spec, b, 6) == IDENTITY and power(spec, gamma, 35) == IDENTITY


@pytest.mark.parametrize("n,m,tau", [(4, 3, 2), (6, 35, 2), (2, 15, 2), (0, 5, 1), (2, 9, 8)])
def test_spec_rejects_invalid(n, m, tau):
    with pytest.raises(SpecError):
        GroupSpec(n, m, tau)


def test_commutator_subgroup_matches_closure():
    for spec in SMALL_SPECS:
        comms = {commutator(spec, g, h) for g in spec.elements() for h in spec.elements()}
        assert len(closure(spec, comms)) == commutator_subgroup_order(spec)
        assert all(in_commutator_subgroup(spec, c) for c in comms)


@settings(max_examples=300, deadline=None)
@given(spec_and_elements(3))
def test_generates_matches_closure(data):
    spec, gens = data
    assert generates(spec, gens) == (closure_order(spec, gens) == spec.order)


def test_minimal_generating():
    spec = GroupSpec(6, 35, 11)
    assert is_minimal_generating(spec, [(1, 0), (0, 1)])
    assert not is_minimal_generating(spec, [(1, 0), (0, 1), (0, 5)])


def test_quotient_projection_is_homomorphism():
    spec = GroupSpec(6, 35, 11)
    quotient, project = quotient_spec(spec, SubgroupOfGammaPart(5))
    assert quotient == GroupSpec(6, 7, 11 % 7)
    for g, h in itertools.product(spec.elements()[::7], repeat=2):
        assert project(multiply(spec, g, h)) == multiply(quotient, project(g), project(h))


def test_centralizer_config():
    # τ = 9 has order 2 mod 5 and order 3 mod 7
    spec = GroupSpec(6, 35, 9)
    cfg = centralizer_config(spec)
    assert cfg.centralized == {2: (7,), 3: (5,)}
    gens = canonical_generators(spec)
    for e in (2, 3):
        for r in (5, 7):
            fixes = conjugate(spec, gens[e], gens[r]) == gens[r]
            assert cfg.centralizes(e, r) == fixes


def test_canonical_generators_orders():
    spec = GroupSpec(6, 143, 10)
    for r, g in canonical_generators(spec).items():
        assert element_order(spec, g) == r


def test_hall_isomorphism_is_bijective_homomorphism():
    for spec in [GroupSpec(6, 35, 16), GroupSpec(10, 33, 23), GroupSpec(2, 15, 4)]:
        hall, phi = hall_isomorphism(spec)
        assert hall.m == commutator_subgroup_order(spec)
        assert len({phi(g) for g in spec.elements()}) == spec.order
        for g, h in itertools.product(spec.elements()[::3], repeat=2):
            assert phi(multiply(spec, g, h)) == multiply(hall, phi(g), phi(h))


def test_hall_normalize_identity_on_normalized():
    spec = GroupSpec(6, 143, 10)
    assert hall_normalize(spec) is spec


def test_class_representative_is_isomorphic():
    spec = GroupSpec(6, 35, 11)
    rep = class_representative(spec)
    assert order_multiset(rep) == order_multiset(spec)
    assert find_isomorphism(spec, rep) is not None


def test_find_isomorphism_rejects_nonisomorphic():
    assert find_isomorphism(GroupSpec(2, 15, 14), GroupSpec(2, 15, 4)) is None
