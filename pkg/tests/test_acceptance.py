"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line to the terminal. Run directly with
`python tests/test_acceptance.py` to get the seven lines without pytest.
"""

from __future__ import annotations

import collections
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from strategies import valid_specs  # noqa: E402

from cayleyham.construct import (  # noqa: E402
    DELEGATIONS, W, _case38_two_word, canonicalize_genset, classify, construct,
)
from cayleyham.criteria import FORMS, family_context, generation_criterion, make_instance, parameter_grid  # noqa: E402
from cayleyham.groups import (  # noqa: E402
    GroupSpec, centralizer_config, class_representative, closure_order, commutator, element_order, generates,
    hall_normalize, multiply, power, quotient_spec,
)
from cayleyham.harness import SweepConfig, enumerate_generating_sets, enumerate_group_specs, gprime_shape, run_suite  # noqa: E402
from cayleyham.lifting import fgl_lift, projected_labels, voltage  # noqa: E402
from cayleyham.walks import GenSet, WalkWord, find_hamiltonian_cycle, snake_word, verify_hamiltonian_cycle, word_product  # noqa: E402


def _line(number: int, ok: bool, detail: str) -> str:
    return f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"


def _emit(capsys, text: str) -> None:
    if capsys is None:
        print(text)
    else:
        with capsys.disabled():
            print("\n" + text)


# ---------------------------------------------------------------- 1. sweep correctness


def check_sweep() -> tuple[bool, str]:
    t0 = time.perf_counter()
    parts = []
    ok = True
    for p, q in ((11, 13), (11, 17)):
        result = run_suite(SweepConfig(p, q))
        per_spec = collections.Counter((r.spec, len(r.labels)) for r in result.reports)
        specs = {r.spec for r in result.reports}
        expected = {s for s in enumerate_group_specs(p, q) if not s.is_abelian and gprime_shape(s) in ("pq", "3p")}
        for r in result.reports:
            if r.outcome == "verified":
                ok &= bool(verify_hamiltonian_cycle(r.spec, r.labels, r.cycle))
            elif r.outcome == "delegated":
                ok &= r.tag.delegation in DELEGATIONS
            else:
                ok = False
        ok &= result.ok and specs == expected
        ok &= all(per_spec[(s, 3)] >= 500 for s in expected)
        b = result.buckets
        parts.append(f"({p},{q}) verified={b['verified']} delegated={b['delegated']} failed={b['failed']}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 900
    return ok, "; ".join(parts) + f"; {elapsed:.0f}s"


def test_criterion_1_sweep(capsys):
    ok, detail = check_sweep()
    _emit(capsys, _line(1, ok, detail))
    assert ok, detail


# ---------------------------------------------------------------- 2. voltage closed forms


def _frames(p, q, size, prefix, count=None, seed=1):
    for spec in enumerate_group_specs(p, q):
        if gprime_shape(spec) not in ("pq", "3p") or spec.is_abelian:
            continue
        sets = enumerate_generating_sets(spec, 2) if size == 2 else enumerate_generating_sets(spec, 3, "random", count, seed)
        for gs in sets:
            tag = classify(spec, gs)
            if tag.delegation or not (tag.branch or "").startswith(prefix):
                continue
            gens, _, frame = canonicalize_genset(spec, gs, tag)
            yield spec, gens.labels, frame


def anchor_involution_b() -> collections.Counter:
    """|b̄| = 2: the cycle (a^2, b, a^-2, b^-1) has voltage γ^(τ^3 (τ^2 - 1)) with γ = a^-3 b."""
    res = collections.Counter()
    for spec, (a, b), frame in _frames(11, 13, 2, "I.A.2"):
        if frame.coords.get("b_order") != 2:
            continue
        h = frame.spec
        v = voltage(h, (a, b), W(("a", 2), "b", ("a", -2), ("b", -1)), h.m).element
        gamma = multiply(h, power(h, a, -3), b)
        tau = h.tau_powers[a[0]]
        res[(gamma[0] == 0 and v == power(h, gamma, pow(tau, 3, h.m) * (tau * tau - 1)), h.tau)] += 1
    return res


def anchor_commutator() -> collections.Counter:
    """(b^(r-1), a, b^-(r-1), a^-1) has voltage [b^(r-1), a]."""
    res = collections.Counter()
    for prefix in ("I.A.1", "I.A.2"):
        for spec, (a, b), frame in _frames(11, 13, 2, prefix):
            h = frame.spec
            for r in range(2, 7):
                word = W(("b", r - 1), "a", ("b", -(r - 1)), ("a", -1))
                v = voltage(h, (a, b), word, h.m).element
                res[(v == commutator(h, power(h, b, r - 1), a), h.tau)] += 1
    return res


def anchor_first_case_three() -> collections.Counter:
    """(a, b^2, a, b^-1, c^-1) has voltage a_q^(-3-k) modulo C_p."""
    res = collections.Counter()
    for spec, labels, frame in _frames(11, 13, 3, "II.A.a.i.1", 600):
        if frame.coords["i"] != 0:
            continue
        h = frame.spec
        quot, proj = quotient_spec(h, frame.names["p"])
        v = proj(word_product(h, labels, W("a", ("b", 2), "a", ("b", -1), ("c", -1))))
        a_q = proj((0, labels[1][1]))
        res[(v == power(quot, a_q, -3 - frame.coords["k"]), h.tau)] += 1
    return res


def anchor_case_two_3p() -> collections.Counter:
    """The two-coset word has voltage γ_p^(τ̂^j (1 ∓ τ̂)) modulo C_3, minus when C_2 centralizes C_p."""
    res = collections.Counter()
    for spec, labels, frame in _frames(23, 11, 3, "II.B.2", 800):
        c = frame.coords
        if c["i"] != 0 or c["j"] % 2 == 0 or c["j"] == 1:
            continue
        h = frame.spec
        p, q = frame.names["p"], frame.names["q"]
        quot, proj = quotient_spec(h, 3)
        v = proj(word_product(h, labels, _case38_two_word(q, c["j"])))
        a, third = labels[0], labels[2]
        gamma_p = (0, proj(third)[1])
        # exponent of a's C_q part inside the complement C_2q
        t = next(x for x in range(2 * q) if x % 2 == 0 and x % q == a[0] % q)
        tau_hat = pow(quot.tau, t, quot.m)
        sign = -1 if p in centralizer_config(h).centralized[2] else 1
        exponent = pow(tau_hat, c["j"], quot.m) * (1 + sign * tau_hat)
        res[(v == power(quot, gamma_p, exponent), sign)] += 1
    return res


def check_voltages() -> tuple[bool, str]:
    anchors = {
        "involution b": anchor_involution_b(),
        "commutator": anchor_commutator(),
        "first case three": anchor_first_case_three(),
        "3p case two": anchor_case_two_3p(),
    }
    ok = True
    parts = []
    for name, res in anchors.items():
        good = sum(n for (flag, _), n in res.items() if flag)
        bad = sum(n for (flag, _), n in res.items() if not flag)
        ok &= good > 0 and bad == 0
        parts.append(f"{name} {good}/{good + bad}")
    # every pq spec at (11,13) outside the dihedral-times-cyclic delegation carries the first anchor
    taus = {t for (_, t) in anchors["involution b"]}
    ok &= taus == {10, 87}
    return ok, ", ".join(parts)


def test_criterion_2_voltages(capsys):
    ok, detail = check_voltages()
    _emit(capsys, _line(2, ok, detail))
    assert ok, detail


# ---------------------------------------------------------------- 3. FGL round trip


def check_fgl(count: int = 1000, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    pool = [s for s in valid_specs(400) if 1 < s.m <= 50]
    stats = collections.Counter()
    run = 0
    while sum(stats.values()) < count:
        spec = rng.choice(pool)
        d = rng.choice([d for d in range(2, spec.m + 1) if spec.m % d == 0])
        gens = [(rng.randrange(spec.n), rng.randrange(spec.m)) for _ in range(rng.choice((2, 3)))]
        if not generates(spec, gens):
            continue
        quotient, qlabels = projected_labels(spec, gens, d)
        found = find_hamiltonian_cycle(quotient, qlabels, budget=10**6, seed=run)
        run += 1
        if not found.found:
            stats["no quotient cycle"] += 1
            continue
        if not voltage(spec, gens, found.word, d).generates_N:
            stats["voltage not generating"] += 1
            continue
        lifted = fgl_lift(spec, gens, found.word, d)
        stats["lift verified" if verify_hamiltonian_cycle(spec, gens, lifted) else "lift failed"] += 1
    ok = stats["lift failed"] == 0 and stats["no quotient cycle"] == 0 and stats["lift verified"] > 0
    return ok, ", ".join(f"{k}={v}" for k, v in sorted(stats.items()))


def test_criterion_3_fgl(capsys):
    ok, detail = check_fgl()
    _emit(capsys, _line(3, ok, detail))
    assert ok, detail


# ---------------------------------------------------------------- 4. generation criteria


def check_criteria() -> tuple[bool, str]:
    ok = True
    parts = []
    for family, p, q, exact in (("centralized-q", 11, 13, True), ("free-3", 13, 19, False), ("mixed-3p", 23, 11, False)):
        checked = 0
        wrong = 0
        for spec in enumerate_group_specs(p, q):
            if family_context(spec, family) is None:
                continue
            for ident, form in FORMS.items():
                if form.family != family:
                    continue
                for params in parameter_grid(spec, ident):
                    inst = make_instance(spec, ident, **params)
                    claim = generation_criterion(inst)
                    if not exact and not claim:
                        continue
                    truth = closure_order(spec, list(inst.elements())) == spec.order
                    checked += 1
                    wrong += claim != truth
        ok &= checked > 0 and wrong == 0
        parts.append(f"{family} at ({p},{q}) {checked - wrong}/{checked}")
    return ok, ", ".join(parts)


def test_criterion_4_criteria(capsys):
    ok, detail = check_criteria()
    _emit(capsys, _line(4, ok, detail))
    assert ok, detail


# ---------------------------------------------------------------- 5. search coverage


def check_search_coverage(max_order: int = 120) -> tuple[bool, str]:
    reps = sorted({class_representative(hall_normalize(s)) for s in valid_specs(max_order)},
                  key=lambda s: (s.order, s.m, s.n, s.tau))
    stats = collections.Counter()
    misses = []
    for spec in reps:
        if spec.order < 3:
            continue
        sets = enumerate_generating_sets(spec, 2, dedup_automorphisms=True)
        for size in (3, 4):
            if spec.order > size:
                sets += enumerate_generating_sets(spec, size, "random", 20, 0)
        cyclic = [g for g in spec.elements() if element_order(spec, g) == spec.order]
        if cyclic:
            sets.append(GenSet((cyclic[0],)))
        for gs in sets:
            result = find_hamiltonian_cycle(spec, gs, budget=10**6, seed=0)
            hit = result.found and bool(verify_hamiltonian_cycle(spec, gs, result.word))
            stats[len(gs.labels)] += 1
            if not hit:
                misses.append((spec.key(), gs.labels, result.status))
    ok = not misses
    detail = f"{len(reps)} groups, sets by size {dict(sorted(stats.items()))}, misses={len(misses)}"
    return ok, detail + (f" first miss {misses[0]}" if misses else "")


def test_criterion_5_search_coverage(capsys):
    ok, detail = check_search_coverage()
    _emit(capsys, _line(5, ok, detail))
    assert ok, detail


# ---------------------------------------------------------------- 6. cartesian construction


def _grid_walk_ok(word: WalkWord, r: int, rows: int) -> bool:
    """Label 0 moves around Z_r, label 1 moves along a path of `rows` vertices (never wrapping)."""
    x = y = 0
    seen = {(0, 0)}
    steps = list(word.expand())
    for t, (k, e) in enumerate(steps):
        if k == 0:
            x = (x + e) % r
        else:
            y += e
            if not 0 <= y < rows:
                return False
        if t < len(steps) - 1:
            if (x, y) in seen:
                return False
            seen.add((x, y))
    return (x, y) == (0, 0) and len(seen) == r * rows


def check_cartesian() -> tuple[bool, str]:
    ok = True
    products = 0
    for r in range(3, 9):
        for vertices in range(1, 9):
            cycle = WalkWord(((0, r),))
            path = WalkWord(((1, vertices - 1),)) if vertices > 1 else WalkWord(())
            ok &= _grid_walk_ok(snake_word(cycle, path), r, vertices)
            products += 1
    routes = collections.Counter()
    explicit = GroupSpec(66, 13, 12)
    cases = [(explicit, GenSet(((33, 0), (33, 1), (22, 0), (6, 0))))]
    for spec in enumerate_group_specs(11, 13):
        cases += [(spec, gs) for gs in enumerate_generating_sets(spec, 4, "random", 8, 0)]
    for spec, gs in cases:
        report = construct(spec, gs)
        good = report.outcome == "verified" and bool(verify_hamiltonian_cycle(spec, gs, report.cycle))
        ok &= good
        if report.tag.branch == "III.1":
            ok &= report.route == "cartesian"
        routes[(report.tag.label, report.route)] += 1
    ok &= routes[("III.1", "cartesian")] > 0
    summary = ", ".join(f"{label} via {route}: {n}" for (label, route), n in sorted(routes.items()))
    return ok, f"{products} path x cycle products; |S|=4 at order 858: {summary}"


def test_criterion_6_cartesian(capsys):
    ok, detail = check_cartesian()
    _emit(capsys, _line(6, ok, detail))
    assert ok, detail


# ---------------------------------------------------------------- 7. determinism


def check_determinism() -> tuple[bool, str]:
    config = {"p": 11, "q": 13, "random_cap": 100, "seed": 7}
    first = run_suite(SweepConfig.from_json(config))
    second = run_suite(SweepConfig.from_json(config))
    same = first.dumps() == second.dumps() and first.csv_text() == second.csv_text()
    return same, f"{len(first.reports)} reports, {len(first.dumps())} bytes, identical={same}"


def test_criterion_7_determinism(capsys):
    ok, detail = check_determinism()
    _emit(capsys, _line(7, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    checks = [check_sweep, check_voltages, check_fgl, check_criteria, check_search_coverage, check_cartesian,
              check_determinism]
    results = []
    for number, check in enumerate(checks, 1):
        ok, detail = check()
        results.append(ok)
        _emit(None, _line(number, ok, detail))
    sys.exit(0 if all(results) else 1)
