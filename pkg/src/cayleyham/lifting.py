"""Voltages of closed quotient walks and the lifts that turn them into cycles of G."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .groups import (
    IDENTITY, Elem, GroupSpec, SubgroupOfGammaPart, element_order, in_commutator_subgroup,
    inverse, is_prime, multiply, power, quotient_spec,
)
from .walks import Step, WalkWord, labels_of, verify_hamiltonian_cycle, word_product


class LiftError(ValueError):
    pass


class NotClosedInQuotient(LiftError):
    pass


class QuotientNotHamiltonian(LiftError):
    pass


class VoltageNotGenerating(LiftError):
    pass


class NoSubstitutionVerifies(LiftError):
    pass


def as_subgroup(sub: SubgroupOfGammaPart | int) -> SubgroupOfGammaPart:
    return sub if isinstance(sub, SubgroupOfGammaPart) else SubgroupOfGammaPart(sub)


@dataclass(frozen=True)
class VoltageResult:
    element: Elem
    generates_N: bool
    order_in_N: int


def voltage(spec: GroupSpec, genset, word: WalkWord, sub: SubgroupOfGammaPart | int) -> VoltageResult:
    sub = as_subgroup(sub)
    v = word_product(spec, genset, word)
    if not sub.contains(spec, v):
        raise NotClosedInQuotient(f"walk product {v} is not in the subgroup of order {sub.d}")
    order = element_order(spec, v)
    return VoltageResult(v, order == sub.d, order)


def projected_labels(spec: GroupSpec, genset, sub: SubgroupOfGammaPart | int) -> tuple[GroupSpec, tuple[Elem, ...]]:
    quotient, project = quotient_spec(spec, as_subgroup(sub))
    return quotient, tuple(project(s) for s in labels_of(genset))


def fgl_lift(spec: GroupSpec, genset, quotient_word: WalkWord, sub: SubgroupOfGammaPart | int) -> WalkWord:
    """Repeat a quotient Hamiltonian cycle |N| times when its voltage generates N."""
    sub = as_subgroup(sub)
    quotient, qlabels = projected_labels(spec, genset, sub)
    check = verify_hamiltonian_cycle(quotient, qlabels, quotient_word)
    if not check:
        raise QuotientNotHamiltonian(check.message)
    volt = voltage(spec, genset, quotient_word, sub)
    if not volt.generates_N:
        raise VoltageNotGenerating(f"voltage {volt.element} has order {volt.order_in_N}, need {sub.d}")
    return quotient_word * sub.d


def _occurrences(word: WalkWord, label: int) -> list[tuple[int, int]]:
    """(position in the expansion, sign) of each step using `label`."""
    return [(pos, sign) for pos, (k, sign) in enumerate(word.expand()) if k == label]


def cor52_lift(spec: GroupSpec, genset, s: Step, t: Step, sub: SubgroupOfGammaPart | int,
               quotient_word: WalkWord) -> WalkWord:
    """Splice t in for one s-edge in j of the |N| stacked copies of a quotient cycle.

    s and t are signed labels with the same image in G/N. Every occurrence of
    s (either direction), both substitution directions and j = 0..|N| are
    tried; the first candidate whose product is e and which verifies wins.
    """
    sub = as_subgroup(sub)
    d = sub.d
    if not is_prime(d):
        raise LiftError(f"subgroup order {d} is not prime")
    labels = labels_of(genset)

    def elem(step: Step) -> Elem:
        return labels[step[0]] if step[1] > 0 else inverse(spec, labels[step[0]])

    quotient, qlabels = projected_labels(spec, genset, sub)
    if elem(s) == elem(t):
        raise LiftError("s and t are equal")
    if (elem(s)[0], elem(s)[1] % quotient.m) != (elem(t)[0], elem(t)[1] % quotient.m):
        raise LiftError("s and t lie in different cosets of N")
    check = verify_hamiltonian_cycle(quotient, qlabels, quotient_word)
    if not check:
        raise QuotientNotHamiltonian(check.message)
    base = list(quotient_word.expand())
    v = word_product(spec, labels, quotient_word)
    powers_v = [IDENTITY]
    for _ in range(d):
        powers_v.append(multiply(spec, powers_v[-1], v))
    for old, new in ((s, t), (t, s)):
        for direction in (1, -1):
            src = (old[0], old[1] * direction)
            dst = (new[0], new[1] * direction)
            for pos, step in enumerate(base):
                if step != src:
                    continue
                changed = base[:pos] + [dst] + base[pos + 1:]
                changed_word = WalkWord.from_expanded(changed)
                v2 = word_product(spec, labels, changed_word)
                acc = IDENTITY
                for j in range(0, d + 1):
                    # acc = v2^j; total = v2^j v^(d-j)
                    if j > 0:
                        acc = multiply(spec, acc, v2)
                    if j == 0:
                        continue
                    if multiply(spec, acc, powers_v[d - j]) != IDENTITY:
                        continue
                    candidate = changed_word * j + quotient_word * (d - j)
                    if verify_hamiltonian_cycle(spec, labels, candidate):
                        return candidate
    # j = 0 is plain stacking
    plain = quotient_word * d
    if verify_hamiltonian_cycle(spec, labels, plain):
        return plain
    raise NoSubstitutionVerifies("no substitution pattern verifies")


# ---------------------------------------------------------------- generators inside G'


@dataclass(frozen=True)
class ReducedProblem:
    spec: GroupSpec
    labels: tuple[Elem, ...]
    """Projected labels of the other generators, in original order."""
    label_indices: tuple[int, ...]
    """Original index of each remaining label."""
    removed: int
    """Index of the generator lying in G'."""
    subgroup: SubgroupOfGammaPart


def reduce_generator_in_Gprime(spec: GroupSpec, genset) -> ReducedProblem | None:
    """Quotient by <s> for the first generator s lying in G', or None when there is none."""
    labels = labels_of(genset)
    for k, s in enumerate(labels):
        if in_commutator_subgroup(spec, s):
            d = element_order(spec, s)
            quotient, project = quotient_spec(spec, SubgroupOfGammaPart(d))
            keep = tuple(x for x in range(len(labels)) if x != k)
            return ReducedProblem(quotient, tuple(project(labels[x]) for x in keep), keep, k, SubgroupOfGammaPart(d))
    return None


def snake_lift(spec: GroupSpec, genset, s_index: int, quotient_word: WalkWord) -> WalkWord | None:
    """Lift a Hamiltonian cycle of G/<s> for a generator s in the normal part.

    Each coset is swept by s^(±(d-1)) before the quotient step; the signs are
    chosen by dynamic programming over residues mod d so the walk closes.
    Returns None when no sign choice closes the walk.
    """
    labels = labels_of(genset)
    s = labels[s_index]
    if s[0] != 0:
        raise LiftError("generator is not in the normal part")
    d = element_order(spec, s)
    steps = list(quotient_word.expand())
    if d == 1:
        return quotient_word
    m = spec.m
    # exponent of γ in s, as a unit multiple of the order-d subgroup generator
    unit = s[1] // (m // d)
    unit_inv = pow(unit, -1, d)
    invs = [inverse(spec, x) for x in labels]
    # prefix complement exponents and product of the plain quotient steps
    coeffs = []
    g = IDENTITY
    for k, sign in steps:
        coeffs.append(spec.tau_powers[g[0]] % d if d > 1 else 0)
        g = multiply(spec, g, labels[k] if sign > 0 else invs[k])
    if g[0] != 0 or g[1] % (m // d):
        raise NotClosedInQuotient("quotient word does not close modulo <s>")
    # g = γ^(g1) = s^w with w = (g1 / (m/d)) * unit^-1 mod d
    w = (g[1] // (m // d)) * unit_inv % d
    # conjugating s^c by a prefix with complement exponent t gives s^(c tau^t)
    # total: s^(sum -eps_i coeff_i) * s^w = e  =>  sum eps_i coeff_i = w (mod d)
    count = len(steps)
    reach = [None] * (count + 1)
    reach[0] = {0: None}
    for idx in range(count):
        nxt: dict[int, tuple[int, int]] = {}
        c = coeffs[idx]
        for r in reach[idx]:
            for eps in (1, -1):
                r2 = (r + eps * c) % d
                if r2 not in nxt:
                    nxt[r2] = (r, eps)
        reach[idx + 1] = nxt
    if w not in reach[count]:
        return None
    signs = []
    r = w
    for idx in range(count, 0, -1):
        prev, eps = reach[idx][r]
        signs.append(eps)
        r = prev
    signs.reverse()
    out: list[Step] = []
    for (k, sign), eps in zip(steps, signs):
        out.append((s_index, eps * (d - 1)))
        out.append((k, sign))
    word = WalkWord(tuple(out))
    return word


def unique_coset_escape_check(spec: GroupSpec, genset, word: WalkWord, c: int,
                              sub: SubgroupOfGammaPart | int, escape_prime: int | None = None) -> bool:
    """True when label c is used exactly once, has nontrivial C_r-part, and every other used label has trivial C_r-part.

    Then the voltage cannot avoid C_r, where r is the escape prime; this is
    asserted on the spot.
    """
    sub = as_subgroup(sub)
    r = escape_prime if escape_prime is not None else sub.d
    labels = labels_of(genset)
    uses = sum(abs(e) for k, e in word.steps if k == c)
    if uses != 1 or labels[c][1] % r == 0:
        return False
    for k, _ in word.steps:
        if k != c and labels[k][1] % r:
            return False
    volt = voltage(spec, labels, word, sub)
    assert volt.order_in_N % r == 0, "unique escaping label failed to reach C_r"
    return True


def stacked_product(spec: GroupSpec, genset, words: Sequence[WalkWord]) -> Elem:
    out = IDENTITY
    for w in words:
        out = multiply(spec, out, word_product(spec, genset, w))
    return out
