"""Case analysis and cycle construction for Cayley graphs on groups of order 6pq.

Instances are moved to Hall form (normal part = commutator subgroup), sorted
into the leaves of the case tree, and each leaf proposes quotient cycles.
Every proposal is lifted and verified; nothing is trusted unverified.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from itertools import permutations, product as cartesian
from typing import Iterator

from .groups import (
    Elem, GroupSpec, SpecError, centralizer_config, closure_order, conjugate, element_order,
    generates, hall_isomorphism, inverse, is_minimal_generating, multiply, prime_factors,
    quotient_spec,
)
from .lifting import (
    LiftError, cor52_lift, fgl_lift, reduce_generator_in_Gprime, snake_lift, voltage,
)
from .walks import (
    GenSet, Step, WalkWord, build_graph, build_subgroup_graph, iter_hamiltonian, labels_of,
    path_to_word, sample_hamiltonian_cycles, search_hamiltonian, verify_hamiltonian_cycle, cartesian_product_hc,
    NonCommutingFactors,
)

log = logging.getLogger(__name__)


class ConstructionError(ValueError):
    pass


class ClassificationError(ConstructionError):
    """The instance violates a precondition (order, generation)."""


class CanonicalizationError(ConstructionError):
    """No transform puts the generators into a form the case assumes."""


DELEGATIONS: dict[str, str] = {
    "small-prime": "a prime other than 2 and 3 is at most 7; covered by the small-order results",
    "not-square-free": "order not square-free; covered by the non-square-free result",
    "abelian": "abelian group; every connected Cayley graph is Hamiltonian",
    "prime-commutator": "commutator subgroup of prime order",
    "three-prime-commutator": "commutator subgroup whose order has three prime factors",
    "dihedral-times-cyclic": "G ≅ D_2k × C_r with k a product of two odd primes and r an odd prime",
    "minimal-in-quotient": "S stays minimal modulo the non-centralized prime with quotient D_2q × C_r",
    "generator-in-commutator": "a generator s lies in G'; a cycle of G/<s> is lifted by sweeping cosets",
}


# ---------------------------------------------------------------- tags and reports


@dataclass(frozen=True)
class CaseTag:
    size_of_S: str
    gprime_shape: str | None = None
    branch: str | None = None
    delegation: str | None = None

    @property
    def citation(self) -> str | None:
        return DELEGATIONS.get(self.delegation) if self.delegation else None

    @property
    def label(self) -> str:
        if self.delegation:
            return f"delegated:{self.delegation}"
        return self.branch or "unclassified"

    def to_json(self) -> dict:
        return {"size_of_S": self.size_of_S, "gprime_shape": self.gprime_shape, "branch": self.branch,
                "delegation": self.delegation, "citation": self.citation, "label": self.label}


@dataclass
class CandidateRecord:
    name: str
    method: str
    sub_order: int
    voltage_order: int | None
    status: str

    def to_json(self) -> dict:
        return {"name": self.name, "method": self.method, "N": self.sub_order,
                "voltage_order": self.voltage_order, "status": self.status}


@dataclass
class ConstructionReport:
    spec: GroupSpec
    labels: tuple[Elem, ...]
    tag: CaseTag
    steps: list[str] = field(default_factory=list)
    candidates: list[CandidateRecord] = field(default_factory=list)
    chosen: str | None = None
    route: str | None = None
    cycle: WalkWord | None = None
    voltage_order: int | None = None
    verification: str = ""
    outcome: str = "failed"
    wall_ms: float = 0.0
    verify_ms: float = 0.0

    @property
    def cycle_length(self) -> int:
        return len(self.cycle) if self.cycle is not None else 0

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "spec": self.spec.to_json(),
            "labels": [list(g) for g in self.labels],
            "tag": self.tag.to_json(),
            "steps": list(self.steps),
            "candidates": [c.to_json() for c in self.candidates],
            "chosen": self.chosen,
            "route": self.route,
            "cycle": self.cycle.to_json() if self.cycle is not None else None,
            "cycle_length": self.cycle_length,
            "voltage_order": self.voltage_order,
            "verification": self.verification,
            "outcome": self.outcome,
        }
        if timing:
            out["wall_ms"] = round(self.wall_ms, 3)
            out["verify_ms"] = round(self.verify_ms, 3)
        return out

    def dumps(self, timing: bool = False) -> str:
        return json.dumps(self.to_json(timing), sort_keys=True)


# ---------------------------------------------------------------- form matching


_ROLE = {"a": 0, "b": 1, "c": 2}


def W(*items) -> WalkWord:
    """Word over the role letters a, b, c: items are letters, (letter, exponent) pairs or words."""
    steps: list[Step] = []
    for it in items:
        if isinstance(it, WalkWord):
            steps.extend(it.steps)
        elif isinstance(it, str):
            steps.append((_ROLE[it], 1))
        else:
            name, e = it
            steps.append((_ROLE[name], e))
    return WalkWord(tuple(steps))


def _column_ok(values: list[int], entries: list) -> bool:
    basis = None
    for v, e in zip(values, entries):
        if e == "*":
            continue
        if e == 0:
            if v:
                return False
        elif e == "+":
            if not v:
                return False
        elif e == 1:
            if not v or (basis is not None and v != basis):
                return False
            basis = v
        else:
            raise ValueError(f"bad pattern entry {e!r}")
    return True


@dataclass(frozen=True)
class FormMatch:
    signs: tuple[int, ...]
    conjugator: int
    elems: tuple[Elem, ...]


def match_form(spec: GroupSpec, elems: list[Elem], rows: list[dict], names: dict[str, int],
               complement_syms: tuple[str, ...], gprime_syms: tuple[str, ...]) -> FormMatch | None:
    """Find inversion signs and a conjugator γ^x putting `elems` into the pattern `rows`.

    Pattern entries per column: 0, "+" (nonzero), 1 (nonzero and equal to the
    column's first 1) or "*". Complement columns read i mod r, normal-part
    columns read j mod r after conjugation. Signs are scanned in the order
    (+,+), (+,-), ...; the conjugator is the least x in 0..m-1 that works.
    """
    tneg = spec.tau_neg_powers
    for signs in cartesian((1, -1), repeat=len(rows)):
        es = [g if s > 0 else inverse(spec, g) for g, s in zip(elems, signs)]
        if not all(_column_ok([e[0] % names[sym] for e in es], [row[sym] for row in rows])
                   for sym in complement_syms):
            continue
        valid: dict[int, set[int]] = {}
        for sym in gprime_syms:
            r = names[sym]
            opts = {x for x in range(r)
                    if _column_ok([(e[1] + x * (tneg[e[0]] - 1)) % r for e in es], [row[sym] for row in rows])}
            if not opts:
                break
            valid[r] = opts
        else:
            x = next(x for x in range(spec.m) if all(x % r in ok for r, ok in valid.items()))
            conj = tuple(conjugate(spec, (0, x), e) for e in es)
            return FormMatch(tuple(signs), x, conj)
    return None


def _pat(spec_str: str, columns: tuple[str, ...]) -> dict:
    """'2:1 3:+ q:+' -> row dict, unlisted columns 0."""
    row = {c: 0 for c in columns}
    for part in spec_str.split():
        sym, val = part.split(":")
        row[sym] = int(val) if val in ("0", "1") else val
    return row


PQ_COLUMNS = ("2", "3", "q", "p")
THREE_P_COLUMNS = ("2", "q", "3", "p")

# (a, b) forms, in the case-tree order, as patterns over (2, 3, q, p) or (2, q, 3, p)
FORMS_CENTRALIZED_Q = [  # C_3 centralizes C_q
    ("2:1", "3:+ q:+"),
    ("2:1", "2:1 3:+ q:+"),
    ("2:1 3:+", "2:1 q:+"),
    ("2:1 3:+", "3:1 q:+"),
    ("2:1 3:+", "2:1 3:1 q:+"),
]
FORMS_FREE_3_FULL = [  # C_2 centralizes G'
    ("3:+", "2:1 q:+"),
    ("3:+", "2:1 3:1 q:+"),
    ("2:1 3:+", "3:1 q:+"),
    ("2:1 3:+", "2:1 q:+"),
    ("2:1 3:+", "2:1 3:1 q:+"),
]
FORMS_FREE_3_PARTIAL = [  # shared by the partial and trivial C_2-centralizer branches
    ("2:1 3:+", "2:1 3:1 q:+"),
    ("2:1 3:+", "2:1 q:+"),
    ("2:1 3:+", "3:1 q:+"),
    ("3:+", "2:1 q:+"),
]
FORMS_3P = [
    ("2:1 q:1", "2:1 q:+ 3:+"),
    ("2:1 q:1", "2:1 3:+"),
    ("2:1 q:1", "q:+ 3:+"),
    ("2:1", "q:+ 3:+"),
]


# ---------------------------------------------------------------- frames


@dataclass(frozen=True)
class Candidate:
    name: str
    word: WalkWord
    """Over frame label indices."""
    sub_order: int
    method: str = "fgl"  # fgl | splice | direct
    s: Step | None = None
    t: Step | None = None


@dataclass
class Frame:
    """A minimal generating set in Hall coordinates with its case data."""

    spec: GroupSpec
    labels: tuple[Elem, ...]
    shape: str | None = None
    names: dict[str, int] = field(default_factory=dict)
    roles: tuple[Step, ...] = ()
    conjugator: int = 0
    form: int | None = None
    coords: dict[str, int] = field(default_factory=dict)
    steps: list[str] = field(default_factory=list)

    def role_elem(self, r: int) -> Elem:
        """Canonical element for role r (inverted and conjugated)."""
        k, sign = self.roles[r]
        g = self.labels[k] if sign > 0 else inverse(self.spec, self.labels[k])
        return conjugate(self.spec, (0, self.conjugator), g)

    def flip(self, r: int, why: str) -> None:
        k, sign = self.roles[r]
        roles = list(self.roles)
        roles[r] = (k, -sign)
        self.roles = tuple(roles)
        self.steps.append(f"invert role {'abc'[r]} ({why})")

    def to_frame_word(self, role_word: WalkWord) -> WalkWord:
        return role_word.relabel({r: self.roles[r] for r in range(len(self.roles))})

    def cand(self, name: str, role_word: WalkWord, sub_order: int, method: str = "fgl",
             s: tuple[str, int] | None = None, t: tuple[str, int] | None = None) -> Candidate:
        def to_step(x):
            if x is None:
                return None
            k, sign = self.roles[_ROLE[x[0]]]
            return (k, sign * x[1])
        return Candidate(name, self.to_frame_word(role_word), sub_order, method, to_step(s), to_step(t))

    # coordinates
    def comp(self, g: Elem, sym: str) -> int:
        return g[0] % self.names[sym]

    def norm(self, g: Elem, sym: str) -> int:
        return g[1] % self.names[sym]


def _image_order(n: int, i: int) -> int:
    from math import gcd
    return n // gcd(i, n)


# ---------------------------------------------------------------- classification


@dataclass
class Analysis:
    tag: CaseTag
    original: GroupSpec
    original_labels: tuple[Elem, ...]
    minimal_indices: tuple[int, ...]
    frame: Frame | None = None
    steps: list[str] = field(default_factory=list)


def _is_six_pq(primes: list[int]) -> bool:
    return len(primes) == 4 and 2 in primes and 3 in primes


def _minimal_subset(spec: GroupSpec, labels: tuple[Elem, ...]) -> tuple[int, ...]:
    keep = list(range(len(labels)))
    changed = True
    while changed:
        changed = False
        for k in list(keep):
            rest = [x for x in keep if x != k]
            if rest and generates(spec, [labels[x] for x in rest]):
                keep = rest
                changed = True
                break
    return tuple(keep)


def _dihedral_times_cyclic(h: GroupSpec) -> bool:
    """Hall form with the complement acting by inversion through its C_2 only."""
    if h.m == 1 or h.tau != h.m - 1:
        return False
    pm = prime_factors(h.m)
    return (h.n % 2 == 0 and len(prime_factors(h.n // 2)) == 1 and h.n // 2 > 1 and (h.n // 2) % 2 == 1
            and len(pm) == 2 and 2 not in pm)


def _quotient_minimal(h: GroupSpec, labels: tuple[Elem, ...], r: int) -> bool:
    quotient, project = quotient_spec(h, r)
    return is_minimal_generating(quotient, [project(g) for g in labels])


def _analyze(spec: GroupSpec, genset) -> Analysis:
    labels = labels_of(genset)
    primes = prime_factors(spec.order)
    if len(primes) != 4 or spec.order != primes[0] * primes[1] * primes[2] * primes[3]:
        raise ClassificationError(f"order {spec.order} is not a product of four distinct primes")
    if not generates(spec, list(labels)):
        raise ClassificationError("the labels do not generate G")
    six_pq = _is_six_pq(primes)
    steps: list[str] = []
    minimal = _minimal_subset(spec, labels)
    if len(minimal) != len(labels):
        steps.append(f"reduced to minimal generating subset {list(minimal)}")
    size = len(minimal)
    size_str = str(size) if size < 4 else ">=4"
    if not six_pq and size < 4:
        raise ClassificationError(f"order {spec.order} is not 6pq and |S| = {size} < 4")
    h, phi = hall_isomorphism(spec)
    if h is not spec:
        steps.append(f"moved to Hall form {h.key()}")
    frame = Frame(h, tuple(phi(labels[k]) for k in minimal), steps=steps)
    analysis = Analysis(CaseTag(size_str), spec, labels, minimal, frame, steps)

    def done(**kw) -> Analysis:
        analysis.tag = CaseTag(size_str, **kw)
        return analysis

    others = [r for r in primes if r not in (2, 3)]
    if six_pq and min(others) <= 7:
        return done(delegation="small-prime")
    d = h.m
    dp = prime_factors(d)
    if size >= 4:
        if d > 1 and any(g[0] == 0 for g in frame.labels):
            return done(delegation="generator-in-commutator")
        if len(dp) >= 3:
            # with S disjoint from G', some pair already spans three primes
            raise AssertionError("a minimal generating set of size >= 4 disjoint from G' cannot exist "
                                 "when |G'| has three primes")
        return done(branch="III.1")
    if d == 1:
        return done(delegation="abelian")
    if len(dp) == 1:
        return done(delegation="prime-commutator")
    if len(dp) == 3:
        return done(delegation="three-prime-commutator")
    shape = "3p" if 3 in dp else "pq"
    if _dihedral_times_cyclic(h):
        return done(gprime_shape=shape, delegation="dihedral-times-cyclic")
    if any(g[0] == 0 for g in frame.labels):
        return done(gprime_shape=shape, delegation="generator-in-commutator")
    frame.shape = shape
    if shape == "3p":
        p = next(r for r in dp if r != 3)
        q = next(r for r in prime_factors(h.n) if r != 2)
        frame.names = {"2": 2, "q": q, "3": 3, "p": p}
    if size == 2:
        return done(gprime_shape=shape, branch=_classify_two(frame))
    return done(gprime_shape=shape, **_classify_three(frame))


def _classify_two(frame: Frame) -> str:
    h = frame.spec
    i_a, i_b = frame.labels[0][0], frame.labels[1][0]
    oa, ob = _image_order(h.n, i_a), _image_order(h.n, i_b)
    if frame.shape == "pq":
        p, q = prime_factors(h.m)
        frame.names = {"2": 2, "3": 3, "p": p, "q": q}
        if sorted((oa, ob)) == [2, 3]:
            frame.roles = ((0, 1), (1, 1)) if oa == 2 else ((1, 1), (0, 1))
            return "I.A.1"
        frame.roles = ((0, 1), (1, 1)) if oa == 6 else ((1, 1), (0, 1))
        return "I.A.2"
    q = frame.names["q"]
    frame.roles = ((0, 1), (1, 1))
    if oa == ob == 2 * q:
        return "I.B.1"
    if oa == q:
        return "I.B.2"
    if oa == 2 * q and ob == 2:
        return "I.B.3"
    frame.roles = ((1, 1), (0, 1))
    frame.steps.append("swapped a and b")
    return "I.B.4"


def _classify_three(frame: Frame) -> dict:
    h = frame.spec
    cfg = centralizer_config(h)
    if frame.shape == "3p":
        if _quotient_minimal(h, frame.labels, frame.names["p"]):
            return {"branch": "II.B", "delegation": "minimal-in-quotient"}
        f = _match_forms(frame, FORMS_3P, THREE_P_COLUMNS, ("2", "q"), ("3", "p"), [frame.names])
        return {"branch": f"II.B.{f}"}
    dp = prime_factors(h.m)
    c3 = cfg.centralized[3]
    c2 = cfg.centralized[2]
    if c3:
        assert len(c3) == 1, "C_3 centralizing all of G' is the dihedral-times-cyclic case"
        q = c3[0]
        p = next(r for r in dp if r != q)
        names = {"2": 2, "3": 3, "p": p, "q": q}
        frame.names = names
        if _quotient_minimal(h, frame.labels, p):
            return {"branch": "II.A.a.i", "delegation": "minimal-in-quotient"}
        f = _match_forms(frame, FORMS_CENTRALIZED_Q, PQ_COLUMNS, ("2", "3"), ("q", "p"), [names])
        return {"branch": f"II.A.a.i.{f}"}
    for p in dp:
        if _quotient_minimal(h, frame.labels, p):
            q = next(r for r in dp if r != p)
            frame.names = {"2": 2, "3": 3, "p": p, "q": q}
            if len(c2) == 2:
                k = 1
            elif c2 == (q,):
                k = 2
            elif c2 == (p,):
                k = 3
            else:
                k = 4
            frame.roles = tuple((x, 1) for x in range(3))
            return {"branch": f"II.A.a.ii.{k}"}
    namings = [{"2": 2, "3": 3, "p": p, "q": next(r for r in dp if r != p)} for p in dp]
    if len(c2) == 2:
        sub, forms = "i", FORMS_FREE_3_FULL
    elif c2:
        sub, forms = "ii", FORMS_FREE_3_PARTIAL
    else:
        sub, forms = "iii", FORMS_FREE_3_PARTIAL
    f = _match_forms(frame, forms, PQ_COLUMNS, ("2", "3"), ("q", "p"), namings)
    return {"branch": f"II.A.b.{sub}.{f}"}


def _match_forms(frame: Frame, forms, columns, comp_syms, gp_syms, namings) -> int:
    h = frame.spec
    for names in namings:
        for a_idx, b_idx in permutations(range(len(frame.labels)), 2):
            c_idx = next(x for x in range(len(frame.labels)) if x not in (a_idx, b_idx))
            for number, (ra, rb) in enumerate(forms, start=1):
                rows = [_pat(ra, columns), _pat(rb, columns)]
                m = match_form(h, [frame.labels[a_idx], frame.labels[b_idx]], rows, names, comp_syms, gp_syms)
                if m is None:
                    continue
                frame.names = dict(names)
                frame.roles = ((a_idx, m.signs[0]), (b_idx, m.signs[1]), (c_idx, 1))
                frame.conjugator = m.conjugator
                frame.form = number
                if m.signs != (1, 1):
                    frame.steps.append(f"inverted roles {[ 'ab'[k] for k in range(2) if m.signs[k] < 0]}")
                if m.conjugator:
                    frame.steps.append(f"conjugated by γ^{m.conjugator}")
                frame.steps.append(f"roles a,b,c = labels {a_idx},{b_idx},{c_idx}; form {number}")
                return number
    raise CanonicalizationError("no (a, b) form matches; the case analysis does not cover this input")


def classify(spec: GroupSpec, genset) -> CaseTag:
    return _analyze(spec, genset).tag


def canonicalize_genset(spec: GroupSpec, genset, case: CaseTag | None = None) -> tuple[GenSet, list[str], Frame]:
    """Canonical generators in role order (Hall coordinates), the transform log and the frame.

    The case is recomputed; passing a tag only asserts it matches.
    """
    analysis = _analyze(spec, genset)
    if case is not None and case != analysis.tag:
        raise CanonicalizationError(f"tag mismatch: {case.label} vs {analysis.tag.label}")
    frame = analysis.frame
    _normalize_third(frame, analysis.tag)
    if not frame.roles:
        return GenSet(frame.labels), list(frame.steps), frame
    return GenSet(tuple(frame.role_elem(r) for r in range(len(frame.roles)))), list(frame.steps), frame


# ---------------------------------------------------------------- third-generator normalization


def _normalize_third(frame: Frame, tag: CaseTag) -> None:
    """Fill frame.coords and flip roles per the case's 'we may assume' rules."""
    if tag.delegation or tag.branch is None or not frame.roles:
        return
    b = tag.branch
    h = frame.spec
    if b.startswith("II.A.a.i.") or b.startswith("II.A.b."):
        _coords_pq(frame)
        if frame.coords["j"] == 2:
            frame.flip(2, "make the 3-exponent of c equal 1")
            _coords_pq(frame)
    elif b.startswith("II.B."):
        _coords_3p(frame)
    elif b.startswith("I.B.1"):
        n = h.n
        a, bb = frame.role_elem(0), frame.role_elem(1)
        m = bb[0] * pow(a[0], -1, n) % n
        q = frame.names["q"]
        if m > q:
            frame.flip(1, "put the exponent m of b̄ = ā^m in 1..q-1")
            m = n - m
        frame.coords["m"] = m
    elif b.startswith("I.A.2"):
        a, bb = frame.role_elem(0), frame.role_elem(1)
        ob = _image_order(6, bb[0])
        frame.coords["b_order"] = ob
        if ob == 6 and bb[0] % 6 != a[0] % 6:
            frame.flip(1, "make b̄ = ā")


def _ratio(x: int, y: int, r: int) -> int:
    return x * pow(y, -1, r) % r if y % r else 0


def _coords_pq(frame: Frame) -> None:
    a, b, c = (frame.role_elem(r) for r in range(3))
    basis3 = frame.comp(a, "3") or frame.comp(b, "3")
    q = frame.names["q"]
    qb = frame.norm(b, "q")
    frame.coords = {
        "i": frame.comp(c, "2"),
        "j": _ratio(frame.comp(c, "3"), basis3, 3) if basis3 else 0,
        "k": _ratio(frame.norm(c, "q"), qb, q) if qb else 0,
        "p_part": frame.norm(c, "p"),
    }


def _coords_3p(frame: Frame) -> None:
    a, b, c = (frame.role_elem(r) for r in range(3))
    q = frame.names["q"]
    basis_q = frame.comp(a, "q") or frame.comp(b, "q")
    basis3 = frame.norm(b, "3") or frame.norm(a, "3")
    frame.coords = {
        "i": frame.comp(c, "2"),
        "j": _ratio(frame.comp(c, "q"), basis_q, q) if basis_q else 0,
        "k": _ratio(frame.norm(c, "3"), basis3, 3) if basis3 else 0,
        "m": _ratio(frame.comp(b, "q"), basis_q, q) if basis_q else 0,
    }


# ---------------------------------------------------------------- candidate cycles


def candidate_cycles(spec: GroupSpec, genset, case: CaseTag | None = None) -> list[Candidate]:
    """Case-specific quotient cycles in the order the case analysis tries them (frame label indices)."""
    _, _, frame = canonicalize_genset(spec, genset, case)
    tag = case or classify(spec, genset)
    return list(_templates(frame, tag))


def _templates(frame: Frame, tag: CaseTag) -> Iterator[Candidate]:
    b = tag.branch or ""
    if tag.delegation or not frame.roles:
        return
    if b.startswith("I.A"):
        yield from _templates_two_pq(frame, b)
    elif b.startswith("I.B"):
        yield from _templates_two_3p(frame, b)
    elif b.startswith("II.A.a.i."):
        yield from _with_sign_variants(_templates_centralized_q(frame))
    elif b.startswith("II.A.a.ii."):
        yield from _templates_minimal_hat(frame, int(b.rsplit(".", 1)[1]))
    elif b.startswith("II.A.b."):
        yield from _with_sign_variants(_templates_free_3(frame))
    elif b.startswith("II.B."):
        yield from _with_sign_variants(_templates_3p(frame))


def _with_sign_variants(cands: Iterator[Candidate]) -> Iterator[Candidate]:
    """Each candidate, then the same word with every nonempty set of labels inverted.

    The normalizations of the case analysis fix signs only up to these choices.
    """
    for cand in cands:
        yield cand
        used = sorted({k for k, _ in cand.word.steps})
        for signs in cartesian((1, -1), repeat=len(used)):
            if all(x > 0 for x in signs):
                continue
            mapping = {k: (k, sg) for k, sg in zip(used, signs)}
            flipped = "".join("-" if sg < 0 else "+" for sg in signs)
            yield Candidate(f"{cand.name} signs {flipped}", cand.word.relabel(mapping), cand.sub_order,
                            cand.method, cand.s, cand.t)


def _commutator_template(r: int) -> WalkWord:
    """(b^(r-1), a, b^-(r-1), a^-1): voltage [b^(r-1), a]."""
    return W(("b", r - 1), "a", ("b", -(r - 1)), ("a", -1))


def _templates_two_pq(frame: Frame, branch: str) -> Iterator[Candidate]:
    h = frame.spec
    d = h.m
    if branch == "I.A.1":
        yield frame.cand("commutator cycle r=3", _commutator_template(3), d)
        return
    ob = frame.coords.get("b_order", _image_order(6, frame.role_elem(1)[0]))
    if ob == 3:
        yield frame.cand("commutator cycle r=3", _commutator_template(3), d)
    elif ob == 6:
        yield frame.cand("(a^5, b)", W(("a", 5), "b"), d)
    elif ob == 2:
        yield frame.cand("C1 = (a^2, b, a^-2, b^-1)", W(("a", 2), "b", ("a", -2), ("b", -1)), d)
        # quotient by the prime where a acts as inversion
        a = frame.role_elem(0)
        tau_a = h.tau_powers[a[0]]
        primes = prime_factors(d)
        minus = [r for r in primes if tau_a % r == r - 1]
        if not minus:
            return
        q = minus[0]
        p = next(r for r in primes if r != q)
        if (q - 3) % 2:
            return
        blocks = (q - 3) // 2
        plain = W(("a", 5), "b", ("a", -5), "b")
        flipped = W(("a", -5), "b", ("a", 5), "b")
        bord = element_order(h, frame.role_elem(1))
        method = "fgl" if bord == 2 else "splice"
        st = {"s": ("b", 1), "t": ("b", -1)} if method == "splice" else {}
        words = [("C2", W(plain * blocks, W(("a", 5), "b") * 3))]
        for t in range(blocks):
            w = W(*([plain] * t + [flipped] + [plain] * (blocks - t - 1)), W(("a", 5), "b") * 3)
            words.append((f"C2 with block {t} flipped", w))
        for name, w in words:
            yield frame.cand(name, w, p, method, **st)


def strip_cycle_words(q: int) -> tuple[WalkWord, WalkWord]:
    block1 = W("a", "b", "a", "b", ("a", -1), "b", "a", "b", ("a", -1), "b", "a", "b")
    c1 = W(block1 * ((q - 5) // 2), "a", "b", ("a", 4), "b", ("a", -3), "b", ("a", -1), "b", ("a", 2), "b",
           ("a", 2), "b", ("a", -1), "b", ("a", -3), "b", ("a", 4), "b")
    block2 = W("a", "b", ("a", -1), "b", "a", "b")
    c2 = W(block2 * (q - 5), ("a", 3), "b", ("a", 2), "b", ("a", -1), "b", ("a", -3), "b", ("a", 3), "b",
           ("a", -3), "b", ("a", -1), "b", ("a", 2), "b", ("a", 3), "b")
    return c1, c2


def grid_cycle_words(q: int) -> tuple[WalkWord, WalkWord]:
    c1 = W(("a", q - 3), ("b", -1), ("a", -(q - 2)), "b", ("a", -1), ("b", -1), "a", "b", ("a", q - 2), ("b", -1),
           ("a", -(q - 3)), "b", ("a", q - 2), ("b", -1), "a", "b", ("a", -1), ("b", -1), ("a", -(q - 2)), "b")
    c2 = W(("a", q - 1), ("b", -1), ("a", -(q - 3)), "b", ("a", -1), ("b", -1), ("a", q - 2), "b", "a", ("b", -1),
           ("a", 2), "b", ("a", q - 4), ("b", -1), ("a", -(q - 5)), "b", ("a", q - 4), ("b", -1), "a", "b", "a",
           ("b", -1), ("a", -1), "b")
    return c1, c2


def _invert_a(w: WalkWord) -> WalkWord:
    return w.relabel({0: (0, -1), 1: (1, 1), 2: (2, 1)})


def _invert_all(w: WalkWord) -> WalkWord:
    return w.relabel({0: (0, -1), 1: (1, -1), 2: (2, -1)})


def _templates_two_3p(frame: Frame, branch: str) -> Iterator[Candidate]:
    h = frame.spec
    d = h.m
    q, p = frame.names["q"], frame.names["p"]
    leaf = branch
    if branch == "I.B.4":
        a = frame.role_elem(0)
        leaf = "I.B.2" if _image_order(h.n, a[0]) == q else "I.B.3"
    if leaf == "I.B.1":
        m = frame.coords.get("m")
        if m is None:
            _normalize_third(frame, CaseTag("2", "3p", "I.B.1"))
            m = frame.coords["m"]
        if m == 1:
            words = [("C1 = (a^(2q-1), b)", W(("a", 2 * q - 1), "b"))]
        elif m == 3:
            words = [("C2 (m = 3)", W(("b", 2), ("a", -1), ("b", -1), ("a", -1), ("b", 3), ("a", -2), "b",
                                      ("a", 2 * q - 11)))]
        else:
            words = [("C (m > 3)", W(("b", -2), ("a", -2), "b", "a", "b", ("a", -(m - 2)), ("b", -1), ("a", m - 4),
                                     ("b", -1), ("a", -(2 * q - 2 * m - 3))))]
        for name, w in words:
            yield frame.cand(name, w, d)
            yield frame.cand(name + " with a, b inverted", _invert_all(w), d)
    elif leaf == "I.B.2":
        bb = frame.role_elem(1)
        if element_order(h, bb) == 2 * p:
            for k, w in enumerate(_quotient_cycle_words(frame, p, limit=4)):
                yield Candidate(f"quotient cycle {k} with b/b^-1 splice", w, p, "splice",
                                frame.roles[1], (frame.roles[1][0], -frame.roles[1][1]))
            return
        yield frame.cand("commutator cycle r=q (a, b swapped)", W(("a", q - 1), "b", ("a", -(q - 1)), ("b", -1)), d)
        a = frame.role_elem(0)
        if element_order(h, a) == 3 * q:
            c1, c2 = grid_cycle_words(q)
            yield frame.cand("grid cycle C1", c1, p)
            yield frame.cand("grid cycle C2", c2, p)
            yield frame.cand("grid cycle C1 with a inverted", _invert_a(c1), p)
            yield frame.cand("grid cycle C2 with a inverted", _invert_a(c2), p)
    elif leaf == "I.B.3":
        c1, c2 = strip_cycle_words(q)
        yield frame.cand("strip cycle C1", c1, p)
        yield frame.cand("strip cycle C2", c2, p)


def _templates_centralized_q(frame: Frame) -> Iterator[Candidate]:
    d = frame.spec.m
    f = frame.form
    i, j, k = frame.coords["i"], frame.coords["j"], frame.coords["k"]
    if f == 3:
        # {a, b} is conjugate to the form-2 pair with the roles exchanged
        a_idx, b_idx = frame.roles[0], frame.roles[1]
        frame.roles = (b_idx, a_idx, frame.roles[2])
        frame.steps.append("form 3 handled as form 2 with a and b exchanged")
        f = 2
        _coords_pq(frame)
        if frame.coords["j"] == 2:
            frame.flip(2, "make the 3-exponent of c equal 1")
            _coords_pq(frame)
        i, j, k = frame.coords["i"], frame.coords["j"], frame.coords["k"]
    if f == 1:
        if i == 0:
            yield frame.cand("C1 = (a, b^2, a, b^-1, c^-1)", W("a", ("b", 2), "a", ("b", -1), ("c", -1)), d)
            yield frame.cand("C2 = (a, b^2, a, c^-2)", W("a", ("b", 2), "a", ("c", -2)), d)
    elif f == 2:
        if i == 0:
            yield frame.cand("C = (b^2, c, b, c^-1, a)", W(("b", 2), "c", "b", ("c", -1), "a"), d)
        elif j == 0:
            yield frame.cand("C = (b^2, c, b^-2, a)", W(("b", 2), "c", ("b", -2), "a"), d)
        else:
            yield frame.cand("C = (c, a, (b, a)^2)", W("c", "a", W("b", "a") * 2), d)
    elif f == 4:
        if i == 0:
            yield frame.cand("C = (c, b, a, b^-2, a^-1)", W("c", "b", "a", ("b", -2), ("a", -1)), d)
    elif f == 5:
        if i == 0:
            yield frame.cand("C = (a, c^2, b^-1, c^-2)", W("a", ("c", 2), ("b", -1), ("c", -2)), d)


def _templates_minimal_hat(frame: Frame, case: int) -> Iterator[Candidate]:
    """S stays minimal modulo C_p; candidates use the quotient by C_p."""
    h = frame.spec
    names = frame.names
    if case == 3:
        names = {**names, "p": names["q"], "q": names["p"]}
        frame.names = names
        frame.steps.append("exchanged p and q")
    p = names["p"]
    quotient, project = quotient_spec(h, p)
    orders = [element_order(quotient, project(g)) for g in frame.labels]
    full = [element_order(h, g) for g in frame.labels]
    twos = [x for x in range(3) if orders[x] == 2]
    if case in (1, 2, 3) and twos:
        a = twos[0]
        if full[a] != 2:
            for k, w in enumerate(_quotient_cycle_words(frame, p, limit=4)):
                yield Candidate(f"quotient cycle {k} with a/a^-1 splice", w, p, "splice", (a, 1), (a, -1))
        if case == 1:
            return
        rest = [x for x in range(3) if x != a]
        q = names["q"]
        for bx, cx in (rest, rest[::-1]):
            for sb, sc in cartesian((1, -1), repeat=2):
                frame.roles = ((a, 1), (bx, sb), (cx, sc))
                l1 = W(W("c", ("b", 2)) * (q - 1), "c", "b")
                l2 = W(W("b", "c", "b") * (q - 1), "b", "c")
                yield frame.cand("C1 = (L1, a, L1^-1, a)", W(l1, "a", l1.inverse(), "a"), p)
                yield frame.cand("C2 = (L2, a, L2^-1, a)", W(l2, "a", l2.inverse(), "a"), p)
    if case == 4:
        d = h.m
        two = [x for x in range(3) if full[x] == 2]
        three = [x for x in range(3) if full[x] == 3]
        if len(two) == 2 and len(three) == 1:
            for a, c in (two, two[::-1]):
                frame.roles = ((a, 1), (three[0], 1), (c, 1))
                for sb in (1, -1):
                    frame.roles = ((a, 1), (three[0], sb), (c, 1))
                    yield frame.cand("C1 = (c^-1, b^-2, a, b^2)", W(("c", -1), ("b", -2), "a", ("b", 2)), d)
        if len(two) == 1 and len(three) == 2:
            for b, c in (three, three[::-1]):
                for sb, sc in cartesian((1, -1), repeat=2):
                    frame.roles = ((two[0], 1), (b, sb), (c, sc))
                    yield frame.cand("C2 = (c^-1, b^-1, a^-1, b^2, a)",
                                     W(("c", -1), ("b", -1), ("a", -1), ("b", 2), "a"), d)


FREE_3_CYCLES = [
    ("C1 = (c, a, b, a^-2, b)", W("c", "a", "b", ("a", -2), "b")),
    ("C2 = (c^2, b, a^-2, b)", W(("c", 2), "b", ("a", -2), "b")),
    ("C = (c^-1, a^2, b, a^-2)", W(("c", -1), ("a", 2), "b", ("a", -2))),
    ("C = (c, b, a, c, a^-1, c)", W("c", "b", "a", "c", ("a", -1), "c")),
    ("C = (c, b, a^2, b, a)", W("c", "b", ("a", 2), "b", "a")),
    ("C = (c, a, b, a^-1, b^2)", W("c", "a", "b", ("a", -1), ("b", 2))),
    ("C = (a^2, b, c, a, c^-1)", W(("a", 2), "b", "c", "a", ("c", -1))),
    ("C = ((a, b)^2, a, c)", W(W("a", "b") * 2, "a", "c")),
    ("C = (a, c, b, a^-2, b)", W("a", "c", "b", ("a", -2), "b")),
]


def _templates_free_3(frame: Frame) -> Iterator[Candidate]:
    d = frame.spec.m
    for name, w in FREE_3_CYCLES:
        yield frame.cand(name, w, d)


def _templates_3p(frame: Frame) -> Iterator[Candidate]:
    d = frame.spec.m
    q = frame.names["q"]
    f = frame.form
    i, j, m = frame.coords["i"], frame.coords["j"], frame.coords["m"]
    if f == 1:
        if m % 2 == 0:
            frame.flip(1, "make m odd")
            _coords_3p(frame)
            m, j = frame.coords["m"], frame.coords["j"]
        if m == 1:
            yield frame.cand("C = (c^(q-1), b, c^-(q-1), a^-1)", W(("c", q - 1), "b", ("c", -(q - 1)), ("a", -1)), d)
        elif j == 2:
            h2 = (m - 1) // 2
            yield frame.cand("C = (b, c^-(m-1)/2, a, c^((m-1)/2), a^(2q-m-1))",
                             W("b", ("c", -h2), "a", ("c", h2), ("a", 2 * q - m - 1)), d)
        else:
            if j % 2:
                frame.flip(2, "make j even")
                _coords_3p(frame)
                j = frame.coords["j"]
            w = W("b", "c", "a", ("c", -1), ("b", -1), ("a", m - 2), "c", ("a", -(j - 3)), "c",
                  ("a", 2 * q - m - j - 2))
            yield frame.cand("C (m ≠ 1, j ≠ 2)", w, d)
            yield frame.cand("C (m ≠ 1, j ≠ 2) with all inverted", _invert_all(w), d)
    elif f == 2:
        if i == 0:
            if j % 2 == 0:
                frame.flip(2, "make j odd")
                _coords_3p(frame)
                j = frame.coords["j"]
            if j != 1:
                yield frame.cand("C (j ≠ 1)", _case38_two_word(q, j), d)
            else:
                yield frame.cand("C1 = ((b, c)^(q-1), b, a)", W(W("b", "c") * (q - 1), "b", "a"), d)
        elif j == 0:
            yield frame.cand("C = (c, a^(q-1), b, a^-(q-1))", W("c", ("a", q - 1), "b", ("a", -(q - 1))), d)
        else:
            if j % 2:
                frame.flip(2, "make j even")
                _coords_3p(frame)
                j = frame.coords["j"]
            if j == q - 1:
                yield frame.cand("C1 = (c, b, (a^-1, b)^(q-1))", W("c", "b", W(("a", -1), "b") * (q - 1)), d)
            else:
                yield frame.cand("C2", W("c", ("a", q - j - 1), "b", ("a", -q + j + 1), W(("a", -1), "b") * j), d)
                yield frame.cand("C3", W("c", ("a", q - j - 2), "b", ("a", -q + j + 2),
                                         W(("a", -1), "b") * (j - 1), ("a", -2), "b", "a"), d)
    elif f == 3:
        if m == j:
            yield frame.cand("C1 = (c^-1, b^-(q-2), a^-1, b^(q-1), a)",
                             W(("c", -1), ("b", -(q - 2)), ("a", -1), ("b", q - 1), "a"), d)


def _case38_two_word(q: int, j: int) -> WalkWord:
    """(c, a^-1, b, a^2, b, c^-1, a^(j-3), b, a^-(q-4), b, a^(q-j-2)); voltage mod C_3 is γ_p^(τ̂^j(1∓τ̂))."""
    return W("c", ("a", -1), "b", ("a", 2), "b", ("c", -1), ("a", j - 3), "b", ("a", -(q - 4)), "b",
             ("a", q - j - 2))


# ---------------------------------------------------------------- generic strategies


def _quotient_cycle_words(frame: Frame, sub_order: int, limit: int, budget: int = 200_000,
                          seed: int = 0) -> list[WalkWord]:
    quotient, project = quotient_spec(frame.spec, sub_order)
    graph = build_graph(quotient, [project(g) for g in frame.labels])
    return [path_to_word(graph, path) for path in sample_hamiltonian_cycles(graph, limit, budget, seed)]


def _generic_candidates(frame: Frame, seed: int, per_quotient: int = 24) -> Iterator[Candidate]:
    h = frame.spec
    d = h.m
    for k, w in enumerate(_quotient_cycle_words(frame, d, per_quotient, seed=seed)):
        yield Candidate(f"abelian-quotient cycle {k}", w, d)
    for r in prime_factors(d):
        words = _quotient_cycle_words(frame, r, per_quotient, seed=seed)
        for k, w in enumerate(words):
            yield Candidate(f"G/C_{r} cycle {k}", w, r)
        quotient, project = quotient_spec(h, r)
        proj = [project(g) for g in frame.labels]
        pairs = []
        for x in range(len(frame.labels)):
            gx = frame.labels[x]
            if proj[x] == inverse(quotient, proj[x]) and element_order(h, gx) > 2:
                pairs.append(((x, 1), (x, -1)))
            for y in range(x + 1, len(frame.labels)):
                for sy in (1, -1):
                    gy = frame.labels[y] if sy > 0 else inverse(h, frame.labels[y])
                    if project(gy) == proj[x]:
                        pairs.append(((x, 1), (y, sy)))
        for s, t in pairs:
            for k, w in enumerate(words):
                if any(step[0] in (s[0], t[0]) for step in w.steps):
                    yield Candidate(f"G/C_{r} cycle {k} spliced {s}->{t}", w, r, "splice", s, t)


def _involution_bridge(frame: Frame, budget: int, seed: int) -> Iterator[Candidate]:
    """(L, a, L^-1, a^-1) for an involution a outside an index-2 subgroup generated by the rest."""
    h = frame.spec
    for x, g in enumerate(frame.labels):
        if element_order(h, g) != 2:
            continue
        rest = [frame.labels[y] for y in range(len(frame.labels)) if y != x]
        if closure_order(h, rest) * 2 != h.order:
            continue
        idx = [y for y in range(len(frame.labels)) if y != x]
        graph = build_subgroup_graph(h, rest)
        stats: dict = {}
        tried = 0
        for end in range(1, graph.size):
            if tried >= 3:
                break
            hv = graph.vertices[end]
            if multiply(h, hv, g) != multiply(h, g, hv):
                continue
            tried += 1
            res = search_hamiltonian(graph, "path", 0, end, budget, seed)
            if not res.found:
                continue
            path = res.word.relabel({k: (idx[k], 1) for k in range(len(idx))})
            word = WalkWord(path.steps + ((x, 1),) + path.inverse().steps + ((x, -1),))
            yield Candidate("(L, a, L^-1, a^-1) over an index-2 subgroup", word, 1, "direct")
            break


# ---------------------------------------------------------------- evaluation


def _evaluate(frame: Frame, cand: Candidate, records: list[CandidateRecord]) -> WalkWord | None:
    h = frame.spec
    labels = frame.labels
    if cand.method == "direct":
        ok = verify_hamiltonian_cycle(h, labels, cand.word)
        records.append(CandidateRecord(cand.name, "direct", 1, None, "verified" if ok else "rejected"))
        return cand.word if ok else None
    quotient, project = quotient_spec(h, cand.sub_order)
    qcheck = verify_hamiltonian_cycle(quotient, [project(g) for g in labels], cand.word)
    if not qcheck:
        records.append(CandidateRecord(cand.name, cand.method, cand.sub_order, None, "not a quotient cycle"))
        return None
    volt = voltage(h, labels, cand.word, cand.sub_order)
    try:
        if cand.method == "fgl":
            if not volt.generates_N:
                records.append(CandidateRecord(cand.name, "fgl", cand.sub_order, volt.order_in_N,
                                               "voltage does not generate N"))
                return None
            word = fgl_lift(h, labels, cand.word, cand.sub_order)
        else:
            word = cor52_lift(h, labels, cand.s, cand.t, cand.sub_order, cand.word)
    except LiftError as exc:
        records.append(CandidateRecord(cand.name, cand.method, cand.sub_order, volt.order_in_N, f"lift failed: {exc}"))
        return None
    ok = verify_hamiltonian_cycle(h, labels, word)
    records.append(CandidateRecord(cand.name, cand.method, cand.sub_order, volt.order_in_N,
                                   "verified" if ok else f"lift rejected: {ok.message}"))
    return word if ok else None


@dataclass
class ConstructOptions:
    allow_fallback: bool = False
    fallback_max_order: int = 2000
    budget: int = 200_000
    seed: int = 0
    generic: bool = True


def construct(spec: GroupSpec, genset, options: ConstructOptions | None = None) -> ConstructionReport:
    opts = options or ConstructOptions()
    t0 = time.perf_counter()
    labels = labels_of(genset)
    analysis = _analyze(spec, genset)
    tag = analysis.tag
    frame = analysis.frame
    _normalize_third(frame, tag)
    report = ConstructionReport(spec, labels, tag)
    records = report.candidates
    word: WalkWord | None = None
    route = None

    def attempt(cands: Iterator[Candidate], how: str) -> bool:
        nonlocal word, route
        for cand in cands:
            got = _evaluate(frame, cand, records)
            if got is not None:
                word, route = got, how
                report.chosen = cand.name
                report.voltage_order = records[-1].voltage_order
                return True
        return False

    in_scope = tag.delegation is None or tag.delegation == "generator-in-commutator"
    if tag.branch == "III.1":
        word = _cartesian_route(frame, opts, records)
        if word is not None:
            route = "cartesian"
            report.chosen = records[-1].name
    elif tag.delegation == "generator-in-commutator":
        word = _snake_route(frame, opts, records)
        if word is not None:
            route = "snake"
            report.chosen = records[-1].name
    elif in_scope:
        attempt(_templates(frame, tag), "template")
    if word is None and in_scope and opts.generic:
        if not attempt(_generic_candidates(frame, opts.seed), "generic"):
            attempt(_involution_bridge(frame, opts.budget // 10, opts.seed), "generic")
    if word is None and opts.allow_fallback and spec.order <= opts.fallback_max_order:
        if tag.delegation and opts.generic and not in_scope:
            attempt(_generic_candidates(frame, opts.seed), "fallback")
        if word is None:
            res = search_hamiltonian(build_graph(frame.spec, frame.labels), "cycle", 0, None, opts.budget, opts.seed)
            records.append(CandidateRecord("oracle search", "search", 1, None, res.status))
            if res.found:
                word, route = res.word, "fallback"
                report.chosen = "oracle search"
    report.steps = list(frame.steps)
    if word is not None:
        # frame label k is original label minimal_indices[k]; the Hall isomorphism keeps words
        final = word.relabel({k: (analysis.minimal_indices[k], 1) for k in range(len(analysis.minimal_indices))})
        t1 = time.perf_counter()
        check = verify_hamiltonian_cycle(spec, labels, final)
        report.verify_ms = (time.perf_counter() - t1) * 1000
        report.verification = "ok" if check else check.message
        if check:
            report.cycle = final
            report.route = route
            report.outcome = "verified"
        else:
            report.outcome = "failed"
    else:
        report.outcome = "delegated" if tag.delegation and tag.delegation != "generator-in-commutator" else "failed"
        report.verification = "no cycle"
    report.wall_ms = (time.perf_counter() - t0) * 1000
    return report


def _snake_route(frame: Frame, opts: ConstructOptions, records: list[CandidateRecord]) -> WalkWord | None:
    h = frame.spec
    red = reduce_generator_in_Gprime(h, frame.labels)
    if red is None:
        return None
    graph = build_graph(red.spec, red.labels)
    if not graph.connected:
        records.append(CandidateRecord("sweep cosets of <s>", "snake", red.subgroup.d, None, "quotient disconnected"))
        return None
    tried = 0
    for path in sample_hamiltonian_cycles(graph, 32, opts.budget, opts.seed):
        tried += 1
        qword = path_to_word(graph, path).relabel({k: (red.label_indices[k], 1) for k in range(len(red.labels))})
        word = snake_lift(h, frame.labels, red.removed, qword)
        if word is not None and verify_hamiltonian_cycle(h, frame.labels, word):
            records.append(CandidateRecord(f"sweep cosets of <s> over quotient cycle {tried - 1}", "snake",
                                           red.subgroup.d, None, "verified"))
            return word
    records.append(CandidateRecord("sweep cosets of <s>", "snake", red.subgroup.d, None, f"no closing sign choice in {tried} cycles"))
    return None


def _cartesian_route(frame: Frame, opts: ConstructOptions, records: list[CandidateRecord]) -> WalkWord | None:
    """Split S into two commuting classes generating complementary subgroups; snake a cycle through a path."""
    h = frame.spec
    labels = frame.labels
    k = len(labels)
    for mask in range(1, 2 ** k - 1):
        left = [x for x in range(k) if mask >> x & 1]
        right = [x for x in range(k) if not mask >> x & 1]
        if 0 not in left:
            continue
        if any(multiply(h, labels[x], labels[y]) != multiply(h, labels[y], labels[x]) for x in left for y in right):
            continue
        oa = closure_order(h, [labels[x] for x in left])
        ob = closure_order(h, [labels[x] for x in right])
        if oa * ob != h.order:
            continue
        ga = build_subgroup_graph(h, [labels[x] for x in left])
        gb = build_subgroup_graph(h, [labels[x] for x in right])
        ra = search_hamiltonian(ga, "cycle", 0, None, opts.budget, opts.seed)
        rb = search_hamiltonian(gb, "cycle", 0, None, opts.budget, opts.seed)
        if not (ra.found and rb.found):
            continue
        wa = ra.word.relabel({i: (left[i], 1) for i in range(len(left))})
        wb = rb.word.relabel({i: (right[i], 1) for i in range(len(right))})
        try:
            word = cartesian_product_hc(h, labels, wa, wb, b_is_cycle=True)
        except NonCommutingFactors:
            continue
        ok = verify_hamiltonian_cycle(h, labels, word)
        records.append(CandidateRecord(f"product of classes {left} and {right}", "cartesian", 1, None,
                                       "verified" if ok else ok.message))
        if ok:
            return word
    records.append(CandidateRecord("product split", "cartesian", 1, None, "no commuting split"))
    return None
