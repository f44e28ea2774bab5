"""Closed-form generation criteria for pairs of canonical elements.

Each criterion names a pair (a, b) built from the canonical generators
a_2, a_3 or a_q (complement or normal part, by shape) and γ_p, with free
exponents i, j, k, m. A criterion applies in a fixed centralizer context and
asserts <a, b> = G whenever its side condition holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .groups import Elem, GroupSpec, canonical_generators, centralizer_config, hall_normalize, power, product, prime_factors


class CriterionError(ValueError):
    pass


@dataclass(frozen=True)
class CriterionForm:
    family: str
    number: int
    first: tuple[tuple[str, str | int], ...]
    """Factors (symbol, exponent) of a; exponent is 1 or a parameter name."""
    second: tuple[tuple[str, str | int], ...]
    condition: Callable[[dict[str, int], dict[str, int]], bool]
    """(params, primes) -> side condition."""
    condition_text: str
    params: tuple[str, ...]

    @property
    def ident(self) -> str:
        return f"{self.family}.{self.number}"


def _f(text: str) -> tuple[tuple[str, str | int], ...]:
    """'2 3^j q^k p' -> ((2,1),(3,j),(q,k),(p,1))."""
    out = []
    for part in text.split():
        sym, _, e = part.partition("^")
        out.append((sym, e if e else 1))
    return tuple(out)


def _always(params, primes) -> bool:
    return True


FORMS: dict[str, CriterionForm] = {}


def _add(family, number, first, second, condition, text, params):
    form = CriterionForm(family, number, _f(first), _f(second), condition, text, params)
    FORMS[form.ident] = form


# C_3 centralizes C_q but C_2 does not (shape pq)
_add("centralized-q", 1, "3 q", "2 3^j q^k p", _always, "none", ("j", "k"))
_add("centralized-q", 2, "2 3", "3^j q^k p", lambda v, r: v["k"] % r["q"] != 0, "k ≢ 0 mod q", ("j", "k"))
_add("centralized-q", 3, "2 3 q", "3^j q^k p", lambda v, r: v["k"] % r["q"] != 0, "k ≢ 0 mod q", ("j", "k"))
_add("centralized-q", 4, "2 3 q", "2 3^j q^k p", lambda v, r: v["k"] % r["q"] != 1, "k ≢ 1 mod q", ("j", "k"))
# C_3 centralizes nothing in G' (shape pq)
_add("free-3", 1, "2 3", "2^i 3^j q^k p", lambda v, r: v["k"] % r["q"] != 0, "k ≢ 0 mod q", ("i", "j", "k"))
_add("free-3", 2, "3 q", "2 3^j p", lambda v, r: v["j"] % 3 != 0, "j ≢ 0 mod 3", ("j",))
_add("free-3", 3, "3", "2 3^j q^k p", lambda v, r: v["k"] % r["q"] != 0, "k ≢ 0 mod q", ("j", "k"))
_add("free-3", 4, "2 3 q", "2^i 3^j p", lambda v, r: v["j"] % 3 != 0, "j ≢ 0 mod 3", ("i", "j"))
# shape 3p: C_q centralizes C_3 but not C_p, C_2 does not centralize C_3
_add("mixed-3p", 1, "2 q", "2^i q^j 3^k p", lambda v, r: v["k"] % 3 != 0, "k ≢ 0 mod 3", ("i", "j", "k"))
_add("mixed-3p", 2, "q 3", "2 q^j 3^k p", _always, "none", ("j", "k"))
_add("mixed-3p", 3, "2^i q^m 3", "2 q^j p", lambda v, r: v["m"] % r["q"] != 0, "m ≢ 0 mod q", ("i", "m", "j"))


@dataclass(frozen=True)
class GenerationCriterionInstance:
    spec: GroupSpec
    """Hall form: the normal part is the commutator subgroup."""
    criterion: str
    params: tuple[tuple[str, int], ...]
    p: int
    q: int

    @property
    def form(self) -> CriterionForm:
        if self.criterion not in FORMS:
            raise CriterionError(f"unknown criterion {self.criterion!r}")
        return FORMS[self.criterion]

    def values(self) -> dict[str, int]:
        return dict(self.params)

    def primes(self) -> dict[str, int]:
        return {"2": 2, "3": 3, "p": self.p, "q": self.q}

    def elements(self) -> tuple[Elem, Elem]:
        gens = canonical_generators(self.spec)
        primes = self.primes()
        vals = self.values()

        def build(factors) -> Elem:
            parts = []
            for sym, e in factors:
                exp = vals[e] if isinstance(e, str) else e
                parts.append(power(self.spec, gens[primes[sym]], exp))
            return product(self.spec, parts)

        form = self.form
        return build(form.first), build(form.second)


def family_context(spec: GroupSpec, family: str) -> dict[str, int] | None:
    """Prime naming {p, q} when `spec` (in Hall form) is in the family's context, else None."""
    if hall_normalize(spec) is not spec:
        return None
    primes_n, primes_m = prime_factors(spec.n), prime_factors(spec.m)
    if len(primes_n) != 2 or len(primes_m) != 2:
        return None
    cfg = centralizer_config(spec)
    if family == "centralized-q":
        if primes_n != [2, 3] or len(cfg.centralized[3]) != 1:
            return None
        q = cfg.centralized[3][0]
        p = next(r for r in primes_m if r != q)
        return None if q in cfg.centralized[2] else {"p": p, "q": q}
    if family == "free-3":
        if primes_n != [2, 3] or cfg.centralized[3]:
            return None
        p, q = primes_m
        return {"p": p, "q": q}
    if family == "mixed-3p":
        if 3 not in primes_m or 2 not in primes_n:
            return None
        q = next(r for r in primes_n if r != 2)
        p = next(r for r in primes_m if r != 3)
        if cfg.centralized[q] != (3,) or 3 in cfg.centralized[2]:
            return None
        return {"p": p, "q": q}
    raise CriterionError(f"unknown family {family!r}")


def make_instance(spec: GroupSpec, criterion: str, **params: int) -> GenerationCriterionInstance:
    form = FORMS.get(criterion)
    if form is None:
        raise CriterionError(f"unknown criterion {criterion!r}")
    names = family_context(spec, form.family)
    if names is None:
        raise CriterionError(f"{spec} is outside the context of {form.family}")
    if set(params) != set(form.params):
        raise CriterionError(f"{criterion} takes parameters {form.params}, got {sorted(params)}")
    ranges = {"i": 2, "j": 3 if "3^j" in _exponent_syms(form) else names["q"], "k": 3 if "3^k" in _exponent_syms(form) else names["q"],
              "m": names["q"]}
    for key, val in params.items():
        if not 0 <= val < ranges[key]:
            raise CriterionError(f"parameter {key}={val} outside 0..{ranges[key] - 1}")
    return GenerationCriterionInstance(spec, criterion, tuple(sorted(params.items())), names["p"], names["q"])


def _exponent_syms(form: CriterionForm) -> set[str]:
    return {f"{sym}^{e}" for sym, e in form.first + form.second if isinstance(e, str)}


def parameter_grid(spec: GroupSpec, criterion: str) -> list[dict[str, int]]:
    """Every valid parameter assignment for the criterion on `spec`."""
    from itertools import product as cartesian
    form = FORMS[criterion]
    names = family_context(spec, form.family)
    if names is None:
        return []
    syms = _exponent_syms(form)
    ranges = []
    for key in form.params:
        if key == "i":
            ranges.append(range(2))
        elif f"3^{key}" in syms:
            ranges.append(range(3))
        else:
            ranges.append(range(names["q"]))
    return [dict(zip(form.params, vals)) for vals in cartesian(*ranges)]


def generation_criterion(instance: GenerationCriterionInstance) -> bool:
    """True when the side condition holds, so the criterion asserts <a, b> = G."""
    form = instance.form
    return bool(form.condition(instance.values(), instance.primes()))
